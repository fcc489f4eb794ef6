#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qpart {

/// Quasiperiodic drive: N angular frequencies with per-component amplitude and
/// initial phase. Phases are stored wrapped into [0, 2*pi).
class QuasiperiodicForcing {
public:
    QuasiperiodicForcing(std::vector<double> frequencies,
                         std::vector<double> amplitudes,
                         std::vector<double> phases);

    int count() const { return static_cast<int>(frequencies_.size()); }
    const std::vector<double>& frequencies() const { return frequencies_; }
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    const std::vector<double>& phases() const { return phases_; }

    /// 2*pi / frequencies[0] — the reference period used for steps-per-period
    /// and horizon-in-periods settings.
    double base_period() const;

    /// 2*pi / min(frequencies) — default checkpoint stride.
    double slowest_period() const;

    /// Scans integer vectors k with 0 < max|k_i| <= k_max for
    /// |sum k_i Omega_i| < eps. Exact rational independence is not decidable in
    /// floating point, so near-hits are reported as warnings, never errors.
    std::vector<std::string> resonance_warnings(int k_max = 5, double eps = 1e-9) const;

private:
    std::vector<double> frequencies_;
    std::vector<double> amplitudes_;
    std::vector<double> phases_;
};

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double theta);

} // namespace qpart

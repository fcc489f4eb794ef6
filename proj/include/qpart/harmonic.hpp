#pragma once

#include <array>

#include "qpart/model.hpp"

namespace qpart {

/// Forced linear oscillator on R^2:
///   dm1/dt = m2
///   dm2/dt = -m1 + sum_i F_i sin(theta_i)
/// Closed-form solution and closed-form time-average of f = m1^2 are available
/// away from the resonant frequencies |Omega_i| = 1.
class HarmonicModel final : public SystemModel {
public:
    explicit HarmonicModel(QuasiperiodicForcing forcing);

    std::string_view name() const override { return "harmonic"; }
    int dim_m() const override { return 2; }
    const QuasiperiodicForcing& forcing() const override { return forcing_; }
    CoordinateTopology topology(int) const override { return CoordinateTopology::line; }

    void rhs(std::span<const double> x, std::span<double> dx) const override;

    bool has_exact_solution() const override { return true; }
    std::vector<double> exact_solution(std::span<const double> ic, double t) const override;

    bool has_exact_average() const override { return true; }
    double exact_average(std::span<const double> ic) const override;

    /// Center of the circular level sets of the m1^2 time-average in the
    /// (m1_0, m2_0) plane at the given initial phases.
    std::array<double, 2> level_set_center(std::span<const double> phases) const;

    /// Response constants C1, C2 for an initial condition (m1_0, m2_0, theta_0...).
    std::array<double, 2> response_constants(std::span<const double> ic) const;

    std::unique_ptr<SystemModel> with_phases(std::span<const double> phases) const override;

private:
    void require_nonresonant() const;

    QuasiperiodicForcing forcing_;
};

} // namespace qpart

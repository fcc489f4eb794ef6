#pragma once

#include "qpart/model.hpp"

namespace qpart {

/// One-dimensional linear decay with quasiperiodic forcing:
///   dm/dt = -lambda m + sum_i F_i sin(theta_i)
/// The time-average of f = m^2 is constant over the whole augmented state
/// space: the transient filters out, leaving a single basin.
class DissipativeModel final : public SystemModel {
public:
    DissipativeModel(double decay_rate, QuasiperiodicForcing forcing);

    std::string_view name() const override { return "dissipative"; }
    int dim_m() const override { return 1; }
    const QuasiperiodicForcing& forcing() const override { return forcing_; }
    CoordinateTopology topology(int) const override { return CoordinateTopology::line; }
    double decay_rate() const { return decay_rate_; }

    void rhs(std::span<const double> x, std::span<double> dx) const override;

    bool has_exact_solution() const override { return true; }
    std::vector<double> exact_solution(std::span<const double> ic, double t) const override;

    bool has_exact_average() const override { return true; }
    /// 1/2 sum_i F_i^2 / (lambda^2 + Omega_i^2), independent of ic.
    double exact_average(std::span<const double> ic) const override;

    std::unique_ptr<SystemModel> with_phases(std::span<const double> phases) const override;

private:
    double decay_rate_;
    QuasiperiodicForcing forcing_;
};

} // namespace qpart

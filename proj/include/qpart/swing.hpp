#pragma once

#include <memory>
#include <vector>

#include "qpart/model.hpp"

namespace qpart {

/// Parameters of the reduced swing model: N_G identical generators on a loop
/// coupled to an infinite bus, with a chosen set of excited loop modes acting
/// as quasiperiodic forcing on the spatial average (delta, omega).
struct SwingParameters {
    double p_m = 0.95;   ///< mechanical input power (per-unit)
    double b = 1.0;      ///< max transmission power to the infinite bus
    double b_int = 100.0;///< max transmission power between loop neighbors
    int generator_count = 20; ///< N_G

    std::vector<int> modes; ///< excited mode indices, each in [1, N_G-1]
    /// Per-mode amplitudes c_j; empty means the equal split
    /// c_j = amplitude_rms / sqrt(|modes|) for every mode.
    std::vector<double> amplitudes;
    double amplitude_rms = 1.5;

    void validate() const;
    std::vector<double> resolved_amplitudes() const;
};

/// Eigenfrequency of loop mode j: 2 sqrt(|b_int|) |sin(pi j / N_G)|.
/// Mode j = N_G is rejected (zero frequency).
double swing_mode_frequency(int j, const SwingParameters& params);

/// Mode shape e_ij = sqrt(2/N_G) cos(2 pi i j / N_G + pi/4) for generator i.
double swing_mode_shape(int i, int j, const SwingParameters& params);

/// Augmented swing system with state (delta, omega, theta_j ...):
///   d delta/dt = omega
///   d omega/dt = p_m - (b/N_G) sum_i sin(sum_j e_ij c_j cos(theta_j) + delta)
///   d theta_j/dt = Omega_j
/// delta lives on the circle; trajectories keep it unwrapped because the
/// Hamiltonian carries the secular term -p_m * delta.
class SwingModel final : public SystemModel {
public:
    /// `initial_mode_phases` are the theta_j0 (defaults to zeros).
    explicit SwingModel(SwingParameters params, std::vector<double> initial_mode_phases = {});
    ~SwingModel() override;

    std::string_view name() const override { return "swing"; }
    int dim_m() const override { return 2; }
    const QuasiperiodicForcing& forcing() const override { return forcing_; }
    CoordinateTopology topology(int m_coordinate) const override {
        return m_coordinate == 0 ? CoordinateTopology::circle : CoordinateTopology::line;
    }
    const SwingParameters& params() const { return params_; }

    void rhs(std::span<const double> x, std::span<double> dx) const override;

    const SplitHamiltonian* hamiltonian() const override;

    /// H(delta, omega, t) with delta unwrapped:
    ///   1/2 omega^2 - p_m delta - (b/N_G) sum_i cos(u_i(t) + delta)
    double hamiltonian_value(double delta_unwrapped, double omega, double t) const;

    std::unique_ptr<SystemModel> with_phases(std::span<const double> phases) const override;

    void precompute_time_samples(std::span<const double> times) const override;
    void clear_time_samples() const;

    /// The four per-time drive sums behind the force evaluation:
    ///   sin_sum  = sum_i sin u_i        cos_sum  = sum_i cos u_i
    ///   dsin_sum = sum_i du_i/dt sin u_i   dcos_sum = sum_i du_i/dt cos u_i
    /// with u_i(t) = sum_j e_ij c_j cos(Omega_j t + theta_j0). Exposed for the
    /// cache-consistency test.
    struct DriveSums {
        double sin_sum, cos_sum, dsin_sum, dcos_sum;
    };
    DriveSums drive_sums(double t) const;
    DriveSums drive_sums_from_phases(std::span<const double> mode_phases) const;

private:
    class Potential;

    SwingParameters params_;
    QuasiperiodicForcing forcing_;
    std::vector<double> coupling_; // e_ij * c_j, generator-major [i * |J| + j]
    std::unique_ptr<Potential> potential_;

    // read-only after precompute_time_samples(); sorted by time
    mutable std::vector<double> cache_times_;
    mutable std::vector<DriveSums> cache_sums_;
};

} // namespace qpart

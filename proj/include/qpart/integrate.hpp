#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qpart/averaging.hpp"
#include "qpart/model.hpp"

namespace qpart {

enum class Scheme { rk4, symplectic4 };

struct IntegratorConfig {
    Scheme scheme = Scheme::rk4;
    double step = 1e-2;         ///< h
    double horizon = 1.0;       ///< T_ex
    long checkpoint_stride = 0; ///< steps between checkpoints; 0 = one slowest forcing period

    void validate() const;
    long step_count() const; ///< round(horizon / step), >= 1
};

/// Triple-jump composition weights (w1, w0, w1). They satisfy the order
/// conditions w0 + 2 w1 = 1 and w0^3 + 2 w1^3 = 0.
inline constexpr double kSymplectic4W1 = 1.3512071919596578;
inline constexpr double kSymplectic4W0 = -1.7024143839193155;

/// One classical 4th-order Runge-Kutta step of the model's augmented field.
std::vector<double> rk4_step(const SystemModel& model, std::span<const double> state, double h);

/// Reusable RK4 stepper with preallocated stage buffers.
class Rk4Stepper {
public:
    explicit Rk4Stepper(const SystemModel& model);
    void step(std::span<double> x, double h);

private:
    const SystemModel& model_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

/// Time-dependent H(q, p, t) promoted to the autonomous
/// Hbar(q0, p0, q, p) = p0 + H(q, p, q0) with dq0/dt = 1 and p0 absorbing
/// -dH/dt. State layout: (q..., p..., q0, p0).
class AugmentedHamiltonianSystem {
public:
    /// Throws ValidationError when the model exposes no split Hamiltonian.
    explicit AugmentedHamiltonianSystem(const SystemModel& model);

    const SystemModel& model() const { return *model_; }
    const SplitHamiltonian& split() const { return *split_; }
    int dof() const { return split_->dof(); }
    int state_dim() const { return 2 * dof() + 2; }

    double hbar(std::span<const double> xs) const;

    /// Builds (q, p, q0 = t0, p0 = -H(q, p, t0)) from an m-part initial
    /// condition, so Hbar == 0 along the exact flow.
    std::vector<double> initial_state(std::span<const double> m_ic, double t0 = 0.0) const;

    /// Maps the augmented state to the model's (m..., theta...) layout with
    /// theta_i = Omega_i q0 + theta_i0 wrapped into [0, 2 pi).
    void model_view(std::span<const double> xs, std::span<double> out) const;

private:
    const SystemModel* model_;
    const SplitHamiltonian* split_;
};

/// One composition step of three leapfrog sub-steps with weights
/// (w1, w0, w1). The time coordinate q0 follows its exact flow: stage times
/// are computed as q0_in + c*h with c in {w1, w1 + w0, 1}.
std::vector<double> symplectic4_step(const AugmentedHamiltonianSystem& system,
                                     std::span<const double> state, double h);

class Symplectic4Stepper {
public:
    explicit Symplectic4Stepper(const AugmentedHamiltonianSystem& system);
    void step(std::span<double> xs, double h);

private:
    const AugmentedHamiltonianSystem& system_;
    std::vector<double> grad_;
};

/// All times at which symplectic4 evaluates the potential when stepping
/// n_steps from t0 with step h. Feed to SystemModel::precompute_time_samples.
std::vector<double> symplectic4_sample_times(double t0, double h, long n_steps);

struct EscapeEvent {
    EscapeCause cause = EscapeCause::none;
    double time = 0.0;
    long step = 0;
};

struct TrajectoryResult {
    /// Terminal state in (m..., theta...) layout; circle coordinates wrapped.
    std::vector<double> final_state;
    long steps_completed = 0;
    std::optional<EscapeEvent> escape;
    /// One accumulator per observable, in input order.
    std::vector<AverageAccumulator> averages;
    /// Winding counts for circle-topology m-coordinates (0 for line coords).
    std::vector<long> windings;

    bool escaped() const { return escape.has_value(); }
};

/// Fixed-step driver: integrates from t = 0 to the horizon, feeding every
/// observable's accumulator once per step and applying the escape predicate
/// (when given) to each sample. Stops early on escape or on a non-finite
/// state, recording the cause and step index.
TrajectoryResult integrate(const SystemModel& model, std::span<const double> ic,
                           const IntegratorConfig& config,
                           std::span<const Observable> observables,
                           const EscapePredicate* escape = nullptr);

} // namespace qpart

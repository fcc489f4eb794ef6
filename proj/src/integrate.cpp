#include "qpart/integrate.hpp"

#include <cmath>
#include <numbers>

#include "qpart/errors.hpp"

namespace qpart {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double kStageWeight[3] = {kSymplectic4W1, kSymplectic4W0, kSymplectic4W1};
constexpr double kStageEntry[3] = {0.0, kSymplectic4W1, kSymplectic4W1 + kSymplectic4W0};
constexpr double kStageExit[3] = {kSymplectic4W1, kSymplectic4W1 + kSymplectic4W0, 1.0};

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ValidationError("integrator: step must be positive and finite");
    }
    if (!(horizon >= step) || !std::isfinite(horizon)) {
        throw ValidationError("integrator: horizon must be >= step");
    }
    if (checkpoint_stride < 0) {
        throw ValidationError("integrator: checkpoint stride must be >= 0");
    }
}

long IntegratorConfig::step_count() const {
    const long n = std::lround(horizon / step);
    return n < 1 ? 1 : n;
}

Rk4Stepper::Rk4Stepper(const SystemModel& model)
    : model_(model),
      k1_(model.dim()),
      k2_(model.dim()),
      k3_(model.dim()),
      k4_(model.dim()),
      tmp_(model.dim()) {}

void Rk4Stepper::step(std::span<double> x, double h) {
    const std::size_t n = x.size();
    model_.rhs(x, k1_);
    for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = x[i] + 0.5 * h * k1_[i];
    }
    model_.rhs(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = x[i] + 0.5 * h * k2_[i];
    }
    model_.rhs(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = x[i] + h * k3_[i];
    }
    model_.rhs(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
}

std::vector<double> rk4_step(const SystemModel& model, std::span<const double> state, double h) {
    if (!(h > 0.0)) {
        throw ValidationError("rk4_step: step must be positive");
    }
    std::vector<double> x(state.begin(), state.end());
    Rk4Stepper stepper(model);
    stepper.step(x, h);
    return x;
}

AugmentedHamiltonianSystem::AugmentedHamiltonianSystem(const SystemModel& model)
    : model_(&model), split_(model.hamiltonian()) {
    if (split_ == nullptr) {
        throw ValidationError(std::string(model.name()) +
                              ": symplectic integration needs a Hamiltonian with a "
                              "kinetic/potential splitting");
    }
    if (model.dim_m() != 2 * split_->dof()) {
        throw ValidationError("augmented system: dim_m must equal 2 * dof");
    }
}

double AugmentedHamiltonianSystem::hbar(std::span<const double> xs) const {
    const int d = dof();
    return xs[2 * d + 1] + split_->value(xs.first(d), xs.subspan(d, d), xs[2 * d]);
}

std::vector<double> AugmentedHamiltonianSystem::initial_state(std::span<const double> m_ic,
                                                              double t0) const {
    const int d = dof();
    std::vector<double> xs(2 * d + 2);
    for (int i = 0; i < 2 * d; ++i) {
        xs[i] = m_ic[i];
    }
    xs[2 * d] = t0;
    const std::span<const double> s(xs);
    xs[2 * d + 1] = -split_->value(s.first(d), s.subspan(d, d), t0);
    return xs;
}

void AugmentedHamiltonianSystem::model_view(std::span<const double> xs,
                                            std::span<double> out) const {
    const int d = dof();
    for (int i = 0; i < 2 * d; ++i) {
        out[i] = xs[i];
    }
    const auto& forcing = model_->forcing();
    const double t = xs[2 * d];
    for (int i = 0; i < forcing.count(); ++i) {
        out[2 * d + i] = wrap_angle(forcing.frequencies()[i] * t + forcing.phases()[i]);
    }
}

Symplectic4Stepper::Symplectic4Stepper(const AugmentedHamiltonianSystem& system)
    : system_(system), grad_(system.dof()) {}

void Symplectic4Stepper::step(std::span<double> xs, double h) {
    const int d = system_.dof();
    const SplitHamiltonian& split = system_.split();
    auto q = xs.first(d);
    auto p = xs.subspan(d, d);
    double& q0 = xs[2 * d];
    double& p0 = xs[2 * d + 1];
    const double base = q0;

    auto kick = [&](double t, double w) {
        split.potential_gradient(q, t, grad_);
        for (int i = 0; i < d; ++i) {
            p[i] -= w * grad_[i];
        }
        p0 -= w * split.potential_time_derivative(q, t);
    };

    for (int stage = 0; stage < 3; ++stage) {
        const double s = kStageWeight[stage] * h;
        kick(base + kStageEntry[stage] * h, 0.5 * s);
        split.kinetic_gradient(p, grad_);
        for (int i = 0; i < d; ++i) {
            q[i] += s * grad_[i];
        }
        // the time coordinate follows its exact flow
        q0 = base + kStageExit[stage] * h;
        kick(q0, 0.5 * s);
    }
}

std::vector<double> symplectic4_step(const AugmentedHamiltonianSystem& system,
                                     std::span<const double> state, double h) {
    if (!(h != 0.0) || !std::isfinite(h)) {
        throw ValidationError("symplectic4_step: step must be nonzero and finite");
    }
    std::vector<double> xs(state.begin(), state.end());
    Symplectic4Stepper stepper(system);
    stepper.step(xs, h);
    return xs;
}

std::vector<double> symplectic4_sample_times(double t0, double h, long n_steps) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(n_steps) * 4 + 1);
    for (long n = 0; n < n_steps; ++n) {
        const double base = t0 + static_cast<double>(n) * h;
        times.push_back(base);
        times.push_back(base + kStageExit[0] * h);
        times.push_back(base + kStageExit[1] * h);
        times.push_back(base + h);
    }
    times.push_back(t0 + static_cast<double>(n_steps) * h);
    return times;
}

TrajectoryResult integrate(const SystemModel& model, std::span<const double> ic,
                           const IntegratorConfig& config,
                           std::span<const Observable> observables,
                           const EscapePredicate* escape) {
    config.validate();
    const int dim = model.dim();
    const int dim_m = model.dim_m();
    const int n_forcing = model.forcing().count();
    if (static_cast<int>(ic.size()) != dim) {
        throw ValidationError("integrate: initial condition has wrong dimension");
    }
    const double h = config.step;
    const long n_steps = config.step_count();
    long stride = config.checkpoint_stride;
    if (stride == 0) {
        stride = std::max<long>(1, std::lround(model.forcing().slowest_period() / h));
    }

    const bool symplectic = config.scheme == Scheme::symplectic4;
    std::optional<AugmentedHamiltonianSystem> augmented;
    std::optional<Symplectic4Stepper> sym_stepper;
    std::optional<Rk4Stepper> rk4_stepper;
    std::vector<double> xs;
    if (symplectic) {
        augmented.emplace(model);
        for (int i = 0; i < n_forcing; ++i) {
            if (wrap_angle(ic[dim_m + i]) != model.forcing().phases()[i]) {
                throw ValidationError("integrate: symplectic path requires the initial phases "
                                      "to match the model's forcing phases");
            }
        }
        xs = augmented->initial_state(ic.first(dim_m), 0.0);
        sym_stepper.emplace(*augmented);
    } else {
        xs.assign(ic.begin(), ic.end());
        rk4_stepper.emplace(model);
    }

    std::vector<double> view(ic.begin(), ic.end());
    std::optional<EscapeMonitor> monitor;
    if (escape != nullptr) {
        if (escape->coordinate >= dim) {
            throw ValidationError("escape: coordinate index outside the state");
        }
        monitor.emplace(*escape);
    }

    TrajectoryResult result;
    result.averages.reserve(observables.size());
    for (const auto& obs : observables) {
        result.averages.emplace_back(h, stride, obs.evaluate(view));
    }

    long n = 0;
    while (n < n_steps && !result.escape) {
        if (symplectic) {
            sym_stepper->step(xs, h);
        } else {
            rk4_stepper->step(xs, h);
        }
        ++n;
        const double t = static_cast<double>(n) * h;
        if (symplectic) {
            xs[2 * augmented->dof()] = t; // pin q0 = n h, its exact flow
            augmented->model_view(xs, view);
        } else {
            std::copy(xs.begin(), xs.end(), view.begin());
        }

        if (!all_finite(xs)) {
            result.escape = EscapeEvent{EscapeCause::non_finite, t, n};
            for (auto& acc : result.averages) {
                acc.mark_escaped(EscapeCause::non_finite, t);
            }
            break;
        }
        for (std::size_t j = 0; j < observables.size(); ++j) {
            auto& acc = result.averages[j];
            if (acc.status() == AccumulatorStatus::converging) {
                acc.accumulate(observables[j].evaluate(view));
                if (acc.status() == AccumulatorStatus::escaped) {
                    result.escape = EscapeEvent{EscapeCause::non_finite, t, n};
                }
            }
        }
        if (result.escape) {
            for (auto& acc : result.averages) {
                if (acc.status() == AccumulatorStatus::converging) {
                    acc.mark_escaped(EscapeCause::non_finite, t);
                }
            }
            break;
        }
        if (monitor && monitor->update(view)) {
            result.escape = EscapeEvent{EscapeCause::threshold, t, n};
            for (auto& acc : result.averages) {
                acc.mark_escaped(EscapeCause::threshold, t);
            }
            break;
        }
    }

    result.steps_completed = n;
    result.windings.assign(dim_m, 0);
    result.final_state = view;
    for (int c = 0; c < dim_m; ++c) {
        if (model.topology(c) == CoordinateTopology::circle && std::isfinite(view[c])) {
            const double windings = std::floor(view[c] / kTwoPi);
            result.windings[c] = static_cast<long>(windings);
            result.final_state[c] = view[c] - kTwoPi * windings;
        }
    }
    for (int i = 0; i < n_forcing; ++i) {
        if (std::isfinite(view[dim_m + i])) {
            result.final_state[dim_m + i] = wrap_angle(view[dim_m + i]);
        }
    }
    return result;
}

} // namespace qpart

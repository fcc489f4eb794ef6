#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qpart/errors.hpp"
#include "qpart/dissipative.hpp"
#include "qpart/harmonic.hpp"
#include "qpart/integrate.hpp"
#include "qpart/swing.hpp"

using namespace qpart;

namespace {

constexpr double kPi = std::numbers::pi;

/// dm/dt = c m^2 + a, with a dummy unit-frequency drive coordinate.
class ToyModel final : public SystemModel {
public:
    ToyModel(double quad, double constant)
        : quad_(quad), constant_(constant), forcing_({1.0}, {0.0}, {0.0}) {}

    std::string_view name() const override { return "toy"; }
    int dim_m() const override { return 1; }
    const QuasiperiodicForcing& forcing() const override { return forcing_; }
    CoordinateTopology topology(int) const override { return CoordinateTopology::line; }
    void rhs(std::span<const double> x, std::span<double> dx) const override {
        dx[0] = quad_ * x[0] * x[0] + constant_;
        dx[1] = 1.0;
    }

private:
    double quad_;
    double constant_;
    QuasiperiodicForcing forcing_;
};

/// dm/dt = -m
class DecayModel final : public SystemModel {
public:
    DecayModel() : forcing_({1.0}, {0.0}, {0.0}) {}
    std::string_view name() const override { return "decay"; }
    int dim_m() const override { return 1; }
    const QuasiperiodicForcing& forcing() const override { return forcing_; }
    CoordinateTopology topology(int) const override { return CoordinateTopology::line; }
    void rhs(std::span<const double> x, std::span<double> dx) const override {
        dx[0] = -x[0];
        dx[1] = 1.0;
    }

private:
    QuasiperiodicForcing forcing_;
};

class FreeSplit final : public SplitHamiltonian {
public:
    int dof() const override { return 1; }
    double kinetic(std::span<const double> p) const override { return 0.5 * p[0] * p[0]; }
    void kinetic_gradient(std::span<const double> p, std::span<double> out) const override {
        out[0] = p[0];
    }
    double potential(std::span<const double>, double) const override { return 0.0; }
    void potential_gradient(std::span<const double>, double, std::span<double> out) const override {
        out[0] = 0.0;
    }
    double potential_time_derivative(std::span<const double>, double) const override {
        return 0.0;
    }
};

class FreeParticleModel final : public SystemModel {
public:
    FreeParticleModel() : forcing_({1.0}, {0.0}, {0.0}) {}
    std::string_view name() const override { return "free"; }
    int dim_m() const override { return 2; }
    const QuasiperiodicForcing& forcing() const override { return forcing_; }
    CoordinateTopology topology(int) const override { return CoordinateTopology::line; }
    void rhs(std::span<const double> x, std::span<double> dx) const override {
        dx[0] = x[1];
        dx[1] = 0.0;
        dx[2] = 1.0;
    }
    const SplitHamiltonian* hamiltonian() const override { return &split_; }

private:
    QuasiperiodicForcing forcing_;
    FreeSplit split_;
};

SwingModel unforced_swing() {
    SwingParameters p;
    p.modes = {1};
    p.amplitude_rms = 0.0;
    return SwingModel(p);
}

SwingModel forced_swing() {
    SwingParameters p;
    p.modes = {1};
    return SwingModel(p);
}

} // namespace

TEST_SUITE("integrators") {

TEST_CASE("integrator config validation") {
    IntegratorConfig c{Scheme::rk4, 0.1, 1.0, 0};
    c.validate();
    CHECK(c.step_count() == 10);
    c.step = -0.1;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.step = 0.5;
    c.horizon = 0.25; // T_ex < h
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.horizon = 0.5;
    c.validate();
    CHECK(c.step_count() == 1);
}

TEST_CASE("rk4 step") {
    SUBCASE("zero field leaves the m-part unchanged") {
        const ToyModel still(0.0, 0.0);
        const double x[2] = {1.25, 0.0};
        const auto y = rk4_step(still, x, 0.3);
        CHECK(y[0] == 1.25);
        CHECK(y[1] == doctest::Approx(0.3));
    }
    SUBCASE("exponential decay reproduces the tableau value") {
        const DecayModel decay;
        const double x[2] = {1.0, 0.0};
        const auto y = rk4_step(decay, x, 0.1);
        CHECK(y[0] == doctest::Approx(0.9048375).epsilon(1e-12));
    }
    SUBCASE("invalid step") {
        const DecayModel decay;
        const double x[2] = {1.0, 0.0};
        CHECK_THROWS_AS(rk4_step(decay, x, 0.0), ValidationError);
    }
}

TEST_CASE("composition coefficients satisfy the order conditions") {
    const double w1 = kSymplectic4W1;
    const double w0 = kSymplectic4W0;
    CHECK(std::abs(w0 + 2.0 * w1 - 1.0) < 1e-15);
    CHECK(std::abs(w0 * w0 * w0 + 2.0 * w1 * w1 * w1) < 1e-15);
}

TEST_CASE("augmented system construction") {
    SUBCASE("missing splitting is rejected") {
        const HarmonicModel harmonic(QuasiperiodicForcing({kPi / 3.0}, {0.2}, {0.0}));
        CHECK_THROWS_AS(AugmentedHamiltonianSystem{harmonic}, ValidationError);
    }
    SUBCASE("hbar is the definitional sum, and p0 = -H makes it vanish") {
        const auto model = forced_swing();
        const AugmentedHamiltonianSystem aug(model);
        const double ic[2] = {1.3, 0.1};
        const auto xs = aug.initial_state(ic, 0.0);
        CHECK(xs[2] == 0.0);
        CHECK(aug.hbar(xs) == 0.0); // p0 + H with p0 = -H, bitwise
        // with p0 zeroed, hbar equals the model Hamiltonian bitwise
        auto flat = xs;
        flat[3] = 0.0;
        CHECK(aug.hbar(flat) == model.hamiltonian_value(1.3, 0.1, 0.0));
    }
}

TEST_CASE("symplectic4 stepping") {
    SUBCASE("free particle drift is exact for any step") {
        const FreeParticleModel model;
        const AugmentedHamiltonianSystem aug(model);
        double xs[4] = {0.5, -0.75, 0.0, 0.0};
        Symplectic4Stepper stepper(aug);
        std::span<double> view(xs);
        for (int n = 0; n < 100; ++n) {
            stepper.step(view, 0.37);
        }
        CHECK(xs[0] == doctest::Approx(0.5 - 0.75 * 37.0).epsilon(1e-13));
        CHECK(xs[1] == -0.75);
    }
    SUBCASE("time-independent potential keeps p0 bitwise constant") {
        const auto model = unforced_swing();
        const AugmentedHamiltonianSystem aug(model);
        const double ic[2] = {1.5, 0.05};
        auto xs = aug.initial_state(ic, 0.0);
        const double p0 = xs[3];
        Symplectic4Stepper stepper(aug);
        for (int n = 0; n < 1000; ++n) {
            stepper.step(xs, 0.05);
        }
        CHECK(xs[3] == p0);
    }
    SUBCASE("q0 exits at entry + h and pins to k h under the driver convention") {
        const auto model = forced_swing();
        const AugmentedHamiltonianSystem aug(model);
        const double ic[2] = {1.3, 0.0};
        auto xs = aug.initial_state(ic, 0.0);
        Symplectic4Stepper stepper(aug);
        const double h = model.forcing().base_period() / 16.0;
        for (long n = 1; n <= 500; ++n) {
            const double entry = xs[2];
            stepper.step(xs, h);
            CHECK(xs[2] == entry + h);
            xs[2] = static_cast<double>(n) * h;
        }
        CHECK(xs[2] == 500.0 * h);
    }
    SUBCASE("matches an independently coded composition on the unforced pendulum") {
        const auto model = unforced_swing();
        const AugmentedHamiltonianSystem aug(model);
        const double ic[2] = {1.5, 0.05};
        auto xs = aug.initial_state(ic, 0.0);
        Symplectic4Stepper stepper(aug);
        const double h = 0.02;
        const int steps = 200;
        for (int n = 0; n < steps; ++n) {
            stepper.step(xs, h);
        }
        // reference: plain leapfrog triple jump on (delta, omega),
        // force = p_m - b sin(delta)
        double q = 1.5;
        double p = 0.05;
        const double w[3] = {kSymplectic4W1, kSymplectic4W0, kSymplectic4W1};
        for (int n = 0; n < steps; ++n) {
            for (int stage = 0; stage < 3; ++stage) {
                const double s = w[stage] * h;
                p -= 0.5 * s * (-(0.95) + std::sin(q));
                q += s * p;
                p -= 0.5 * s * (-(0.95) + std::sin(q));
            }
        }
        CHECK(xs[0] == doctest::Approx(q).epsilon(1e-12));
        CHECK(xs[1] == doctest::Approx(p).epsilon(1e-12));
    }
    SUBCASE("no secular energy drift on the unforced pendulum over many steps") {
        const auto model = unforced_swing();
        const AugmentedHamiltonianSystem aug(model);
        const double ic[2] = {1.5, 0.05};
        auto xs = aug.initial_state(ic, 0.0);
        Symplectic4Stepper stepper(aug);
        const double h = 0.05;
        const long steps = 200000;
        double max_first = 0.0;
        double max_second = 0.0;
        for (long n = 0; n < steps; ++n) {
            stepper.step(xs, h);
            const double err = std::abs(aug.hbar(xs));
            (n < steps / 2 ? max_first : max_second) = std::max(
                n < steps / 2 ? max_first : max_second, err);
        }
        CHECK(max_second < 2.0 * max_first); // bounded, not growing
        CHECK(max_first < 1e-6);
    }
    SUBCASE("time reversibility") {
        const auto model = unforced_swing();
        const AugmentedHamiltonianSystem aug(model);
        const double ic[2] = {1.5, 0.05};
        auto xs = aug.initial_state(ic, 0.0);
        const auto start = xs;
        Symplectic4Stepper stepper(aug);
        for (int n = 0; n < 1000; ++n) {
            stepper.step(xs, 0.01);
        }
        for (int n = 0; n < 1000; ++n) {
            stepper.step(xs, -0.01);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK(std::abs(xs[i] - start[i]) < 1e-10);
        }
    }
}

TEST_CASE("numerical trajectories track the closed forms over 10 forcing periods") {
    SUBCASE("harmonic") {
        const HarmonicModel model(
            QuasiperiodicForcing({kPi / 3.0, 1.1}, {0.2, 0.2}, {0.4, 1.9}));
        const double ic[4] = {1.0, -0.5, 0.4, 1.9};
        const double horizon = 10.0 * model.forcing().base_period();
        IntegratorConfig config{Scheme::rk4, 1e-3, horizon, 0};
        const auto result = integrate(model, ic, config, {});
        const auto exact =
            model.exact_solution(ic, static_cast<double>(result.steps_completed) * config.step);
        double err = 0.0;
        for (int c = 0; c < 2; ++c) {
            err = std::max(err, std::abs(result.final_state[c] - exact[c]));
        }
        CHECK(err < 1e-6);
    }
    SUBCASE("dissipative") {
        const DissipativeModel model(1.0, QuasiperiodicForcing({std::sqrt(2.0)}, {1.0}, {0.7}));
        const double ic[2] = {2.0, 0.7};
        const double horizon = 10.0 * model.forcing().base_period();
        IntegratorConfig config{Scheme::rk4, 1e-3, horizon, 0};
        const auto result = integrate(model, ic, config, {});
        const auto exact =
            model.exact_solution(ic, static_cast<double>(result.steps_completed) * config.step);
        CHECK(std::abs(result.final_state[0] - exact[0]) < 1e-6);
    }
}

TEST_CASE("integrate driver") {
    SUBCASE("horizon equal to the step takes exactly one step") {
        const DecayModel decay;
        const double ic[2] = {1.0, 0.0};
        IntegratorConfig config{Scheme::rk4, 0.1, 0.1, 1};
        const auto result = integrate(decay, ic, config, {});
        CHECK(result.steps_completed == 1);
        CHECK(!result.escaped());
        CHECK(result.final_state[0] == doctest::Approx(0.9048375).epsilon(1e-12));
    }
    SUBCASE("bounded dissipative trajectory never escapes") {
        const DissipativeModel model(1.0, QuasiperiodicForcing({std::sqrt(2.0)}, {1.0}, {0.0}));
        const double ic[2] = {5.0, 0.0};
        IntegratorConfig config{Scheme::rk4, 0.05, 500.0, 0};
        const EscapePredicate escape{0, 10.0, 10};
        const Observable obs[1] = {make_builtin_observable("m_squared")};
        const auto result = integrate(model, ic, config, obs, &escape);
        CHECK(!result.escaped());
        CHECK(result.steps_completed == config.step_count());
    }
    SUBCASE("swing trajectory above the separatrix escapes before the horizon") {
        const auto model = forced_swing();
        const double ic[3] = {1.5, 0.5, 0.0};
        const double period = model.forcing().base_period();
        IntegratorConfig config{Scheme::symplectic4, period / 16.0, period * 50.0, 0};
        const EscapePredicate escape{1, 0.5, 10};
        const auto result = integrate(model, ic, config, {}, &escape);
        REQUIRE(result.escaped());
        CHECK(result.escape->cause == EscapeCause::threshold);
        CHECK(result.steps_completed < config.step_count());
    }
    SUBCASE("unforced swing inside the separatrix never escapes over 2000 periods") {
        const auto model = unforced_swing();
        const double ic[3] = {std::asin(0.95), 0.1, 0.0};
        const double period = model.forcing().base_period();
        IntegratorConfig config{Scheme::symplectic4, period / 16.0, period * 2000.0, 0};
        const EscapePredicate escape{1, 0.5, 10};
        const auto result = integrate(model, ic, config, {}, &escape);
        CHECK(!result.escaped());
    }
    SUBCASE("non-finite blow-up is recorded with its step index") {
        const ToyModel blowup(1.0, 0.0); // dm/dt = m^2, finite-time singularity
        const double ic[2] = {1.0, 0.0};
        IntegratorConfig config{Scheme::rk4, 0.5, 50.0, 1};
        const Observable obs[1] = {make_builtin_observable("m_squared")};
        const auto result = integrate(blowup, ic, config, obs);
        REQUIRE(result.escaped());
        CHECK(result.escape->cause == EscapeCause::non_finite);
        CHECK(result.escape->step > 0);
        CHECK(result.escape->step < config.step_count());
        CHECK(result.averages[0].status() == AccumulatorStatus::escaped);
    }
    SUBCASE("symplectic path rejects mismatched initial phases") {
        const auto model = forced_swing();
        const double ic[3] = {1.3, 0.0, 1.0}; // theta != model phase 0
        const double period = model.forcing().base_period();
        IntegratorConfig config{Scheme::symplectic4, period / 16.0, period, 0};
        CHECK_THROWS_AS(integrate(model, ic, config, {}), ValidationError);
    }
    SUBCASE("circle coordinates wrap with winding counts") {
        // rotating pendulum: run from above the separatrix without escape
        const auto model = unforced_swing();
        const double ic[3] = {0.0, 0.8, 0.0};
        IntegratorConfig config{Scheme::symplectic4, 0.01, 50.0, 0};
        const auto result = integrate(model, ic, config, {});
        CHECK(result.final_state[0] >= 0.0);
        CHECK(result.final_state[0] < 2.0 * kPi);
        CHECK(result.windings[0] > 0); // p_m > 0 drives delta forward
    }
    SUBCASE("identical inputs give bitwise identical trajectories") {
        const auto model = forced_swing();
        const double ic[3] = {1.4, 0.05, 0.0};
        const double period = model.forcing().base_period();
        IntegratorConfig config{Scheme::symplectic4, period / 16.0, period * 20.0, 0};
        const Observable obs[1] = {make_builtin_observable("sin_2delta")};
        const auto a = integrate(model, ic, config, obs);
        const auto b = integrate(model, ic, config, obs);
        CHECK(a.final_state == b.final_state);
        CHECK(a.averages[0].partial_average() == b.averages[0].partial_average());
    }
}

} // TEST_SUITE

#include "qpart/verify.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "qpart/dissipative.hpp"
#include "qpart/harmonic.hpp"
#include "qpart/integrate.hpp"
#include "qpart/swing.hpp"

namespace qpart {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Deterministic uniform doubles in [0, 1) from the raw engine output; avoids
/// the implementation-defined std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

void parallel_over(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(hw, count));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                body(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

std::string format_g(double x) {
    std::ostringstream ss;
    ss.precision(4);
    ss << x;
    return ss.str();
}

CheckResult make_check(std::string name, double measured, double tolerance, std::string detail) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.tolerance = tolerance;
    r.pass = measured <= tolerance;
    r.detail = std::move(detail);
    return r;
}

CheckResult make_range_check(std::string name, double measured, double lo, double hi,
                             std::string detail) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.tolerance = hi;
    r.pass = measured >= lo && measured <= hi;
    r.detail = std::move(detail) + " (expected in [" + format_g(lo) + ", " + format_g(hi) + "])";
    return r;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b, std::size_t count) {
    double m = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

std::vector<CheckResult> verify_dissipative() {
    const DissipativeModel model(1.0, QuasiperiodicForcing({std::sqrt(2.0)}, {1.0}, {0.0}));
    const double target = 1.0 / 6.0; // 1/2 F^2/(lambda^2 + Omega^2)
    const Observable obs[1] = {make_builtin_observable("m_squared")};

    IntegratorConfig config;
    config.scheme = Scheme::rk4;
    config.step = 0.02;
    config.horizon = 2e4;

    constexpr int kTrials = 20;
    std::vector<double> averages(kTrials);
    std::vector<std::array<double, 2>> ics(kTrials);
    std::mt19937_64 rng(20250810u);
    for (auto& ic : ics) {
        ic = {uniform(rng, -5.0, 5.0), uniform(rng, 0.0, kTwoPi)};
    }
    parallel_over(kTrials, [&](std::size_t i) {
        const double ic[2] = {ics[i][0], ics[i][1]};
        const auto result = integrate(model, ic, config, obs);
        averages[i] = result.averages[0].partial_average();
    });

    double worst = 0.0;
    double mean = 0.0;
    for (double a : averages) {
        worst = std::max(worst, std::abs(a - target));
        mean += a / kTrials;
    }
    double var = 0.0;
    for (double a : averages) {
        var += (a - mean) * (a - mean) / kTrials;
    }
    const double stddev = std::sqrt(var);

    std::vector<CheckResult> checks;
    checks.push_back(make_check("dissipative average vs closed form (20 random ic)", worst, 2e-3,
                                "max |numeric - 1/6| over ic, T = " + format_g(config.horizon)));
    checks.push_back(make_check("dissipative average spread over ic (single basin)", stddev, 1e-3,
                                "sample std-dev of the 20 averages"));
    return checks;
}

std::vector<CheckResult> verify_harmonic() {
    const HarmonicModel model(
        QuasiperiodicForcing({std::numbers::pi / 3.0, 1.1}, {0.2, 0.2}, {0.0, 0.0}));
    const Observable obs[1] = {make_builtin_observable("m1_squared")};

    IntegratorConfig config;
    config.scheme = Scheme::rk4;
    config.step = 0.01;
    config.horizon = 2000.0 * kTwoPi;

    constexpr int kTrials = 10;
    std::vector<double> rel_errors(kTrials);
    std::vector<std::array<double, 2>> ics(kTrials);
    std::mt19937_64 rng(19370123u);
    for (auto& ic : ics) {
        ic = {uniform(rng, -10.0, 10.0), uniform(rng, -10.0, 10.0)};
    }
    parallel_over(kTrials, [&](std::size_t i) {
        const double ic[4] = {ics[i][0], ics[i][1], 0.0, 0.0};
        const double exact = model.exact_average(ic);
        const auto result = integrate(model, ic, config, obs);
        rel_errors[i] = std::abs(result.averages[0].partial_average() - exact) / exact;
    });
    double worst = 0.0;
    for (double e : rel_errors) {
        worst = std::max(worst, e);
    }
    std::vector<CheckResult> checks;
    checks.push_back(make_check(
        "harmonic average vs closed form (10 random ic)", worst, 1e-2,
        "max relative error of the m1^2 average, T = 2000 * 2 pi"));
    return checks;
}

std::vector<CheckResult> verify_integrator() {
    std::vector<CheckResult> checks;

    // rk4 order on the harmonic closed form
    {
        const HarmonicModel model(
            QuasiperiodicForcing({std::numbers::pi / 3.0, 1.1}, {0.2, 0.2}, {0.0, 0.0}));
        const double ic[4] = {1.0, 0.5, 0.0, 0.0};
        const double horizon = 50.0;
        auto global_error = [&](double h) {
            IntegratorConfig config{Scheme::rk4, h, horizon, 0};
            const auto result = integrate(model, ic, config, {});
            const auto exact =
                model.exact_solution(ic, static_cast<double>(result.steps_completed) * h);
            return max_abs_diff(result.final_state, exact, 2);
        };
        const double e1 = global_error(0.05);
        const double e2 = global_error(0.025);
        checks.push_back(make_range_check("rk4 order ratio (harmonic, h = 0.05 vs 0.025)",
                                          e1 / e2, 14.0, 18.0,
                                          "error " + format_g(e1) + " -> " + format_g(e2)));
    }

    SwingParameters params;
    params.modes = {1};

    // symplectic4 order on the unforced swing vs a fine reference
    {
        SwingParameters unforced = params;
        unforced.amplitude_rms = 0.0;
        const SwingModel model(unforced);
        const double ic[3] = {1.5, 0.05, 0.0};
        const double horizon = 20.0;
        auto terminal = [&](double h) {
            IntegratorConfig config{Scheme::symplectic4, h, horizon, 0};
            const auto result = integrate(model, ic, config, {});
            return std::array<double, 2>{result.final_state[0], result.final_state[1]};
        };
        const double h = 0.1;
        const auto ref = terminal(h / 128.0); // h/64 relative to the finer grid below
        const auto c1 = terminal(h);
        const auto c2 = terminal(h / 2.0);
        const double e1 = std::max(std::abs(c1[0] - ref[0]), std::abs(c1[1] - ref[1]));
        const double e2 = std::max(std::abs(c2[0] - ref[0]), std::abs(c2[1] - ref[1]));
        checks.push_back(make_range_check("symplectic4 order ratio (unforced swing, h = 0.1 vs 0.05)",
                                          e1 / e2, 14.0, 18.0,
                                          "error " + format_g(e1) + " -> " + format_g(e2)));
    }

    // conservation of the augmented Hamiltonian along the forced swing
    {
        const SwingModel model(params); // J = {1}, rms amplitude 1.5
        const AugmentedHamiltonianSystem augmented(model);
        const int n_per_period = 16;
        const double h = model.forcing().base_period() / n_per_period;
        const long steps = 200L * n_per_period;
        const double ic[2] = {std::asin(0.95), 0.0};
        auto xs = augmented.initial_state(ic, 0.0);
        Symplectic4Stepper stepper(augmented);
        // Hbar == 0 along the exact flow; the numerical value oscillates with a
        // bounded O(h^4) amplitude, and the asserted "drift" is the secular
        // component: the fitted linear trend times the horizon.
        double max_abs = 0.0;
        double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
        const long samples = steps + 1;
        for (long n = 0; n <= steps; ++n) {
            if (n > 0) {
                stepper.step(xs, h);
                xs[2] = static_cast<double>(n) * h;
            }
            const double t = static_cast<double>(n) * h;
            const double y = augmented.hbar(xs);
            max_abs = std::max(max_abs, std::abs(y));
            sum_t += t;
            sum_y += y;
            sum_tt += t * t;
            sum_ty += t * y;
        }
        const double mean_t = sum_t / samples;
        const double mean_y = sum_y / samples;
        const double slope =
            (sum_ty - samples * mean_t * mean_y) / (sum_tt - samples * mean_t * mean_t);
        const double horizon = static_cast<double>(steps) * h;
        const double drift = std::abs(slope) * horizon;
        checks.push_back(make_check(
            "Hbar secular drift (forced swing, 200 periods, 16 steps/period)", drift, 1e-8,
            "|linear trend| x T; bounded oscillation max|Hbar| = " + format_g(max_abs)));
    }

    // time reversibility of the symplectic composition
    {
        SwingParameters unforced = params;
        unforced.amplitude_rms = 0.0;
        const SwingModel model(unforced);
        const AugmentedHamiltonianSystem augmented(model);
        const double ic[2] = {1.5, 0.05};
        auto xs = augmented.initial_state(ic, 0.0);
        const auto start = xs;
        Symplectic4Stepper stepper(augmented);
        const double h = 0.01;
        const long n = 1000;
        for (long i = 0; i < n; ++i) {
            stepper.step(xs, h);
        }
        for (long i = 0; i < n; ++i) {
            stepper.step(xs, -h);
        }
        const double err = max_abs_diff(xs, start, xs.size());
        checks.push_back(make_check("symplectic time reversibility (1000 steps, h = 0.01)", err,
                                    1e-10, "max |forward-backward - initial|"));
    }

    return checks;
}

int count_failures(const std::vector<CheckResult>& results) {
    int failures = 0;
    for (const auto& r : results) {
        failures += r.pass ? 0 : 1;
    }
    return failures;
}

} // namespace qpart

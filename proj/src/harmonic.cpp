#include "qpart/harmonic.hpp"

#include <cmath>

#include "qpart/errors.hpp"

namespace qpart {

namespace {
constexpr double kResonantDenominator = 1e-12;
}

HarmonicModel::HarmonicModel(QuasiperiodicForcing forcing) : forcing_(std::move(forcing)) {}

void HarmonicModel::rhs(std::span<const double> x, std::span<double> dx) const {
    const int n = forcing_.count();
    double drive = 0.0;
    for (int i = 0; i < n; ++i) {
        drive += forcing_.amplitudes()[i] * std::sin(x[2 + i]);
    }
    dx[0] = x[1];
    dx[1] = -x[0] + drive;
    for (int i = 0; i < n; ++i) {
        dx[2 + i] = forcing_.frequencies()[i];
    }
}

void HarmonicModel::require_nonresonant() const {
    for (double w : forcing_.frequencies()) {
        if (std::abs(1.0 - w * w) < kResonantDenominator) {
            throw NumericError("harmonic: frequency at resonance (|1 - Omega^2| < 1e-12), "
                               "closed forms are invalid");
        }
    }
}

std::array<double, 2> HarmonicModel::response_constants(std::span<const double> ic) const {
    require_nonresonant();
    const int n = forcing_.count();
    double c1 = ic[0];
    double c2 = ic[1];
    for (int i = 0; i < n; ++i) {
        const double f = forcing_.amplitudes()[i];
        const double w = forcing_.frequencies()[i];
        const double den = 1.0 - w * w;
        c1 -= f / den * std::sin(ic[2 + i]);
        c2 -= f * w / den * std::cos(ic[2 + i]);
    }
    return {c1, c2};
}

std::vector<double> HarmonicModel::exact_solution(std::span<const double> ic, double t) const {
    const auto [c1, c2] = response_constants(ic);
    const int n = forcing_.count();
    std::vector<double> x(2 + n);
    double m1 = c1 * std::cos(t) + c2 * std::sin(t);
    double m2 = -c1 * std::sin(t) + c2 * std::cos(t);
    for (int i = 0; i < n; ++i) {
        const double f = forcing_.amplitudes()[i];
        const double w = forcing_.frequencies()[i];
        const double den = 1.0 - w * w;
        const double phase = w * t + ic[2 + i];
        m1 += f / den * std::sin(phase);
        m2 += f * w / den * std::cos(phase);
        x[2 + i] = phase;
    }
    x[0] = m1;
    x[1] = m2;
    return x;
}

double HarmonicModel::exact_average(std::span<const double> ic) const {
    const auto [c1, c2] = response_constants(ic);
    double forced = 0.0;
    for (int i = 0; i < forcing_.count(); ++i) {
        const double f = forcing_.amplitudes()[i];
        const double w = forcing_.frequencies()[i];
        const double den = 1.0 - w * w;
        forced += f * f / (den * den);
    }
    return 0.5 * (c1 * c1 + c2 * c2 + forced);
}

std::array<double, 2> HarmonicModel::level_set_center(std::span<const double> phases) const {
    require_nonresonant();
    double cx = 0.0;
    double cy = 0.0;
    for (int i = 0; i < forcing_.count(); ++i) {
        const double f = forcing_.amplitudes()[i];
        const double w = forcing_.frequencies()[i];
        const double den = 1.0 - w * w;
        cx += f / den * std::sin(phases[i]);
        cy += f * w / den * std::cos(phases[i]);
    }
    return {cx, cy};
}


std::unique_ptr<SystemModel> HarmonicModel::with_phases(std::span<const double> phases) const {
    if (static_cast<int>(phases.size()) != forcing_.count()) {
        throw ValidationError("harmonic: phase override has wrong length");
    }
    return std::make_unique<HarmonicModel>(QuasiperiodicForcing(
        forcing_.frequencies(), forcing_.amplitudes(),
        std::vector<double>(phases.begin(), phases.end())));
}

} // namespace qpart

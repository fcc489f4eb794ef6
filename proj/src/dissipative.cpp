#include "qpart/dissipative.hpp"

#include <cmath>

#include "qpart/errors.hpp"

namespace qpart {

DissipativeModel::DissipativeModel(double decay_rate, QuasiperiodicForcing forcing)
    : decay_rate_(decay_rate), forcing_(std::move(forcing)) {
    if (!(decay_rate_ > 0.0) || !std::isfinite(decay_rate_)) {
        throw ValidationError("dissipative: decay rate must be strictly positive");
    }
}

void DissipativeModel::rhs(std::span<const double> x, std::span<double> dx) const {
    const int n = forcing_.count();
    double drive = 0.0;
    for (int i = 0; i < n; ++i) {
        drive += forcing_.amplitudes()[i] * std::sin(x[1 + i]);
    }
    dx[0] = -decay_rate_ * x[0] + drive;
    for (int i = 0; i < n; ++i) {
        dx[1 + i] = forcing_.frequencies()[i];
    }
}

std::vector<double> DissipativeModel::exact_solution(std::span<const double> ic, double t) const {
    const int n = forcing_.count();
    std::vector<double> x(1 + n);
    // stationary response: F/(l^2+w^2) * (l sin(phase) - w cos(phase))
    double c = ic[0];
    for (int i = 0; i < n; ++i) {
        const double f = forcing_.amplitudes()[i];
        const double w = forcing_.frequencies()[i];
        const double den = decay_rate_ * decay_rate_ + w * w;
        c -= f / den * (decay_rate_ * std::sin(ic[1 + i]) - w * std::cos(ic[1 + i]));
    }
    double m = c * std::exp(-decay_rate_ * t);
    for (int i = 0; i < n; ++i) {
        const double f = forcing_.amplitudes()[i];
        const double w = forcing_.frequencies()[i];
        const double den = decay_rate_ * decay_rate_ + w * w;
        const double phase = w * t + ic[1 + i];
        m += f / den * (decay_rate_ * std::sin(phase) - w * std::cos(phase));
        x[1 + i] = phase;
    }
    x[0] = m;
    return x;
}

double DissipativeModel::exact_average(std::span<const double>) const {
    double s = 0.0;
    for (int i = 0; i < forcing_.count(); ++i) {
        const double f = forcing_.amplitudes()[i];
        const double w = forcing_.frequencies()[i];
        s += f * f / (decay_rate_ * decay_rate_ + w * w);
    }
    return 0.5 * s;
}


std::unique_ptr<SystemModel> DissipativeModel::with_phases(std::span<const double> phases) const {
    if (static_cast<int>(phases.size()) != forcing_.count()) {
        throw ValidationError("dissipative: phase override has wrong length");
    }
    return std::make_unique<DissipativeModel>(
        decay_rate_, QuasiperiodicForcing(forcing_.frequencies(), forcing_.amplitudes(),
                                          std::vector<double>(phases.begin(), phases.end())));
}

} // namespace qpart

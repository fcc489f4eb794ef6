#include "qpart/averaging.hpp"

#include <cmath>

#include "qpart/errors.hpp"

namespace qpart {

Observable make_builtin_observable(const std::string& name) {
    if (name == "sin_2delta") {
        return {name, [](std::span<const double> x) { return std::sin(2.0 * x[0]); }};
    }
    if (name == "cos_delta") {
        return {name, [](std::span<const double> x) { return std::cos(x[0]); }};
    }
    if (name == "m1_squared" || name == "m_squared") {
        return {name, [](std::span<const double> x) { return x[0] * x[0]; }};
    }
    throw ValidationError("unknown observable '" + name + "'");
}

Observable make_trig_poly_observable(std::string id, int coordinate, double constant,
                                     std::vector<double> cos_coefficients,
                                     std::vector<double> sin_coefficients) {
    if (id.empty()) {
        throw ValidationError("trig polynomial observable needs an id");
    }
    if (coordinate < 0) {
        throw ValidationError("observable coordinate must be >= 0");
    }
    if (cos_coefficients.empty() && sin_coefficients.empty() && constant == 0.0) {
        throw ValidationError("trig polynomial observable is identically zero");
    }
    auto eval = [coordinate, constant, cos_c = std::move(cos_coefficients),
                 sin_c = std::move(sin_coefficients)](std::span<const double> x) {
        const double v = x[coordinate];
        double f = constant;
        for (std::size_t k = 0; k < cos_c.size(); ++k) {
            f += cos_c[k] * std::cos(static_cast<double>(k + 1) * v);
        }
        for (std::size_t k = 0; k < sin_c.size(); ++k) {
            f += sin_c[k] * std::sin(static_cast<double>(k + 1) * v);
        }
        return f;
    };
    return {std::move(id), std::move(eval)};
}

AverageAccumulator::AverageAccumulator(double step, long checkpoint_stride, double initial_value)
    : step_(step), stride_(checkpoint_stride), first_(initial_value), last_(initial_value) {
    if (!(step > 0.0)) {
        throw ValidationError("accumulator: step must be positive");
    }
    if (checkpoint_stride < 1) {
        throw ValidationError("accumulator: checkpoint stride must be >= 1");
    }
    if (!std::isfinite(initial_value)) {
        status_ = AccumulatorStatus::escaped;
        cause_ = EscapeCause::non_finite;
    }
}

void AverageAccumulator::accumulate(double value) {
    if (status_ != AccumulatorStatus::converging) {
        throw NumericError("accumulator: cannot accumulate after escape");
    }
    if (!std::isfinite(value)) {
        mark_escaped(EscapeCause::non_finite, elapsed() + step_);
        return;
    }
    // Trapezoid on the fixed grid: I_n = h (f_0/2 + f_1 + ... + f_{n-1} + f_n/2).
    // The previous endpoint joins the interior via Neumaier-compensated
    // summation.
    if (steps_ > 0) {
        const double term = last_;
        const double sum = interior_ + term;
        if (std::abs(interior_) >= std::abs(term)) {
            compensation_ += (interior_ - sum) + term;
        } else {
            compensation_ += (term - sum) + interior_;
        }
        interior_ = sum;
    }
    last_ = value;
    ++steps_;
    if (steps_ % stride_ == 0) {
        checkpoints_.push_back({elapsed(), partial_average()});
    }
}

void AverageAccumulator::mark_escaped(EscapeCause cause, double time) {
    status_ = AccumulatorStatus::escaped;
    cause_ = cause;
    escape_time_ = time;
}

double AverageAccumulator::partial_average() const {
    if (steps_ == 0) {
        return first_;
    }
    const double integral_over_h = 0.5 * first_ + (interior_ + compensation_) + 0.5 * last_;
    return integral_over_h / static_cast<double>(steps_);
}

double AverageAccumulator::convergence_gap() const {
    if (status_ != AccumulatorStatus::converging) {
        throw NumericError("accumulator: convergence gap undefined for escaped trajectory");
    }
    if (checkpoints_.size() < 2) {
        throw NumericError("accumulator: at least two checkpoints required for the gap");
    }
    const double final_avg = checkpoints_.back().partial_average;
    const std::size_t n = checkpoints_.size();
    const std::size_t start = n - std::max<std::size_t>(n / 4, 2);
    double gap = 0.0;
    for (std::size_t i = start; i < n; ++i) {
        gap = std::max(gap, std::abs(checkpoints_[i].partial_average - final_avg));
    }
    return gap;
}

void EscapePredicate::validate() const {
    if (coordinate < 0) {
        throw ValidationError("escape: coordinate must be >= 0");
    }
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
        throw ValidationError("escape: threshold must be positive and finite");
    }
    if (consecutive_steps < 1) {
        throw ValidationError("escape: dwell count must be >= 1");
    }
}

EscapeMonitor::EscapeMonitor(EscapePredicate predicate) : predicate_(predicate) {
    predicate_.validate();
}

bool EscapeMonitor::update(std::span<const double> state) {
    if (fired_) {
        return true;
    }
    if (std::abs(state[predicate_.coordinate]) > predicate_.threshold) {
        if (++run_ >= predicate_.consecutive_steps) {
            fired_ = true;
        }
    } else {
        run_ = 0;
    }
    return fired_;
}

void EscapeMonitor::reset() {
    run_ = 0;
    fired_ = false;
}

} // namespace qpart

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qpart {

/// Scalar observable on the augmented state (m..., theta...).
struct Observable {
    std::string id;
    std::function<double(std::span<const double>)> evaluate;
};

/// Built-ins: "sin_2delta", "cos_delta", "m1_squared", "m_squared".
Observable make_builtin_observable(const std::string& name);

/// f(x) = c0 + sum_k (a_k cos(k x_c) + b_k sin(k x_c)) on coordinate c.
Observable make_trig_poly_observable(std::string id, int coordinate, double constant,
                                     std::vector<double> cos_coefficients,
                                     std::vector<double> sin_coefficients);

enum class EscapeCause { none, threshold, non_finite };

enum class AccumulatorStatus { converging, escaped };

struct Checkpoint {
    double time;
    double partial_average;
};

/// Running time-average of one observable along one trajectory, trapezoidal
/// on the fixed step grid. Construct with the observable value at t = 0, then
/// feed one value per step.
class AverageAccumulator {
public:
    AverageAccumulator(double step, long checkpoint_stride, double initial_value);

    /// Trapezoidal update with the sample at the end of the next step.
    /// A non-finite value flips the status to escaped(non_finite).
    void accumulate(double value);

    void mark_escaped(EscapeCause cause, double time);

    AccumulatorStatus status() const { return status_; }
    EscapeCause escape_cause() const { return cause_; }
    double escape_time() const { return escape_time_; }

    long steps() const { return steps_; }
    double elapsed() const { return static_cast<double>(steps_) * step_; }
    double step() const { return step_; }

    /// Current Cesaro partial average; the t = 0 sample itself before any step.
    double partial_average() const;

    const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }

    /// max |partial(t_i) - partial(t_final)| over the last quarter of the
    /// checkpoints. Needs at least two checkpoints and a converging status.
    double convergence_gap() const;

private:
    double step_;
    long stride_;
    double first_;
    double last_;
    double interior_ = 0.0;      // sum of samples 1..n-1 (Neumaier-compensated)
    double compensation_ = 0.0;
    long steps_ = 0;
    AccumulatorStatus status_ = AccumulatorStatus::converging;
    EscapeCause cause_ = EscapeCause::none;
    double escape_time_ = 0.0;
    std::vector<Checkpoint> checkpoints_;
};

/// Coordinate-threshold escape rule: |x[coordinate]| > threshold for
/// `consecutive_steps` successive samples.
struct EscapePredicate {
    int coordinate = 1;
    double threshold = 0.5;
    int consecutive_steps = 10;

    void validate() const;
};

/// Stateful monitor applying an EscapePredicate sample by sample. Latches once
/// fired.
class EscapeMonitor {
public:
    explicit EscapeMonitor(EscapePredicate predicate);

    /// Returns true once the dwell count is reached (and from then on).
    bool update(std::span<const double> state);
    bool fired() const { return fired_; }
    void reset();
    const EscapePredicate& predicate() const { return predicate_; }

private:
    EscapePredicate predicate_;
    int run_ = 0;
    bool fired_ = false;
};

} // namespace qpart

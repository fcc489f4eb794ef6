#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpart/integrate.hpp"

namespace qpart {

struct AxisSpec {
    int coordinate = 0; ///< augmented-state coordinate index (m first, then theta)
    double lo = 0.0;
    double hi = 1.0;
    int samples = 2; ///< vertex count, endpoints included
    CoordinateTopology topology = CoordinateTopology::line;
};

/// A 2-D slice of initial conditions at a fixed initial phase theta_0.
/// Vertex (i, k) sits at lo + i (hi - lo) / (samples - 1) on each axis.
/// Axes normally scan m-coordinates; an axis may also scan a theta
/// coordinate (for models whose M is one-dimensional).
struct ScanDomain {
    std::array<AxisSpec, 2> axes;
    /// (coordinate, value) for m-coordinates not covered by the axes.
    std::vector<std::pair<int, double>> fixed;
    /// Initial phase theta_0; empty means the model's own phases.
    std::vector<double> initial_phase;

    void validate(const SystemModel& model) const;
    double axis_value(int axis, int index) const;
    long cell_count() const { return static_cast<long>(axes[0].samples) * axes[1].samples; }
};

enum class CellState : std::uint8_t { value = 0, escaped = 1, non_convergent = 2 };

/// Grid of time-average values (or escape markers) for one observable over a
/// ScanDomain, with the settings needed to reproduce it bit-exactly.
class TimeAverageField {
public:
    TimeAverageField() = default;
    TimeAverageField(ScanDomain domain, std::string observable_id,
                     IntegratorConfig integrator, std::optional<EscapePredicate> escape);

    const ScanDomain& domain() const { return domain_; }
    const std::string& observable_id() const { return observable_id_; }
    const IntegratorConfig& integrator() const { return integrator_; }
    const std::optional<EscapePredicate>& escape_predicate() const { return escape_; }

    int n1() const { return domain_.axes[0].samples; }
    int n2() const { return domain_.axes[1].samples; }
    long size() const { return static_cast<long>(n1()) * n2(); }
    long index(int i, int k) const { return static_cast<long>(i) * n2() + k; }

    CellState state(int i, int k) const { return states_[index(i, k)]; }
    double value(int i, int k) const { return values_[index(i, k)]; }
    double gap(int i, int k) const { return gaps_[index(i, k)]; }

    std::vector<CellState>& states() { return states_; }
    const std::vector<CellState>& states() const { return states_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& gaps() { return gaps_; }
    const std::vector<double>& gaps() const { return gaps_; }

    /// min/max over non-escaped cells; nullopt when every cell escaped.
    std::optional<std::pair<double, double>> value_range() const;

    /// Gap threshold factor relative to the field range (default 0.05).
    double gap_tolerance_factor() const { return gap_tolerance_factor_; }
    void set_gap_tolerance_factor(double f) { gap_tolerance_factor_ = f; }

    /// Canonical JSON echo of the run configuration, when produced by one.
    const std::string& config_echo() const { return config_echo_; }
    void set_config_echo(std::string echo) { config_echo_ = std::move(echo); }

private:
    ScanDomain domain_;
    std::string observable_id_;
    IntegratorConfig integrator_;
    std::optional<EscapePredicate> escape_;
    double gap_tolerance_factor_ = 0.05;
    std::string config_echo_;
    std::vector<CellState> states_;
    std::vector<double> values_;
    std::vector<double> gaps_;
};

struct SweepOptions {
    int threads = 0; ///< 0 = hardware concurrency
    /// Called after each completed grid row with (rows_done, rows_total).
    std::function<void(int, int)> progress;
};

/// Integrates every grid vertex and assembles one field per observable.
/// Cells escape per the predicate; cells whose convergence gap exceeds
/// gap_tolerance_factor * field range are flagged non-convergent but keep
/// their value. Results are independent of thread count and scheduling.
std::vector<TimeAverageField> sweep(const SystemModel& model, const ScanDomain& domain,
                                    std::span<const Observable> observables,
                                    const IntegratorConfig& config,
                                    const std::optional<EscapePredicate>& escape,
                                    const SweepOptions& options = {});

/// Joint level sets of one or more fields over a shared domain: the label of a
/// cell is the tuple of per-field bin indices floor((value - min_f) / eps_f);
/// a cell escaped in any field gets the reserved escaped label.
struct PartitionField {
    ScanDomain domain;
    std::vector<std::string> observable_ids;
    std::vector<double> bin_widths;
    std::vector<double> origins;
    /// Row-major label index per cell; kEscapedLabel for escaped cells.
    std::vector<std::int32_t> labels;
    /// label index -> bin tuple (one bin per field), sorted lexicographically.
    std::vector<std::vector<std::int64_t>> label_bins;

    static constexpr std::int32_t kEscapedLabel = -1;

    int n1() const { return domain.axes[0].samples; }
    int n2() const { return domain.axes[1].samples; }
    long index(int i, int k) const { return static_cast<long>(i) * n2() + k; }
};

/// bin_widths: one eps per field, or empty for the default
/// (max - min) / 32 per field. eps <= 0 is a validation error.
PartitionField joint_level_sets(std::span<const TimeAverageField> fields,
                                std::span<const double> bin_widths = {});

enum class Verdict { bounded_slice, unbounded, inconclusive_touches_boundary };

std::string_view to_string(Verdict v);

struct LabelReport {
    std::int32_t label = 0; ///< PartitionField label index, or kEscapedLabel
    std::vector<std::int64_t> bins;
    long cell_count = 0;
    int i_min = 0, i_max = 0, k_min = 0, k_max = 0;
    Verdict verdict = Verdict::bounded_slice;
};

/// Per-label boundedness verdicts. A label is unbounded iff escaped;
/// bounded-slice iff none of its cells lies on a boundary row/column of a
/// line-topology axis; otherwise inconclusive. Circle-topology axes never
/// produce inconclusive verdicts, whatever the window.
struct BoundednessReport {
    std::vector<LabelReport> labels;
    /// Statement attached to every bounded-slice label.
    std::string certification;

    const LabelReport* find(std::int32_t label) const;
};

BoundednessReport boundedness_report(const PartitionField& partition);

/// Runs one sweep per initial phase and summarizes: per-phase fraction of
/// non-escaped cells and the pairwise Jaccard overlap of the non-escaped
/// masks.
struct PhaseComparison {
    std::vector<std::vector<double>> phases;
    std::vector<double> bounded_fraction;
    std::vector<std::vector<double>> overlap;
};

PhaseComparison phase_shift_comparison(const SystemModel& model, const ScanDomain& domain,
                                       const Observable& observable,
                                       const IntegratorConfig& config,
                                       const std::optional<EscapePredicate>& escape,
                                       std::span<const std::vector<double>> phases,
                                       const SweepOptions& options = {});

} // namespace qpart

#include "qpart/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "qpart/errors.hpp"

namespace qpart {

void ScanDomain::validate(const SystemModel& model) const {
    for (const AxisSpec& axis : axes) {
        if (axis.samples < 2) {
            throw ValidationError("domain: each axis needs at least 2 samples");
        }
        if (!(axis.lo < axis.hi)) {
            throw ValidationError("domain: axis range must satisfy lo < hi");
        }
        if (axis.coordinate < 0 || axis.coordinate >= model.dim()) {
            throw ValidationError("domain: axis coordinate outside the augmented state");
        }
    }
    if (axes[0].coordinate == axes[1].coordinate) {
        throw ValidationError("domain: the two axes must scan distinct coordinates");
    }
    std::vector<bool> covered(model.dim(), false);
    covered[axes[0].coordinate] = true;
    covered[axes[1].coordinate] = true;
    for (const auto& [coord, value] : fixed) {
        if (coord < 0 || coord >= model.dim_m() || covered[coord]) {
            throw ValidationError("domain: fixed coordinate invalid or already scanned");
        }
        if (!std::isfinite(value)) {
            throw ValidationError("domain: fixed coordinate value must be finite");
        }
        covered[coord] = true;
    }
    for (int c = 0; c < model.dim_m(); ++c) {
        if (!covered[c]) {
            throw ValidationError("domain: m-coordinate neither scanned nor fixed");
        }
    }
    if (!initial_phase.empty() &&
        static_cast<int>(initial_phase.size()) != model.forcing().count()) {
        throw ValidationError("domain: initial phase has wrong length");
    }
}

double ScanDomain::axis_value(int axis, int index) const {
    const AxisSpec& a = axes[axis];
    // vertex-sampled: endpoints included
    return a.lo + index * (a.hi - a.lo) / (a.samples - 1);
}

TimeAverageField::TimeAverageField(ScanDomain domain, std::string observable_id,
                                   IntegratorConfig integrator,
                                   std::optional<EscapePredicate> escape)
    : domain_(std::move(domain)),
      observable_id_(std::move(observable_id)),
      integrator_(integrator),
      escape_(escape),
      states_(size(), CellState::value),
      values_(size(), 0.0),
      gaps_(size(), 0.0) {}

std::optional<std::pair<double, double>> TimeAverageField::value_range() const {
    bool any = false;
    double lo = 0.0;
    double hi = 0.0;
    for (long idx = 0; idx < size(); ++idx) {
        if (states_[idx] == CellState::escaped) {
            continue;
        }
        const double v = values_[idx];
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!any) {
        return std::nullopt;
    }
    return std::make_pair(lo, hi);
}

std::vector<TimeAverageField> sweep(const SystemModel& model, const ScanDomain& domain,
                                    std::span<const Observable> observables,
                                    const IntegratorConfig& config,
                                    const std::optional<EscapePredicate>& escape,
                                    const SweepOptions& options) {
    if (observables.empty()) {
        throw ValidationError("sweep: at least one observable required");
    }
    domain.validate(model);
    config.validate();
    if (escape) {
        escape->validate();
    }

    // resolve the slice phase: an explicit theta_0 re-anchors the forcing
    std::unique_ptr<SystemModel> rephased;
    const SystemModel* effective = &model;
    if (!domain.initial_phase.empty() && domain.initial_phase != model.forcing().phases()) {
        rephased = model.with_phases(domain.initial_phase);
        effective = rephased.get();
    }

    if (config.scheme == Scheme::symplectic4 &&
        (domain.axes[0].coordinate >= model.dim_m() ||
         domain.axes[1].coordinate >= model.dim_m())) {
        throw ValidationError("sweep: symplectic integration cannot scan drive phases");
    }
    if (config.scheme == Scheme::symplectic4) {
        effective->precompute_time_samples(
            symplectic4_sample_times(0.0, config.step, config.step_count()));
    }

    const int n1 = domain.axes[0].samples;
    const int n2 = domain.axes[1].samples;
    const long cells = domain.cell_count();
    const int dim = effective->dim();
    const int dim_m = effective->dim_m();

    std::vector<TimeAverageField> fields;
    fields.reserve(observables.size());
    for (const auto& obs : observables) {
        fields.emplace_back(domain, obs.id, config, escape);
    }

    std::vector<double> base_ic(dim, 0.0);
    for (const auto& [coord, value] : domain.fixed) {
        base_ic[coord] = value;
    }
    for (int i = 0; i < effective->forcing().count(); ++i) {
        base_ic[dim_m + i] = effective->forcing().phases()[i];
    }

    int n_threads = options.threads > 0
                        ? options.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp<int>(n_threads, 1, static_cast<int>(std::min<long>(cells, 256)));

    std::atomic<int> next_row{0};
    std::atomic<int> rows_done{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        std::vector<double> ic = base_ic;
        try {
            for (;;) {
                const int i = next_row.fetch_add(1);
                if (i >= n1) {
                    break;
                }
                ic[domain.axes[0].coordinate] = domain.axis_value(0, i);
                for (int k = 0; k < n2; ++k) {
                    ic[domain.axes[1].coordinate] = domain.axis_value(1, k);
                    TrajectoryResult traj = integrate(*effective, ic, config, observables,
                                                      escape ? &*escape : nullptr);
                    const long idx = static_cast<long>(i) * n2 + k;
                    for (std::size_t f = 0; f < fields.size(); ++f) {
                        auto& field = fields[f];
                        const auto& acc = traj.averages[f];
                        if (traj.escaped() || acc.status() == AccumulatorStatus::escaped) {
                            field.states()[idx] = CellState::escaped;
                            field.values()[idx] = 0.0;
                            field.gaps()[idx] = 0.0;
                        } else {
                            field.values()[idx] = acc.partial_average();
                            field.gaps()[idx] =
                                acc.checkpoints().size() >= 2 ? acc.convergence_gap() : 0.0;
                        }
                    }
                }
                const int done = rows_done.fetch_add(1) + 1;
                if (options.progress) {
                    options.progress(done, n1);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
                first_error = std::current_exception();
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    // flag non-convergent cells against the assembled field range
    for (auto& field : fields) {
        const auto range = field.value_range();
        if (!range) {
            continue;
        }
        const double tolerance = field.gap_tolerance_factor() * (range->second - range->first);
        if (!(tolerance > 0.0)) {
            continue;
        }
        for (long idx = 0; idx < field.size(); ++idx) {
            if (field.states()[idx] == CellState::value && field.gaps()[idx] > tolerance) {
                field.states()[idx] = CellState::non_convergent;
            }
        }
    }
    return fields;
}

PartitionField joint_level_sets(std::span<const TimeAverageField> fields,
                                std::span<const double> bin_widths) {
    if (fields.empty()) {
        throw ValidationError("joint level sets: at least one field required");
    }
    const auto& first = fields.front();
    for (const auto& f : fields) {
        if (f.n1() != first.n1() || f.n2() != first.n2() ||
            f.domain().axes[0].coordinate != first.domain().axes[0].coordinate ||
            f.domain().axes[1].coordinate != first.domain().axes[1].coordinate ||
            f.domain().axes[0].lo != first.domain().axes[0].lo ||
            f.domain().axes[0].hi != first.domain().axes[0].hi ||
            f.domain().axes[1].lo != first.domain().axes[1].lo ||
            f.domain().axes[1].hi != first.domain().axes[1].hi) {
            throw ValidationError("joint level sets: fields do not share a domain");
        }
    }
    if (!bin_widths.empty() && bin_widths.size() != fields.size()) {
        throw ValidationError("joint level sets: one bin width per field required");
    }

    PartitionField part;
    part.domain = first.domain();
    const std::size_t nf = fields.size();
    for (const auto& f : fields) {
        part.observable_ids.push_back(f.observable_id());
    }
    part.bin_widths.resize(nf);
    part.origins.resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        const auto range = fields[f].value_range();
        const double lo = range ? range->first : 0.0;
        const double hi = range ? range->second : 0.0;
        part.origins[f] = lo;
        if (!bin_widths.empty()) {
            if (!(bin_widths[f] > 0.0) || !std::isfinite(bin_widths[f])) {
                throw ValidationError("joint level sets: bin widths must be positive");
            }
            part.bin_widths[f] = bin_widths[f];
        } else {
            const double width = (hi - lo) / 32.0;
            part.bin_widths[f] = width > 0.0 ? width : 1.0; // constant field: one bin
        }
    }

    const long cells = first.size();
    std::map<std::vector<std::int64_t>, std::int32_t> label_of;
    std::vector<std::vector<std::int64_t>> tuples(cells);
    std::vector<bool> escaped(cells, false);
    std::vector<std::int64_t> key(nf);
    for (long idx = 0; idx < cells; ++idx) {
        for (std::size_t f = 0; f < nf; ++f) {
            if (fields[f].states()[idx] == CellState::escaped) {
                escaped[idx] = true;
                break;
            }
            key[f] = static_cast<std::int64_t>(
                std::floor((fields[f].values()[idx] - part.origins[f]) / part.bin_widths[f]));
        }
        if (!escaped[idx]) {
            tuples[idx] = key;
            label_of.emplace(key, 0);
        }
    }
    std::int32_t next = 0;
    for (auto& [tuple, label] : label_of) {
        label = next++;
        part.label_bins.push_back(tuple);
    }
    part.labels.resize(cells);
    for (long idx = 0; idx < cells; ++idx) {
        part.labels[idx] =
            escaped[idx] ? PartitionField::kEscapedLabel : label_of.at(tuples[idx]);
    }
    return part;
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::bounded_slice:
        return "bounded-slice";
    case Verdict::unbounded:
        return "unbounded";
    case Verdict::inconclusive_touches_boundary:
        return "inconclusive-touches-boundary";
    }
    return "?";
}

const LabelReport* BoundednessReport::find(std::int32_t label) const {
    for (const auto& r : labels) {
        if (r.label == label) {
            return &r;
        }
    }
    return nullptr;
}

BoundednessReport boundedness_report(const PartitionField& partition) {
    BoundednessReport report;
    report.certification = "slice certified bounded in M at theta_0 => corresponding invariant "
                           "set uniformly bounded in M x T^N";
    const int n1 = partition.n1();
    const int n2 = partition.n2();
    const bool axis0_periodic = partition.domain.axes[0].topology == CoordinateTopology::circle;
    const bool axis1_periodic = partition.domain.axes[1].topology == CoordinateTopology::circle;

    std::map<std::int32_t, LabelReport> by_label;
    for (int i = 0; i < n1; ++i) {
        for (int k = 0; k < n2; ++k) {
            const std::int32_t label = partition.labels[partition.index(i, k)];
            auto [it, inserted] = by_label.try_emplace(label);
            LabelReport& r = it->second;
            if (inserted) {
                r.label = label;
                if (label != PartitionField::kEscapedLabel) {
                    r.bins = partition.label_bins[label];
                }
                r.i_min = r.i_max = i;
                r.k_min = r.k_max = k;
            }
            r.cell_count += 1;
            r.i_min = std::min(r.i_min, i);
            r.i_max = std::max(r.i_max, i);
            r.k_min = std::min(r.k_min, k);
            r.k_max = std::max(r.k_max, k);
        }
    }
    for (auto& [label, r] : by_label) {
        if (label == PartitionField::kEscapedLabel) {
            r.verdict = Verdict::unbounded;
        } else {
            // only line-topology axes have escaping boundaries
            const bool touches = (!axis0_periodic && (r.i_min == 0 || r.i_max == n1 - 1)) ||
                                 (!axis1_periodic && (r.k_min == 0 || r.k_max == n2 - 1));
            r.verdict = touches ? Verdict::inconclusive_touches_boundary : Verdict::bounded_slice;
        }
        report.labels.push_back(r);
    }
    return report;
}

PhaseComparison phase_shift_comparison(const SystemModel& model, const ScanDomain& domain,
                                       const Observable& observable,
                                       const IntegratorConfig& config,
                                       const std::optional<EscapePredicate>& escape,
                                       std::span<const std::vector<double>> phases,
                                       const SweepOptions& options) {
    if (phases.size() < 2) {
        throw ValidationError("phase comparison: at least two phases required");
    }
    PhaseComparison cmp;
    std::vector<std::vector<bool>> masks;
    const Observable obs_list[1] = {observable};
    for (const auto& phase : phases) {
        ScanDomain d = domain;
        d.initial_phase = phase;
        auto fields = sweep(model, d, obs_list, config, escape, options);
        const auto& field = fields.front();
        std::vector<bool> mask(field.size());
        long non_escaped = 0;
        for (long idx = 0; idx < field.size(); ++idx) {
            mask[idx] = field.states()[idx] != CellState::escaped;
            non_escaped += mask[idx];
        }
        cmp.phases.push_back(phase);
        cmp.bounded_fraction.push_back(static_cast<double>(non_escaped) /
                                       static_cast<double>(field.size()));
        masks.push_back(std::move(mask));
    }
    const std::size_t np = masks.size();
    cmp.overlap.assign(np, std::vector<double>(np, 1.0));
    for (std::size_t a = 0; a < np; ++a) {
        for (std::size_t b = a + 1; b < np; ++b) {
            long inter = 0;
            long uni = 0;
            for (std::size_t idx = 0; idx < masks[a].size(); ++idx) {
                const bool in_a = masks[a][idx];
                const bool in_b = masks[b][idx];
                inter += in_a && in_b;
                uni += in_a || in_b;
            }
            const double jaccard = uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
            cmp.overlap[a][b] = cmp.overlap[b][a] = jaccard;
        }
    }
    return cmp;
}

} // namespace qpart

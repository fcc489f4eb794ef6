#include "qpart/swing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qpart/errors.hpp"

namespace qpart {

void SwingParameters::validate() const {
    if (generator_count < 1) {
        throw ValidationError("swing: generator count must be >= 1");
    }
    if (!(b_int != 0.0) || !std::isfinite(b_int) || !std::isfinite(b) || !std::isfinite(p_m)) {
        throw ValidationError("swing: p_m, b, b_int must be finite and b_int nonzero");
    }
    if (modes.empty()) {
        throw ValidationError("swing: at least one mode index required");
    }
    std::set<int> seen;
    for (int j : modes) {
        if (j < 1 || j > generator_count - 1) {
            throw ValidationError("swing: mode index out of range [1, N_G - 1] "
                                  "(j = N_G has zero frequency)");
        }
        if (!seen.insert(j).second) {
            throw ValidationError("swing: duplicate mode index");
        }
    }
    if (!amplitudes.empty() && amplitudes.size() != modes.size()) {
        throw ValidationError("swing: amplitudes list must match the mode set size");
    }
    for (double c : amplitudes) {
        if (!std::isfinite(c)) {
            throw ValidationError("swing: amplitudes must be finite");
        }
    }
    if (!(amplitude_rms >= 0.0) || !std::isfinite(amplitude_rms)) {
        throw ValidationError("swing: amplitude_rms must be finite and >= 0");
    }
}

std::vector<double> SwingParameters::resolved_amplitudes() const {
    if (!amplitudes.empty()) {
        return amplitudes;
    }
    const double c = amplitude_rms / std::sqrt(static_cast<double>(modes.size()));
    return std::vector<double>(modes.size(), c);
}

double swing_mode_frequency(int j, const SwingParameters& params) {
    if (j < 1 || j > params.generator_count - 1) {
        throw ValidationError("swing: mode index out of range [1, N_G - 1]");
    }
    const double arg = std::numbers::pi * j / params.generator_count;
    return 2.0 * std::sqrt(std::abs(params.b_int)) * std::abs(std::sin(arg));
}

double swing_mode_shape(int i, int j, const SwingParameters& params) {
    if (i < 1 || i > params.generator_count) {
        throw ValidationError("swing: generator index out of range [1, N_G]");
    }
    if (j < 1 || j > params.generator_count - 1) {
        throw ValidationError("swing: mode index out of range [1, N_G - 1]");
    }
    const int n = params.generator_count;
    return std::sqrt(2.0 / n) *
           std::cos(2.0 * std::numbers::pi * i * j / n + std::numbers::pi / 4.0);
}

namespace {

QuasiperiodicForcing make_swing_forcing(const SwingParameters& params,
                                        std::vector<double> phases) {
    params.validate();
    std::vector<double> freqs;
    freqs.reserve(params.modes.size());
    for (int j : params.modes) {
        freqs.push_back(swing_mode_frequency(j, params));
    }
    if (phases.empty()) {
        phases.assign(params.modes.size(), 0.0);
    }
    if (phases.size() != params.modes.size()) {
        throw ValidationError("swing: initial mode phases must match the mode set size");
    }
    return QuasiperiodicForcing(std::move(freqs), params.resolved_amplitudes(),
                                std::move(phases));
}

} // namespace

/// Split Hamiltonian T(omega) = omega^2 / 2,
/// V(delta, t) = -p_m delta - (b/N_G) sum_i cos(u_i(t) + delta).
class SwingModel::Potential final : public SplitHamiltonian {
public:
    explicit Potential(const SwingModel& model) : model_(model) {}

    int dof() const override { return 1; }

    double kinetic(std::span<const double> p) const override { return 0.5 * p[0] * p[0]; }

    void kinetic_gradient(std::span<const double> p, std::span<double> out) const override {
        out[0] = p[0];
    }

    double potential(std::span<const double> q, double t) const override {
        const auto& sp = model_.params_;
        const DriveSums s = model_.drive_sums(t);
        const double scale = sp.b / sp.generator_count;
        return -sp.p_m * q[0] - scale * (s.cos_sum * std::cos(q[0]) - s.sin_sum * std::sin(q[0]));
    }

    void potential_gradient(std::span<const double> q, double t,
                            std::span<double> out) const override {
        const auto& sp = model_.params_;
        const DriveSums s = model_.drive_sums(t);
        const double scale = sp.b / sp.generator_count;
        out[0] = -sp.p_m + scale * (s.sin_sum * std::cos(q[0]) + s.cos_sum * std::sin(q[0]));
    }

    double potential_time_derivative(std::span<const double> q, double t) const override {
        const auto& sp = model_.params_;
        const DriveSums s = model_.drive_sums(t);
        const double scale = sp.b / sp.generator_count;
        return scale * (s.dsin_sum * std::cos(q[0]) + s.dcos_sum * std::sin(q[0]));
    }

private:
    const SwingModel& model_;
};

SwingModel::SwingModel(SwingParameters params, std::vector<double> initial_mode_phases)
    : params_(std::move(params)),
      forcing_(make_swing_forcing(params_, std::move(initial_mode_phases))),
      potential_(std::make_unique<Potential>(*this)) {
    const int n_modes = static_cast<int>(params_.modes.size());
    const auto amps = params_.resolved_amplitudes();
    coupling_.resize(static_cast<std::size_t>(params_.generator_count) * n_modes);
    for (int i = 1; i <= params_.generator_count; ++i) {
        for (int m = 0; m < n_modes; ++m) {
            coupling_[(i - 1) * n_modes + m] = swing_mode_shape(i, params_.modes[m], params_) * amps[m];
        }
    }
}

SwingModel::~SwingModel() = default;

SwingModel::DriveSums
SwingModel::drive_sums_from_phases(std::span<const double> mode_phases) const {
    const int n_modes = static_cast<int>(params_.modes.size());
    const int n_gen = params_.generator_count;
    double cos_phase[16];
    double omega_sin_phase[16];
    std::vector<double> heap_cos, heap_sin;
    double* cp = cos_phase;
    double* osp = omega_sin_phase;
    if (n_modes > 16) {
        heap_cos.resize(n_modes);
        heap_sin.resize(n_modes);
        cp = heap_cos.data();
        osp = heap_sin.data();
    }
    for (int m = 0; m < n_modes; ++m) {
        cp[m] = std::cos(mode_phases[m]);
        osp[m] = forcing_.frequencies()[m] * std::sin(mode_phases[m]);
    }
    DriveSums s{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < n_gen; ++i) {
        const double* a = &coupling_[static_cast<std::size_t>(i) * n_modes];
        double u = 0.0;
        double du = 0.0;
        for (int m = 0; m < n_modes; ++m) {
            u += a[m] * cp[m];
            du -= a[m] * osp[m];
        }
        const double su = std::sin(u);
        const double cu = std::cos(u);
        s.sin_sum += su;
        s.cos_sum += cu;
        s.dsin_sum += du * su;
        s.dcos_sum += du * cu;
    }
    return s;
}

SwingModel::DriveSums SwingModel::drive_sums(double t) const {
    if (!cache_times_.empty()) {
        auto it = std::lower_bound(cache_times_.begin(), cache_times_.end(), t);
        if (it != cache_times_.end() && *it == t) {
            return cache_sums_[static_cast<std::size_t>(it - cache_times_.begin())];
        }
    }
    const int n_modes = static_cast<int>(params_.modes.size());
    double phases[16];
    std::vector<double> heap_phases;
    double* ph = phases;
    if (n_modes > 16) {
        heap_phases.resize(n_modes);
        ph = heap_phases.data();
    }
    for (int m = 0; m < n_modes; ++m) {
        ph[m] = forcing_.frequencies()[m] * t + forcing_.phases()[m];
    }
    return drive_sums_from_phases({ph, static_cast<std::size_t>(n_modes)});
}

void SwingModel::precompute_time_samples(std::span<const double> times) const {
    std::vector<double> sorted(times.begin(), times.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<DriveSums> sums;
    sums.reserve(sorted.size());
    cache_times_.clear(); // direct path while filling
    for (double t : sorted) {
        sums.push_back(drive_sums(t));
    }
    cache_times_ = std::move(sorted);
    cache_sums_ = std::move(sums);
}

void SwingModel::clear_time_samples() const {
    cache_times_.clear();
    cache_sums_.clear();
}

void SwingModel::rhs(std::span<const double> x, std::span<double> dx) const {
    const int n_modes = static_cast<int>(params_.modes.size());
    const DriveSums s = drive_sums_from_phases(x.subspan(2, n_modes));
    const double scale = params_.b / params_.generator_count;
    dx[0] = x[1];
    dx[1] = params_.p_m - scale * (s.sin_sum * std::cos(x[0]) + s.cos_sum * std::sin(x[0]));
    for (int m = 0; m < n_modes; ++m) {
        dx[2 + m] = forcing_.frequencies()[m];
    }
}

const SplitHamiltonian* SwingModel::hamiltonian() const { return potential_.get(); }

double SwingModel::hamiltonian_value(double delta_unwrapped, double omega, double t) const {
    const double q[1] = {delta_unwrapped};
    const double p[1] = {omega};
    return potential_->value({q, 1}, {p, 1}, t);
}

std::unique_ptr<SystemModel> SwingModel::with_phases(std::span<const double> phases) const {
    return std::make_unique<SwingModel>(params_,
                                        std::vector<double>(phases.begin(), phases.end()));
}

} // namespace qpart

#include "qpart/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qpart/errors.hpp"

namespace qpart {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    // fmod can land exactly on 2*pi after the correction of a tiny negative
    if (w >= kTwoPi) {
        w = 0.0;
    }
    return w;
}

QuasiperiodicForcing::QuasiperiodicForcing(std::vector<double> frequencies,
                                           std::vector<double> amplitudes,
                                           std::vector<double> phases)
    : frequencies_(std::move(frequencies)),
      amplitudes_(std::move(amplitudes)),
      phases_(std::move(phases)) {
    if (frequencies_.empty()) {
        throw ValidationError("forcing: at least one frequency required");
    }
    if (amplitudes_.size() != frequencies_.size() || phases_.size() != frequencies_.size()) {
        throw ValidationError("forcing: frequencies, amplitudes and phases must have equal length");
    }
    for (double w : frequencies_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ValidationError("forcing: frequencies must be strictly positive and finite");
        }
    }
    for (double a : amplitudes_) {
        if (!std::isfinite(a)) {
            throw ValidationError("forcing: amplitudes must be finite");
        }
    }
    for (double& p : phases_) {
        if (!std::isfinite(p)) {
            throw ValidationError("forcing: phases must be finite");
        }
        p = wrap_angle(p);
    }
}

double QuasiperiodicForcing::base_period() const {
    return kTwoPi / frequencies_.front();
}

double QuasiperiodicForcing::slowest_period() const {
    return kTwoPi / *std::min_element(frequencies_.begin(), frequencies_.end());
}

std::vector<std::string> QuasiperiodicForcing::resonance_warnings(int k_max, double eps) const {
    std::vector<std::string> warnings;
    const int n = count();
    if (n < 1 || k_max < 1) {
        return warnings;
    }
    // Enumerate k in {-k_max..k_max}^n, skipping zero and taking one of each
    // {k, -k} pair (first nonzero entry positive).
    std::vector<int> k(n, -k_max);
    const long total = [&] {
        long t = 1;
        for (int i = 0; i < n; ++i) {
            t *= 2L * k_max + 1;
        }
        return t;
    }();
    for (long it = 0; it < total; ++it) {
        long rem = it;
        for (int i = 0; i < n; ++i) {
            k[i] = static_cast<int>(rem % (2L * k_max + 1)) - k_max;
            rem /= 2L * k_max + 1;
        }
        int lead = 0;
        for (int i = 0; i < n; ++i) {
            if (k[i] != 0) {
                lead = k[i];
                break;
            }
        }
        if (lead <= 0) {
            continue; // zero vector or the negated twin
        }
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            s += k[i] * frequencies_[i];
        }
        if (std::abs(s) < eps) {
            std::ostringstream msg;
            msg << "near-resonant frequencies: |";
            for (int i = 0; i < n; ++i) {
                if (k[i] == 0) {
                    continue;
                }
                msg << (k[i] > 0 ? "+" : "") << k[i] << "*Omega_" << (i + 1) << " ";
            }
            msg << "| = " << std::abs(s) << " < " << eps;
            warnings.push_back(msg.str());
        }
    }
    return warnings;
}

} // namespace qpart

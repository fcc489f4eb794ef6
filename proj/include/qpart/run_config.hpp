#pragma once

#include <filesystem>
#include <optional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qpart/partition.hpp"

namespace qpart {

struct HarmonicSpec {
    std::vector<double> frequencies;
    std::vector<double> amplitudes;
    std::vector<double> phases;
};

struct DissipativeSpec {
    double decay_rate = 1.0;
    std::vector<double> frequencies;
    std::vector<double> amplitudes;
    std::vector<double> phases;
};

struct SwingSpec {
    double p_m = 0.95;
    double b = 1.0;
    double b_int = 100.0;
    int generator_count = 20;
    std::vector<int> modes;
    std::vector<double> amplitudes; // empty => equal split
    double amplitude_rms = 1.5;
    std::vector<double> initial_mode_phases; // empty => zeros
};

struct IntegratorSpec {
    std::string scheme = "rk4";
    /// Exactly one of step / steps_per_period, and one of horizon / periods.
    double step = 0.0;
    int steps_per_period = 0;
    double horizon = 0.0;
    double periods = 0.0;
    long checkpoint_stride = 0;
};

struct ObservableSpec {
    std::string name;           // builtin name, or empty for a trig polynomial
    std::string id;             // custom id (trig polynomial)
    int coordinate = 0;
    double constant = 0.0;
    std::vector<double> cos_coefficients;
    std::vector<double> sin_coefficients;
};

struct OutputSpec {
    std::string directory = "out";
    std::string prefix = "run";
    std::string colormap = "viridis256";
};

/// One validated run document. Every block validates before any computation;
/// unknown keys are hard errors. The canonical JSON echo embedded in outputs
/// parses back to an identical configuration.
struct RunConfiguration {
    std::variant<HarmonicSpec, DissipativeSpec, SwingSpec> model;
    IntegratorSpec integrator;
    ScanDomain domain;
    std::vector<ObservableSpec> observables;
    bool escape_enabled = false;
    EscapePredicate escape;

    std::optional<EscapePredicate> escape_or_none() const {
        return escape_enabled ? std::optional<EscapePredicate>(escape) : std::nullopt;
    }
    OutputSpec output;

    static RunConfiguration from_json(const nlohmann::json& j);
    static RunConfiguration load(const std::filesystem::path& path);
    static RunConfiguration parse_echo(const std::string& canonical_json);

    nlohmann::json to_json() const;
    std::string canonical_echo() const; ///< deterministic serialized form

    std::unique_ptr<SystemModel> build_model() const;
    IntegratorConfig resolve_integrator(const SystemModel& model) const;
    std::vector<Observable> build_observables() const;
};

} // namespace qpart

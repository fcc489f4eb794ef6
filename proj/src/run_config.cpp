#include "qpart/run_config.hpp"

#include <cmath>
#include <fstream>

#include "json_util.hpp"
#include "qpart/dissipative.hpp"
#include "qpart/harmonic.hpp"
#include "qpart/swing.hpp"

namespace qpart {

namespace {

using detail::json;
using detail::require_keys;

json model_to_json(const std::variant<HarmonicSpec, DissipativeSpec, SwingSpec>& model) {
    if (const auto* h = std::get_if<HarmonicSpec>(&model)) {
        return json{{"name", "harmonic"},
                    {"frequencies", h->frequencies},
                    {"amplitudes", h->amplitudes},
                    {"phases", h->phases}};
    }
    if (const auto* d = std::get_if<DissipativeSpec>(&model)) {
        return json{{"name", "dissipative"},
                    {"decay_rate", d->decay_rate},
                    {"frequencies", d->frequencies},
                    {"amplitudes", d->amplitudes},
                    {"phases", d->phases}};
    }
    const auto& s = std::get<SwingSpec>(model);
    json j{{"name", "swing"},
           {"p_m", s.p_m},
           {"b", s.b},
           {"b_int", s.b_int},
           {"generators", s.generator_count},
           {"modes", s.modes}};
    if (!s.amplitudes.empty()) {
        j["amplitudes"] = s.amplitudes;
    } else {
        j["amplitude_rms"] = s.amplitude_rms;
    }
    if (!s.initial_mode_phases.empty()) {
        j["initial_mode_phases"] = s.initial_mode_phases;
    }
    return j;
}

std::variant<HarmonicSpec, DissipativeSpec, SwingSpec> model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("name")) {
        throw ValidationError("model: block must name a built-in model");
    }
    const std::string name = j.at("name").get<std::string>();
    if (name == "harmonic") {
        require_keys(j, {"name", "frequencies", "amplitudes", "phases"}, "model(harmonic)");
        HarmonicSpec h;
        h.frequencies = j.at("frequencies").get<std::vector<double>>();
        h.amplitudes = j.at("amplitudes").get<std::vector<double>>();
        h.phases = j.value("phases", std::vector<double>(h.frequencies.size(), 0.0));
        return h;
    }
    if (name == "dissipative") {
        require_keys(j, {"name", "decay_rate", "frequencies", "amplitudes", "phases"},
                     "model(dissipative)");
        DissipativeSpec d;
        d.decay_rate = j.at("decay_rate").get<double>();
        d.frequencies = j.at("frequencies").get<std::vector<double>>();
        d.amplitudes = j.at("amplitudes").get<std::vector<double>>();
        d.phases = j.value("phases", std::vector<double>(d.frequencies.size(), 0.0));
        return d;
    }
    if (name == "swing") {
        require_keys(j,
                     {"name", "p_m", "b", "b_int", "generators", "modes", "amplitudes",
                      "amplitude_rms", "initial_mode_phases"},
                     "model(swing)");
        SwingSpec s;
        s.p_m = j.value("p_m", s.p_m);
        s.b = j.value("b", s.b);
        s.b_int = j.value("b_int", s.b_int);
        s.generator_count = j.value("generators", s.generator_count);
        s.modes = j.at("modes").get<std::vector<int>>();
        if (j.contains("amplitudes")) {
            s.amplitudes = j.at("amplitudes").get<std::vector<double>>();
        }
        s.amplitude_rms = j.value("amplitude_rms", s.amplitude_rms);
        if (j.contains("initial_mode_phases")) {
            s.initial_mode_phases = j.at("initial_mode_phases").get<std::vector<double>>();
        }
        return s;
    }
    throw ValidationError("model: unknown name '" + name +
                          "' (expected harmonic, dissipative, or swing)");
}

json integrator_spec_to_json(const IntegratorSpec& s) {
    json j{{"scheme", s.scheme}};
    if (s.step > 0.0) {
        j["step"] = s.step;
    }
    if (s.steps_per_period > 0) {
        j["steps_per_period"] = s.steps_per_period;
    }
    if (s.horizon > 0.0) {
        j["horizon"] = s.horizon;
    }
    if (s.periods > 0.0) {
        j["periods"] = s.periods;
    }
    if (s.checkpoint_stride > 0) {
        j["checkpoint_stride"] = s.checkpoint_stride;
    }
    return j;
}

IntegratorSpec integrator_spec_from_json(const json& j) {
    require_keys(j, {"scheme", "step", "steps_per_period", "horizon", "periods",
                     "checkpoint_stride"},
                 "integrator");
    IntegratorSpec s;
    s.scheme = j.value("scheme", s.scheme);
    if (s.scheme != "rk4" && s.scheme != "symplectic4") {
        throw ValidationError("integrator: scheme must be 'rk4' or 'symplectic4'");
    }
    s.step = j.value("step", 0.0);
    s.steps_per_period = j.value("steps_per_period", 0);
    s.horizon = j.value("horizon", 0.0);
    s.periods = j.value("periods", 0.0);
    s.checkpoint_stride = j.value("checkpoint_stride", 0L);
    const bool has_step = s.step > 0.0;
    const bool has_spp = s.steps_per_period > 0;
    if (has_step == has_spp) {
        throw ValidationError("integrator: exactly one of 'step' or 'steps_per_period' required");
    }
    const bool has_horizon = s.horizon > 0.0;
    const bool has_periods = s.periods > 0.0;
    if (has_horizon == has_periods) {
        throw ValidationError("integrator: exactly one of 'horizon' or 'periods' required");
    }
    if (s.checkpoint_stride < 0) {
        throw ValidationError("integrator: checkpoint_stride must be >= 0");
    }
    return s;
}

json observable_to_json(const ObservableSpec& o) {
    if (!o.name.empty()) {
        return json{{"name", o.name}};
    }
    json j{{"id", o.id}, {"coordinate", o.coordinate}};
    if (o.constant != 0.0) {
        j["constant"] = o.constant;
    }
    if (!o.cos_coefficients.empty()) {
        j["cos"] = o.cos_coefficients;
    }
    if (!o.sin_coefficients.empty()) {
        j["sin"] = o.sin_coefficients;
    }
    return j;
}

ObservableSpec observable_from_json(const json& j) {
    ObservableSpec o;
    if (j.contains("name")) {
        require_keys(j, {"name"}, "observable");
        o.name = j.at("name").get<std::string>();
        return o;
    }
    require_keys(j, {"id", "coordinate", "constant", "cos", "sin"}, "observable");
    o.id = j.value("id", "");
    o.coordinate = j.value("coordinate", 0);
    o.constant = j.value("constant", 0.0);
    o.cos_coefficients = j.value("cos", std::vector<double>{});
    o.sin_coefficients = j.value("sin", std::vector<double>{});
    return o;
}

json output_to_json(const OutputSpec& o) {
    return json{{"directory", o.directory}, {"prefix", o.prefix}, {"colormap", o.colormap}};
}

OutputSpec output_from_json(const json& j) {
    require_keys(j, {"directory", "prefix", "colormap"}, "output");
    OutputSpec o;
    o.directory = j.value("directory", o.directory);
    o.prefix = j.value("prefix", o.prefix);
    o.colormap = j.value("colormap", o.colormap);
    if (o.directory.empty() || o.prefix.empty()) {
        throw ValidationError("output: directory and prefix must be non-empty");
    }
    if (o.colormap != "viridis256") {
        throw ValidationError("output: unknown colormap '" + o.colormap + "'");
    }
    return o;
}

} // namespace

RunConfiguration RunConfiguration::from_json(const nlohmann::json& j) {
    require_keys(j, {"model", "integrator", "domain", "observables", "escape", "output"},
                 "configuration");
    RunConfiguration cfg;
    cfg.model = model_from_json(j.at("model"));
    cfg.integrator = integrator_spec_from_json(j.at("integrator"));
    cfg.domain = detail::domain_from_json(j.at("domain"));
    if (!j.contains("observables") || !j.at("observables").is_array() ||
        j.at("observables").empty()) {
        throw ValidationError("configuration: non-empty observables list required");
    }
    for (const auto& o : j.at("observables")) {
        cfg.observables.push_back(observable_from_json(o));
    }
    if (j.contains("escape") && !j.at("escape").is_null()) {
        cfg.escape_enabled = true;
        cfg.escape = detail::escape_from_json(j.at("escape"));
        cfg.escape.validate();
    }
    if (j.contains("output")) {
        cfg.output = output_from_json(j.at("output"));
    }
    // fail fast on everything else the blocks can express
    auto model = cfg.build_model();
    cfg.domain.validate(*model);
    cfg.resolve_integrator(*model).validate();
    cfg.build_observables();
    if (cfg.escape_enabled && cfg.escape.coordinate >= model->dim()) {
        throw ValidationError("escape: coordinate outside the model state");
    }
    return cfg;
}

RunConfiguration RunConfiguration::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open configuration '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("configuration '" + path.string() + "': " + e.what());
    }
    return from_json(j);
}

RunConfiguration RunConfiguration::parse_echo(const std::string& canonical_json) {
    return from_json(json::parse(canonical_json));
}

nlohmann::json RunConfiguration::to_json() const {
    json j{{"model", model_to_json(model)},
           {"integrator", integrator_spec_to_json(integrator)},
           {"domain", detail::domain_to_json(domain)},
           {"output", output_to_json(output)}};
    json obs = json::array();
    for (const auto& o : observables) {
        obs.push_back(observable_to_json(o));
    }
    j["observables"] = obs;
    if (escape_enabled) {
        j["escape"] = detail::escape_to_json(escape);
    }
    return j;
}

std::string RunConfiguration::canonical_echo() const { return to_json().dump(); }

std::unique_ptr<SystemModel> RunConfiguration::build_model() const {
    if (const auto* h = std::get_if<HarmonicSpec>(&model)) {
        return std::make_unique<HarmonicModel>(
            QuasiperiodicForcing(h->frequencies, h->amplitudes, h->phases));
    }
    if (const auto* d = std::get_if<DissipativeSpec>(&model)) {
        return std::make_unique<DissipativeModel>(
            d->decay_rate, QuasiperiodicForcing(d->frequencies, d->amplitudes, d->phases));
    }
    const auto& s = std::get<SwingSpec>(model);
    SwingParameters params;
    params.p_m = s.p_m;
    params.b = s.b;
    params.b_int = s.b_int;
    params.generator_count = s.generator_count;
    params.modes = s.modes;
    params.amplitudes = s.amplitudes;
    params.amplitude_rms = s.amplitude_rms;
    return std::make_unique<SwingModel>(params, s.initial_mode_phases);
}

IntegratorConfig RunConfiguration::resolve_integrator(const SystemModel& m) const {
    IntegratorConfig c;
    c.scheme = integrator.scheme == "symplectic4" ? Scheme::symplectic4 : Scheme::rk4;
    const double period = m.forcing().base_period();
    c.step = integrator.step > 0.0 ? integrator.step : period / integrator.steps_per_period;
    c.horizon = integrator.horizon > 0.0 ? integrator.horizon : period * integrator.periods;
    c.checkpoint_stride = integrator.checkpoint_stride;
    return c;
}

std::vector<Observable> RunConfiguration::build_observables() const {
    std::vector<Observable> out;
    for (const auto& spec : observables) {
        if (!spec.name.empty()) {
            out.push_back(make_builtin_observable(spec.name));
        } else {
            out.push_back(make_trig_poly_observable(spec.id, spec.coordinate, spec.constant,
                                                    spec.cos_coefficients,
                                                    spec.sin_coefficients));
        }
    }
    return out;
}

} // namespace qpart

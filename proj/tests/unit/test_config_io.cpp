#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qpart/errors.hpp"
#include "qpart/field_io.hpp"
#include "qpart/run_config.hpp"
#include "qpart/swing.hpp"

using namespace qpart;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json swing_config_json() {
    return json::parse(R"({
        "model": {"name": "swing", "p_m": 0.95, "b": 1.0, "b_int": 100.0,
                  "generators": 20, "modes": [1], "amplitude_rms": 1.5},
        "integrator": {"scheme": "symplectic4", "steps_per_period": 16, "periods": 5.0},
        "domain": {"axes": [
            {"coordinate": 0, "range": [1.0, 2.0], "samples": 5, "topology": "circle"},
            {"coordinate": 1, "range": [-0.15, 0.15], "samples": 4, "topology": "line"}],
            "fixed": [], "theta0": []},
        "observables": [{"name": "sin_2delta"}],
        "escape": {"coordinate": 1, "threshold": 0.5, "consecutive_steps": 10},
        "output": {"directory": "out", "prefix": "smoke", "colormap": "viridis256"}
    })");
}

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "qpart_io_tests";
    fs::create_directories(dir);
    return dir;
}

TimeAverageField small_field() {
    const auto cfg = RunConfiguration::from_json(swing_config_json());
    const auto model = cfg.build_model();
    const auto fields = sweep(*model, cfg.domain, cfg.build_observables(),
                              cfg.resolve_integrator(*model), cfg.escape_or_none());
    auto field = fields.front();
    field.set_config_echo(cfg.canonical_echo());
    return field;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_SUITE("config_io") {

TEST_CASE("configuration validation") {
    SUBCASE("valid document parses and builds") {
        const auto cfg = RunConfiguration::from_json(swing_config_json());
        const auto model = cfg.build_model();
        CHECK(model->name() == "swing");
        const auto integ = cfg.resolve_integrator(*model);
        CHECK(integ.scheme == Scheme::symplectic4);
        CHECK(integ.step == doctest::Approx(model->forcing().base_period() / 16.0));
        CHECK(integ.horizon == doctest::Approx(model->forcing().base_period() * 5.0));
        CHECK(cfg.escape_enabled);
    }
    SUBCASE("unknown keys are hard errors") {
        auto j = swing_config_json();
        j["model"]["typo"] = 1;
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
        j = swing_config_json();
        j["extra_block"] = json::object();
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
        j = swing_config_json();
        j["integrator"]["h"] = 0.1; // must be 'step'
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
    }
    SUBCASE("negative frequency surfaces before any computation") {
        auto j = swing_config_json();
        j["model"] = {{"name", "harmonic"},
                      {"frequencies", {-1.0, 1.1}},
                      {"amplitudes", {0.2, 0.2}},
                      {"phases", {0.0, 0.0}}};
        j["domain"]["axes"][0] = {{"coordinate", 0},
                                  {"range", {-10.0, 10.0}},
                                  {"samples", 5},
                                  {"topology", "line"}};
        j["domain"]["axes"][1] = {{"coordinate", 1},
                                  {"range", {-10.0, 10.0}},
                                  {"samples", 5},
                                  {"topology", "line"}};
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
    }
    SUBCASE("both or neither of step/steps_per_period is an error") {
        auto j = swing_config_json();
        j["integrator"]["step"] = 0.01; // alongside steps_per_period
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
        j = swing_config_json();
        j["integrator"].erase("steps_per_period");
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
    }
    SUBCASE("observables must be non-empty") {
        auto j = swing_config_json();
        j["observables"] = json::array();
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
    }
    SUBCASE("unknown colormap rejected") {
        auto j = swing_config_json();
        j["output"]["colormap"] = "jet";
        CHECK_THROWS_AS(RunConfiguration::from_json(j), ValidationError);
    }
}

TEST_CASE("configuration echo round-trips to an identical document") {
    const auto cfg = RunConfiguration::from_json(swing_config_json());
    const std::string echo = cfg.canonical_echo();
    const auto reparsed = RunConfiguration::parse_echo(echo);
    CHECK(reparsed.canonical_echo() == echo);

    // a harmonic config with a custom trig-polynomial observable
    const auto j = json::parse(R"({
        "model": {"name": "harmonic", "frequencies": [1.0471975511965976, 1.1],
                  "amplitudes": [0.2, 0.2], "phases": [1.5707963267948966, 0.0]},
        "integrator": {"scheme": "rk4", "step": 0.02, "periods": 10.0},
        "domain": {"axes": [
            {"coordinate": 0, "range": [-10.0, 10.0], "samples": 3, "topology": "line"},
            {"coordinate": 1, "range": [-10.0, 10.0], "samples": 3, "topology": "line"}],
            "fixed": [], "theta0": []},
        "observables": [{"name": "m1_squared"},
                        {"id": "wave", "coordinate": 0, "cos": [0.5], "sin": [0.0, 1.0]}],
        "output": {"directory": "out", "prefix": "h", "colormap": "viridis256"}
    })");
    const auto hcfg = RunConfiguration::from_json(j);
    CHECK(!hcfg.escape_enabled);
    const auto echo2 = hcfg.canonical_echo();
    CHECK(RunConfiguration::parse_echo(echo2).canonical_echo() == echo2);
    CHECK(hcfg.build_observables().size() == 2);
}

TEST_CASE("field container: save/load is byte-identical") {
    const auto field = small_field();
    const auto dir = temp_dir();
    const auto path_a = dir / "field_a.qpfield";
    const auto path_b = dir / "field_b.qpfield";
    save_field(field, path_a);
    const auto loaded = load_field(path_a);
    CHECK(loaded.observable_id() == field.observable_id());
    CHECK(loaded.values() == field.values());
    CHECK(loaded.states() == field.states());
    CHECK(loaded.config_echo() == field.config_echo());
    CHECK(loaded.domain().axes[0].lo == field.domain().axes[0].lo);
    save_field(loaded, path_b);
    CHECK(read_bytes(path_a) == read_bytes(path_b));
    CHECK(probe_container(path_a) == ContainerKind::field);
    fs::remove(path_a);
    fs::remove(path_b);
}

TEST_CASE("the embedded configuration echo re-runs to the same field") {
    const auto field = small_field();
    const auto cfg = RunConfiguration::parse_echo(field.config_echo());
    const auto model = cfg.build_model();
    const auto rerun = sweep(*model, cfg.domain, cfg.build_observables(),
                             cfg.resolve_integrator(*model), cfg.escape_or_none());
    CHECK(rerun.front().values() == field.values());
    CHECK(rerun.front().states() == field.states());
}

TEST_CASE("field container: checksum catches corruption") {
    const auto field = small_field();
    const auto dir = temp_dir();
    const auto path = dir / "field_corrupt.qpfield";
    save_field(field, path);
    auto bytes = read_bytes(path);
    bytes[bytes.size() - 5] ^= 0x40; // flip a bit inside the body
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(load_field(path), IoError);
    fs::remove(path);
}

TEST_CASE("field container: wrong magic rejected") {
    const auto dir = temp_dir();
    const auto path = dir / "not_a_field.bin";
    {
        std::ofstream out(path, std::ios::binary);
        out << "BOGUSMAGICxxxxxxxxxxxxxxxx";
    }
    CHECK_THROWS_AS(load_field(path), IoError);
    CHECK_THROWS_AS(probe_container(path), IoError);
    fs::remove(path);
}

TEST_CASE("partition container round-trip") {
    const auto field = small_field();
    const std::vector<TimeAverageField> fields{field};
    const auto partition = joint_level_sets(fields);
    const auto dir = temp_dir();
    const auto path_a = dir / "part_a.qppart";
    const auto path_b = dir / "part_b.qppart";
    save_partition(partition, path_a);
    const auto loaded = load_partition(path_a);
    CHECK(loaded.labels == partition.labels);
    CHECK(loaded.label_bins == partition.label_bins);
    CHECK(loaded.bin_widths == partition.bin_widths);
    save_partition(loaded, path_b);
    CHECK(read_bytes(path_a) == read_bytes(path_b));
    CHECK(probe_container(path_a) == ContainerKind::partition);
    fs::remove(path_a);
    fs::remove(path_b);
}

TEST_CASE("atomic write leaves no temp file behind") {
    const auto dir = temp_dir();
    const auto path = dir / "atomic.txt";
    write_text_file(path, "payload");
    CHECK(read_bytes(path) == "payload");
    CHECK(!fs::exists(path.string() + ".tmp"));
    fs::remove(path);
}

TEST_CASE("every bundled preset validates and round-trips") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(QPART_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        INFO("preset ", entry.path().filename().string());
        const auto cfg = RunConfiguration::load(entry.path());
        const auto model = cfg.build_model();
        cfg.domain.validate(*model);
        cfg.resolve_integrator(*model).validate();
        const auto echo = cfg.canonical_echo();
        CHECK(RunConfiguration::parse_echo(echo).canonical_echo() == echo);
        ++count;
    }
    CHECK(count >= 20);
}

TEST_CASE("fnv1a checksum reference values") {
    // published FNV-1a test vectors
    const char empty[] = "";
    CHECK(fnv1a64(std::span<const char>(empty, 0)) == 0xcbf29ce484222325ull);
    const char a[] = "a";
    CHECK(fnv1a64(std::span<const char>(a, 1)) == 0xaf63dc4c8601ec8cull);
    CHECK(checksum_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
}

} // TEST_SUITE

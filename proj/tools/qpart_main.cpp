// qpart — time-averages, joint level sets, and boundedness certificates for
// quasiperiodically forced systems.
//
// Subcommands:
//   qpart verify <harmonic|dissipative|integrator>
//   qpart sweep <config.json> [--out DIR] [--threads N]
//   qpart partition <fields...> --eps SPEC --out DIR
//   qpart render <in> <out.ppm>
//   qpart phases <config.json> --k LIST [--out DIR] [--threads N]
//
// Exit status: 0 success, 1 validation failure, 2 numeric failure (verify),
// 3 I/O failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qpart/errors.hpp"
#include "qpart/field_io.hpp"
#include "qpart/render.hpp"
#include "qpart/run_config.hpp"
#include "qpart/swing.hpp"
#include "qpart/verify.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

void print_checks(const std::vector<qpart::CheckResult>& checks) {
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": measured "
                  << std::setprecision(6) << c.measured << " vs tolerance " << c.tolerance;
        if (!c.detail.empty()) {
            std::cout << "  [" << c.detail << "]";
        }
        std::cout << "\n";
    }
}

int run_verify(const std::string& suite) {
    std::vector<qpart::CheckResult> checks;
    if (suite == "harmonic") {
        checks = qpart::verify_harmonic();
    } else if (suite == "dissipative") {
        checks = qpart::verify_dissipative();
    } else if (suite == "integrator") {
        checks = qpart::verify_integrator();
    } else {
        throw qpart::ValidationError("unknown verify suite '" + suite +
                                     "' (harmonic, dissipative, integrator)");
    }
    print_checks(checks);
    const int failures = qpart::count_failures(checks);
    std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
              << "\n";
    return failures == 0 ? 0 : 2;
}

void print_warnings(const qpart::SystemModel& model) {
    for (const auto& w : model.forcing().resonance_warnings()) {
        std::cerr << "warning: " << w << "\n";
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

int run_sweep(const std::string& config_path, const std::string& out_override, int threads) {
    const auto config = qpart::RunConfiguration::load(config_path);
    const auto model = config.build_model();
    print_warnings(*model);

    const auto observables = config.build_observables();
    const auto integrator = config.resolve_integrator(*model);
    const auto escape = config.escape_or_none();

    qpart::SweepOptions options;
    options.threads = threads;
    options.progress = [](int done, int total) {
        std::cerr << "\rrow " << done << "/" << total << std::flush;
        if (done == total) {
            std::cerr << "\n";
        }
    };

    const fs::path out_dir = out_override.empty() ? fs::path(config.output.directory)
                                                  : fs::path(out_override);
    fs::create_directories(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    auto fields = qpart::sweep(*model, config.domain, observables, integrator, escape, options);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string echo = config.canonical_echo();
    json manifest{{"tool", std::string("qpart ") + kVersion},
                  {"created_utc", utc_timestamp()},
                  {"seconds", seconds},
                  {"config", json::parse(echo)},
                  {"fields", json::array()}};
    for (auto& field : fields) {
        field.set_config_echo(echo);
        const fs::path path =
            out_dir / (config.output.prefix + "_" + field.observable_id() + ".qpfield");
        qpart::save_field(field, path);
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        manifest["fields"].push_back(
            {{"observable", field.observable_id()},
             {"path", path.filename().string()},
             {"checksum", qpart::checksum_hex(qpart::fnv1a64(std::span<const char>(bytes)))}});
        std::cout << "wrote " << path.string() << "\n";
    }
    const fs::path manifest_path = out_dir / (config.output.prefix + "_manifest.json");
    qpart::write_text_file(manifest_path, manifest.dump(2) + "\n");
    std::cout << "wrote " << manifest_path.string() << "\n";
    return 0;
}

std::vector<double> parse_eps_spec(const std::string& spec, std::size_t n_fields) {
    if (spec == "auto") {
        return {};
    }
    std::vector<double> eps;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            eps.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw qpart::ValidationError("--eps: cannot parse '" + item + "'");
        }
    }
    if (eps.size() == 1 && n_fields > 1) {
        eps.assign(n_fields, eps.front());
    }
    if (eps.size() != n_fields) {
        throw qpart::ValidationError("--eps: expected 'auto', one width, or one per field");
    }
    for (double e : eps) {
        if (!(e > 0.0)) {
            throw qpart::ValidationError("--eps: bin widths must be > 0");
        }
    }
    return eps;
}

int run_partition(const std::vector<std::string>& field_paths, const std::string& eps_spec,
                  const std::string& out_dir_str) {
    std::vector<qpart::TimeAverageField> fields;
    for (const auto& p : field_paths) {
        fields.push_back(qpart::load_field(p));
    }
    const auto eps = parse_eps_spec(eps_spec, fields.size());
    const auto partition = qpart::joint_level_sets(fields, eps);
    const auto report = qpart::boundedness_report(partition);

    const fs::path out_dir(out_dir_str);
    fs::create_directories(out_dir);
    const fs::path grid_path = out_dir / "partition.qppart";
    qpart::save_partition(partition, grid_path);

    std::ostringstream text;
    text << "joint level sets of " << fields.size() << " field(s): ";
    for (std::size_t f = 0; f < fields.size(); ++f) {
        text << (f ? ", " : "") << partition.observable_ids[f]
             << " (eps = " << partition.bin_widths[f] << ", origin = " << partition.origins[f]
             << ")";
    }
    text << "\n";
    if (const auto& esc = fields.front().escape_predicate()) {
        text << "escape rule: |state[" << esc->coordinate << "]| > " << esc->threshold
             << " for " << esc->consecutive_steps << " consecutive steps\n";
    }
    text << "labels: " << partition.label_bins.size() << " + escaped\n\n";
    for (const auto& r : report.labels) {
        if (r.label == qpart::PartitionField::kEscapedLabel) {
            text << "label escaped";
        } else {
            text << "label (";
            for (std::size_t f = 0; f < r.bins.size(); ++f) {
                text << (f ? "," : "") << r.bins[f];
            }
            text << ")";
        }
        text << "  cells=" << r.cell_count << "  bbox=[" << r.i_min << ".." << r.i_max << "]x["
             << r.k_min << ".." << r.k_max << "]  verdict=" << qpart::to_string(r.verdict);
        if (r.verdict == qpart::Verdict::bounded_slice) {
            text << "  certified: " << report.certification;
        }
        text << "\n";
    }
    const fs::path report_path = out_dir / "boundedness_report.txt";
    qpart::write_text_file(report_path, text.str());
    std::cout << "wrote " << grid_path.string() << "\n";
    std::cout << "wrote " << report_path.string() << "\n";
    return 0;
}

int run_phases(const std::string& config_path, const std::vector<int>& ks,
               const std::string& out_override, int threads) {
    if (ks.empty()) {
        throw qpart::ValidationError("phases: non-empty --k list required");
    }
    const auto config = qpart::RunConfiguration::load(config_path);
    const auto model = config.build_model();
    print_warnings(*model);
    const auto observables = config.build_observables();
    const auto integrator = config.resolve_integrator(*model);
    const auto escape = config.escape_or_none();

    // theta_0(k) = (2 pi k Omega_1 / Omega_2 mod 2 pi, 0, ...)
    const auto& freqs = model->forcing().frequencies();
    if (freqs.size() < 2) {
        throw qpart::ValidationError("phases: the model needs at least two drive frequencies");
    }
    std::vector<std::vector<double>> phases;
    for (int k : ks) {
        std::vector<double> phase(freqs.size(), 0.0);
        phase[0] = qpart::wrap_angle(2.0 * std::numbers::pi * k * freqs[0] / freqs[1]);
        phases.push_back(std::move(phase));
    }

    qpart::SweepOptions options;
    options.threads = threads;
    qpart::PhaseComparison cmp;
    if (phases.size() == 1) {
        // single row: one sweep, trivially full self-overlap
        qpart::ScanDomain domain = config.domain;
        domain.initial_phase = phases.front();
        const qpart::Observable obs[1] = {observables.front()};
        const auto fields = qpart::sweep(*model, domain, obs, integrator, escape, options);
        long non_escaped = 0;
        for (long idx = 0; idx < fields.front().size(); ++idx) {
            non_escaped += fields.front().states()[idx] != qpart::CellState::escaped;
        }
        cmp.phases = {phases.front()};
        cmp.bounded_fraction = {static_cast<double>(non_escaped) / fields.front().size()};
        cmp.overlap = {{1.0}};
    } else {
        cmp = qpart::phase_shift_comparison(*model, config.domain, observables.front(),
                                            integrator, escape, phases, options);
    }

    std::ostringstream table;
    table << "# k\ttheta_0\tbounded_fraction\n";
    table << std::setprecision(12);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        table << ks[i] << "\t" << cmp.phases[i][0] << "\t" << cmp.bounded_fraction[i] << "\n";
    }
    table << "# pairwise overlap (jaccard of non-escaped masks)\n";
    for (std::size_t a = 0; a < ks.size(); ++a) {
        for (std::size_t b = 0; b < ks.size(); ++b) {
            table << (b ? "\t" : "") << cmp.overlap[a][b];
        }
        table << "\n";
    }

    const fs::path out_dir = out_override.empty() ? fs::path(config.output.directory)
                                                  : fs::path(out_override);
    fs::create_directories(out_dir);
    const fs::path table_path = out_dir / (config.output.prefix + "_phases.tsv");
    qpart::write_text_file(table_path, table.str());
    std::cout << "wrote " << table_path.string() << "\n";
    std::cout << table.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-averages and ergodic partitions of quasiperiodically forced systems"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string verify_suite;
    auto* verify_cmd = app.add_subcommand("verify", "run a built-in oracle/conservation suite");
    verify_cmd->add_option("suite", verify_suite, "harmonic | dissipative | integrator")
        ->required();

    std::string sweep_config;
    std::string sweep_out;
    int sweep_threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "integrate a grid of initial conditions");
    sweep_cmd->add_option("config", sweep_config, "run configuration (JSON)")->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory (overrides the config)");
    sweep_cmd->add_option("--threads", sweep_threads, "worker threads (0 = hardware)");

    std::vector<std::string> partition_fields;
    std::string partition_eps = "auto";
    std::string partition_out = "out";
    auto* partition_cmd =
        app.add_subcommand("partition", "joint level sets + boundedness report");
    partition_cmd->add_option("fields", partition_fields, "field files")->required();
    partition_cmd->add_option("--eps", partition_eps, "bin widths: auto | w | w1,w2,...");
    partition_cmd->add_option("--out", partition_out, "output directory")->required();

    std::string render_in;
    std::string render_out;
    auto* render_cmd = app.add_subcommand("render", "rasterize a field or partition to P6");
    render_cmd->add_option("in", render_in, "field or partition file")->required();
    render_cmd->add_option("out", render_out, "output .ppm path")->required();

    std::string phases_config;
    std::vector<int> phases_k;
    std::string phases_out;
    int phases_threads = 0;
    auto* phases_cmd = app.add_subcommand("phases", "sweep across initial drive phases");
    phases_cmd->add_option("config", phases_config, "run configuration (JSON)")->required();
    phases_cmd->add_option("--k", phases_k, "phase indices k")->required()->delimiter(',');
    phases_cmd->add_option("--out", phases_out, "output directory (overrides the config)");
    phases_cmd->add_option("--threads", phases_threads, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) {
            return run_verify(verify_suite);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(sweep_config, sweep_out, sweep_threads);
        }
        if (partition_cmd->parsed()) {
            return run_partition(partition_fields, partition_eps, partition_out);
        }
        if (render_cmd->parsed()) {
            qpart::render_file(render_in, render_out);
            std::cout << "wrote " << render_out << " and " << render_out << ".legend.txt\n";
            return 0;
        }
        if (phases_cmd->parsed()) {
            return run_phases(phases_config, phases_k, phases_out, phases_threads);
        }
    } catch (const qpart::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qpart::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qpart::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

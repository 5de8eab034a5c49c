// main.cpp — jpm command line: seeded experiment orchestration and file emission
//
// Modes: resolve-check | ideal-run | finite-t-sweep | qubit-demo | estimate-axis.
// Configuration is a single JSON document (--config PATH); --seed, --out and
// --mode override individual fields.  Exit codes: 0 success, 2 bad config,
// 3 domain error.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jpm/channel.hpp"
#include "jpm/finite_time.hpp"
#include "jpm/io.hpp"
#include "jpm/qubit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Errors raised while building inputs out of config fields are configuration
// problems (exit 2).  DegenerateSpectrum stays a domain error (exit 3): the
// config may legitimately describe a degenerate system.
template <typename Fn>
auto from_config(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const jpm::DegenerateSpectrum&) {
        throw;
    } catch (const jpm::ConfigInvalid&) {
        throw;
    } catch (const jpm::Error& e) {
        throw jpm::ConfigInvalid(e.what());
    }
}

const json& require_field(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key)) throw jpm::ConfigInvalid(context + ": missing field '" + key + "'");
    return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& context) {
    const json& field = require_field(j, key, context);
    if (!field.is_number()) throw jpm::ConfigInvalid(context + ": field '" + key + "' must be a number");
    return field.get<double>();
}

Eigen::Vector3d vector3_of(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 3)
        throw jpm::ConfigInvalid(context + ": expected an array of 3 numbers");
    for (const json& v : j)
        if (!v.is_number()) throw jpm::ConfigInvalid(context + ": entries must be numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::vector<double> deltas_of(const json& config) {
    const json& detectors = require_field(config, "detectors", "config");
    const json& deltas = require_field(detectors, "deltas", "config.detectors");
    if (!deltas.is_array() || deltas.empty())
        throw jpm::ConfigInvalid("config.detectors.deltas: expected a non-empty array");
    std::vector<double> out;
    for (const json& v : deltas) {
        if (!v.is_number()) throw jpm::ConfigInvalid("config.detectors.deltas: entries must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::uint64_t seed_of(const json& config, const std::string& mode) {
    if (!config.contains("seed"))
        throw jpm::ConfigInvalid("config.seed: required for sampling mode '" + mode + "'");
    const json& seed = config.at("seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
        throw jpm::ConfigInvalid("config.seed: must be a non-negative integer");
    if (seed.is_number_integer() && seed.get<std::int64_t>() < 0)
        throw jpm::ConfigInvalid("config.seed: must be a non-negative integer");
    return seed.get<std::uint64_t>();
}

int samples_of(const json& config, int minimum) {
    const double n = require_number(config, "n_samples", "config");
    if (n != std::floor(n) || n < minimum)
        throw jpm::ConfigInvalid("config.n_samples: must be an integer >= " + std::to_string(minimum));
    return static_cast<int>(n);
}

double kappa_of(const json& config) {
    if (!config.contains("kappa")) return jpm::kDefaultKappa;
    const double kappa = require_number(config, "kappa", "config");
    if (!(kappa > 0.0)) throw jpm::ConfigInvalid("config.kappa: must be > 0");
    return kappa;
}

bool test_mode_of(const json& config) {
    if (!config.contains("test_mode")) return false;
    if (!config.at("test_mode").is_boolean()) throw jpm::ConfigInvalid("config.test_mode: must be a boolean");
    return config.at("test_mode").get<bool>();
}

// System block: either explicit matrices or qubit parameters (field + bloch).
struct SystemSetup {
    jpm::SpectralDecomposition basis;
    std::vector<jpm::HermitianOperator> observables;
    std::optional<jpm::SystemState> state;
    std::optional<jpm::FieldConfig> field; // retained as axis ground truth
};

jpm::FieldConfig field_of(const json& system) {
    const json& field = require_field(system, "field", "config.system");
    jpm::FieldConfig f;
    f.omega = require_number(field, "omega", "config.system.field");
    f.axis = vector3_of(require_field(field, "axis", "config.system.field"), "config.system.field.axis");
    return f;
}

jpm::BlochState bloch_of(const json& system) {
    return
        jpm::BlochState{vector3_of(require_field(system, "bloch", "config.system"), "config.system.bloch")};
}

SystemSetup system_of(const json& config, bool need_state) {
    const json& system = require_field(config, "system", "config");
    SystemSetup setup;

    if (system.contains("field")) {
        setup.field = field_of(system);
        setup.basis = jpm::spectral_decompose(jpm::make_field_hamiltonian(*setup.field));
        setup.observables = jpm::pauli_observables();
        if (need_state) setup.state = jpm::make_qubit_state(bloch_of(system));
        return setup;
    }

    const json& h = require_field(system, "hamiltonian", "config.system");
    setup.basis = jpm::spectral_decompose(jpm::HermitianOperator(jpm::matrix_from_json(h)));
    const json& observables = require_field(system, "observables", "config.system");
    if (!observables.is_array() || observables.empty())
        throw jpm::ConfigInvalid("config.system.observables: expected a non-empty array of matrices");
    for (const json& oj : observables)
        setup.observables.emplace_back(jpm::matrix_from_json(oj));
    if (need_state)
        setup.state = jpm::state_from_json(require_field(system, "state", "config.system"));
    return setup;
}

void write_file(const fs::path& path, const std::string& content, std::vector<std::string>& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw jpm::Error("cannot open output file " + path.string());
    out << content;
    out.close();
    if (!fs::exists(path) || fs::file_size(path) == 0)
        throw jpm::Error("output file " + path.string() + " is missing or empty");
    manifest.push_back(path.filename().string());
}

// --------------------------------- modes ------------------------------------

struct ModeResult {
    std::vector<std::string> files;
    std::optional<json> resolvability;
};

ModeResult run_resolve_check(const json& config, const fs::path& out_dir) {
    const SystemSetup setup = from_config([&] { return system_of(config, false); });
    const jpm::DetectorBank bank = from_config([&] { return jpm::make_detector_bank(deltas_of(config)); });
    const auto table = jpm::stationary_expectations(setup.observables, setup.basis);
    const auto report = jpm::check_resolvability(table, bank, kappa_of(config));

    ModeResult result;
    result.resolvability = jpm::resolvability_to_json(report);
    write_file(out_dir / "resolvability.json", result.resolvability->dump(2) + "\n", result.files);
    return result;
}

ModeResult run_ideal(const json& config, const fs::path& out_dir) {
    const SystemSetup setup = from_config([&] { return system_of(config, true); });
    const jpm::DetectorBank bank = from_config([&] { return jpm::make_detector_bank(deltas_of(config)); });
    const auto table = jpm::stationary_expectations(setup.observables, setup.basis);
    const double kappa = kappa_of(config);
    const auto resolvability = jpm::check_resolvability(table, bank, kappa);
    const auto channel = jpm::make_ideal_channel(setup.basis, table, bank);
    const bool test_mode = test_mode_of(config);

    const auto output = jpm::apply_ideal_channel(channel, *setup.state);
    const int n = samples_of(config, 1);
    const auto batch = jpm::sample_readouts(channel, *setup.state, seed_of(config, "ideal-run"), n, kappa);

    ModeResult result;
    result.resolvability = jpm::resolvability_to_json(resolvability);
    write_file(out_dir / "distribution.json", jpm::distribution_to_json(output.distribution).dump(2) + "\n",
               result.files);
    write_file(out_dir / "readouts.csv", jpm::readout_csv(batch, test_mode), result.files);
    return result;
}

ModeResult run_finite_sweep(const json& config, const fs::path& out_dir) {
    const SystemSetup setup = from_config([&] { return system_of(config, false); });
    const jpm::DetectorBank bank = from_config([&] { return jpm::make_detector_bank(deltas_of(config)); });
    const auto table = jpm::stationary_expectations(setup.observables, setup.basis);

    const json& sweep = require_field(config, "t_sweep", "config");
    const double t_min = require_number(sweep, "t_min", "config.t_sweep");
    const double t_max = require_number(sweep, "t_max", "config.t_sweep");
    const double ppd = sweep.contains("points_per_decade")
                           ? require_number(sweep, "points_per_decade", "config.t_sweep")
                           : 8.0;
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw jpm::ConfigInvalid("config.t_sweep: need 0 < t_min < t_max");
    if (ppd != std::floor(ppd) || ppd < 1)
        throw jpm::ConfigInvalid("config.t_sweep.points_per_decade: must be an integer >= 1");

    int grid_points = 64;
    double coverage = 5.0;
    if (config.contains("grid")) {
        const json& grid = config.at("grid");
        if (grid.contains("points_per_detector"))
            grid_points = static_cast<int>(require_number(grid, "points_per_detector", "config.grid"));
        if (grid.contains("coverage_sigmas"))
            coverage = require_number(grid, "coverage_sigmas", "config.grid");
    }

    const auto grid = from_config([&] { return jpm::build_momentum_grid(bank, grid_points, coverage); });
    std::vector<Eigen::VectorXd> shifts;
    for (int n = 0; n < setup.basis.dimension(); ++n) shifts.push_back(table.shift_vector(n));

    const auto curve =
        jpm::sweep_channel_distance(setup.observables, setup.basis, shifts, grid, t_min, t_max,
                                    static_cast<int>(ppd));

    ModeResult result;
    write_file(out_dir / "convergence.csv", jpm::convergence_csv(curve), result.files);
    return result;
}

ModeResult run_qubit_demo(const json& config, const fs::path& out_dir) {
    const json& system = require_field(config, "system", "config");
    const jpm::FieldConfig field = field_of(system);
    const jpm::BlochState bloch = bloch_of(system);
    const std::vector<double> deltas = deltas_of(config);
    if (deltas.size() != 3)
        throw jpm::ConfigInvalid("config.detectors.deltas: qubit-demo needs exactly 3 detectors");
    for (double d : deltas)
        if (!(d > 0.0) || d > jpm::kMaxQubitDelta)
            throw jpm::ConfigInvalid("config.detectors.deltas: entries must lie in (0, 0.2]");

    const double kappa = kappa_of(config);
    const bool test_mode = test_mode_of(config);
    const int n = samples_of(config, 2);
    const std::uint64_t seed = seed_of(config, "qubit-demo");

    const jpm::IdealChannel channel = from_config(
        [&] { return jpm::make_pauli_channel(field, Eigen::Vector3d{deltas[0], deltas[1], deltas[2]}); });
    const jpm::SystemState state = from_config([&] { return jpm::make_qubit_state(bloch); });
    const auto table = jpm::stationary_expectations(jpm::pauli_observables(), channel.basis);
    const auto resolvability = jpm::check_resolvability(table, channel.bank, kappa);

    const auto batch = jpm::sample_readouts(channel, state, seed, n, kappa);

    int plus = 0, ambiguous = 0;
    std::vector<Eigen::Vector3d> points;
    points.reserve(batch.samples.size());
    for (const auto& sample : batch.samples) {
        const auto sign = jpm::branch_sign(sample.classified);
        if (!sign)
            ++ambiguous;
        else if (*sign > 0)
            ++plus;
        points.emplace_back(sample.x(0), sample.x(1), sample.x(2));
    }
    const jpm::AxisEstimate estimate = jpm::estimate_axis(points, field.axis);

    json summary = jpm::axis_estimate_to_json(estimate, test_mode);
    summary["branch_frequency"] = static_cast<double>(plus) / static_cast<double>(n);
    summary["n_ambiguous"] = ambiguous;
    summary["kappa"] = kappa;
    summary["resolvability"] = jpm::resolvability_to_json(resolvability);

    ModeResult result;
    result.resolvability = summary["resolvability"];
    write_file(out_dir / "runs.csv", jpm::qubit_campaign_csv(batch, test_mode), result.files);
    write_file(out_dir / "summary.json", summary.dump(2) + "\n", result.files);
    return result;
}

std::vector<Eigen::Vector3d> read_campaign_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw jpm::ConfigInvalid("config.samples_csv: cannot open " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw jpm::ConfigInvalid("config.samples_csv: empty file");

    std::vector<std::string> columns;
    std::stringstream hs(header);
    for (std::string cell; std::getline(hs, cell, ',');) columns.push_back(cell);
    int ix = -1, iy = -1, iz = -1;
    for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
        if (columns[i] == "x1" || columns[i] == "x_1") ix = i;
        if (columns[i] == "x2" || columns[i] == "x_2") iy = i;
        if (columns[i] == "x3" || columns[i] == "x_3") iz = i;
    }
    if (ix < 0 || iy < 0 || iz < 0)
        throw jpm::ConfigInvalid("config.samples_csv: header must contain x1,x2,x3 columns");

    std::vector<Eigen::Vector3d> points;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        auto value = [&](int i) {
            double v = 0.0;
            const auto& s = cells.at(i);
            const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
            if (r.ec != std::errc()) throw jpm::ConfigInvalid("config.samples_csv: bad number '" + s + "'");
            return v;
        };
        points.emplace_back(value(ix), value(iy), value(iz));
    }
    return points;
}

ModeResult run_estimate_axis(const json& config, const fs::path& out_dir) {
    const json& path = require_field(config, "samples_csv", "config");
    if (!path.is_string()) throw jpm::ConfigInvalid("config.samples_csv: must be a path string");
    const auto points = read_campaign_csv(path.get<std::string>());

    std::optional<Eigen::Vector3d> truth;
    if (config.contains("system") && config.at("system").contains("field"))
        truth = field_of(config.at("system")).axis;

    const jpm::AxisEstimate estimate = jpm::estimate_axis(points, truth);

    ModeResult result;
    write_file(out_dir / "axis.json", jpm::axis_estimate_to_json(estimate, test_mode_of(config)).dump(2) + "\n",
               result.files);
    return result;
}

int run(const json& config) {
    const std::string mode = [&] {
        const json& m = require_field(config, "mode", "config");
        if (!m.is_string()) throw jpm::ConfigInvalid("config.mode: must be a string");
        return m.get<std::string>();
    }();

    const fs::path out_dir = config.value("output_dir", std::string("out"));
    fs::create_directories(out_dir);

    const auto started = std::chrono::steady_clock::now();
    ModeResult result;
    if (mode == "resolve-check")
        result = run_resolve_check(config, out_dir);
    else if (mode == "ideal-run")
        result = run_ideal(config, out_dir);
    else if (mode == "finite-t-sweep")
        result = run_finite_sweep(config, out_dir);
    else if (mode == "qubit-demo")
        result = run_qubit_demo(config, out_dir);
    else if (mode == "estimate-axis")
        result = run_estimate_axis(config, out_dir);
    else
        throw jpm::ConfigInvalid("config.mode: unknown mode '" + mode + "'");
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

    json report;
    report["version"] = jpm::kVersion;
    report["mode"] = mode;
    report["config"] = config;
    report["files"] = result.files;
    report["wall_time_s"] = elapsed.count();
    if (result.resolvability) report["resolvability"] = *result.resolvability;

    std::ofstream out(out_dir / "report.json", std::ios::binary);
    out << report.dump(2) << "\n";
    out.close();

    std::cout << "mode " << mode << " done in " << elapsed.count() << " s; outputs in " << out_dir.string()
              << "\n";
    for (const std::string& f : result.files) std::cout << "  " << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jpm — joint protective measurement simulator"};
    app.get_formatter()->column_width(28);

    std::string config_path;
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    std::optional<std::uint64_t> seed_override;
    app.add_option("--seed", seed_override, "override config.seed");
    std::optional<std::string> out_override;
    app.add_option("--out", out_override, "override config.output_dir");
    std::optional<std::string> mode_override;
    app.add_option("--mode", mode_override, "override config.mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::ifstream in(config_path);
        if (!in) throw jpm::ConfigInvalid("config: cannot open " + config_path);
        json config;
        try {
            config = json::parse(in);
        } catch (const json::parse_error& e) {
            throw jpm::ConfigInvalid(std::string("config: ") + e.what());
        }
        if (seed_override) config["seed"] = *seed_override;
        if (out_override) config["output_dir"] = *out_override;
        if (mode_override) config["mode"] = *mode_override;
        return run(config);
    } catch (const jpm::ConfigInvalid& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const jpm::Error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

// Batch front-end: each subcommand reproduces one family of outputs
// (mu-of-l, loc-curve, fit, thermo, emission) as bit-stable CSV files plus a
// run manifest. Configuration comes from an INI-style file with one section
// per subcommand; print-config dumps the defaults.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bglass/bglass.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_numerical_error = 3;

// ---------------------------------------------------------------- config --

struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string raw;
};

std::string trim(const std::string& text) {
    const auto a = text.find_first_not_of(" \t\r");
    const auto b = text.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : text.substr(a, b - a + 1);
}

ConfigFile parse_config(const std::string& path, std::vector<std::string>& errors) {
    ConfigFile config;
    std::ifstream file(path);
    if (!file) {
        errors.push_back("cannot open config file: " + path);
        return config;
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    config.raw = buffer.str();

    std::istringstream stream(config.raw);
    std::string line, section;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(line_number) + ": malformed section");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            config.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line_number) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        if (section.empty()) {
            errors.push_back("line " + std::to_string(line_number) + ": key '" + key +
                             "' outside any [section]");
            continue;
        }
        config.sections[section][key] = trim(line.substr(eq + 1));
    }
    return config;
}

// Typed, range-checked reads with field-level messages; consumed keys are
// tracked so typos in known sections are reported.
class Validator {
public:
    Validator(const ConfigFile& config, std::vector<std::string>& errors)
        : config_(config), errors_(errors) {}

    double number(const std::string& section, const std::string& key, double fallback,
                  double lo, double hi) {
        const std::string* text = find(section, key);
        if (!text) return fallback;
        double value = fallback;
        try {
            std::size_t used = 0;
            value = std::stod(*text, &used);
            if (used != text->size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            errors_.push_back(section + "." + key + ": not a number: '" + *text + "'");
            return fallback;
        }
        if (!(value >= lo) || !(value <= hi)) {
            std::ostringstream message;
            message << section << "." << key << ": value " << value << " outside [" << lo
                    << ", " << hi << "]";
            errors_.push_back(message.str());
        }
        return value;
    }

    long integer(const std::string& section, const std::string& key, long fallback, long lo,
                 long hi) {
        const double value =
            number(section, key, static_cast<double>(fallback), static_cast<double>(lo),
                   static_cast<double>(hi));
        if (value != std::floor(value))
            errors_.push_back(section + "." + key + ": expected an integer");
        return static_cast<long>(value);
    }

    bool flag(const std::string& section, const std::string& key, bool fallback) {
        const std::string* text = find(section, key);
        if (!text) return fallback;
        if (*text == "true" || *text == "1") return true;
        if (*text == "false" || *text == "0") return false;
        errors_.push_back(section + "." + key + ": expected true/false");
        return fallback;
    }

    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) {
        const std::string* value = find(section, key);
        return value ? *value : fallback;
    }

    // flag unknown keys in every section this subcommand read
    void finish() {
        for (const auto& section : touched_) {
            const auto it = config_.sections.find(section);
            if (it == config_.sections.end()) continue;
            for (const auto& [key, value] : it->second)
                if (!consumed_.count(section + "." + key))
                    errors_.push_back(section + "." + key + ": unknown key");
        }
    }

private:
    const std::string* find(const std::string& section, const std::string& key) {
        touched_.insert(section);
        consumed_.insert(section + "." + key);
        const auto sec = config_.sections.find(section);
        if (sec == config_.sections.end()) return nullptr;
        const auto item = sec->second.find(key);
        return item == sec->second.end() ? nullptr : &item->second;
    }

    const ConfigFile& config_;
    std::vector<std::string>& errors_;
    std::set<std::string> touched_;
    std::set<std::string> consumed_;
};

bglass::SolverOptions read_solver(Validator& v) {
    bglass::SolverOptions options;
    options.nodes_per_unit = static_cast<int>(v.integer("solver", "nodes_per_unit", 256, 32, 4096));
    options.pilot_nodes_per_unit =
        static_cast<int>(v.integer("solver", "pilot_nodes_per_unit", 128, 16, 4096));
    options.r_max_cap = v.number("solver", "r_max_cap", 300.0, 8.0, 10000.0);
    options.decay_efolds = v.number("solver", "decay_efolds", 9.0, 3.0, 40.0);
    options.tol_residual = v.number("solver", "tol_residual", 1e-9, 1e-14, 1e-4);
    options.tol_constraint = v.number("solver", "tol_constraint", 1e-10, 1e-15, 1e-4);
    options.max_iterations = v.integer("solver", "max_iterations", 200000, 100, 10000000);
    return options;
}

bglass::ScanOptions read_scan(Validator& v, const bglass::SolverOptions& solver) {
    bglass::ScanOptions scan;
    scan.solver = solver;
    scan.l_min = v.number("scan", "l_min", 0.5, 1e-3, 1e4);
    scan.l_max = v.number("scan", "l_max", 40.0, 1e-3, 1e5);
    scan.coarse_count = static_cast<int>(v.integer("scan", "l_count", 80, 3, 100000));
    scan.refine_rel_tol = v.number("scan", "refine_rel_tol", 1e-4, 1e-10, 0.5);
    scan.probe_max_iterations = v.integer("scan", "probe_max_iterations", 20000, 100, 10000000);
    return scan;
}

bglass::EmissionModel read_emission_model(Validator& v, const std::string& section,
                                          const std::string& variant_flag) {
    bglass::EmissionModel model;
    model.a0 = v.number(section, "a0_m", 1e-8, 1e-12, 1e-5);
    model.lambda = v.number(section, "lambda_m", 228e-9, 1e-9, 1e-3);
    model.gamma0 = v.number(section, "gamma0", 1.0, 1e-12, 1e15);
    model.variant = variant_flag == "as-printed" ? bglass::CooperativityVariant::as_printed
                                                 : bglass::CooperativityVariant::limit_consistent;
    return model;
}

const char* default_config_text() {
    return R"(# bglass batch configuration; every key shown with its default.
# Sections are read only by the subcommand of the same name (plus [solver]
# and [scan], shared by the ground-state sweeps).

[solver]
nodes_per_unit = 256          # radial nodes per unit well radius
pilot_nodes_per_unit = 128    # resolution of the box-sizing pilot solve
r_max_cap = 300               # largest box, units of the well radius
decay_efolds = 9              # box extends to 1 + efolds/kappa
tol_residual = 1e-9           # relative stationary-equation residual
tol_constraint = 1e-10        # relative amplitude-condition mismatch
max_iterations = 200000

[scan]
l_min = 0.5                   # well-radius scan range, units of L0
l_max = 40
l_count = 80
refine_rel_tol = 1e-4         # relative tolerance on the optimal radius
probe_max_iterations = 20000

[mu-of-l]
u = 1.0
n_c = 0.06
l_min = 0.5
l_max = 8.0
l_count = 31

[loc-curve]
u = 1.0
n_min = 0.01
n_max = 0.072
n_count = 16
grid = threshold              # threshold | linear
threshold_hint = 0.074        # anchors the geometric refinement
fit_span = 0.1                # n_g searched in (n_max, n_max + span]
rescale_a = 1.0               # emit the curve mapped by u->u/a, n->a n

[fit]
input = curve.csv             # curve file to fit (relative to --out)
span = 0.1

[thermo]
u = 47.0
l0_m = 1e-8                   # disorder length scale, meters
n_cm2 = 1.2e10                # total density, 1/cm^2 (n_dimless overrides)
n_dimless = 0                 # optional direct dimensionless density
t_min_K = 0.05
t_max_K = 4.05
t_count = 40
alpha = 5.4                   # critical-curve coefficients
beta = -0.1317
n_g = 0.074
m_e = 0.0665                  # carrier masses, units of the electron mass
m_h = 0.377
material_file =               # optional preset file overriding m_e/m_h
include_enhancement = true    # append the emission-rate column
a0_m = 1e-8                   # exciton Bohr radius, meters
lambda_m = 2.28e-7            # wavelength in the material, meters
gamma0 = 1.0                  # bulk recombination rate, 1/s

[emission]
l_c_um = 1.0                  # localization length, micrometers
a0_m = 1e-8
lambda_m = 2.28e-7
gamma0 = 1.0
chi = 0.0                     # dipole orientation angle, radians
phi_count = 181
)";
}

// --------------------------------------------------------------- manifest --

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const ConfigFile& config, double wall_seconds,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["tool"] = "bglass";
    manifest["version"] = bglass::version_string;
    manifest["subcommand"] = subcommand;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(
                      bglass::csv::fnv1a_hash({config.raw.data(), config.raw.size()})));
    manifest["config_fnv1a"] = hash;
    manifest["wall_time_s"] = wall_seconds;
    manifest["outputs"] = outputs;
    std::ofstream file(out_dir / "manifest.json", std::ios::binary);
    file << manifest.dump(2) << '\n';
}

// ------------------------------------------------------------ subcommands --

struct RunContext {
    ConfigFile config;
    fs::path out_dir;
    int workers = 1;
    std::string variant = "limit-consistent";
};

int cmd_mu_of_l(const RunContext& context) {
    std::vector<std::string> errors;
    Validator v(context.config, errors);
    const bglass::SolverOptions solver = read_solver(v);
    const double u = v.number("mu-of-l", "u", 1.0, 0.0, 1e6);
    const double n_c = v.number("mu-of-l", "n_c", 0.06, 1e-12, 1e6);
    const double l_min = v.number("mu-of-l", "l_min", 0.5, 1e-3, 1e5);
    const double l_max = v.number("mu-of-l", "l_max", 8.0, 1e-3, 1e5);
    const long l_count = v.integer("mu-of-l", "l_count", 31, 0, 100000);
    v.finish();
    if (l_count > 1 && !(l_max > l_min)) errors.push_back("mu-of-l.l_max: must exceed l_min");
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << '\n';
        return exit_config_error;
    }

    std::vector<bglass::csv::MuOfLRow> rows(l_count);
    bglass::detail::parallel_for(rows.size(), context.workers, [&](std::size_t i) {
        bglass::GpProblem problem;
        problem.u = u;
        problem.n_c = n_c;
        problem.L = l_count == 1 ? l_min : l_min + (l_max - l_min) * i / (l_count - 1);
        problem.options = solver;
        rows[i].L = problem.L;
        try {
            const bglass::GpSolution solution = bglass::solve_gp(problem);
            rows[i].mu0 = solution.mu0;
            rows[i].localized = bglass::is_localized(solution);
            rows[i].L_c = rows[i].localized ? solution.coherence_length
                                            : std::nan("");
        } catch (const std::exception&) {
            rows[i].mu0 = std::nan("");
            rows[i].L_c = std::nan("");
            rows[i].localized = false;
        }
    });
    bglass::csv::write_mu_of_l((context.out_dir / "mu_of_l.csv").string(), rows);
    return exit_ok;
}

int cmd_loc_curve(const RunContext& context) {
    std::vector<std::string> errors;
    Validator v(context.config, errors);
    const bglass::SolverOptions solver = read_solver(v);
    bglass::CurveOptions options;
    options.scan = read_scan(v, solver);
    options.workers = context.workers;
    const double u = v.number("loc-curve", "u", 1.0, 1e-12, 1e6);
    const double n_min = v.number("loc-curve", "n_min", 0.01, 1e-12, 1e6);
    const double n_max = v.number("loc-curve", "n_max", 0.072, 1e-12, 1e6);
    const long n_count = v.integer("loc-curve", "n_count", 16, 1, 10000);
    const std::string grid_kind = v.text("loc-curve", "grid", "threshold");
    const double hint = v.number("loc-curve", "threshold_hint", 0.074, 1e-12, 1e6);
    const double fit_span = v.number("loc-curve", "fit_span", 0.1, 1e-9, 1e3);
    const double rescale_a = v.number("loc-curve", "rescale_a", 1.0, 1e-12, 1e12);
    v.finish();
    if (!(n_max > n_min) && n_count > 1) errors.push_back("loc-curve.n_max: must exceed n_min");
    if (grid_kind != "threshold" && grid_kind != "linear")
        errors.push_back("loc-curve.grid: expected 'threshold' or 'linear'");
    if (grid_kind == "threshold" && !(hint > n_max))
        errors.push_back("loc-curve.threshold_hint: must exceed n_max");
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << '\n';
        return exit_config_error;
    }

    std::vector<double> densities;
    if (n_count == 1) {
        densities.push_back(n_min);
    } else if (grid_kind == "threshold") {
        densities = bglass::threshold_refined_densities(n_min, n_max, static_cast<int>(n_count),
                                                        hint);
    } else {
        for (long i = 0; i < n_count; ++i)
            densities.push_back(n_min + (n_max - n_min) * i / (n_count - 1));
    }

    bglass::LocalizationCurve curve = bglass::localization_curve(u, densities, options);
    if (rescale_a != 1.0) {
        // the invariance map changes only the labels: u' = u/a, n' = a n
        curve.u = u / rescale_a;
        for (auto& point : curve.points) point.n_c *= rescale_a;
    }
    bglass::csv::write_curve((context.out_dir / "curve.csv").string(), curve);

    try {
        bglass::FitOptions fit_options;
        fit_options.span = fit_span;
        const bglass::FitParams fit = bglass::fit_power_law(curve, fit_options);
        bglass::csv::write_fit((context.out_dir / "fit.csv").string(), fit);
    } catch (const bglass::FitError& error) {
        std::cerr << "fit refused: " << error.what() << '\n';
        return exit_numerical_error;
    }
    return exit_ok;
}

int cmd_fit(const RunContext& context) {
    std::vector<std::string> errors;
    Validator v(context.config, errors);
    const std::string input = v.text("fit", "input", "curve.csv");
    const double span = v.number("fit", "span", 0.1, 1e-9, 1e3);
    v.finish();
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << '\n';
        return exit_config_error;
    }

    fs::path input_path(input);
    if (input_path.is_relative()) input_path = context.out_dir / input_path;
    bglass::LocalizationCurve curve;
    try {
        const bglass::csv::CsvTable table = bglass::csv::read_csv(input_path.string());
        if (table.header.size() < 5 || table.header[0] != "n_c")
            throw std::runtime_error("unexpected header in " + input_path.string());
        for (const auto& row : table.rows) {
            bglass::CurvePoint point;
            point.n_c = row.at(0);
            point.L_c = row.at(1);
            point.L_star = row.at(2);
            point.mu0_star = row.at(3);
            point.localized = row.at(4) != 0.0;
            curve.points.push_back(point);
        }
    } catch (const std::exception& error) {
        std::cerr << "config error: fit.input: " << error.what() << '\n';
        return exit_config_error;
    }

    try {
        bglass::FitOptions fit_options;
        fit_options.span = span;
        const bglass::FitParams fit = bglass::fit_power_law(curve, fit_options);
        bglass::csv::write_fit((context.out_dir / "fit.csv").string(), fit);
    } catch (const bglass::FitError& error) {
        std::cerr << "fit refused: " << error.what() << '\n';
        return exit_numerical_error;
    }
    return exit_ok;
}

int cmd_thermo(const RunContext& context) {
    std::vector<std::string> errors;
    Validator v(context.config, errors);
    const double u = v.number("thermo", "u", 47.0, 1e-12, 1e9);
    const double L0 = v.number("thermo", "l0_m", 1e-8, 1e-12, 1e-3);
    const double n_cm2 = v.number("thermo", "n_cm2", 1.2e10, 0.0, 1e20);
    const double n_dimless = v.number("thermo", "n_dimless", 0.0, 0.0, 1e9);
    const double t_min = v.number("thermo", "t_min_K", 0.05, 1e-9, 1e6);
    const double t_max = v.number("thermo", "t_max_K", 4.05, 1e-9, 1e6);
    const long t_count = v.integer("thermo", "t_count", 40, 0, 100000);
    bglass::FitParams fit;
    fit.alpha = v.number("thermo", "alpha", 5.4, 1e-9, 1e9);
    fit.beta = v.number("thermo", "beta", -0.1317, -10.0, -1e-9);
    fit.n_g = v.number("thermo", "n_g", 0.074, 1e-9, 1e9);
    double m_e = v.number("thermo", "m_e", 0.0665, 1e-6, 1e3);
    double m_h = v.number("thermo", "m_h", 0.377, 1e-6, 1e3);
    const std::string material_file = v.text("thermo", "material_file", "");
    const bool include_enhancement = v.flag("thermo", "include_enhancement", true);
    const bglass::EmissionModel model = read_emission_model(v, "thermo", context.variant);
    v.finish();
    if (t_count > 1 && !(t_max > t_min)) errors.push_back("thermo.t_max_K: must exceed t_min_K");
    if (!material_file.empty()) {
        try {
            const bglass::ExcitonMaterial material = bglass::load_material(material_file);
            m_e = material.m_e;
            m_h = material.m_h;
        } catch (const std::exception& error) {
            errors.push_back(std::string("thermo.material_file: ") + error.what());
        }
    }
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << '\n';
        return exit_config_error;
    }

    const double M = (m_e + m_h) * bglass::constants::electron_mass;
    const double n =
        n_dimless > 0.0 ? n_dimless : bglass::density_to_dimensionless(n_cm2 * 1e4, L0);
    const double critical = fit.n_g / u;
    std::cerr << "thermo: n = " << n << " (1/L0^2), critical density n_g/u = " << critical
              << " -> " << (n > critical ? "above" : "below") << "-critical regime\n";

    std::vector<double> temperatures;
    for (long i = 0; i < t_count; ++i)
        temperatures.push_back(t_count == 1 ? t_min
                                            : t_min + (t_max - t_min) * i / (t_count - 1));
    bglass::ThermoSweepOptions sweep_options;
    sweep_options.workers = context.workers;
    const auto points = bglass::thermo_sweep(n, u, fit, M, L0, temperatures, sweep_options);

    int failures = 0;
    std::vector<double> enhancement(points.size(), 0.0);
    if (include_enhancement)
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!points[i].ok) {
                ++failures;
                enhancement[i] = std::nan("");
                continue;
            }
            enhancement[i] = bglass::enhancement_factor(model, points[i].state.L_c * L0);
        }
    bglass::csv::write_thermo((context.out_dir / "thermo.csv").string(), points, L0,
                              include_enhancement ? &enhancement : nullptr);
    for (const auto& point : points)
        if (!point.ok) std::cerr << "thermo point T=" << point.state.T << ": " << point.error
                                 << '\n';
    return failures == 0 ? exit_ok : exit_numerical_error;
}

int cmd_emission(const RunContext& context) {
    std::vector<std::string> errors;
    Validator v(context.config, errors);
    const double l_c_um = v.number("emission", "l_c_um", 1.0, 1e-9, 1e9);
    const double chi = v.number("emission", "chi", 0.0, -10.0, 10.0);
    const long phi_count = v.integer("emission", "phi_count", 181, 2, 1000000);
    const bglass::EmissionModel model = read_emission_model(v, "emission", context.variant);
    v.finish();
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << '\n';
        return exit_config_error;
    }

    const double L_c = l_c_um * 1e-6;
    std::vector<double> phi_grid(phi_count);
    for (long i = 0; i < phi_count; ++i)
        phi_grid[i] = bglass::constants::pi * i / (phi_count - 1);

    const auto table = bglass::emission_pattern_table(model, L_c, chi, phi_grid);
    const auto report = bglass::emission_report(model, L_c);
    bglass::csv::write_pattern((context.out_dir / "pattern.csv").string(), table);
    bglass::csv::write_emission_report((context.out_dir / "emission.csv").string(), report);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disordered 2D condensate ground states, localization curves, condensation "
                 "temperatures, and collective-emission observables.\n"
                 "Run 'bglass print-config' for every configuration key with its default."};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int workers = 1;
    std::string variant = "limit-consistent";
    app.add_option("--config", config_path, "INI-style configuration file");
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--workers", workers, "worker threads for independent sweep points")
        ->check(CLI::Range(1, 512));
    app.add_option("--variant", variant, "cooperativity prefactor variant")
        ->check(CLI::IsMember({"as-printed", "limit-consistent"}));

    auto* mu_of_l = app.add_subcommand("mu-of-l", "chemical potential vs well radius");
    auto* loc_curve = app.add_subcommand("loc-curve", "localization curve and critical fit");
    auto* fit = app.add_subcommand("fit", "fit a previously computed curve file");
    auto* thermo = app.add_subcommand("thermo", "finite-temperature sweep");
    auto* emission = app.add_subcommand("emission", "angular pattern and emission report");
    auto* print_config = app.add_subcommand("print-config", "dump the default configuration");
    for (auto* sub : {mu_of_l, loc_curve, fit, thermo, emission, print_config})
        sub->fallthrough(); // global flags may follow the subcommand name

    CLI11_PARSE(app, argc, argv);

    if (print_config->parsed()) {
        std::cout << default_config_text();
        return exit_ok;
    }

    RunContext context;
    context.workers = workers;
    context.variant = variant;

    std::vector<std::string> config_errors;
    if (!config_path.empty()) {
        context.config = parse_config(config_path, config_errors);
        if (!config_errors.empty()) {
            for (const auto& e : config_errors) std::cerr << "config error: " << e << '\n';
            return exit_config_error;
        }
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "config error: cannot create output directory " << out_dir << '\n';
        return exit_config_error;
    }
    context.out_dir = out_dir;

    const auto started = std::chrono::steady_clock::now();
    int code = exit_ok;
    std::string name;
    try {
        if (mu_of_l->parsed()) {
            name = "mu-of-l";
            code = cmd_mu_of_l(context);
        } else if (loc_curve->parsed()) {
            name = "loc-curve";
            code = cmd_loc_curve(context);
        } else if (fit->parsed()) {
            name = "fit";
            code = cmd_fit(context);
        } else if (thermo->parsed()) {
            name = "thermo";
            code = cmd_thermo(context);
        } else if (emission->parsed()) {
            name = "emission";
            code = cmd_emission(context);
        }
    } catch (const bglass::ConvergenceError& error) {
        std::cerr << "numerical error: " << error.what() << '\n';
        code = exit_numerical_error;
    } catch (const bglass::NoLocalizedSolution& error) {
        std::cerr << "numerical error: " << error.what() << '\n';
        code = exit_numerical_error;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        code = exit_numerical_error;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::vector<std::string> outputs;
    for (const auto& entry : fs::directory_iterator(context.out_dir))
        if (entry.path().extension() == ".csv") outputs.push_back(entry.path().filename());
    std::sort(outputs.begin(), outputs.end());
    write_manifest(context.out_dir, name, context.config, wall, outputs);
    return code;
}

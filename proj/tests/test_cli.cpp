#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bglass/csv.hpp"
#include "bglass/superradiance.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli = BGLASS_CLI_PATH;

int run(const std::string& args, const std::string& log_name) {
    const std::string command = std::string(cli) + " " + args + " > " + log_name +
                                ".out 2> " + log_name + ".err";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream file(path, std::ios::binary);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    file << text;
}

struct Workspace {
    fs::path dir;

    explicit Workspace(const std::string& name) : dir(fs::path("cli_test_out") / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
};

} // namespace

TEST_CASE("print-config dumps every section") {
    Workspace ws("print_config");
    CHECK(run("print-config", (ws.dir / "log").string()) == 0);
    const std::string text = slurp(ws.dir / "log.out");
    for (const char* section :
         {"[solver]", "[scan]", "[mu-of-l]", "[loc-curve]", "[fit]", "[thermo]", "[emission]"})
        CHECK(text.find(section) != std::string::npos);
}

TEST_CASE("config validation fails before any computation") {
    Workspace ws("bad_config");
    write_file(ws.dir / "bad.cfg", "[emission]\nl_c_um = banana\n");
    CHECK(run("emission --config " + (ws.dir / "bad.cfg").string() + " --out " +
                  (ws.dir / "out").string(),
              (ws.dir / "log").string()) == 2);
    const std::string err = slurp(ws.dir / "log.err");
    CHECK(err.find("emission.l_c_um") != std::string::npos);
    CHECK(!fs::exists(ws.dir / "out" / "pattern.csv"));

    write_file(ws.dir / "typo.cfg", "[emission]\nl_c_umm = 1.0\n");
    CHECK(run("emission --config " + (ws.dir / "typo.cfg").string() + " --out " +
                  (ws.dir / "out2").string(),
              (ws.dir / "log2").string()) == 2);
    CHECK(slurp(ws.dir / "log2.err").find("unknown key") != std::string::npos);

    write_file(ws.dir / "missing_preset.cfg",
               "[thermo]\nmaterial_file = no_such_preset.cfg\nt_count = 2\n");
    CHECK(run("thermo --config " + (ws.dir / "missing_preset.cfg").string() + " --out " +
                  (ws.dir / "out3").string(),
              (ws.dir / "log3").string()) == 2);
    CHECK(slurp(ws.dir / "log3.err").find("material_file") != std::string::npos);
}

TEST_CASE("thermo accepts a material preset file") {
    Workspace ws("material_preset");
    write_file(ws.dir / "preset.cfg",
               "name = GaAsWell\nm_e = 0.0665\nm_h = 0.377\na0_m = 1e-8\nE0_J = 2.5e-21\n");
    write_file(ws.dir / "thermo.cfg", "[thermo]\nmaterial_file = " +
                                          (ws.dir / "preset.cfg").string() +
                                          "\nt_min_K = 1.0\nt_max_K = 3.0\nt_count = 3\n");
    CHECK(run("thermo --config " + (ws.dir / "thermo.cfg").string() + " --out " +
                  ws.dir.string(),
              (ws.dir / "log").string()) == 0);
    CHECK(fs::exists(ws.dir / "thermo.csv"));
}

TEST_CASE("empty radius grid produces a header-only table") {
    Workspace ws("empty_grid");
    write_file(ws.dir / "empty.cfg", "[mu-of-l]\nl_count = 0\n");
    CHECK(run("mu-of-l --config " + (ws.dir / "empty.cfg").string() + " --out " +
                  ws.dir.string(),
              (ws.dir / "log").string()) == 0);
    CHECK(slurp(ws.dir / "mu_of_l.csv") == "L,mu0,L_c,localized\n");
}

TEST_CASE("emission run: pattern null, chi independence, determinism") {
    Workspace ws("emission");
    // choose L_c so that k a_c = 10
    const double k = 2.0 * bglass::constants::pi / 228e-9;
    const double l_c_um = 10.0 / k * std::sqrt(bglass::constants::pi) * 1e6;
    std::ostringstream cfg;
    cfg << "[emission]\nl_c_um = " << bglass::csv::format_double(l_c_um)
        << "\nphi_count = 1001\nchi = 0.0\n";
    write_file(ws.dir / "emission.cfg", cfg.str());
    // the CLI parses l_c_um back bit-exactly (%.17g round-trips), so the
    // recomputation below must use the same derived product
    const double k_a_c =
        k * bglass::condensate_radius(std::stod(bglass::csv::format_double(l_c_um)) * 1e-6);

    const std::string args = "emission --config " + (ws.dir / "emission.cfg").string();
    CHECK(run(args + " --out " + (ws.dir / "a").string(), (ws.dir / "log").string()) == 0);
    CHECK(run(args + " --out " + (ws.dir / "b").string(), (ws.dir / "log2").string()) == 0);

    // bitwise-identical outputs across runs
    CHECK(slurp(ws.dir / "a" / "pattern.csv") == slurp(ws.dir / "b" / "pattern.csv"));
    CHECK(slurp(ws.dir / "a" / "emission.csv") == slurp(ws.dir / "b" / "emission.csv"));
    CHECK(fs::exists(ws.dir / "a" / "manifest.json"));

    // first angular null at sin(phi) = 3.8317/10; chi = 0 makes the dipole
    // factor exactly one, so the table is the collective factor alone
    const auto table = bglass::csv::read_csv((ws.dir / "a" / "pattern.csv").string());
    const double phi_null = std::asin(0.38317059702075123);
    double best_intensity = 1.0;
    double best_phi = 0.0;
    for (const auto& row : table.rows) {
        if (std::abs(row[0] - phi_null) < 0.01 && row[2] < best_intensity) {
            best_intensity = row[2];
            best_phi = row[0];
        }
        const double gamma = bglass::collective_factor(row[0], k_a_c);
        CHECK(std::abs(row[2] - gamma) < 1e-12);
    }
    CHECK(best_intensity < 1e-5);
    CHECK(std::abs(best_phi - phi_null) < 0.005);
}

TEST_CASE("thermo run chains into the emission enhancement") {
    Workspace ws("thermo");
    write_file(ws.dir / "thermo.cfg", "[thermo]\nt_min_K = 0.2\nt_max_K = 3.0\nt_count = 9\n");
    const std::string args = "thermo --config " + (ws.dir / "thermo.cfg").string();
    CHECK(run(args + " --out " + (ws.dir / "a").string(), (ws.dir / "log").string()) == 0);
    CHECK(run(args + " --out " + (ws.dir / "b").string(), (ws.dir / "log2").string()) == 0);
    CHECK(slurp(ws.dir / "a" / "thermo.csv") == slurp(ws.dir / "b" / "thermo.csv"));

    const auto table = bglass::csv::read_csv((ws.dir / "a" / "thermo.csv").string());
    REQUIRE(table.header.size() == 9);
    CHECK(table.header[8] == "enhancement");
    REQUIRE(table.rows.size() == 9);

    bglass::EmissionModel model;
    model.a0 = 1e-8;
    model.lambda = 2.28e-7;
    int condensed_rows = 0;
    for (const auto& row : table.rows) {
        const double L_c_dimless = row[5];
        const double condensed = row[7];
        const double enhancement = row[8];
        if (condensed != 0.0) ++condensed_rows;
        // cross-module recomputation on the same localization length
        const double expected = bglass::enhancement_factor(model, L_c_dimless * 1e-8);
        CHECK(std::abs(enhancement / expected - 1.0) < 1e-12);
    }
    CHECK(condensed_rows > 0);
    CHECK(condensed_rows < 9);
}

TEST_CASE("loc-curve with a single density writes the curve but refuses the fit") {
    Workspace ws("single_density");
    write_file(ws.dir / "one.cfg",
               "[solver]\nnodes_per_unit = 96\npilot_nodes_per_unit = 48\n"
               "[scan]\nl_min = 1.5\nl_max = 8\nl_count = 10\n"
               "[loc-curve]\nn_min = 0.05\nn_count = 1\n");
    CHECK(run("loc-curve --config " + (ws.dir / "one.cfg").string() + " --out " +
                  ws.dir.string(),
              (ws.dir / "log").string()) == 3);
    CHECK(fs::exists(ws.dir / "curve.csv"));
    CHECK(!fs::exists(ws.dir / "fit.csv"));
    CHECK(slurp(ws.dir / "log.err").find("fit refused") != std::string::npos);
}

TEST_CASE("fit subcommand recovers parameters from a curve file") {
    Workspace ws("fit");
    std::ostringstream curve;
    curve << "n_c,L_c,L_star,mu0_star,localized_flag\n";
    for (double n : {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.065, 0.07}) {
        const double L_c = 5.4 * std::pow(0.074 - n, -0.1317);
        curve << bglass::csv::format_double(n) << ',' << bglass::csv::format_double(L_c)
              << ",3.1,-0.05,1\n";
    }
    write_file(ws.dir / "curve.csv", curve.str());
    write_file(ws.dir / "fit.cfg", "[fit]\ninput = curve.csv\n");
    CHECK(run("fit --config " + (ws.dir / "fit.cfg").string() + " --out " + ws.dir.string(),
              (ws.dir / "log").string()) == 0);
    const auto fit = bglass::csv::read_csv((ws.dir / "fit.csv").string());
    REQUIRE(fit.rows.size() == 1);
    CHECK(std::abs(fit.rows[0][0] / 5.4 - 1.0) < 1e-5);
    CHECK(std::abs(fit.rows[0][1] / -0.1317 - 1.0) < 1e-5);
    CHECK(std::abs(fit.rows[0][2] / 0.074 - 1.0) < 1e-5);
}

TEST_CASE("loc-curve rescale emits the mapped curve") {
    Workspace ws("rescale");
    const std::string shared =
        "[solver]\nnodes_per_unit = 96\npilot_nodes_per_unit = 48\n"
        "[scan]\nl_min = 1.5\nl_max = 8\nl_count = 10\n";
    write_file(ws.dir / "base.cfg",
               shared + "[loc-curve]\nn_min = 0.02\nn_max = 0.06\nn_count = 5\n");
    write_file(ws.dir / "mapped.cfg",
               shared +
                   "[loc-curve]\nn_min = 0.02\nn_max = 0.06\nn_count = 5\n"
                   "rescale_a = 0.5\nfit_span = 0.05\n");
    CHECK(run("loc-curve --config " + (ws.dir / "base.cfg").string() + " --out " +
                  (ws.dir / "base").string(),
              (ws.dir / "log").string()) == 0);
    CHECK(run("loc-curve --config " + (ws.dir / "mapped.cfg").string() + " --out " +
                  (ws.dir / "mapped").string(),
              (ws.dir / "log2").string()) == 0);

    const auto base = bglass::csv::read_csv((ws.dir / "base" / "curve.csv").string());
    const auto mapped = bglass::csv::read_csv((ws.dir / "mapped" / "curve.csv").string());
    REQUIRE(base.rows.size() == mapped.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        CHECK(mapped.rows[i][0] == doctest::Approx(0.5 * base.rows[i][0]).epsilon(1e-14));
        CHECK(mapped.rows[i][1] == base.rows[i][1]); // L_c unchanged by the map
    }
}

TEST_CASE("mu-of-l sweep marks localized and delocalized radii") {
    Workspace ws("mu_of_l");
    write_file(ws.dir / "sweep.cfg",
               "[solver]\nnodes_per_unit = 96\npilot_nodes_per_unit = 48\n"
               "[mu-of-l]\nu = 1.0\nn_c = 0.06\nl_min = 2.0\nl_max = 8.0\nl_count = 7\n");
    CHECK(run("mu-of-l --config " + (ws.dir / "sweep.cfg").string() + " --out " +
                  ws.dir.string() + " --workers 2",
              (ws.dir / "log").string()) == 0);
    const auto table = bglass::csv::read_csv((ws.dir / "mu_of_l.csv").string());
    REQUIRE(table.rows.size() == 7);
    int localized = 0;
    std::vector<double> mu_localized;
    for (const auto& row : table.rows) {
        if (row[3] != 0.0) {
            ++localized;
            CHECK(row[1] < 0.0); // localized rows carry negative mu0
            mu_localized.push_back(row[1]);
        }
    }
    CHECK(localized >= 4);
    CHECK(localized < 7); // the largest radii delocalize at this density

    // a single interior minimum: the difference sequence changes sign once
    int sign_changes = 0;
    for (std::size_t i = 2; i < mu_localized.size(); ++i) {
        const double d_prev = mu_localized[i - 1] - mu_localized[i - 2];
        const double d_here = mu_localized[i] - mu_localized[i - 1];
        if (d_prev < 0.0 && d_here > 0.0) ++sign_changes;
        if (d_prev > 0.0 && d_here < 0.0) sign_changes += 10; // max would be wrong shape
    }
    CHECK(sign_changes == 1);
}

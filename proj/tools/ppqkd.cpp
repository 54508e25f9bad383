// Command-line front end: verification suite, figure-reproduction sweeps,
// the exact-value table for the two named attack points, and Monte-Carlo
// runs. Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "checks.hpp"
#include "json.hpp"
#include "ppqkd/collective.hpp"
#include "ppqkd/intercept.hpp"
#include "ppqkd/montecarlo.hpp"
#include "ppqkd/report_io.hpp"
#include "ppqkd/version.hpp"

namespace {

using namespace ppqkd;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

const double kPi = std::numbers::pi;

std::string opt_cell(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string(kInvalidCell);
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
    std::filesystem::path p = out;
    p.replace_extension();
    return p.concat(suffix);
}

int cmd_verify() {
    bool all_ok = true;
    for (const auto& check : checks::all_checks()) {
        checks::CheckResult result;
        try {
            result = check.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        all_ok = all_ok && result.ok;
        std::cout << check.name << ": " << (result.ok ? "PASS" : "FAIL") << " (" << result.detail
                  << ")\n";
    }
    std::cout << (all_ok ? "verify: all checks passed" : "verify: FAILURES above") << "\n";
    return all_ok ? kExitOk : kExitCheckFailure;
}

int cmd_ir_sweep(int points, const std::string& out) {
    const IrSweep sweep = sweep_ir(points);

    Provenance prov;
    prov.config = {{"command", "ir-sweep"}, {"points", std::to_string(points)}};

    std::vector<std::vector<std::string>> rows;
    rows.reserve(sweep.rows.size());
    for (const IrSweepRow& r : sweep.rows) {
        rows.push_back({format_double(r.alpha), opt_cell(r.p1), opt_cell(r.p1_comp_r2r3_a),
                        opt_cell(r.p1_comp_r2r3_b), opt_cell(r.p2), opt_cell(r.p2_comp_r1),
                        opt_cell(r.p2_comp_r4), opt_cell(r.q1), opt_cell(r.q2)});
    }
    write_csv(out, prov,
              {"alpha", "p1", "p1_comp_r2r3_a", "p1_comp_r2r3_b", "p2", "p2_comp_r1",
               "p2_comp_r4", "q1", "q2"},
              rows);
    const std::filesystem::path sidecar = sibling(out, ".argmax.json");
    write_text_file(sidecar, render_ir_sidecar(prov, sweep));
    std::cout << "wrote " << out << " and " << sidecar.string() << "\n"
              << "argmax p1 = " << format_double(sweep.max_p1) << " at alpha = "
              << format_double(sweep.rows[sweep.argmax_p1].alpha) << "\n"
              << "argmax p2 = " << format_double(sweep.max_p2) << " at alpha = "
              << format_double(sweep.rows[sweep.argmax_p2].alpha) << "\n";
    return kExitOk;
}

int cmd_breidbart() {
    const double sqrt2 = std::sqrt(2.0);
    bool ok = true;
    const auto line = [&ok](const std::string& label, double computed, double expected) {
        const bool good = std::abs(computed - expected) <= 1e-12;
        ok = ok && good;
        std::cout << "  " << label << " = " << format_double(computed)
                  << (good ? "" : "  [MISMATCH vs " + format_double(expected) + "]") << "\n";
    };

    std::cout << "Breidbart point (alpha, beta) = (0, pi/4)\n";
    {
        const FgUvTable t = fg_uv_table({0.0, kPi / 4.0, 0.0});
        const auto rep = ir_report({0.0, kPi / 4.0, 0.0});
        line("f1 = g2 = g3 = f4  [1/32]", t.f[0], 1.0 / 32.0);
        line("g1 = f2 = f3 = g4  [5/32]", t.g[0], 5.0 / 32.0);
        line("u1 = u2 = v3 = v4  [(5+3*sqrt2)/32]", t.u[0], (5.0 + 3.0 * sqrt2) / 32.0);
        line("v1 = v2 = u3 = u4  [(5-3*sqrt2)/32]", t.v[0], (5.0 - 3.0 * sqrt2) / 32.0);
        line("P1  [5/6]", rep->p1, 5.0 / 6.0);
        line("P2  [(5+3*sqrt2)/10]", rep->p2, (5.0 + 3.0 * sqrt2) / 10.0);
        line("q1  [1/2, so q1:q2 = 1:1]", rep->q1, 0.5);
        std::cout << "  detection weights Q1:Q2:Q3:Q4 = "
                  << format_double(rep->q_ratios[0] * 16.0) << ":"
                  << format_double(rep->q_ratios[1] * 16.0) << ":"
                  << format_double(rep->q_ratios[2] * 16.0) << ":"
                  << format_double(rep->q_ratios[3] * 16.0)
                  << "  (x16; pairwise r1:r4 = r2:r3 = 1:1)\n";
    }

    std::cout << "(pi, pi/4) point\n";
    {
        const FgUvTable t = fg_uv_table({kPi, kPi / 4.0, 0.0});
        const auto rep = ir_report({kPi, kPi / 4.0, 0.0});
        line("f1 = g2 = g3 = f4  [1/32]", t.f[0], 1.0 / 32.0);
        line("g1 = f2 = f3 = g4  [9/32]", t.g[0], 9.0 / 32.0);
        line("P1  [9/10]", rep->p1, 0.9);
        line("Eve | x-basis  [(3-sqrt2)/6]", t.u[0] / (t.u[0] + t.v[0]), (3.0 - sqrt2) / 6.0);
        line("Eve | z-basis  [(3+sqrt2)/6]", t.u[1] / (t.u[1] + t.v[1]), (3.0 + sqrt2) / 6.0);
        line("average of the two conditionals  [1/2]",
             0.5 * (t.u[0] / (t.u[0] + t.v[0]) + t.u[1] / (t.u[1] + t.v[1])), 0.5);
        line("P2  [1/2: Eve learns nothing here]", rep->p2, 0.5);
        std::cout << "  detection weights Q1:Q2:Q3:Q4 = "
                  << format_double(rep->q_ratios[0] * 16.0) << ":"
                  << format_double(rep->q_ratios[1] * 16.0) << ":"
                  << format_double(rep->q_ratios[2] * 16.0) << ":"
                  << format_double(rep->q_ratios[3] * 16.0) << "  (x16 -> 3:5:5:3)\n";
    }
    if (!ok) std::cout << "breidbart: MISMATCH against exact forms\n";
    return ok ? kExitOk : kExitCheckFailure;
}

int cmd_collective_sweep(int n_max, int m_max, const std::string& out) {
    const CollectiveSweep sweep = sweep_collective(n_max, m_max);

    Provenance prov;
    prov.config = {{"command", "collective-sweep"},
                   {"nmax", std::to_string(n_max)},
                   {"mmax", std::to_string(m_max)}};

    std::vector<std::vector<std::string>> rows;
    rows.reserve(sweep.cells.size());
    for (const CollectiveCell& cell : sweep.cells) {
        std::vector<std::string> row{std::to_string(cell.n), std::to_string(cell.m),
                                     format_double(cell.a), format_double(cell.b)};
        if (cell.report) {
            row.push_back(format_double(cell.report->fidelity));
            row.push_back(format_double(cell.report->p_ab));
            row.push_back(format_double(cell.report->p_e));
        } else {
            row.insert(row.end(), {kInvalidCell, kInvalidCell, kInvalidCell});
        }
        rows.push_back(std::move(row));
    }
    write_csv(out, prov, {"n", "m", "a", "b", "F", "p_ab", "p_e"}, rows);

    std::vector<std::vector<std::string>> slice;
    slice.reserve(sweep.fig4_slice.size());
    for (const Fig4SliceRow& r : sweep.fig4_slice) {
        slice.push_back({format_double(r.a),
                         r.fidelity ? format_double(*r.fidelity) : std::string(kInvalidCell),
                         r.p_e ? format_double(*r.p_e) : std::string(kInvalidCell)});
    }
    const std::filesystem::path slice_path = sibling(out, ".fig4.csv");
    Provenance slice_prov = prov;
    slice_prov.config.push_back({"slice_b", format_double(sweep.argmax_m * sweep.step_b)});
    write_csv(slice_path, slice_prov, {"a", "F", "p_e"}, slice);

    const std::filesystem::path sidecar = sibling(out, ".argmax.json");
    write_text_file(sidecar, render_collective_sidecar(prov, sweep));

    std::cout << "wrote " << out << ", " << slice_path.string() << " and " << sidecar.string()
              << "\n"
              << "max p_e = " << format_double(sweep.max_p_e) << " at (a, b) = ("
              << format_double(sweep.argmax_n * sweep.step_a) << ", "
              << format_double(sweep.argmax_m * sweep.step_b) << "), invalid cells: "
              << sweep.invalid_cells << "\n";
    return kExitOk;
}

int cmd_mc(const std::string& scenario, double alpha, double beta, double a, double b,
           std::uint64_t trials, std::uint64_t seed, const std::string& out) {
    FrequencyReport report;
    Provenance prov;
    prov.seed = seed;
    prov.config = {{"command", "mc"},
                   {"scenario", scenario},
                   {"trials", std::to_string(trials)}};

    if (scenario == "honest") {
        report = simulate_honest(trials, seed);
    } else if (scenario == "ir") {
        prov.config.push_back({"alpha", format_double(alpha)});
        prov.config.push_back({"beta", format_double(beta)});
        report = simulate_ir({alpha, beta, 0.0}, trials, seed);
    } else if (scenario == "collective") {
        const auto params = make_collective_params(a, b);
        if (!params) {
            std::cerr << "mc: (a, b) = (" << a << ", " << b << ") has no valid fidelity\n";
            return kExitUsage;
        }
        prov.config.push_back({"a", format_double(a)});
        prov.config.push_back({"b", format_double(b)});
        report = simulate_collective(*params, trials, seed);
    } else {
        std::cerr << "mc: unknown scenario '" << scenario << "' (honest|ir|collective)\n";
        return kExitUsage;
    }

    constexpr double kSigmaLimit = 4.0;
    const std::string text = render_mc_report(prov, report, kSigmaLimit);
    write_text_file(out, text);

    bool pass = report.impossible_cell_hits == 0 && report.table1_violations == 0;
    for (const auto& check : report.named_checks) {
        std::cout << check.name << ": observed=" << format_double(check.observed)
                  << " expected=" << format_double(check.expected)
                  << " sigma=" << format_double(check.sigma_deviation)
                  << (check.sigma_deviation <= kSigmaLimit ? " PASS" : " FAIL") << "\n";
        pass = pass && check.sigma_deviation <= kSigmaLimit;
    }
    std::cout << "max cell sigma deviation: " << format_double(report.max_sigma_deviation)
              << "\nwrote " << out << "\n";
    return pass ? kExitOk : kExitCheckFailure;
}

// Optional JSON config mirroring the flags. It is loaded before CLI parsing
// and seeds the option variables, so explicit flags always win.
nlohmann::json preload_config(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            path = argv[i + 1];
            break;
        }
        if (arg.rfind("--config=", 0) == 0) {
            path = arg.substr(9);
            break;
        }
    }
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file " + path);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
    return cfg;
}

template <typename T>
void seed_from_config(const nlohmann::json& cfg, const char* key, T& var) {
    if (!cfg.contains(key)) return;
    try {
        var = cfg.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) + " " + kVersion +
                 " - pre/post-selection QKD attack analysis toolkit"};
    app.require_subcommand(1);

    int ir_points = 720;
    std::string ir_out = "ir_sweep.csv";
    int nmax = 200, mmax = 200;
    std::string coll_out = "collective_sweep.csv";
    std::string scenario = "honest";
    double alpha = 0.0, beta = kPi / 4.0;  // intercept/resend default: the Breidbart basis
    double a = 1.30, b = 0.990;            // collective default: the sweep optimum
    std::uint64_t trials = 100000, seed = 1;
    std::string mc_out = "mc_report.json";

    try {
        const nlohmann::json cfg = preload_config(argc, argv);
        seed_from_config(cfg, "points", ir_points);
        seed_from_config(cfg, "nmax", nmax);
        seed_from_config(cfg, "mmax", mmax);
        seed_from_config(cfg, "scenario", scenario);
        seed_from_config(cfg, "alpha", alpha);
        seed_from_config(cfg, "beta", beta);
        seed_from_config(cfg, "a", a);
        seed_from_config(cfg, "b", b);
        seed_from_config(cfg, "trials", trials);
        seed_from_config(cfg, "seed", seed);
        seed_from_config(cfg, "out", ir_out);
        seed_from_config(cfg, "out", coll_out);
        seed_from_config(cfg, "out", mc_out);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::string config_path;
    app.add_option("--config", config_path, "JSON file mirroring subcommand flags (flags win)");

    app.add_subcommand("verify", "run the full cross-module invariant suite");

    auto* ir = app.add_subcommand("ir-sweep", "tabulate the intercept/resend curves over alpha");
    ir->add_option("--points", ir_points, "alpha grid points over [0, 2pi)")
        ->check(CLI::Range(2, 10000000));
    ir->add_option("--out", ir_out, "output CSV path");

    app.add_subcommand("breidbart", "exact-value table at (0, pi/4) and (pi, pi/4)");

    auto* coll = app.add_subcommand("collective-sweep", "grid sweep of the collective attack");
    coll->add_option("--nmax", nmax, "grid divisions for a in [0, pi]")->check(CLI::Range(1, 100000));
    coll->add_option("--mmax", mmax, "grid divisions for b in [0, pi]")->check(CLI::Range(1, 100000));
    coll->add_option("--out", coll_out, "output CSV path (slice and argmax sidecars are derived)");

    auto* mc = app.add_subcommand("mc", "Monte-Carlo protocol simulation");
    mc->add_option("--scenario", scenario, "honest | ir | collective");
    mc->add_option("--alpha", alpha, "Eve's alpha (ir scenario)");
    mc->add_option("--beta", beta, "Eve's beta (ir scenario)");
    mc->add_option("--a", a, "Eve's a (collective scenario)");
    mc->add_option("--b", b, "Eve's b (collective scenario)");
    mc->add_option("--trials", trials, "number of protocol rounds")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000000000}));
    mc->add_option("--seed", seed, "random seed (echoed in the report)");
    mc->add_option("--out", mc_out, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand("verify")) return cmd_verify();
        if (app.got_subcommand("ir-sweep")) return cmd_ir_sweep(ir_points, ir_out);
        if (app.got_subcommand("breidbart")) return cmd_breidbart();
        if (app.got_subcommand("collective-sweep")) return cmd_collective_sweep(nmax, mmax, coll_out);
        if (app.got_subcommand("mc")) return cmd_mc(scenario, alpha, beta, a, b, trials, seed, mc_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

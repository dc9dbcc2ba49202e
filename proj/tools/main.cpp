// Command-line front end: quadrilateral classification, chart construction,
// exact identity replay, numeric scans, and the non-convex counterexample.
//
// Exit codes: 0 = all checks passed, 1 = verified violation or failed
// identity, 2 = usage or domain error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>

#include "cyclicquad/rng.hpp"

#include "cyclicquad/identity_suite.hpp"
#include "cyclicquad/numeric_scan.hpp"
#include "cyclicquad/quad_geom.hpp"

using namespace cyclicquad;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitViolation = 1, kExitUsage = 2;

void print_num(const char* name, double v) { std::printf("  %-16s %.12g\n", name, v); }

json report_to_json(const ClassificationReport& r) {
    json j;
    j["scale"] = r.scale;
    j["planar_residual"] = r.planar_residual;
    j["feasible"] = r.feasible;
    j["convex"] = r.convex;
    j["convex_marginal"] = r.convex_marginal;
    j["c2"] = r.c2;
    j["c3"] = r.c3;
    j["c2_norm"] = r.c2_norm;
    j["c3_norm"] = r.c3_norm;
    j["cyclic"] = r.cyclic;
    j["d_position"] = to_string(r.d_position);
    if (r.circumradius) j["circumradius"] = *r.circumradius;
    return j;
}

void print_report(const ClassificationReport& r) {
    std::printf("  %-16s %s\n", "feasible", r.feasible ? "yes" : "no");
    std::printf("  %-16s %s%s\n", "convex", r.convex ? "yes" : "no",
                r.convex_marginal ? " (marginal)" : "");
    print_num("planar_residual", r.planar_residual);
    print_num("c2", r.c2);
    print_num("c3", r.c3);
    print_num("c2_norm", r.c2_norm);
    print_num("c3_norm", r.c3_norm);
    std::printf("  %-16s %s\n", "cyclic", r.cyclic ? "yes" : "no");
    std::printf("  %-16s %s\n", "d_position", to_string(r.d_position).c_str());
    if (r.circumradius) print_num("circumradius", *r.circumradius);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclicity criteria toolkit for convex quadrilaterals"};
    app.require_subcommand(1);

    // ---- check ----
    auto* check = app.add_subcommand("check", "classify a quadrilateral given its six lengths");
    std::vector<double> sides, diagonals;
    double tol = 1e-7;  // absorbs decimal-truncated input lengths
    bool check_json = false;
    check->add_option("--sides", sides, "side lengths a b c d")->expected(4)->required();
    check->add_option("--diagonals", diagonals, "diagonal lengths p q")->expected(2)->required();
    check->add_option("--tol", tol, "normalized tolerance (default 1e-7)");
    check->add_flag("--json", check_json, "machine-readable output");

    // ---- params ----
    auto* params = app.add_subcommand("params", "construct a quadrilateral from the diagonal chart");
    std::vector<double> chart;
    bool params_json = false;
    params->add_option("values", chart, "x y z u t with x,y,z,u > 0 and -1 < t < 1")
        ->expected(5)
        ->required();
    params->add_flag("--json", params_json, "machine-readable output");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "replay the exact identity ledger");
    std::string suite = "all";
    bool verify_json = false;
    verify_cmd->add_option("--suite", suite, "all | core | resultants | boundary | appendix");
    verify_cmd->add_flag("--json", verify_json, "machine-readable output");

    // ---- scan ----
    auto* scan_cmd = app.add_subcommand("scan", "numeric scans");
    std::string what;
    scan::ScanConfig cfg;
    bool scan_json = false;
    scan_cmd->add_option("--what", what, "theorems | sys51 | sys34 | roots")->required();
    scan_cmd->add_option("--seed", cfg.seed, "random seed (echoed in the report)");
    scan_cmd->add_option("--samples", cfg.samples, "sample count for randomized scans");
    scan_cmd->add_option("--grid", cfg.grid, "per-axis grid for system scans (default 40)");
    scan_cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    scan_cmd->add_flag("--json", scan_json, "machine-readable output");

    // ---- counterexample ----
    auto* ce = app.add_subcommand("counterexample",
                                  "non-convex family on which the cubic criterion vanishes");
    bool ce_json = false;
    int ce_resolution = 10;
    ce->add_option("--resolution", ce_resolution, "family sample count (default 10)");
    ce->add_flag("--json", ce_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*check) {
            for (double v : sides)
                if (!(v > 0)) throw GeomError("side lengths must be positive");
            for (double v : diagonals)
                if (!(v > 0)) throw GeomError("diagonal lengths must be positive");
            QuadLengths ql{sides[0], sides[1], sides[2], sides[3], diagonals[0], diagonals[1]};
            ClassificationReport rep = classify(ql, tol);
            if (check_json) {
                json j;
                j["lengths"] = {{"a", ql.a}, {"b", ql.b}, {"c", ql.c},
                                {"d", ql.d}, {"p", ql.p}, {"q", ql.q}};
                j["report"] = report_to_json(rep);
                std::printf("%s\n", j.dump(2).c_str());
            } else {
                print_report(rep);
                if (!rep.convex && std::fabs(rep.c3_norm) < 1e3 * tol)
                    std::printf("  note: c3 vanishes but the quadrilateral is not convex;"
                                " the cubic criterion certifies cyclicity only for convex"
                                " input\n");
            }
            return rep.feasible ? kExitOk : kExitViolation;
        }

        if (*params) {
            DiagParams dp{chart[0], chart[1], chart[2], chart[3], chart[4]};
            QuadLengths ql = lengths_from_params(dp);  // throws on domain error -> exit 2
            ClassificationReport rep = classify(ql);
            if (params_json) {
                json j;
                j["params"] = {{"x", dp.x}, {"y", dp.y}, {"z", dp.z}, {"u", dp.u}, {"t", dp.t}};
                j["lengths"] = {{"a", ql.a}, {"b", ql.b}, {"c", ql.c},
                                {"d", ql.d}, {"p", ql.p}, {"q", ql.q}};
                j["report"] = report_to_json(rep);
                std::printf("%s\n", j.dump(2).c_str());
            } else {
                std::printf("lengths:\n");
                print_num("a", ql.a);
                print_num("b", ql.b);
                print_num("c", ql.c);
                print_num("d", ql.d);
                print_num("p", ql.p);
                print_num("q", ql.q);
                std::printf("classification:\n");
                print_report(rep);
            }
            return kExitOk;
        }

        if (*verify_cmd) {
            if (!identities::has_suite(suite)) {
                std::fprintf(stderr, "unknown suite '%s'\n", suite.c_str());
                return kExitUsage;
            }
            identities::LedgerReport ledger = identities::verify_all(suite);
            if (verify_json) {
                std::printf("%s\n", identities::ledger_to_json(ledger).c_str());
            } else {
                for (const auto& r : ledger.records) {
                    std::printf("%-18s [%-9s] %7.3fs", r.id.c_str(),
                                identities::to_string(r.status).c_str(), r.seconds);
                    if (r.constant != 1) std::printf("  constant %s", r.constant.get_str().c_str());
                    std::printf("\n");
                    if (!r.witness.empty()) std::printf("    witness: %s\n", r.witness.c_str());
                }
                std::printf("totals: %d verified, %d corrected, %d failed (%.2fs)\n",
                            ledger.verified, ledger.corrected, ledger.failed, ledger.seconds);
            }
            return ledger.failed == 0 ? kExitOk : kExitViolation;
        }

        if (*scan_cmd) {
            scan::ScanReport rep;
            if (what == "theorems") {
                rep = scan::theorem_scan(cfg);
            } else if (what == "sys51") {
                rep = scan::scan_system_51(cfg);
            } else if (what == "sys34") {
                rep = scan::scan_system_34(cfg);
            } else if (what == "roots") {
                // root-profile uniqueness sweep as a scan
                Rng rng(cfg.seed);
                rep.what = "roots";
                rep.seed = cfg.seed;
                rep.samples = cfg.samples;
                double worst = 0;
                long multi = 0;
                for (long i = 0; i < cfg.samples; ++i) {
                    double x = rng.log_uniform(0.1, 10), y = rng.log_uniform(0.1, 10),
                           u = rng.log_uniform(0.1, 10), t = rng.uniform(-0.99, 0.99);
                    double zs = cyclic_z(x, y, u);
                    auto prof = scan::root_profile(x, y, u, t, 3 * zs + 1, 256);
                    ++rep.checked;
                    if (prof.roots.size() != 1) {
                        ++multi;
                        if (static_cast<int>(rep.violations.size()) < cfg.witness_limit)
                            rep.violations.push_back(
                                {"root-count", DiagParams{x, y, zs, u, t},
                                 static_cast<double>(prof.roots.size())});
                        continue;
                    }
                    worst = std::max(worst, std::fabs(prof.roots[0] - zs) / zs);
                }
                rep.stats["max_relative_root_error"] = worst;
                rep.stats["profiles_without_single_root"] = static_cast<double>(multi);
            } else {
                std::fprintf(stderr, "unknown scan '%s'\n", what.c_str());
                return kExitUsage;
            }
            if (scan_json) {
                std::printf("%s\n", rep.to_json().c_str());
            } else {
                std::printf("scan %s  seed %" PRIu64 "  checked %ld\n", rep.what.c_str(), rep.seed,
                            rep.checked);
                for (const auto& [k, v] : rep.stats) print_num(k.c_str(), v);
                if (rep.argmin)
                    std::printf("  argmin: x=%.12g y=%.12g z=%.12g t=%.12g\n", rep.argmin->x,
                                rep.argmin->y, rep.argmin->z, rep.argmin->t);
                std::printf("  violations: %zu\n", rep.violations.size());
            }
            double viol = rep.stats.count("violations_total") ? rep.stats.at("violations_total")
                                                              : static_cast<double>(rep.violations.size());
            return viol == 0 ? kExitOk : kExitViolation;
        }

        if (*ce) {
            scan::AppendixResult res = scan::appendix_family(ce_resolution);
            if (ce_json) {
                std::printf("%s\n", res.to_json().c_str());
            } else {
                std::printf("extremal member (largest x):\n");
                print_num("y", res.extremal_y);
                print_num("x", res.extremal_x_closed);
                print_num("x_scan", res.extremal_x_scan);
                std::printf("lengths:\n");
                print_num("a", res.lengths.a);
                print_num("b", res.lengths.b);
                print_num("c", res.lengths.c);
                print_num("d", res.lengths.d);
                print_num("p", res.lengths.p);
                print_num("q", res.lengths.q);
                std::printf("classification:\n");
                print_report(res.report);
                std::printf("family (c3 stays at zero, convexity fails):\n");
                for (const auto& s : res.family)
                    std::printf("  y=%10.6f  x=%12.9f  c3_norm=%.3g\n", s.y, s.x, s.c3_norm);
            }
            return kExitOk;
        }
    } catch (const GeomError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

#pragma once

// Floating-point evidence engine: Monte-Carlo validation of the two
// cyclicity criteria, the root profile of the cubic criterion along the
// z-ray, grid+Newton scans of the two critical-point systems, asymptotic
// series checks for the boundary cases, and the non-convex counterexample
// family. Seeded runs are bitwise deterministic, independent of threading.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclicquad/multipoly.hpp"
#include "cyclicquad/quad_geom.hpp"

namespace cyclicquad::scan {

struct Bounds {
    double len_lo = 0.05, len_hi = 20.0;
    double t_lo = -0.999, t_hi = 0.999;
};

struct ScanConfig {
    std::uint64_t seed = 42;
    long samples = 100000;
    Bounds bounds;
    double base_tol = 1e-9;   // scale-normalized absolute tolerance
    double sign_band = 1e-3;  // normalized |xu-yz| band where sign checks are skipped
    int grid = 40;            // per-axis resolution for the system scans
    int newton_iters = 50;
    int threads = 0;          // 0 = hardware; the report does not depend on it
    int witness_limit = 16;   // violations kept in the report (all are counted)
};

struct Witness {
    std::string kind;
    DiagParams params;
    double value = 0;
    bool operator==(const Witness&) const = default;
};

struct ScanReport {
    std::string what;
    std::uint64_t seed = 0;
    long samples = 0;
    long checked = 0;
    std::vector<Witness> violations;
    std::map<std::string, double> stats;  // extremal residuals, floors, counts
    std::optional<DiagParams> argmin;     // location of the residual floor

    bool operator==(const ScanReport&) const = default;
    std::string to_json(int indent = 2) const;
    static ScanReport from_json(const std::string& text);
};

// C3 of the chart lengths, z free on (0, inf).
double F_of_z(double x, double y, double u, double t, double z);

struct FDerivatives {
    double F, Fx, Fy, Fz, Fu, Ft, Fzz;
};
// Analytic derivatives via the cosine-law closed forms (no differencing).
FDerivatives F_derivatives(double x, double y, double z, double u, double t);

struct RootProfile {
    std::vector<double> roots;  // sign changes of F on (0, z_max], refined
    bool truncated = false;     // window ended before F turned negative
};
RootProfile root_profile(double x, double y, double u, double t, double z_max, int n_grid);

ScanReport theorem_scan(const ScanConfig& cfg);
ScanReport scan_system_51(const ScanConfig& cfg);  // F = F_z = F_zz = 0, u = 1
ScanReport scan_system_34(const ScanConfig& cfg);  // F = F_x = F_y = F_z = 0, u = 1

struct SeriesCheckResult {
    std::string case_id;
    std::string path;     // the shrinking path used
    std::string claimed;  // closed form the limit is compared against
    double measured_order = 0;  // Richardson convergence-order estimate
    double limit_error = 0;     // |ratio - 1| (or |value - limit|) at the deepest step
    bool pass = false;
    bool exploratory = false;  // reported, asserts nothing
    std::vector<std::pair<double, double>> trace;  // (eps, measured ratio/value)
};

const std::vector<std::string>& series_check_cases();
SeriesCheckResult series_check(const std::string& case_id, std::uint64_t seed = 42);

// Exact reconstruction of the first-order folding coefficients by rational
// interpolation of the defining recipes (independent of the symbolic route).
MultiPoly reconstruct_P3();
MultiPoly reconstruct_P7();

struct AppendixSample {
    double y, x, c3_norm;
};
struct AppendixResult {
    double extremal_y;         // -1/3
    double extremal_x_closed;  // (1/3)sqrt(2 sqrt(3) - 3)
    double extremal_x_scan;    // maximum of x over the traced family
    QuadLengths lengths;       // at the extremal member
    ClassificationReport report;
    std::vector<AppendixSample> family;
    std::string to_json(int indent = 2) const;
};
// Zero set of the cubic criterion on the non-convex symmetric family with
// perpendicular diagonals, traced in Cartesian coordinates.
AppendixResult appendix_family(int resolution = 10);

}  // namespace cyclicquad::scan

#pragma once

// Floating-point geometry of convex quadrilaterals: the diagonal chart, the
// quadratic (Ptolemy) and cubic cyclicity criteria, feasibility/convexity
// predicates, and an independent Cartesian circumcircle oracle.
//
// Everything here is a pure function over value types.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace cyclicquad {

struct GeomError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Side and diagonal lengths: AB=a, BC=b, CD=c, DA=d, AC=p, BD=q.
struct QuadLengths {
    double a, b, c, d, p, q;
    bool operator==(const QuadLengths&) const = default;
};

// Diagonal chart: OA=x, OC=u, OB=y, OD=z around the diagonal crossing O,
// t = cos(angle AOB), with x,y,z,u > 0 and -1 < t < 1.
struct DiagParams {
    double x, y, z, u, t;
    bool operator==(const DiagParams&) const = default;
};

struct Point {
    double x, y;
};

enum class DPosition { inside, on, outside };
std::string to_string(DPosition p);

struct ClassificationReport {
    double scale = 1.0;           // (a+b+c+d+p+q)/6; tolerances scale by powers of it
    double planar_residual = 0;   // quadrilateral-equation residual / scale^6
    bool feasible = false;        // strict triangle chains and positivity
    bool convex = false;          // the three strict convexity inequalities
    bool convex_marginal = false; // within the tolerance band of the convexity boundary
    double c2 = 0, c3 = 0;        // raw criterion values
    double c2_norm = 0, c3_norm = 0;  // scale-normalized (L^2 resp. L^3)
    bool cyclic = false;
    DPosition d_position = DPosition::on;  // vertex D against circle ABC (convex inputs)
    std::optional<double> circumradius;    // filled when cyclic
};

// Chart -> lengths via the four cosine laws; throws GeomError outside the
// open chart domain.
QuadLengths lengths_from_params(const DiagParams& dp);

double c2(const QuadLengths& ql);  // ac + bd - pq
double c3(const QuadLengths& ql);  // abp - bcq + cdp - daq

// 5x5 bordered determinant of squared distances. Zero exactly on planar
// configurations; equals 288 V^2 for a tetrahedron of volume V.
double cayley_menger(const QuadLengths& ql);

// The explicit 22-term expansion of the same condition. Related to the
// determinant by cayley_menger == kCmToQuadEq * quad_equation_residual,
// pinned symbolically by identity I-CM-EXPANSION.
inline constexpr double kCmToQuadEq = -2.0;
double quad_equation_residual(const QuadLengths& ql);

bool feasible(const QuadLengths& ql);

// The three strict convexity inequalities. convex() enforces the
// precondition (feasible and planar within tolerance); the _raw form just
// evaluates the inequalities. margin (if nonnull) receives the smallest
// normalized slack, negative when some inequality fails.
bool convex_raw(const QuadLengths& ql, double* margin = nullptr);
bool convex(const QuadLengths& ql, double tol = 1e-9);

// Cartesian embedding: O at the origin, A=(-x,0), C=(u,0), B and D across
// the second axis. Pairwise distances reproduce lengths_from_params to
// machine precision (the printed angle convention is adjusted so that
// cos(angle AOB) really is t).
std::array<Point, 4> embed(const DiagParams& dp);

// Position of D against the circle through A,B,C via the incircle
// determinant, orientation-normalized. Throws on collinear A,B,C.
DPosition circumcircle_side(Point A, Point B, Point C, Point D, double tol = 1e-12);

// The cyclic value of z: xu - yz vanishes at z = xu/y.
double cyclic_z(double x, double y, double u);

struct CircumradiusResult {
    double r;       // mean of the four estimates
    double spread;  // max - min of the estimates
    std::array<double, 4> estimates;  // abp, bcq, cdp, daq over 4*area
};

// Circumradius computed four ways (triangle areas from the embedding);
// requires a cyclic configuration: |xu - yz| below tol * scale^2.
CircumradiusResult circumradius(const QuadLengths& ql, const DiagParams& dp, double tol = 1e-9);

// Same four estimates from lengths alone (Heron areas), for cross-checks.
CircumradiusResult circumradius_from_lengths(const QuadLengths& ql);

ClassificationReport classify(const QuadLengths& ql, double tol = 1e-9);

}  // namespace cyclicquad

#include "cyclicquad/quad_geom.hpp"

#include <algorithm>
#include <cmath>

namespace cyclicquad {

std::string to_string(DPosition p) {
    switch (p) {
        case DPosition::inside: return "inside";
        case DPosition::on: return "on";
        case DPosition::outside: return "outside";
    }
    return "?";
}

QuadLengths lengths_from_params(const DiagParams& dp) {
    if (!(dp.x > 0 && dp.y > 0 && dp.z > 0 && dp.u > 0))
        throw GeomError("lengths_from_params: segment lengths must be positive");
    if (!(dp.t > -1.0 && dp.t < 1.0))
        throw GeomError("lengths_from_params: t must lie in (-1, 1)");
    QuadLengths ql;
    ql.a = std::sqrt(dp.x * dp.x + dp.y * dp.y - 2 * dp.x * dp.y * dp.t);
    ql.b = std::sqrt(dp.u * dp.u + dp.y * dp.y + 2 * dp.u * dp.y * dp.t);
    ql.c = std::sqrt(dp.u * dp.u + dp.z * dp.z - 2 * dp.u * dp.z * dp.t);
    ql.d = std::sqrt(dp.x * dp.x + dp.z * dp.z + 2 * dp.x * dp.z * dp.t);
    ql.p = dp.x + dp.u;
    ql.q = dp.y + dp.z;
    return ql;
}

double c2(const QuadLengths& ql) { return ql.a * ql.c + ql.b * ql.d - ql.p * ql.q; }

double c3(const QuadLengths& ql) {
    return ql.a * ql.b * ql.p - ql.b * ql.c * ql.q + ql.c * ql.d * ql.p - ql.d * ql.a * ql.q;
}

namespace {

double det5(double m[5][5]) {
    // plain Gaussian elimination with partial pivoting
    double det = 1.0;
    for (int k = 0; k < 5; ++k) {
        int pivot = k;
        for (int i = k + 1; i < 5; ++i)
            if (std::fabs(m[i][k]) > std::fabs(m[pivot][k])) pivot = i;
        if (m[pivot][k] == 0.0) return 0.0;
        if (pivot != k) {
            for (int j = 0; j < 5; ++j) std::swap(m[pivot][j], m[k][j]);
            det = -det;
        }
        det *= m[k][k];
        for (int i = k + 1; i < 5; ++i) {
            double f = m[i][k] / m[k][k];
            for (int j = k; j < 5; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

}  // namespace

double cayley_menger(const QuadLengths& ql) {
    double a2 = ql.a * ql.a, b2 = ql.b * ql.b, c2v = ql.c * ql.c;
    double d2 = ql.d * ql.d, p2 = ql.p * ql.p, q2 = ql.q * ql.q;
    double m[5][5] = {
        {0, 1, 1, 1, 1},
        {1, 0, a2, p2, d2},
        {1, a2, 0, b2, q2},
        {1, p2, b2, 0, c2v},
        {1, d2, q2, c2v, 0},
    };
    return det5(m);
}

double quad_equation_residual(const QuadLengths& ql) {
    double a2 = ql.a * ql.a, b2 = ql.b * ql.b, c2v = ql.c * ql.c;
    double d2 = ql.d * ql.d, p2 = ql.p * ql.p, q2 = ql.q * ql.q;
    return a2 * a2 * c2v + a2 * c2v * c2v + b2 * b2 * d2 + b2 * d2 * d2 + p2 * p2 * q2 +
           p2 * q2 * q2 + a2 * b2 * p2 + b2 * c2v * q2 + c2v * d2 * p2 + d2 * a2 * q2 -
           a2 * b2 * c2v - a2 * b2 * d2 - a2 * c2v * d2 - a2 * c2v * p2 - a2 * c2v * q2 -
           a2 * p2 * q2 - b2 * c2v * d2 - b2 * d2 * p2 - b2 * d2 * q2 - b2 * p2 * q2 -
           c2v * p2 * q2 - d2 * p2 * q2;
}

bool feasible(const QuadLengths& ql) {
    const double vals[6] = {ql.a, ql.b, ql.c, ql.d, ql.p, ql.q};
    for (double v : vals)
        if (!(v > 0) || !std::isfinite(v)) return false;
    auto chain = [](double s1, double s2, double base) {
        return std::fabs(s1 - s2) < base && base < s1 + s2;
    };
    return chain(ql.a, ql.b, ql.p) && chain(ql.c, ql.d, ql.p) && chain(ql.b, ql.c, ql.q) &&
           chain(ql.a, ql.d, ql.q);
}

bool convex_raw(const QuadLengths& ql, double* margin) {
    const double a = ql.a, b = ql.b, c = ql.c, d = ql.d, p = ql.p, q = ql.q;
    double s = (a + b + c + d + p + q) / 6.0;
    double s3 = s * s * s;
    // right side minus left side of each strict inequality, normalized
    double g1 = (d * (a * a + p * p - b * b) - p * (a * a + d * d - q * q)) / s3;
    double g2 = (a * (b * b + q * q - c * c) - q * (a * a + b * b - p * p)) / s3;
    double g3 = (b * (a * a + q * q - d * d) - q * (a * a + b * b - p * p)) / s3;
    double m = std::min({g1, g2, g3});
    if (margin) *margin = m;
    return g1 > 0 && g2 > 0 && g3 > 0;
}

bool convex(const QuadLengths& ql, double tol) {
    if (!feasible(ql)) throw GeomError("convex: infeasible side/diagonal lengths");
    double s = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
    double planar = quad_equation_residual(ql) / std::pow(s, 6);
    if (std::fabs(planar) > 1e4 * tol)
        throw GeomError("convex: lengths do not describe a planar quadrilateral");
    return convex_raw(ql);
}

std::array<Point, 4> embed(const DiagParams& dp) {
    if (!(dp.x > 0 && dp.y > 0 && dp.z > 0 && dp.u > 0 && dp.t > -1.0 && dp.t < 1.0))
        throw GeomError("embed: parameters outside the chart domain");
    double s = std::sqrt(1.0 - dp.t * dp.t);
    // cos(angle AOB) = t requires OB opposite in sign to OA's direction
    return {Point{-dp.x, 0.0}, Point{-dp.y * dp.t, dp.y * s}, Point{dp.u, 0.0},
            Point{dp.z * dp.t, -dp.z * s}};
}

DPosition circumcircle_side(Point A, Point B, Point C, Point D, double tol) {
    double orient = (B.x - A.x) * (C.y - A.y) - (B.y - A.y) * (C.x - A.x);
    double scale2 = std::max({A.x * A.x + A.y * A.y, B.x * B.x + B.y * B.y,
                              C.x * C.x + C.y * C.y, D.x * D.x + D.y * D.y, 1e-300});
    if (std::fabs(orient) < 1e-14 * scale2)
        throw GeomError("circumcircle_side: A, B, C are collinear");

    auto row = [&](Point P) {
        double dx = P.x - D.x, dy = P.y - D.y;
        return std::array<double, 3>{dx, dy, dx * dx + dy * dy};
    };
    auto ra = row(A), rb = row(B), rc = row(C);
    double det = ra[0] * (rb[1] * rc[2] - rb[2] * rc[1]) -
                 ra[1] * (rb[0] * rc[2] - rb[2] * rc[0]) +
                 ra[2] * (rb[0] * rc[1] - rb[1] * rc[0]);
    double v = det * (orient > 0 ? 1.0 : -1.0);
    double norm = scale2 * scale2;  // det has dimension L^4
    if (std::fabs(v) <= tol * norm) return DPosition::on;
    return v > 0 ? DPosition::inside : DPosition::outside;
}

double cyclic_z(double x, double y, double u) {
    if (!(x > 0 && y > 0 && u > 0)) throw GeomError("cyclic_z: arguments must be positive");
    return x * u / y;
}

namespace {

double triangle_area(Point A, Point B, Point C) {
    return 0.5 * std::fabs((B.x - A.x) * (C.y - A.y) - (B.y - A.y) * (C.x - A.x));
}

double heron(double s1, double s2, double s3) {
    double s = 0.5 * (s1 + s2 + s3);
    double h = s * (s - s1) * (s - s2) * (s - s3);
    return h > 0 ? std::sqrt(h) : 0.0;
}

CircumradiusResult radius_from_areas(const QuadLengths& ql, const std::array<double, 4>& areas) {
    CircumradiusResult out{};
    const double nums[4] = {ql.a * ql.b * ql.p, ql.b * ql.c * ql.q, ql.c * ql.d * ql.p,
                            ql.d * ql.a * ql.q};
    for (int i = 0; i < 4; ++i) {
        if (areas[i] <= 0) throw GeomError("circumradius: degenerate triangle");
        out.estimates[i] = nums[i] / (4.0 * areas[i]);
    }
    auto [lo, hi] = std::minmax_element(out.estimates.begin(), out.estimates.end());
    out.spread = *hi - *lo;
    out.r = 0.25 * (out.estimates[0] + out.estimates[1] + out.estimates[2] + out.estimates[3]);
    return out;
}

}  // namespace

CircumradiusResult circumradius(const QuadLengths& ql, const DiagParams& dp, double tol) {
    double s2 = dp.x * dp.u;  // scale^2 proxy for the chart
    if (std::fabs(dp.x * dp.u - dp.y * dp.z) > tol * std::max(s2, dp.y * dp.z))
        throw GeomError("circumradius: configuration is not cyclic");
    auto pts = embed(dp);
    std::array<double, 4> areas = {
        triangle_area(pts[0], pts[1], pts[2]),  // ABC
        triangle_area(pts[1], pts[2], pts[3]),  // BCD
        triangle_area(pts[2], pts[3], pts[0]),  // CDA
        triangle_area(pts[3], pts[0], pts[1]),  // DAB
    };
    return radius_from_areas(ql, areas);
}

CircumradiusResult circumradius_from_lengths(const QuadLengths& ql) {
    std::array<double, 4> areas = {heron(ql.a, ql.b, ql.p), heron(ql.b, ql.c, ql.q),
                                   heron(ql.c, ql.d, ql.p), heron(ql.d, ql.a, ql.q)};
    return radius_from_areas(ql, areas);
}

ClassificationReport classify(const QuadLengths& ql, double tol) {
    ClassificationReport rep;
    rep.scale = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
    double s = rep.scale > 0 ? rep.scale : 1.0;
    rep.c2 = c2(ql);
    rep.c3 = c3(ql);
    rep.c2_norm = rep.c2 / (s * s);
    rep.c3_norm = rep.c3 / (s * s * s);
    rep.planar_residual = quad_equation_residual(ql) / std::pow(s, 6);
    rep.feasible = feasible(ql);
    bool planar = std::fabs(rep.planar_residual) < 1e4 * tol;

    double margin = 0;
    bool cvx = rep.feasible && planar ? convex_raw(ql, &margin) : false;
    rep.convex = cvx;
    rep.convex_marginal = rep.feasible && planar && std::fabs(margin) < 1e3 * tol;

    rep.cyclic = rep.feasible && planar && cvx && std::fabs(rep.c2_norm) < tol;
    // Theorem-2 sign rule, oracle-validated: c3 > 0 puts D inside circle ABC.
    if (rep.c3_norm > tol)
        rep.d_position = DPosition::inside;
    else if (rep.c3_norm < -tol)
        rep.d_position = DPosition::outside;
    else
        rep.d_position = DPosition::on;
    if (rep.cyclic) rep.circumradius = circumradius_from_lengths(ql).r;
    return rep;
}

}  // namespace cyclicquad

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cyclicquad/quad_geom.hpp"
#include "cyclicquad/rng.hpp"

using namespace cyclicquad;

namespace {

DiagParams random_params(Rng& rng) {
    return DiagParams{rng.log_uniform(0.05, 20.0), rng.log_uniform(0.05, 20.0),
                      rng.log_uniform(0.05, 20.0), rng.log_uniform(0.05, 20.0),
                      rng.uniform(-0.999, 0.999)};
}

const QuadLengths kSquare{1, 1, 1, 1, std::sqrt(2.0), std::sqrt(2.0)};
// perpendicular-diagonal symmetric counterexample family, extremal member
const QuadLengths kCounterexample{1.025459, 1.025459, 0.403334, 0.403334, 0.454167, 0.666667};

}  // namespace

TEST_CASE("lengths_from_params") {
    QuadLengths ql = lengths_from_params({1, 1, 1, 1, 0});
    CHECK(ql.a == doctest::Approx(std::sqrt(2.0)));
    CHECK(ql.b == doctest::Approx(std::sqrt(2.0)));
    CHECK(ql.c == doctest::Approx(std::sqrt(2.0)));
    CHECK(ql.d == doctest::Approx(std::sqrt(2.0)));
    CHECK(ql.p == 2.0);
    CHECK(ql.q == 2.0);

    CHECK_THROWS_AS(lengths_from_params({1, 1, 1, 1, 1.0}), GeomError);
    CHECK_THROWS_AS(lengths_from_params({0.227083, -1.0 / 3, 1, 0.227083, 0}), GeomError);

    // cyclic chart point: x*u == y*z
    QuadLengths cy = lengths_from_params({2, 1, 6, 3, 0.5});
    auto rep = classify(cy);
    CHECK(rep.cyclic);
}

TEST_CASE("c2 and c3 basics") {
    CHECK(c2(kSquare) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c3(kSquare) == doctest::Approx(0.0).epsilon(1e-12));

    QuadLengths kite = lengths_from_params({1, 2, 1, 2, 0});
    CHECK(c2(kite) > 0);

    // the counterexample family is defined by C3 = 0 but is non-convex
    CHECK(std::fabs(c3(kCounterexample)) < 1e-4);
    CHECK_FALSE(convex(kCounterexample, 1e-4));
    CHECK(feasible(kCounterexample));
}

TEST_CASE("cayley_menger") {
    CHECK(cayley_menger(kSquare) == doctest::Approx(0.0).epsilon(1e-12));

    // regular tetrahedron, all six distances 1: det = 288 V^2 with
    // V = sqrt(2)/12, i.e. 4. Cross-check against Cartesian coordinates.
    QuadLengths tetra{1, 1, 1, 1, 1, 1};
    double det = cayley_menger(tetra);
    CHECK(det == doctest::Approx(4.0).epsilon(1e-12));
    {
        // brute-force volume from coordinates of the regular tetrahedron
        double ax = 0, ay = 0, az = 0;
        double bx = 1, by = 0, bz = 0;
        double cx = 0.5, cy = std::sqrt(3.0) / 2, cz = 0;
        double dx = 0.5, dy = std::sqrt(3.0) / 6, dz = std::sqrt(6.0) / 3;
        double v = std::fabs((bx - ax) * ((cy - ay) * (dz - az) - (cz - az) * (dy - ay)) -
                             (by - ay) * ((cx - ax) * (dz - az) - (cz - az) * (dx - ax)) +
                             (bz - az) * ((cx - ax) * (dy - ay) - (cy - ay) * (dx - ax))) /
                   6.0;
        CHECK(det == doctest::Approx(288.0 * v * v).epsilon(1e-9));
    }

    // planarity of every chart image
    Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
        QuadLengths ql = lengths_from_params(random_params(rng));
        double s = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
        CHECK(std::fabs(cayley_menger(ql)) < 1e-7 * std::pow(s, 6));
    }
}

TEST_CASE("quad_equation_residual") {
    CHECK(quad_equation_residual(kSquare) == doctest::Approx(0.0).epsilon(1e-12));

    QuadLengths ql = lengths_from_params({2, 1, 0.5, 3, 0.25});
    double s = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
    CHECK(std::fabs(quad_equation_residual(ql)) < 1e-9 * std::pow(s, 6));

    QuadLengths bent = ql;
    bent.q += 0.1;
    CHECK(std::fabs(quad_equation_residual(bent)) > 1e-4);

    // determinant relation pinned by I-CM-EXPANSION, on non-planar data too
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        QuadLengths any{rng.log_uniform(0.2, 5), rng.log_uniform(0.2, 5), rng.log_uniform(0.2, 5),
                        rng.log_uniform(0.2, 5), rng.log_uniform(0.2, 5), rng.log_uniform(0.2, 5)};
        double lhs = cayley_menger(any);
        double rhs = kCmToQuadEq * quad_equation_residual(any);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("feasible") {
    CHECK(feasible(kSquare));
    CHECK_FALSE(feasible({1, 1, 1, 1, 2.5, std::sqrt(2.0)}));
    CHECK_FALSE(feasible({1, 1, 1, 1, 2.0, std::sqrt(2.0)}));  // non-strict boundary
    CHECK_FALSE(feasible({0, 1, 1, 1, 1, 1}));
}

TEST_CASE("convex") {
    CHECK(convex(kSquare));
    CHECK_FALSE(convex(kCounterexample, 1e-4));
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        QuadLengths ql = lengths_from_params(random_params(rng));
        CHECK(convex(ql, 1e-6));
    }
    CHECK_THROWS_AS(convex({1, 1, 1, 1, 2.5, 1.0}), GeomError);   // infeasible
    CHECK_THROWS_AS(convex({1, 1, 1, 1, 1.2, 1.9}), GeomError);   // feasible but non-planar
}

TEST_CASE("embed") {
    auto pts = embed({1, 1, 1, 1, 0});
    CHECK(pts[0].x == doctest::Approx(-1));
    CHECK(pts[0].y == doctest::Approx(0));
    CHECK(pts[1].x == doctest::Approx(0));
    CHECK(pts[1].y == doctest::Approx(1));
    CHECK(pts[2].x == doctest::Approx(1));
    CHECK(pts[3].y == doctest::Approx(-1));

    CHECK_THROWS_AS(embed({1, 1, 1, 1, 1.0}), GeomError);

    // distances reproduce the cosine-law lengths
    Rng rng(42);
    double worst = 0;
    for (int i = 0; i < 100000; ++i) {
        DiagParams dp = random_params(rng);
        QuadLengths ql = lengths_from_params(dp);
        auto e = embed(dp);
        auto dist = [](Point p1, Point p2) { return std::hypot(p1.x - p2.x, p1.y - p2.y); };
        double s = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
        double err = std::max({std::fabs(dist(e[0], e[1]) - ql.a), std::fabs(dist(e[1], e[2]) - ql.b),
                               std::fabs(dist(e[2], e[3]) - ql.c), std::fabs(dist(e[3], e[0]) - ql.d),
                               std::fabs(dist(e[0], e[2]) - ql.p), std::fabs(dist(e[1], e[3]) - ql.q)}) /
                     s;
        worst = std::max(worst, err);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("circumcircle_side") {
    Point A{0, 0}, B{1, 0}, C{1, 1};
    CHECK(circumcircle_side(A, B, C, Point{0, 1}) == DPosition::on);
    CHECK(circumcircle_side(A, B, C, Point{0.5, 0.5}) == DPosition::inside);
    CHECK(circumcircle_side(A, B, C, Point{5, 5}) == DPosition::outside);
    CHECK_THROWS_AS(circumcircle_side(A, B, Point{2, 0}, C), GeomError);

    // orientation independence
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        Point P1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Point P2{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Point P3{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Point D{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        double orient = (P2.x - P1.x) * (P3.y - P1.y) - (P2.y - P1.y) * (P3.x - P1.x);
        if (std::fabs(orient) < 1e-3) continue;
        auto s1 = circumcircle_side(P1, P2, P3, D);
        auto s2 = circumcircle_side(P3, P1, P2, D);
        auto s3 = circumcircle_side(P2, P1, P3, D);
        CHECK(s1 == s2);
        CHECK(s1 == s3);
    }
}

TEST_CASE("cyclic_z and circumradius") {
    CHECK(cyclic_z(1, 1, 1) == doctest::Approx(1.0));
    CHECK(cyclic_z(2, 1, 3) == doctest::Approx(6.0));

    // chart square (side sqrt(2), R = 1) and unit-side square (R = sqrt(2)/2)
    DiagParams sq{1, 1, 1, 1, 0};
    auto r = circumradius(lengths_from_params(sq), sq);
    CHECK(r.r == doctest::Approx(1.0));
    CHECK(r.spread < 1e-12);
    CHECK(circumradius_from_lengths(kSquare).r == doctest::Approx(std::sqrt(0.5)));

    Rng rng(13);
    for (int i = 0; i < 5000; ++i) {
        double x = rng.log_uniform(0.1, 10), y = rng.log_uniform(0.1, 10),
               u = rng.log_uniform(0.1, 10), t = rng.uniform(-0.99, 0.99);
        DiagParams dp{x, y, cyclic_z(x, y, u), u, t};
        QuadLengths ql = lengths_from_params(dp);
        auto res = circumradius(ql, dp);
        CHECK(res.spread < 1e-9 * res.r);
        // Heron route agrees with the embedding route
        auto res2 = circumradius_from_lengths(ql);
        CHECK(res2.r == doctest::Approx(res.r).epsilon(1e-9));
        // every point of the embedding lies at distance R from the center
        auto rep = classify(ql);
        CHECK(rep.cyclic);
    }

    CHECK_THROWS_AS(circumradius(lengths_from_params({2, 1, 5, 3, 0.3}), {2, 1, 5, 3, 0.3}),
                    GeomError);
}

TEST_CASE("classify") {
    auto rep = classify(kSquare);
    CHECK(rep.cyclic);
    CHECK(rep.d_position == DPosition::on);
    CHECK(rep.circumradius.has_value());
    CHECK(*rep.circumradius == doctest::Approx(std::sqrt(0.5)));

    SUBCASE("sign rule against the Cartesian oracle") {
        // z below the cyclic value: xu - yz > 0, c3 > 0, D inside circle ABC
        DiagParams dp{2, 1, 5, 3, 0.3};
        QuadLengths ql = lengths_from_params(dp);
        auto r = classify(ql);
        CHECK_FALSE(r.cyclic);
        CHECK(r.c3 > 0);
        CHECK(r.d_position == DPosition::inside);
        auto e = embed(dp);
        CHECK(circumcircle_side(e[0], e[1], e[2], e[3]) == DPosition::inside);
    }

    SUBCASE("counterexample tuple: c3 ~ 0 but not cyclic") {
        auto r = classify(kCounterexample, 1e-4);
        CHECK_FALSE(r.cyclic);
        CHECK_FALSE(r.convex);
        CHECK(std::fabs(r.c3_norm) < 1e-3);
        CHECK(r.feasible);
    }

    SUBCASE("cyclic verdict is invariant under vertex relabeling") {
        Rng rng(17);
        for (int i = 0; i < 2000; ++i) {
            double x = rng.log_uniform(0.1, 10), y = rng.log_uniform(0.1, 10),
                   u = rng.log_uniform(0.1, 10), t = rng.uniform(-0.99, 0.99);
            bool make_cyclic = (i % 2 == 0);
            double z = make_cyclic ? cyclic_z(x, y, u) : rng.log_uniform(0.1, 10);
            QuadLengths ql = lengths_from_params({x, y, z, u, t});
            QuadLengths rolled{ql.b, ql.c, ql.d, ql.a, ql.q, ql.p};  // A->B->C->D->A
            CHECK(classify(ql).cyclic == classify(rolled).cyclic);
        }
    }

    SUBCASE("exactly one factor of the threefold product vanishes on cyclic data") {
        Rng rng(23);
        for (int i = 0; i < 5000; ++i) {
            double x = rng.log_uniform(0.1, 10), y = rng.log_uniform(0.1, 10),
                   u = rng.log_uniform(0.1, 10), t = rng.uniform(-0.99, 0.99);
            QuadLengths ql = lengths_from_params({x, y, cyclic_z(x, y, u), u, t});
            double s = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
            double f1 = (ql.a * ql.c + ql.b * ql.d - ql.p * ql.q) / (s * s);
            double f2 = (ql.a * ql.c + ql.p * ql.q - ql.b * ql.d) / (s * s);
            double f3 = (ql.b * ql.d + ql.p * ql.q - ql.a * ql.c) / (s * s);
            CHECK(std::fabs(f1) < 1e-9);
            CHECK(f2 > 1e-6);
            CHECK(f3 > 1e-6);
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cyclicquad/multipoly.hpp"

using namespace cyclicquad;

namespace {

MultiPoly P(const std::string& s) { return parse_poly(s); }

// Small random polynomial generator for property tests.
MultiPoly random_poly(std::mt19937_64& rng, int max_terms = 5, int max_exp = 3) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> expd(0, max_exp);
    std::uniform_int_distribution<long> coefd(-6, 6);
    std::vector<std::pair<std::vector<unsigned>, Rational>> terms;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        std::vector<unsigned> e = {static_cast<unsigned>(expd(rng)), static_cast<unsigned>(expd(rng)),
                                   static_cast<unsigned>(expd(rng))};
        long c = coefd(rng);
        if (c == 0) c = 1;
        terms.emplace_back(e, rat(c));
    }
    return MultiPoly::build({"x", "y", "z"}, terms);
}

}  // namespace

TEST_CASE("build produces canonical polynomials") {
    MultiPoly p = MultiPoly::build({"x", "y"}, {{{1, 0}, rat(1)}, {{0, 1}, rat(1)}});
    CHECK(p == P("x + y"));
    CHECK(p.term_count() == 2);

    SUBCASE("duplicate exponent vectors cancel") {
        MultiPoly q = MultiPoly::build({"x"}, {{{2}, rat(1)}, {{2}, rat(-1)}});
        CHECK(q.is_zero());
        CHECK(q.term_count() == 0);
    }
    SUBCASE("mismatched exponent length is an error") {
        CHECK_THROWS_AS(MultiPoly::build({"x", "y"}, {{{1}, rat(1)}}), PolyError);
    }
    SUBCASE("term maps do not depend on insertion order") {
        MultiPoly a = MultiPoly::build({"x", "y"}, {{{1, 0}, rat(2)}, {{0, 1}, rat(3)}});
        MultiPoly b = MultiPoly::build({"y", "x"}, {{{3, 0}, rat(5)}, {{0, 1}, rat(2)}, {{1, 0}, rat(3)}, {{3, 0}, rat(-5)}});
        CHECK(a == b);
        CHECK(a.terms() == b.terms());
    }
}

TEST_CASE("ring operations") {
    CHECK(P("x+y") * P("x-y") == P("x^2 - y^2"));
    MultiPoly p = P("x + u");
    CHECK(poly_pow(p, 2) == P("x^2 + 2*x*u + u^2"));
    CHECK(P("x") - P("x") == MultiPoly{});
    CHECK((rat(3, 2) * P("2*x")) == P("3*x"));

    SUBCASE("degree of a product adds") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 200; ++i) {
            MultiPoly a = random_poly(rng), b = random_poly(rng);
            if (a.is_zero() || b.is_zero()) continue;
            CHECK((a * b).total_degree() == a.total_degree() + b.total_degree());
        }
    }
}

TEST_CASE("substitute") {
    CHECK(substitute(P("x*y"), "x", MultiPoly{}) == MultiPoly{});
    CHECK(substitute(P("x^2 + y"), "x", P("y + 1")) == P("y^2 + 3*y + 1"));
    CHECK_THROWS_AS(substitute(P("x"), "w", P("1")), PolyError);

    SUBCASE("identity substitution") {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 100; ++i) {
            MultiPoly a = random_poly(rng);
            if (std::find(a.vars().begin(), a.vars().end(), "x") == a.vars().end()) continue;
            CHECK(substitute(a, "x", P("x")) == a);
        }
    }
}

TEST_CASE("substitute_rational clears denominators") {
    // p(x) = x^2 + 1 at x = a/b gives (a^2 + b^2) after clearing b^2.
    MultiPoly r = substitute_rational(P("x^2 + 1"), "x", P("a"), P("b"));
    CHECK(r == P("a^2 + b^2"));
    CHECK_THROWS_AS(substitute_rational(P("x"), "x", P("a"), MultiPoly{}), PolyError);
}

TEST_CASE("divide_exact") {
    auto q = divide_exact(P("x^2 - y^2"), P("x - y"));
    REQUIRE(q.has_value());
    CHECK(*q == P("x + y"));

    CHECK_FALSE(divide_exact(P("x + y"), P("x - y")).has_value());
    CHECK_THROWS_AS(divide_exact(P("x"), MultiPoly{}), PolyError);

    SUBCASE("round trip: (p*q)/q == p") {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 300; ++i) {
            MultiPoly a = random_poly(rng), b = random_poly(rng);
            if (b.is_zero()) continue;
            auto quot = divide_exact(a * b, b);
            REQUIRE(quot.has_value());
            CHECK(*quot == a);
            CHECK(*quot * b == a * b);  // re-multiplication check
        }
    }
}

TEST_CASE("resultant") {
    SUBCASE("2x2 Sylvester") {
        MultiPoly r = resultant(P("lam - x"), P("lam - y"), "lam");
        bool ok = (r == P("x - y")) || (r == P("y - x"));
        CHECK(ok);
        // documented convention: p-block first => a*d - b*c
        MultiPoly s = resultant(P("a*lam + b"), P("c*lam + d"), "lam");
        CHECK(s == P("a*d - b*c"));
    }
    SUBCASE("vanishes exactly on shared roots") {
        // p = (lam - s)(lam - 1), q = (lam - s)(lam + 2) share the root lam = s.
        MultiPoly p = P("lam^2 - lam*s - lam + s");
        MultiPoly q = P("lam^2 - lam*s + 2*lam - 2*s");
        MultiPoly r = resultant(p, q, "lam");
        CHECK(r.is_zero());
    }
    SUBCASE("generic pair is nonzero and correct") {
        // res_lam((lam-x)(lam-y), lam-z) = (z-x)(z-y)
        MultiPoly p = P("lam^2 - lam*x - lam*y + x*y");
        MultiPoly r = resultant(p, P("lam - z"), "lam");
        CHECK(r == P("z^2 - z*x - z*y + x*y"));
    }
    CHECK_THROWS_AS(resultant(P("x"), P("y"), "lam"), PolyError);
}

TEST_CASE("evaluate") {
    MultiPoly cycl = P("x*u - y*z");
    std::map<std::string, Rational> pt{{"x", rat(2)}, {"u", rat(3)}, {"y", rat(1)}, {"z", rat(6)}};
    CHECK(evaluate(cycl, pt) == 0);

    MultiPoly a = P("3*y^2 + 4*t*y - 8*t*x*y + 1 - 4*x + 4*x^2");  // 3y^2+4(1-2x)ty+(1-2x)^2
    std::map<std::string, Rational> pt2{{"y", rat(1)}, {"x", rat(1, 2)}, {"t", rat(0)}};
    CHECK(evaluate(a, pt2) == 3);

    CHECK(evaluate(MultiPoly{}, {}) == 0);
    CHECK_THROWS_AS(evaluate(P("x"), {}), PolyError);
}

TEST_CASE("structure queries") {
    MultiPoly p = P("x^2*y + 4*t^2*x^3");
    auto s = structure(p);
    CHECK(s.term_count == 2);
    CHECK(s.total_degree == 5);
    CHECK(p.degree_in("t") == 2);
    CHECK(p.degree_in("y") == 1);
    CHECK(p.degree_in("w") == 0);

    ExponentWeighting w{{{"x", 1u}, {"y", 1u}, {"t", 0u}}};
    CHECK(p.is_homogeneous(w));  // both terms have x,y-degree 3
    CHECK_FALSE(p.is_homogeneous());
}

TEST_CASE("weighted truncation") {
    ExponentWeighting wx{{{"x", 1u}}};
    CHECK(weighted_truncation(P("x^3 + x"), wx) == P("x"));

    ExponentWeighting wxy{{{"x", 1u}, {"y", 1u}}};
    CHECK(weighted_truncation(P("x^2*y + x*y^2"), wxy) == P("x^2*y + x*y^2"));  // tie

    ExponentWeighting w2{{{"x", 2u}, {"y", 1u}, {"z", 1u}}};
    CHECK(weighted_truncation(P("x + 3*y*z + x^2*y"), w2) == P("x + 3*y*z"));
    CHECK(weighted_truncation(P("x + 3*y*z + x^2*y"), w2, 5) == P("x^2*y"));

    CHECK_THROWS_AS(weighted_truncation(MultiPoly{}, wx), PolyError);
    CHECK_THROWS_AS(weighted_truncation(P("x^2"), wx, 1), PolyError);
}

TEST_CASE("primitive part") {
    Rational c;
    MultiPoly p = primitive_part(P("4*x^2 - 6*y"), &c);
    CHECK(p == P("2*x^2 - 3*y"));
    CHECK(c == 2);
    MultiPoly q = primitive_part(P("0 - 2*x"), &c);
    CHECK(q == P("x"));
    CHECK(c == -2);
    MultiPoly r = primitive_part(P("1/2*x + 1/3"), &c);
    CHECK(r == P("3*x + 2"));
    CHECK(c == rat(1, 6));
}

TEST_CASE("determinant (Bareiss)") {
    // det [[x, y], [z, u]] = x*u - y*z
    std::vector<std::vector<MultiPoly>> m{{P("x"), P("y")}, {P("z"), P("u")}};
    CHECK(poly_determinant(m) == P("x*u - y*z"));

    // singular matrix
    std::vector<std::vector<MultiPoly>> s{{P("x"), P("x")}, {P("y"), P("y")}};
    CHECK(poly_determinant(s).is_zero());

    // pivoting with a zero corner
    std::vector<std::vector<MultiPoly>> z{{MultiPoly{}, P("1")}, {P("1"), MultiPoly{}}};
    CHECK(poly_determinant(z) == P("0 - 1"));
}

TEST_CASE("text round trip") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        MultiPoly a = random_poly(rng);
        CHECK(parse_poly(to_string(a)) == a);
    }
    CHECK(to_string(MultiPoly{}) == "0");
    CHECK(parse_poly("0").is_zero());
    CHECK(parse_poly("-x^2") == -P("x^2"));
    CHECK_THROWS_AS(parse_poly("x +"), PolyError);
    CHECK_THROWS_AS(parse_poly(""), PolyError);
}

TEST_CASE("canonical universe ordering") {
    // x,y,z,u,t,lam come first; other names order lexicographically after.
    MultiPoly p = P("a + t + x + lam");
    CHECK(p.vars() == std::vector<std::string>{"x", "t", "lam", "a"});
}

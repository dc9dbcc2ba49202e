#include "cyclicquad/multipoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cyclicquad {

namespace {

const char* kCoreVars[] = {"x", "y", "z", "u", "t", "lam"};

Exponents zero_exponents() {
    Exponents e{};
    e.fill(0);
    return e;
}

}  // namespace

int var_rank(const std::string& name) {
    for (int i = 0; i < 6; ++i)
        if (name == kCoreVars[i]) return i;
    return 6;
}

bool var_precedes(const std::string& a, const std::string& b) {
    int ra = var_rank(a), rb = var_rank(b);
    if (ra != rb) return ra < rb;
    return a < b;  // both core (distinct ranks) never reach here; ties are non-core
}

MultiPoly MultiPoly::from_parts(std::vector<std::string> vars, TermMap terms) {
    MultiPoly p;
    p.vars_ = std::move(vars);
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->second == 0)
            it = terms.erase(it);
        else
            ++it;
    }
    p.terms_ = std::move(terms);
    return p;
}

MultiPoly MultiPoly::constant(Rational c) {
    MultiPoly p;
    if (c != 0) p.terms_.emplace(zero_exponents(), std::move(c));
    return p;
}

MultiPoly MultiPoly::variable(const std::string& name) {
    MultiPoly p;
    p.vars_ = {name};
    Exponents e = zero_exponents();
    e[0] = 1;
    p.terms_.emplace(e, rat(1));
    return p;
}

MultiPoly MultiPoly::build(const std::vector<std::string>& vars,
                           const std::vector<std::pair<std::vector<unsigned>, Rational>>& terms) {
    if (vars.size() > kMaxVars) throw PolyError("build: too many variables");
    for (std::size_t i = 0; i + 1 < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j]) throw PolyError("build: duplicate variable " + vars[i]);

    std::vector<std::string> sorted = vars;
    std::sort(sorted.begin(), sorted.end(), var_precedes);
    std::vector<std::size_t> slot(vars.size());  // given index -> canonical slot
    for (std::size_t i = 0; i < vars.size(); ++i)
        slot[i] = static_cast<std::size_t>(
            std::find(sorted.begin(), sorted.end(), vars[i]) - sorted.begin());

    TermMap map;
    for (const auto& [expvec, coef] : terms) {
        if (expvec.size() != vars.size())
            throw PolyError("build: exponent vector length mismatch");
        Exponents e = zero_exponents();
        for (std::size_t i = 0; i < expvec.size(); ++i) {
            if (expvec[i] > 0xffffu) throw PolyError("build: exponent too large");
            e[slot[i]] = static_cast<std::uint16_t>(expvec[i]);
        }
        auto [it, fresh] = map.emplace(e, coef);
        if (!fresh) it->second += coef;
    }
    return from_parts(std::move(sorted), std::move(map));
}

bool MultiPoly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == zero_exponents();
}

Rational MultiPoly::constant_value() const {
    if (terms_.empty()) return rat(0);
    if (!is_constant()) throw PolyError("constant_value: polynomial is not constant");
    return terms_.begin()->second;
}

int MultiPoly::total_degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (auto v : e) d += v;
        deg = std::max(deg, d);
    }
    return deg;
}

int MultiPoly::degree_in(const std::string& var) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) return 0;
    std::size_t pos = static_cast<std::size_t>(it - vars_.begin());
    int deg = 0;
    for (const auto& [e, c] : terms_) deg = std::max(deg, static_cast<int>(e[pos]));
    return deg;
}

bool MultiPoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (auto v : e) s += v;
        if (d < 0) d = s;
        if (s != d) return false;
    }
    return true;
}

namespace {
long weighted_degree(const Exponents& e, const std::vector<long>& w) {
    long s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * e[i];
    return s;
}

std::vector<long> weight_vector(const std::vector<std::string>& vars, const ExponentWeighting& w) {
    std::vector<long> out(vars.size(), 0);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = w.weights.find(vars[i]);
        if (it == w.weights.end())
            throw PolyError("weighting: missing weight for variable " + vars[i]);
        out[i] = static_cast<long>(it->second);
    }
    return out;
}
}  // namespace

bool MultiPoly::is_homogeneous(const ExponentWeighting& w) const {
    if (terms_.empty()) return true;
    auto wv = weight_vector(vars_, w);
    long d = weighted_degree(terms_.begin()->first, wv);
    for (const auto& [e, c] : terms_)
        if (weighted_degree(e, wv) != d) return false;
    return true;
}

long MultiPoly::weighted_degree_min(const ExponentWeighting& w) const {
    if (terms_.empty()) throw PolyError("weighted_degree_min: zero polynomial");
    auto wv = weight_vector(vars_, w);
    long best = weighted_degree(terms_.begin()->first, wv);
    for (const auto& [e, c] : terms_) best = std::min(best, weighted_degree(e, wv));
    return best;
}

long MultiPoly::weighted_degree_max(const ExponentWeighting& w) const {
    if (terms_.empty()) throw PolyError("weighted_degree_max: zero polynomial");
    auto wv = weight_vector(vars_, w);
    long best = weighted_degree(terms_.begin()->first, wv);
    for (const auto& [e, c] : terms_) best = std::max(best, weighted_degree(e, wv));
    return best;
}

Rational MultiPoly::coefficient(const std::map<std::string, unsigned>& monomial) const {
    Exponents e = zero_exponents();
    for (const auto& [name, exp] : monomial) {
        if (exp == 0) continue;
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) return rat(0);
        e[static_cast<std::size_t>(it - vars_.begin())] = static_cast<std::uint16_t>(exp);
    }
    auto it = terms_.find(e);
    return it == terms_.end() ? rat(0) : it->second;
}

Rational MultiPoly::leading_coefficient() const {
    return terms_.empty() ? rat(0) : terms_.begin()->second;
}

MultiPoly MultiPoly::compact() const {
    if (vars_.empty()) return *this;
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (e[i] > 0) used[i] = true;
    std::vector<std::string> keep;
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) {
            keep.push_back(vars_[i]);
            pos.push_back(i);
        }
    if (keep.size() == vars_.size()) return *this;
    TermMap map;
    for (const auto& [e, c] : terms_) {
        Exponents ne = zero_exponents();
        for (std::size_t i = 0; i < pos.size(); ++i) ne[i] = e[pos[i]];
        map.emplace(ne, c);
    }
    return from_parts(std::move(keep), std::move(map));
}

// Remaps both polynomials onto the union universe.
std::pair<MultiPoly, MultiPoly> aligned(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ == b.vars_) return {a, b};
    std::vector<std::string> uni = a.vars_;
    for (const auto& v : b.vars_)
        if (std::find(uni.begin(), uni.end(), v) == uni.end()) uni.push_back(v);
    if (uni.size() > kMaxVars) throw PolyError("aligned: union universe exceeds variable limit");
    std::sort(uni.begin(), uni.end(), var_precedes);

    auto remap = [&uni](const MultiPoly& p) {
        std::vector<std::size_t> slot(p.vars_.size());
        for (std::size_t i = 0; i < p.vars_.size(); ++i)
            slot[i] = static_cast<std::size_t>(
                std::find(uni.begin(), uni.end(), p.vars_[i]) - uni.begin());
        MultiPoly::TermMap map;
        for (const auto& [e, c] : p.terms_) {
            Exponents ne{};
            ne.fill(0);
            for (std::size_t i = 0; i < slot.size(); ++i) ne[slot[i]] = e[i];
            map.emplace(ne, c);
        }
        return MultiPoly::from_parts(uni, std::move(map));
    };
    return {remap(a), remap(b)};
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    auto [pa, pb] = aligned(a, b);
    return pa.terms_ == pb.terms_;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    auto [pa, pb] = aligned(a, b);
    MultiPoly::TermMap map = std::move(pa.terms_);
    for (const auto& [e, c] : pb.terms_) {
        auto [it, fresh] = map.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) map.erase(it);
        }
    }
    return MultiPoly::from_parts(std::move(pa.vars_), std::move(map));
}

MultiPoly operator-(const MultiPoly& a) {
    MultiPoly p = a;
    MultiPoly::TermMap map;
    for (const auto& [e, c] : p.terms()) map.emplace(e, -c);
    return MultiPoly::from_parts(p.vars(), std::move(map));
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    auto [pa, pb] = aligned(a, b);
    MultiPoly::TermMap map;
    for (const auto& [ea, ca] : pa.terms_) {
        for (const auto& [eb, cb] : pb.terms_) {
            Exponents e{};
            for (std::size_t i = 0; i < kMaxVars; ++i)
                e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
            auto [it, fresh] = map.emplace(e, ca * cb);
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) map.erase(it);
            }
        }
    }
    return MultiPoly::from_parts(std::move(pa.vars_), std::move(map));
}

MultiPoly operator*(const Rational& c, const MultiPoly& a) {
    if (c == 0) return MultiPoly{};
    MultiPoly::TermMap map;
    for (const auto& [e, k] : a.terms()) map.emplace(e, c * k);
    return MultiPoly::from_parts(a.vars(), std::move(map));
}

MultiPoly poly_pow(const MultiPoly& base, unsigned exp) {
    MultiPoly out = MultiPoly::constant(1);
    for (unsigned i = 0; i < exp; ++i) out = out * base;
    return out;
}

std::vector<MultiPoly> coefficients_in(const MultiPoly& p, const std::string& var) {
    auto it = std::find(p.vars().begin(), p.vars().end(), var);
    int deg = p.degree_in(var);
    std::vector<MultiPoly::TermMap> buckets(static_cast<std::size_t>(deg) + 1);
    if (it == p.vars().end()) {
        buckets[0] = p.terms();
    } else {
        std::size_t pos = static_cast<std::size_t>(it - p.vars().begin());
        for (const auto& [e, c] : p.terms()) {
            Exponents ne = e;
            std::uint16_t k = ne[pos];
            ne[pos] = 0;
            buckets[k].emplace(ne, c);
        }
    }
    std::vector<MultiPoly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) {
        std::vector<std::pair<std::vector<unsigned>, Rational>> terms;
        for (const auto& [e, c] : b) {
            std::vector<unsigned> ev(p.vars().size());
            for (std::size_t i = 0; i < p.vars().size(); ++i) ev[i] = e[i];
            terms.emplace_back(std::move(ev), c);
        }
        out.push_back(MultiPoly::build(p.vars(), terms));
    }
    return out;
}

MultiPoly substitute(const MultiPoly& p, const std::string& var, const MultiPoly& replacement) {
    if (std::find(p.vars().begin(), p.vars().end(), var) == p.vars().end())
        throw PolyError("substitute: variable " + var + " not in universe");
    auto coeffs = coefficients_in(p, var);
    // Horner evaluation at the replacement polynomial.
    MultiPoly acc = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * replacement + coeffs[k];
    return acc.compact();
}

MultiPoly substitute_rational(const MultiPoly& p, const std::string& var, const MultiPoly& num,
                              const MultiPoly& den) {
    if (den.is_zero()) throw PolyError("substitute_rational: zero denominator");
    auto coeffs = coefficients_in(p, var);
    std::size_t deg = coeffs.size() - 1;
    // sum_k coeff_k * num^k * den^(deg-k)
    MultiPoly acc;
    for (std::size_t k = 0; k <= deg; ++k)
        acc = acc + coeffs[k] * poly_pow(num, static_cast<unsigned>(k)) *
                        poly_pow(den, static_cast<unsigned>(deg - k));
    return acc.compact();
}

MultiPoly derivative(const MultiPoly& p, const std::string& var) {
    auto it = std::find(p.vars().begin(), p.vars().end(), var);
    if (it == p.vars().end()) return MultiPoly::build(p.vars(), {});
    std::size_t pos = static_cast<std::size_t>(it - p.vars().begin());
    MultiPoly::TermMap map;
    for (const auto& [e, c] : p.terms()) {
        if (e[pos] == 0) continue;
        Exponents ne = e;
        ne[pos] = static_cast<std::uint16_t>(ne[pos] - 1);
        map.emplace(ne, rat(e[pos]) * c);
    }
    std::vector<std::pair<std::vector<unsigned>, Rational>> terms;
    for (const auto& [e, c] : map) {
        std::vector<unsigned> ev(p.vars().size());
        for (std::size_t i = 0; i < p.vars().size(); ++i) ev[i] = e[i];
        terms.emplace_back(std::move(ev), c);
    }
    return MultiPoly::build(p.vars(), terms);
}

namespace {
bool exponents_divisible(const Exponents& num, const Exponents& den) {
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (num[i] < den[i]) return false;
    return true;
}
}  // namespace

std::optional<MultiPoly> divide_exact(const MultiPoly& dividend, const MultiPoly& divisor) {
    if (divisor.is_zero()) throw PolyError("divide_exact: zero divisor");
    auto [num, den] = aligned(dividend, divisor);
    if (num.is_zero()) return MultiPoly::build(num.vars(), {});

    // Fast path: constant divisor.
    if (den.is_constant()) {
        Rational inv = 1 / den.constant_value();
        return inv * num;
    }

    const auto& dterms = den.terms();
    const Exponents dlead = dterms.begin()->first;
    const Rational& dlc = dterms.begin()->second;

    MultiPoly::TermMap rem = num.terms();
    MultiPoly::TermMap quo;
    while (!rem.empty()) {
        const Exponents rlead = rem.begin()->first;
        if (!exponents_divisible(rlead, dlead)) return std::nullopt;
        Exponents qe{};
        for (std::size_t i = 0; i < kMaxVars; ++i)
            qe[i] = static_cast<std::uint16_t>(rlead[i] - dlead[i]);
        Rational qc = rem.begin()->second / dlc;
        quo.emplace(qe, qc);
        // rem -= (qc * v^qe) * divisor
        for (const auto& [e, c] : dterms) {
            Exponents te{};
            for (std::size_t i = 0; i < kMaxVars; ++i)
                te[i] = static_cast<std::uint16_t>(e[i] + qe[i]);
            auto [it, fresh] = rem.emplace(te, -(qc * c));
            if (!fresh) {
                it->second -= qc * c;
                if (it->second == 0) rem.erase(it);
            }
        }
    }
    std::vector<std::pair<std::vector<unsigned>, Rational>> terms;
    for (const auto& [e, c] : quo) {
        std::vector<unsigned> ev(num.vars().size());
        for (std::size_t i = 0; i < num.vars().size(); ++i) ev[i] = e[i];
        terms.emplace_back(std::move(ev), c);
    }
    return MultiPoly::build(num.vars(), terms);
}

MultiPoly poly_determinant(std::vector<std::vector<MultiPoly>> m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw PolyError("poly_determinant: matrix not square");
    if (n == 0) return MultiPoly::constant(1);

    int sign = 1;
    MultiPoly prev = MultiPoly::constant(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k].is_zero()) ++pivot;
        if (pivot == n) return MultiPoly{};  // singular
        if (pivot != k) {
            std::swap(m[pivot], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MultiPoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                auto q = divide_exact(t, prev);
                if (!q) throw PolyError("poly_determinant: Bareiss division failed");
                m[i][j] = std::move(*q);
            }
            m[i][k] = MultiPoly{};
        }
        prev = m[k][k];
    }
    MultiPoly det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
    int dp = p.degree_in(var);
    int dq = q.degree_in(var);
    if (dp == 0 && dq == 0) throw PolyError("resultant: variable " + var + " absent from both inputs");
    if (dp == 0) return poly_pow(p, static_cast<unsigned>(dq));
    if (dq == 0) return poly_pow(q, static_cast<unsigned>(dp));

    auto pc = coefficients_in(p, var);  // pc[k] multiplies var^k
    auto qc = coefficients_in(q, var);
    const std::size_t n = static_cast<std::size_t>(dp + dq);
    std::vector<std::vector<MultiPoly>> m(n, std::vector<MultiPoly>(n, MultiPoly{}));
    // p-block first (dq rows), highest coefficient leading each row.
    for (int r = 0; r < dq; ++r)
        for (int k = 0; k <= dp; ++k) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = pc[static_cast<std::size_t>(dp - k)];
    for (int r = 0; r < dp; ++r)
        for (int k = 0; k <= dq; ++k)
            m[static_cast<std::size_t>(dq + r)][static_cast<std::size_t>(r + k)] = qc[static_cast<std::size_t>(dq - k)];
    return poly_determinant(std::move(m)).compact();
}

Rational evaluate(const MultiPoly& p, const std::map<std::string, Rational>& point) {
    std::vector<Rational> vals(p.vars().size());
    for (std::size_t i = 0; i < p.vars().size(); ++i) {
        auto it = point.find(p.vars()[i]);
        if (it == point.end())
            throw PolyError("evaluate: missing value for variable " + p.vars()[i]);
        vals[i] = it->second;
    }
    Rational sum = 0;
    for (const auto& [e, c] : p.terms()) {
        Rational term = c;
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (e[i] > 0) term *= rat_pow(vals[i], e[i]);
        sum += term;
    }
    return sum;
}

MultiPoly weighted_truncation(const MultiPoly& p, const ExponentWeighting& w,
                              std::optional<long> order) {
    if (p.is_zero()) throw PolyError("weighted_truncation: zero polynomial");
    long minimal = p.weighted_degree_min(w);
    long target = order.value_or(minimal);
    if (target < minimal) throw PolyError("weighted_truncation: order below minimal stratum");

    std::vector<long> wv;
    {
        std::vector<long> tmp(p.vars().size(), 0);
        for (std::size_t i = 0; i < p.vars().size(); ++i) {
            auto it = w.weights.find(p.vars()[i]);
            if (it == w.weights.end())
                throw PolyError("weighted_truncation: missing weight for " + p.vars()[i]);
            tmp[i] = static_cast<long>(it->second);
        }
        wv = std::move(tmp);
    }
    std::vector<std::pair<std::vector<unsigned>, Rational>> keep;
    for (const auto& [e, c] : p.terms()) {
        long d = 0;
        for (std::size_t i = 0; i < wv.size(); ++i) d += wv[i] * e[i];
        if (d == target) {
            std::vector<unsigned> ev(p.vars().size());
            for (std::size_t i = 0; i < p.vars().size(); ++i) ev[i] = e[i];
            keep.emplace_back(std::move(ev), c);
        }
    }
    return MultiPoly::build(p.vars(), keep);
}

MultiPoly primitive_part(const MultiPoly& p, Rational* content) {
    if (p.is_zero()) {
        if (content) *content = rat(1);
        return p;
    }
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& [e, c] : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational c(num_gcd, den_lcm);
    c.canonicalize();
    if (p.leading_coefficient() < 0) c = -c;
    if (content) *content = c;
    return (1 / c) * p;
}

PolyStructure structure(const MultiPoly& p) {
    PolyStructure s;
    s.term_count = p.term_count();
    s.total_degree = p.total_degree();
    for (const auto& v : p.vars()) s.degree_by_var[v] = p.degree_in(v);
    return s;
}

// ---------------------------------------------------------------------------
// Text form

std::string to_string(const MultiPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        Rational coef = c;
        if (first) {
            if (coef < 0) {
                out << "-";
                coef = -coef;
            }
        } else {
            out << (coef < 0 ? " - " : " + ");
            if (coef < 0) coef = -coef;
        }
        first = false;

        bool any_var = false;
        for (std::size_t i = 0; i < p.vars().size(); ++i)
            if (e[i] > 0) any_var = true;

        if (!any_var || coef != 1) out << coef.get_str();
        bool need_star = !any_var ? false : (coef != 1);
        for (std::size_t i = 0; i < p.vars().size(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) out << "*";
            out << p.vars()[i];
            if (e[i] > 1) out << "^" << e[i];
            need_star = true;
        }
    }
    return out.str();
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    std::string parse_integer() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw PolyError("parse_poly: expected integer at offset " + std::to_string(i));
        return s.substr(start, i - start);
    }

    std::string parse_name() {
        skip_ws();
        std::size_t start = i;
        if (i < s.size() &&
            (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
            ++i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
        }
        if (i == start) throw PolyError("parse_poly: expected variable at offset " + std::to_string(i));
        return s.substr(start, i - start);
    }

    // coefficient [* var[^exp]]* ; at least one of coefficient / variable.
    MultiPoly parse_monomial() {
        Rational coef = rat(1);
        bool saw_number = false;
        skip_ws();
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            std::string numtext = parse_integer();
            if (accept('/')) numtext += "/" + parse_integer();
            coef = rat_from_string(numtext);
            saw_number = true;
        }
        std::map<std::string, unsigned> exps;
        bool saw_var = false;
        for (;;) {
            skip_ws();
            bool explicit_star = false;
            std::size_t save = i;
            if (peek() == '*') {
                accept('*');
                explicit_star = true;
            }
            skip_ws();
            if (i < s.size() &&
                (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
                std::string name = parse_name();
                unsigned exp = 1;
                if (accept('^')) exp = static_cast<unsigned>(std::stoul(parse_integer()));
                exps[name] += exp;
                saw_var = true;
            } else {
                if (explicit_star) i = save;  // the '*' belonged to nothing
                break;
            }
        }
        if (!saw_number && !saw_var) throw PolyError("parse_poly: empty monomial");
        std::vector<std::string> vars;
        std::vector<unsigned> ev;
        for (const auto& [name, exp] : exps) {
            vars.push_back(name);
            ev.push_back(exp);
        }
        return coef * MultiPoly::build(vars, {{ev, rat(1)}});
    }

    MultiPoly parse_sum() {
        MultiPoly acc;
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        for (;;) {
            MultiPoly mono = parse_monomial();
            acc = negate ? acc - mono : acc + mono;
            if (accept('+')) negate = false;
            else if (accept('-')) negate = true;
            else break;
        }
        return acc;
    }
};

}  // namespace

MultiPoly parse_poly(const std::string& text) {
    Parser parser(text);
    if (parser.eof()) throw PolyError("parse_poly: empty input");
    MultiPoly p = parser.parse_sum();
    if (!parser.eof()) throw PolyError("parse_poly: trailing junk at offset " + std::to_string(parser.i));
    return p;
}

}  // namespace cyclicquad

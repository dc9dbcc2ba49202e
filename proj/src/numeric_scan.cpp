#include "cyclicquad/numeric_scan.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "cyclicquad/identity_suite.hpp"
#include "cyclicquad/rng.hpp"

namespace cyclicquad::scan {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Forward-mode duals (value + gradient in up to 4 directions)

struct Dual {
    double v = 0;
    std::array<double, 4> g{};

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: implicit by design
    static Dual var(double value, int dir) {
        Dual d(value);
        d.g[static_cast<std::size_t>(dir)] = 1.0;
        return d;
    }
};

Dual operator+(const Dual& a, const Dual& b) {
    Dual r(a.v + b.v);
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] + b.g[i];
    return r;
}
Dual operator-(const Dual& a, const Dual& b) {
    Dual r(a.v - b.v);
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] - b.g[i];
    return r;
}
Dual operator-(const Dual& a) {
    Dual r(-a.v);
    for (int i = 0; i < 4; ++i) r.g[i] = -a.g[i];
    return r;
}
Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    return r;
}
Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.v / b.v);
    for (int i = 0; i < 4; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) / b.v;
    return r;
}
Dual sqrt(const Dual& a) {
    Dual r(std::sqrt(a.v));
    double inv = 0.5 / r.v;
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] * inv;
    return r;
}

inline double sqrt(double a) { return std::sqrt(a); }

// ---------------------------------------------------------------------------
// Closed forms for F and its derivatives through the cosine laws

template <class T>
struct Evals {
    T F, Fx, Fy, Fz, Fu, Ft, Fzz;
};

template <class T>
Evals<T> eval_all(T x, T y, T z, T u, T t) {
    T two(2.0);
    T a = sqrt(x * x + y * y - two * x * y * t);
    T b = sqrt(u * u + y * y + two * u * y * t);
    T c = sqrt(u * u + z * z - two * u * z * t);
    T d = sqrt(x * x + z * z + two * x * z * t);
    T p = x + u, q = y + z;

    T ax = (x - y * t) / a, ay = (y - x * t) / a;
    T by = (y + u * t) / b, bu = (u + y * t) / b;
    T cz = (z - u * t) / c, cu = (u - z * t) / c;
    T dx = (x + z * t) / d, dz = (z + x * t) / d;
    T at = -(x * y) / a, bt = (u * y) / b, ct = -(u * z) / c, dt = (x * z) / d;
    T czz = (c * c - (z - u * t) * (z - u * t)) / (c * c * c);
    T dzz = (d * d - (z + x * t) * (z + x * t)) / (d * d * d);

    Evals<T> e;
    e.F = (a * b + c * d) * p - (a * d + b * c) * q;
    e.Fx = (ax * b + c * dx) * p + (a * b + c * d) - (ax * d + a * dx) * q;
    e.Fy = (ay * b + a * by) * p - (ay * d + by * c) * q - (a * d + b * c);
    e.Fz = (cz * d + c * dz) * p - (a * dz + b * cz) * q - (a * d + b * c);
    e.Fu = (a * bu + cu * d) * p + (a * b + c * d) - (bu * c + b * cu) * q;
    e.Ft = (at * b + a * bt + ct * d + c * dt) * p - (at * d + a * dt + bt * c + b * ct) * q;
    e.Fzz = (czz * d + two * cz * dz + c * dzz) * p - (a * dzz + b * czz) * q -
            two * (a * dz + b * cz);
    return e;
}

double chart_scale(double x, double y, double z, double u) { return (x + y + z + u) / 4.0; }

// ---------------------------------------------------------------------------
// tiny dense solver for the damped Gauss-Newton step

bool solve4(double A[4][4], double b[4], double out[4]) {
    int idx[4] = {0, 1, 2, 3};
    for (int k = 0; k < 4; ++k) {
        int pivot = k;
        for (int i = k + 1; i < 4; ++i)
            if (std::fabs(A[idx[i]][k]) > std::fabs(A[idx[pivot]][k])) pivot = i;
        std::swap(idx[k], idx[pivot]);
        double akk = A[idx[k]][k];
        if (akk == 0 || !std::isfinite(akk)) return false;
        for (int i = k + 1; i < 4; ++i) {
            double f = A[idx[i]][k] / akk;
            for (int j = k; j < 4; ++j) A[idx[i]][j] -= f * A[idx[k]][j];
            b[idx[i]] -= f * b[idx[k]];
        }
    }
    for (int k = 3; k >= 0; --k) {
        double s = b[idx[k]];
        for (int j = k + 1; j < 4; ++j) s -= A[idx[k]][j] * out[j];
        out[k] = s / A[idx[k]][k];
        if (!std::isfinite(out[k])) return false;
    }
    return true;
}

}  // namespace

double F_of_z(double x, double y, double u, double t, double z) {
    if (!(x > 0 && y > 0 && u > 0 && z > 0) || !(t > -1 && t < 1))
        throw GeomError("F_of_z: arguments outside the chart domain");
    return eval_all<double>(x, y, z, u, t).F;
}

FDerivatives F_derivatives(double x, double y, double z, double u, double t) {
    auto e = eval_all<double>(x, y, z, u, t);
    return {e.F, e.Fx, e.Fy, e.Fz, e.Fu, e.Ft, e.Fzz};
}

RootProfile root_profile(double x, double y, double u, double t, double z_max, int n_grid) {
    if (n_grid < 2) throw GeomError("root_profile: grid too small");
    RootProfile out;
    double z_lo = z_max / n_grid * 1e-3;
    double f_prev = F_of_z(x, y, u, t, z_lo);
    double z_prev = z_lo;
    for (int i = 1; i <= n_grid; ++i) {
        double zi = z_max * i / n_grid;
        double fi = F_of_z(x, y, u, t, zi);
        if (fi == 0.0) {
            out.roots.push_back(zi);
        } else if (f_prev != 0.0 && std::signbit(fi) != std::signbit(f_prev)) {
            double lo = z_prev, hi = zi, flo = f_prev;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = F_of_z(x, y, u, t, mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-14 * hi) break;
            }
            out.roots.push_back(0.5 * (lo + hi));
        }
        f_prev = fi;
        z_prev = zi;
    }
    out.truncated = out.roots.empty() && f_prev > 0;
    return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo theorem scan

namespace {

constexpr long kChunk = 4096;

struct ChunkResult {
    long checked = 0;
    long violations_total = 0;
    std::vector<Witness> witnesses;
    double min_c2_norm = 1e300;
    double cyclic_max_abs_c2 = 0;
    double cyclic_max_abs_c3 = 0;
    double cyclic_max_abs_cycl = 0;
    double min_other_factor = 1e300;
    double max_embed_mismatch = 0;
};

DiagParams sample_params(Rng& rng, const Bounds& b) {
    return DiagParams{rng.log_uniform(b.len_lo, b.len_hi), rng.log_uniform(b.len_lo, b.len_hi),
                      rng.log_uniform(b.len_lo, b.len_hi), rng.log_uniform(b.len_lo, b.len_hi),
                      rng.uniform(b.t_lo, b.t_hi)};
}

ChunkResult run_theorem_chunk(const ScanConfig& cfg, long chunk_index, long count) {
    Rng rng(splitmix64(cfg.seed + 0x517cc1b727220a95ull * static_cast<std::uint64_t>(chunk_index + 1)));
    ChunkResult res;
    for (long i = 0; i < count; ++i) {
        DiagParams dp = sample_params(rng, cfg.bounds);
        bool cyclic_slice = (i % 4 == 3);
        if (cyclic_slice) dp.z = dp.x * dp.u / dp.y;
        QuadLengths ql = lengths_from_params(dp);
        double s = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
        double c2n = c2(ql) / (s * s);
        double c3n = c3(ql) / (s * s * s);
        double cycln = (dp.x * dp.u - dp.y * dp.z) / (s * s);
        ++res.checked;

        auto report = [&](const char* kind, double value) {
            ++res.violations_total;
            res.witnesses.push_back({kind, dp, value});
        };

        // Ptolemy inequality
        res.min_c2_norm = std::min(res.min_c2_norm, c2n);
        if (c2n < -cfg.base_tol) report("ptolemy", c2n);

        if (cyclic_slice) {
            res.cyclic_max_abs_c2 = std::max(res.cyclic_max_abs_c2, std::fabs(c2n));
            res.cyclic_max_abs_c3 = std::max(res.cyclic_max_abs_c3, std::fabs(c3n));
            res.cyclic_max_abs_cycl = std::max(res.cyclic_max_abs_cycl, std::fabs(cycln));
            if (std::fabs(c2n) > cfg.base_tol) report("cyclic-slice-c2", c2n);
            if (std::fabs(c3n) > 30 * cfg.base_tol) report("cyclic-slice-c3", c3n);
            // of the three factors of the rationalized product, only the
            // first may vanish
            double f2 = (ql.a * ql.c + ql.p * ql.q - ql.b * ql.d) / (s * s);
            double f3 = (ql.b * ql.d + ql.p * ql.q - ql.a * ql.c) / (s * s);
            res.min_other_factor = std::min({res.min_other_factor, f2, f3});
            if (f2 < 1e-7 || f3 < 1e-7) report("degenerate-factor", std::min(f2, f3));
        } else if (std::fabs(cycln) > cfg.sign_band) {
            // sign rule: sign C3 = sign(xu - yz), and the Cartesian oracle
            // puts D inside the circle exactly when both are positive
            if ((c3n > 0) != (cycln > 0) || std::fabs(c3n) < cfg.base_tol)
                report("sign-c3", c3n);
            auto e = embed(dp);
            DPosition pos = circumcircle_side(e[0], e[1], e[2], e[3]);
            DPosition expect = cycln > 0 ? DPosition::inside : DPosition::outside;
            if (pos != expect) report("sign-oracle", cycln);
        }

        // embedding distances against the cosine laws
        auto e = embed(dp);
        auto dist = [](Point p1, Point p2) { return std::hypot(p1.x - p2.x, p1.y - p2.y); };
        double mismatch =
            std::max({std::fabs(dist(e[0], e[1]) - ql.a), std::fabs(dist(e[1], e[2]) - ql.b),
                      std::fabs(dist(e[2], e[3]) - ql.c), std::fabs(dist(e[3], e[0]) - ql.d),
                      std::fabs(dist(e[0], e[2]) - ql.p), std::fabs(dist(e[1], e[3]) - ql.q)}) /
            s;
        res.max_embed_mismatch = std::max(res.max_embed_mismatch, mismatch);
        if (mismatch > 1e-12) report("embed-mismatch", mismatch);
    }
    return res;
}

template <class Fn>
void parallel_indexed(int threads, long jobs, Fn&& fn) {
    int hw = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    hw = static_cast<int>(std::min<long>(hw, jobs));
    if (hw <= 1) {
        for (long j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    for (int w = 0; w < hw; ++w)
        pool.emplace_back([&] {
            for (;;) {
                long j = next.fetch_add(1);
                if (j >= jobs) return;
                fn(j);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace

ScanReport theorem_scan(const ScanConfig& cfg) {
    long chunks = (cfg.samples + kChunk - 1) / kChunk;
    std::vector<ChunkResult> results(static_cast<std::size_t>(std::max<long>(chunks, 0)));
    parallel_indexed(cfg.threads, chunks, [&](long j) {
        long count = std::min(kChunk, cfg.samples - j * kChunk);
        results[static_cast<std::size_t>(j)] = run_theorem_chunk(cfg, j, count);
    });

    ScanReport rep;
    rep.what = "theorems";
    rep.seed = cfg.seed;
    rep.samples = cfg.samples;
    ChunkResult total;
    for (const auto& r : results) {
        total.checked += r.checked;
        total.violations_total += r.violations_total;
        for (const auto& w : r.witnesses)
            if (static_cast<int>(rep.violations.size()) < cfg.witness_limit)
                rep.violations.push_back(w);
        total.min_c2_norm = std::min(total.min_c2_norm, r.min_c2_norm);
        total.cyclic_max_abs_c2 = std::max(total.cyclic_max_abs_c2, r.cyclic_max_abs_c2);
        total.cyclic_max_abs_c3 = std::max(total.cyclic_max_abs_c3, r.cyclic_max_abs_c3);
        total.cyclic_max_abs_cycl = std::max(total.cyclic_max_abs_cycl, r.cyclic_max_abs_cycl);
        total.min_other_factor = std::min(total.min_other_factor, r.min_other_factor);
        total.max_embed_mismatch = std::max(total.max_embed_mismatch, r.max_embed_mismatch);
    }
    rep.checked = total.checked;
    rep.stats["violations_total"] = static_cast<double>(total.violations_total);
    rep.stats["min_c2_norm"] = total.min_c2_norm;
    rep.stats["cyclic_max_abs_c2"] = total.cyclic_max_abs_c2;
    rep.stats["cyclic_max_abs_c3"] = total.cyclic_max_abs_c3;
    rep.stats["cyclic_max_abs_cycl"] = total.cyclic_max_abs_cycl;
    rep.stats["cyclic_min_other_factor"] = total.min_other_factor;
    rep.stats["max_embed_mismatch"] = total.max_embed_mismatch;
    return rep;
}

// ---------------------------------------------------------------------------
// grid + Gauss-Newton scans of the critical-point systems

namespace {

struct SystemSpec {
    int n_residuals;  // 3 for (F, F_z, F_zz), 4 for (F, F_x, F_y, F_z)
    bool zz_system;
};

struct GridScanState {
    double floor = 1e300;
    DiagParams argmin{};
    long interior_roots = 0;
    long boundary_exits = 0;
    long refined = 0;
    std::vector<Witness> witnesses;
};

constexpr double kInteriorLo = 0.02, kInteriorHi = 50.0, kInteriorT = 0.995;

bool interior(double x, double y, double z, double t) {
    auto in = [](double v) { return v >= kInteriorLo && v <= kInteriorHi; };
    return in(x) && in(y) && in(z) && std::fabs(t) <= kInteriorT;
}

// residual vector, scale-normalized; returns squared norm
double residual(const SystemSpec& spec, double x, double y, double z, double t, double r[4]) {
    auto e = eval_all<double>(x, y, z, 1.0, t);
    double s = chart_scale(x, y, z, 1.0);
    double s2 = s * s, s3 = s2 * s;
    if (spec.zz_system) {
        r[0] = e.F / s3;
        r[1] = e.Fz / s2;
        r[2] = e.Fzz / s;
        r[3] = 0;
    } else {
        r[0] = e.F / s3;
        r[1] = e.Fx / s2;
        r[2] = e.Fy / s2;
        r[3] = e.Fz / s2;
    }
    double phi = 0;
    for (int i = 0; i < spec.n_residuals; ++i) phi += r[i] * r[i];
    return phi;
}

void jacobian(const SystemSpec& spec, double x, double y, double z, double t, double J[4][4]) {
    auto e = eval_all<Dual>(Dual::var(x, 0), Dual::var(y, 1), Dual::var(z, 2), Dual(1.0),
                            Dual::var(t, 3));
    double s = chart_scale(x, y, z, 1.0);
    double s2 = s * s, s3 = s2 * s;
    const Dual* rows3[3] = {&e.F, &e.Fz, &e.Fzz};
    const Dual* rows4[4] = {&e.F, &e.Fx, &e.Fy, &e.Fz};
    double scales3[3] = {s3, s2, s};
    double scales4[4] = {s3, s2, s2, s2};
    // the scale is frozen within a step; its own gradient is omitted
    for (int i = 0; i < spec.n_residuals; ++i) {
        const Dual* row = spec.zz_system ? rows3[i] : rows4[i];
        double sc = spec.zz_system ? scales3[i] : scales4[i];
        for (int j = 0; j < 4; ++j) J[i][j] = row->g[static_cast<std::size_t>(j)] / sc;
    }
}

// Damped Gauss-Newton from one start; returns the refined point and its
// squared residual, or nothing when the iterate leaves the sanity box.
std::optional<std::pair<DiagParams, double>> refine(const SystemSpec& spec, const ScanConfig& cfg,
                                                    double x, double y, double z, double t) {
    double r[4];
    double phi = residual(spec, x, y, z, t, r);
    for (int iter = 0; iter < cfg.newton_iters; ++iter) {
        if (!(x > 1e-8 && x < 1e8 && y > 1e-8 && y < 1e8 && z > 1e-8 && z < 1e8 &&
              std::fabs(t) < 1 - 1e-12))
            return std::nullopt;
        double J[4][4];
        jacobian(spec, x, y, z, t, J);
        // normal equations with Tikhonov damping
        double A[4][4] = {}, g[4] = {};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int k = 0; k < spec.n_residuals; ++k) s += J[k][i] * J[k][j];
                A[i][j] = s;
            }
        double damping = 1e-12 * (1.0 + A[0][0] + A[1][1] + A[2][2] + A[3][3]);
        for (int i = 0; i < 4; ++i) A[i][i] += damping;
        for (int i = 0; i < 4; ++i) {
            double s = 0;
            for (int k = 0; k < spec.n_residuals; ++k) s += J[k][i] * r[k];
            g[i] = -s;
        }
        double step[4];
        if (!solve4(A, g, step)) return std::nullopt;

        bool accepted = false;
        double scale = 1.0;
        for (int half = 0; half < 10; ++half, scale *= 0.5) {
            double nx = x + scale * step[0], ny = y + scale * step[1];
            double nz = z + scale * step[2], nt = t + scale * step[3];
            if (!(nx > 1e-8 && ny > 1e-8 && nz > 1e-8 && std::fabs(nt) < 1 - 1e-12)) continue;
            double nr[4];
            double nphi = residual(spec, nx, ny, nz, nt, nr);
            if (nphi < phi) {
                x = nx; y = ny; z = nz; t = nt;
                phi = nphi;
                std::copy(nr, nr + 4, r);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // stalled: local minimum of the residual
        if (phi < 1e-30) break;
        double step_norm = std::fabs(step[0]) + std::fabs(step[1]) + std::fabs(step[2]) +
                           std::fabs(step[3]);
        if (step_norm * scale < 1e-14 * (1 + x + y + z)) break;
    }
    return std::make_pair(DiagParams{x, y, z, 1.0, t}, phi);
}

ScanReport grid_system_scan(const ScanConfig& cfg, const SystemSpec& spec, const char* what) {
    const int n = std::max(cfg.grid, 2);
    std::vector<double> len_nodes(static_cast<std::size_t>(n)), t_nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double f = (i + 0.5) / n;
        len_nodes[static_cast<std::size_t>(i)] =
            cfg.bounds.len_lo * std::pow(cfg.bounds.len_hi / cfg.bounds.len_lo, f);
        t_nodes[static_cast<std::size_t>(i)] = cfg.bounds.t_lo + (cfg.bounds.t_hi - cfg.bounds.t_lo) * f;
    }

    std::vector<GridScanState> slices(static_cast<std::size_t>(n));
    parallel_indexed(cfg.threads, n, [&](long ix) {
        GridScanState st;
        double x = len_nodes[static_cast<std::size_t>(ix)];
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz)
                for (int it = 0; it < n; ++it) {
                    double y = len_nodes[static_cast<std::size_t>(iy)];
                    double z = len_nodes[static_cast<std::size_t>(iz)];
                    double t = t_nodes[static_cast<std::size_t>(it)];
                    auto refined = refine(spec, cfg, x, y, z, t);
                    ++st.refined;
                    if (!refined) {
                        ++st.boundary_exits;
                        continue;
                    }
                    const auto& [pt, phi] = *refined;
                    if (!interior(pt.x, pt.y, pt.z, pt.t)) {
                        ++st.boundary_exits;
                        continue;
                    }
                    double res = std::sqrt(phi);
                    if (res < st.floor) {
                        st.floor = res;
                        st.argmin = pt;
                    }
                    if (res < 1e-10) {
                        ++st.interior_roots;
                        if (st.witnesses.size() < 4)
                            st.witnesses.push_back({"interior-root", pt, res});
                    }
                }
        slices[static_cast<std::size_t>(ix)] = std::move(st);
    });

    ScanReport rep;
    rep.what = what;
    rep.seed = cfg.seed;
    rep.samples = static_cast<long>(n) * n * n * n;
    GridScanState total;
    for (const auto& st : slices) {
        if (st.floor < total.floor) {
            total.floor = st.floor;
            total.argmin = st.argmin;
        }
        total.interior_roots += st.interior_roots;
        total.boundary_exits += st.boundary_exits;
        total.refined += st.refined;
        for (const auto& w : st.witnesses)
            if (static_cast<int>(rep.violations.size()) < cfg.witness_limit)
                rep.violations.push_back(w);
    }
    rep.checked = total.refined;
    rep.argmin = total.argmin;
    rep.stats["residual_floor"] = total.floor;
    rep.stats["interior_roots"] = static_cast<double>(total.interior_roots);
    rep.stats["boundary_exits"] = static_cast<double>(total.boundary_exits);

    if (spec.zz_system) {
        // restriction to the cyclic slice z = x/y (u = 1): F vanishes
        // identically there, so the floor is taken over |F_z|/s^2 alone
        double floor_c = 1e300;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int it = 0; it < n; ++it) {
                    double x = len_nodes[static_cast<std::size_t>(ix)];
                    double y = len_nodes[static_cast<std::size_t>(iy)];
                    double z = x / y;
                    double t = t_nodes[static_cast<std::size_t>(it)];
                    if (!interior(x, y, z, t)) continue;
                    auto e = eval_all<double>(x, y, z, 1.0, t);
                    double s = chart_scale(x, y, z, 1.0);
                    floor_c = std::min(floor_c, std::fabs(e.Fz) / (s * s));
                }
        rep.stats["cyclic_slice_floor"] = floor_c;
    } else {
        // parallelogram slice x = u = 1, y = z
        double floor_p = 1e300;
        for (int iy = 0; iy < n; ++iy)
            for (int it = 0; it < n; ++it) {
                double y = len_nodes[static_cast<std::size_t>(iy)];
                double t = t_nodes[static_cast<std::size_t>(it)];
                if (!interior(1.0, y, y, t)) continue;
                double r[4];
                floor_p = std::min(floor_p, std::sqrt(residual(spec, 1.0, y, y, t, r)));
            }
        rep.stats["parallelogram_slice_floor"] = floor_p;
    }
    return rep;
}

}  // namespace

ScanReport scan_system_51(const ScanConfig& cfg) {
    return grid_system_scan(cfg, SystemSpec{3, true}, "sys51");
}

ScanReport scan_system_34(const ScanConfig& cfg) {
    return grid_system_scan(cfg, SystemSpec{4, false}, "sys34");
}

// ---------------------------------------------------------------------------
// exact reconstruction of the folding coefficients

namespace {

// coefficients of the polynomial of degree < n interpolating vals on nodes
std::vector<Rational> coeffs_from_values(const std::vector<Rational>& nodes,
                                         const std::vector<Rational>& vals) {
    std::size_t n = nodes.size();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        Rational pw = 1;
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = pw;
            pw *= nodes[i];
        }
        m[i][n] = vals[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k] == 0) ++pivot;
        if (pivot == n) throw std::runtime_error("coeffs_from_values: singular system");
        std::swap(m[k], m[pivot]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0) continue;
            Rational f = m[i][k] / m[k][k];
            for (std::size_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = m[i][n] / m[i][i];
    return out;
}

struct FoldingPoint {
    Rational x, y, z, u;
};

// value of F*abcd (roots linearized at t = 1 - tau) at a rational point
Rational folding_F_value(const FoldingPoint& pt, const Rational& tau) {
    const Rational &x = pt.x, &y = pt.y, &z = pt.z, &u = pt.u;
    Rational a0 = y - x, b0 = u + y, c0 = u - z, d0 = z + x;
    Rational A = a0 * a0 + x * y * tau;
    Rational B = b0 * b0 - u * y * tau;
    Rational C = c0 * c0 + u * z * tau;
    Rational D = d0 * d0 - z * x * tau;
    Rational p = x + u, q = y + z;
    return (p * (A * B * c0 * d0 + C * D * a0 * b0) - q * (A * D * b0 * c0 + B * C * a0 * d0)) *
           (A * B * C * D);
}

// value of F_z*(a b c^2 d^2) (same linearization) scaled by (a0 b0)^2 (c0 d0)^3
Rational folding_Fz_value(const FoldingPoint& pt, const Rational& tau) {
    const Rational &x = pt.x, &y = pt.y, &z = pt.z, &u = pt.u;
    Rational a0 = y - x, b0 = u + y, c0 = u - z, d0 = z + x;
    Rational A = a0 * a0 + x * y * tau;
    Rational B = b0 * b0 - u * y * tau;
    Rational C = c0 * c0 + u * z * tau;
    Rational D = d0 * d0 - z * x * tau;
    Rational p = x + u, q = y + z;
    Rational t = 1 - tau;
    Rational zut = z - u * t, zxt = z + x * t;
    Rational H = p * zut * A * B * D * D * a0 * b0 * c0 * c0 +
                 p * zxt * A * B * C * C * a0 * b0 * d0 * d0 -
                 q * zxt * A * A * B * C * b0 * c0 * d0 * d0 -
                 q * zut * A * B * B * D * a0 * c0 * c0 * d0 - A * A * B * C * D * D * b0 * c0 -
                 A * B * B * C * C * D * a0 * d0;
    return H * C * D;
}

// tau^1 coefficient of a rational function of tau known to be polynomial of
// degree <= deg on integer tau nodes 0..deg
Rational tau1_coefficient(const std::function<Rational(const Rational&)>& f, int deg) {
    std::vector<Rational> nodes, vals;
    for (int j = 0; j <= deg; ++j) {
        nodes.push_back(rat(j));
        vals.push_back(f(rat(j)));
    }
    auto coeffs = coeffs_from_values(nodes, vals);
    if (coeffs[0] != 0) throw std::runtime_error("tau1_coefficient: order-0 term nonzero");
    return coeffs[1];
}

// tensor-grid interpolation of a trivariate polynomial of per-variable
// degree < nodes.size(), then rehomogenized with u to total degree `deg`
MultiPoly interpolate_trivariate(const std::vector<long>& xs, const std::vector<long>& ys,
                                 const std::vector<long>& zs,
                                 const std::function<Rational(long, long, long)>& value,
                                 unsigned deg) {
    std::size_t nx = xs.size(), ny = ys.size(), nz = zs.size();
    auto rnodes = [](const std::vector<long>& v) {
        std::vector<Rational> out;
        for (long n : v) out.push_back(rat(n));
        return out;
    };
    std::vector<Rational> xn = rnodes(xs), yn = rnodes(ys), zn = rnodes(zs);

    // values -> x-coefficients -> y-coefficients -> z-coefficients
    std::vector<std::vector<std::vector<Rational>>> c(
        nx, std::vector<std::vector<Rational>>(ny, std::vector<Rational>(nz)));
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t k = 0; k < nz; ++k) {
            std::vector<Rational> vals(nx);
            for (std::size_t i = 0; i < nx; ++i) vals[i] = value(xs[i], ys[j], zs[k]);
            auto cf = coeffs_from_values(xn, vals);
            for (std::size_t i = 0; i < nx; ++i) c[i][j][k] = cf[i];
        }
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t k = 0; k < nz; ++k) {
            std::vector<Rational> vals(ny);
            for (std::size_t j = 0; j < ny; ++j) vals[j] = c[i][j][k];
            auto cf = coeffs_from_values(yn, vals);
            for (std::size_t j = 0; j < ny; ++j) c[i][j][k] = cf[j];
        }
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            std::vector<Rational> vals(nz);
            for (std::size_t k = 0; k < nz; ++k) vals[k] = c[i][j][k];
            auto cf = coeffs_from_values(zn, vals);
            for (std::size_t k = 0; k < nz; ++k) c[i][j][k] = cf[k];
        }

    std::vector<std::pair<std::vector<unsigned>, Rational>> terms;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                if (c[i][j][k] == 0) continue;
                unsigned total = static_cast<unsigned>(i + j + k);
                if (total > deg)
                    throw std::runtime_error("interpolate_trivariate: degree bound violated");
                terms.push_back({{static_cast<unsigned>(i), static_cast<unsigned>(j),
                                  static_cast<unsigned>(k), deg - total},
                                 c[i][j][k]});
            }
    return MultiPoly::build({"x", "y", "z", "u"}, terms);
}

}  // namespace

MultiPoly reconstruct_P3() {
    // F*abcd = -tau * q * p * (xu - yz) * P3 + O(tau^2); divide pointwise and
    // interpolate P3 on a tensor grid (u = 1, rehomogenized afterwards).
    auto value = [](long xi, long yi, long zi) -> Rational {
        FoldingPoint pt{rat(xi), rat(yi), rat(zi), rat(1)};
        Rational g1 = tau1_coefficient(
            [&](const Rational& tau) { return folding_F_value(pt, tau); }, 6);
        Rational a0 = pt.y - pt.x, b0 = pt.u + pt.y, c0 = pt.u - pt.z, d0 = pt.z + pt.x;
        Rational scale2 = a0 * b0 * c0 * d0;
        scale2 *= scale2;
        Rational divisor = -(pt.y + pt.z) * (pt.x + pt.u) * (pt.x * pt.u - pt.y * pt.z) * scale2;
        return g1 / divisor;
    };
    MultiPoly p3 = interpolate_trivariate({11, 13, 17, 19}, {2, 3, 5, 7}, {2, 3, 4, 5}, value, 3);
    // out-of-grid consistency point with u != 1
    FoldingPoint pt{rat(3), rat(4), rat(7), rat(5)};
    Rational g1 = tau1_coefficient([&](const Rational& tau) { return folding_F_value(pt, tau); }, 6);
    Rational a0 = pt.y - pt.x, b0 = pt.u + pt.y, c0 = pt.u - pt.z, d0 = pt.z + pt.x;
    Rational scale2 = a0 * b0 * c0 * d0;
    scale2 *= scale2;
    Rational expect = g1 / (-(pt.y + pt.z) * (pt.x + pt.u) * (pt.x * pt.u - pt.y * pt.z) * scale2);
    Rational got = evaluate(p3, {{"x", pt.x}, {"y", pt.y}, {"z", pt.z}, {"u", pt.u}});
    if (got != expect) throw std::runtime_error("reconstruct_P3: homogeneity check failed");
    return p3;
}

MultiPoly reconstruct_P7() {
    // F_z*(a b c^2 d^2) = -tau*(x+u)*P7 + O(tau^2), scaled by (a0 b0)^2 (c0 d0)^3
    auto value = [](long xi, long yi, long zi) -> Rational {
        FoldingPoint pt{rat(xi), rat(yi), rat(zi), rat(1)};
        Rational h1 = tau1_coefficient(
            [&](const Rational& tau) { return folding_Fz_value(pt, tau); }, 8);
        Rational a0 = pt.y - pt.x, b0 = pt.u + pt.y, c0 = pt.u - pt.z, d0 = pt.z + pt.x;
        Rational scale = a0 * b0 * a0 * b0;
        Rational c0d0 = c0 * d0;
        scale *= c0d0 * c0d0 * c0d0;
        return h1 / (-(pt.x + pt.u) * scale);
    };
    MultiPoly p7 = interpolate_trivariate({11, 13, 17, 19, 23, 29, 31, 37},
                                          {2, 3, 4, 5, 6, 7, 8, 9},
                                          {2, 3, 4, 5, 6, 7, 8, 9}, value, 7);
    FoldingPoint pt{rat(3), rat(4), rat(7), rat(5)};
    Rational h1 = tau1_coefficient([&](const Rational& tau) { return folding_Fz_value(pt, tau); }, 8);
    Rational a0 = pt.y - pt.x, b0 = pt.u + pt.y, c0 = pt.u - pt.z, d0 = pt.z + pt.x;
    Rational scale = a0 * b0 * a0 * b0;
    Rational c0d0 = c0 * d0;
    scale *= c0d0 * c0d0 * c0d0;
    Rational expect = h1 / (-(pt.x + pt.u) * scale);
    Rational got = evaluate(p7, {{"x", pt.x}, {"y", pt.y}, {"z", pt.z}, {"u", pt.u}});
    if (got != expect) throw std::runtime_error("reconstruct_P7: homogeneity check failed");
    return p7;
}

// ---------------------------------------------------------------------------
// series checks

namespace {

double richardson_order(const std::vector<std::pair<double, double>>& trace, double limit) {
    // average log2 ratio of successive deviations along eps -> eps/2
    double acc = 0;
    int n = 0;
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        double e0 = std::fabs(trace[i].second - limit);
        double e1 = std::fabs(trace[i + 1].second - limit);
        if (e0 > 0 && e1 > 0 && e1 < e0) {
            acc += std::log2(e0 / e1);
            ++n;
        }
    }
    return n ? acc / n : 0.0;
}

SeriesCheckResult ratio_path(const std::string& id, const std::string& path,
                             const std::string& claimed,
                             const std::function<double(double)>& ratio, int depth,
                             double eps0, double slack, double order_expected) {
    SeriesCheckResult out;
    out.case_id = id;
    out.path = path;
    out.claimed = claimed;
    double eps = eps0;
    for (int k = 0; k < depth; ++k, eps *= 0.5) out.trace.emplace_back(eps, ratio(eps));
    out.limit_error = std::fabs(out.trace.back().second - 1.0);
    out.measured_order = richardson_order(out.trace, 1.0);
    out.pass = out.limit_error < slack &&
               (order_expected <= 0 || out.measured_order > 0.5 * order_expected);
    return out;
}

// exact rational evaluation of the shared degree-6 cofactor polynomial
double eval_T(const Rational& x, const Rational& y, const Rational& z, const Rational& u,
              const Rational& t) {
    static const MultiPoly& T = identities::cofactor_T();
    return to_double(evaluate(T, {{"x", x}, {"y", y}, {"z", z}, {"u", u}, {"t", t}}));
}

double eval_Tz(const Rational& x, const Rational& y, const Rational& z, const Rational& u,
               const Rational& t) {
    static const MultiPoly Tz = derivative(identities::cofactor_T(), "z");
    return to_double(evaluate(Tz, {{"x", x}, {"y", y}, {"z", z}, {"u", u}, {"t", t}}));
}

Rational approx_rat(double v, long denom = 1000000) {
    return rat(std::lround(v * static_cast<double>(denom)), denom);
}

}  // namespace

const std::vector<std::string>& series_check_cases() {
    static const std::vector<std::string> cases = {
        "fold-P3",        "fold-P7",        "trapezoid-T",  "trapezoid-Tz",
        "triangle1-rows", "triangle1-sstar", "triangle2-rows", "triangle2-sstar",
        "triangle2-pinch", "collapse-xu",   "collapse-zy",  "tail-z",
        "explore-xzt",    "explore-uzt",
    };
    return cases;
}

SeriesCheckResult series_check(const std::string& case_id, std::uint64_t seed) {
    Rng rng(splitmix64(seed ^ 0xabcd1234u));
    // fixed generic chamber point (y > x, u > z) for the folding paths
    double X = 0.7 + 0.2 * rng.u01(), Y = 1.5 + 0.3 * rng.u01();
    double Z = 0.6 + 0.2 * rng.u01(), U = 1.8 + 0.4 * rng.u01();

    if (case_id == "fold-P3") {
        MultiPoly p3 = reconstruct_P3();
        if (p3 != identities::healed_P3())
            throw std::runtime_error("fold-P3: interpolation disagrees with the symbolic route");
        auto ratio = [&](double eps) {
            double t = 1 - eps;
            auto ql = lengths_from_params({X, Y, Z, U, t});
            double F = c3(ql);
            double abcd = ql.a * ql.b * ql.c * ql.d;
            double p3v = to_double(evaluate(
                p3, {{"x", approx_rat(X)}, {"y", approx_rat(Y)}, {"z", approx_rat(Z)}, {"u", approx_rat(U)}}));
            double claimed = -eps * (Y + Z) * (X + U) * (X * U - Y * Z) * p3v;
            return F * abcd / claimed;
        };
        return ratio_path("fold-P3", "t = 1 - eps at a fixed chamber point",
                          "F*abcd ~ -tau*q*p*(xu-yz)*P3", ratio, 18, 1e-2, 1e-3, 1.0);
    }
    if (case_id == "fold-P7") {
        MultiPoly p7 = reconstruct_P7();
        if (p7 != identities::healed_P7())
            throw std::runtime_error("fold-P7: interpolation disagrees with the symbolic route");
        auto ratio = [&](double eps) {
            double t = 1 - eps;
            auto ql = lengths_from_params({X, Y, Z, U, t});
            auto e = eval_all<double>(X, Y, Z, U, t);
            double w = ql.a * ql.b * ql.c * ql.c * ql.d * ql.d;
            double p7v = to_double(evaluate(
                p7, {{"x", approx_rat(X)}, {"y", approx_rat(Y)}, {"z", approx_rat(Z)}, {"u", approx_rat(U)}}));
            return e.Fz * w / (-eps * (X + U) * p7v);
        };
        return ratio_path("fold-P7", "t = 1 - eps at a fixed chamber point",
                          "F_z*(a*b*c^2*d^2) ~ -tau*(x+u)*P7", ratio, 18, 1e-2, 1e-3, 1.0);
    }
    if (case_id == "trapezoid-T") {
        Rational x = approx_rat(X), u = approx_rat(U);
        Rational sig = rat(7, 5), nu = rat(3, 4);  // s = sig*eps, v = nu*eps
        auto ratio = [&](double eps) {
            Rational e = approx_rat(eps, 1 << 28);
            Rational s = sig * e, v = nu * e, tau = e * e * e;
            double tv = eval_T(x, x + v, u - s, u, 1 - tau);
            double xu = to_double(x + u);
            double claimed = 4 * xu * xu * to_double((s - v) * (s + v) * (s * x + v * u));
            return tv / claimed;
        };
        return ratio_path("trapezoid-T", "y = x + v*eps, z = u - s*eps, tau = eps^3",
                          "T ~ 4(x+u)^2(s-v)(s+v)(sx+vu)", ratio, 14, 1e-2, 1e-3, 1.0);
    }
    if (case_id == "trapezoid-Tz") {
        Rational x = approx_rat(X);
        Rational sig = rat(7, 5), nu = rat(3, 4), om = rat(1, 3);  // w = om*eps
        auto ratio = [&](double eps) {
            Rational e = approx_rat(eps, 1 << 28);
            Rational s = sig * e, v = nu * e, w = om * e, tau = e * e * e;
            Rational u = x - w;
            double tz = eval_Tz(x, x + v, u - s, u, 1 - tau);
            double claimed = to_double(rat(-16) * x * x * x * (rat(3) * s - v) * (s + v));
            return tz / claimed;
        };
        return ratio_path("trapezoid-Tz", "y = x+v*eps, u = x-w*eps, z = u-s*eps, tau = eps^3",
                          "T_z ~ -16 x^3 (3s-v)(s+v)", ratio, 14, 1e-2, 1e-3, 1.0);
    }
    if (case_id == "triangle1-rows" || case_id == "triangle1-sstar") {
        // x,y -> 0 with z,u,t fixed; rows of the degeneration table
        double z = 1.3, u = 1.0, t = 0.35;
        double c0 = std::sqrt(u * u + z * z - 2 * u * z * t);
        double alpha = c0 * (u * t + z), beta = -c0 * (u + z * t), gamma = u * u - z * z;
        double at = z * (z * z - u * u * t * t + c0 * c0);
        double bt = -z * ((z - u * t) * (u + t * z) + c0 * c0 * t);
        double gt = -2 * z * z * c0;
        if (case_id == "triangle1-rows") {
            double sbar = 0.8;
            auto ratio = [&](double eps) {
                double x = sbar * eps, y = eps;
                auto ev = eval_all<double>(x, y, z, u, t);
                double a = std::sqrt(x * x + y * y - 2 * x * y * t);
                double f_lin = x * alpha + y * beta + a * gamma;
                double fz_lin = (x * at + y * bt + a * gt) / (z * c0);
                return 0.5 * (ev.F / f_lin + ev.Fz / fz_lin);
            };
            return ratio_path("triangle1-rows", "x = 0.8 eps, y = eps; z,u,t fixed",
                              "F ~ x*alpha + y*beta + a*gamma and the F_z row", ratio, 16, 1e-2,
                              1e-3, 1.0);
        }
        double sstar = (z / u) * (3 * u * u + z * z) / (3 * z * z + u * u);
        auto ratio = [&](double eps) {
            double x = sstar * eps, y = eps;
            // at x/y = s*, the two truncated rows are proportional
            return ((x * alpha + y * beta) * gt) / ((x * at + y * bt) * gamma);
        };
        return ratio_path("triangle1-sstar", "x = s* eps, y = eps",
                          "(x*alpha+y*beta)/gamma == (x*at+y*bt)/gt along the path", ratio, 16,
                          1e-2, 1e-9, 0.0);
    }
    if (case_id == "triangle2-rows" || case_id == "triangle2-sstar") {
        // x,z -> 0 with y,u,t fixed
        double y = 1.4, u = 1.0, t = 0.25;
        double b0 = std::sqrt(u * u + y * y + 2 * u * y * t);
        double alpha = b0 * (y - u * t), beta = -b0 * (u - y * t), gamma = u * u - y * y;
        double at = u * t * (u * u - y * y), bt = u * (u * u - y * y), gt = b0 * u * (t * y - u);
        if (case_id == "triangle2-rows") {
            double sbar = 0.6;
            auto ratio = [&](double eps) {
                double x = sbar * eps, z = eps;
                auto ev = eval_all<double>(x, y, z, u, t);
                double d = std::sqrt(x * x + z * z + 2 * x * z * t);
                double f_lin = x * alpha + z * beta + d * gamma;
                // the printed F_z row carries the u*d normalization
                double fz_lin = (x * at + z * bt + d * gt) / (u * d);
                return 0.5 * (ev.F / f_lin + ev.Fz / fz_lin);
            };
            return ratio_path("triangle2-rows", "x = 0.6 eps, z = eps; y,u,t fixed",
                              "F ~ x*alpha + z*beta + d*gamma and the F_z row", ratio, 16, 1e-2,
                              1e-3, 1.0);
        }
        double sstar = (y / u) * (3 * u * u - 2 * t * u * y - y * y) / (y * y - 2 * t * u * y + u * u);
        auto ratio = [&](double eps) {
            double x = sstar * eps, z = eps;
            return ((x * alpha + z * beta) * gt) / ((x * at + z * bt) * gamma);
        };
        return ratio_path("triangle2-sstar", "x = s* eps, z = eps",
                          "(x*alpha+z*beta)/gamma == (x*at+z*bt)/gt along the path", ratio, 16,
                          1e-2, 1e-9, 0.0);
    }
    if (case_id == "triangle2-pinch") {
        // branch y^2 + 2ty - 3 = 0 (y > 1): F = z((1-b) + bty - y^2) + o(z)
        double t = 0.3;
        double y = -t + std::sqrt(t * t + 3);
        double u = 1.0;
        double b = std::sqrt(u * u + y * y + 2 * u * y * t);  // -> 2 on the branch
        double coef = (1 - b) + b * t * y - y * y;
        SeriesCheckResult out;
        auto ratio = [&](double eps) {
            double z = eps, x = eps * eps;
            auto ev = eval_all<double>(x, y, z, u, t);
            return ev.F / (z * coef);
        };
        out = ratio_path("triangle2-pinch", "z = eps, x = eps^2 on the branch y^2+2ty-3 = 0",
                         "F ~ z((1-b)+bty-y^2), negative limit coefficient", ratio, 16, 1e-2,
                         1e-3, 1.0);
        out.pass = out.pass && coef < 0;
        return out;
    }
    if (case_id == "collapse-xu" || case_id == "collapse-zy") {
        bool xu = case_id == "collapse-xu";
        double Yf = 1.2, Zf = 0.9;
        auto ratio = [&](double eps) {
            double t = 1 - eps;  // degeneration also covers the (..t) variants
            auto e = xu ? eval_all<double>(eps, Yf, Zf, eps, t)
                        : eval_all<double>(Yf, eps, eps, Zf, t);
            double lim = xu ? -2 * Yf * Zf * (Yf + Zf) : 2 * Yf * Zf * (Yf + Zf);
            return e.F / lim;
        };
        return ratio_path(case_id,
                          xu ? "x = u = eps, t = 1 - eps" : "y = z = eps, t = 1 - eps",
                          xu ? "F -> -2yz(y+z)" : "F -> 2xu(x+u)", ratio, 16, 1e-2, 1e-3, 1.0);
    }
    if (case_id == "tail-z") {
        double x = 0.8, y = 1.1, u = 1.7, t = -0.2;
        auto ql0 = lengths_from_params({x, y, 1.0, u, t});
        double coef = ql0.p - ql0.a - ql0.b;  // a, b, p do not depend on z
        auto ratio = [&](double eps) {
            double z = 1.0 / eps;
            return F_of_z(x, y, u, t, z) / (coef * z * z);
        };
        return ratio_path("tail-z", "z = 1/eps", "F ~ (p - a - b) z^2", ratio, 16, 1e-1, 1e-2,
                          1.0);
    }
    if (case_id == "explore-xzt" || case_id == "explore-uzt") {
        SeriesCheckResult out;
        out.case_id = case_id;
        out.exploratory = true;
        out.path = case_id == "explore-xzt" ? "x = eps, z = 0.7 eps, t = 1 - eps^2"
                                            : "u = eps, z = 0.7 eps, t = 1 - eps^2";
        out.claimed = "none (no published claim to check)";
        double eps = 1e-1;
        for (int k = 0; k < 10; ++k, eps *= 0.5) {
            auto e = case_id == "explore-xzt"
                         ? eval_all<double>(eps, 1.2, 0.7 * eps, 1.5, 1 - eps * eps)
                         : eval_all<double>(1.5, 1.2, 0.7 * eps, eps, 1 - eps * eps);
            out.trace.emplace_back(eps, e.F);
        }
        out.pass = true;
        return out;
    }
    throw std::invalid_argument("series_check: unknown case " + case_id);
}

// ---------------------------------------------------------------------------
// counterexample family

namespace {

// positive root of 4 X^2 + (3 + 2y + 3y^2) X + y (1+y)^2 = 0, X = x^2
double family_x(double y) {
    double bq = 3 + 2 * y + 3 * y * y;
    double cq = y * (1 + y) * (1 + y);
    double disc = bq * bq - 16 * cq;
    double X = (-bq + std::sqrt(disc)) / 8.0;
    return std::sqrt(X);
}

QuadLengths family_lengths(double y, double x) {
    // A(-x,0), B(0,-1), C(x,0), D(0,y): both B and D below the diagonal AC
    Point A{-x, 0}, B{0, -1}, C{x, 0}, D{0, y};
    auto dist = [](Point p1, Point p2) { return std::hypot(p1.x - p2.x, p1.y - p2.y); };
    return QuadLengths{dist(A, B), dist(B, C), dist(C, D), dist(D, A), dist(A, C), dist(B, D)};
}

}  // namespace

AppendixResult appendix_family(int resolution) {
    if (resolution < 2) resolution = 2;
    AppendixResult out;
    out.extremal_y = -1.0 / 3.0;
    out.extremal_x_closed = std::sqrt(2.0 * std::sqrt(3.0) - 3.0) / 3.0;

    double best_x = 0, best_y = 0;
    for (int i = 0; i < resolution; ++i) {
        double y = -1.0 + (i + 0.5) / resolution;  // inside (-1, 0)
        double x = family_x(y);
        QuadLengths ql = family_lengths(y, x);
        double s = (ql.a + ql.b + ql.c + ql.d + ql.p + ql.q) / 6.0;
        out.family.push_back({y, x, c3(ql) / (s * s * s)});
        if (x > best_x) {
            best_x = x;
            best_y = y;
        }
    }
    // golden-section polish of max x(y) around the best grid point
    {
        double lo = std::max(-0.999, best_y - 1.0 / resolution);
        double hi = std::min(-0.001, best_y + 1.0 / resolution);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
        double f1 = family_x(m1), f2 = family_x(m2);
        for (int it = 0; it < 200; ++it) {
            if (f1 < f2) {
                lo = m1;
                m1 = m2;
                f1 = f2;
                m2 = lo + gr * (hi - lo);
                f2 = family_x(m2);
            } else {
                hi = m2;
                m2 = m1;
                f2 = f1;
                m1 = hi - gr * (hi - lo);
                f1 = family_x(m1);
            }
            if (hi - lo < 1e-12) break;
        }
        out.extremal_x_scan = family_x(0.5 * (lo + hi));
    }
    out.lengths = family_lengths(out.extremal_y, out.extremal_x_closed);
    out.report = classify(out.lengths, 1e-6);
    return out;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

json params_to_json(const DiagParams& dp) {
    return json{{"x", dp.x}, {"y", dp.y}, {"z", dp.z}, {"u", dp.u}, {"t", dp.t}};
}

DiagParams params_from_json(const json& j) {
    return DiagParams{j.at("x"), j.at("y"), j.at("z"), j.at("u"), j.at("t")};
}

}  // namespace

std::string ScanReport::to_json(int indent) const {
    json j;
    j["what"] = what;
    j["seed"] = seed;
    j["samples"] = samples;
    j["checked"] = checked;
    json viol = json::array();
    for (const auto& w : violations)
        viol.push_back(json{{"kind", w.kind}, {"params", params_to_json(w.params)}, {"value", w.value}});
    j["violations"] = viol;
    j["stats"] = stats;
    if (argmin) j["argmin"] = params_to_json(*argmin);
    return j.dump(indent);
}

ScanReport ScanReport::from_json(const std::string& text) {
    json j = json::parse(text);
    ScanReport rep;
    rep.what = j.at("what");
    rep.seed = j.at("seed");
    rep.samples = j.at("samples");
    rep.checked = j.at("checked");
    for (const auto& item : j.at("violations"))
        rep.violations.push_back({item.at("kind"), params_from_json(item.at("params")), item.at("value")});
    for (auto it = j.at("stats").begin(); it != j.at("stats").end(); ++it)
        rep.stats[it.key()] = it.value();
    if (j.contains("argmin")) rep.argmin = params_from_json(j.at("argmin"));
    return rep;
}

std::string AppendixResult::to_json(int indent) const {
    json j;
    j["extremal"] = {{"y", extremal_y},
                     {"x_closed_form", extremal_x_closed},
                     {"x_scan", extremal_x_scan}};
    j["lengths"] = {{"a", lengths.a}, {"b", lengths.b}, {"c", lengths.c},
                    {"d", lengths.d}, {"p", lengths.p}, {"q", lengths.q}};
    j["classification"] = {{"feasible", report.feasible},
                           {"convex", report.convex},
                           {"cyclic", report.cyclic},
                           {"c3_norm", report.c3_norm},
                           {"c2_norm", report.c2_norm}};
    json fam = json::array();
    for (const auto& s : family) fam.push_back(json{{"y", s.y}, {"x", s.x}, {"c3_norm", s.c3_norm}});
    j["family"] = fam;
    return j.dump(indent);
}

}  // namespace cyclicquad::scan

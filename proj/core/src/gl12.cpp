#include "sovlab/gl12.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sovlab/sov_basis.hpp"

namespace sovlab {

namespace {

double rel(cplx lhs, cplx rhs) { return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}); }

void require_gl12(const ChainParams& p) {
    if (!(p.sig == GradingSignature(1, 2))) throw argument_error("gl(1|2) chain required");
}

long pow3(int n) { return ipow(3, n); }

// Points at distance ≥ 0.1|η| from every ξ_a + kη, |k| ≤ window.
std::vector<cplx> random_points(const ChainParams& p, int count, std::uint64_t seed, int window) {
    std::mt19937_64 gen(seed);
    double radius = 1.0;
    for (const auto& x : p.xi) radius = std::max(radius, std::abs(x));
    std::uniform_real_distribution<double> u(-radius, radius);
    const double gap = 0.1 * std::abs(p.eta);
    std::vector<cplx> pts;
    while (static_cast<int>(pts.size()) < count) {
        const cplx z(u(gen), u(gen));
        bool ok = true;
        for (const auto& x : p.xi)
            for (int k = -window; k <= window; ++k)
                if (std::abs(z - x - double(k) * p.eta) < gap) ok = false;
        for (const auto& q : pts)
            if (std::abs(z - q) < gap) ok = false;
        if (ok) pts.push_back(z);
    }
    return pts;
}

}  // namespace

Gl12Twist gl12_twist(const ChainParams& p) {
    require_gl12(p);
    const Vec& e = p.twist.eigenvalues;
    return {e(0), e(1), e(2)};
}

bool is_khat(const ChainParams& p, double tol) {
    const auto k = gl12_twist(p);
    return std::abs(k.k1) <= tol * std::max({1.0, std::abs(k.k2), std::abs(k.k3)});
}

ScalarTower::ScalarTower(const ChainParams& p, std::vector<cplx> x) : p_(p), x_(std::move(x)) {
    if (static_cast<int>(x_.size()) != p_.sites) throw argument_error("need one value per inhomogeneity");
    hinf_ = asymptotic_constants(p_.twist, 12, TowerKind::column);
    einf_ = asymptotic_constants(p_.twist, 12, TowerKind::row);
}

cplx ScalarTower::t1(cplx lambda) const { return eigenvalue_interpolation(p_, x_, lambda); }

cplx ScalarTower::column(int n, cplx lambda) { return interpolate(n, lambda, TowerKind::column); }
cplx ScalarTower::row(int n, cplx lambda) { return interpolate(n, lambda, TowerKind::row); }

cplx ScalarTower::interpolate(int n, cplx lambda, TowerKind kind) {
    if (n < 0) return 0.0;
    if (n == 0) return 1.0;
    if (n == 1) return t1(lambda);
    if (n >= static_cast<int>(hinf_.size())) throw argument_error("fusion level out of supported range");
    const auto key = std::make_tuple(kind == TowerKind::column ? 0 : 1, n, lambda.real(), lambda.imag());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const double dir = kind == TowerKind::column ? 1.0 : -1.0;
    cplx pref = 1;
    for (int r = 1; r <= n - 1; ++r) pref *= d_fn(p_, lambda + dir * double(r) * p_.eta);
    cplx acc = (kind == TowerKind::column ? hinf_[n] : einf_[n]) * d_fn(p_, lambda);
    for (int a = 0; a < p_.sites; ++a)
        acc += interpolation_coefficient(p_, a, n, lambda, kind) * interpolate(n - 1, p_.xi[a] + dir * p_.eta, kind) * x_[a];
    acc *= pref;
    memo_.emplace(key, acc);
    return acc;
}

cplx ScalarTower::rect(int a, int b, cplx lambda) {
    if (a == 0 && b == 0) throw argument_error("t^(0)_0 is not defined");
    if (a < 0 || b < 0) return 0.0;
    if (a == 0 || b == 0) return 1.0;
    if (!in_extended_fat_hook(p_.sig, a, b)) return 0.0;
    if (a == 1) return column(b, lambda);
    if (b == 1) return row(a, lambda);
    Mat m(a, a);
    for (int i = 1; i <= a; ++i)
        for (int j = 1; j <= a; ++j) m(i - 1, j - 1) = column(b + i - j, lambda - double(i - 1) * p_.eta);
    return m.determinant();
}

cplx t1_poly(const ChainParams& p, const std::vector<cplx>& x, cplx lambda) {
    return eigenvalue_interpolation(p, x, lambda);
}

cplx scalar_tower(const ChainParams& p, const std::vector<cplx>& x, int n, cplx lambda, TowerKind kind) {
    ScalarTower t(p, x);
    return kind == TowerKind::column ? t.column(n, lambda) : t.row(n, lambda);
}

std::vector<cplx> sample_points(const ChainParams& p, int extra, std::uint64_t seed) {
    std::vector<cplx> s = p.xi;
    const auto more = random_points(p, extra, seed, 3);
    s.insert(s.end(), more.begin(), more.end());
    return s;
}

namespace {

struct ClosureTerms {
    cplx lhs, rhs;
};

ClosureTerms closure_terms(const ChainParams& p, const Gl12Twist& k, ScalarTower& t, cplx z) {
    const cplx t3 = t.column(3, z);
    const cplx lhs = k.k3 * k.k2 * d_fn(p, z) * t3;
    const cplx rhs = k.k1 * (t.column(2, z) * t.column(2, z + p.eta) - t3 * t.t1(z + p.eta));
    return {lhs, rhs};
}

}  // namespace

double closure_residual(const ChainParams& p, const std::vector<cplx>& x, const std::vector<cplx>& samples) {
    const auto k = gl12_twist(p);
    ScalarTower t(p, x);
    double worst = 0.0;
    for (const auto& z : samples) {
        const auto c = closure_terms(p, k, t, z);
        worst = std::max(worst, rel(c.lhs, c.rhs));
    }
    return worst;
}

double null_outboundary_residual(const ChainParams& p, const std::vector<cplx>& x, const std::vector<cplx>& samples) {
    require_gl12(p);
    ScalarTower t(p, x);
    double worst = 0.0;
    for (const auto& z : samples) {
        const cplx a = t.column(3, z) * t.column(3, z - p.eta);
        const cplx b = t.column(2, z) * t.column(4, z - p.eta);
        worst = std::max(worst, rel(a, b));
    }
    return worst;
}

const char* to_string(SpectrumMethod m) {
    switch (m) {
        case SpectrumMethod::diag: return "diag";
        case SpectrumMethod::newton: return "newton";
        case SpectrumMethod::cubic: return "cubic";
        case SpectrumMethod::homotopy: return "homotopy";
    }
    return "?";
}

SpectrumMethod spectrum_method_from_string(const std::string& s) {
    if (s == "diag") return SpectrumMethod::diag;
    if (s == "newton") return SpectrumMethod::newton;
    if (s == "cubic") return SpectrumMethod::cubic;
    if (s == "homotopy") return SpectrumMethod::homotopy;
    throw argument_error("unknown spectrum method '" + s + "'");
}

PolySystem closure_system(const ChainParams& p, const std::vector<cplx>& points) {
    const auto k = gl12_twist(p);
    if (static_cast<int>(points.size()) != p.sites) throw argument_error("closure system needs N points");
    PolySystem sys;
    sys.n = p.sites;
    sys.degrees.assign(p.sites, std::abs(k.k1) > 0.0 ? 4 : 3);
    sys.f = [p, k, points](const Vec& xv) {
        ScalarTower t(p, std::vector<cplx>(xv.data(), xv.data() + xv.size()));
        Vec out(p.sites);
        for (int j = 0; j < p.sites; ++j) {
            const auto c = closure_terms(p, k, t, points[j]);
            out(j) = c.lhs - c.rhs;
        }
        return out;
    };
    return sys;
}

PolySystem cubic_system(const ChainParams& p) {
    const auto k = gl12_twist(p);
    if (!is_khat(p)) throw argument_error("cubic system requires k1 = 0");
    PolySystem sys;
    sys.n = p.sites;
    sys.degrees.assign(p.sites, 3);
    sys.f = [p, k](const Vec& xv) {
        const std::vector<cplx> x(xv.data(), xv.data() + xv.size());
        std::vector<cplx> t1_shift(p.sites);
        for (int r = 0; r < p.sites; ++r) t1_shift[r] = eigenvalue_interpolation(p, x, p.xi[r] + p.eta);
        Vec out(p.sites);
        for (int a = 0; a < p.sites; ++a) {
            const cplx z = p.xi[a] + p.eta;
            cplx bracket = k.k2 * k.k3 * d_fn(p, z);
            for (int r = 0; r < p.sites; ++r)
                bracket += interpolation_coefficient(p, r, 2, z, TowerKind::column) * t1_shift[r] * x[r];
            out(a) = x[a] * bracket;
        }
        return out;
    };
    return sys;
}

namespace {

std::vector<std::vector<cplx>> diag_solutions(const ChainParams& p) {
    const auto probe = random_points(p, 1, 0xD1A6, 1).front();
    return joint_diagonalize(p, probe).x;
}

double x_scale_estimate(const ChainParams& p) {
    double s = 1.0;
    for (int a = 1; a <= p.sites; ++a) {
        Eigen::JacobiSVD<Mat> svd(transfer_at_inhomogeneity(p, a).data);
        s = std::max(s, svd.singularValues()(0));
    }
    return s;
}

double rel_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

}  // namespace

SpectrumResult solve_spectrum(const ChainParams& p, SpectrumMethod method, const SpectrumOptions& opt) {
    require_gl12(p);
    check_inhomogeneities(p, 6);
    const int n = p.sites;
    const bool khat = is_khat(p);
    SpectrumResult res;
    res.method = method;
    std::vector<std::vector<cplx>> cands;
    switch (method) {
        case SpectrumMethod::diag: {
            cands = diag_solutions(p);
            res.attempts = static_cast<int>(cands.size());
            break;
        }
        case SpectrumMethod::newton:
        case SpectrumMethod::homotopy:
        case SpectrumMethod::cubic: {
            PolySystem sys;
            if (method == SpectrumMethod::cubic) {
                if (!khat) throw argument_error("cubic method requires a k1 = 0 twist");
                sys = cubic_system(p);
            } else {
                res.system_points = random_points(p, n, derive_seed(opt.seed, 0x5157), 3);
                sys = closure_system(p, res.system_points);
            }
            SolveStats st;
            if (method == SpectrumMethod::newton) {
                const int starts = opt.starts > 0 ? opt.starts : int(50 * pow3(n));
                st = newton_multistart(sys, starts, 2.0 * x_scale_estimate(p), opt.seed, opt.cluster_tol);
            } else {
                st = total_degree_homotopy(sys, opt.seed, opt.cluster_tol);
            }
            res.attempts = st.attempts;
            for (const auto& r : st.roots) cands.emplace_back(r.data(), r.data() + r.size());
            break;
        }
    }
    res.candidates = static_cast<int>(cands.size());
    const auto samples = sample_points(p, n);
    std::vector<std::vector<cplx>> diag_cache;
    int cluster = 0;
    for (const auto& x : cands) {
        SpectrumSolution s;
        s.x = x;
        s.cluster = cluster++;
        s.closure = closure_residual(p, x, samples);
        s.null_out = null_outboundary_residual(p, x, samples);
        s.accepted = s.closure < opt.tol && s.null_out < opt.tol;
        double xnorm = 0;
        for (const auto& v : x) xnorm = std::max(xnorm, std::abs(v));
        const bool trivial = xnorm <= 1e-10 * x_scale_estimate(p);
        if (s.accepted && trivial && method != SpectrumMethod::diag) {
            if (!khat) {
                s.accepted = false;
            } else {
                if (diag_cache.empty()) diag_cache = diag_solutions(p);
                bool found = false;
                for (const auto& d : diag_cache)
                    if (rel_dist(x, d) < 1e-7) found = true;
                s.accepted = found;
            }
        }
        res.solutions.push_back(std::move(s));
    }
    std::stable_partition(res.solutions.begin(), res.solutions.end(), [](const SpectrumSolution& s) { return s.accepted; });
    const long accepted = std::count_if(res.solutions.begin(), res.solutions.end(), [](const auto& s) { return s.accepted; });
    res.complete = accepted == pow3(n);
    return res;
}

double match_to_diagonalization(SpectrumResult& r, const std::vector<std::vector<cplx>>& diag) {
    std::vector<bool> used(diag.size(), false);
    double worst = 0.0;
    long accepted = 0;
    for (auto& s : r.solutions) {
        double best = std::numeric_limits<double>::infinity();
        long bi = -1;
        for (std::size_t j = 0; j < diag.size(); ++j) {
            if (s.accepted && used[j]) continue;
            const double dd = rel_dist(s.x, diag[j]);
            if (dd < best) {
                best = dd;
                bi = long(j);
            }
        }
        s.matched = bi;
        s.match_distance = best;
        if (s.accepted) {
            ++accepted;
            if (bi >= 0) used[bi] = true;
            worst = std::max(worst, best);
        }
    }
    if (accepted != static_cast<long>(diag.size())) return std::numeric_limits<double>::infinity();
    return worst;
}

cplx qsc_alpha(const ChainParams& p, cplx alpha_bar, cplx lambda) {
    return -alpha_bar * d_fn(p, lambda - 2.0 * p.eta);
}

double qsc_residual(const ChainParams& p, const std::vector<cplx>& x, const QscData& q, const std::vector<cplx>& probes) {
    ScalarTower t(p, x);
    double worst = 0.0;
    for (const auto& z : probes) {
        const cplx a = qsc_alpha(p, q.alpha_bar, z);
        const cplx b = a * qsc_alpha(p, q.alpha_bar, z + p.eta);
        const cplx u = poly_eval(q.phi, z - p.eta) * t.column(2, z - p.eta);
        const cplx v = a * poly_eval(q.phi, z) * t.t1(z);
        const cplx w = b * poly_eval(q.phi, z + p.eta);
        worst = std::max(worst, std::abs(u + v + w) / std::max({1.0, std::abs(u), std::abs(v), std::abs(w)}));
    }
    return worst;
}

QscData qsc_find(const ChainParams& p, const std::vector<cplx>& x, double tol) {
    const auto k = gl12_twist(p);
    if (!is_khat(p)) throw argument_error("quantum spectral curve construction requires k1 = 0");
    const int n = p.sites;
    const auto probes = random_points(p, 3 * n + 3, 0x95C, 2);
    for (cplx ab : {-k.k2, -k.k3}) {
        for (int m = 0; m <= n; ++m) {
            Mat a(n, m + 1);
            for (int r = 0; r < n; ++r) {
                const cplx z0 = p.xi[r], z1 = p.xi[r] + p.eta;
                const cplx al = qsc_alpha(p, ab, z1);
                for (int c = 0; c <= m; ++c) a(r, c) = x[r] * std::pow(z0, c) + al * std::pow(z1, c);
            }
            Vec v;
            if (m == 0) {
                double scale = 1.0;
                for (int r = 0; r < n; ++r) scale = std::max({scale, std::abs(x[r]), std::abs(a(r, 0) - x[r])});
                if (a.cwiseAbs().maxCoeff() > tol * scale) continue;
                v = Vec::Ones(1);
            } else {
                Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
                const auto& sv = svd.singularValues();
                const double smin = sv.size() == m + 1 ? sv(m) : 0.0;
                if (sv(0) > 0.0 && smin > tol * sv(0)) continue;
                v = svd.matrixV().col(m);
                if (std::abs(v(m)) < 1e-10 * v.norm()) continue;
                v /= v(m);
            }
            QscData q;
            q.alpha_bar = ab;
            q.phi = v;
            q.residual = qsc_residual(p, x, q, probes);
            if (q.residual > tol) continue;
            q.roots = poly_roots(v);
            for (const auto& nu : q.roots)
                for (const auto& xi : p.xi)
                    if (std::abs(nu - xi) < 1e-8) q.roots_off_xi = false;
            ScalarTower t(p, x);
            for (int r = 0; r < n; ++r) {
                const cplx z = p.xi[r];
                q.compat1 = std::max(q.compat1, rel(t.t1(z) * t.t1(z + p.eta), t.column(2, z)));
                const cplx c2 = t.t1(z) * t.column(2, z + p.eta);
                q.compat2 = std::max(q.compat2, std::abs(c2) / std::max(1.0, std::abs(t.t1(z)) * std::abs(t.column(2, z + p.eta))));
            }
            return q;
        }
    }
    throw inconsistency_error("no quantum spectral curve polynomial for these t1 values");
}

Vec qsc_wavefunction(const ChainParams& p, const QscData& q) {
    const int n = p.sites;
    Vec w(pow3(n));
    for (long k = 0; k < w.size(); ++k) {
        cplx v = 1;
        for (int a = 0; a < n; ++a) {
            const int h = digit_of(k, a, 3);
            const cplx z0 = p.xi[a], z1 = p.xi[a] + p.eta;
            v *= std::pow(-qsc_alpha(p, q.alpha_bar, z1) * poly_eval(q.phi, z1), h) * std::pow(poly_eval(q.phi, z0), 2 - h);
        }
        w(k) = v;
    }
    return w;
}

Vec bethe_q1(const BetheSolution& b) { return poly_from_roots(b.lambda); }
Vec bethe_q2(const BetheSolution& b) { return poly_from_roots(b.mu); }

void bethe_residuals(const ChainParams& p, BetheSolution& b) {
    const auto k = gl12_twist(p);
    const Vec q1 = bethe_q1(b), q2 = bethe_q2(b);
    b.bae1 = 0.0;
    b.bae2 = 0.0;
    for (const auto& l : b.lambda)
        b.bae1 = std::max(b.bae1, rel(k.k1 * poly_eval(q2, l) * a_fn(p, l), k.k2 * d_fn(p, l) * poly_eval(q2, l + p.eta)));
    for (const auto& m : b.mu)
        b.bae2 = std::max(b.bae2, rel(k.k2 * poly_eval(q2, m + p.eta) * poly_eval(q1, m - p.eta),
                                      -k.k3 * poly_eval(q2, m - p.eta) * poly_eval(q1, m)));
    std::vector<cplx> all = b.lambda;
    all.insert(all.end(), b.mu.begin(), b.mu.end());
    const double gap = min_pairwise_distance(all);
    b.distinct = gap > 1e-8;
    b.clustered = gap < 1e-6;
}

BetheSolution bethe_extract(const ChainParams& p, const std::vector<cplx>& x, const QscData& q, double zero_tol) {
    if (!is_khat(p)) throw argument_error("Bethe extraction from the spectral curve requires k1 = 0");
    BetheSolution b;
    double scale = 1.0;
    for (const auto& v : x) scale = std::max(scale, std::abs(v));
    std::vector<cplx> shifted;
    for (int a = 0; a < p.sites; ++a) {
        if (std::abs(x[a]) <= zero_tol * scale) shifted.push_back(p.xi[a] + p.eta);
        else b.lambda.push_back(p.xi[a]);
    }
    const auto div = poly_divide(q.phi, poly_from_roots(shifted));
    const double rem = div.remainder.cwiseAbs().maxCoeff() / std::max(1.0, q.phi.cwiseAbs().maxCoeff());
    b.mu = poly_roots(div.quotient);
    bethe_residuals(p, b);
    b.admissible = rem < 1e-8;
    for (const auto& l : b.lambda) {
        bool in_xi = false;
        for (const auto& xi : p.xi)
            if (std::abs(l - xi) < 1e-8) in_xi = true;
        b.admissible = b.admissible && in_xi;
    }
    for (const auto& m : b.mu)
        for (const auto& xi : p.xi)
            if (std::abs(m - xi) < 1e-8 || std::abs(m - xi - p.eta) < 1e-8) b.admissible = false;
    return b;
}

cplx naba_t1(const ChainParams& p, const BetheSolution& b, cplx lambda) {
    const auto k = gl12_twist(p);
    const Vec q1 = bethe_q1(b), q2 = bethe_q2(b);
    const cplx q1l = poly_eval(q1, lambda), q2l = poly_eval(q2, lambda);
    if (std::abs(q1l) < 1e-300 || std::abs(q2l) < 1e-300) throw evaluation_error("Bethe form evaluated at a Bethe root");
    const cplx q1m = poly_eval(q1, lambda - p.eta);
    return k.k1 * a_fn(p, lambda) * q1m / q1l -
           d_fn(p, lambda) * (k.k2 * q1m * poly_eval(q2, lambda + p.eta) / (q1l * q2l) + k.k3 * poly_eval(q2, lambda - p.eta) / q2l);
}

std::vector<BetheSolution> solve_bae_sector11(const ChainParams& p) {
    const auto k = gl12_twist(p);
    if (std::abs(k.k2 - k.k3) < 1e-12) throw parameter_error("sector (1,1) needs k2 != k3");
    const cplx c = k.k2 * p.eta / (k.k2 - k.k3);
    std::vector<cplx> shifted;
    for (const auto& x : p.xi) shifted.push_back(x - p.eta);
    const Vec apoly = poly_from_roots(shifted), dpoly = poly_from_roots(p.xi);
    const Vec eq = -c * k.k1 * apoly - k.k2 * (p.eta - c) * dpoly;
    std::vector<BetheSolution> out;
    for (const auto& l : poly_roots(eq)) {
        BetheSolution b;
        b.lambda = {l};
        b.mu = {l + c};
        bethe_residuals(p, b);
        for (const auto& xi : p.xi)
            if (std::abs(l - xi) < 1e-8 || std::abs(l + c - xi) < 1e-8) b.admissible = false;
        out.push_back(b);
    }
    return out;
}

NabaReport naba_checks(const ChainParams& p, const BetheSolution& b, const std::vector<cplx>& samples) {
    const auto k = gl12_twist(p);
    if (std::abs(k.k1) == 0.0) throw argument_error("the Lambda forms need k1 != 0");
    for (const auto& r : b.lambda)
        for (const auto& xi : p.xi)
            if (std::abs(r - xi) < 1e-10) throw evaluation_error("Bethe root coincides with an inhomogeneity");
    NabaReport rep;
    std::vector<cplx> x;
    for (const auto& xi : p.xi) x.push_back(naba_t1(p, b, xi));
    ScalarTower t(p, x);
    const Vec q1 = bethe_q1(b), q2 = bethe_q2(b);

    // residue numerators and agreement with the interpolation polynomial next to each pole
    for (const auto& l : b.lambda) {
        rep.regularity = std::max(rep.regularity, rel(k.k1 * a_fn(p, l) * poly_eval(q2, l), k.k2 * d_fn(p, l) * poly_eval(q2, l + p.eta)));
        for (double s : {1.0, -1.0}) {
            const cplx z = l + s * 1e-4 * std::abs(p.eta);
            rep.regularity = std::max(rep.regularity, rel(naba_t1(p, b, z), t.t1(z)));
        }
    }
    for (const auto& m : b.mu) {
        rep.regularity = std::max(rep.regularity, rel(k.k2 * poly_eval(q1, m - p.eta) * poly_eval(q2, m + p.eta),
                                                      -k.k3 * poly_eval(q2, m - p.eta) * poly_eval(q1, m)));
        for (double s : {1.0, -1.0}) {
            const cplx z = m + s * 1e-4 * std::abs(p.eta);
            rep.regularity = std::max(rep.regularity, rel(naba_t1(p, b, z), t.t1(z)));
        }
    }
    const cplx big = cplx(1e6, 3.7e5);
    rep.asymptotic = std::abs(naba_t1(p, b, big) / std::pow(big, p.sites) - (k.k1 - k.k2 - k.k3));
    rep.closure = closure_residual(p, x, samples);
    rep.null_out = null_outboundary_residual(p, x, samples);
    auto lambda1 = [&](cplx z) { return k.k1 * a_fn(p, z) * poly_eval(q1, z - p.eta) / poly_eval(q1, z); };
    auto t2_form = [&](cplx z) { return lambda1(z) * (k.k1 * naba_t1(p, b, z + p.eta) + k.k3 * k.k2 * d_fn(p, z)) / k.k1; };
    for (const auto& z : samples) {
        rep.t2_match = std::max(rep.t2_match, rel(t2_form(z), t.column(2, z)));
        rep.t3_match = std::max(rep.t3_match, rel(lambda1(z) * t2_form(z + p.eta), t.column(3, z)));
    }
    return rep;
}

IsospectralityReport gl3_isospectrality_check(const ChainParams& p, const std::vector<cplx>& probes) {
    if (!is_khat(p)) throw argument_error("isospectrality check requires k1 = 0");
    const GradingSignature s3(3, 0);
    const auto q = make_chain(s3, -p.eta, p.xi, validate_twist(-p.twist.matrix, s3));
    TransferTower tp(p), tq(q);
    IsospectralityReport r;
    for (const auto& z : probes) {
        const Vec a1 = eigenvalues_of(transfer(p, z).data), b1 = eigenvalues_of(transfer(q, z).data);
        r.t1_mismatch = std::max(r.t1_mismatch, spectrum_mismatch(a1, b1) / std::max(1.0, a1.cwiseAbs().maxCoeff()));
        const Vec a2 = eigenvalues_of(tp.column(2, z)), b2 = eigenvalues_of(tq.row(2, z));
        r.t2_mismatch = std::max(r.t2_mismatch, spectrum_mismatch(a2, b2) / std::max(1.0, a2.cwiseAbs().maxCoeff()));
    }
    return r;
}

TwoSiteClosedForm two_site_closed_forms(cplx k1, cplx k2, cplx k3, cplx eta, cplx xi2) {
    TwoSiteClosedForm f;
    const cplx str = k1 - k2 - k3;
    auto poly = [&](cplx lin, cplx c0) {
        Vec v(3);
        v << c0, lin - str * xi2, str;
        return v;
    };
    f.pairs.push_back({k1 * eta * (eta + xi2), k1 * eta * (eta - xi2)});
    f.polynomials.push_back(poly(2.0 * eta * k1, k1 * eta * (eta - xi2)));
    for (cplx k : {k2, k3}) {
        f.pairs.push_back({-k * eta * (eta - xi2), -k * eta * (eta + xi2)});
        f.polynomials.push_back(poly(2.0 * eta * k, -k * eta * (eta + xi2)));
    }
    const std::pair<cplx, cplx> mixed[] = {{k1, k2}, {k1, k3}, {k2, k3}};
    for (const auto& [ki, kj] : mixed) {
        const cplx s = std::sqrt(4.0 * ki * kj * eta * eta + (ki - kj) * (ki - kj) * xi2 * xi2);
        for (double sg : {-1.0, 1.0}) {
            f.pairs.push_back({eta / 2.0 * ((ki + kj) * xi2 + sg * s), -eta / 2.0 * ((ki + kj) * xi2 - sg * s)});
            f.polynomials.push_back(poly((ki + kj) * eta, eta / 2.0 * (-(ki + kj) * xi2 + sg * s)));
        }
    }
    return f;
}

}  // namespace sovlab

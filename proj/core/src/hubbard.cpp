#include "sovlab/hubbard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>

#include "sovlab/graded.hpp"
#include "sovlab/poly.hpp"
#include "sovlab/sov_basis.hpp"

namespace sovlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

// Qubit positions inside the 16-dim two-site space (index i_A + 4·i_B, i = 2·s₁ + s₂).
constexpr int kQ1 = 1, kQ2 = 0, kQ3 = 3, kQ4 = 2;

Mat on_qubits(const Mat& op, int pa, int pb) {
    Mat m = Mat::Zero(16, 16);
    for (int src = 0; src < 16; ++src) {
        const int a = (src >> pa) & 1, b = (src >> pb) & 1;
        const int base = src & ~(1 << pa) & ~(1 << pb);
        for (int ta = 0; ta < 2; ++ta)
            for (int tb = 0; tb < 2; ++tb) {
                const cplx v = op(2 * ta + tb, 2 * a + b);
                if (v != cplx(0)) m(base | (ta << pa) | (tb << pb), src) += v;
            }
    }
    return m;
}

Mat on_qubit(const Mat& op, int pos) {
    Mat m = Mat::Zero(16, 16);
    for (int src = 0; src < 16; ++src) {
        const int a = (src >> pos) & 1, base = src & ~(1 << pos);
        for (int t = 0; t < 2; ++t) m(base | (t << pos), src) += op(t, a);
    }
    return m;
}

Mat pauli(char which) {
    Mat s(2, 2);
    if (which == 'z') s << 1, 0, 0, -1;
    else s << 0, -kI, kI, 0;
    return s;
}

Mat sigma_pair(char which, int pa, int pb) { return on_qubit(pauli(which), pa) * on_qubit(pauli(which), pb); }

Mat kron(const Mat& hi, const Mat& lo) { return Eigen::kroneckerProduct(hi, lo).eval(); }

// cosh(h/2) + sinh(h/2) σ^z σ^z on one site pair.
Mat dressing(cplx h, int pa, int pb) {
    return std::cosh(h / 2.0) * Mat::Identity(16, 16) + std::sinh(h / 2.0) * sigma_pair('z', pa, pb);
}

Mat xx_pair(cplx x) {
    return on_qubits(xx_r(x), kQ1, kQ3) * on_qubits(xx_r(x), kQ2, kQ4);
}

Mat partial_transpose(const Mat& m, bool first) {
    Mat out(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) {
            int ra = r % 4, rb = r / 4, ca = c % 4, cb = c / 4;
            if (first) std::swap(ra, ca);
            else std::swap(rb, cb);
            out(ra + 4 * rb, ca + 4 * cb) = m(r, c);
        }
    return out;
}

double fitted_residual(const Mat& x, const Mat& target) {
    Eigen::Index i, j;
    target.cwiseAbs().maxCoeff(&i, &j);
    const cplx c = x(i, j) / target(i, j);
    return max_abs(x - c * target) / std::max(1e-300, max_abs(x));
}

Mat pair_on_chain(const Mat& r16, int sites, int a, int b) { return embed_pair_ungraded(r16, 4, sites, a, b); }

Mat trace_first(const Mat& m) {
    const long n = m.rows() / 4;
    Mat t = Mat::Zero(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            for (int a = 0; a < 4; ++a) t(i, j) += m(a + 4 * i, a + 4 * j);
    return t;
}

Mat twist_on_site(const Mat& k, int sites, int site) {
    const long hi = ipow(4, sites - site - 1), lo = ipow(4, site);
    return kron(Mat::Identity(hi, hi), kron(k, Mat::Identity(lo, lo)));
}

}  // namespace

long HubbardParams::hilbert_dim() const { return ipow(4, sites); }

cplx eta_from_coupling(double u) { return cplx(0.0, -2.0 * u); }

void validate_hubbard(const HubbardParams& p, double tol) {
    if (p.sites < 1) throw parameter_error("need at least one site");
    if (static_cast<int>(p.xi.size()) != p.sites) throw parameter_error("need one inhomogeneity per site");
    if (p.family < 1 || p.family > 4) throw parameter_error("twist family must be 1..4");
    if (std::abs(p.alpha) < tol) throw parameter_error("alpha must be nonzero");
    for (int a = 0; a < p.sites; ++a)
        for (int b = a; b < p.sites; ++b) {
            if (std::abs(std::sin(p.xi[a] + p.xi[b])) < tol)
                throw parameter_error("sin(xi_a + xi_b) vanishes: R-matrix pole");
            if (a != b && std::abs(std::sin(p.xi[a] - p.xi[b])) < tol)
                throw parameter_error("inhomogeneities coincide modulo pi");
        }
}

cplx h_of(cplx lambda, cplx eta, HBranch branch) {
    const cplx h0 = 0.5 * std::asinh(kI * eta / 2.0 * std::sin(2.0 * lambda));
    return branch == HBranch::principal ? h0 : kI * kPi / 2.0 - h0;
}

cplx hubbard_lambda_fn(cplx lambda, cplx eta, HBranch branch) {
    return -kI * std::cos(2.0 * lambda) / std::sin(2.0 * lambda) * std::cosh(2.0 * h_of(lambda, eta, branch));
}

Mat hubbard_twist(int family, cplx alpha, cplx beta, cplx gamma) {
    const cplx d = beta * gamma / alpha;
    Mat k = Mat::Zero(4, 4);
    switch (family) {
        case 1: k.diagonal() << alpha, beta, gamma, d; break;
        case 2: k(0, 0) = alpha; k(1, 2) = beta; k(2, 1) = gamma; k(3, 3) = d; break;
        case 3: k(0, 3) = alpha; k(1, 1) = beta; k(2, 2) = gamma; k(3, 0) = d; break;
        case 4: k(0, 3) = alpha; k(1, 2) = beta; k(2, 1) = gamma; k(3, 0) = d; break;
        default: throw parameter_error("twist family must be 1..4");
    }
    return k;
}

Mat hubbard_twist(const HubbardParams& p) { return hubbard_twist(p.family, p.alpha, p.beta, p.gamma); }

TwistSpectrum hubbard_twist_spectrum(int family, cplx alpha, cplx beta, cplx gamma, double tol) {
    TwistSpectrum s;
    const cplx d = beta * gamma / alpha, r = std::sqrt(beta * gamma);
    switch (family) {
        case 1: s.eigenvalues = {alpha, beta, gamma, d}; break;
        case 2: s.eigenvalues = {alpha, d, r, -r}; break;
        case 3: s.eigenvalues = {beta, gamma, r, -r}; break;
        case 4:
            s.eigenvalues = {r, -r, r, -r};
            s.reason = "degenerate eigenvalues ±sqrt(beta gamma)";
            return s;
        default: throw parameter_error("twist family must be 1..4");
    }
    double scale = 1.0;
    for (const auto& e : s.eigenvalues) scale = std::max(scale, std::abs(e));
    s.simple = min_pairwise_distance(s.eigenvalues) > tol * scale;
    if (!s.simple) s.reason = "repeated twist eigenvalue";
    return s;
}

Mat xx_r(cplx lambda) {
    const cplx c = std::cos(lambda), s = std::sin(lambda);
    Mat r = Mat::Zero(4, 4);
    r(0, 0) = r(3, 3) = c;
    r(1, 1) = r(2, 2) = s;
    r(1, 2) = r(2, 1) = 1.0;
    return r;
}

Mat shastry_r(cplx lambda, cplx mu, cplx eta, HBranch branch) {
    const cplx s_plus = std::sin(lambda + mu);
    const cplx s_minus = std::sin(lambda - mu);
    const cplx hl = h_of(lambda, eta, branch), hm = h_of(mu, eta, branch);
    for (const auto& [h, x] : {std::pair{hl, lambda}, std::pair{hm, mu}}) {
        const cplx want = kI * eta / 2.0 * std::sin(2.0 * x);
        if (std::abs(std::sinh(2.0 * h) - want) > 1e-12 * std::max(1.0, std::abs(want)))
            throw inconsistency_error("h(lambda) violates its defining relation");
    }
    Mat rh = xx_pair(lambda - mu);
    const cplx tanh_sum = std::tanh(hl + hm);
    if (s_minus != cplx(0)) {
        if (std::abs(s_plus) < 1e-12) throw evaluation_error("Shastry R-matrix pole: sin(lambda + mu) = 0");
        const cplx coef = s_minus / s_plus * tanh_sum;
        rh += coef * on_qubits(xx_r(lambda + mu), kQ1, kQ3) * on_qubit(pauli('z'), kQ1) * on_qubits(xx_r(lambda + mu), kQ2, kQ4) *
              on_qubit(pauli('z'), kQ2);
    }
    return dressing(hl, kQ1, kQ2) * dressing(hm, kQ3, kQ4) * rh * dressing(-hl, kQ1, kQ2) * dressing(-hm, kQ3, kQ4);
}

Mat hubbard_lax(cplx lambda, cplx eta, HBranch branch) {
    const cplx h = h_of(lambda, eta, branch);
    return dressing(h, kQ1, kQ2) * xx_pair(lambda) * dressing(h, kQ1, kQ2);
}

Mat swap_ab() {
    Mat p = Mat::Zero(16, 16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) p(b + 4 * a, a + 4 * b) = 1.0;
    return p;
}

ShastryReport shastry_checks(cplx lambda, cplx mu, cplx xi, cplx eta, const HubbardParams& twist, HBranch branch) {
    ShastryReport r;
    const Mat rab = shastry_r(lambda, mu, eta, branch);
    {
        const Mat r12 = pair_on_chain(rab, 3, 0, 1);
        const Mat r13 = pair_on_chain(shastry_r(lambda, xi, eta, branch), 3, 0, 2);
        const Mat r23 = pair_on_chain(shastry_r(mu, xi, eta, branch), 3, 1, 2);
        const Mat lhs = r12 * r13 * r23, rhs = r23 * r13 * r12;
        r.ybe = max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs));
    }
    const Mat p = swap_ab();
    r.regularity = max_abs(shastry_r(lambda, lambda, eta, branch) - p);
    const cplx hl = h_of(lambda, eta, branch);
    r.lax_left = max_abs(shastry_r(lambda, 0.0, eta, branch) - hubbard_lax(lambda, eta, branch) / std::cosh(hl));
    {
        const cplx hb = h_of(-lambda, eta, branch);
        const Mat lt = dressing(hb, kQ3, kQ4) * xx_pair(-lambda) * dressing(hb, kQ3, kQ4);
        r.lax_right = max_abs(shastry_r(0.0, lambda, eta, branch) - lt / std::cosh(hl));
    }
    {
        const Mat rba = p * shastry_r(mu, lambda, eta, branch) * p;
        const cplx th = std::tanh(hl - h_of(mu, eta, branch));
        const cplx cm = std::cos(lambda - mu), cp = std::cos(lambda + mu);
        const cplx c = cm * cm * (cm * cm - cp * cp * th * th);
        r.unitarity = max_abs(rab * rba - c * Mat::Identity(16, 16)) / std::max(1.0, std::abs(c));
    }
    {
        const Mat inv = rab.inverse();
        const Mat ya = sigma_pair('y', kQ1, kQ2), yb = sigma_pair('y', kQ3, kQ4);
        r.crossing_a = fitted_residual(ya * partial_transpose(shastry_r(lambda - kPi / 2.0, mu, eta, branch), true) * ya, inv);
        r.crossing_b = fitted_residual(yb * partial_transpose(shastry_r(lambda, mu + kPi / 2.0, eta, branch), false) * yb, inv);
    }
    for (int a = 1; a <= 4; ++a) {
        const Mat k = hubbard_twist(a, twist.alpha, twist.beta, twist.gamma);
        const Mat ka = kron(Mat::Identity(4, 4), k), kb = kron(k, Mat::Identity(4, 4));
        r.scalar_ybe.push_back(max_abs(rab * ka * kb - kb * ka * rab) / std::max(1.0, max_abs(rab * ka * kb)));
    }
    return r;
}

Mat hubbard_monodromy(const HubbardParams& p, cplx lambda) {
    validate_hubbard(p);
    const int s = p.sites + 1;
    Mat m = twist_on_site(hubbard_twist(p), s, 0);
    for (int n = p.sites; n >= 1; --n) m = m * pair_on_chain(shastry_r(lambda, p.xi[n - 1], p.eta, p.branch), s, 0, n);
    return m;
}

Mat hubbard_transfer(const HubbardParams& p, cplx lambda) { return trace_first(hubbard_monodromy(p, lambda)); }

Mat hubbard_transfer_product(const HubbardParams& p, int n) {
    validate_hubbard(p);
    if (n < 1 || n > p.sites) throw argument_error("site index out of range");
    const int s = p.sites;
    const int a = n - 1;
    const cplx x = p.xi[a];
    Mat m = Mat::Identity(ipow(4, s), ipow(4, s));
    for (int b = a - 1; b >= 0; --b) m = m * pair_on_chain(shastry_r(x, p.xi[b], p.eta, p.branch), s, a, b);
    m = m * twist_on_site(hubbard_twist(p), s, a);
    for (int b = s - 1; b > a; --b) m = m * pair_on_chain(shastry_r(x, p.xi[b], p.eta, p.branch), s, a, b);
    return m;
}

RowVec hubbard_source(const HubbardParams& p, const std::vector<cplx>& xyzw) {
    if (xyzw.size() != 4) throw argument_error("source needs (x, y, z, w)");
    const auto spec = hubbard_twist_spectrum(p.family, p.alpha, p.beta, p.gamma);
    if (p.family == 4) throw parameter_error(std::string("twist family 4 rejected: ") + spec.reason);
    Mat w = Mat::Identity(4, 4);
    if (p.family != 1) {
        Eigen::ComplexEigenSolver<Mat> es(hubbard_twist(p));
        w = es.eigenvectors();
    }
    RowVec site(4);
    site << xyzw[0], xyzw[1], xyzw[2], xyzw[3];
    site = site * w.inverse();
    RowVec full = site;
    for (int a = 1; a < p.sites; ++a) full = Eigen::kroneckerProduct(site, full).eval();
    return full;
}

HubbardSovCertificate hubbard_sov_rank(const HubbardParams& p, const std::vector<cplx>& xyzw) {
    validate_hubbard(p);
    if (p.hilbert_dim() > kMaxHubbardDim) throw capacity_error("Hubbard SoV certificate limited to 4^N <= 256");
    const auto spec = hubbard_twist_spectrum(p.family, p.alpha, p.beta, p.gamma);
    if (!spec.simple) throw parameter_error(std::string("twist rejected: ") + spec.reason);
    HubbardSovCertificate c;
    c.source = hubbard_source(p, xyzw);
    std::vector<Mat> t_xi;
    for (int n = 1; n <= p.sites; ++n) t_xi.push_back(hubbard_transfer(p, p.xi[n - 1]));
    c.b = sov_rows(c.source, t_xi, 4);
    Eigen::BDCSVD<Mat> svd(c.b);
    const auto& sv = svd.singularValues();
    c.sigma_max = sv(0);
    c.sigma_min = sv(sv.size() - 1);
    c.is_basis = c.sigma_max > 0.0 && c.sigma_min > kRankTolerance * c.sigma_max;

    cplx probe(0.37, 0.11);
    for (const auto& x : p.xi)
        if (std::abs(std::sin(probe + x)) < 0.05) probe += 0.13;
    const Mat t = hubbard_transfer(p, probe);
    const Vec ov = left_right_overlaps(t);
    c.min_overlap = ov.cwiseAbs().minCoeff();
    const Vec ev = Eigen::ComplexEigenSolver<Mat>(t, false).eigenvalues();
    c.min_gap = min_pairwise_distance(std::vector<cplx>(ev.data(), ev.data() + ev.size()));
    return c;
}

}  // namespace sovlab

#include "sovlab/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

namespace sovlab {

namespace {

Mat kron(const Mat& hi, const Mat& lo) { return Eigen::kroneckerProduct(hi, lo).eval(); }

// Supertrace over the first `count` sites of an operator on `sites` sites.
Mat supertrace_leading(const GradingSignature& sig, Mat m, int sites, int count) {
    for (int c = 0; c < count; ++c) {
        DenseOperator op(std::move(m), sig.dim(), sites - c);
        m = partial_supertrace0(sig, op).data;
    }
    return m;
}

int permutation_sign(const std::vector<int>& perm) {
    int s = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) s = -s;
    return s;
}

}  // namespace

DenseOperator projector(const GradingSignature& sig, int level, ProjectorKind kind) {
    if (level < 1) throw argument_error("projector level must be >= 1");
    const int d = sig.dim();
    Mat p = Mat::Identity(d, d);
    const double sgn = kind == ProjectorKind::plus ? 1.0 : -1.0;
    for (int a = 2; a <= level; ++a) {
        const Mat id = Mat::Identity(d, d);
        const Mat left = kron(id, p);    // sites 1..a−1
        const Mat right = kron(p, id);   // sites 2..a
        // R_{1a}(±(a−1)η)/η = ±(a−1) I + P_{1a}
        Mat r = permutation_action(sig, a, 1, a).dense();
        r.diagonal().array() += sgn * double(a - 1);
        p = sgn / double(a) * left * r * right;
    }
    return {std::move(p), d, level};
}

std::vector<cplx> asymptotic_constants(const TwistMatrix& k, int n_max, TowerKind kind) {
    std::vector<cplx> power(n_max + 1, 0.0), out(n_max + 1, 0.0);
    Mat km = Mat::Identity(k.matrix.rows(), k.matrix.cols());
    for (int m = 1; m <= n_max; ++m) {
        km = km * k.matrix;
        power[m] = supertrace(k.sig, km);
    }
    out[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        cplx acc = 0;
        for (int m = 1; m <= n; ++m) {
            const double s = (kind == TowerKind::row && m % 2 == 0) ? -1.0 : 1.0;
            acc += s * power[m] * out[n - m];
        }
        out[n] = acc / double(n);
    }
    return out;
}

cplx asymptotic_constant_projector(const TwistMatrix& k, int n, TowerKind kind) {
    if (n == 0) return 1.0;
    const auto proj = projector(k.sig, n, kind == TowerKind::column ? ProjectorKind::plus : ProjectorKind::minus);
    const Mat kk = chain_kron(k.matrix, n);
    const Mat m = proj.data * kk * proj.data;
    return supertrace_leading(k.sig, m, n, n)(0, 0);
}

bool in_extended_fat_hook(const GradingSignature& sig, int a, int b) {
    return !(a > sig.m && b > sig.n);
}

cplx central_zeros(int a, int b, cplx lambda, const ChainParams& p) {
    cplx z = 1;
    for (const auto& x : p.xi)
        for (int l = 1; l <= b; ++l)
            for (int m = 1; m <= a; ++m) {
                if (l == 1 && m == 1) continue;   // the (λ − ξ_n) factor cancels
                z *= lambda - x + p.eta * double(l - m);
            }
    return z;
}

TransferTower::TransferTower(ChainParams p, int window) : p_(std::move(p)) {
    check_inhomogeneities(p_, window);
    hinf_ = asymptotic_constants(p_.twist, 12, TowerKind::column);
    einf_ = asymptotic_constants(p_.twist, 12, TowerKind::row);
    for (int a = 1; a <= p_.sites; ++a) t_xi_.push_back(transfer_at_inhomogeneity(p_, a).data);
}

cplx TransferTower::t_inf(int n, TowerKind kind) {
    if (n < 0 || n >= static_cast<int>(hinf_.size())) throw argument_error("fusion level out of supported range");
    return kind == TowerKind::column ? hinf_[n] : einf_[n];
}

const Mat& TransferTower::t1_at_xi(int a) { return t_xi_.at(a); }

cplx interpolation_coefficient(const ChainParams& p, int a, int m, cplx lambda, TowerKind kind) {
    const double dir = kind == TowerKind::column ? 1.0 : -1.0;
    cplx c = 1;
    for (int b = 0; b < p.sites; ++b) {
        if (b != a) c *= (lambda - p.xi[b]) / (p.xi[a] - p.xi[b]);
        for (int r = 1; r <= m - 1; ++r) {
            const cplx den = p.xi[a] - p.xi[b] + dir * double(r) * p.eta;
            if (std::abs(den) < 1e-12) throw parameter_error("interpolation coefficient pole: inhomogeneities violate the eta condition");
            c /= den;
        }
    }
    return c;
}

Mat TransferTower::interpolate(int n, cplx lambda, TowerKind kind) {
    const long dim = p_.hilbert_dim();
    if (n < 0) return Mat::Zero(dim, dim);
    if (n == 0) return Mat::Identity(dim, dim);
    if (n == 1) return transfer(p_, lambda).data;
    const auto key = std::make_tuple(kind == TowerKind::column ? 0 : 1, n, lambda.real(), lambda.imag());
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const double dir = kind == TowerKind::column ? 1.0 : -1.0;
    cplx pref = 1;
    for (int r = 1; r <= n - 1; ++r) pref *= d_fn(p_, lambda + dir * double(r) * p_.eta);
    Mat acc = Mat::Identity(dim, dim) * (t_inf(n, kind) * d_fn(p_, lambda));
    for (int a = 0; a < p_.sites; ++a) {
        const cplx f = interpolation_coefficient(p_, a, n, lambda, kind);
        acc += f * (interpolate(n - 1, p_.xi[a] + dir * p_.eta, kind) * t_xi_[a]);
    }
    acc *= pref;
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, acc);
    return acc;
}

Mat TransferTower::rect(int a, int b, cplx lambda) {
    const long dim = p_.hilbert_dim();
    if (a == 0 && b == 0) throw argument_error("T^(0)_0 is not defined");
    if (a < 0 || b < 0) return Mat::Zero(dim, dim);
    if (a == 0 || b == 0) return Mat::Identity(dim, dim);
    if (!in_extended_fat_hook(p_.sig, a, b)) return Mat::Zero(dim, dim);
    if (a == 1) return column(b, lambda);
    if (b == 1) return row(a, lambda);
    return br_determinant(*this, a, b, lambda, 1);
}

Mat tower_interpolation(TransferTower& tower, int n, cplx lambda, TowerKind kind) {
    if (n < 1) throw argument_error("fusion level must be >= 1");
    return tower.interpolate(n, lambda, kind);
}

Mat fused_transfer_projector(TransferTower& tower, int a, int b, cplx lambda) {
    const ChainParams& p = tower.params();
    if (a < 1 || b < 1) throw argument_error("fused diagram needs a, b >= 1");
    if (a != 1 && b != 1) throw argument_error("projector route covers single rows or columns only");
    const bool column = a == 1;
    const int n = column ? b : a;
    const int total = n + p.sites;
    if (ipow(p.dim(), total) > 4096) throw capacity_error("projector route exceeds d^(ab+N) <= 4096");
    const double dir = column ? 1.0 : -1.0;
    Mat m = Mat::Identity(ipow(p.dim(), total), ipow(p.dim(), total));
    for (int k = 1; k <= n; ++k) m = m * monodromy_multi(p, n, k, lambda + dir * double(n - k) * p.eta);
    const auto proj = projector(p.sig, n, column ? ProjectorKind::plus : ProjectorKind::minus);
    const Mat pp = kron(Mat::Identity(p.hilbert_dim(), p.hilbert_dim()), proj.data);
    return supertrace_leading(p.sig, pp * m * pp, total, n);
}

Mat br_determinant(TransferTower& tower, int a, int b, cplx lambda, int form, bool reverse) {
    if (a == 0 && b == 0) throw argument_error("T^(0)_0 is not defined");
    const ChainParams& p = tower.params();
    const long dim = p.hilbert_dim();
    const int size = form == 1 ? a : b;
    if (size == 0) return Mat::Identity(dim, dim);
    std::vector<std::vector<Mat>> e(size, std::vector<Mat>(size));
    for (int i = 1; i <= size; ++i)
        for (int j = 1; j <= size; ++j) {
            if (form == 1) e[i - 1][j - 1] = tower.column(b + i - j, lambda - double(i - 1) * p.eta);
            else e[i - 1][j - 1] = tower.row(a + i - j, lambda + double(i - 1) * p.eta);
        }
    std::vector<int> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    Mat det = Mat::Zero(dim, dim);
    do {
        Mat prod = Mat::Identity(dim, dim);
        bool zero = false;
        for (int k = 0; k < size && !zero; ++k) {
            const int i = reverse ? size - 1 - k : k;
            const Mat& f = e[i][perm[i]];
            if (f.isZero(0.0)) zero = true;
            else prod = prod * f;
        }
        if (!zero) det += double(permutation_sign(perm)) * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

cplx berezinian_fn(const ChainParams& p, cplx lambda) {
    const int m = p.sig.m, n = p.sig.n;
    const Mat& k = p.twist.matrix;
    const cplx det_m = m > 0 ? k.topLeftCorner(m, m).determinant() : cplx(1);
    const cplx det_n = n > 0 ? k.bottomRightCorner(n, n).determinant() : cplx(1);
    cplx num = det_m * a_fn(p, lambda);
    for (int j = 1; j <= m - 1; ++j) num *= d_fn(p, lambda - double(j) * p.eta);
    cplx den = det_n;
    for (int l = 1 - m; l <= n - m; ++l) den *= d_fn(p, lambda + double(l) * p.eta);
    if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(num)))
        throw evaluation_error("Berezinian pole at lambda = " + to_string(lambda));
    return num / den;
}

double relative_residual(const Mat& lhs, const Mat& rhs) {
    const double scale = std::max({1.0, max_abs(lhs), max_abs(rhs)});
    return max_abs(lhs - rhs) / scale;
}

double inner_boundary_residual(TransferTower& tower, cplx lambda) {
    const ChainParams& p = tower.params();
    const int m = p.sig.m, n = p.sig.n;
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    const cplx ber = berezinian_fn(p, lambda);
    const Mat lhs = sign * ber * tower.rect(m + 1, n, lambda + p.eta);
    const Mat rhs = tower.rect(m, n + 1, lambda);
    return relative_residual(lhs, rhs);
}

cplx superdeterminant(const GradingSignature& sig, const std::vector<cplx>& g) {
    if (static_cast<int>(g.size()) != sig.dim()) throw argument_error("diagonal twist length mismatch");
    cplx s = 1;
    for (int i = 0; i < sig.m; ++i) s *= g[i];
    for (int j = 0; j < sig.n; ++j) s /= g[sig.m + j];
    return s;
}

cplx saturated_character(const GradingSignature& sig, const std::vector<cplx>& g, int a, int b) {
    if (static_cast<int>(g.size()) != sig.dim()) throw argument_error("diagonal twist length mismatch");
    const int m = sig.m, n = sig.n;
    cplx cross = 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) cross *= g[i] - g[m + j];
    if (a == m && b > n) {
        const int k = b - n;
        cplx r = cross;
        for (int i = 0; i < m; ++i) r *= std::pow(g[i], k);
        return r;
    }
    if (b == n && a > m) {
        const int k = a - m;
        cplx r = cross;
        for (int j = 0; j < n; ++j) r *= std::pow(-g[m + j], k);
        return r;
    }
    throw argument_error("(a,b) does not saturate an arm of the fat hook");
}

double character_relation_residual(const GradingSignature& sig, const std::vector<cplx>& g, int k) {
    const int m = sig.m, n = sig.n;
    const cplx lhs = saturated_character(sig, g, m, n + k);
    const cplx rhs = std::pow(-1.0, k * n) * std::pow(superdeterminant(sig, g), k) * saturated_character(sig, g, m + k, n);
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace sovlab

#include "sovlab/spin_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>

namespace sovlab {

namespace {

void eig_block(const Mat& block, Vec& vals, Mat& vecs) {
    Eigen::ComplexEigenSolver<Mat> es(block);
    vals = es.eigenvalues();
    vecs = es.eigenvectors();
}

}  // namespace

TwistMatrix validate_twist(const Mat& matrix, const GradingSignature& sig, double tol) {
    const int d = sig.dim(), m = sig.m, n = sig.n;
    if (matrix.rows() != d || matrix.cols() != d) throw argument_error("twist must be d x d");
    if (!matrix.allFinite()) throw argument_error("twist has non-finite entries");
    if (m > 0 && n > 0) {
        const double off = std::max(max_abs(matrix.topRightCorner(m, n)), max_abs(matrix.bottomLeftCorner(n, m)));
        if (off > 0.0) throw structure_error("twist has a nonzero odd block");
    }
    TwistMatrix t;
    t.sig = sig;
    t.matrix = matrix;
    t.eigenvalues = Vec::Zero(d);
    t.w = Mat::Zero(d, d);
    if (m > 0) {
        Vec v;
        Mat w;
        eig_block(matrix.topLeftCorner(m, m), v, w);
        t.eigenvalues.head(m) = v;
        t.w.topLeftCorner(m, m) = w;
    }
    if (n > 0) {
        Vec v;
        Mat w;
        eig_block(matrix.bottomRightCorner(n, n), v, w);
        t.eigenvalues.tail(n) = v;
        t.w.bottomRightCorner(n, n) = w;
    }
    const double scale = std::max(1.0, t.eigenvalues.cwiseAbs().maxCoeff());
    t.simple = true;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(t.eigenvalues(i) - t.eigenvalues(j)) <= tol * scale) t.simple = false;
    Eigen::JacobiSVD<Mat> svd(t.w);
    const auto& s = svd.singularValues();
    t.diagonalizable = s(d - 1) > 1e-8 * s(0);
    if (t.diagonalizable) {
        t.w_inv = t.w.inverse();
        // Diagonal input keeps W = I so downstream tensor sources stay literal.
        if (max_abs(matrix - Mat(matrix.diagonal().asDiagonal())) == 0.0) {
            t.eigenvalues = matrix.diagonal();
            t.w = Mat::Identity(d, d);
            t.w_inv = t.w;
        }
    }
    t.invertible = t.eigenvalues.cwiseAbs().minCoeff() > tol * scale;
    return t;
}

TwistMatrix diagonal_twist(const GradingSignature& sig, const std::vector<cplx>& k) {
    if (static_cast<int>(k.size()) != sig.dim()) throw argument_error("need one eigenvalue per basis index");
    Vec v(sig.dim());
    for (int i = 0; i < sig.dim(); ++i) v(i) = k[i];
    return validate_twist(Mat(v.asDiagonal()), sig);
}

ChainParams make_chain(const GradingSignature& sig, cplx eta, std::vector<cplx> xi, const TwistMatrix& twist) {
    ChainParams p;
    p.sig = sig;
    p.sites = static_cast<int>(xi.size());
    p.eta = eta;
    p.xi = std::move(xi);
    p.twist = twist;
    if (p.sites < 1) throw argument_error("chain needs at least one site");
    if (!(twist.sig == sig)) throw argument_error("twist signature differs from chain signature");
    return p;
}

void check_inhomogeneities(const ChainParams& p, int window, double tol) {
    if (std::abs(p.eta) < tol) throw parameter_error("eta must be nonzero");
    for (int a = 0; a < p.sites; ++a)
        for (int b = 0; b < p.sites; ++b) {
            if (a == b) continue;
            for (int k = -window; k <= window; ++k)
                if (std::abs(p.xi[a] - p.xi[b] - double(k) * p.eta) < tol)
                    throw parameter_error("inhomogeneities " + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                          " differ by a multiple of eta");
        }
}

cplx d_fn(const ChainParams& p, cplx lambda) {
    cplx r = 1;
    for (const auto& x : p.xi) r *= lambda - x;
    return r;
}

cplx a_fn(const ChainParams& p, cplx lambda) { return d_fn(p, lambda + p.eta); }

Mat SignedPermutation::dense() const {
    const long n = static_cast<long>(target.size());
    Mat m = Mat::Zero(n, n);
    for (long k = 0; k < n; ++k) m(target[k], k) = double(sign[k]);
    return m;
}

Mat SignedPermutation::right_apply(const Mat& m) const {
    // (m P)(:, k) = sign[k] · m(:, target[k])
    Mat out(m.rows(), m.cols());
    for (long k = 0; k < m.cols(); ++k) out.col(k) = double(sign[k]) * m.col(target[k]);
    return out;
}

Mat SignedPermutation::left_apply(const Mat& m) const {
    Mat out(m.rows(), m.cols());
    for (long k = 0; k < m.rows(); ++k) out.row(target[k]) = double(sign[k]) * m.row(k);
    return out;
}

SignedPermutation permutation_action(const GradingSignature& sig, int sites, int a, int b) {
    if (a < 1 || b < 1 || a > sites || b > sites) throw argument_error("site index out of range");
    if (a == b) throw argument_error("graded permutation needs distinct sites");
    if (a > b) std::swap(a, b);
    const int d = sig.dim();
    const long side = ipow(d, sites);
    const long sa = ipow(d, a - 1), sb = ipow(d, b - 1);
    SignedPermutation p;
    p.target.resize(side);
    p.sign.resize(side);
    for (long k = 0; k < side; ++k) {
        const int ka = digit_of(k, a - 1, d), kb = digit_of(k, b - 1, d);
        const int pa = sig.parity(ka + 1), pb = sig.parity(kb + 1);
        int mid = 0;
        for (int c = a; c < b - 1; ++c) mid ^= sig.parity(digit_of(k, c, d) + 1);
        const int e = (pa & pb) ^ ((pa ^ pb) & mid);
        p.target[k] = k + (kb - ka) * sa + (ka - kb) * sb;
        p.sign[k] = e ? -1 : 1;
    }
    return p;
}

DenseOperator r_matrix(const GradingSignature& sig, cplx eta, cplx lambda, cplx mu) {
    const int d = sig.dim();
    Mat r = permutation_action(sig, 2, 1, 2).dense() * eta;
    r.diagonal().array() += lambda - mu;
    return {std::move(r), d, 2};
}

Mat monodromy_multi(const ChainParams& p, int n_aux, int aux, cplx lambda) {
    const int total = n_aux + p.sites;
    Mat m = embed_one_site(p.sig, total, aux, p.twist.matrix).data;
    for (int n = p.sites; n >= 1; --n) {
        const auto perm = permutation_action(p.sig, total, aux, n_aux + n);
        m = (lambda - p.xi[n - 1]) * m + p.eta * perm.right_apply(m);
    }
    return m;
}

DenseOperator monodromy(const ChainParams& p, cplx lambda) {
    return {monodromy_multi(p, 1, 1, lambda), p.dim(), p.sites + 1};
}

DenseOperator transfer(const ChainParams& p, cplx lambda) {
    return partial_supertrace0(p.sig, monodromy(p, lambda));
}

DenseOperator transfer_at_inhomogeneity(const ChainParams& p, int n) {
    if (n < 1 || n > p.sites) throw argument_error("site index out of range");
    const int N = p.sites;
    const cplx xn = p.xi[n - 1];
    Mat t = p.eta * embed_one_site(p.sig, N, n, p.twist.matrix).data;   // R_{0n}(0) = ηP_{0n}
    auto times_r = [&](const Mat& m, int b, bool right) {
        const auto perm = permutation_action(p.sig, N, n, b);
        const cplx s = xn - p.xi[b - 1];
        return Mat(s * m + p.eta * (right ? perm.right_apply(m) : perm.left_apply(m)));
    };
    for (int b = 1; b < n; ++b) t = times_r(t, b, false);   // R_{n,b} on the left, b = n−1 outermost
    for (int b = N; b > n; --b) t = times_r(t, b, true);     // R_{n,N} first on the right
    return {std::move(t), p.dim(), N};
}

Mat chain_kron(const Mat& w, int sites) {
    Mat r = Mat::Identity(1, 1);
    for (int s = 0; s < sites; ++s) r = Eigen::kroneckerProduct(w, r).eval();
    return r;
}

double spectrum_mismatch(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (long i = 0; i < a.size(); ++i) {
        long best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (long j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(a(i) - b(j)) < bd) {
                bd = std::abs(a(i) - b(j));
                best = j;
            }
        used[best] = true;
        worst = std::max(worst, bd);
    }
    return worst;
}

Vec eigenvalues_of(const Mat& m) {
    Eigen::ComplexEigenSolver<Mat> es(m, false);
    return es.eigenvalues();
}

JointSpectrum joint_diagonalize(const ChainParams& p, cplx probe) {
    const Mat t = transfer(p, probe).data;
    Eigen::ComplexEigenSolver<Mat> es(t);
    JointSpectrum js;
    js.vectors = es.eigenvectors();
    js.probe_values = es.eigenvalues();
    const long dim = t.rows();
    js.min_gap = std::numeric_limits<double>::infinity();
    for (long i = 0; i < dim; ++i)
        for (long j = i + 1; j < dim; ++j)
            js.min_gap = std::min(js.min_gap, std::abs(js.probe_values(i) - js.probe_values(j)));
    const Mat vinv = js.vectors.inverse();
    js.x.assign(dim, std::vector<cplx>(p.sites));
    for (int a = 1; a <= p.sites; ++a) {
        const Mat diag = vinv * transfer_at_inhomogeneity(p, a).data * js.vectors;
        for (long i = 0; i < dim; ++i) js.x[i][a - 1] = diag(i, i);
    }
    return js;
}

}  // namespace sovlab

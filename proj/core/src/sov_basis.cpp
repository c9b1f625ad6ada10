#include "sovlab/sov_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sovlab {

RowVec SourceCovector::full() const {
    if (sites.empty()) throw argument_error("source covector has no sites");
    const long d = sites.front().size();
    const int n = static_cast<int>(sites.size());
    RowVec r(ipow(d, n));
    for (long k = 0; k < r.size(); ++k) {
        cplx v = 1;
        for (int a = 0; a < n; ++a) v *= sites[a](digit_of(k, a, d));
        r(k) = v;
    }
    return r;
}

SourceCondition source_condition(const SourceCovector& s, const TwistMatrix& k, double tol) {
    if (!k.diagonalizable) throw configuration_error("twist has no eigenbasis W_K; supply it in Jordan form");
    SourceCondition c;
    c.value = 1.0;
    c.holds = true;
    for (const auto& site : s.sites) {
        if (site.size() != k.w.rows()) throw argument_error("one-site covector length differs from twist size");
        const RowVec rot = site * k.w;
        const double scale = std::max(1e-300, site.norm() * k.w.norm());
        for (long i = 0; i < rot.size(); ++i) {
            c.value *= rot(i);
            if (std::abs(rot(i)) <= tol * scale) c.holds = false;
        }
        c.rotated.push_back(rot);
    }
    return c;
}

SourceCovector default_source_covector(const ChainParams& p, SourceCondition* report) {
    if (!p.twist.diagonalizable) throw configuration_error("twist has no eigenbasis W_K; supply it in Jordan form");
    SourceCovector s;
    const RowVec one = RowVec::Ones(p.dim()) * p.twist.w_inv;
    s.sites.assign(p.sites, one);
    if (report) *report = source_condition(s, p.twist);
    return s;
}

cplx factorized_criterion(const SourceCovector& s, const TwistMatrix& k) {
    if (s.sites.empty()) throw argument_error("factorized criterion needs a tensor-form source");
    const long d = k.matrix.rows();
    cplx value = 1;
    for (const auto& site : s.sites) {
        if (site.size() != d) throw argument_error("one-site covector length differs from twist size");
        Mat m(d, d);
        RowVec row = site;
        for (long i = 0; i < d; ++i) {
            m.row(i) = row;
            row = row * k.matrix;
        }
        value *= m.determinant();
    }
    return value;
}

Mat sov_rows(const RowVec& source, const std::vector<Mat>& t_xi, int d) {
    const int n = static_cast<int>(t_xi.size());
    const long dim = ipow(d, n);
    if (source.size() != dim) throw argument_error("source covector length differs from d^N");
    std::vector<std::vector<Mat>> powers(n);
    for (int a = 0; a < n; ++a) {
        powers[a].push_back(Mat::Identity(dim, dim));
        for (int h = 1; h < d; ++h) powers[a].push_back(powers[a].back() * t_xi[a]);
    }
    Mat b(dim, dim);
    for (long row = 0; row < dim; ++row) {
        RowVec v = source;
        for (int a = 0; a < n; ++a) {
            const int h = digit_of(row, a, d);
            if (h > 0) v = v * powers[a][h];
        }
        b.row(row) = v;
    }
    return b;
}

SovBasis build_sov_basis(const ChainParams& p, const RowVec& source) {
    if (p.hilbert_dim() > kMaxSovDim) throw capacity_error("SoV basis limited to d^N <= 4096");
    SovBasis s;
    s.params = p;
    s.source = source;
    for (int a = 1; a <= p.sites; ++a) s.t_xi.push_back(transfer_at_inhomogeneity(p, a).data);
    s.b = sov_rows(source, s.t_xi, p.dim());
    Eigen::BDCSVD<Mat> svd(s.b);
    const auto& sv = svd.singularValues();
    s.sigma_max = sv(0);
    s.sigma_min = sv(sv.size() - 1);
    s.det_abs = std::abs(Eigen::PartialPivLU<Mat>(s.b).determinant());
    s.is_basis = s.sigma_max > 0.0 && s.sigma_min > kRankTolerance * s.sigma_max;
    return s;
}

SovBasis build_sov_basis(const ChainParams& p, const SourceCovector& source) {
    if (static_cast<int>(source.sites.size()) != p.sites) throw argument_error("source covector needs one factor per site");
    return build_sov_basis(p, source.full());
}

Vec wavefunction(const std::vector<cplx>& x, int d) {
    const int n = static_cast<int>(x.size());
    Vec w(ipow(d, n));
    for (long k = 0; k < w.size(); ++k) {
        cplx v = 1;
        for (int a = 0; a < n; ++a)
            for (int h = digit_of(k, a, d); h > 0; --h) v *= x[a];
        w(k) = v;
    }
    return w;
}

cplx eigenvalue_interpolation(const ChainParams& p, const std::vector<cplx>& x, cplx lambda) {
    if (static_cast<int>(x.size()) != p.sites) throw argument_error("need one value per inhomogeneity");
    cplx r = supertrace(p.sig, p.twist.matrix) * d_fn(p, lambda);
    for (int a = 0; a < p.sites; ++a) {
        cplx f = 1;
        for (int b = 0; b < p.sites; ++b)
            if (b != a) f *= (lambda - p.xi[b]) / (p.xi[a] - p.xi[b]);
        r += f * x[a];
    }
    return r;
}

std::vector<cplx> probe_points(const ChainParams& p, int count, std::uint64_t seed) {
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
            for (int k = -1; k <= 1; ++k)
                if (std::abs(z - x - double(k) * p.eta) < gap) ok = false;
        if (ok) pts.push_back(z);
    }
    return pts;
}

Reconstruction reconstruct_eigenvector(const SovBasis& basis, const std::vector<cplx>& x) {
    if (!basis.is_basis) throw basis_error("SoV matrix is singular; no reconstruction possible");
    const ChainParams& p = basis.params;
    Reconstruction r;
    Eigen::ColPivHouseholderQR<Mat> qr(basis.b);
    r.vector = qr.solve(wavefunction(x, p.dim()));
    const double nrm = r.vector.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw basis_error("SoV solve produced a null vector");
    r.vector /= nrm;
    r.condition = basis.sigma_max / basis.sigma_min;
    r.ill_conditioned = r.condition > 1e10;
    for (const auto& z : probe_points(p)) {
        const cplx t1 = eigenvalue_interpolation(p, x, z);
        const Vec diff = transfer(p, z).data * r.vector - t1 * r.vector;
        r.residual = std::max(r.residual, diff.norm() / std::max(1.0, std::abs(t1)));
    }
    return r;
}

double projective_distance(const Vec& u, const Vec& v) {
    const double nu = u.norm(), nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return nu == nv ? 0.0 : std::sqrt(2.0);
    const cplx ov = u.dot(v);   // conj(u)·v
    const cplx phase = std::abs(ov) > 0.0 ? std::conj(ov) / std::abs(ov) : cplx(1.0);
    return (u / nu - phase * v / nv).norm();
}

Vec left_right_overlaps(const Mat& t) {
    Eigen::ComplexEigenSolver<Mat> right(t), left(t.transpose());
    const long n = t.rows();
    Vec out(n);
    std::vector<bool> used(n, false);
    for (long i = 0; i < n; ++i) {
        long best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (long j = 0; j < n; ++j)
            if (!used[j] && std::abs(right.eigenvalues()(i) - left.eigenvalues()(j)) < bd) {
                bd = std::abs(right.eigenvalues()(i) - left.eigenvalues()(j));
                best = j;
            }
        used[best] = true;
        const Vec r = right.eigenvectors().col(i), l = left.eigenvectors().col(best);
        out(i) = std::abs((l.transpose() * r)(0, 0)) / (l.norm() * r.norm());
    }
    return out;
}

}  // namespace sovlab

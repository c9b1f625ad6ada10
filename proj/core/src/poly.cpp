#include "sovlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sovlab {

cplx poly_eval(const Vec& c, cplx z) {
    cplx r = 0;
    for (long k = c.size() - 1; k >= 0; --k) r = r * z + c(k);
    return r;
}

Vec poly_from_roots(const std::vector<cplx>& roots) {
    Vec c = Vec::Ones(1);
    for (const auto& r : roots) {
        Vec lin(2);
        lin << -r, 1.0;
        c = poly_mul(c, lin);
    }
    return c;
}

Vec poly_mul(const Vec& a, const Vec& b) {
    Vec c = Vec::Zero(a.size() + b.size() - 1);
    for (long i = 0; i < a.size(); ++i)
        for (long j = 0; j < b.size(); ++j) c(i + j) += a(i) * b(j);
    return c;
}

Vec poly_trim(const Vec& c, double tol) {
    const double scale = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
    long n = c.size();
    while (n > 1 && std::abs(c(n - 1)) <= tol * scale) --n;
    return c.head(n);
}

std::vector<cplx> poly_roots(const Vec& c0) {
    const Vec c = poly_trim(c0);
    const long deg = c.size() - 1;
    if (deg < 1) return {};
    if (deg == 1) return {-c(0) / c(1)};
    Mat comp = Mat::Zero(deg, deg);
    for (long i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (long i = 0; i < deg; ++i) comp(i, deg - 1) = -c(i) / c(deg);
    Eigen::ComplexEigenSolver<Mat> es(comp, false);
    std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    return r;
}

PolyDivision poly_divide(const Vec& num, const Vec& den0) {
    const Vec den = poly_trim(den0);
    const long dn = den.size() - 1;
    if (dn == 0 && den(0) == cplx(0.0)) throw argument_error("division by the zero polynomial");
    Vec rem = num;
    const long nn = num.size() - 1;
    if (nn < dn) return {Vec::Zero(1), rem};
    Vec q = Vec::Zero(nn - dn + 1);
    for (long k = nn - dn; k >= 0; --k) {
        q(k) = rem(k + dn) / den(dn);
        for (long j = 0; j <= dn; ++j) rem(k + j) -= q(k) * den(j);
    }
    return {q, dn > 0 ? Vec(rem.head(dn)) : Vec(Vec::Zero(1))};
}

double min_pairwise_distance(const std::vector<cplx>& z) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) m = std::min(m, std::abs(z[i] - z[j]));
    return m;
}

}  // namespace sovlab

#pragma once

#include <vector>

#include "sovlab/types.hpp"

namespace sovlab {

// Polynomials as ascending coefficient vectors: c(0) + c(1) z + …
cplx poly_eval(const Vec& c, cplx z);
Vec poly_from_roots(const std::vector<cplx>& roots);
Vec poly_mul(const Vec& a, const Vec& b);
// Drops trailing coefficients with |c| ≤ tol·max|c|.
Vec poly_trim(const Vec& c, double tol = 0.0);

// Roots from the eigenvalues of the companion matrix.
std::vector<cplx> poly_roots(const Vec& c);

struct PolyDivision {
    Vec quotient;
    Vec remainder;
};
PolyDivision poly_divide(const Vec& num, const Vec& den);

// Minimum distance between distinct elements (infinity for fewer than two).
double min_pairwise_distance(const std::vector<cplx>& z);

}  // namespace sovlab

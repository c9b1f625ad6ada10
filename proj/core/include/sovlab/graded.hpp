#pragma once

#include <vector>

#include "sovlab/types.hpp"

namespace sovlab {

// (m|n) split of the local space C^(m|n). Indices are 1-based in the API.
struct GradingSignature {
    int m = 1;
    int n = 0;

    GradingSignature() = default;
    GradingSignature(int m_, int n_);

    int dim() const { return m + n; }
    int parity(int i) const { return i > m ? 1 : 0; }
    bool operator==(const GradingSignature&) const = default;
};

// Dense operator on (C^d)^{⊗s}. Site 1 is the least significant digit of the
// row/column index.
struct DenseOperator {
    Mat data;
    int local_dim = 1;
    int sites = 0;

    DenseOperator() = default;
    DenseOperator(Mat m, int d, int s);

    static DenseOperator identity(int d, int s);
};

// Digits (i_1..i_s), 1-based, with linear = 1 + Σ (i_a − 1) d^(a−1).
struct MultiIndex {
    std::vector<int> digits;
    int d = 1;

    static MultiIndex from_linear(long linear, int d, int s);
    long linear() const;
};

long ipow(long base, int e);

// Zero-based digit of a zero-based linear index at zero-based site.
inline int digit_of(long idx, int site, long d) {
    for (int k = 0; k < site; ++k) idx /= d;
    return static_cast<int>(idx % d);
}

// e^j_i (maps v_j to v_i) acting at site a of `sites`, with the graded sign
// picked up when crossing the vectors at sites b < a.
DenseOperator embed_elementary(const GradingSignature& sig, int sites, int a, int i, int j);

// Embeds an arbitrary one-site operator, assumed homogeneous or even.
// Odd entries receive the crossing sign entry by entry.
DenseOperator embed_one_site(const GradingSignature& sig, int sites, int a, const Mat& op);

// P_ab with P(v_i⊗v_j) = (−1)^{īj̄} v_j⊗v_i.
DenseOperator graded_permutation(const GradingSignature& sig, int sites, int a, int b);

cplx supertrace(const GradingSignature& sig, const Mat& op);

// Traces out the first tensor factor (site 0 in the caller's numbering).
DenseOperator partial_supertrace0(const GradingSignature& sig, const DenseOperator& op);

// Dual of the tensor state ⊗_a S^(a), conjugating coefficients.
RowVec dual_covector(const GradingSignature& sig, const std::vector<Vec>& one_site_states);

// Sign carried by (|i_1..i_s⟩)† (indices 1-based).
int dual_sign(const GradingSignature& sig, const std::vector<int>& idx);

// Sign of ⟨i_1|⊗…⊗⟨i_s| applied to |j_1…j_s⟩: each ⟨i_k| crosses |j_1…j_{k−1}⟩.
int pairing_sign(const GradingSignature& sig, const std::vector<int>& bra, const std::vector<int>& ket);

// Parity of a basis vector of the s-fold product (zero-based linear index).
int state_parity(const GradingSignature& sig, long idx, int sites);

// Ungraded embedding of a two-site operator `op` (index = i_first + d·i_second)
// acting on sites a (first factor) and b of an s-site chain, zero-based sites.
Mat embed_pair_ungraded(const Mat& op, int d, int sites, int a, int b);

}  // namespace sovlab

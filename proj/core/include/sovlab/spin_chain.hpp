#pragma once

#include <vector>

#include "sovlab/graded.hpp"

namespace sovlab {

struct TwistMatrix {
    GradingSignature sig;
    Mat matrix;
    Vec eigenvalues;   // ordered block by block: even block first
    Mat w;             // K = w · diag(eigenvalues) · w⁻¹ when diagonalizable
    Mat w_inv;
    bool simple = false;
    bool diagonalizable = false;
    bool invertible = false;
};

// Checks evenness (zero off-diagonal blocks) and computes the eigen-data.
TwistMatrix validate_twist(const Mat& matrix, const GradingSignature& sig, double tol = 1e-10);
TwistMatrix diagonal_twist(const GradingSignature& sig, const std::vector<cplx>& k);

struct ChainParams {
    GradingSignature sig;
    int sites = 1;
    cplx eta = 1.0;
    std::vector<cplx> xi;
    TwistMatrix twist;

    int dim() const { return sig.dim(); }
    long hilbert_dim() const { return ipow(sig.dim(), sites); }
};

ChainParams make_chain(const GradingSignature& sig, cplx eta, std::vector<cplx> xi, const TwistMatrix& twist);

// Throws parameter_error if ξ_a − ξ_b ∈ ηZ for |k| ≤ window, or η = 0.
void check_inhomogeneities(const ChainParams& p, int window, double tol = 1e-10);

// d(λ) = Π (λ − ξ_n); a(λ) = d(λ + η).
cplx d_fn(const ChainParams& p, cplx lambda);
cplx a_fn(const ChainParams& p, cplx lambda);

// Graded permutation stored as a signed permutation: P e_k = sign[k] e_{target[k]}.
struct SignedPermutation {
    std::vector<long> target;
    std::vector<signed char> sign;

    Mat dense() const;
    // Returns m·P without forming P.
    Mat right_apply(const Mat& m) const;
    Mat left_apply(const Mat& m) const;
};

// P_ab on `sites` sites (1-based), by direct action on basis vectors.
SignedPermutation permutation_action(const GradingSignature& sig, int sites, int a, int b);

// R(λ, μ) = (λ − μ) I + η P on two sites.
DenseOperator r_matrix(const GradingSignature& sig, cplx eta, cplx lambda, cplx mu);

// M_0 = K_0 R_{0N}(λ − ξ_N) … R_{01}(λ − ξ_1) on N+1 sites, auxiliary first.
DenseOperator monodromy(const ChainParams& p, cplx lambda);

// Monodromy of auxiliary site `aux` (1-based) in a chain whose first n_aux sites
// are auxiliary and the remaining N are the quantum sites.
Mat monodromy_multi(const ChainParams& p, int n_aux, int aux, cplx lambda);

DenseOperator transfer(const ChainParams& p, cplx lambda);

// T(ξ_n) = η R_{n,n−1} … R_{n,1} K_n R_{n,N} … R_{n,n+1}, n 1-based.
DenseOperator transfer_at_inhomogeneity(const ChainParams& p, int n);

// Kronecker power W ⊗ … ⊗ W over the chain (even W embeds without signs).
Mat chain_kron(const Mat& w, int sites);

// Greedy bipartite matching of two multisets; returns the max matched distance.
double spectrum_mismatch(const Vec& a, const Vec& b);

Vec eigenvalues_of(const Mat& m);

// Eigenbasis of T(probe) and, for every eigenvector, its eigenvalues x_a of T(ξ_a).
struct JointSpectrum {
    Mat vectors;                  // columns are right eigenvectors
    Vec probe_values;             // eigenvalues of T(probe)
    std::vector<std::vector<cplx>> x;
    double min_gap = 0.0;         // smallest pairwise distance among probe_values
};

JointSpectrum joint_diagonalize(const ChainParams& p, cplx probe);

}  // namespace sovlab

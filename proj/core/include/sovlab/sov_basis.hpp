#pragma once

#include <cstdint>
#include <vector>

#include "sovlab/spin_chain.hpp"

namespace sovlab {

// Tensor-form covector ⟨S| = ⊗_a ⟨S,a|; each entry of `sites` holds the
// coefficients of ⟨S,a| in the dual basis ⟨i|.
struct SourceCovector {
    std::vector<RowVec> sites;

    RowVec full() const;
};

// The rotated one-site components ⟨S,a|W and their product, which must not vanish.
struct SourceCondition {
    std::vector<RowVec> rotated;
    cplx value = 0.0;
    bool holds = false;
};

SourceCondition source_condition(const SourceCovector& s, const TwistMatrix& k, double tol = 1e-12);

// Per site ⟨S,a| = (1,…,1)·W⁻¹, so every rotated component equals 1.
SourceCovector default_source_covector(const ChainParams& p, SourceCondition* report = nullptr);

// Π_a det_{i,j} ⟨S,a|K^{i−1}|e_j⟩.
cplx factorized_criterion(const SourceCovector& s, const TwistMatrix& k);

struct SovBasis {
    ChainParams params;
    RowVec source;
    Mat b;   // row h (MultiIndex digits h_a + 1) is ⟨h_1 … h_N|
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double det_abs = 0.0;
    bool is_basis = false;
    std::vector<Mat> t_xi;
};

inline constexpr double kRankTolerance = 1e-8;
inline constexpr long kMaxSovDim = 4096;

// Rows ⟨S|Π_n T_n^{h_n}, h_n ∈ {0..d−1}, for any commuting family T_n on d^N.
Mat sov_rows(const RowVec& source, const std::vector<Mat>& t_xi, int d);

SovBasis build_sov_basis(const ChainParams& p, const SourceCovector& source);
SovBasis build_sov_basis(const ChainParams& p, const RowVec& source);

// Entry h = Π_a x_a^{h_a}, h_a ∈ {0..d−1}.
Vec wavefunction(const std::vector<cplx>& x, int d);

// T∞,1 d(λ) + Σ_a f_a^(1)(λ) x_a with T∞,1 = str K.
cplx eigenvalue_interpolation(const ChainParams& p, const std::vector<cplx>& x, cplx lambda);

// Three fixed points at distance ≥ 0.1|η| from every ξ_a + kη, |k| ≤ 1.
std::vector<cplx> probe_points(const ChainParams& p, int count = 3, std::uint64_t seed = 0x5eed);

struct Reconstruction {
    Vec vector;
    double residual = 0.0;   // max over probes of ‖T|t⟩ − t₁|t⟩‖ / max(1, |t₁|)
    double condition = 0.0;
    bool ill_conditioned = false;
};

Reconstruction reconstruct_eigenvector(const SovBasis& basis, const std::vector<cplx>& x);

// min over phases of ‖u/‖u‖ − e^{iθ} v/‖v‖‖.
double projective_distance(const Vec& u, const Vec& v);

// |⟨l_i|r_i⟩| / (‖l_i‖‖r_i‖) for left/right eigenvectors matched by eigenvalue.
Vec left_right_overlaps(const Mat& t);

}  // namespace sovlab

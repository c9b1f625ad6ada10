#pragma once

#include <vector>

#include "sovlab/types.hpp"

namespace sovlab {

enum class HBranch { principal, shifted };

// Four-dimensional local space, index 2·s₁ + s₂ over the two qubits of a site.
struct HubbardParams {
    int sites = 1;
    cplx eta = 0.0;               // −2iU
    std::vector<cplx> xi;
    int family = 1;               // twist family a ∈ {1,2,3,4}
    cplx alpha = 1.0, beta = 1.0, gamma = 1.0;
    HBranch branch = HBranch::principal;

    long hilbert_dim() const;
};

cplx eta_from_coupling(double u);

// Throws parameter_error when sin(ξ_a − ξ_b) or sin(ξ_a + ξ_b) vanishes, or the
// family index is out of range.
void validate_hubbard(const HubbardParams& p, double tol = 1e-10);

// sinh 2h = (iη/2) sin 2λ. principal: ½ asinh(·); shifted: iπ/2 − principal.
cplx h_of(cplx lambda, cplx eta, HBranch branch = HBranch::principal);
// −i cot(2λ) cosh(2h). Not used by any identity below.
cplx hubbard_lambda_fn(cplx lambda, cplx eta, HBranch branch = HBranch::principal);

Mat hubbard_twist(int family, cplx alpha, cplx beta, cplx gamma);
Mat hubbard_twist(const HubbardParams& p);

struct TwistSpectrum {
    bool simple = false;
    std::vector<cplx> eigenvalues;   // closed forms
    const char* reason = "";
};
TwistSpectrum hubbard_twist_spectrum(int family, cplx alpha, cplx beta, cplx gamma, double tol = 1e-10);

// XX R-matrix on C²⊗C², index 2·s_a + s_b.
Mat xx_r(cplx lambda);

// 16×16 on V_A ⊗ V_B with index i_A + 4·i_B.
Mat shastry_r(cplx lambda, cplx mu, cplx eta, HBranch branch = HBranch::principal);
Mat hubbard_lax(cplx lambda, cplx eta, HBranch branch = HBranch::principal);
Mat swap_ab();

struct ShastryReport {
    double ybe = 0.0;
    double regularity = 0.0;       // R(λ|λ) − P₁₃P₂₄
    double lax_left = 0.0;         // R(λ|0) − L(λ)/cosh h(λ)
    double lax_right = 0.0;        // R(0|λ) − L̃(−λ)/cosh h(λ)
    double unitarity = 0.0;        // R_AB(λ|μ)R_BA(μ|λ) − c(λ,μ)·I, c with tanh²
    double crossing_a = 0.0;       // fitted-scalar residual, shift π/2 in λ
    double crossing_b = 0.0;       // shift π/2 in μ
    std::vector<double> scalar_ybe;   // per family 1..4
};

ShastryReport shastry_checks(cplx lambda, cplx mu, cplx xi, cplx eta, const HubbardParams& twist,
                             HBranch branch = HBranch::principal);

// K_A R_{A,N}(λ|ξ_N)…R_{A,1}(λ|ξ_1) on 4^{N+1}, auxiliary space least significant.
Mat hubbard_monodromy(const HubbardParams& p, cplx lambda);
Mat hubbard_transfer(const HubbardParams& p, cplx lambda);
// R_{n,n−1}…R_{n,1} K_n R_{n,N}…R_{n,n+1} at λ = ξ_n, n one-based.
Mat hubbard_transfer_product(const HubbardParams& p, int n);

struct HubbardSovCertificate {
    RowVec source;
    Mat b;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool is_basis = false;
    double min_overlap = 0.0;      // min |⟨t_L|t_R⟩| over eigenpairs of T at a probe
    double min_gap = 0.0;          // smallest eigenvalue spacing of T at the probe
};

inline constexpr long kMaxHubbardDim = 256;

// ⟨S| = ⊗_a (x,y,z,w) W_K⁻¹ with K = W_K K_J W_K⁻¹ (W_K = I for family 1).
RowVec hubbard_source(const HubbardParams& p, const std::vector<cplx>& xyzw);
HubbardSovCertificate hubbard_sov_rank(const HubbardParams& p, const std::vector<cplx>& xyzw);

}  // namespace sovlab

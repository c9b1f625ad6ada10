#pragma once

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "sovlab/spin_chain.hpp"

namespace sovlab {

enum class ProjectorKind { plus, minus };
enum class TowerKind { column, row };

// Graded (anti)symmetrizer on `level` sites, from the R-matrix recursion.
DenseOperator projector(const GradingSignature& sig, int level, ProjectorKind kind);

// Asymptotic constants from the supertrace power sums p_m = str K^m:
// column T∞,n = h_n, row T∞,(n) = e_n.
std::vector<cplx> asymptotic_constants(const TwistMatrix& k, int n_max, TowerKind kind);

// Asymptotic constants computed from str P K^{⊗n} P directly.
cplx asymptotic_constant_projector(const TwistMatrix& k, int n, TowerKind kind);

bool in_extended_fat_hook(const GradingSignature& sig, int a, int b);

// Z_b^(a)(λ) = Π_n (λ−ξ_n)^{−1} Π_{l≤b, m≤a} (λ − ξ_n + η(l − m)).
cplx central_zeros(int a, int b, cplx lambda, const ChainParams& p);

// Cached fused transfer matrices. T_n = column(n) = T_n^(1); T_(n) = row(n) = T_1^(n).
class TransferTower {
public:
    explicit TransferTower(ChainParams p, int window = 6);

    const ChainParams& params() const { return p_; }
    cplx t_inf(int n, TowerKind kind);

    Mat column(int n, cplx lambda) { return interpolate(n, lambda, TowerKind::column); }
    Mat row(int n, cplx lambda) { return interpolate(n, lambda, TowerKind::row); }
    Mat interpolate(int n, cplx lambda, TowerKind kind);

    // T_b^(a)(λ) with the boundary conventions; zero outside the extended fat hook.
    Mat rect(int a, int b, cplx lambda);

    const Mat& t1_at_xi(int a);

private:
    ChainParams p_;
    std::vector<cplx> hinf_, einf_;
    std::vector<Mat> t_xi_;
    std::map<std::tuple<int, int, double, double>, Mat> cache_;
    std::mutex mu_;
};

// Interpolation coefficient f_a^(m)(λ) (column) or g_a^(m)(λ) (row), a 0-based.
cplx interpolation_coefficient(const ChainParams& p, int a, int m, cplx lambda, TowerKind kind);

Mat tower_interpolation(TransferTower& tower, int n, cplx lambda, TowerKind kind);

// Fused transfer matrix through projectors and the fused monodromy. Only pure
// row/column diagrams: a == 1 or b == 1.
Mat fused_transfer_projector(TransferTower& tower, int a, int b, cplx lambda);

// Bazhanov–Reshetikhin determinants; form 1 expands in columns T_n, form 2 in rows T_(n).
// `reverse` multiplies each Leibniz product in the opposite order.
Mat br_determinant(TransferTower& tower, int a, int b, cplx lambda, int form = 1, bool reverse = false);

cplx berezinian_fn(const ChainParams& p, cplx lambda);

// ‖(−1)^N Ber(λ) T_N^(M+1)(λ+η) − T_{N+1}^(M)(λ)‖ relative to max(1, sizes).
double inner_boundary_residual(TransferTower& tower, cplx lambda);

// Characters of the saturated rectangular representations for diagonal g.
cplx saturated_character(const GradingSignature& sig, const std::vector<cplx>& g, int a, int b);
cplx superdeterminant(const GradingSignature& sig, const std::vector<cplx>& g);

// |χ^(M)_{N+k} − (−1)^{kN} sdet^k χ^(M+k)_N| / max(1, |χ|).
double character_relation_residual(const GradingSignature& sig, const std::vector<cplx>& g, int k);

double relative_residual(const Mat& lhs, const Mat& rhs);

}  // namespace sovlab

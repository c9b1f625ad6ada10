#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "sovlab/fusion.hpp"
#include "sovlab/poly.hpp"
#include "sovlab/polysys.hpp"

namespace sovlab {

// Twist eigenvalues of a gl(1|2) chain: k1 on the even line, k2, k3 on the odd block.
struct Gl12Twist {
    cplx k1, k2, k3;
};

Gl12Twist gl12_twist(const ChainParams& p);
bool is_khat(const ChainParams& p, double tol = 1e-14);

// Scalar image of the fusion tower for a candidate x_a = t₁(ξ_a). Works for any
// signature; mirrors TransferTower with T(ξ_a) replaced by x_a.
class ScalarTower {
public:
    ScalarTower(const ChainParams& p, std::vector<cplx> x);

    const std::vector<cplx>& x() const { return x_; }
    cplx t1(cplx lambda) const;
    cplx column(int n, cplx lambda);
    cplx row(int n, cplx lambda);
    cplx rect(int a, int b, cplx lambda);

private:
    cplx interpolate(int n, cplx lambda, TowerKind kind);

    ChainParams p_;
    std::vector<cplx> x_;
    std::vector<cplx> hinf_, einf_;
    std::map<std::tuple<int, int, double, double>, cplx> memo_;
};

cplx t1_poly(const ChainParams& p, const std::vector<cplx>& x, cplx lambda);
cplx scalar_tower(const ChainParams& p, const std::vector<cplx>& x, int n, cplx lambda, TowerKind kind);

// {ξ_a} plus `extra` points at distance ≥ 0.1|η| from every ξ_a + kη, |k| ≤ 3.
std::vector<cplx> sample_points(const ChainParams& p, int extra, std::uint64_t seed = 0xC105E);

// max over samples of |k₂k₃ d t₃ − k₁(t₂ t₂(λ+η) − t₃ t₁(λ+η))| / max(1, |LHS|, |RHS|).
double closure_residual(const ChainParams& p, const std::vector<cplx>& x, const std::vector<cplx>& samples);
// max over samples of |t₃(λ)t₃(λ−η) − t₂(λ)t₄(λ−η)| / max(1, |t₃t₃|, |t₂t₄|).
double null_outboundary_residual(const ChainParams& p, const std::vector<cplx>& x, const std::vector<cplx>& samples);

enum class SpectrumMethod { diag, newton, cubic, homotopy };

const char* to_string(SpectrumMethod m);
SpectrumMethod spectrum_method_from_string(const std::string& s);

struct SpectrumSolution {
    std::vector<cplx> x;
    double closure = 0.0;
    double null_out = 0.0;
    long matched = -1;            // index into the diagonalization list
    double match_distance = -1.0;
    int cluster = -1;
    bool accepted = false;
};

struct SpectrumOptions {
    std::uint64_t seed = 1;
    double tol = 1e-8;            // residual acceptance
    double cluster_tol = 1e-6;
    int starts = 0;               // 0 → 50·3^N
};

struct SpectrumResult {
    SpectrumMethod method = SpectrumMethod::diag;
    std::vector<SpectrumSolution> solutions;   // accepted first
    int candidates = 0;
    int attempts = 0;
    bool complete = false;                     // accepted count == 3^N
    std::vector<cplx> system_points;           // λ where the closure system was imposed
};

// The N-equation system: closure imposed at `points` (newton/homotopy), or the
// cubic system for k₁ = 0.
PolySystem closure_system(const ChainParams& p, const std::vector<cplx>& points);
PolySystem cubic_system(const ChainParams& p);

SpectrumResult solve_spectrum(const ChainParams& p, SpectrumMethod method, const SpectrumOptions& opt = {});

// Assigns every solution its nearest diagonalization eigenvalue (relative distance).
// Returns the worst distance over accepted solutions; infinity if sizes differ.
double match_to_diagonalization(SpectrumResult& r, const std::vector<std::vector<cplx>>& diag);

struct QscData {
    cplx alpha_bar;
    Vec phi;                      // ascending monic coefficients
    std::vector<cplx> roots;
    double residual = 0.0;        // functional equation on 3N+3 probes
    double compat1 = 0.0;         // t₁(ξ_a)t₁(ξ_a+η) − t₂(ξ_a)
    double compat2 = 0.0;         // t₁(ξ_a)t₂(ξ_a+η)
    bool roots_off_xi = true;
};

// α(λ) = −ᾱ d(λ − 2η), ᾱ ∈ {−k₂, −k₃}. The curve
// φ(λ−η)t₂(λ−η) + α(λ)φ(λ)t₁(λ) + α(λ)α(λ+η)φ(λ+η) = 0 reduces at λ = ξ_a to
// α(ξ_a+η)φ(ξ_a+η) = −t₁(ξ_a)φ(ξ_a).
cplx qsc_alpha(const ChainParams& p, cplx alpha_bar, cplx lambda);
QscData qsc_find(const ChainParams& p, const std::vector<cplx>& x, double tol = 1e-8);
double qsc_residual(const ChainParams& p, const std::vector<cplx>& x, const QscData& q, const std::vector<cplx>& probes);
// Entry h = Π_a (−α(ξ_a+η) φ(ξ_a+η))^{h_a} φ^{2−h_a}(ξ_a), proportional to Π_a t₁(ξ_a)^{h_a}.
Vec qsc_wavefunction(const ChainParams& p, const QscData& q);

struct BetheSolution {
    std::vector<cplx> lambda;     // roots of Q₁
    std::vector<cplx> mu;         // roots of Q₂
    double bae1 = 0.0;
    double bae2 = 0.0;
    bool admissible = true;
    bool distinct = true;
    bool clustered = false;       // two roots closer than 1e−6
};

Vec bethe_q1(const BetheSolution& b);
Vec bethe_q2(const BetheSolution& b);
// Residuals of both Bethe equation families, scaled like the functional residuals.
void bethe_residuals(const ChainParams& p, BetheSolution& b);

// Q₁ = Π over nonzero x_a of (λ − ξ_a); Q₂ = φ / Π over zero x_a of (λ − ξ_a − η).
BetheSolution bethe_extract(const ChainParams& p, const std::vector<cplx>& x, const QscData& q, double zero_tol = 1e-8);

// k₁a(λ)Q₁(λ−η)/Q₁(λ) − d(λ)(k₂Q₁(λ−η)Q₂(λ+η)/(Q₁Q₂) + k₃Q₂(λ−η)/Q₂).
cplx naba_t1(const ChainParams& p, const BetheSolution& b, cplx lambda);

// Sector (L, M) = (1, 1): μ = λ₁ + k₂η/(k₂ − k₃) and one degree-N equation in λ₁.
std::vector<BetheSolution> solve_bae_sector11(const ChainParams& p);

struct NabaReport {
    double regularity = 0.0;      // |residue numerator| at λ_j and μ_h
    double asymptotic = 0.0;      // |λ^{−N} t₁ − (k₁ − k₂ − k₃)| at large λ
    double closure = 0.0;
    double null_out = 0.0;
    double t2_match = 0.0;
    double t3_match = 0.0;
};

NabaReport naba_checks(const ChainParams& p, const BetheSolution& b, const std::vector<cplx>& samples);

struct IsospectralityReport {
    double t1_mismatch = 0.0;
    double t2_mismatch = 0.0;
};

// gl(1|2) with K̂ at η versus gl(3) with −K̂ at −η, at the given probes.
IsospectralityReport gl3_isospectrality_check(const ChainParams& p, const std::vector<cplx>& probes);

// Closed forms for N = 2, ξ₁ = 0: values (t₁(ξ₂), t₁(0)) and the eigenvalue
// polynomials as ascending coefficients in λ.
struct TwoSiteClosedForm {
    std::vector<std::pair<cplx, cplx>> pairs;
    std::vector<Vec> polynomials;
};
TwoSiteClosedForm two_site_closed_forms(cplx k1, cplx k2, cplx k3, cplx eta, cplx xi2);

}  // namespace sovlab

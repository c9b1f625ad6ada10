#include <array>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "sovlab/hubbard.hpp"

using namespace sovlab;

namespace {

HubbardParams base(int n, int family, cplx eta = cplx(0.7, 0.3)) {
    HubbardParams p;
    p.sites = n;
    p.eta = eta;
    const std::vector<cplx> xi{cplx(0.31, 0.1), cplx(-0.42, 0.05), cplx(0.12, -0.2)};
    p.xi.assign(xi.begin(), xi.begin() + n);
    p.family = family;
    p.alpha = cplx(1.1, 0.2);
    p.beta = cplx(0.7, -0.4);
    p.gamma = cplx(-0.5, 0.9);
    return p;
}

}  // namespace

TEST_CASE("h function branches") {
    CHECK(h_of(0.0, cplx(0.7, 0.3)) == cplx(0.0));
    CHECK(h_of(cplx(0.4, 0.2), 0.0) == cplx(0.0));
    CHECK(std::abs(h_of(cplx(0.4, 0.2), 0.0, HBranch::shifted) - cplx(0, M_PI / 2)) < 1e-15);
    fx::Rng r(41);
    for (int i = 0; i < 20; ++i) {
        const cplx l = r.c(), e = r.c(2.0);
        for (auto b : {HBranch::principal, HBranch::shifted}) {
            const cplx want = cplx(0, 1) * e / 2.0 * std::sin(2.0 * l);
            CHECK(std::abs(std::sinh(2.0 * h_of(l, e, b)) - want) < 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
    CHECK(std::isfinite(std::abs(hubbard_lambda_fn(cplx(0.3, 0.1), 0.5))));
    CHECK(eta_from_coupling(0.25) == cplx(0, -0.5));
}

TEST_CASE("Shastry R-matrix identities") {
    fx::Rng r(42);
    const auto twist = base(1, 1);
    for (int i = 0; i < 10; ++i) {
        const cplx l = r.c(0.8), m = r.c(0.8), x = r.c(0.8), eta = r.c(1.0);
        const auto rep = shastry_checks(l, m, x, eta, twist);
        CHECK(rep.ybe < 1e-10);
        CHECK(rep.regularity < 1e-12);
        CHECK(rep.lax_left < 1e-12);
        CHECK(rep.lax_right < 1e-12);
        CHECK(rep.unitarity < 1e-10);
        CHECK(rep.crossing_a < 1e-8);
        CHECK(rep.crossing_b < 1e-8);
        for (double s : rep.scalar_ybe) CHECK(s < 1e-10);
    }
}

TEST_CASE("Shastry R-matrix on the shifted branch") {
    fx::Rng r(43);
    for (int i = 0; i < 5; ++i) {
        const cplx l = r.c(0.8), m = r.c(0.8), x = r.c(0.8), eta = r.c(1.0);
        const auto rep = shastry_checks(l, m, x, eta, base(1, 1), HBranch::shifted);
        CHECK(rep.ybe < 1e-10);
        CHECK(rep.regularity < 1e-12);
    }
}

TEST_CASE("free-fermion point factorizes") {
    const cplx l(0.3, 0.2), m(-0.5, 0.1);
    const Mat free = shastry_r(l, m, 0.0);
    Mat r13r24 = Mat::Zero(16, 16);
    // R₁₃R₂₄ acts as xx_r on (s1,s3) and (s2,s4); compare entrywise through the basis labels
    const Mat x = xx_r(l - m);
    for (int src = 0; src < 16; ++src)
        for (int dst = 0; dst < 16; ++dst) {
            auto bits = [](int i) {
                const int a = i % 4, b = i / 4;
                return std::array<int, 4>{a >> 1, a & 1, b >> 1, b & 1};
            };
            const auto s = bits(src), d = bits(dst);
            r13r24(dst, src) = x(2 * d[0] + d[2], 2 * s[0] + s[2]) * x(2 * d[1] + d[3], 2 * s[1] + s[3]);
        }
    CHECK(max_abs(free - r13r24) < 1e-14);

    // asymptotics: e^{−2iλ}R(λ|μ) → (e^{−2iμ}/4)·D₁₃D₂₄ as λ → −i∞, D = diag(1, −i, −i, 1)
    const cplx far(0.2, -40.0);
    const Mat scaled = std::exp(cplx(0, -2) * far) * shastry_r(far, m, 0.0);
    Mat lim = Mat::Zero(16, 16);
    for (int i = 0; i < 16; ++i) {
        const int a = i % 4, b = i / 4;
        const int s1 = a >> 1, s2 = a & 1, s3 = b >> 1, s4 = b & 1;
        const cplx d13 = s1 == s3 ? cplx(1) : cplx(0, -1), d24 = s2 == s4 ? cplx(1) : cplx(0, -1);
        lim(i, i) = std::exp(cplx(0, -2) * m) / 4.0 * d13 * d24;
    }
    CHECK(max_abs(scaled - lim) < 1e-12);
}

TEST_CASE("twist families") {
    for (int a = 1; a <= 4; ++a) {
        const auto p = base(1, a);
        const Mat k = hubbard_twist(p);
        const auto spec = hubbard_twist_spectrum(a, p.alpha, p.beta, p.gamma);
        Eigen::ComplexEigenSolver<Mat> es(k);
        for (const auto& e : spec.eigenvalues) CHECK((es.eigenvalues().array() - e).abs().minCoeff() < 1e-12);
        CHECK(spec.simple == (a != 4));
    }
    CHECK_FALSE(hubbard_twist_spectrum(1, 1.0, 1.0, 2.0).simple);
    CHECK_FALSE(hubbard_twist_spectrum(2, 1.0, 2.0, 0.5).simple);        // βγ = α²
    CHECK_FALSE(hubbard_twist_spectrum(3, 1.0, 0.5, 0.5).simple);        // β = γ
    CHECK_THROWS_AS(hubbard_twist(5, 1.0, 1.0, 1.0), parameter_error);
}

TEST_CASE("Hubbard transfer matrices") {
    for (int a = 1; a <= 4; ++a) {
        const auto p = base(2, a);
        const Mat t1 = hubbard_transfer(p, cplx(0.23, 0.1)), t2 = hubbard_transfer(p, cplx(-0.5, 0.2));
        CHECK(t1.rows() == 16);
        CHECK(max_abs(t1 * t2 - t2 * t1) < 1e-9 * std::max(1.0, max_abs(t1 * t2)));
        for (int n = 1; n <= 2; ++n)
            CHECK(max_abs(hubbard_transfer(p, p.xi[n - 1]) - hubbard_transfer_product(p, n)) < 1e-10);
    }
    const auto p3 = base(3, 2);
    for (int n = 1; n <= 3; ++n)
        CHECK(max_abs(hubbard_transfer(p3, p3.xi[n - 1]) - hubbard_transfer_product(p3, n)) < 1e-9);

    auto bad = base(2, 1);
    bad.xi[1] = bad.xi[0] + M_PI;
    CHECK_THROWS_AS(hubbard_transfer(bad, 0.3), parameter_error);
    bad.xi[1] = -bad.xi[0];
    CHECK_THROWS_AS(hubbard_transfer(bad, 0.3), parameter_error);
}

TEST_CASE("Hubbard SoV certificate") {
    const std::vector<cplx> xyzw{1.3, cplx(0.7, -0.2), cplx(-0.9, 0.4), cplx(0, 0.55)};
    fx::Rng r(44);
    for (int a = 1; a <= 3; ++a)
        for (int n = 1; n <= 2; ++n)
            for (int draw = 0; draw < 3; ++draw) {
                auto p = base(n, a, r.c(1.0));
                p.alpha = r.c(1.5);
                p.beta = r.c(1.5);
                p.gamma = r.c(1.5);
                for (auto& x : p.xi) x = r.c(0.6);
                const auto c = hubbard_sov_rank(p, xyzw);
                INFO("family " << a << " sites " << n);
                CHECK(c.b.rows() == p.hilbert_dim());
                CHECK(c.is_basis);
                CHECK(c.min_overlap > 1e-8);
            }
    const auto p3 = base(3, 3);
    CHECK(hubbard_sov_rank(p3, xyzw).is_basis);

    const auto p4 = base(2, 4);
    CHECK_THROWS_WITH_AS(hubbard_sov_rank(p4, xyzw), doctest::Contains("degenerate"), parameter_error);
    CHECK_THROWS_AS(hubbard_source(p4, xyzw), parameter_error);

    // a vanishing source component kills the certificate for the diagonal family
    const auto p1 = base(1, 1);
    const auto c0 = hubbard_sov_rank(p1, {1.0, 0.0, 1.0, 1.0});
    CHECK_FALSE(c0.is_basis);
}

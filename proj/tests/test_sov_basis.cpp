#include "doctest.h"
#include "fixtures.hpp"
#include "sovlab/sov_basis.hpp"

using namespace sovlab;

TEST_CASE("default source covector") {
    const GradingSignature s12(1, 2);
    const auto p = make_chain(s12, 0.6, {0.1, 0.9}, diagonal_twist(s12, {1.3, -0.4, 0.7}));
    SourceCondition cond;
    const auto s = default_source_covector(p, &cond);
    CHECK(max_abs(s.sites[0] - RowVec::Ones(3)) == 0.0);
    CHECK(cond.holds);
    CHECK(cond.value == cplx(1.0));

    fx::Rng r(3);
    const auto q = fx::gl12_chain(r, 2, false);
    const auto sq = default_source_covector(q, &cond);
    CHECK(cond.holds);
    CHECK(std::abs(cond.value - 1.0) < 1e-12);

    // random one-site states satisfy the condition
    SourceCovector rnd;
    rnd.sites = {r.mat(1, 3), r.mat(1, 3)};
    CHECK(source_condition(rnd, q.twist).holds);

    // kill one rotated component
    SourceCovector bad = sq;
    RowVec rot = RowVec::Ones(3);
    rot(1) = 0.0;
    bad.sites[1] = rot * q.twist.w_inv;
    const auto c2 = source_condition(bad, q.twist);
    CHECK_FALSE(c2.holds);
    CHECK(std::abs(c2.value) < 1e-14);
    CHECK(std::abs(factorized_criterion(bad, q.twist)) < 1e-12);
}

TEST_CASE("factorized criterion") {
    const GradingSignature s12(1, 2);
    const cplx k1(1.3, 0.2), k2(-0.4, 0.5), k3(0.7, -1.1);
    const auto k = diagonal_twist(s12, {k1, k2, k3});
    SourceCovector s;
    s.sites = {RowVec::Ones(3)};
    const cplx vdm = (k2 - k1) * (k3 - k1) * (k3 - k2);
    CHECK(std::abs(factorized_criterion(s, k) - vdm) < 1e-13);
    s.sites = {RowVec::Ones(3), RowVec::Ones(3)};
    CHECK(std::abs(factorized_criterion(s, k) - vdm * vdm) < 1e-12);
    CHECK(std::abs(factorized_criterion(s, diagonal_twist(s12, {k1, k2, k2}))) < 1e-14);
    CHECK_THROWS_AS(factorized_criterion(SourceCovector{}, k), argument_error);
}

TEST_CASE("SoV basis certificate for gl(1|2)") {
    fx::Rng r(21);
    for (int n : {1, 2, 3})
        for (bool khat : {false, true}) {
            const auto p = fx::gl12_chain(r, n, khat);
            const auto basis = build_sov_basis(p, default_source_covector(p));
            CHECK(basis.is_basis);
            CHECK(basis.sigma_min > 1e-8 * basis.sigma_max);
            CHECK(max_abs(basis.b.row(0) - basis.source) == 0.0);
            // recompute random rows directly
            for (int trial = 0; trial < 5; ++trial) {
                const long row = long(r.uniform(0, double(p.hilbert_dim()) - 1e-9));
                RowVec v = basis.source;
                for (int a = 0; a < n; ++a)
                    for (int h = digit_of(row, a, 3); h > 0; --h) v = v * transfer_at_inhomogeneity(p, a + 1).data;
                CHECK(max_abs(v - basis.b.row(row)) < 1e-10 * std::max(1.0, max_abs(v)));
            }
        }
}

TEST_CASE("degenerate twist kills the basis") {
    const GradingSignature s12(1, 2);
    const cplx k1(1.1, 0.3), k2(-0.6, 0.4), k3(0.9, 0.8);
    const std::vector<cplx> xi{0.2, -0.7};
    const auto good = make_chain(s12, 0.7, xi, diagonal_twist(s12, {k1, k2, k3}));
    const auto bad = make_chain(s12, 0.7, xi, diagonal_twist(s12, {k1, k2, k2}));
    const auto bg = build_sov_basis(good, default_source_covector(good));
    const auto bb = build_sov_basis(bad, default_source_covector(bad));
    CHECK(bg.is_basis);
    CHECK_FALSE(bb.is_basis);
    CHECK(bb.det_abs < 1e-10 * bg.det_abs);
}

TEST_CASE("wavefunction") {
    CHECK(max_abs(wavefunction({1.0, 1.0}, 3) - Vec::Ones(9)) == 0.0);
    const Vec w = wavefunction({2.0, 0.0}, 3);
    for (long k = 0; k < 9; ++k) {
        const int h2 = digit_of(k, 1, 3);
        if (h2 >= 1) CHECK(w(k) == cplx(0.0));
        else CHECK(w(k) == std::pow(2.0, digit_of(k, 0, 3)));
    }
}

TEST_CASE("eigenvectors from SoV coordinates") {
    fx::Rng r(99);
    for (bool khat : {false, true}) {
        const auto p = fx::gl12_chain(r, 2, khat);
        const auto basis = build_sov_basis(p, default_source_covector(p));
        REQUIRE(basis.is_basis);
        const auto js = joint_diagonalize(p, cplx(0.37, -0.21));
        CHECK(js.min_gap > 1e-8);
        for (long i = 0; i < p.hilbert_dim(); ++i) {
            const Vec v = js.vectors.col(i);
            const Vec coords = basis.b * v;
            CHECK(projective_distance(coords, wavefunction(js.x[i], 3)) < 1e-7);
            const auto rec = reconstruct_eigenvector(basis, js.x[i]);
            CHECK(rec.residual < 1e-7);
            CHECK(projective_distance(rec.vector, v) < 1e-7);
        }
        // not an eigenvalue
        const auto neg = reconstruct_eigenvector(basis, {r.c(2.0), r.c(2.0)});
        CHECK(neg.residual > 1e-3);

        const Vec ov = left_right_overlaps(transfer(p, cplx(0.37, -0.21)).data);
        CHECK(ov.real().minCoeff() > 1e-6);
    }
}

TEST_CASE("t1 interpolation reproduces the nodes") {
    fx::Rng r(4);
    const auto p = fx::gl12_chain(r, 3, false);
    const std::vector<cplx> x{r.c(), r.c(), r.c()};
    for (int a = 0; a < 3; ++a) CHECK(std::abs(eigenvalue_interpolation(p, x, p.xi[a]) - x[a]) < 1e-12);
    const cplx big(1e4, 3e3);
    const cplx lead = eigenvalue_interpolation(p, {0.0, 0.0, 0.0}, big) / std::pow(big, 3);
    CHECK(std::abs(lead - supertrace(p.sig, p.twist.matrix)) < 1e-3);
}

TEST_CASE("SoV matrix depends only on differences of inhomogeneities") {
    fx::Rng r(8);
    auto p = fx::gl12_chain(r, 2, false);
    const auto b1 = build_sov_basis(p, default_source_covector(p));
    for (auto& x : p.xi) x += cplx(0.8, -0.3);
    const auto b2 = build_sov_basis(p, default_source_covector(p));
    const double q1 = b1.sigma_min / b1.sigma_max, q2 = b2.sigma_min / b2.sigma_max;
    CHECK(std::abs(q1 - q2) < 0.1 * q1);
}

TEST_CASE("SoV guards") {
    fx::Rng r(1);
    const auto big = fx::random_chain(r, GradingSignature(2, 2), 7);
    CHECK_THROWS_AS(build_sov_basis(big, RowVec::Ones(ipow(4, 7))), capacity_error);

    const GradingSignature s12(1, 2);
    const auto deg = make_chain(s12, 0.7, {0.2, -0.7}, diagonal_twist(s12, {1.0, 0.5, 0.5}));
    const auto bb = build_sov_basis(deg, default_source_covector(deg));
    CHECK_THROWS_AS(reconstruct_eigenvector(bb, {1.0, 1.0}), basis_error);

    Mat jordan = Mat::Zero(3, 3);
    jordan(0, 0) = 1.0;
    jordan(1, 1) = jordan(2, 2) = 0.5;
    jordan(1, 2) = 1.0;
    const auto pj = make_chain(s12, 0.7, {0.2}, validate_twist(jordan, s12));
    CHECK_THROWS_AS(default_source_covector(pj), configuration_error);
}

#include "doctest.h"
#include "fixtures.hpp"
#include "sovlab/fusion.hpp"

using namespace sovlab;

namespace {

const GradingSignature s12(1, 2);

long rank_of(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    long r = 0;
    for (long i = 0; i < s.size(); ++i)
        if (s(i) > 1e-9 * s(0)) ++r;
    return r;
}

ChainParams khat_chain(fx::Rng& r, int n) {
    Mat k = Mat::Zero(3, 3);
    k.bottomRightCorner(2, 2) = r.mat(2, 2);
    return make_chain(s12, r.c(0.8), fx::random_xi(r, n), validate_twist(k, s12));
}

}  // namespace

TEST_CASE("projectors") {
    const cplx eta(0.4, -0.3);
    CHECK(max_abs(projector(s12, 1, ProjectorKind::plus).data - Mat::Identity(3, 3)) == 0.0);
    const Mat pm = projector(s12, 2, ProjectorKind::minus).data;
    CHECK(max_abs(pm - (-1.0 / (2.0 * eta)) * r_matrix(s12, eta, -eta, 0.0).data) < 1e-14);
    for (auto sig : {GradingSignature(1, 2), GradingSignature(2, 1), GradingSignature(2, 2)}) {
        for (int a = 2; a <= 4; ++a)
            for (auto kind : {ProjectorKind::plus, ProjectorKind::minus}) {
                const Mat p = projector(sig, a, kind).data;
                CHECK(max_abs(p * p - p) < 1e-10);
            }
        const long d = sig.dim();
        CHECK(rank_of(projector(sig, 2, ProjectorKind::plus).data) + rank_of(projector(sig, 2, ProjectorKind::minus).data) == d * d);
    }
}

TEST_CASE("asymptotic constants") {
    fx::Rng r(31);
    for (auto sig : {GradingSignature(1, 2), GradingSignature(2, 1), GradingSignature(2, 2), GradingSignature(3, 0)}) {
        const auto k = validate_twist(fx::random_block_twist(r, sig), sig);
        for (auto kind : {TowerKind::column, TowerKind::row}) {
            const auto c = asymptotic_constants(k, 4, kind);
            for (int n = 1; n <= 4; ++n) CHECK(std::abs(c[n] - asymptotic_constant_projector(k, n, kind)) < 1e-10);
        }
    }
    const cplx k1(1.3, 0.2), k2(-0.4, 0.9), k3(0.7, -0.6);
    const auto kd = diagonal_twist(s12, {k1, k2, k3});
    const auto c = asymptotic_constants(kd, 6, TowerKind::column);
    for (int n = 2; n <= 6; ++n) CHECK(std::abs(c[n] - std::pow(k1, n - 2) * (k1 - k3) * (k1 - k2)) < 1e-12);
    const cplx strk = k1 - k2 - k3, strk2 = k1 * k1 - k2 * k2 - k3 * k3;
    CHECK(std::abs(c[2] - (strk * strk + strk2) / 2.0) < 1e-12);
}

TEST_CASE("central zeros") {
    fx::Rng r(32);
    auto p = fx::random_chain(r, s12, 2);
    const cplx lam = r.c();
    CHECK(std::abs(central_zeros(1, 2, lam, p) - d_fn(p, lam + p.eta)) < 1e-13);
    CHECK(std::abs(central_zeros(2, 1, lam, p) - d_fn(p, lam - p.eta)) < 1e-13);
    CHECK(central_zeros(1, 1, lam, p) == cplx(1.0));
}

TEST_CASE("interpolation route against projector route") {
    fx::Rng r(33);
    for (int n_sites = 1; n_sites <= 2; ++n_sites) {
        auto p = fx::random_chain(r, s12, n_sites);
        TransferTower tower(p);
        const cplx lam = r.c();
        CHECK(max_abs(tower.column(1, lam) - transfer(p, lam).data) < 1e-13);
        for (int n = 2; n <= 3; ++n) {
            CHECK(relative_residual(tower.column(n, lam), fused_transfer_projector(tower, 1, n, lam)) < 1e-9);
            CHECK(relative_residual(tower.row(n, lam), fused_transfer_projector(tower, n, 1, lam)) < 1e-9);
        }
        // fusion at the inhomogeneities
        for (int a = 0; a < n_sites; ++a) {
            const cplx x = p.xi[a];
            const Mat t1 = transfer(p, x).data;
            CHECK(relative_residual(fused_transfer_projector(tower, 1, 2, x), t1 * transfer(p, x + p.eta).data) < 1e-10);
            CHECK(relative_residual(fused_transfer_projector(tower, 2, 1, x), t1 * transfer(p, x - p.eta).data) < 1e-10);
            for (int n = 1; n <= 3; ++n) {
                CHECK(relative_residual(tower.column(n + 1, x), t1 * tower.column(n, x + p.eta)) < 1e-10);
                CHECK(relative_residual(tower.row(n + 1, x), t1 * tower.row(n, x - p.eta)) < 1e-10);
            }
        }
    }
}

TEST_CASE("interpolation asymptotics") {
    fx::Rng r(34);
    auto p = fx::random_chain(r, s12, 2);
    TransferTower tower(p);
    const cplx big(0.0, 1e4);
    for (int n = 2; n <= 3; ++n) {
        const Mat t = tower.column(n, big) / std::pow(big, 2 * n);
        CHECK(max_abs(t - tower.t_inf(n, TowerKind::column) * Mat::Identity(9, 9)) < 1e-2);
    }
}

TEST_CASE("Khat kills T3") {
    fx::Rng r(35);
    auto p = khat_chain(r, 2);
    TransferTower tower(p);
    for (int t = 0; t < 3; ++t) {
        const cplx lam = r.c();
        CHECK(max_abs(tower.column(3, lam)) < 1e-10);
        CHECK(max_abs(fused_transfer_projector(tower, 1, 3, lam)) < 1e-10);
    }
}

TEST_CASE("Bazhanov-Reshetikhin determinants") {
    fx::Rng r(36);
    auto p = fx::random_chain(r, s12, 2);
    TransferTower tower(p);
    const cplx lam = r.c();
    CHECK(max_abs(br_determinant(tower, 1, 3, lam) - tower.column(3, lam)) < 1e-12);
    const Mat t22 = br_determinant(tower, 2, 2, lam + p.eta);
    const Mat expect = tower.column(2, lam) * tower.column(2, lam + p.eta) - tower.column(1, lam + p.eta) * tower.column(3, lam);
    CHECK(relative_residual(t22, expect) < 1e-12);
    for (auto [a, b] : {std::pair{1, 2}, {2, 1}, {2, 2}, {3, 1}, {1, 3}, {2, 3}, {3, 2}, {3, 3}}) {
        const Mat f1 = br_determinant(tower, a, b, lam, 1);
        CHECK(relative_residual(f1, br_determinant(tower, a, b, lam, 2)) < 1e-9);
        CHECK(relative_residual(f1, br_determinant(tower, a, b, lam, 1, true)) < 1e-12);
    }
    const Mat t23 = br_determinant(tower, 2, 3, lam);
    const double scale = max_abs(tower.column(3, lam)) * max_abs(tower.column(3, lam - p.eta));
    CHECK(max_abs(t23) / scale < 1e-10);
    CHECK(max_abs(tower.rect(2, 3, lam)) == 0.0);
    CHECK_THROWS_AS(tower.rect(0, 0, lam), argument_error);
    CHECK_THROWS_AS(br_determinant(tower, 0, 0, lam), argument_error);
}

TEST_CASE("fusion bilinear identity") {
    fx::Rng r(37);
    for (int n_sites = 1; n_sites <= 2; ++n_sites) {
        auto p = fx::random_chain(r, s12, n_sites);
        TransferTower tower(p);
        const cplx lam = r.c(), e = p.eta;
        for (int a = 1; a <= 4; ++a)
            for (int b = 1; a * b <= 4; ++b) {
                const Mat lhs = tower.rect(a, b, lam - e) * tower.rect(a, b, lam);
                const Mat rhs = tower.rect(a, b + 1, lam - e) * tower.rect(a, b - 1, lam) +
                                tower.rect(a - 1, b, lam - e) * tower.rect(a + 1, b, lam);
                CHECK_MESSAGE(relative_residual(lhs, rhs) < 1e-8, "a=" << a << " b=" << b);
            }
    }
}

TEST_CASE("polynomial structure after removing central zeros") {
    fx::Rng r(38);
    auto p = fx::random_chain(r, s12, 2);
    TransferTower tower(p);
    const int deg = p.sites + 2, npts = deg + 1;
    for (auto [a, b] : {std::pair{1, 2}, {2, 1}, {2, 2}, {1, 3}}) {
        Mat v(npts, npts);
        std::vector<Mat> vals;
        for (int k = 0; k < npts; ++k) {
            const cplx z = 1.3 * std::polar(1.0, 2.0 * M_PI * k / npts + 0.3);
            for (int j = 0; j < npts; ++j) v(k, j) = std::pow(z, j);
            vals.push_back(tower.rect(a, b, z) / central_zeros(a, b, z, p));
        }
        const Mat vinv = v.inverse();
        double top = 0, ref = 0;
        for (int j = 0; j < npts; ++j) {
            Mat c = Mat::Zero(9, 9);
            for (int k = 0; k < npts; ++k) c += vinv(j, k) * vals[k];
            if (j > p.sites) top = std::max(top, max_abs(c));
            else ref = std::max(ref, max_abs(c));
        }
        CHECK_MESSAGE(top / ref < 1e-8, "a=" << a << " b=" << b);
    }
}

TEST_CASE("Berezinian and inner boundary") {
    fx::Rng r(39);
    const cplx k1(1.2, 0.1), k2(-0.3, 0.8), k3(0.6, 0.5);
    auto p1 = make_chain(s12, cplx(0.5, 0.2), {0.0}, diagonal_twist(s12, {k1, k2, k3}));
    const cplx lam(0.7, -0.4);
    CHECK(std::abs(berezinian_fn(p1, lam) - k1 / (k2 * k3 * lam)) < 1e-13);
    auto p2 = fx::random_chain(r, s12, 2, true);
    const cplx kk1 = p2.twist.matrix(0, 0), kk2 = p2.twist.matrix(1, 1), kk3 = p2.twist.matrix(2, 2);
    CHECK(std::abs(berezinian_fn(p2, lam) - kk1 * a_fn(p2, lam) / (kk2 * kk3 * d_fn(p2, lam) * d_fn(p2, lam + p2.eta))) < 1e-12);
    auto p2s = p2;
    std::swap(p2s.xi[0], p2s.xi[1]);
    CHECK(std::abs(berezinian_fn(p2, lam) - berezinian_fn(p2s, lam)) < 1e-13);
    CHECK_THROWS_AS(berezinian_fn(p2, p2.xi[0]), evaluation_error);

    for (int n_sites = 1; n_sites <= 2; ++n_sites) {
        auto p = fx::random_chain(r, s12, n_sites);
        TransferTower tower(p);
        for (int t = 0; t < 5; ++t) CHECK(inner_boundary_residual(tower, r.c()) < 1e-8);
        const cplx l = r.c();
        const Mat lhs = p.twist.matrix.topLeftCorner(1, 1).determinant() * tower.rect(2, 2, l + p.eta);
        const Mat rhs = p.twist.matrix.bottomRightCorner(2, 2).determinant() * d_fn(p, l) * tower.column(3, l);
        CHECK(relative_residual(lhs, rhs) < 1e-8);
    }
    for (auto sig : {GradingSignature(1, 1), GradingSignature(2, 1)}) {
        auto p = fx::random_chain(r, sig, 2);
        TransferTower tower(p);
        CHECK(inner_boundary_residual(tower, r.c()) < 1e-8);
    }
}

TEST_CASE("saturated characters") {
    const cplx x(1.1, 0.2), y1(-0.5, 0.4), y2(0.3, -0.9);
    CHECK(std::abs(saturated_character(s12, {x, y1, y2}, 1, 3) - x * (x - y1) * (x - y2)) < 1e-15);
    CHECK(std::abs(superdeterminant(s12, {x, y1, y2}) - x / (y1 * y2)) < 1e-15);
    fx::Rng r(40);
    for (auto sig : {GradingSignature(1, 2), GradingSignature(2, 1), GradingSignature(2, 2)})
        for (int k = 1; k <= 2; ++k) {
            std::vector<cplx> g;
            for (int i = 0; i < sig.dim(); ++i) g.push_back(r.c());
            CHECK(character_relation_residual(sig, g, k) < 1e-12);
        }
    CHECK_THROWS_AS(saturated_character(s12, {x, y1, y2}, 2, 1), argument_error);
}

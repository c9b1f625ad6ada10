#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "sovlab/poly.hpp"
#include "sovlab/polysys.hpp"

using namespace sovlab;

namespace {

bool contains_root(const std::vector<cplx>& roots, cplx z, double tol) {
    return std::any_of(roots.begin(), roots.end(), [&](cplx r) { return std::abs(r - z) < tol; });
}

}  // namespace

TEST_CASE("polynomial helpers") {
    fx::Rng r(5);
    const std::vector<cplx> roots{r.c(), r.c(), r.c(), r.c()};
    const Vec c = poly_from_roots(roots);
    CHECK(c.size() == 5);
    CHECK(c(4) == cplx(1.0));
    for (const auto& z : roots) CHECK(std::abs(poly_eval(c, z)) < 1e-13);
    const auto found = poly_roots(c);
    REQUIRE(found.size() == 4);
    for (const auto& z : roots) CHECK(contains_root(found, z, 1e-9));

    const Vec a = poly_from_roots({roots[0], roots[1]}), b = poly_from_roots({roots[2], roots[3]});
    CHECK(max_abs(poly_mul(a, b) - c) < 1e-13);
    const auto div = poly_divide(c, a);
    CHECK(max_abs(div.quotient - b) < 1e-12);
    CHECK(div.remainder.cwiseAbs().maxCoeff() < 1e-12);

    Vec padded(7);
    padded << c, 0.0, 1e-20;
    CHECK(poly_trim(padded, 1e-15).size() == 5);
    CHECK(poly_roots(Vec::Constant(1, 2.0)).empty());
    CHECK(min_pairwise_distance({0.0, cplx(3, 4), 1.0}) == doctest::Approx(1.0));
    CHECK(std::isinf(min_pairwise_distance({1.0})));
}

TEST_CASE("stencil jacobian is exact for quartics") {
    fx::Rng r(6);
    const Vec x0 = (Vec(2) << r.c(), r.c()).finished();
    auto f = [](const Vec& x) {
        Vec o(2);
        o << std::pow(x(0), 4) + x(0) * x(1), x(1) * x(1) * x(1) - 2.0 * x(0);
        return o;
    };
    Mat exact(2, 2);
    exact << 4.0 * std::pow(x0(0), 3) + x0(1), x0(0), -2.0, 3.0 * x0(1) * x0(1);
    CHECK(max_abs(jacobian_stencil(f, x0) - exact) < 1e-11);
}

TEST_CASE("Newton and homotopy find every root of a product system") {
    // roots: x ∈ {1, -2, i}, y ∈ {0.5, 3}
    PolySystem sys;
    sys.n = 2;
    sys.degrees = {3, 2};
    sys.f = [](const Vec& x) {
        Vec o(2);
        o << (x(0) - 1.0) * (x(0) + 2.0) * (x(0) - cplx(0, 1)), (x(1) - 0.5) * (x(1) - 3.0);
        return o;
    };
    const auto h = total_degree_homotopy(sys, 11);
    CHECK(h.attempts == 6);
    CHECK(h.roots.size() == 6);
    const auto m = newton_multistart(sys, 120, 4.0, 3);
    CHECK(m.attempts == 120);
    CHECK(m.roots.size() == 6);
    for (const auto& v : h.roots) CHECK(sys.f(v).norm() < 1e-10);

    // deterministic irrespective of thread scheduling
    const auto m2 = newton_multistart(sys, 120, 4.0, 3);
    REQUIRE(m2.roots.size() == m.roots.size());
    for (std::size_t i = 0; i < m.roots.size(); ++i) CHECK((m.roots[i] - m2.roots[i]).norm() == 0.0);
}

TEST_CASE("homotopy with a root at infinity") {
    // x·y = 1, x = 2: one finite root out of two paths
    PolySystem sys;
    sys.n = 2;
    sys.degrees = {2, 1};
    sys.f = [](const Vec& x) {
        Vec o(2);
        o << x(0) * x(1) - 1.0, x(0) - 2.0;
        return o;
    };
    const auto h = total_degree_homotopy(sys, 2);
    REQUIRE(h.roots.size() == 1);
    CHECK(std::abs(h.roots[0](1) - 0.5) < 1e-10);
    CHECK(h.converged + h.diverged == 2);

    sys.degrees = {5, 1};
    CHECK_THROWS_AS(total_degree_homotopy(sys, 1), argument_error);
}

TEST_CASE("cluster and seeds") {
    std::vector<Vec> pts{Vec::Constant(2, 1.0), Vec::Constant(2, 1.0 + 1e-9), Vec::Constant(2, 2.0)};
    CHECK(cluster_points(pts, 1e-6).size() == 2);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    std::vector<int> hit(1000, 0);
    parallel_for(1000, [&](int i) { hit[i] += 1; });
    CHECK(std::all_of(hit.begin(), hit.end(), [](int v) { return v == 1; }));
}

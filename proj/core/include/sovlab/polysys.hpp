#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sovlab/types.hpp"

namespace sovlab {

// Square polynomial system F: C^n → C^n with per-equation total degrees ≤ 4.
struct PolySystem {
    int n = 0;
    std::vector<int> degrees;
    std::function<Vec(const Vec&)> f;
};

// Five-point central differences; exact (up to rounding) for degree ≤ 4.
Mat jacobian_stencil(const std::function<Vec(const Vec&)>& f, const Vec& x);

struct NewtonOutcome {
    Vec x;
    bool converged = false;
    int iterations = 0;
};

NewtonOutcome newton_solve(const PolySystem& sys, Vec x0, int max_iter = 80, double tol = 1e-10);

// Groups points closer than tol·max(1, ‖x‖); returns one representative per cluster.
std::vector<Vec> cluster_points(const std::vector<Vec>& pts, double tol);

struct SolveStats {
    std::vector<Vec> roots;   // clustered, converged endpoints
    int attempts = 0;
    int converged = 0;
    int diverged = 0;
};

// Independent Newton runs from uniform starts in the ball of `radius`; start i is
// seeded from (seed, i) so the result does not depend on the thread schedule.
SolveStats newton_multistart(const PolySystem& sys, int starts, double radius, std::uint64_t seed,
                             double cluster_tol = 1e-6);

// Total-degree homotopy (1−t)γG + tF with G_j = x_j^{d_j} − 1, one path per start
// solution of G, endpoints polished by Newton on F.
SolveStats total_degree_homotopy(const PolySystem& sys, std::uint64_t seed, double cluster_tol = 1e-6);

// Runs fn(i) for i in [0, count) on the available hardware threads.
void parallel_for(int count, const std::function<void(int)>& fn);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace sovlab

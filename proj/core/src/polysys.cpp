#include "sovlab/polysys.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace sovlab {

namespace {

constexpr double kTwoPi = 6.283185307179586;

bool finite_vec(const Vec& v) { return v.allFinite(); }

double rel_norm(const Vec& dx, const Vec& x) { return dx.norm() / std::max(1.0, x.norm()); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 on the combined value
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = std::min(hw, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

Mat jacobian_stencil(const std::function<Vec(const Vec&)>& f, const Vec& x) {
    const long n = x.size();
    Mat j(n, n);
    for (long k = 0; k < n; ++k) {
        const double h = 0.05 * std::max(1.0, std::abs(x(k)));
        Vec xp = x;
        auto at = [&](double s) {
            xp(k) = x(k) + s * h;
            return f(xp);
        };
        const Vec fm2 = at(-2), fm1 = at(-1), fp1 = at(1), fp2 = at(2);
        j.col(k) = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    }
    return j;
}

NewtonOutcome newton_solve(const PolySystem& sys, Vec x, int max_iter, double tol) {
    NewtonOutcome out;
    int polish = 0;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        const Vec fx = sys.f(x);
        if (!finite_vec(fx)) break;
        const Mat j = jacobian_stencil(sys.f, x);
        Eigen::FullPivLU<Mat> lu(j);
        if (lu.rank() < sys.n) break;
        const Vec dx = lu.solve(fx);
        x -= dx;
        if (!finite_vec(x) || x.norm() > 1e12) break;
        if (rel_norm(dx, x) <= tol || polish > 0) {
            if (++polish >= 3) {
                out.converged = true;
                break;
            }
        }
    }
    out.x = x;
    return out;
}

std::vector<Vec> cluster_points(const std::vector<Vec>& pts, double tol) {
    std::vector<Vec> reps;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& r : reps)
            if ((p - r).norm() <= tol * std::max(1.0, r.norm())) {
                dup = true;
                break;
            }
        if (!dup) reps.push_back(p);
    }
    return reps;
}

SolveStats newton_multistart(const PolySystem& sys, int starts, double radius, std::uint64_t seed,
                             double cluster_tol) {
    std::vector<NewtonOutcome> runs(starts);
    parallel_for(starts, [&](int i) {
        std::mt19937_64 gen(derive_seed(seed, std::uint64_t(i)));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Vec x0(sys.n);
        for (int k = 0; k < sys.n; ++k) {
            const double r = radius * std::sqrt(u(gen)), th = kTwoPi * u(gen);
            x0(k) = std::polar(r, th);
        }
        runs[i] = newton_solve(sys, x0);
    });
    SolveStats s;
    s.attempts = starts;
    std::vector<Vec> ok;
    for (const auto& r : runs) {
        if (r.converged) {
            ++s.converged;
            ok.push_back(r.x);
        } else {
            ++s.diverged;
        }
    }
    s.roots = cluster_points(ok, cluster_tol);
    return s;
}

namespace {

struct Homotopy {
    const PolySystem& sys;
    cplx gamma;

    Vec g(const Vec& x) const {
        Vec r(sys.n);
        for (int j = 0; j < sys.n; ++j) r(j) = std::pow(x(j), sys.degrees[j]) - 1.0;
        return r;
    }
    Mat jg(const Vec& x) const {
        Mat r = Mat::Zero(sys.n, sys.n);
        for (int j = 0; j < sys.n; ++j) r(j, j) = double(sys.degrees[j]) * std::pow(x(j), sys.degrees[j] - 1);
        return r;
    }
    Vec h(const Vec& x, double t) const { return (1.0 - t) * gamma * g(x) + t * sys.f(x); }
    Mat hx(const Vec& x, double t) const { return (1.0 - t) * gamma * jg(x) + t * jacobian_stencil(sys.f, x); }
    Vec ht(const Vec& x) const { return sys.f(x) - gamma * g(x); }

    // dx/dt
    bool velocity(const Vec& x, double t, Vec& v) const {
        Eigen::PartialPivLU<Mat> lu(hx(x, t));
        v = -lu.solve(ht(x));
        return finite_vec(v);
    }
};

enum class PathEnd { finished, diverged, failed };

PathEnd track(const Homotopy& hom, Vec& x) {
    double t = 0.0, dt = 0.02;
    int steps = 0;
    while (t < 1.0) {
        if (++steps > 20000 || dt < 1e-12) return PathEnd::failed;
        const double step = std::min(dt, 1.0 - t);
        Vec k1, k2, k3, k4;
        bool ok = hom.velocity(x, t, k1) && hom.velocity(x + 0.5 * step * k1, t + 0.5 * step, k2) &&
                  hom.velocity(x + 0.5 * step * k2, t + 0.5 * step, k3) && hom.velocity(x + step * k3, t + step, k4);
        Vec y;
        int used = 0;
        if (ok) {
            y = x + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            ok = false;
            for (used = 1; used <= 3; ++used) {
                Eigen::PartialPivLU<Mat> lu(hom.hx(y, t + step));
                const Vec dy = lu.solve(hom.h(y, t + step));
                y -= dy;
                if (!finite_vec(y)) break;
                if (rel_norm(dy, y) < 1e-9) {
                    ok = true;
                    break;
                }
            }
        }
        if (!ok) {
            dt *= 0.5;
            continue;
        }
        x = y;
        t += step;
        if (x.norm() > 1e8) return PathEnd::diverged;
        if (used <= 2) dt = std::min(dt * 1.6, 0.1);
    }
    return PathEnd::finished;
}

}  // namespace

SolveStats total_degree_homotopy(const PolySystem& sys, std::uint64_t seed, double cluster_tol) {
    for (int d : sys.degrees)
        if (d < 1 || d > 4) throw argument_error("homotopy supports equation degrees 1..4");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    const Homotopy hom{sys, std::polar(1.0, u(gen))};
    int paths = 1;
    for (int d : sys.degrees) paths *= d;
    std::vector<Vec> ends(paths);
    std::vector<int> status(paths, 0);
    parallel_for(paths, [&](int p) {
        Vec x(sys.n);
        int rest = p;
        for (int j = 0; j < sys.n; ++j) {
            const int k = rest % sys.degrees[j];
            rest /= sys.degrees[j];
            x(j) = std::polar(1.0, kTwoPi * k / sys.degrees[j]);
        }
        const PathEnd e = track(hom, x);
        if (e == PathEnd::finished) {
            const auto pol = newton_solve(sys, x);
            if (pol.converged) {
                ends[p] = pol.x;
                status[p] = 1;
            } else {
                status[p] = 2;
            }
        } else {
            status[p] = e == PathEnd::diverged ? 2 : 3;
        }
    });
    SolveStats s;
    s.attempts = paths;
    std::vector<Vec> ok;
    for (int p = 0; p < paths; ++p) {
        if (status[p] == 1) {
            ++s.converged;
            ok.push_back(ends[p]);
        } else {
            ++s.diverged;
        }
    }
    s.roots = cluster_points(ok, cluster_tol);
    return s;
}

}  // namespace sovlab

#pragma once

#include <random>
#include <vector>

#include "sovlab/spin_chain.hpp"

namespace fx {

using sovlab::cplx;

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    cplx c(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
    sovlab::Mat mat(int n, int m) {
        sovlab::Mat a(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) a(i, j) = c();
        return a;
    }
};

// Block-diagonal even twist with random blocks.
inline sovlab::Mat random_block_twist(Rng& r, const sovlab::GradingSignature& sig) {
    sovlab::Mat k = sovlab::Mat::Zero(sig.dim(), sig.dim());
    if (sig.m) k.topLeftCorner(sig.m, sig.m) = r.mat(sig.m, sig.m);
    if (sig.n) k.bottomRightCorner(sig.n, sig.n) = r.mat(sig.n, sig.n);
    return k;
}

inline std::vector<cplx> random_xi(Rng& r, int n) {
    std::vector<cplx> xi;
    for (int a = 0; a < n; ++a) xi.push_back(r.c(1.0));
    return xi;
}

inline sovlab::ChainParams random_chain(Rng& r, const sovlab::GradingSignature& sig, int n, bool diagonal = false) {
    sovlab::Mat k;
    if (diagonal) {
        k = sovlab::Mat::Zero(sig.dim(), sig.dim());
        for (int i = 0; i < sig.dim(); ++i) k(i, i) = r.c(1.5);
    } else {
        k = random_block_twist(r, sig);
    }
    return sovlab::make_chain(sig, r.c(0.8), random_xi(r, n), sovlab::validate_twist(k, sig));
}

// gl(1|2) chain with twist diag(k1) ⊕ K2; k1 = 0 gives the non-invertible K̂ class.
inline sovlab::ChainParams gl12_chain(Rng& r, int n, bool khat) {
    const sovlab::GradingSignature sig(1, 2);
    sovlab::Mat k = random_block_twist(r, sig);
    if (khat) k(0, 0) = 0.0;
    return sovlab::make_chain(sig, r.c(0.8), random_xi(r, n), sovlab::validate_twist(k, sig));
}

}  // namespace fx

#include "sovlab/graded.hpp"

#include <cmath>

namespace sovlab {

GradingSignature::GradingSignature(int m_, int n_) : m(m_), n(n_) {
    if (m < 0 || n < 0 || m + n < 1) throw argument_error("grading signature needs m,n >= 0 and m+n >= 1");
}

DenseOperator::DenseOperator(Mat m, int d, int s) : data(std::move(m)), local_dim(d), sites(s) {
    const long side = ipow(d, s);
    if (data.rows() != side || data.cols() != side)
        throw argument_error("operator shape does not match d^s");
    if (!data.allFinite()) throw argument_error("operator has non-finite entries");
}

DenseOperator DenseOperator::identity(int d, int s) {
    const long side = ipow(d, s);
    return {Mat::Identity(side, side), d, s};
}

long ipow(long base, int e) {
    long r = 1;
    while (e-- > 0) r *= base;
    return r;
}

MultiIndex MultiIndex::from_linear(long linear, int d, int s) {
    if (linear < 1 || linear > ipow(d, s)) throw argument_error("linear index out of range");
    MultiIndex mi;
    mi.d = d;
    long x = linear - 1;
    for (int a = 0; a < s; ++a) {
        mi.digits.push_back(static_cast<int>(x % d) + 1);
        x /= d;
    }
    return mi;
}

long MultiIndex::linear() const {
    long r = 0;
    for (int a = static_cast<int>(digits.size()) - 1; a >= 0; --a) r = r * d + (digits[a] - 1);
    return r + 1;
}

int state_parity(const GradingSignature& sig, long idx, int sites) {
    const int d = sig.dim();
    int p = 0;
    for (int s = 0; s < sites; ++s) {
        p ^= sig.parity(static_cast<int>(idx % d) + 1);
        idx /= d;
    }
    return p;
}

namespace {

// Parity sum of the digits strictly below zero-based site a.
int parity_below(const GradingSignature& sig, long idx, int a) {
    return state_parity(sig, idx, a);
}

void check_site(int sites, int a) {
    if (a < 1 || a > sites) throw argument_error("site index out of range");
}

}  // namespace

DenseOperator embed_elementary(const GradingSignature& sig, int sites, int a, int i, int j) {
    check_site(sites, a);
    const int d = sig.dim();
    if (i < 1 || i > d || j < 1 || j > d) throw argument_error("elementary index out of range");
    const long side = ipow(d, sites);
    const long stride = ipow(d, a - 1);
    const int op_parity = sig.parity(i) ^ sig.parity(j);
    Mat m = Mat::Zero(side, side);
    for (long k = 0; k < side; ++k) {
        const int ka = digit_of(k, a - 1, d);
        if (ka != j - 1) continue;
        const long target = k + (i - j) * stride;
        const int sgn = (op_parity & parity_below(sig, k, a - 1)) ? -1 : 1;
        m(target, k) = static_cast<double>(sgn);
    }
    return {std::move(m), d, sites};
}

DenseOperator embed_one_site(const GradingSignature& sig, int sites, int a, const Mat& op) {
    check_site(sites, a);
    const int d = sig.dim();
    if (op.rows() != d || op.cols() != d) throw argument_error("one-site operator must be d x d");
    const long side = ipow(d, sites);
    const long stride = ipow(d, a - 1);
    Mat m = Mat::Zero(side, side);
    for (long k = 0; k < side; ++k) {
        const int ka = digit_of(k, a - 1, d);
        const int below = parity_below(sig, k, a - 1);
        for (int i = 0; i < d; ++i) {
            const cplx v = op(i, ka);
            if (v == cplx(0)) continue;
            const int op_parity = sig.parity(i + 1) ^ sig.parity(ka + 1);
            m(k + (i - ka) * stride, k) += (op_parity & below) ? -v : v;
        }
    }
    return {std::move(m), d, sites};
}

DenseOperator graded_permutation(const GradingSignature& sig, int sites, int a, int b) {
    check_site(sites, a);
    check_site(sites, b);
    if (a == b) throw argument_error("graded permutation needs distinct sites");
    const int d = sig.dim();
    const long side = ipow(d, sites);
    Mat p = Mat::Zero(side, side);
    // P_ab = Σ (−1)^{β̄} e^β_α ⊗ e^α_β, built from the audited embedding.
    for (int al = 1; al <= d; ++al)
        for (int be = 1; be <= d; ++be) {
            const Mat term = embed_elementary(sig, sites, a, al, be).data *
                             embed_elementary(sig, sites, b, be, al).data;
            if (sig.parity(be)) p -= term;
            else p += term;
        }
    return {std::move(p), d, sites};
}

cplx supertrace(const GradingSignature& sig, const Mat& op) {
    const int d = sig.dim();
    if (op.rows() != d || op.cols() != d) throw argument_error("supertrace needs a one-site operator");
    cplx s = 0;
    for (int i = 0; i < d; ++i) s += sig.parity(i + 1) ? -op(i, i) : op(i, i);
    return s;
}

DenseOperator partial_supertrace0(const GradingSignature& sig, const DenseOperator& op) {
    const int d = sig.dim();
    if (op.local_dim != d || op.sites < 1) throw argument_error("partial supertrace shape mismatch");
    const int s = op.sites - 1;
    const long side = ipow(d, s);
    Mat out = Mat::Zero(side, side);
    for (long r = 0; r < side; ++r) {
        const int pr = state_parity(sig, r, s);
        for (long c = 0; c < side; ++c) {
            const int pc = state_parity(sig, c, s);
            cplx acc = 0;
            for (int i = 0; i < d; ++i) {
                const int pi = sig.parity(i + 1);
                // str weight, plus the sign from the remaining factor crossing v_i
                const int sgn = pi & (1 ^ pr ^ pc);
                const cplx v = op.data(r * d + i, c * d + i);
                acc += sgn ? -v : v;
            }
            out(r, c) = acc;
        }
    }
    return {std::move(out), d, s};
}

int dual_sign(const GradingSignature& sig, const std::vector<int>& idx) {
    int acc = 0, prefix = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const int p = sig.parity(idx[k]);
        if (k > 0) acc ^= p & prefix;
        prefix ^= p;
    }
    return acc ? -1 : 1;
}

int pairing_sign(const GradingSignature& sig, const std::vector<int>& bra, const std::vector<int>& ket) {
    int acc = 0, prefix = 0;
    for (std::size_t k = 0; k < bra.size(); ++k) {
        acc ^= sig.parity(bra[k]) & prefix;
        prefix ^= sig.parity(ket[k]);
    }
    return acc ? -1 : 1;
}

RowVec dual_covector(const GradingSignature& sig, const std::vector<Vec>& one_site_states) {
    const int d = sig.dim();
    for (const auto& v : one_site_states)
        if (v.size() != d) throw argument_error("one-site state length must equal d");
    const int s = static_cast<int>(one_site_states.size());
    const long side = ipow(d, s);
    RowVec out = RowVec::Zero(side);
    for (long p = 0; p < side; ++p) {
        const auto mi = MultiIndex::from_linear(p + 1, d, s);
        cplx coef = 1;
        for (int a = 0; a < s; ++a) coef *= std::conj(one_site_states[a](mi.digits[a] - 1));
        if (coef == cplx(0)) continue;
        // (|p⟩)† paired with |q⟩: definition sign times the sign of ⟨p_k| crossing
        // |q_1..q_{k−1}⟩. Only q = p survives and the two signs cancel there.
        out(p) += coef * static_cast<double>(dual_sign(sig, mi.digits) * pairing_sign(sig, mi.digits, mi.digits));
    }
    return out;
}

Mat embed_pair_ungraded(const Mat& op, int d, int sites, int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= sites || b >= sites) throw argument_error("pair sites out of range");
    const long side = ipow(d, sites);
    const long sa = ipow(d, a), sb = ipow(d, b);
    Mat m = Mat::Zero(side, side);
    for (long src = 0; src < side; ++src) {
        const int ia = digit_of(src, a, d), ib = digit_of(src, b, d);
        const long base = src - ia * sa - ib * sb;
        for (int ta = 0; ta < d; ++ta)
            for (int tb = 0; tb < d; ++tb) {
                const cplx v = op(ta + d * tb, ia + d * ib);
                if (v == cplx(0)) continue;
                m(base + ta * sa + tb * sb, src) += v;
            }
    }
    return m;
}

}  // namespace sovlab

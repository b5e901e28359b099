#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "qrr/bailey.hpp"
#include "qrr/qfactors.hpp"

using namespace qrr;

namespace {

// Independent oracles: the alpha/beta sequences transcribed term by term from
// their closed forms, using only the already-tested Pochhammer primitives.

const SignedMonomial Q1 = SignedMonomial::q(1);
const SignedMonomial Q2 = SignedMonomial::q(2);
const SignedMonomial MQ = {-1, Rat(1)};  // -q
const SignedMonomial MQQ = {-1, Rat(1)}; // (-q;-q): same first factor, base -q

Series flr(long n, const Rat& N) { return finite_length_reciprocal(Q1, Q1, n, N); }

// beta_n of the four explicit pairs, written out directly
Series beta_oracle(int which, long n, const Rat& N) {
    Rat M = N + 2; // row exponents dip to -1 at most
    Series acc = Series::zero_to(N);
    auto diag = [&](long i, long j, const Rat& e, long t0, long t1) {
        Series term = Series::monomial(1, e).truncated(M);
        term *= flr(2 * i + t0, M);
        term *= flr(2 * j + t1, M);
        acc += term.truncated(N);
    };
    switch (which) {
    case 1:
        for (long i = 0; i <= n; ++i) {
            long d = i - (n - i);
            diag(i, n - i, rat(d * d - d, 2), 0, 0);
        }
        break;
    case 2:
        for (long i = 0; i <= n; ++i) {
            long d = i - (n - i);
            diag(i, n - i, rat(d * d - d, 2), 1, 0);
        }
        acc *= Series::constant(1) - Series::monomial(1, 1);
        break;
    case 3:
        for (long i = 0; i <= n; ++i) {
            long d = i - (n - i);
            diag(i, n - i, rat(d * d + 3 * d, 2), 1, 0);
        }
        acc *= Series::constant(1) - Series::monomial(1, 1);
        break;
    case 4:
        for (long i = 0; i <= n - 1; ++i) {
            long d = i - (n - 1 - i);
            diag(i, n - 1 - i, rat(d * d - d, 2), 1, 1);
        }
        break;
    }
    return acc.truncated(N);
}

// alpha_n of the four explicit pairs
Series alpha_oracle(int which, long n) {
    long k = n / 2;
    switch (which) {
    case 1: // 1; 0; q^{2k^2}(q^k + q^{-k})
        if (n == 0) return Series::one();
        if (n % 2 == 1) return Series::zero();
        return Series::monomial(1, 2 * k * k + k) + Series::monomial(1, 2 * k * k - k);
    case 2: // q^{2k^2-k}; q^{2k^2+5k+3}
        if (n % 2 == 0) return Series::monomial(1, 2 * k * k - k);
        return Series::monomial(1, 2 * k * k + 5 * k + 3);
    case 3: // q^{2k^2+3k}; q^{2k^2+k-1}
        if (n % 2 == 0) return Series::monomial(1, 2 * k * k + 3 * k);
        return Series::monomial(1, 2 * k * k + k - 1);
    case 4: // 0; q^{2k^2+2k+1/2}(q^{k+1/2} + q^{-k-1/2})
        if (n % 2 == 0) return Series::zero();
        return Series::monomial(1, 2 * k * k + 3 * k + 1) + Series::monomial(1, 2 * k * k + k);
    }
    return Series::zero();
}

bool same(const Series& f, const Series& g, const Rat& N) {
    return Series::equal_to_order(f, g, N).equal;
}

Err kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind;
    }
    FAIL("expected an Error");
    return Err::InvalidParams;
}

} // namespace

TEST_CASE("alpha sequences match their case-by-case closed forms") {
    for (int w = 1; w <= 4; ++w) {
        const BaileyPair& p = builtin_pairs()[static_cast<std::size_t>(w - 1)];
        for (long n = 0; n <= 12; ++n)
            CHECK_MESSAGE(same(p.alpha_at(n), alpha_oracle(w, n), 200), p.name, " alpha n=", n);
    }
}

TEST_CASE("beta sequences match their diagonal-sum transcriptions") {
    for (int w = 1; w <= 4; ++w) {
        const BaileyPair& p = builtin_pairs()[static_cast<std::size_t>(w - 1)];
        for (long n = 0; n <= 10; ++n)
            CHECK_MESSAGE(same(p.beta_at(n, 25), beta_oracle(w, n, 25), 25), p.name, " beta n=", n);
    }
}

TEST_CASE("unit pair satisfies the defining convolution") {
    for (const Rat& e : {Rat(0), Rat(1)}) {
        auto rep = check_bailey_pair(unit_pair(SignedMonomial::q(e)), 12, 25);
        CHECK(rep.pass);
        CHECK(rep.first_failure == -1);
    }
}

TEST_CASE("the four explicit pairs satisfy the defining convolution") {
    for (const auto& p : builtin_pairs()) {
        auto rep = check_bailey_pair(p, 20, 30);
        CHECK_MESSAGE(rep.pass, p.name, " first failure at n=", rep.first_failure);
    }
}

TEST_CASE("a corrupted pair is rejected at the first bad index") {
    BaileyPair p = builtin_pairs()[0];
    p.special[0] = {Rat(1)}; // alpha_0 = q instead of 1
    auto rep = check_bailey_pair(p, 8, 20);
    CHECK(!rep.pass);
    CHECK(rep.first_failure == 0);

    p = builtin_pairs()[0];
    p.alpha[0].exps[0].q10 += 1; // first wrong alpha is alpha_2 (k = 1)
    rep = check_bailey_pair(p, 8, 20);
    CHECK(!rep.pass);
    CHECK(rep.first_failure == 2);

    p = builtin_pairs()[0];
    p.exp.q01 += 1; // beta_0 is the empty-offset row and stays correct
    rep = check_bailey_pair(p, 8, 20);
    CHECK(!rep.pass);
    CHECK(rep.first_failure == 1);
}

TEST_CASE("limit identity: unit pairs reduce to the Durfee square expansion") {
    // sum q^{n^2} / (q;q)_n^2 = 1/(q;q)_inf, and the a = q analogue
    auto [l1, r1] = bailey_limit_identity(unit_pair(SignedMonomial::q(0)), 30);
    CHECK(same(l1, r1, 30));
    CHECK(same(r1, poch_infinite(Q1, Q1, 30).invert(), 30));

    auto [l2, r2] = bailey_limit_identity(unit_pair(SignedMonomial::q(1)), 30);
    CHECK(same(l2, r2, 30));
    CHECK(same(r2, poch_infinite(Q2, Q1, 30).invert(), 30));
}

TEST_CASE("limit identity holds for the four explicit pairs") {
    for (const auto& p : builtin_pairs()) {
        auto [lhs, rhs] = bailey_limit_identity(p, 30);
        CHECK_MESSAGE(same(lhs, rhs, 30), p.name);
    }
}

TEST_CASE("pair limits produce the two theta sums over (q;q)_inf") {
    const Rat N = 40;
    Series j1inv = poch_infinite(Q1, Q1, N).invert();
    Series th61 = theta_sum(6, 1, N);
    Series th65 = theta_sum(6, 5, N);
    Series omq = Series::constant(1) - Series::monomial(1, 1);

    auto lhs = [&](int w) { return bailey_limit_identity(builtin_pairs()[w], N).first; };
    CHECK(same(lhs(0), (th61 * j1inv).truncated(N), N));
    CHECK(same(lhs(1), (omq * th61 * j1inv).truncated(N), N));
    CHECK(same(lhs(2), (omq * th65 * j1inv).truncated(N), N));
    CHECK(same(lhs(3), (Series::monomial(1, 1) * th65 * j1inv).truncated(N), N));
}

TEST_CASE("bilateral alternating sums vanish identically") {
    CHECK(vanishing_sum(1, 0, -1, 40).is_zero());
    CHECK(vanishing_sum(3, 1, 1, 40).is_zero());
    CHECK(vanishing_sum(5, 2, 3, 40).is_zero());
    for (long n = 1; n <= 8; ++n)
        for (long t = 0; t <= 3; ++t)
            for (long s = -1; s <= 2 * t + 1; s += 2)
                CHECK_MESSAGE(vanishing_sum(n, t, s, 25).is_zero(), "n=", n, " t=", t, " s=", s);
}

TEST_CASE("bilateral sum parameter validation") {
    CHECK(kind_of([] { vanishing_sum(1, 0, 0, 10); }) == Err::InvalidParams);
    CHECK(kind_of([] { vanishing_sum(2, 1, -3, 10); }) == Err::InvalidParams);
    CHECK(kind_of([] { vanishing_sum(2, 1, 5, 10); }) == Err::InvalidParams);
    CHECK(kind_of([] { vanishing_sum(0, 0, -1, 10); }) == Err::InvalidParams);
    CHECK(kind_of([] { vanishing_sum(2, -1, -1, 10); }) == Err::InvalidParams);
}

TEST_CASE("finite binomial sums collapse to Pochhammer quotients") {
    const Rat N = 300;
    for (long n = 0; n <= 16; ++n) {
        long k = n / 2;
        Series s1 = Series::zero(), s2 = Series::zero(), s3 = Series::zero(), s4 = Series::zero();
        for (long i = 0; i <= n; ++i) {
            s1 += Series::monomial(1, i) * qbinomial(n, i, Q2);
            s2 += Series::monomial(parity_sign(i), 0) * qbinomial(n, i, Q1);
            s3 += Series::monomial(parity_sign(i), i) * qbinomial(n, i, Q1);
            s4 += Series::monomial(parity_sign(i), i) * qbinomial(n, i, Q2);
        }
        // sum q^i [n i]_{q^2} = (-q;q)_n
        CHECK(same(s1, poch_finite(MQ, Q1, n), N));
        // sum (-1)^i [n i] = (q;q)_{2k}/(q^2;q^2)_k for even n, 0 for odd
        if (n % 2 == 0)
            CHECK(same(s2 * poch_finite(Q2, Q2, k), poch_finite(Q1, Q1, 2 * k), N));
        else
            CHECK(s2.is_zero());
        // sum (-1)^i q^i [n i] = (q;q)_{2k}/(q^2;q^2)_k or (q;q)_{2k+1}/(q^2;q^2)_k
        CHECK(same(s3 * poch_finite(Q2, Q2, k), poch_finite(Q1, Q1, n % 2 == 0 ? 2 * k : 2 * k + 1), N));
        // sum (-1)^i q^i [n i]_{q^2} = (q^2;q^2)_n / (-q;-q)_n
        CHECK(same(s4 * poch_finite(MQ, MQQ, n), poch_finite(Q2, Q2, n), N));
    }
}

TEST_CASE("diagonal splittings over q^2 reassemble the single-variable terms") {
    const Rat N = 80;
    for (long n = 0; n <= 12; ++n) {
        Series plain = Series::zero_to(N), sj = Series::zero_to(N), si = Series::zero_to(N);
        for (long i = 0; i <= n; ++i) {
            long j = n - i;
            Rat e = Rat(i) * i + Rat(j) * j - rat(i, 2) + rat(j, 2);
            Series term = Series::monomial(1, e).truncated(N);
            term *= finite_length_reciprocal(Q2, Q2, i, N);
            term *= finite_length_reciprocal(Q2, Q2, j, N);
            plain += term;
            sj += Series::constant(parity_sign(j)) * term;
            si += Series::constant(parity_sign(i)) * term;
        }
        Series half = Series::monomial(1, rat(n * n, 2)).truncated(N);
        // q^{n^2/2}/(q;q)_n splits plainly
        CHECK(same(half * flr(n, N), plain, N));
        // with (-1)^j inside, the left side flips to base -q and gains (-1)^{(n^2-n)/2}
        Series lm = half * finite_length_reciprocal(MQ, MQQ, n, N);
        CHECK(same(Series::constant(parity_sign((n * n - n) / 2)) * lm, sj, N));
        // with (-1)^i inside, the sign becomes (-1)^{(n^2+n)/2}
        CHECK(same(Series::constant(parity_sign((n * n + n) / 2)) * lm, si, N));
    }
}

TEST_CASE("serialization round trip preserves behavior") {
    auto behaves_like = [](const BaileyPair& p, const BaileyPair& q) {
        CHECK(p.name == q.name);
        CHECK(p.a.sign == q.a.sign);
        CHECK(p.a.exp == q.a.exp);
        for (long n = 0; n <= 8; ++n) {
            CHECK(same(p.alpha_at(n), q.alpha_at(n), 100));
            CHECK(same(p.beta_at(n, 15), q.beta_at(n, 15), 15));
        }
    };
    for (const auto& p : builtin_pairs()) behaves_like(p, BaileyPair::from_json(p.to_json()));
    BaileyPair u = unit_pair(SignedMonomial::q(1));
    behaves_like(u, BaileyPair::from_json(u.to_json()));
    CHECK(BaileyPair::from_json(u.to_json()).product_beta);
}

#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

#include "qrr/expr.hpp"

namespace qrr {

// A pair of sequences (alpha_n, beta_n) tied by the discrete convolution
//   beta_n = sum_{r=0}^n alpha_r / ((q;q)_{n-r} (aq;q)_{n+r}).
// alpha is data: per parity class n = 2k + r a list of monomial exponents
// (quadratics in k, all with coefficient +1), valid from k >= start, with
// explicit small-n overrides. beta is either the generic product
// 1/((q;q)_n (aq;q)_n) or a closed diagonal-sum form
//   (1-q)^{pow} sum_{i+j=n+shift} q^{exp(i,j)} / ((q;q)_{2i+t0} (q;q)_{2j+t1}).
struct BaileyPair {
    struct AlphaBranch {
        std::vector<QuadForm> exps; // exponent polynomials in k (k0 slot)
        long start = 0;             // branch applies for k >= start; below: zero
    };

    std::string name;
    SignedMonomial a = SignedMonomial::q(0);
    std::array<AlphaBranch, 2> alpha;          // index = n mod 2
    std::map<long, std::vector<Rat>> special;  // n -> monomial exponents (overrides branch)

    bool product_beta = false;
    int one_minus_q_pow = 0;
    long n_shift = 0;
    QuadForm exp; // exponent in (i, j) for the diagonal-sum form
    long t0 = 0, t1 = 0;

    Series alpha_at(long n) const;              // exact polynomial in q
    Series beta_at(long n, const Rat& N) const; // truncated series

    nlohmann::json to_json() const;
    static BaileyPair from_json(const nlohmann::json& j);
};

// alpha_r = [r == 0], beta_n = 1/((q;q)_n (aq;q)_n).
BaileyPair unit_pair(const SignedMonomial& a);

// The four built-in pairs (two relative to 1, two relative to q) whose
// limits produce the theta sums q^{6n^2+n} and q^{6n^2+5n}.
const std::array<BaileyPair, 4>& builtin_pairs();

struct BaileyReport {
    bool pass = true;
    long first_failure = -1;     // smallest n whose check failed
    Series::Comparison mismatch; // evidence at that n
};

// Check the defining convolution for every n <= n_max, to order N.
BaileyReport check_bailey_pair(const BaileyPair& pair, long n_max, const Rat& N);

// lhs = sum a^n q^{n^2} beta_n, rhs = (aq;q)_inf^{-1} sum a^n q^{n^2} alpha_n,
// both truncated to N; they agree iff the pair property holds in the limit.
std::pair<Series, Series> bailey_limit_identity(const BaileyPair& pair, const Rat& N);

// sum_{i=-n-t}^{n} (-1)^i q^{(i^2+si)/2} / ((q;q)_{n-i} (q;q)_{n+t+i}),
// identically zero for n >= 1, t >= 0 and odd s with -1 <= s <= 2t+1.
Series vanishing_sum(long n, long t, long s, const Rat& N);

} // namespace qrr

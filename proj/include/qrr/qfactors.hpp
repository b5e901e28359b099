#pragma once
#include <map>
#include <vector>

#include "qrr/series.hpp"

namespace qrr {

// s * q^e with s in {+1,-1}.
struct SignedMonomial {
    int sign = 1;
    Rat exp = 0;

    SignedMonomial() = default;
    SignedMonomial(int s, Rat e) : sign(s), exp(std::move(e)) {
        expect(s == 1 || s == -1, Err::InvalidParams, "monomial sign must be +1 or -1");
    }
    static SignedMonomial q(Rat e) { return {1, std::move(e)}; }
    static SignedMonomial mq(Rat e) { return {-1, std::move(e)}; }

    SignedMonomial negated() const { return {-sign, exp}; }
    SignedMonomial times_q(const Rat& e) const { return {sign, exp + e}; }
    Series series() const { return Series::monomial(sign, exp); }
    std::string str() const;

    friend bool operator==(const SignedMonomial&, const SignedMonomial&) = default;
    friend bool operator<(const SignedMonomial& a, const SignedMonomial& b) {
        if (a.exp != b.exp) return a.exp < b.exp;
        return a.sign < b.sign;
    }
};

// (a; base)_n = prod_{k=0}^{n-1} (1 - a*base^k), exact polynomial, n >= 0.
Series poch_finite(const SignedMonomial& a, const SignedMonomial& base, long n);

// (a; base)_inf truncated at order N. Requires a.exp > 0 and base.exp > 0
// with base sign +1 (DivergentProduct otherwise); eval_product is the
// general entry point that normalizes away signed bases and nonpositive
// argument exponents.
Series poch_infinite(const SignedMonomial& a, const SignedMonomial& base, const Rat& N);

// 1/(a; base)_n truncated at order N; n < 0 gives the exact zero series.
Series finite_length_reciprocal(const SignedMonomial& a, const SignedMonomial& base, long n, const Rat& N);

// Gaussian binomial [n m] in the given base, exact polynomial; 0 outside
// 0 <= m <= n.
Series qbinomial(long n, long m, const SignedMonomial& base);

// sum_{n in Z} sign^n q^{a n^2 + b n} truncated at N; a > 0 (DivergentTheta).
Series theta_sum(const Rat& a, const Rat& b, const Rat& N);
Series theta_sum_signed(const Rat& a, const Rat& b, int sign, const Rat& N);

// sum_{n in Z} q^{(n^2-n)/2} z^n, the triple-product sum side.
Series jacobi_triple_lhs(const SignedMonomial& z, const Rat& N);

// (1 - s*q^t)^power, a finite binomial factor.
struct BinFactor {
    SignedMonomial of;
    long power = 1;
    friend bool operator==(const BinFactor&, const BinFactor&) = default;
};

// One infinite Pochhammer factor (arg; base)_inf^power.
struct ProductFactor {
    SignedMonomial arg;
    SignedMonomial base;
    long power = 1;
    friend bool operator==(const ProductFactor&, const ProductFactor&) = default;
};

// constant * q^{monomial_exp} * prod bins * prod factors.
struct ProductSpec {
    Rat constant = 1;
    Rat monomial_exp = 0;
    std::vector<ProductFactor> factors;
    std::vector<BinFactor> bins;

    // Sort factors by (base.exp, base.sign, arg.exp, arg.sign), merge equal
    // keys by adding powers, drop zero powers; same for bins.
    ProductSpec canonicalized() const;

    nlohmann::json to_json() const;
    static ProductSpec from_json(const nlohmann::json& j);
    std::string str() const;
};

// Convenience builders.
ProductSpec product_of(std::vector<ProductFactor> factors);
// J_m = (q^m;q^m)_inf and J_{a,m} = (q^a, q^{m-a}, q^m; q^m)_inf.
void append_J(ProductSpec& p, const Rat& m, long power);
void append_J(ProductSpec& p, const Rat& a, const Rat& m, long power);

// Fully normalized view used for evaluation, eta weights and structural
// comparison. All bases are positive q-powers and all argument exponents are
// positive; binomials peeled along the way land in `bins`, their monomial and
// constant parts in `constant`/`monomial_exp`. `zero` marks a (1 - q^0)
// factor, which annihilates the whole product.
struct FlatProduct {
    bool zero = false;
    Rat constant = 1;
    Rat monomial_exp = 0;
    std::vector<BinFactor> bins;
    std::vector<ProductFactor> factors; // arg.exp > 0, base = +q^m, m > 0
};
FlatProduct flatten_product(const ProductSpec& spec);

// Positive form: additionally rewrites (-q^c;q^m) = (q^{2c};q^{2m})/(q^c;q^m)
// and reduces argument exponents into (0, m] by moving binomials out, so the
// factor content is a multiset of (q^c;q^m) with 0 < c <= m. Exponents are
// rescaled to a common integer lattice x = q^{1/denom}.
struct PositiveForm {
    bool zero = false;
    Rat constant = 1;
    Rat monomial_exp = 0;              // in q-units
    long denom = 1;                    // x = q^{1/denom}
    std::map<std::pair<long, long>, long> classes; // (c, m) in x-units -> power
    std::vector<BinFactor> bins;       // exponents in q-units
};
PositiveForm positive_form(const ProductSpec& spec);

// Structural equality of two products: equal positive forms after refining
// all factor classes to a common modulus.
bool products_structurally_equal(const ProductSpec& a, const ProductSpec& b);

// Evaluate the product to order N (exact coefficients up to and including N).
Series eval_product(const ProductSpec& spec, const Rat& N);

} // namespace qrr

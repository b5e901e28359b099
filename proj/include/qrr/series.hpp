#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrr/rat.hpp"

namespace qrr {

// Truncated Laurent-Puiseux series with exact rational coefficients.
//
// A value represents  sum_k coeffs[k] * q^{(lo+k)/denom}  together with a
// truncation bound `order`: coefficients at exponents <= order are exact,
// coefficients beyond it are unknown (NOT zero). `order` = nullopt means the
// series is exact at every exponent (finite support). All operations
// propagate the bound pessimistically, and reading past it is an error, so
// precision loss is never silent.
class Series {
  public:
    using Order = std::optional<Rat>; // nullopt = +infinity

    Series() = default; // exact zero

    static Series zero() { return {}; }
    static Series zero_to(const Rat& order);
    static Series constant(const Rat& c);
    // c * q^e, exact.
    static Series monomial(const Rat& c, const Rat& e);
    // one = constant(1)
    static Series one() { return constant(1); }

    // Raw constructor; coeffs[k] is the coefficient of q^{(lo+k)/denom}.
    static Series from_parts(long denom, long lo, std::vector<Rat> coeffs, Order order);

    bool is_zero() const { return coeffs_.empty(); }
    long denom() const { return denom_; }
    long lo() const { return lo_; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    const Order& order() const { return order_; }

    // Exponent of the lowest stored (nonzero) term; nullopt when none.
    std::optional<Rat> min_exp() const;

    // Coefficient of q^e. Exponents off the lattice or unstored (but within
    // the tracked range) give 0; e past the order raises OrderExceeded.
    Rat coefficient_at(const Rat& e) const;

    // Restrict the tracked range to exponents <= n.
    Series truncated(const Rat& n) const;

    Series operator-() const;
    Series scaled(const Rat& c) const;
    friend Series operator+(const Series& f, const Series& g);
    friend Series operator-(const Series& f, const Series& g);
    friend Series operator*(const Series& f, const Series& g);
    Series& operator+=(const Series& g);
    Series& operator-=(const Series& g);
    Series& operator*=(const Series& g);

    // Multiplicative inverse. Requires a nonzero lowest coefficient
    // (NotInvertible otherwise). An exact series must be a monomial, since
    // anything else has an infinite expansion; truncate first (OrderExceeded).
    Series invert() const;

    // f^e for integer e; negative e goes through invert().
    Series pow(long e) const;

    // q -> q^k with k > 0 (InvalidSubstitution otherwise). Exponents and the
    // order bound are scaled by k.
    Series substitute_q_power(const Rat& k) const;

    // x -> -x on the exponent lattice x = q^{1/denom}: the coefficient at
    // lattice index m picks up (-1)^m. An involution.
    Series flip_base_sign() const;

    struct Comparison {
        bool equal = true;
        // Valid when !equal: first differing exponent and both coefficients.
        Rat exp, lhs, rhs;
    };
    // Compare coefficients at every exponent <= n. Raises OrderExceeded if
    // either side's tracked order is below n.
    static Comparison equal_to_order(const Series& f, const Series& g, const Rat& n);

    nlohmann::json to_json() const;
    static Series from_json(const nlohmann::json& j);

    // Human-readable rendering, e.g. "1 + q - 2*q^(3/2) + O(q^41)".
    std::string str(std::size_t max_terms = 24) const;

  private:
    long denom_ = 1;
    long lo_ = 0;
    std::vector<Rat> coeffs_;
    Order order_{}; // nullopt = exact

    // Canonical form: no zero coefficients at either end, minimal denom_,
    // nothing stored past order_, zero series has denom_=1, lo_=0.
    void normalize();

    friend class SeriesTestPeek;
};

// sum_i c_i * f_i. Empty input gives the exact zero series.
Series linear_combine(const std::vector<std::pair<Rat, Series>>& terms);

// min of two order bounds (nullopt = +infinity).
Series::Order order_min(const Series::Order& a, const Series::Order& b);

} // namespace qrr

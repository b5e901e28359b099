#pragma once
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qrr/qfactors.hpp"

namespace qrr {

// Named parameter values substituted into expressions: either a rational
// scalar (usable inside exponents and polynomial coefficients) or a signed
// q-monomial (usable wherever a Pochhammer argument or binomial atom goes).
using ParamValue = std::variant<Rat, SignedMonomial>;
using ParamEnv = std::map<std::string, ParamValue>;

// Sparse polynomial in at most two variables with rational coefficients;
// key = (exponent of var 0, exponent of var 1).
using Poly = std::map<std::pair<int, int>, Rat>;

// Parse a polynomial expression over the given variables. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := '-'* atom ('^' atom)?
//   atom   := rational-literal | identifier | '(' expr ')'
// Rational literals look like 7, -3, 1/2. Identifiers are either summation
// variables or rational-valued parameters from `env`. Exponents after '^'
// must evaluate to nonnegative integer constants. Raises ParseError.
Poly parse_poly(const std::string& src, const std::vector<std::string>& vars, const ParamEnv& env);

// Parse an expression that must reduce to +/- q^e: products and powers of q,
// monomial-valued parameters and rational literals; exponents may use
// rational parameters. The overall rational coefficient must be +1 or -1.
SignedMonomial parse_monomial(const std::string& src, const ParamEnv& env);

// Parse a product in Pochhammer notation, e.g.
//   "(-q^5,-q^7,q^12;q^12) / (q;q)"        all-infinite factors
//   "q^(1/2) * (1-q^2)^2 * (q;q^2)^-1"     monomial, binomial, powers
// Grammar: items joined by '*' or '/' (a '(' directly after a group means
// '*'). An item is a rational constant, a +/- q-power monomial, a binomial
// '(1 +/- mono)', or '(arg, ..., arg; base)' of infinite Pochhammers sharing
// one base; each group takes an optional integer '^power'. Raises ParseError.
ProductSpec parse_product(const std::string& src, const ParamEnv& env);

// Degree-filtered views of a parsed polynomial. Both raise ParseError when
// the polynomial has terms the target shape cannot hold.
struct QuadForm {
    // coefficient of k0^2, k0*k1, k1^2, k0, k1, 1
    Rat q20, q11, q02, q10, q01, q00;

    Rat eval(long k0, long k1) const {
        return q20 * k0 * k0 + q11 * k0 * k1 + q02 * k1 * k1 + q10 * k0 + q01 * k1 + q00;
    }
    bool is_zero() const {
        return q20 == 0 && q11 == 0 && q02 == 0 && q10 == 0 && q01 == 0 && q00 == 0;
    }
};
QuadForm quad_of(const Poly& p, const std::string& what);

struct AffineForm {
    long c0 = 0, c1 = 0, c2 = 0; // c0 + c1*k0 + c2*k1, integer coefficients
    long eval(long k0, long k1) const { return c0 + c1 * k0 + c2 * k1; }
};
AffineForm affine_of(const Poly& p, const std::string& what);

} // namespace qrr

#pragma once
#include <gmpxx.h>
#include <string>
#include <optional>

#include "qrr/error.hpp"

namespace qrr {

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator, 0 = 0/1) as long as arithmetic goes through the
// overloaded operators, which it always does here.
using Rat = mpq_class;

inline Rat rat(long n) { return Rat(n); }
inline Rat rat(long n, long d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

// Strict "p" or "p/q" parser (q > 0 after canonicalization). Anything else is
// a ParseError; in particular no whitespace, decimals or exponents.
Rat rat_parse(const std::string& s);

std::string rat_str(const Rat& r);

inline bool rat_is_int(const Rat& r) { return r.get_den() == 1; }

// Integer value of an integral rational that must fit in a long.
long rat_long(const Rat& r);

// floor(r) as a long (r need not be integral).
long rat_floor_long(const Rat& r);

inline int rat_sign(const Rat& r) { return sgn(r); }

// (-1)^n for any (possibly negative) integer n.
inline int parity_sign(long n) { return (n % 2 == 0) ? 1 : -1; }

// c^e for integer e (e < 0 requires c != 0).
Rat rat_pow(const Rat& c, long e);

} // namespace qrr

#pragma once
#include <optional>
#include <utility>

#include "qrr/nahm.hpp"
#include "qrr/qfactors.hpp"

namespace qrr {

// f = c * q^mu * prod_{n>=1} (1 - x^n)^{-e[n-1]} on the lattice x = q^{1/denom}.
struct ExponentProfile {
    Rat c = 1;
    Rat mu = 0;
    long denom = 1;
    std::vector<long> e;

    nlohmann::json to_json() const;
};

// Recover the exponent profile of f, exact to q-order N. The leading
// coefficient and exponent are peeled off first; the remainder (constant
// term 1) determines the lattice and is peeled factor by factor:
// once 1/(1-x^n)^{e_n} is divided out, the coefficient of x^n in what is
// left must vanish, so e_n is forced. NotAProduct when some e_n is not an
// integer, OrderExceeded when f is not tracked to N.
ExponentProfile prodmake(const Series& f, const Rat& N);

// Smallest p <= max_period with e[n] == e[n mod p] for ALL stored n (no
// transient allowed: a single early deviation disqualifies the period).
// Requires at least max_period * min_repeats stored exponents
// (InsufficientOrder). nullopt when no exact period exists.
std::optional<std::pair<long, std::vector<long>>> detect_period(
    const std::vector<long>& e, long max_period, long min_repeats = 3);

// prod_{c=1}^{p} (q^{c/denom}; q^{p/denom})^{-pattern[c-1]}; c = p gives the
// full (q^p;q^p) factor.
ProductSpec pattern_to_product(long period, const std::vector<long>& pattern,
                               long denom = 1);

// {t}^2 - {t} + 1/6, the periodic second Bernoulli polynomial.
Rat periodic_bernoulli2(const Rat& t);

// Completion data of a product: q^{exponent} * P is a weight-`weight`
// eta quotient when P's profile is periodic. Each positive-form class
// (q^c;q^m)^e on x = q^{1/D} contributes e*(m/4)*P2(c/m) to the exponent
// (summed, then divided by D to land in q-units) and, when c = m, e/2 to
// the weight. Binomial factors are neutral: (1-q^t) = (q^t;q^m)/(q^{t+m};q^m)
// and P2 is 1-periodic, so any splitting cancels.
struct EtaWeight {
    Rat exponent = 0;
    Rat weight = 0;
};
EtaWeight eta_weight(const ProductSpec& p);
Rat eta_weight_exponent(const ProductSpec& p);

// The constant C making q^C * f_{A,B,0,v+L} the completed eta quotient:
// with eval_nahm(spec) = q^delta * eval_product(product) (verified to order
// N; NotAnIdentity otherwise), C = eta exponent - product monomial - delta.
Rat required_C(const NahmSpec& spec, const ProductSpec& product, const Rat& N);

// A grid point whose partial Nahm sum has an exactly periodic profile.
// product carries the leading coefficient; eval_nahm(spec) =
// q^{delta} * eval_product(product) to the analyzed order.
struct Candidate {
    NahmSpec spec;
    ProductSpec product;
    Rat required_C = 0;
    long orders_matched = 0;

    nlohmann::json to_json() const;
};

// Cartesian search space: every (matrix, linear, coset) triple is tried.
struct SearchGrid {
    std::vector<std::vector<std::vector<Rat>>> matrices; // symmetric A
    std::vector<std::vector<Rat>> linear;                // B
    std::vector<LatticeCoset> cosets;                    // v + L

    static SearchGrid from_json(const nlohmann::json& j);
};

// Evaluate every grid point to order N and keep those whose profile is
// exactly periodic with period <= max_period. Divergent, vanishing and
// too-short points are skipped (a note lands in *skipped when given);
// aperiodic points are skipped silently. Results follow grid order
// (matrices outer, then linear, then cosets) for any job count.
std::vector<Candidate> search_quadruples(const SearchGrid& grid, const Rat& N,
                                         long max_period, int jobs = 1,
                                         std::vector<std::string>* skipped = nullptr);

} // namespace qrr

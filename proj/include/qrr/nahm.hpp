#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qrr/expr.hpp"

namespace qrr {

// Q(n) = 1/2 n^T A n + B.n + C with A symmetric rational, rank 1 or 2.
struct QuadExpr {
    int rank = 2;
    std::vector<std::vector<Rat>> A; // rank x rank, symmetric
    std::vector<Rat> B;
    Rat C = 0;

    Rat eval(const std::vector<long>& n) const;
    void validate() const;

    nlohmann::json to_json() const;
    static QuadExpr from_json(const nlohmann::json& j);
};

// v + L where L is spanned by a diagonal integer basis. Only diagonal bases
// are supported (every coset in scope is a product of arithmetic
// progressions); anything else raises InvalidParams. The shift is reduced so
// 0 <= shift[t] < diag[t].
struct LatticeCoset {
    int rank = 2;
    std::vector<long> diag;  // d_t >= 1
    std::vector<long> shift; // v_t

    void validate();
    static LatticeCoset full(int rank);

    nlohmann::json to_json() const;
    static LatticeCoset from_json(const nlohmann::json& j);
};

struct NahmSpec {
    QuadExpr quad;
    LatticeCoset coset;

    nlohmann::json to_json() const;
    static NahmSpec from_json(const nlohmann::json& j);
    std::string str() const;
};

// One Pochhammer factor (arg; base)_{len(k)} of a structured sum; len is an
// affine integer form in the summation indices.
struct PochFactorSpec {
    SignedMonomial arg, base;
    AffineForm len;
};

// A structured q-hypergeometric sum over k in Z_{>=0}^rank:
//   sum (-1)^{sign(k)} q^{quad(k)} prod num_i(k) / prod den_i(k).
struct SumSpec {
    int rank = 2;
    QuadForm quad;                   // exponent polynomial in k
    QuadForm sign;                   // (-1)^{sign(k)}; all-zero = trivial
    std::vector<PochFactorSpec> num; // numerator arguments need positive exponents
    std::vector<PochFactorSpec> den; // negative lengths make the whole term vanish

    // JSON: {"vars":["i","j"],"exp":"...","sign":"...","mono":[{"base":"u","n":"..."}],
    //        "num":[{"a":"-q","b":"q","n":"n"}],"den":[...]}
    static SumSpec from_json(const nlohmann::json& j, const ParamEnv& env);
};

// Why a structured sum fails the exact convergence screen, if it does.
std::optional<std::string> divergence_reason(const SumSpec& s);

// All k >= 0 with quad(k) <= N, in lexicographic order. DivergentSpec when
// the screen rejects (the support would be infinite).
std::vector<std::array<long, 2>> enumerate_points(const SumSpec& s, const Rat& N);

// Evaluate the sum exactly to order N.
Series eval_sumspec(const SumSpec& s, const Rat& N);

// The structured sum over k >= 0 equivalent to the partial Nahm sum of `ns`
// (n = shift + diag k, one reciprocal (q;q)_{n_t} per coordinate).
SumSpec nahm_to_sum(const NahmSpec& ns);

// Partial Nahm sum f_{A,B,C,v+L}(q) to order N.
Series eval_nahm(const NahmSpec& ns, const Rat& N);

// Support of the partial Nahm sum in original coordinates n, lex order.
std::vector<std::vector<long>> enumerate_support(const NahmSpec& ns, const Rat& N);

// ---------------------------------------------------------------------------
// Parity dissections of F(u,v) = sum q^{a i^2/2 + b ij + c j^2/2} u^i v^j /
// ((q;q)_i (q;q)_j): each target restricts i and/or j to a parity class and
// rewrites the restricted sum as a weighted combination of F(+-q^d, +-q^e)
// with a monomial prefactor.
enum class Parity {
    EvenI,  // (2i, j)
    OddI,   // (2i+1, j)
    EvenJ,  // (i, 2j)
    OddJ,   // (i, 2j+1)
    EvenEven, // (2i, 2j)
    OddEven,  // (2i+1, 2j)
    EvenOdd,  // (2i, 2j+1)
    OddOdd,   // (2i+1, 2j+1)
};
constexpr std::array<Parity, 8> all_parities = {
    Parity::EvenI, Parity::OddI, Parity::EvenJ, Parity::OddJ,
    Parity::EvenEven, Parity::OddEven, Parity::EvenOdd, Parity::OddOdd};
const char* parity_name(Parity p);

struct DissectionParams {
    Rat a, b, c, d, e;
};

struct DissectionIdentity {
    SumSpec lhs;       // the parity-restricted sum
    Rat prefactor_exp; // rhs = q^{prefactor_exp} * sum of weighted F evaluations
    // (weight, sign of u, sign of v) for each F(su q^d, sv q^e) term
    std::vector<std::tuple<Rat, int, int>> combo;
};

DissectionIdentity dissection_transform(const DissectionParams& p, Parity target);

// F(su q^d, sv q^e) as a structured sum.
SumSpec f_series_spec(const DissectionParams& p, int su, int sv);

// Check lhs == rhs of the dissection to order N.
Series::Comparison verify_dissection(const DissectionParams& p, Parity target, const Rat& N);

} // namespace qrr

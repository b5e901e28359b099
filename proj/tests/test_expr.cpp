#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrr/expr.hpp"

using namespace qrr;

namespace {

const std::vector<std::string> N1 = {"n"};
const std::vector<std::string> IJ = {"i", "j"};

Rat coeff(const Poly& p, int a, int b) {
    auto it = p.find({a, b});
    return it == p.end() ? Rat(0) : it->second;
}

} // namespace

TEST_CASE("polynomials in one variable") {
    Poly p = parse_poly("n^2", N1, {});
    CHECK(coeff(p, 2, 0) == 1);
    CHECK(p.size() == 1);

    p = parse_poly("3/2*n^2 + 1/2*n", N1, {});
    CHECK(coeff(p, 2, 0) == rat(3, 2));
    CHECK(coeff(p, 1, 0) == rat(1, 2));

    p = parse_poly("(n+1)^2", N1, {});
    CHECK(coeff(p, 2, 0) == 1);
    CHECK(coeff(p, 1, 0) == 2);
    CHECK(coeff(p, 0, 0) == 1);

    p = parse_poly("-n", N1, {});
    CHECK(coeff(p, 1, 0) == -1);

    p = parse_poly("2^3 - 5/3", N1, {});
    CHECK(coeff(p, 0, 0) == rat(19, 3));

    p = parse_poly("n*(n - 1)", N1, {});
    CHECK(coeff(p, 2, 0) == 1);
    CHECK(coeff(p, 1, 0) == -1);
}

TEST_CASE("polynomials in two variables") {
    Poly p = parse_poly("i*j - 2*i + 7", IJ, {});
    CHECK(coeff(p, 1, 1) == 1);
    CHECK(coeff(p, 1, 0) == -2);
    CHECK(coeff(p, 0, 0) == 7);

    p = parse_poly("1/2*i^2 + 1/2*j^2 - i*j", IJ, {});
    CHECK(coeff(p, 2, 0) == rat(1, 2));
    CHECK(coeff(p, 0, 2) == rat(1, 2));
    CHECK(coeff(p, 1, 1) == -1);
}

TEST_CASE("rational parameters in polynomials") {
    ParamEnv env;
    env["a"] = rat(3, 2);
    Poly p = parse_poly("a*n + a^2", N1, env);
    CHECK(coeff(p, 1, 0) == rat(3, 2));
    CHECK(coeff(p, 0, 0) == rat(9, 4));
}

TEST_CASE("polynomial parse errors") {
    CHECK_THROWS_AS(parse_poly("m", N1, {}), Error);
    CHECK_THROWS_AS(parse_poly("n^n", N1, {}), Error);
    CHECK_THROWS_AS(parse_poly("n^(1/2)", N1, {}), Error);
    CHECK_THROWS_AS(parse_poly("n/2", N1, {}), Error);
    CHECK_THROWS_AS(parse_poly("n +", N1, {}), Error);
    CHECK_THROWS_AS(parse_poly("(n", N1, {}), Error);
    CHECK_THROWS_AS(parse_poly("", N1, {}), Error);
    ParamEnv env;
    env["u"] = SignedMonomial::q(2);
    CHECK_THROWS_AS(parse_poly("u*n", N1, env), Error);
    try {
        parse_poly("m", N1, {});
    } catch (const Error& e) {
        CHECK(e.kind == Err::ParseError);
    }
}

TEST_CASE("signed q-monomials") {
    CHECK(parse_monomial("q", {}) == SignedMonomial::q(1));
    CHECK(parse_monomial("-q^2", {}) == SignedMonomial::mq(2));
    CHECK(parse_monomial("q^(1/2)", {}) == SignedMonomial::q(rat(1, 2)));
    CHECK(parse_monomial("1", {}) == SignedMonomial::q(0));
    CHECK(parse_monomial("-1", {}) == SignedMonomial::mq(0));
    CHECK(parse_monomial("q^2*q^3", {}) == SignedMonomial::q(5));

    ParamEnv env;
    env["u"] = SignedMonomial::mq(rat(3, 2));
    env["a"] = rat(5, 2);
    CHECK(parse_monomial("u", env) == SignedMonomial::mq(rat(3, 2)));
    CHECK(parse_monomial("u^2", env) == SignedMonomial::q(3));
    CHECK(parse_monomial("q*u", env) == SignedMonomial::mq(rat(5, 2)));
    CHECK(parse_monomial("q^a", env) == SignedMonomial::q(rat(5, 2)));
    CHECK(parse_monomial("-u^3", env) == SignedMonomial::q(rat(9, 2)));

    CHECK_THROWS_AS(parse_monomial("2*q", {}), Error);
    CHECK_THROWS_AS(parse_monomial("q + 1", {}), Error);
    CHECK_THROWS_AS(parse_monomial("u^(1/2)", env), Error);
}

TEST_CASE("degree filters") {
    QuadForm f = quad_of(parse_poly("2*i^2 + i*j - 1/2*j^2 + 3*i - j + 4", IJ, {}), "exp");
    CHECK(f.q20 == 2);
    CHECK(f.q11 == 1);
    CHECK(f.q02 == rat(-1, 2));
    CHECK(f.q10 == 3);
    CHECK(f.q01 == -1);
    CHECK(f.q00 == 4);
    CHECK(f.eval(2, 3) == 2 * 4 + 6 - rat(9, 2) + 6 - 3 + 4);
    CHECK_THROWS_AS(quad_of(parse_poly("i^3", IJ, {}), "exp"), Error);
    CHECK_THROWS_AS(quad_of(parse_poly("i^2*j", IJ, {}), "exp"), Error);

    AffineForm a = affine_of(parse_poly("2*i + j + 1", IJ, {}), "len");
    CHECK(a.eval(3, 4) == 11);
    CHECK_THROWS_AS(affine_of(parse_poly("i^2", IJ, {}), "len"), Error);
    CHECK_THROWS_AS(affine_of(parse_poly("1/2*i", IJ, {}), "len"), Error);
}

TEST_CASE("product notation") {
    // structural content: factors/bins/constant/monomial land where expected
    ProductSpec p = parse_product("(-q^5,-q^7,q^12;q^12) / (q;q)", {});
    REQUIRE(p.factors.size() == 4);
    CHECK(p.factors[0].arg == SignedMonomial::mq(5));
    CHECK(p.factors[1].arg == SignedMonomial::mq(7));
    CHECK(p.factors[2].arg == SignedMonomial::q(12));
    CHECK(p.factors[0].base == SignedMonomial::q(12));
    CHECK(p.factors[3].arg == SignedMonomial::q(1));
    CHECK(p.factors[3].power == -1);

    p = parse_product("3/2 * q^(1/2) * (1-q^2)^2 (q;q^2)^-1", {});
    CHECK(p.constant == rat(3, 2));
    CHECK(p.monomial_exp == rat(1, 2));
    REQUIRE(p.bins.size() == 1);
    CHECK(p.bins[0].of == SignedMonomial::q(2));
    CHECK(p.bins[0].power == 2);
    REQUIRE(p.factors.size() == 1);
    CHECK(p.factors[0].power == -1);

    // (1+q^3) stores the negated monomial; dividing by a monomial flips its exponent
    p = parse_product("(1+q^3) / q^2 / 2", {});
    CHECK(p.bins[0].of == SignedMonomial::mq(3));
    CHECK(p.monomial_exp == -2);
    CHECK(p.constant == rat(1, 2));

    // parameters resolve inside arguments and exponents
    ParamEnv env;
    env["u"] = SignedMonomial::mq(2);
    env["a"] = rat(3, 4);
    p = parse_product("(u*q;q^2) * q^(2*a)", env);
    CHECK(p.factors[0].arg == SignedMonomial::mq(3));
    CHECK(p.monomial_exp == rat(3, 2));
    CHECK(p.constant == 1);

    // evaluation sanity: (q;q)/(q;q^2) = (q^2;q^2)
    Series l = eval_product(parse_product("(q;q)/(q;q^2)", {}), 20);
    Series r = eval_product(parse_product("(q^2;q^2)", {}), 20);
    CHECK(Series::equal_to_order(l, r, 20).equal);

    CHECK_THROWS_AS(parse_product("(q;q;q)", {}), Error);
    CHECK_THROWS_AS(parse_product("(2-q)", {}), Error);
    CHECK_THROWS_AS(parse_product("(q;q)^q", {}), Error);
    CHECK_THROWS_AS(parse_product("(q;q", {}), Error);
    CHECK_THROWS_AS(parse_product("0 * (q;q)", {}), Error);
}

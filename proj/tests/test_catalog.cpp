#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "qrr/catalog.hpp"

using namespace qrr;

namespace {

std::string write_tmp(const std::string& name, const std::string& body) {
    std::ofstream out(name);
    out << body;
    return name;
}

template <typename F>
void expect_error(F&& f, Err kind, const std::string& needle) {
    try {
        f();
        FAIL_CHECK("expected failure mentioning '" << needle << "'");
    } catch (const Error& ex) {
        CHECK(ex.kind == kind);
        CHECK(std::string(ex.what()).find(needle) != std::string::npos);
    }
}

// p(n | parts == r mod m for some allowed r): direct table fill, the
// independent count behind the product sides checked below
std::vector<long> residue_partitions(long m, const std::vector<long>& rs, long N) {
    std::vector<long> c(N + 1, 0);
    c[0] = 1;
    for (long p = 1; p <= N; ++p) {
        bool allowed = false;
        for (long r : rs) allowed = allowed || (p % m == r);
        if (!allowed) continue;
        for (long n = p; n <= N; ++n) c[n] += c[n - p];
    }
    return c;
}

const char* kMini = R"js([
 {"id": "mini",
  "lhs": [{"sum": {"vars": ["n"], "exp": "n^2", "den": ["n"]}}],
  "rhs": [{"product": "(q,q^4;q^5)^-1"}]}
])js";

} // namespace

TEST_CASE("id filters use '*' globs") {
    CHECK(matches_filter("s-39", "*"));
    CHECK(matches_filter("s-39", "s-*"));
    CHECK(matches_filter("s-39", "s-39"));
    CHECK(matches_filter("s-31-alt", "*-alt"));
    CHECK(matches_filter("eq3-2", "eq*-2"));
    CHECK_FALSE(matches_filter("eq3-2", "eq3-1"));
    CHECK_FALSE(matches_filter("s-39", "s-3"));
    CHECK_FALSE(matches_filter("s-39", ""));
    CHECK(matches_filter("", "*"));
}

TEST_CASE("loader accepts an empty catalog") {
    auto path = write_tmp("cat_empty.json", "[]");
    CHECK(load_catalog(path).empty());
}

TEST_CASE("loader validates while naming the offending entry") {
    auto dup = write_tmp("cat_dup.json", R"js([
      {"id": "x", "lhs": [{"product": "1"}], "rhs": [{"product": "1"}]},
      {"id": "x", "lhs": [{"product": "1"}], "rhs": [{"product": "1"}]}
    ])js");
    expect_error([&] { load_catalog(dup); }, Err::ParseError, "duplicate entry id 'x'");

    auto bad = write_tmp("cat_badexp.json", R"js([
      {"id": "bad-exp",
       "lhs": [{"sum": {"vars": ["n"], "exp": "n^^2", "den": ["n"]}}],
       "rhs": [{"product": "1"}]}
    ])js");
    expect_error([&] { load_catalog(bad); }, Err::ParseError, "bad-exp");

    // sample bindings belong to parameterized entries only
    auto stray = write_tmp("cat_stray.json", R"js([
      {"id": "stray", "params": [{"z": "q"}],
       "lhs": [{"product": "1"}], "rhs": [{"product": "1"}]}
    ])js");
    expect_error([&] { load_catalog(stray); }, Err::ParseError, "stray");

    auto missing = write_tmp("cat_missing.json", R"js([{"id": "no-sides"}])js");
    expect_error([&] { load_catalog(missing); }, Err::ParseError, "no-sides");
}

TEST_CASE("terms evaluate as coef * q^shift * prefactor * body") {
    auto e = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "t",
       "lhs": [{"coef": "1/2", "shift": "q^(-1)", "prefactor": "(q;q)^-1",
                "sum": {"vars": ["n"], "exp": "n^2", "den": ["n"]}}],
       "rhs": [{"product": "1"}]})js"));
    const Rat N = 15;
    Series got = eval_terms(e.side(true, {}), N);
    SumSpec rr = SumSpec::from_json(nlohmann::json::parse(
                                        R"js({"vars": ["n"], "exp": "n^2", "den": ["n"]})js"),
                                    {});
    Series want = Series::monomial(Rat(1, 2), -1) *
                  eval_product(parse_product("(q;q)^-1", {}), N + 1) * eval_sumspec(rr, N + 1);
    CHECK(Series::equal_to_order(got, want.truncated(N), N).equal);
    // negated shift: the q^-1 offset must surface coefficients below zero
    CHECK(got.coefficient_at(-1) == Rat(1, 2));
}

TEST_CASE("verify_entry: pass, located mismatch, divergence") {
    auto mini = load_catalog(write_tmp("cat_mini.json", kMini));
    REQUIRE(mini.size() == 1);
    auto ok = verify_entry(mini[0], 30);
    CHECK(ok.verdict == Verdict::Pass);
    CHECK(ok.status == "proved");
    CHECK_FALSE(ok.first_mismatch.has_value());

    // wrong modulus on the product side: sides differ first at q^1
    auto bad = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "mini-bad",
       "lhs": [{"sum": {"vars": ["n"], "exp": "n^2", "den": ["n"]}}],
       "rhs": [{"product": "(q^2,q^3;q^5)^-1"}]})js"));
    auto fail = verify_entry(bad, 30);
    CHECK(fail.verdict == Verdict::Fail);
    REQUIRE(fail.first_mismatch.has_value());
    CHECK(*fail.first_mismatch == Rat(1));
    CHECK(fail.detail.find("q^1") != std::string::npos);

    // negative linear growth has unbounded support: flagged, not evaluated
    auto div = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "runaway",
       "lhs": [{"sum": {"vars": ["n"], "exp": "-n", "den": ["n"]}}],
       "rhs": [{"product": "1"}]})js"));
    CHECK(verify_entry(div, 10).verdict == Verdict::Divergent);

    // infinite product with a constant base cannot converge
    auto divp = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "flat-base",
       "lhs": [{"product": "(q;q^0)"}],
       "rhs": [{"product": "1"}]})js"));
    CHECK(verify_entry(divp, 10).verdict == Verdict::Divergent);

    // a q^0 or negative argument peels to a vanishing factor, not a divergence
    auto zarg = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "one-arg",
       "lhs": [{"product": "(q^0;q)"}, {"coef": "-1", "product": "(q^(-1);q)"}],
       "rhs": [{"product": "1"}]})js"));
    auto zr = verify_entry(zarg, 10);
    CHECK(zr.verdict == Verdict::Fail);
    CHECK(*zr.first_mismatch == Rat(0));
}

TEST_CASE("parameterized entries check every sample and report the bad one") {
    auto e = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "euler-bad", "status": "parameterized",
       "params": [{"z": "q"}, {"z": "q^2"}],
       "lhs": [{"sum": {"vars": ["n"], "exp": "0", "den": ["n"],
                        "mono": [{"base": "z", "n": "n"}]}}],
       "rhs": [{"product": "(q;q)^-1"}]})js"));
    auto r = verify_entry(e, 20);
    CHECK(r.verdict == Verdict::Fail);
    CHECK(r.detail.find("z=q^(2)") != std::string::npos); // first sample passes
}

TEST_CASE("report echoes entry status and records mismatch location") {
    auto conj = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "c", "status": "conjecture",
       "lhs": [{"product": "(-q;q)"}],
       "rhs": [{"product": "(q;q^2)^-1"}]})js"));
    auto rep = report_json(verify_all({conj}, 25));
    REQUIRE(rep.size() == 1);
    CHECK(rep[0]["id"] == "c");
    CHECK(rep[0]["status"] == "conjecture"); // never upgraded by a pass
    CHECK(rep[0]["verdict"] == "pass");
    CHECK(rep[0].contains("millis"));

    auto bad = IdentityEntry::from_json(nlohmann::json::parse(R"js(
      {"id": "b", "lhs": [{"product": "(-q;q)"}], "rhs": [{"product": "(q;q)"}]})js"));
    auto rep2 = report_json(verify_all({bad}, 25));
    CHECK(rep2[0]["verdict"] == "fail");
    CHECK(rep2[0]["first_mismatch"] == "1");
    CHECK(rep2[0].contains("detail"));
}

TEST_CASE("shipped catalog loads, is well-formed, and verifies to order 18") {
    auto cat = load_catalog(QRR_CATALOG_PATH);
    long proved = 0, parameterized = 0, conjectures = 0;
    for (const auto& e : cat) {
        if (e.status == EntryStatus::Proved) ++proved;
        if (e.status == EntryStatus::Parameterized) ++parameterized;
        if (e.status == EntryStatus::Conjecture) ++conjectures;
    }
    CHECK(proved >= 85);
    CHECK(parameterized >= 20);
    CHECK(conjectures >= 2);

    for (const auto& r : verify_all(cat, 18, "*", 4)) {
        CHECK_MESSAGE(r.verdict == Verdict::Pass,
                      r.id << " [" << verdict_name(r.verdict) << "] " << r.detail);
    }
}

TEST_CASE("catalog sums match direct partition counts") {
    auto cat = load_catalog(QRR_CATALOG_PATH);
    auto find = [&](const std::string& id) -> const IdentityEntry& {
        for (const auto& e : cat)
            if (e.id == id) return e;
        REQUIRE(false);
        return cat.front();
    };
    const Rat N = 24;

    // partitions into parts = 1, 4 mod 5
    Series rr = eval_terms(find("rr-0").side(true, {}), N);
    auto p5 = residue_partitions(5, {1, 4}, 24);
    for (long n = 0; n <= 24; ++n) CHECK(rr.coefficient_at(n) == Rat(p5[n]));

    // partitions into parts = 2, 3 mod 5
    Series rr1 = eval_terms(find("rr-1").side(true, {}), N);
    auto p5b = residue_partitions(5, {2, 3}, 24);
    for (long n = 0; n <= 24; ++n) CHECK(rr1.coefficient_at(n) == Rat(p5b[n]));

    // distinct parts vs odd parts, through the s-85 sum
    Series dp = eval_terms(find("s-85").side(true, {}), N);
    auto podd = residue_partitions(2, {1}, 24);
    for (long n = 0; n <= 24; ++n) CHECK(dp.coefficient_at(n) == Rat(podd[n]));
}

#include "qrr/bailey.hpp"

#include <algorithm>

namespace qrr {

namespace {

// Reciprocals 1/(a;b)_len truncated at a fixed order, grown on demand.
class RecipCache {
public:
    RecipCache(SignedMonomial a, SignedMonomial base, Rat order)
        : a_(std::move(a)), base_(std::move(base)), order_(std::move(order)) {
        poch_.push_back(Series::one().truncated(order_));
    }

    // invariant: poch_.size() == recip_.size() + 1, poch_[k] = (a;b)_k
    const Series& at(long len) {
        expect(len >= 0, Err::InvalidParams, "factor length must be >= 0");
        while (static_cast<long>(recip_.size()) <= len) {
            std::size_t k = recip_.size();
            int s = a_.sign * (base_.sign == -1 && k % 2 != 0 ? -1 : 1);
            Series atom = Series::constant(1) - Series::monomial(s, a_.exp + k * base_.exp);
            Series next = (poch_.back() * atom).truncated(order_);
            expect(!poch_[k].is_zero(), Err::NotInvertible, "finite Pochhammer vanishes identically");
            recip_.push_back(poch_[k].invert().truncated(order_));
            poch_.push_back(std::move(next));
        }
        return recip_[static_cast<std::size_t>(len)];
    }

private:
    SignedMonomial a_, base_;
    Rat order_;
    std::vector<Series> poch_;
    std::vector<Series> recip_;
};

QuadForm quad_k(Rat a2, Rat a1, Rat a0) {
    QuadForm f;
    f.q20 = std::move(a2);
    f.q10 = std::move(a1);
    f.q00 = std::move(a0);
    return f;
}

QuadForm quad_diag(Rat aii, Rat aij, Rat ajj, Rat ai, Rat aj) {
    QuadForm f;
    f.q20 = std::move(aii);
    f.q11 = std::move(aij);
    f.q02 = std::move(ajj);
    f.q10 = std::move(ai);
    f.q01 = std::move(aj);
    return f;
}

// Exact minimum of f(k, 0) over integers k >= start; the branch must grow.
Rat branch_min(const QuadForm& f, long start) {
    if (f.q20 == 0) {
        expect(f.q10 >= 0, Err::InvalidParams, "alpha exponents unbounded below");
        return f.eval(start, 0);
    }
    expect(f.q20 > 0, Err::InvalidParams, "alpha exponents unbounded below");
    Rat vertex = -f.q10 / (2 * f.q20);
    long lo = std::max(start, rat_floor_long(vertex));
    Rat best = f.eval(std::max(start, lo), 0);
    if (Rat v = f.eval(std::max(start, lo + 1), 0); v < best) best = v;
    return best;
}

// smallest exponent any alpha_n can produce (0 if none dip below)
Rat alpha_floor(const BaileyPair& p) {
    Rat lo = 0;
    for (const auto& [n, exps] : p.special)
        for (const auto& e : exps)
            if (e < lo) lo = e;
    for (const auto& br : p.alpha)
        for (const auto& f : br.exps)
            if (Rat v = branch_min(f, br.start); v < lo) lo = v;
    return lo;
}

// smallest exponent on the diagonal row i + j = m of the beta form
Rat beta_row_min(const BaileyPair& p, long m) {
    if (p.product_beta || m < 0) return 0;
    Rat lo = p.exp.eval(0, m);
    for (long i = 1; i <= m; ++i)
        if (Rat v = p.exp.eval(i, m - i); v < lo) lo = v;
    if (lo > 0) lo = 0;
    return lo;
}

nlohmann::json quad_to_json(const QuadForm& f) {
    return {rat_str(f.q20), rat_str(f.q11), rat_str(f.q02),
            rat_str(f.q10), rat_str(f.q01), rat_str(f.q00)};
}

QuadForm quad_from_json(const nlohmann::json& j) {
    expect(j.is_array() && j.size() == 6, Err::ParseError, "quadratic form needs 6 coefficients");
    QuadForm f;
    f.q20 = rat_parse(j[0].get<std::string>());
    f.q11 = rat_parse(j[1].get<std::string>());
    f.q02 = rat_parse(j[2].get<std::string>());
    f.q10 = rat_parse(j[3].get<std::string>());
    f.q01 = rat_parse(j[4].get<std::string>());
    f.q00 = rat_parse(j[5].get<std::string>());
    return f;
}

} // namespace

Series BaileyPair::alpha_at(long n) const {
    expect(n >= 0, Err::InvalidParams, "alpha index must be >= 0");
    if (auto it = special.find(n); it != special.end()) {
        Series acc = Series::zero();
        for (const auto& e : it->second) acc += Series::monomial(1, e);
        return acc;
    }
    long r = n % 2, k = n / 2;
    const auto& br = alpha[static_cast<std::size_t>(r)];
    if (k < br.start) return Series::zero();
    Series acc = Series::zero();
    for (const auto& f : br.exps) acc += Series::monomial(1, f.eval(k, 0));
    return acc;
}

Series BaileyPair::beta_at(long n, const Rat& N) const {
    expect(n >= 0, Err::InvalidParams, "beta index must be >= 0");
    const SignedMonomial q1 = SignedMonomial::q(1);
    if (product_beta) {
        Series f = finite_length_reciprocal(q1, q1, n, N);
        Series g = finite_length_reciprocal(a.times_q(1), q1, n, N);
        return (f * g).truncated(N);
    }
    long m = n + n_shift;
    if (m < 0) return Series::zero_to(N);
    Rat M = N - beta_row_min(*this, m);
    RecipCache rq(q1, q1, M);
    Series acc = Series::zero_to(N);
    for (long i = 0; i <= m; ++i) {
        long j = m - i;
        Series term = Series::monomial(1, exp.eval(i, j)).truncated(M);
        term *= rq.at(2 * i + t0);
        term *= rq.at(2 * j + t1);
        acc += term.truncated(N);
    }
    for (int p = 0; p < one_minus_q_pow; ++p)
        acc *= Series::constant(1) - Series::monomial(1, 1);
    return acc.truncated(N);
}

BaileyPair unit_pair(const SignedMonomial& a) {
    BaileyPair p;
    p.name = "unit";
    p.a = a;
    p.special[0] = {Rat(0)};
    p.product_beta = true;
    return p;
}

const std::array<BaileyPair, 4>& builtin_pairs() {
    static const std::array<BaileyPair, 4> pairs = [] {
        std::array<BaileyPair, 4> ps;

        BaileyPair& p1 = ps[0];
        p1.name = "pair-1";
        p1.a = SignedMonomial::q(0);
        p1.alpha[0].exps = {quad_k(2, 1, 0), quad_k(2, -1, 0)}; // q^{2k^2+k} + q^{2k^2-k}, n = 2k >= 2
        p1.alpha[0].start = 1;
        p1.special[0] = {Rat(0)};
        p1.exp = quad_diag(rat(1, 2), -1, rat(1, 2), rat(-1, 2), rat(1, 2));

        BaileyPair& p2 = ps[1];
        p2.name = "pair-2";
        p2.a = SignedMonomial::q(1);
        p2.alpha[0].exps = {quad_k(2, -1, 0)};
        p2.alpha[1].exps = {quad_k(2, 5, 3)};
        p2.one_minus_q_pow = 1;
        p2.exp = quad_diag(rat(1, 2), -1, rat(1, 2), rat(-1, 2), rat(1, 2));
        p2.t0 = 1;

        BaileyPair& p3 = ps[2];
        p3.name = "pair-3";
        p3.a = SignedMonomial::q(1);
        p3.alpha[0].exps = {quad_k(2, 3, 0)};
        p3.alpha[1].exps = {quad_k(2, 1, -1)};
        p3.one_minus_q_pow = 1;
        p3.exp = quad_diag(rat(1, 2), -1, rat(1, 2), rat(3, 2), rat(-3, 2));
        p3.t0 = 1;

        BaileyPair& p4 = ps[3];
        p4.name = "pair-4";
        p4.a = SignedMonomial::q(0);
        p4.alpha[1].exps = {quad_k(2, 3, 1), quad_k(2, 1, 0)}; // q^{2k^2+2k+1/2} (q^{k+1/2} + q^{-k-1/2})
        p4.n_shift = -1;
        p4.exp = quad_diag(rat(1, 2), -1, rat(1, 2), rat(-1, 2), rat(1, 2));
        p4.t0 = 1;
        p4.t1 = 1;

        return ps;
    }();
    return pairs;
}

BaileyReport check_bailey_pair(const BaileyPair& pair, long n_max, const Rat& N) {
    Rat M = N - alpha_floor(pair);
    const SignedMonomial q1 = SignedMonomial::q(1);
    RecipCache rq(q1, q1, M);
    RecipCache raq(pair.a.times_q(1), q1, M);

    BaileyReport rep;
    for (long n = 0; n <= n_max; ++n) {
        Series rhs = Series::zero_to(N);
        for (long r = 0; r <= n; ++r) {
            Series al = pair.alpha_at(r);
            if (al.is_zero()) continue;
            rhs += (al * rq.at(n - r) * raq.at(n + r)).truncated(N);
        }
        auto cmp = Series::equal_to_order(pair.beta_at(n, N), rhs, N);
        if (!cmp.equal) {
            rep.pass = false;
            rep.first_failure = n;
            rep.mismatch = cmp;
            return rep;
        }
    }
    return rep;
}

std::pair<Series, Series> bailey_limit_identity(const BaileyPair& pair, const Rat& N) {
    expect(pair.a.sign == 1 && pair.a.exp >= 0, Err::InvalidParams,
           "pair base must be a nonnegative power of q");
    const Rat& e = pair.a.exp;
    Rat afloor = alpha_floor(pair);

    Series lhs = Series::zero_to(N);
    Series asum = Series::zero();
    for (long n = 0;; ++n) {
        Rat w = Rat(n) * n + e * n;
        Rat bmin = beta_row_min(pair, n + pair.n_shift);
        if (w + bmin > N && w + afloor > N) break;
        if (w + bmin <= N) lhs += (Series::monomial(1, w) * pair.beta_at(n, N - w)).truncated(N);
        if (w + afloor <= N) asum += Series::monomial(1, w) * pair.alpha_at(n);
    }
    Series rhs =
        (poch_infinite(pair.a.times_q(1), SignedMonomial::q(1), N - afloor).invert() * asum)
            .truncated(N);
    return {lhs, rhs};
}

Series vanishing_sum(long n, long t, long s, const Rat& N) {
    expect(n >= 1, Err::InvalidParams, "need n >= 1");
    expect(t >= 0, Err::InvalidParams, "need t >= 0");
    expect(s % 2 != 0 && -1 <= s && s <= 2 * t + 1, Err::InvalidParams,
           "s must be odd with -1 <= s <= 2t+1");
    Rat lo = 0;
    for (long i = -n - t; i <= n; ++i)
        if (Rat v = rat(i * i + s * i, 2); v < lo) lo = v;
    Rat M = N - lo;
    RecipCache rq(SignedMonomial::q(1), SignedMonomial::q(1), M);
    Series acc = Series::zero_to(N);
    for (long i = -n - t; i <= n; ++i) {
        Series term = Series::monomial(parity_sign(i), rat(i * i + s * i, 2)).truncated(M);
        term *= rq.at(n - i);
        term *= rq.at(n + t + i);
        acc += term.truncated(N);
    }
    return acc;
}

nlohmann::json BaileyPair::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["a"] = a.str();
    for (int r = 0; r < 2; ++r) {
        nlohmann::json br;
        br["start"] = alpha[static_cast<std::size_t>(r)].start;
        br["exps"] = nlohmann::json::array();
        for (const auto& f : alpha[static_cast<std::size_t>(r)].exps)
            br["exps"].push_back(quad_to_json(f));
        j[r == 0 ? "alpha_even" : "alpha_odd"] = std::move(br);
    }
    nlohmann::json sp = nlohmann::json::object();
    for (const auto& [n, exps] : special) {
        nlohmann::json lst = nlohmann::json::array();
        for (const auto& v : exps) lst.push_back(rat_str(v));
        sp[std::to_string(n)] = std::move(lst);
    }
    j["special"] = std::move(sp);
    if (product_beta) {
        j["beta"] = "product";
    } else {
        j["beta"] = {{"one_minus_q_pow", one_minus_q_pow},
                     {"n_shift", n_shift},
                     {"exp", quad_to_json(exp)},
                     {"t0", t0},
                     {"t1", t1}};
    }
    return j;
}

BaileyPair BaileyPair::from_json(const nlohmann::json& j) {
    BaileyPair p;
    p.name = j.value("name", "");
    p.a = parse_monomial(j.at("a").get<std::string>(), {});
    for (int r = 0; r < 2; ++r) {
        const char* key = r == 0 ? "alpha_even" : "alpha_odd";
        if (!j.contains(key)) continue;
        const auto& br = j.at(key);
        auto& out = p.alpha[static_cast<std::size_t>(r)];
        out.start = br.value("start", 0L);
        for (const auto& f : br.at("exps")) out.exps.push_back(quad_from_json(f));
    }
    if (j.contains("special"))
        for (const auto& [key, lst] : j.at("special").items()) {
            std::vector<Rat> exps;
            for (const auto& v : lst) exps.push_back(rat_parse(v.get<std::string>()));
            p.special[std::stol(key)] = std::move(exps);
        }
    const auto& b = j.at("beta");
    if (b.is_string() && b.get<std::string>() == "product") {
        p.product_beta = true;
    } else {
        p.one_minus_q_pow = b.value("one_minus_q_pow", 0);
        p.n_shift = b.value("n_shift", 0L);
        p.exp = quad_from_json(b.at("exp"));
        p.t0 = b.value("t0", 0L);
        p.t1 = b.value("t1", 0L);
    }
    return p;
}

} // namespace qrr

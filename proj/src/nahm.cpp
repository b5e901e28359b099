#include "qrr/nahm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qrr {

namespace {

Rat jrat(const nlohmann::json& j) {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return rat(j.get<long>());
    fail(Err::ParseError, "expected a rational (string or integer)");
}

std::string jmono_src(const nlohmann::json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long>());
    fail(Err::ParseError, "expected an expression string");
}

bool odd(const Rat& v) {
    expect(rat_is_int(v), Err::InvalidParams, "sign exponent must be an integer");
    return v.get_num() % 2 != 0;
}

// Coefficients rescaled from lattice 1/d to 1/(s*d).
std::vector<Rat> upsample(const std::vector<Rat>& c, long stride) {
    if (stride == 1) return c;
    std::vector<Rat> out((c.size() - 1) * stride + 1);
    for (std::size_t k = 0; k < c.size(); ++k) out[k * stride] = c[k];
    return out;
}

// f / (1 - s q^t) to order N, t > 0: r[k] = f[k] + s r[k - t] on the common
// exponent lattice. Linear in the number of slots.
Series mul_geometric(const Series& f, int s, const Rat& t, const Rat& N) {
    Series::Order ord = order_min(f.order(), N);
    if (f.is_zero()) return Series::zero_to(*ord);
    long d = std::lcm(f.denom(), static_cast<long>(t.get_den().get_si()));
    long stride = d / f.denom();
    long lo = f.lo() * stride;
    long td = rat_long(t * d);
    long slots = rat_floor_long(*ord * d) - lo + 1;
    if (slots <= 0) return Series::zero_to(*ord);
    std::vector<Rat> src = upsample(f.coeffs(), stride);
    std::vector<Rat> r(static_cast<std::size_t>(slots));
    for (long k = 0; k < slots; ++k) {
        Rat v = static_cast<std::size_t>(k) < src.size() ? src[k] : Rat(0);
        if (k >= td) v += s * r[k - td];
        r[k] = std::move(v);
    }
    return Series::from_parts(d, lo, std::move(r), ord);
}

// f / (1 - s q^t) to order N for arbitrary t (slow path for t <= 0).
Series divide_binomial(const Series& f, int s, const Rat& t, const Rat& N) {
    if (t > 0) return mul_geometric(f, s, t, N);
    if (t == 0) {
        expect(s != 1, Err::NotInvertible, "factor 1 - q^0 is zero");
        return f.scaled(rat(1, 2)).truncated(N);
    }
    Series atom = Series::constant(1) - Series::monomial(s, t);
    return (f * atom.truncated(N - 2 * t).invert()).truncated(N);
}

struct RowEnvelope {
    // Q(k0, k1) >= h2 k0^2 + h1 k0 + h0 for all k1 >= 0; nondecreasing in k0
    // from `vertex` on.
    Rat h2, h1, h0, vertex;

    Rat at(long i) const { return h2 * i * i + h1 * i + h0; }
};

struct Screen {
    std::optional<std::string> reason; // set iff the sum diverges
    RowEnvelope env;
};

Screen screen_quad(const SumSpec& s) {
    const QuadForm& q = s.quad;
    Screen out;
    auto reject = [&](const char* why) {
        out.reason = why;
        return out;
    };
    const Rat &al = q.q20, &be = q.q11, &ga = q.q02, &de = q.q10, &ep = q.q01;
    auto vertex_of = [](const Rat& h2, const Rat& h1) {
        if (h2 <= 0) return Rat(0);
        Rat v = -h1 / (2 * h2);
        return v > 0 ? v : Rat(0);
    };
    if (s.rank == 1) {
        if (!(al > 0 || (al == 0 && de > 0)))
            return reject("exponent does not grow along the k0 axis");
        out.env = {al, de, q.q00, vertex_of(al, de)};
        return out;
    }
    if (!(al > 0 || (al == 0 && de > 0)))
        return reject("exponent does not grow along the k0 axis");
    if (!(ga > 0 || (ga == 0 && ep > 0)))
        return reject("exponent does not grow along the k1 axis");
    if (be < 0) {
        if (!(al > 0 && ga > 0))
            return reject("negative cross term with a degenerate diagonal");
        Rat disc = be * be - 4 * al * ga;
        if (disc > 0) return reject("exponent is indefinite on the positive orthant");
        if (disc == 0 && !(-be * de + 2 * al * ep > 0))
            return reject("flat direction of the exponent has nonpositive drift");
        Rat h2 = al - be * be / (4 * ga);
        Rat h1 = de - be * ep / (2 * ga);
        Rat h0 = q.q00 - ep * ep / (4 * ga);
        out.env = {h2, h1, h0, vertex_of(h2, h1)};
        return out;
    }
    Rat mj = (ep < 0 && ga > 0) ? Rat(-ep * ep / (4 * ga)) : Rat(0);
    out.env = {al, de, q.q00 + mj, vertex_of(al, de)};
    return out;
}

// Lower bound for the exponent one numerator factor can subtract, valid for
// every length. Rejects shapes whose numerators sink without bound.
Rat numerator_floor(const PochFactorSpec& f) {
    Rat total = 0;
    if (f.arg.exp >= 0 && f.base.exp >= 0) return total;
    expect(f.base.exp > 0, Err::DivergentSpec, "numerator factor exponents are unbounded below");
    for (Rat e = f.arg.exp; e < 0; e += f.base.exp) total += e;
    return total;
}

std::vector<std::array<long, 2>> points_upto(const SumSpec& s, const Screen& sc, const Rat& bound) {
    std::vector<std::array<long, 2>> pts;
    const QuadForm& q = s.quad;
    for (long i = 0;; ++i) {
        if (Rat(i) >= sc.env.vertex && sc.env.at(i) > bound) break;
        if (s.rank == 1) {
            if (q.eval(i, 0) <= bound) pts.push_back({i, 0});
            continue;
        }
        Rat c2 = q.q02, c1 = q.q11 * i + q.q01;
        for (long j = 0;; ++j) {
            Rat v = q.eval(i, j);
            if (v <= bound) {
                pts.push_back({i, j});
            } else if (c2 == 0 || Rat(j) >= -c1 / (2 * c2)) {
                break;
            }
        }
    }
    return pts;
}

// Incrementally extended tables of truncated factor series, one per
// Pochhammer factor: products for numerators, reciprocals for denominators.
class FactorTable {
public:
    FactorTable(PochFactorSpec spec, bool reciprocal, Rat order)
        : spec_(std::move(spec)), recip_(reciprocal), order_(std::move(order)) {
        cache_.push_back(Series::one().truncated(order_));
    }

    const Series& at(long len) {
        while (static_cast<long>(cache_.size()) <= len) {
            long k = static_cast<long>(cache_.size()) - 1;
            int sgn = atom_sign(k);
            Rat e = spec_.arg.exp + k * spec_.base.exp;
            if (recip_) {
                cache_.push_back(divide_binomial(cache_.back(), sgn, e, order_));
            } else {
                Series atom = Series::constant(1) - Series::monomial(sgn, e);
                cache_.push_back((cache_.back() * atom).truncated(order_));
            }
        }
        return cache_[static_cast<std::size_t>(len)];
    }

    const AffineForm& len() const { return spec_.len; }

private:
    int atom_sign(long k) const {
        int s = spec_.arg.sign;
        if (spec_.base.sign == -1 && k % 2 != 0) s = -s;
        return s;
    }

    PochFactorSpec spec_;
    bool recip_;
    Rat order_;
    std::vector<Series> cache_;
};

} // namespace

// ---------------------------------------------------------------------------

Rat QuadExpr::eval(const std::vector<long>& n) const {
    expect(static_cast<int>(n.size()) == rank, Err::InvalidShape, "point size != rank");
    Rat acc = C;
    for (int s = 0; s < rank; ++s) {
        acc += B[static_cast<std::size_t>(s)] * n[static_cast<std::size_t>(s)];
        for (int t = 0; t < rank; ++t)
            acc += A[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] * n[static_cast<std::size_t>(s)] * n[static_cast<std::size_t>(t)] / 2;
    }
    return acc;
}

void QuadExpr::validate() const {
    expect(rank == 1 || rank == 2, Err::InvalidShape, "rank must be 1 or 2");
    expect(static_cast<int>(A.size()) == rank, Err::InvalidShape, "A has wrong row count");
    for (const auto& row : A)
        expect(static_cast<int>(row.size()) == rank, Err::InvalidShape, "A is not square");
    expect(static_cast<int>(B.size()) == rank, Err::InvalidShape, "B has wrong size");
    if (rank == 2)
        expect(A[0][1] == A[1][0], Err::InvalidShape, "A must be symmetric");
}

nlohmann::json QuadExpr::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& row : A) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row) r.push_back(rat_str(v));
        a.push_back(std::move(r));
    }
    nlohmann::json b = nlohmann::json::array();
    for (const auto& v : B) b.push_back(rat_str(v));
    return {{"rank", rank}, {"A", a}, {"B", b}, {"C", rat_str(C)}};
}

QuadExpr QuadExpr::from_json(const nlohmann::json& j) {
    QuadExpr q;
    const auto& a = j.at("A");
    expect(a.is_array() && !a.empty(), Err::ParseError, "A must be a nonempty array");
    q.rank = static_cast<int>(a.size());
    for (const auto& row : a) {
        expect(row.is_array(), Err::ParseError, "A rows must be arrays");
        std::vector<Rat> r;
        for (const auto& v : row) r.push_back(jrat(v));
        q.A.push_back(std::move(r));
    }
    for (const auto& v : j.at("B")) q.B.push_back(jrat(v));
    q.C = j.contains("C") ? jrat(j.at("C")) : Rat(0);
    if (j.contains("rank"))
        expect(j.at("rank").get<int>() == q.rank, Err::InvalidShape, "rank does not match A");
    q.validate();
    return q;
}

void LatticeCoset::validate() {
    expect(rank == 1 || rank == 2, Err::InvalidShape, "rank must be 1 or 2");
    expect(static_cast<int>(diag.size()) == rank && static_cast<int>(shift.size()) == rank,
           Err::InvalidShape, "coset data has wrong size");
    for (int t = 0; t < rank; ++t) {
        auto u = static_cast<std::size_t>(t);
        expect(diag[u] >= 1, Err::InvalidParams, "lattice basis must have a positive diagonal");
        shift[u] = ((shift[u] % diag[u]) + diag[u]) % diag[u];
    }
}

LatticeCoset LatticeCoset::full(int rank) {
    LatticeCoset c;
    c.rank = rank;
    c.diag.assign(static_cast<std::size_t>(rank), 1);
    c.shift.assign(static_cast<std::size_t>(rank), 0);
    return c;
}

nlohmann::json LatticeCoset::to_json() const {
    nlohmann::json basis = nlohmann::json::array();
    for (int s = 0; s < rank; ++s) {
        nlohmann::json row = nlohmann::json::array();
        for (int t = 0; t < rank; ++t) row.push_back(s == t ? diag[static_cast<std::size_t>(t)] : 0);
        basis.push_back(std::move(row));
    }
    return {{"basis", basis}, {"shift", shift}};
}

LatticeCoset LatticeCoset::from_json(const nlohmann::json& j) {
    LatticeCoset c;
    const auto& basis = j.at("basis");
    expect(basis.is_array() && !basis.empty(), Err::ParseError, "basis must be a nonempty array");
    c.rank = static_cast<int>(basis.size());
    c.diag.assign(static_cast<std::size_t>(c.rank), 0);
    for (int s = 0; s < c.rank; ++s) {
        const auto& row = basis[static_cast<std::size_t>(s)];
        expect(static_cast<int>(row.size()) == c.rank, Err::InvalidShape, "basis is not square");
        for (int t = 0; t < c.rank; ++t) {
            long v = row[static_cast<std::size_t>(t)].get<long>();
            if (s == t)
                c.diag[static_cast<std::size_t>(t)] = v;
            else
                expect(v == 0, Err::InvalidParams, "only diagonal lattice bases are supported");
        }
    }
    for (const auto& v : j.at("shift")) c.shift.push_back(v.get<long>());
    c.validate();
    return c;
}

nlohmann::json NahmSpec::to_json() const {
    nlohmann::json j = quad.to_json();
    j["coset"] = coset.to_json();
    return j;
}

NahmSpec NahmSpec::from_json(const nlohmann::json& j) {
    NahmSpec ns;
    ns.quad = QuadExpr::from_json(j);
    if (j.contains("coset")) {
        ns.coset = LatticeCoset::from_json(j.at("coset"));
        expect(ns.coset.rank == ns.quad.rank, Err::InvalidShape, "coset rank != A rank");
    } else {
        ns.coset = LatticeCoset::full(ns.quad.rank);
    }
    return ns;
}

std::string NahmSpec::str() const {
    std::ostringstream os;
    os << "A=[";
    for (std::size_t s = 0; s < quad.A.size(); ++s) {
        os << (s ? ";" : "");
        for (std::size_t t = 0; t < quad.A[s].size(); ++t) os << (t ? "," : "") << rat_str(quad.A[s][t]);
    }
    os << "] B=[";
    for (std::size_t t = 0; t < quad.B.size(); ++t) os << (t ? "," : "") << rat_str(quad.B[t]);
    os << "] C=" << rat_str(quad.C) << " v=[";
    for (std::size_t t = 0; t < coset.shift.size(); ++t) os << (t ? "," : "") << coset.shift[t];
    os << "] d=[";
    for (std::size_t t = 0; t < coset.diag.size(); ++t) os << (t ? "," : "") << coset.diag[t];
    os << "]";
    return os.str();
}

SumSpec SumSpec::from_json(const nlohmann::json& j, const ParamEnv& env) {
    SumSpec s;
    std::vector<std::string> vars;
    for (const auto& v : j.at("vars")) vars.push_back(v.get<std::string>());
    expect(vars.size() == 1 || vars.size() == 2, Err::InvalidShape, "vars must list 1 or 2 names");
    s.rank = static_cast<int>(vars.size());

    Poly exp_poly = parse_poly(jmono_src(j.at("exp")), vars, env);
    Poly sign_poly;
    if (j.contains("sign")) sign_poly = parse_poly(jmono_src(j.at("sign")), vars, env);
    if (j.contains("mono")) {
        for (const auto& m : j.at("mono")) {
            SignedMonomial base = parse_monomial(jmono_src(m.at("base")), env);
            Poly n = parse_poly(jmono_src(m.at("n")), vars, env);
            for (const auto& [key, c] : n) {
                if (c == 0) continue;
                exp_poly[key] += base.exp * c;
                if (base.sign < 0) sign_poly[key] += c;
            }
        }
    }
    s.quad = quad_of(exp_poly, "exp");
    s.sign = quad_of(sign_poly, "sign");

    auto factors = [&](const char* key, std::vector<PochFactorSpec>& out) {
        if (!j.contains(key)) return;
        for (const auto& f : j.at(key)) {
            PochFactorSpec pf;
            if (f.is_string()) { // shorthand: "len" means (q;q)_{len}
                pf.arg = SignedMonomial::q(1);
                pf.base = SignedMonomial::q(1);
                pf.len = affine_of(parse_poly(f.get<std::string>(), vars, env), "factor length");
            } else if (f.is_array()) { // shorthand: [arg, base, len]
                expect(f.size() == 3, Err::ParseError, "factor array needs [arg, base, len]");
                pf.arg = parse_monomial(jmono_src(f[0]), env);
                pf.base = parse_monomial(jmono_src(f[1]), env);
                pf.len = affine_of(parse_poly(jmono_src(f[2]), vars, env), "factor length");
            } else {
                pf.arg = parse_monomial(jmono_src(f.at("a")), env);
                pf.base = parse_monomial(jmono_src(f.at("b")), env);
                pf.len = affine_of(parse_poly(jmono_src(f.at("n")), vars, env), "factor length");
            }
            out.push_back(std::move(pf));
        }
    };
    factors("num", s.num);
    factors("den", s.den);
    return s;
}

std::optional<std::string> divergence_reason(const SumSpec& s) {
    return screen_quad(s).reason;
}

std::vector<std::array<long, 2>> enumerate_points(const SumSpec& s, const Rat& N) {
    Screen sc = screen_quad(s);
    if (sc.reason) fail(Err::DivergentSpec, *sc.reason);
    return points_upto(s, sc, N);
}

Series eval_sumspec(const SumSpec& s, const Rat& N) {
    Screen sc = screen_quad(s);
    if (sc.reason) fail(Err::DivergentSpec, *sc.reason);

    // suffix[t] = how far below its quadratic part a term can still sink from
    // the numerator factors t, t+1, ... (each floor is <= 0).
    std::vector<Rat> suffix(s.num.size() + 1, Rat(0));
    for (std::size_t t = s.num.size(); t-- > 0;)
        suffix[t] = suffix[t + 1] + numerator_floor(s.num[t]);
    const Rat& cmin = suffix[0];

    // The quadratic part itself can dip below zero; pad factor orders so
    // every product is still exact at N.
    Rat qfloor = sc.env.h2 > 0 ? Rat(sc.env.h0 - sc.env.h1 * sc.env.h1 / (4 * sc.env.h2))
                               : sc.env.at(0);
    if (qfloor > 0) qfloor = 0;
    Rat cache_order = N - cmin - qfloor;

    std::vector<FactorTable> nums, dens;
    for (const auto& f : s.num) nums.emplace_back(f, false, cache_order);
    for (const auto& f : s.den) dens.emplace_back(f, true, cache_order);

    Series acc = Series::zero_to(N);
    for (const auto& k : points_upto(s, sc, N - cmin)) {
        bool vanishes = false;
        for (auto& d : dens)
            if (d.len().eval(k[0], k[1]) < 0) vanishes = true;
        if (vanishes) continue;

        int sgn = odd(s.sign.eval(k[0], k[1])) ? -1 : 1;
        Series term = Series::monomial(sgn, s.quad.eval(k[0], k[1])).truncated(N - cmin);
        for (std::size_t t = 0; t < nums.size(); ++t) {
            long len = nums[t].len().eval(k[0], k[1]);
            expect(len >= 0, Err::InvalidParams, "numerator factor length is negative on the support");
            term = (term * nums[t].at(len)).truncated(N - suffix[t + 1]);
        }
        for (auto& d : dens) term = (term * d.at(d.len().eval(k[0], k[1]))).truncated(N);
        acc += term;
    }
    return acc;
}

SumSpec nahm_to_sum(const NahmSpec& ns) {
    NahmSpec n = ns;
    n.quad.validate();
    n.coset.validate();
    const auto& A = n.quad.A;
    const auto& B = n.quad.B;
    const auto& d = n.coset.diag;
    const auto& v = n.coset.shift;

    SumSpec s;
    s.rank = n.quad.rank;
    std::vector<long> shift(v.begin(), v.end());
    s.quad.q00 = n.quad.eval(shift);
    if (s.rank == 1) {
        s.quad.q20 = A[0][0] * d[0] * d[0] / 2;
        s.quad.q10 = (A[0][0] * v[0] + B[0]) * d[0];
    } else {
        s.quad.q20 = A[0][0] * d[0] * d[0] / 2;
        s.quad.q02 = A[1][1] * d[1] * d[1] / 2;
        s.quad.q11 = A[0][1] * d[0] * d[1];
        s.quad.q10 = (A[0][0] * v[0] + A[0][1] * v[1] + B[0]) * d[0];
        s.quad.q01 = (A[0][1] * v[0] + A[1][1] * v[1] + B[1]) * d[1];
    }
    for (int t = 0; t < s.rank; ++t) {
        auto u = static_cast<std::size_t>(t);
        PochFactorSpec pf;
        pf.arg = SignedMonomial::q(1);
        pf.base = SignedMonomial::q(1);
        pf.len = AffineForm{v[u], t == 0 ? d[0] : 0, t == 1 ? d[1] : 0};
        s.den.push_back(std::move(pf));
    }
    return s;
}

Series eval_nahm(const NahmSpec& ns, const Rat& N) {
    return eval_sumspec(nahm_to_sum(ns), N);
}

std::vector<std::vector<long>> enumerate_support(const NahmSpec& ns, const Rat& N) {
    NahmSpec n = ns;
    n.coset.validate();
    SumSpec s = nahm_to_sum(n);
    std::vector<std::vector<long>> out;
    for (const auto& k : enumerate_points(s, N)) {
        std::vector<long> pt;
        for (int t = 0; t < s.rank; ++t) {
            auto u = static_cast<std::size_t>(t);
            pt.push_back(n.coset.shift[u] + n.coset.diag[u] * k[u]);
        }
        out.push_back(std::move(pt));
    }
    return out;
}

// ---------------------------------------------------------------------------

const char* parity_name(Parity p) {
    switch (p) {
        case Parity::EvenI: return "even-i";
        case Parity::OddI: return "odd-i";
        case Parity::EvenJ: return "even-j";
        case Parity::OddJ: return "odd-j";
        case Parity::EvenEven: return "even-even";
        case Parity::OddEven: return "odd-even";
        case Parity::EvenOdd: return "even-odd";
        case Parity::OddOdd: return "odd-odd";
    }
    return "?";
}

SumSpec f_series_spec(const DissectionParams& p, int su, int sv) {
    SumSpec s;
    s.rank = 2;
    s.quad.q20 = p.a / 2;
    s.quad.q11 = p.b;
    s.quad.q02 = p.c / 2;
    s.quad.q10 = p.d;
    s.quad.q01 = p.e;
    if (su < 0) s.sign.q10 = 1;
    if (sv < 0) s.sign.q01 = 1;
    PochFactorSpec f0{SignedMonomial::q(1), SignedMonomial::q(1), AffineForm{0, 1, 0}};
    PochFactorSpec f1{SignedMonomial::q(1), SignedMonomial::q(1), AffineForm{0, 0, 1}};
    s.den = {f0, f1};
    return s;
}

DissectionIdentity dissection_transform(const DissectionParams& p, Parity target) {
    long pi = 1, ri = 0, pj = 1, rj = 0;
    switch (target) {
        case Parity::EvenI: pi = 2; break;
        case Parity::OddI: pi = 2, ri = 1; break;
        case Parity::EvenJ: pj = 2; break;
        case Parity::OddJ: pj = 2, rj = 1; break;
        case Parity::EvenEven: pi = 2, pj = 2; break;
        case Parity::OddEven: pi = 2, ri = 1, pj = 2; break;
        case Parity::EvenOdd: pi = 2, pj = 2, rj = 1; break;
        case Parity::OddOdd: pi = 2, ri = 1, pj = 2, rj = 1; break;
    }

    DissectionIdentity id;
    id.lhs.rank = 2;
    // substitute i = pi k0 + ri, j = pj k1 + rj into a i^2/2 + b ij + c j^2/2 + d i + e j
    id.lhs.quad.q20 = p.a * pi * pi / 2;
    id.lhs.quad.q11 = p.b * pi * pj;
    id.lhs.quad.q02 = p.c * pj * pj / 2;
    id.lhs.quad.q10 = p.a * ri * pi + p.b * pi * rj + p.d * pi;
    id.lhs.quad.q01 = p.c * rj * pj + p.b * pj * ri + p.e * pj;
    Rat constant = p.a * ri * ri / 2 + p.b * ri * rj + p.c * rj * rj / 2 + p.d * ri + p.e * rj;
    id.lhs.quad.q00 = 0;
    id.prefactor_exp = -constant;
    PochFactorSpec f0{SignedMonomial::q(1), SignedMonomial::q(1), AffineForm{ri, pi, 0}};
    PochFactorSpec f1{SignedMonomial::q(1), SignedMonomial::q(1), AffineForm{rj, 0, pj}};
    id.lhs.den = {f0, f1};

    std::vector<std::pair<Rat, int>> pri, prj;
    auto projector = [](long pp, long rr) -> std::vector<std::pair<Rat, int>> {
        if (pp == 1) return {{rat(1), 1}};
        if (rr == 0) return {{rat(1, 2), 1}, {rat(1, 2), -1}};
        return {{rat(1, 2), 1}, {rat(-1, 2), -1}};
    };
    pri = projector(pi, ri);
    prj = projector(pj, rj);
    for (const auto& [wi, si] : pri)
        for (const auto& [wj, sj] : prj) id.combo.emplace_back(wi * wj, si, sj);
    return id;
}

Series::Comparison verify_dissection(const DissectionParams& p, Parity target, const Rat& N) {
    DissectionIdentity id = dissection_transform(p, target);
    Series lhs = eval_sumspec(id.lhs, N);
    std::vector<std::pair<Rat, Series>> parts;
    for (const auto& [w, su, sv] : id.combo)
        parts.emplace_back(w, eval_sumspec(f_series_spec(p, su, sv), N - id.prefactor_exp));
    Series rhs = Series::monomial(1, id.prefactor_exp) * linear_combine(parts);
    return Series::equal_to_order(lhs, rhs, N);
}

} // namespace qrr

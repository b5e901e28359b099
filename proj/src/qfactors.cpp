#include "qrr/qfactors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace qrr {

std::string SignedMonomial::str() const {
    std::ostringstream out;
    if (sign < 0) out << "-";
    if (exp == 0)
        out << "1";
    else if (exp == 1)
        out << "q";
    else
        out << "q^(" << rat_str(exp) << ")";
    return out.str();
}

namespace {

// 1 - s*q^t as an exact two-term series.
Series binomial_series(int s, const Rat& t) {
    return Series::one() - Series::monomial(s, t);
}

} // namespace

Series poch_finite(const SignedMonomial& a, const SignedMonomial& base, long n) {
    expect(n >= 0, Err::InvalidParams, "finite Pochhammer length must be >= 0");
    Series acc = Series::one();
    int bs = 1;
    Rat e = a.exp;
    for (long k = 0; k < n; ++k) {
        acc *= binomial_series(a.sign * bs, e);
        bs *= base.sign;
        e += base.exp;
    }
    return acc;
}

Series poch_infinite(const SignedMonomial& a, const SignedMonomial& base, const Rat& N) {
    expect(base.sign > 0 && base.exp > 0, Err::DivergentProduct,
           "infinite Pochhammer requires base q^m with m > 0, got base " + base.str());
    expect(a.exp > 0, Err::DivergentProduct,
           "infinite Pochhammer requires argument exponent > 0, got " + a.str());
    Series acc = Series::one().truncated(N);
    Rat e = a.exp;
    while (e <= N) {
        acc *= binomial_series(a.sign, e);
        e += base.exp;
    }
    return acc;
}

Series finite_length_reciprocal(const SignedMonomial& a, const SignedMonomial& base, long n, const Rat& N) {
    if (n < 0) return Series::zero();
    Series p = poch_finite(a, base, n);
    expect(!p.is_zero(), Err::NotInvertible, "finite Pochhammer vanishes identically");
    Rat pad = 0;
    if (auto m = p.min_exp(); m && *m < 0) pad = -2 * *m;
    return p.truncated(N + pad).invert().truncated(N);
}

Series qbinomial(long n, long m, const SignedMonomial& base) {
    if (m < 0 || n < 0 || m > n) return Series::zero();
    // [n m]_x by the Pascal recurrence [k r] = [k-1 r] + x^{k-r} [k-1 r-1],
    // dense integer polynomials in x.
    std::vector<std::vector<Rat>> row(static_cast<std::size_t>(m) + 1);
    row[0] = {Rat(1)};
    for (long k = 1; k <= n; ++k) {
        long rmax = std::min(k, m);
        for (long r = rmax; r >= 1; --r) {
            std::vector<Rat>& cur = row[static_cast<std::size_t>(r)];
            const std::vector<Rat>& below = row[static_cast<std::size_t>(r - 1)];
            long shift = k - r;
            std::size_t need = static_cast<std::size_t>(shift) + below.size();
            if (cur.size() < need) cur.resize(need, Rat(0));
            for (std::size_t i = 0; i < below.size(); ++i)
                cur[static_cast<std::size_t>(shift) + i] += below[i];
        }
    }
    Series s = Series::from_parts(1, 0, std::move(row[static_cast<std::size_t>(m)]), std::nullopt);
    if (base.sign < 0) s = s.flip_base_sign();
    if (base.exp != 1) s = s.substitute_q_power(base.exp);
    return s;
}

Series theta_sum_signed(const Rat& a, const Rat& b, int sign, const Rat& N) {
    expect(a > 0, Err::DivergentTheta, "theta sum needs a > 0, got a = " + rat_str(a));
    expect(sign == 1 || sign == -1, Err::InvalidParams, "theta character must be +1 or -1");
    long D = std::lcm(rat_long(Rat(a.get_den())), rat_long(Rat(b.get_den())));
    std::map<long, Rat> slots;
    Rat vertex = -b / (2 * a);
    auto scan = [&](long start, long step) {
        for (long n = start;; n += step) {
            Rat e = a * n * n + b * n;
            if (e <= N) {
                slots[rat_long(e * D)] += (sign < 0 ? parity_sign(n) : 1);
            } else if (step > 0 ? (Rat(n) > vertex) : (Rat(n) < vertex)) {
                break;
            }
        }
    };
    scan(0, 1);
    scan(-1, -1);
    if (slots.empty()) return Series::zero_to(N);
    long lo = slots.begin()->first;
    long hi = slots.rbegin()->first;
    std::vector<Rat> cs(static_cast<std::size_t>(hi - lo + 1), Rat(0));
    for (const auto& [k, c] : slots) cs[static_cast<std::size_t>(k - lo)] = c;
    return Series::from_parts(D, lo, std::move(cs), Series::Order(N));
}

Series theta_sum(const Rat& a, const Rat& b, const Rat& N) { return theta_sum_signed(a, b, 1, N); }

Series jacobi_triple_lhs(const SignedMonomial& z, const Rat& N) {
    return theta_sum_signed(rat(1, 2), z.exp - rat(1, 2), z.sign, N);
}

// ---------------------------------------------------------------------------

ProductSpec ProductSpec::canonicalized() const {
    ProductSpec out;
    out.constant = constant;
    out.monomial_exp = monomial_exp;
    auto fkey = [](const ProductFactor& f) {
        return std::make_tuple(f.base.exp, f.base.sign, f.arg.exp, f.arg.sign);
    };
    auto fs = factors;
    std::sort(fs.begin(), fs.end(), [&](const ProductFactor& x, const ProductFactor& y) { return fkey(x) < fkey(y); });
    for (auto& f : fs) {
        if (!out.factors.empty() && fkey(out.factors.back()) == fkey(f))
            out.factors.back().power += f.power;
        else
            out.factors.push_back(f);
    }
    std::erase_if(out.factors, [](const ProductFactor& f) { return f.power == 0; });
    auto bkey = [](const BinFactor& b) { return std::make_tuple(b.of.exp, b.of.sign); };
    auto bs = bins;
    std::sort(bs.begin(), bs.end(), [&](const BinFactor& x, const BinFactor& y) { return bkey(x) < bkey(y); });
    for (auto& b : bs) {
        if (!out.bins.empty() && bkey(out.bins.back()) == bkey(b))
            out.bins.back().power += b.power;
        else
            out.bins.push_back(b);
    }
    std::erase_if(out.bins, [](const BinFactor& b) { return b.power == 0; });
    return out;
}

ProductSpec product_of(std::vector<ProductFactor> factors) {
    ProductSpec p;
    p.factors = std::move(factors);
    return p;
}

void append_J(ProductSpec& p, const Rat& m, long power) {
    p.factors.push_back({SignedMonomial::q(m), SignedMonomial::q(m), power});
}

void append_J(ProductSpec& p, const Rat& a, const Rat& m, long power) {
    p.factors.push_back({SignedMonomial::q(a), SignedMonomial::q(m), power});
    p.factors.push_back({SignedMonomial::q(m - a), SignedMonomial::q(m), power});
    p.factors.push_back({SignedMonomial::q(m), SignedMonomial::q(m), power});
}

namespace {

struct Peeler {
    FlatProduct out;

    // Multiply in (1 - s*q^t)^power with any t, splitting off monomial and
    // constant parts until the binomial has a positive exponent.
    void binomial(int s, Rat t, long power) {
        if (power == 0) return;
        while (true) {
            if (t > 0) {
                out.bins.push_back({SignedMonomial(s, t), power});
                return;
            }
            if (t == 0) {
                if (s > 0) {
                    // (1 - 1): the entire product is exactly zero (or ill-posed
                    // if this vanishing factor sits in a denominator).
                    expect(power > 0, Err::NotInvertible, "product divides by (1 - q^0)");
                    out.zero = true;
                    return;
                }
                out.constant *= rat_pow(2, power);
                return;
            }
            // (1 - s q^t) = (-s) q^t (1 - s q^{-t}) for t < 0
            out.constant *= rat_pow(-s, power);
            out.monomial_exp += t * power;
            t = -t;
        }
    }

    void factor(SignedMonomial arg, SignedMonomial base, long power) {
        if (power == 0) return;
        expect(base.exp > 0, Err::DivergentProduct,
               "infinite product with base " + base.str() + " does not converge");
        if (base.sign < 0) {
            // (a; -Q)_inf = (a; Q^2)_inf * (-aQ; Q^2)_inf
            SignedMonomial b2(1, 2 * base.exp);
            factor(arg, b2, power);
            factor(arg.negated().times_q(base.exp), b2, power);
            return;
        }
        while (arg.exp <= 0 && !out.zero) {
            binomial(arg.sign, arg.exp, power);
            arg.exp += base.exp;
        }
        if (out.zero) return;
        out.factors.push_back({arg, base, power});
    }
};

} // namespace

FlatProduct flatten_product(const ProductSpec& spec) {
    Peeler p;
    p.out.constant = spec.constant;
    p.out.monomial_exp = spec.monomial_exp;
    expect(spec.constant != 0, Err::InvalidParams, "product constant must be nonzero");
    for (const auto& b : spec.bins) {
        p.binomial(b.of.sign, b.of.exp, b.power);
        if (p.out.zero) break;
    }
    for (const auto& f : spec.factors) {
        if (p.out.zero) break;
        p.factor(f.arg, f.base, f.power);
    }
    if (p.out.zero) return FlatProduct{.zero = true};
    return std::move(p.out);
}

PositiveForm positive_form(const ProductSpec& spec) {
    FlatProduct flat = flatten_product(spec);
    PositiveForm out;
    if (flat.zero) {
        out.zero = true;
        return out;
    }
    out.constant = flat.constant;
    out.monomial_exp = flat.monomial_exp;
    out.bins = std::move(flat.bins);
    long D = 1;
    for (const auto& f : flat.factors)
        D = std::lcm(D, std::lcm(rat_long(Rat(f.arg.exp.get_den())), rat_long(Rat(f.base.exp.get_den()))));
    out.denom = D;
    std::deque<std::tuple<long, long, int, long>> work; // (c, m, sign, power) in x-units
    for (const auto& f : flat.factors)
        work.push_back({rat_long(f.arg.exp * D), rat_long(f.base.exp * D), f.arg.sign, f.power});
    while (!work.empty()) {
        auto [c, m, s, e] = work.front();
        work.pop_front();
        if (e == 0) continue;
        if (s < 0) {
            // (-q^c; q^m) = (q^{2c}; q^{2m}) / (q^c; q^m)
            work.push_back({2 * c, 2 * m, 1, e});
            work.push_back({c, m, 1, -e});
            continue;
        }
        if (c > m) {
            // (q^c; q^m) = (q^{c-m}; q^m) / (1 - q^{c-m})
            out.bins.push_back({SignedMonomial::q(rat(c - m, D)), -e});
            work.push_back({c - m, m, 1, e});
            continue;
        }
        out.classes[{c, m}] += e;
    }
    std::erase_if(out.classes, [](const auto& kv) { return kv.second == 0; });
    // canonical bins: sorted, merged, zero powers dropped
    std::sort(out.bins.begin(), out.bins.end(), [](const BinFactor& x, const BinFactor& y) {
        return std::make_tuple(x.of.exp, x.of.sign) < std::make_tuple(y.of.exp, y.of.sign);
    });
    std::vector<BinFactor> merged;
    for (auto& b : out.bins) {
        if (!merged.empty() && merged.back().of == b.of)
            merged.back().power += b.power;
        else
            merged.push_back(b);
    }
    std::erase_if(merged, [](const BinFactor& b) { return b.power == 0; });
    out.bins = std::move(merged);
    return out;
}

bool products_structurally_equal(const ProductSpec& a, const ProductSpec& b) {
    PositiveForm pa = positive_form(a), pb = positive_form(b);
    if (pa.zero || pb.zero) return pa.zero == pb.zero;
    if (pa.constant != pb.constant || pa.monomial_exp != pb.monomial_exp) return false;
    if (pa.bins != pb.bins) return false;
    long D = std::lcm(pa.denom, pb.denom);
    long M = 1;
    auto modulus_lcm = [&](const PositiveForm& p) {
        long scale = D / p.denom;
        for (const auto& [key, e] : p.classes) M = std::lcm(M, key.second * scale);
    };
    modulus_lcm(pa);
    modulus_lcm(pb);
    auto refined = [&](const PositiveForm& p) {
        long scale = D / p.denom;
        std::map<std::pair<long, long>, long> r;
        for (const auto& [key, e] : p.classes) {
            long c = key.first * scale, m = key.second * scale;
            for (long j = 0; j < M / m; ++j) {
                long cc = c + j * m;
                // keep classes within (0, M]
                r[{cc, M}] += e;
            }
        }
        std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
        return r;
    };
    return refined(pa) == refined(pb);
}

Series eval_product(const ProductSpec& spec, const Rat& N) {
    FlatProduct flat = flatten_product(spec);
    if (flat.zero) return Series::zero();
    Rat M = N - flat.monomial_exp;
    Series acc = Series::monomial(flat.constant, flat.monomial_exp);
    for (const auto& b : flat.bins) {
        Series bs = binomial_series(b.of.sign, b.of.exp);
        acc *= (b.power >= 0) ? bs.pow(b.power) : bs.truncated(M).pow(b.power);
    }
    for (const auto& f : flat.factors) acc *= poch_infinite(f.arg, f.base, M).pow(f.power);
    return acc;
}

// ---------------------------------------------------------------------------

nlohmann::json ProductSpec::to_json() const {
    nlohmann::json j;
    j["constant"] = rat_str(constant);
    j["monomial"] = rat_str(monomial_exp);
    auto fs = nlohmann::json::array();
    for (const auto& f : factors)
        fs.push_back({{"arg_sign", f.arg.sign},
                      {"arg_exp", rat_str(f.arg.exp)},
                      {"base_sign", f.base.sign},
                      {"base_exp", rat_str(f.base.exp)},
                      {"power", f.power}});
    j["factors"] = std::move(fs);
    if (!bins.empty()) {
        auto bs = nlohmann::json::array();
        for (const auto& b : bins)
            bs.push_back({{"sign", b.of.sign}, {"exp", rat_str(b.of.exp)}, {"power", b.power}});
        j["bins"] = std::move(bs);
    }
    return j;
}

ProductSpec ProductSpec::from_json(const nlohmann::json& j) {
    try {
        ProductSpec p;
        if (j.contains("constant")) p.constant = rat_parse(j.at("constant").get<std::string>());
        if (j.contains("monomial")) p.monomial_exp = rat_parse(j.at("monomial").get<std::string>());
        for (const auto& f : j.value("factors", nlohmann::json::array()))
            p.factors.push_back({SignedMonomial(f.at("arg_sign").get<int>(), rat_parse(f.at("arg_exp").get<std::string>())),
                                 SignedMonomial(f.at("base_sign").get<int>(), rat_parse(f.at("base_exp").get<std::string>())),
                                 f.at("power").get<long>()});
        for (const auto& b : j.value("bins", nlohmann::json::array()))
            p.bins.push_back({SignedMonomial(b.at("sign").get<int>(), rat_parse(b.at("exp").get<std::string>())),
                              b.at("power").get<long>()});
        return p;
    } catch (const nlohmann::json::exception& e) {
        fail(Err::ParseError, std::string("bad product JSON: ") + e.what());
    }
}

std::string ProductSpec::str() const {
    std::ostringstream out;
    bool lead = false;
    if (constant != 1) {
        out << rat_str(constant);
        lead = true;
    }
    if (monomial_exp != 0) {
        if (lead) out << " * ";
        out << "q^(" << rat_str(monomial_exp) << ")";
        lead = true;
    }
    for (const auto& b : bins) {
        if (lead) out << " * ";
        out << "(1" << (b.of.sign < 0 ? "+" : "-") << "q^(" << rat_str(b.of.exp) << "))";
        if (b.power != 1) out << "^" << b.power;
        lead = true;
    }
    for (const auto& f : factors) {
        if (lead) out << " * ";
        out << "(" << f.arg.str() << ";" << f.base.str() << ")inf";
        if (f.power != 1) out << "^" << f.power;
        lead = true;
    }
    if (!lead) out << "1";
    return out.str();
}

} // namespace qrr

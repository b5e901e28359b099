#include "qrr/series.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace qrr {

const char* err_name(Err k) {
    switch (k) {
        case Err::NotInvertible: return "NotInvertible";
        case Err::OrderExceeded: return "OrderExceeded";
        case Err::InvalidSubstitution: return "InvalidSubstitution";
        case Err::DivergentProduct: return "DivergentProduct";
        case Err::DivergentTheta: return "DivergentTheta";
        case Err::DivergentSpec: return "DivergentSpec";
        case Err::InvalidShape: return "InvalidShape";
        case Err::InvalidParams: return "InvalidParams";
        case Err::ParseError: return "ParseError";
        case Err::NotAProduct: return "NotAProduct";
        case Err::NotAnIdentity: return "NotAnIdentity";
        case Err::InsufficientOrder: return "InsufficientOrder";
    }
    return "Error";
}

Rat rat_parse(const std::string& s) {
    std::size_t i = 0;
    auto digits = [&]() {
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        return i > start;
    };
    if (i < s.size() && s[i] == '-') ++i;
    bool ok = digits();
    if (ok && i < s.size() && s[i] == '/') {
        ++i;
        ok = digits();
    }
    ok = ok && i == s.size();
    if (!ok) fail(Err::ParseError, "bad rational literal '" + s + "'");
    Rat v(s, 10);
    if (v.get_den() == 0) fail(Err::ParseError, "zero denominator in '" + s + "'");
    v.canonicalize();
    return v;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

long rat_long(const Rat& r) {
    expect(rat_is_int(r), Err::InvalidParams, "expected integer, got " + rat_str(r));
    expect(r.get_num().fits_slong_p(), Err::InvalidParams, "integer out of range: " + rat_str(r));
    return r.get_num().get_si();
}

long rat_floor_long(const Rat& r) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    expect(f.fits_slong_p(), Err::InvalidParams, "floor out of range: " + rat_str(r));
    return f.get_si();
}

Rat rat_pow(const Rat& c, long e) {
    if (e < 0) {
        expect(c != 0, Err::InvalidParams, "0^negative");
        return rat_pow(Rat(1) / c, -e);
    }
    Rat acc = 1, base = c;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

Series::Order order_min(const Series::Order& a, const Series::Order& b) {
    if (!a) return b;
    if (!b) return a;
    return *a < *b ? a : b;
}

// ---------------------------------------------------------------------------

void Series::normalize() {
    // Nothing may be stored past the tracked order.
    if (order_ && !coeffs_.empty()) {
        long hi_idx = rat_floor_long(*order_ * denom_); // max allowed lo_+k
        if (hi_idx < lo_)
            coeffs_.clear();
        else if (static_cast<long>(coeffs_.size()) > hi_idx - lo_ + 1)
            coeffs_.resize(static_cast<std::size_t>(hi_idx - lo_ + 1));
    }
    std::size_t a = 0, b = coeffs_.size();
    while (a < b && coeffs_[a] == 0) ++a;
    while (b > a && coeffs_[b - 1] == 0) --b;
    if (a == b) {
        coeffs_.clear();
        denom_ = 1;
        lo_ = 0;
        return;
    }
    if (a > 0 || b < coeffs_.size()) {
        std::vector<Rat> trimmed(std::make_move_iterator(coeffs_.begin() + static_cast<long>(a)),
                                 std::make_move_iterator(coeffs_.begin() + static_cast<long>(b)));
        coeffs_ = std::move(trimmed);
        lo_ += static_cast<long>(a);
    }
    if (denom_ > 1) {
        long g = std::gcd(denom_, lo_);
        for (std::size_t k = 1; k < coeffs_.size() && g > 1; ++k)
            if (coeffs_[k] != 0) g = std::gcd(g, static_cast<long>(k));
        if (g > 1) {
            std::vector<Rat> nc((coeffs_.size() - 1) / static_cast<std::size_t>(g) + 1);
            for (std::size_t k = 0; k < coeffs_.size(); ++k)
                if (coeffs_[k] != 0) nc[k / static_cast<std::size_t>(g)] = std::move(coeffs_[k]);
            coeffs_ = std::move(nc);
            denom_ /= g;
            lo_ /= g;
        }
    }
}

Series Series::zero_to(const Rat& order) {
    Series s;
    s.order_ = order;
    return s;
}

Series Series::constant(const Rat& c) { return monomial(c, 0); }

Series Series::monomial(const Rat& c, const Rat& e) {
    Series s;
    if (c == 0) return s;
    s.denom_ = rat_long(Rat(e.get_den()));
    s.lo_ = rat_long(Rat(e.get_num()));
    s.coeffs_ = {c};
    s.normalize();
    return s;
}

Series Series::from_parts(long denom, long lo, std::vector<Rat> coeffs, Order order) {
    expect(denom >= 1, Err::InvalidParams, "denom must be >= 1");
    Series s;
    s.denom_ = denom;
    s.lo_ = lo;
    s.coeffs_ = std::move(coeffs);
    s.order_ = std::move(order);
    s.normalize();
    return s;
}

std::optional<Rat> Series::min_exp() const {
    if (coeffs_.empty()) return std::nullopt;
    return rat(lo_, denom_);
}

Rat Series::coefficient_at(const Rat& e) const {
    if (order_ && e > *order_)
        fail(Err::OrderExceeded,
             "coefficient at q^" + rat_str(e) + " requested, tracked only to q^" + rat_str(*order_));
    Rat t = e * denom_;
    if (!rat_is_int(t)) return 0;
    long idx = rat_long(t) - lo_;
    if (idx < 0 || idx >= static_cast<long>(coeffs_.size())) return 0;
    return coeffs_[static_cast<std::size_t>(idx)];
}

Series Series::truncated(const Rat& n) const {
    Series s = *this;
    s.order_ = order_min(s.order_, Order(n));
    s.normalize();
    return s;
}

Series Series::operator-() const { return scaled(-1); }

Series Series::scaled(const Rat& c) const {
    if (c == 0) return zero();
    Series s = *this;
    for (auto& v : s.coeffs_) v *= c;
    return s; // scaling by a nonzero rational preserves canonical form
}

Series operator+(const Series& f, const Series& g) {
    Series r;
    r.order_ = order_min(f.order_, g.order_);
    if (f.coeffs_.empty() && g.coeffs_.empty()) return r;
    long D = std::lcm(f.denom_, g.denom_);
    long sf = D / f.denom_, sg = D / g.denom_;
    long lo = 0, hi = 0;
    bool first = true;
    auto widen = [&](const Series& s, long st) {
        if (s.coeffs_.empty()) return;
        long a = s.lo_ * st;
        long b = (s.lo_ + static_cast<long>(s.coeffs_.size()) - 1) * st;
        if (first) {
            lo = a;
            hi = b;
            first = false;
        } else {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
    };
    widen(f, sf);
    widen(g, sg);
    r.denom_ = D;
    r.lo_ = lo;
    r.coeffs_.assign(static_cast<std::size_t>(hi - lo + 1), Rat(0));
    auto addin = [&](const Series& s, long st) {
        for (std::size_t k = 0; k < s.coeffs_.size(); ++k)
            if (s.coeffs_[k] != 0)
                r.coeffs_[static_cast<std::size_t>((s.lo_ + static_cast<long>(k)) * st - lo)] += s.coeffs_[k];
    };
    addin(f, sf);
    addin(g, sg);
    r.normalize();
    return r;
}

Series operator-(const Series& f, const Series& g) { return f + (-g); }

Series operator*(const Series& f, const Series& g) {
    // Exact zero absorbs everything.
    if (f.coeffs_.empty() && !f.order_) return Series::zero();
    if (g.coeffs_.empty() && !g.order_) return Series::zero();

    // Unknown tails start strictly above each order bound, so the product is
    // exact up to min(order_f + min_exp_g, order_g + min_exp_f). An empty
    // (zero-to-order) operand uses its order as the min-exp fallback.
    Rat mf = f.min_exp() ? *f.min_exp() : *f.order_;
    Rat mg = g.min_exp() ? *g.min_exp() : *g.order_;
    Series::Order ord;
    if (f.order_) ord = order_min(ord, Series::Order(*f.order_ + mg));
    if (g.order_) ord = order_min(ord, Series::Order(*g.order_ + mf));

    if (f.coeffs_.empty() || g.coeffs_.empty()) return Series::zero_to(*ord);

    long D = std::lcm(f.denom_, g.denom_);
    long sf = D / f.denom_, sg = D / g.denom_;
    long lo = f.lo_ * sf + g.lo_ * sg;
    long len = static_cast<long>(f.coeffs_.size() - 1) * sf +
               static_cast<long>(g.coeffs_.size() - 1) * sg + 1;
    if (ord) {
        long hi_idx = rat_floor_long(*ord * D);
        len = std::min(len, hi_idx - lo + 1);
        if (len <= 0) return Series::zero_to(*ord);
    }
    Series r;
    r.denom_ = D;
    r.lo_ = lo;
    r.order_ = ord;
    r.coeffs_.assign(static_cast<std::size_t>(len), Rat(0));
    // Single-term fast path: plain scale-and-shift.
    if (f.coeffs_.size() == 1 || g.coeffs_.size() == 1) {
        const Series& one = (f.coeffs_.size() == 1) ? f : g;
        const Series& many = (f.coeffs_.size() == 1) ? g : f;
        long st = (f.coeffs_.size() == 1) ? sg : sf;
        for (std::size_t k = 0; k < many.coeffs_.size(); ++k) {
            long idx = static_cast<long>(k) * st;
            if (idx >= len) break;
            if (many.coeffs_[k] != 0) r.coeffs_[static_cast<std::size_t>(idx)] = many.coeffs_[k] * one.coeffs_[0];
        }
    } else {
        for (std::size_t i = 0; i < f.coeffs_.size(); ++i) {
            if (f.coeffs_[i] == 0) continue;
            long base = static_cast<long>(i) * sf;
            if (base >= len) break;
            for (std::size_t j = 0; j < g.coeffs_.size(); ++j) {
                long idx = base + static_cast<long>(j) * sg;
                if (idx >= len) break;
                if (g.coeffs_[j] != 0) r.coeffs_[static_cast<std::size_t>(idx)] += f.coeffs_[i] * g.coeffs_[j];
            }
        }
    }
    r.normalize();
    return r;
}

Series& Series::operator+=(const Series& g) { return *this = *this + g; }
Series& Series::operator-=(const Series& g) { return *this = *this - g; }
Series& Series::operator*=(const Series& g) { return *this = *this * g; }

Series Series::invert() const {
    expect(!coeffs_.empty(), Err::NotInvertible, "series has no nonzero lowest coefficient");
    if (!order_) {
        if (coeffs_.size() == 1) return monomial(Rat(1) / coeffs_[0], -rat(lo_, denom_));
        fail(Err::OrderExceeded, "inverse of an exact multi-term series is infinite; truncate first");
    }
    // f = c0 x^{lo} (1 + h); invert the unit part by back-substitution. A tail
    // perturbation of f at exponent > order moves 1/f at exponent
    // > order - 2*min_exp, hence the result order.
    Rat oR = *order_ - 2 * rat(lo_, denom_);
    long K = rat_floor_long(oR * denom_) + lo_; // max slot k of the result (lo of result is -lo_)
    Series r;
    r.denom_ = denom_;
    r.lo_ = -lo_;
    r.order_ = oR;
    if (K < 0) {
        r.coeffs_.clear();
        r.normalize();
        return r;
    }
    const Rat& c0 = coeffs_[0];
    std::vector<Rat> u(static_cast<std::size_t>(K) + 1, Rat(0));
    u[0] = 1;
    for (long k = 1; k <= K; ++k) {
        Rat acc = 0;
        long jmax = std::min<long>(k, static_cast<long>(coeffs_.size()) - 1);
        for (long j = 1; j <= jmax; ++j)
            if (coeffs_[static_cast<std::size_t>(j)] != 0)
                acc += coeffs_[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k - j)];
        u[static_cast<std::size_t>(k)] = -acc / c0;
    }
    for (auto& v : u) v /= c0;
    r.coeffs_ = std::move(u);
    r.normalize();
    return r;
}

Series Series::pow(long e) const {
    if (e == 0) return one();
    if (e < 0) return invert().pow(-e);
    Series acc = one(), base = *this;
    while (e > 0) {
        if (e & 1) acc *= base;
        if (e >>= 1) base *= base;
    }
    return acc;
}

Series Series::substitute_q_power(const Rat& k) const {
    expect(k > 0, Err::InvalidSubstitution, "exponent scale must be positive, got " + rat_str(k));
    long kp = rat_long(Rat(k.get_num()));
    long kq = rat_long(Rat(k.get_den()));
    Series r;
    r.denom_ = denom_ * kq;
    r.lo_ = lo_ * kp;
    if (order_) r.order_ = *order_ * k;
    if (!coeffs_.empty()) {
        r.coeffs_.assign((coeffs_.size() - 1) * static_cast<std::size_t>(kp) + 1, Rat(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) r.coeffs_[i * static_cast<std::size_t>(kp)] = coeffs_[i];
    }
    r.normalize();
    return r;
}

Series Series::flip_base_sign() const {
    Series r = *this;
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k)
        if ((r.lo_ + static_cast<long>(k)) % 2 != 0) r.coeffs_[k] = -r.coeffs_[k];
    return r;
}

Series::Comparison Series::equal_to_order(const Series& f, const Series& g, const Rat& n) {
    if (f.order_ && *f.order_ < n)
        fail(Err::OrderExceeded, "lhs tracked only to q^" + rat_str(*f.order_) + ", compare to q^" + rat_str(n) + " requested");
    if (g.order_ && *g.order_ < n)
        fail(Err::OrderExceeded, "rhs tracked only to q^" + rat_str(*g.order_) + ", compare to q^" + rat_str(n) + " requested");
    long D = std::lcm(f.denom_, g.denom_);
    long sf = D / f.denom_, sg = D / g.denom_;
    auto at = [](const Series& s, long st, long slot) -> const Rat* {
        if (slot % st != 0) return nullptr;
        long idx = slot / st - s.lo_;
        if (idx < 0 || idx >= static_cast<long>(s.coeffs_.size())) return nullptr;
        return &s.coeffs_[static_cast<std::size_t>(idx)];
    };
    long lo = 0;
    bool any = false;
    if (!f.coeffs_.empty()) {
        lo = f.lo_ * sf;
        any = true;
    }
    if (!g.coeffs_.empty()) {
        lo = any ? std::min(lo, g.lo_ * sg) : g.lo_ * sg;
        any = true;
    }
    Comparison cmp;
    if (!any) return cmp;
    long hi = rat_floor_long(n * D);
    long hf = f.coeffs_.empty() ? lo - 1 : (f.lo_ + static_cast<long>(f.coeffs_.size()) - 1) * sf;
    long hg = g.coeffs_.empty() ? lo - 1 : (g.lo_ + static_cast<long>(g.coeffs_.size()) - 1) * sg;
    hi = std::min(hi, std::max(hf, hg));
    static const Rat zero_rat(0);
    for (long slot = lo; slot <= hi; ++slot) {
        const Rat* cf = at(f, sf, slot);
        const Rat* cg = at(g, sg, slot);
        const Rat& a = cf ? *cf : zero_rat;
        const Rat& b = cg ? *cg : zero_rat;
        if (a != b) {
            cmp.equal = false;
            cmp.exp = rat(slot, D);
            cmp.lhs = a;
            cmp.rhs = b;
            return cmp;
        }
    }
    return cmp;
}

nlohmann::json Series::to_json() const {
    nlohmann::json j;
    j["denom"] = denom_;
    j["lo"] = lo_;
    j["order"] = order_ ? rat_str(*order_) : std::string("inf");
    auto arr = nlohmann::json::array();
    for (const auto& c : coeffs_) arr.push_back(rat_str(c));
    j["coeffs"] = std::move(arr);
    return j;
}

Series Series::from_json(const nlohmann::json& j) {
    try {
        long denom = j.at("denom").get<long>();
        long lo = j.at("lo").get<long>();
        Order ord;
        const auto& jo = j.at("order");
        if (!(jo.is_string() && jo.get<std::string>() == "inf")) ord = rat_parse(jo.get<std::string>());
        std::vector<Rat> cs;
        for (const auto& c : j.at("coeffs")) cs.push_back(rat_parse(c.get<std::string>()));
        return from_parts(denom, lo, std::move(cs), std::move(ord));
    } catch (const nlohmann::json::exception& e) {
        fail(Err::ParseError, std::string("bad series JSON: ") + e.what());
    }
}

std::string Series::str(std::size_t max_terms) const {
    std::ostringstream out;
    std::size_t printed = 0;
    bool first_term = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const Rat& c = coeffs_[k];
        if (c == 0) continue;
        if (printed == max_terms) {
            out << " + ...";
            break;
        }
        Rat e = rat(lo_ + static_cast<long>(k), denom_);
        Rat a = c;
        if (first_term) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        bool unit = (a == 1);
        if (e == 0) {
            out << rat_str(a);
        } else {
            if (!unit) out << rat_str(a) << "*";
            out << "q";
            if (e != 1) {
                if (rat_is_int(e) && e > 0)
                    out << "^" << rat_str(e);
                else
                    out << "^(" << rat_str(e) << ")";
            }
        }
        first_term = false;
        ++printed;
    }
    if (first_term) out << "0";
    if (order_) {
        Rat next = rat(rat_floor_long(*order_ * denom_) + 1, denom_);
        out << " + O(q^(" << rat_str(next) << "))";
    }
    return out.str();
}

Series linear_combine(const std::vector<std::pair<Rat, Series>>& terms) {
    Series acc = Series::zero();
    for (const auto& [c, f] : terms) acc += f.scaled(c);
    return acc;
}

} // namespace qrr

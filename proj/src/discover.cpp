#include "qrr/discover.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace qrr {

namespace {

Rat jrat(const nlohmann::json& j) {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return rat(j.get<long>());
    fail(Err::ParseError, "expected a rational (string or integer)");
}

} // namespace

nlohmann::json ExponentProfile::to_json() const {
    return {{"c", rat_str(c)}, {"mu", rat_str(mu)}, {"denom", denom}, {"e", e}};
}

ExponentProfile prodmake(const Series& f, const Rat& N) {
    expect(!f.is_zero(), Err::NotAProduct, "cannot take the profile of the zero series");
    if (f.order())
        expect(*f.order() >= N, Err::OrderExceeded,
               "series tracked only to q^(" + rat_str(*f.order()) + "), profile wants q^(" +
                   rat_str(N) + ")");

    ExponentProfile prof;
    prof.mu = *f.min_exp();
    prof.c = f.coefficient_at(prof.mu);
    // r = f / (c q^mu) = 1 + ...; canonical form makes denom() the minimal lattice.
    Series r = f * Series::monomial(Rat(1) / prof.c, -prof.mu);
    prof.denom = r.denom();

    long M = rat_floor_long((N - prof.mu) * Rat(prof.denom));
    if (M < 0) M = 0;
    std::vector<Rat> a(static_cast<std::size_t>(M) + 1, Rat(0));
    const auto& cs = r.coeffs();
    for (std::size_t k = 0; k < cs.size(); ++k) {
        long idx = r.lo() + static_cast<long>(k);
        if (idx <= M) a[static_cast<std::size_t>(idx)] = cs[k];
    }

    prof.e.reserve(static_cast<std::size_t>(M));
    for (long n = 1; n <= M; ++n) {
        // remainder = prod_{k>=n} (1-x^k)^{-e_k} = 1 + e_n x^n + O(x^{n+1})
        const Rat& head = a[static_cast<std::size_t>(n)];
        expect(rat_is_int(head), Err::NotAProduct,
               "exponent e_" + std::to_string(n) + " = " + rat_str(head) + " is not an integer");
        long e = rat_long(head);
        prof.e.push_back(e);
        for (long rep = std::labs(e); rep > 0; --rep) {
            if (e > 0)
                for (long k = M; k >= n; --k)
                    a[static_cast<std::size_t>(k)] -= a[static_cast<std::size_t>(k - n)];
            else
                for (long k = n; k <= M; ++k)
                    a[static_cast<std::size_t>(k)] += a[static_cast<std::size_t>(k - n)];
        }
    }
    return prof;
}

std::optional<std::pair<long, std::vector<long>>> detect_period(const std::vector<long>& e,
                                                                long max_period,
                                                                long min_repeats) {
    expect(max_period >= 1 && min_repeats >= 1, Err::InvalidParams,
           "max_period and min_repeats must be positive");
    expect(static_cast<long>(e.size()) >= max_period * min_repeats, Err::InsufficientOrder,
           "periodicity to period " + std::to_string(max_period) + " needs " +
               std::to_string(max_period * min_repeats) + " exponents, have " +
               std::to_string(e.size()));
    for (long p = 1; p <= max_period; ++p) {
        bool ok = true;
        for (std::size_t n = static_cast<std::size_t>(p); n < e.size() && ok; ++n)
            ok = e[n] == e[n - static_cast<std::size_t>(p)];
        if (ok)
            return std::make_pair(p, std::vector<long>(e.begin(), e.begin() + p));
    }
    return std::nullopt;
}

ProductSpec pattern_to_product(long period, const std::vector<long>& pattern, long denom) {
    expect(period >= 1, Err::InvalidParams, "period must be positive");
    expect(static_cast<long>(pattern.size()) == period, Err::InvalidShape,
           "pattern length != period");
    expect(denom >= 1, Err::InvalidParams, "lattice denominator must be positive");
    ProductSpec p;
    for (long c = 1; c <= period; ++c) {
        long e = pattern[static_cast<std::size_t>(c - 1)];
        if (e != 0)
            p.factors.push_back(
                {SignedMonomial::q(rat(c, denom)), SignedMonomial::q(rat(period, denom)), -e});
    }
    return p.canonicalized();
}

Rat periodic_bernoulli2(const Rat& t) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
    Rat u = t - Rat(fl);
    return u * u - u + rat(1, 6);
}

EtaWeight eta_weight(const ProductSpec& p) {
    PositiveForm pf = positive_form(p);
    expect(!pf.zero, Err::InvalidParams, "the zero product has no eta completion");
    Rat ex = 0;
    long jmult = 0;
    for (const auto& [cls, e] : pf.classes) {
        const auto& [c, m] = cls;
        ex += Rat(e) * rat(m, 4) * periodic_bernoulli2(rat(c, m));
        if (c == m) jmult += e;
    }
    return {ex / Rat(pf.denom), rat(jmult, 2)};
}

Rat eta_weight_exponent(const ProductSpec& p) { return eta_weight(p).exponent; }

Rat required_C(const NahmSpec& spec, const ProductSpec& product, const Rat& N) {
    Series sum = eval_nahm(spec, N);
    expect(!sum.is_zero(), Err::NotAnIdentity,
           "partial Nahm sum vanishes to order " + rat_str(N));
    Series prod = eval_product(product, N);
    expect(!prod.is_zero(), Err::NotAnIdentity, "product side is identically zero");
    Rat delta = *sum.min_exp() - *prod.min_exp();
    Rat upto = delta < 0 ? Rat(N + delta) : N;
    auto cmp = Series::equal_to_order(sum, Series::monomial(1, delta) * prod, upto);
    if (!cmp.equal)
        fail(Err::NotAnIdentity,
             "sum != q^(" + rat_str(delta) + ") * product: coefficient at q^(" +
                 rat_str(cmp.exp) + ") is " + rat_str(cmp.lhs) + " vs " + rat_str(cmp.rhs));
    return eta_weight(product).exponent - product.monomial_exp - delta;
}

nlohmann::json Candidate::to_json() const {
    return {{"spec", spec.to_json()},
            {"product", product.to_json()},
            {"required_C", rat_str(required_C)},
            {"orders_matched", orders_matched}};
}

SearchGrid SearchGrid::from_json(const nlohmann::json& j) {
    expect(j.is_object(), Err::ParseError, "grid must be a JSON object");
    SearchGrid g;
    for (const auto& m : j.at("matrices")) {
        expect(m.is_array(), Err::ParseError, "matrix must be an array of rows");
        std::vector<std::vector<Rat>> A;
        for (const auto& row : m) {
            expect(row.is_array(), Err::ParseError, "matrix rows must be arrays");
            std::vector<Rat> r;
            for (const auto& v : row) r.push_back(jrat(v));
            A.push_back(std::move(r));
        }
        g.matrices.push_back(std::move(A));
    }
    for (const auto& b : j.at("linear")) {
        expect(b.is_array(), Err::ParseError, "linear terms must be arrays");
        std::vector<Rat> B;
        for (const auto& v : b) B.push_back(jrat(v));
        g.linear.push_back(std::move(B));
    }
    for (const auto& cs : j.at("cosets")) g.cosets.push_back(LatticeCoset::from_json(cs));
    return g;
}

std::vector<Candidate> search_quadruples(const SearchGrid& grid, const Rat& N, long max_period,
                                         int jobs, std::vector<std::string>* skipped) {
    std::vector<NahmSpec> points;
    for (const auto& A : grid.matrices)
        for (const auto& B : grid.linear)
            for (const auto& cs : grid.cosets) {
                NahmSpec ns;
                ns.quad.rank = static_cast<int>(A.size());
                ns.quad.A = A;
                ns.quad.B = B;
                ns.quad.C = 0;
                ns.quad.validate();
                ns.coset = cs;
                expect(ns.coset.rank == ns.quad.rank, Err::InvalidShape,
                       "coset rank != matrix rank");
                points.push_back(std::move(ns));
            }

    std::vector<std::optional<Candidate>> found(points.size());
    std::vector<std::string> notes(points.size());
    auto probe = [&](std::size_t i) {
        const NahmSpec& ns = points[i];
        try {
            Series sum = eval_nahm(ns, N);
            if (sum.is_zero()) {
                notes[i] = ns.str() + ": vanishes to order " + rat_str(N);
                return;
            }
            ExponentProfile prof = prodmake(sum, N);
            auto per = detect_period(prof.e, max_period);
            if (!per) return; // aperiodic: a negative result, not an error
            Candidate c;
            c.spec = ns;
            c.product = pattern_to_product(per->first, per->second, prof.denom);
            c.product.constant = prof.c;
            c.required_C = eta_weight(c.product).exponent - prof.mu;
            c.orders_matched = static_cast<long>(prof.e.size());
            found[i] = std::move(c);
        } catch (const Error& err) {
            notes[i] = ns.str() + ": " + err.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) probe(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < points.size();) probe(i);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<Candidate> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (found[i]) out.push_back(std::move(*found[i]));
        else if (skipped && !notes[i].empty()) skipped->push_back(std::move(notes[i]));
    }
    return out;
}

} // namespace qrr

#include "qrr/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <thread>

namespace qrr {

namespace {

std::string status_name(EntryStatus s) {
    switch (s) {
    case EntryStatus::Proved: return "proved";
    case EntryStatus::Conjecture: return "conjecture";
    case EntryStatus::Parameterized: return "parameterized";
    }
    return "?";
}

EntryStatus status_from(const std::string& s) {
    if (s == "proved") return EntryStatus::Proved;
    if (s == "conjecture") return EntryStatus::Conjecture;
    if (s == "parameterized") return EntryStatus::Parameterized;
    fail(Err::ParseError, "unknown status '" + s + "'");
}

ParamValue param_value(const std::string& s) {
    bool has_alpha = std::any_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalpha(c) || c == '_';
    });
    if (has_alpha) return parse_monomial(s, {});
    return rat_parse(s);
}

CatalogTerm term_from_json(const nlohmann::json& j, const ParamEnv& env) {
    CatalogTerm t;
    if (j.contains("coef")) t.coef = rat_parse(j.at("coef").get<std::string>());
    if (j.contains("shift")) {
        SignedMonomial m = parse_monomial(j.at("shift").get<std::string>(), env);
        t.coef *= m.sign;
        t.shift = m.exp;
    }
    if (j.contains("prefactor"))
        t.prefactor = parse_product(j.at("prefactor").get<std::string>(), env);
    bool has_sum = j.contains("sum"), has_prod = j.contains("product");
    expect(has_sum != has_prod, Err::ParseError, "term needs exactly one of 'sum'/'product'");
    if (has_sum) {
        t.body = SumSpec::from_json(j.at("sum"), env);
    } else if (j.at("product").is_string()) {
        t.body = parse_product(j.at("product").get<std::string>(), env);
    } else {
        t.body = ProductSpec::from_json(j.at("product"));
    }
    return t;
}

std::string sample_name(const ParamEnv& env) {
    std::string s;
    for (const auto& [k, v] : env) {
        if (!s.empty()) s += ",";
        s += k + "=";
        s += std::holds_alternative<Rat>(v) ? rat_str(std::get<Rat>(v))
                                            : std::get<SignedMonomial>(v).str();
    }
    return s;
}

bool is_divergence(Err k) {
    return k == Err::DivergentSpec || k == Err::DivergentProduct || k == Err::DivergentTheta;
}

} // namespace

std::vector<CatalogTerm> IdentityEntry::side(bool left, const ParamEnv& env) const {
    const nlohmann::json& src = left ? lhs : rhs;
    expect(src.is_array() && !src.empty(), Err::ParseError,
           "entry '" + id + "': side must be a nonempty array");
    std::vector<CatalogTerm> out;
    for (const auto& t : src) out.push_back(term_from_json(t, env));
    return out;
}

IdentityEntry IdentityEntry::from_json(const nlohmann::json& j) {
    IdentityEntry e;
    try {
        e.id = j.at("id").get<std::string>();
        if (j.contains("status")) e.status = status_from(j.at("status").get<std::string>());
        e.note = j.value("note", "");
        if (j.contains("params")) {
            for (const auto& sample : j.at("params")) {
                ParamEnv env;
                for (const auto& [k, v] : sample.items()) env[k] = param_value(v.get<std::string>());
                e.samples.push_back(std::move(env));
            }
        }
        expect(e.samples.empty() == (e.status != EntryStatus::Parameterized), Err::ParseError,
               "'params' present iff status is parameterized");
        e.lhs = j.at("lhs");
        e.rhs = j.at("rhs");
        // parse both sides under every sample now, so bad data fails at load
        std::vector<ParamEnv> envs = e.samples.empty() ? std::vector<ParamEnv>{{}} : e.samples;
        for (const auto& env : envs) {
            e.side(true, env);
            e.side(false, env);
        }
    } catch (const nlohmann::json::exception& ex) {
        fail(Err::ParseError, "entry '" + e.id + "': " + ex.what());
    } catch (const Error& ex) {
        if (ex.kind != Err::ParseError) throw;
        fail(Err::ParseError, "entry '" + e.id + "': " + ex.what());
    }
    return e;
}

std::vector<IdentityEntry> load_catalog(const std::string& path) {
    std::ifstream in(path);
    expect(in.good(), Err::ParseError, "cannot open catalog '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        fail(Err::ParseError, "catalog '" + path + "': " + ex.what());
    }
    expect(j.is_array(), Err::ParseError, "catalog must be a JSON array");
    std::vector<IdentityEntry> out;
    std::set<std::string> seen;
    for (const auto& ej : j) {
        IdentityEntry e = IdentityEntry::from_json(ej);
        expect(seen.insert(e.id).second, Err::ParseError, "duplicate entry id '" + e.id + "'");
        out.push_back(std::move(e));
    }
    return out;
}

Series eval_terms(const std::vector<CatalogTerm>& terms, const Rat& N) {
    Series acc = Series::zero_to(N);
    for (const auto& t : terms) {
        Rat M = N - t.shift;
        Series body = std::holds_alternative<SumSpec>(t.body)
                          ? eval_sumspec(std::get<SumSpec>(t.body), M)
                          : eval_product(std::get<ProductSpec>(t.body), M);
        if (t.prefactor) body = eval_product(*t.prefactor, M) * body;
        acc += (Series::monomial(t.coef, t.shift) * body).truncated(N);
    }
    return acc;
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Divergent: return "divergent";
    }
    return "?";
}

VerifyResult verify_entry(const IdentityEntry& e, const Rat& N) {
    VerifyResult r;
    r.id = e.id;
    r.status = status_name(e.status);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<ParamEnv> envs = e.samples.empty() ? std::vector<ParamEnv>{{}} : e.samples;
    for (const auto& env : envs) {
        try {
            Series lhs = eval_terms(e.side(true, env), N);
            Series rhs = eval_terms(e.side(false, env), N);
            auto cmp = Series::equal_to_order(lhs, rhs, N);
            if (!cmp.equal) {
                r.verdict = Verdict::Fail;
                r.first_mismatch = cmp.exp;
                r.detail = "coefficient at q^" + rat_str(cmp.exp) + ": " + rat_str(cmp.lhs) +
                           " vs " + rat_str(cmp.rhs);
                if (!env.empty()) r.detail += " at " + sample_name(env);
                break;
            }
        } catch (const Error& ex) {
            if (!is_divergence(ex.kind)) throw;
            r.verdict = Verdict::Divergent;
            r.detail = ex.what();
            if (!env.empty()) r.detail += " at " + sample_name(env);
            break;
        }
    }
    r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
    return r;
}

bool matches_filter(const std::string& id, const std::string& filter) {
    // classic '*' glob, linear two-pointer scan
    std::size_t i = 0, f = 0, star = std::string::npos, mark = 0;
    while (i < id.size()) {
        if (f < filter.size() && (filter[f] == id[i])) {
            ++i, ++f;
        } else if (f < filter.size() && filter[f] == '*') {
            star = f++;
            mark = i;
        } else if (star != std::string::npos) {
            f = star + 1;
            i = ++mark;
        } else {
            return false;
        }
    }
    while (f < filter.size() && filter[f] == '*') ++f;
    return f == filter.size();
}

std::vector<VerifyResult> verify_all(const std::vector<IdentityEntry>& cat, const Rat& N,
                                     const std::string& filter, int jobs) {
    std::vector<const IdentityEntry*> picked;
    for (const auto& e : cat)
        if (matches_filter(e.id, filter)) picked.push_back(&e);

    std::vector<VerifyResult> results(picked.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < picked.size(); ++i) results[i] = verify_entry(*picked[i], N);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < picked.size();)
                results[i] = verify_entry(*picked[i], N);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::sort(results.begin(), results.end(),
              [](const VerifyResult& a, const VerifyResult& b) { return a.id < b.id; });
    return results;
}

nlohmann::json report_json(const std::vector<VerifyResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json j{{"id", r.id},
                         {"status", r.status},
                         {"verdict", verdict_name(r.verdict)},
                         {"millis", r.millis}};
        if (r.first_mismatch) j["first_mismatch"] = rat_str(*r.first_mismatch);
        if (!r.detail.empty()) j["detail"] = r.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace qrr

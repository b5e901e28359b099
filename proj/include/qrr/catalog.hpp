#pragma once
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qrr/nahm.hpp"

namespace qrr {

// One addend of an identity side: coef * q^shift * prefactor * body.
// The optional product prefactor lets a side carry terms like
// (x;q)_inf^-1 * sum(...); both factors must have minimum exponent >= 0
// (order tracking raises OrderExceeded otherwise).
struct CatalogTerm {
    Rat coef = 1;
    Rat shift = 0;
    std::optional<ProductSpec> prefactor;
    std::variant<SumSpec, ProductSpec> body;
};

enum class EntryStatus { Proved, Conjecture, Parameterized };

// A verifiable identity: two weighted term sequences that must agree as
// series. Parameterized entries carry sample instantiations; the term
// sources are kept raw and parsed per sample.
struct IdentityEntry {
    std::string id;
    EntryStatus status = EntryStatus::Proved;
    std::string note;
    std::vector<ParamEnv> samples; // nonempty iff parameterized
    nlohmann::json lhs, rhs;

    // Parse one side under the given bindings.
    std::vector<CatalogTerm> side(bool left, const ParamEnv& env) const;

    static IdentityEntry from_json(const nlohmann::json& j);
};

// Load and validate a catalog file (JSON array of entries). Every side is
// parsed under every sample so malformed data fails here, naming the entry;
// duplicate ids are rejected.
std::vector<IdentityEntry> load_catalog(const std::string& path);

enum class Verdict { Pass, Fail, Divergent };
std::string verdict_name(Verdict v);

struct VerifyResult {
    std::string id;
    std::string status;                // echoed from the entry, never altered
    Verdict verdict = Verdict::Pass;
    std::optional<Rat> first_mismatch; // exponent of the first differing coefficient
    std::string detail;                // failing sample or divergence reason
    long millis = 0;
};

// Sum of the evaluated terms, exact to order N.
Series eval_terms(const std::vector<CatalogTerm>& terms, const Rat& N);

// Exact coefficient comparison of both sides to order N (every sample must
// pass). Divergence of any term surfaces as the Divergent verdict.
VerifyResult verify_entry(const IdentityEntry& e, const Rat& N);

// '*'-wildcard match on ids, e.g. "s-*" or "*".
bool matches_filter(const std::string& id, const std::string& filter);

// Verify the filtered catalog; results sorted by id. jobs > 1 runs entries
// concurrently (the report is deterministic either way).
std::vector<VerifyResult> verify_all(const std::vector<IdentityEntry>& cat, const Rat& N,
                                     const std::string& filter = "*", int jobs = 1);

nlohmann::json report_json(const std::vector<VerifyResult>& results);

} // namespace qrr

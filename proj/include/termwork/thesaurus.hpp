#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "termwork/term_extraction.hpp"

namespace termwork {

enum class EntryStatus { Candidate, Approved, Rejected };
enum class EntryKind { Term, Category };

std::string_view to_string(EntryStatus s);
EntryStatus parse_status(std::string_view s);

/// Reliability tiers of a term's source. 0 means "not rated".
enum Reliability : int {
    kUnrated = 0,
    kCommitteeAuthorized = 1,
    kJournalUsage = 2,
    kPublicSubmission = 3,
};

struct Explanation {
    std::string text;
    std::string category;  // sub-topic

    bool operator==(const Explanation&) const = default;
};

struct Translation {
    std::string phrase;
    /// Where the translation came from ("manual", "suggestion:translation-miner", ...).
    std::string source;

    bool operator==(const Translation&) const = default;
};

struct Revision {
    std::string timestamp;
    std::string editor;
    std::string summary;

    bool operator==(const Revision&) const = default;
};

struct ThesaurusEntry {
    std::string id;
    EntryKind kind = EntryKind::Term;
    std::string term;
    std::vector<std::string> variants;
    std::vector<Explanation> explanations;
    std::map<std::string, std::vector<Translation>> translations;
    std::vector<std::string> broader;
    /// Maintained by the store as the inverse of `broader`; ignored on input.
    std::vector<std::string> narrower;
    EntryStatus status = EntryStatus::Approved;
    std::string source;
    int reliability = kUnrated;
    std::map<std::string, std::string> provenance;
    std::vector<Revision> revisions;

    nlohmann::json to_json() const;
    static ThesaurusEntry from_json(const nlohmann::json& j);
};

struct StoreOptions {
    std::set<std::string> translation_languages{"en", "de", "fr", "ru", "sk"};
    /// Produces revision timestamps; defaults to the UTC wall clock.
    std::function<std::string()> clock;
};

/// Parent-first view of the broader relation.
struct TreeNode {
    std::string id;
    std::string term;
    EntryStatus status = EntryStatus::Approved;
    bool has_children = false;
    std::vector<TreeNode> children;

    nlohmann::json to_json() const;
};

struct TreeOptions {
    bool include_rejected = false;
    /// Levels below the requested roots to expand; 0 expands everything.
    std::size_t depth = 0;
};

struct CloseTerm {
    std::string id;
    double score = 0.0;
};

/// Document store of thesaurus entries keyed by id with a secondary index on
/// the normalized term. Keeps broader/narrower mutually inverse and the
/// broader relation acyclic. Not internally synchronized: callers provide
/// single-writer/multi-reader exclusion.
class ThesaurusStore {
public:
    static constexpr std::string_view kCandidateCategoryId = "candidates";

    explicit ThesaurusStore(StoreOptions options = {});

    /// Creates (empty or unknown id) or replaces an entry and appends one
    /// revision. Errors: Error("invalid_entry"), Error("unknown_broader"),
    /// Error("cycle") with the offending path, Error("conflict") when
    /// `expected_revisions` does not match the stored revision count.
    std::string upsert_entry(ThesaurusEntry entry, std::string_view editor, std::string_view summary = {},
                             std::optional<std::size_t> expected_revisions = std::nullopt);

    const ThesaurusEntry* find(std::string_view id) const;
    /// Throws Error("not_found").
    const ThesaurusEntry& get(std::string_view id) const;
    /// Ids whose normalized term equals normalize_phrase(term).
    std::vector<std::string> find_by_term(std::string_view term) const;

    const std::map<std::string, ThesaurusEntry, std::less<>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// Creates the category node that parents unreviewed candidates.
    const std::string& ensure_candidate_category(std::string_view editor);

    /// Full-scan check of relation inversion, self-loops, acyclicity and
    /// reference integrity. Returns human-readable violations.
    std::vector<std::string> validate() const;

    /// Versioned full dump including revision history.
    nlohmann::json dump() const;
    static ThesaurusStore restore(const nlohmann::json& dump, StoreOptions options = {});

    void save(const std::string& path) const;
    static ThesaurusStore load(const std::string& path, StoreOptions options = {});

    const StoreOptions& options() const { return options_; }

private:
    std::string next_id();
    std::string now() const;
    std::vector<std::string> path_to(std::string_view from, std::string_view to) const;
    void index_term(const ThesaurusEntry& e);
    void unindex_term(const ThesaurusEntry& e);

    StoreOptions options_;
    std::map<std::string, ThesaurusEntry, std::less<>> entries_;
    std::map<std::string, std::set<std::string>, std::less<>> term_index_;
    std::uint64_t counter_ = 0;
    std::string candidate_category_;
};

/// Entries whose term has lexsim >= threshold with `term`, compared after
/// diacritics are stripped, so "katastralni mapa" meets "katastrální mapa".
/// Sorted by score descending, then id.
std::vector<CloseTerm> detect_close_terms(std::string_view term, const ThesaurusStore& store,
                                          double threshold = 0.8);

std::vector<TreeNode> tree(const ThesaurusStore& store, std::optional<std::string_view> root = std::nullopt,
                           const TreeOptions& options = {});

/// Adds the top `limit` ranked terms (0 = all) that are not yet in the store
/// as candidate entries with source "auto-extraction" and the rank figures in
/// their provenance. Returns the created ids.
std::vector<std::string> import_term_candidates(ThesaurusStore& store, const std::vector<TermCandidate>& ranked,
                                                std::size_t limit, std::string_view editor);

/// Terms of every non-category, non-rejected entry.
std::vector<std::string> store_terms(const ThesaurusStore& store);

}  // namespace termwork

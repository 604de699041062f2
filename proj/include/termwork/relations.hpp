#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "termwork/corpus.hpp"
#include "termwork/term_grammar.hpp"

namespace termwork {

/// log2(2 * f12 / (f1 + f2)), with no additive constant. Returns -infinity
/// when f12 == 0. Throws Error("invalid_argument") unless
/// f1 >= f12, f2 >= f12 and f1 + f2 > 0.
double logdice(std::uint64_t f1, std::uint64_t f2, std::uint64_t f12);

/// Jaccard similarity of the character-bigram sets of two phrases, after
/// case folding and whitespace collapsing. Spaces count as characters, so
/// bigrams span word boundaries. Phrases shorter than two characters score
/// 1.0 when equal and 0.0 otherwise.
double lexsim(std::string_view t1, std::string_view t2);

/// A two-slot lexico-syntactic template such as
/// `HYPONYM [word=is|are] [word=a|an|the]? HYPERNYM`. The slots sit at the two
/// ends; the connective between them uses the grammar constraint syntax.
struct HypernymPattern {
    int id = 0;
    std::string template_text;
    double weight = 1.0;
    bool enabled = true;
    bool hyponym_first = true;
    TokenPattern connective;

    std::string method() const { return "pattern-" + std::to_string(id); }

    /// Throws Error("pattern_syntax") unless each slot occurs exactly once at
    /// either end, the connective is non-empty, and weight lies in [0, 1].
    static HypernymPattern compile(int id, std::string_view template_text, double weight,
                                   bool enabled = true);
};

/// Reads `{"patterns": [{"id", "weight", "enabled", "templates": {lang: text}}]}`
/// and returns the enabled patterns for `language`. An enabled pattern
/// without a template for that language raises Error("missing_lexicalization").
std::vector<HypernymPattern> load_patterns(const nlohmann::json& config, std::string_view language,
                                           bool include_disabled = false);

/// Built-in configuration covering English and Czech; pattern 3 carries a
/// lower weight and the "known/denoted as" pattern ships disabled.
nlohmann::json default_pattern_config();

struct Evidence {
    std::string doc_id;
    std::uint32_t offset = 0;

    bool operator==(const Evidence&) const = default;
};

struct RelationCandidate {
    std::string hyponym;
    std::string hypernym;
    std::string method;  // "pattern-N" or "lexsim"
    double score = 0.0;
    /// Raw association before weighting: logDice for pattern methods,
    /// lexsim for the lexical method.
    double association = 0.0;
    std::vector<Evidence> evidence;

    nlohmann::json to_json() const;
    static RelationCandidate from_json(const nlohmann::json& j);
};

/// Number of co-occurrences of two phrases within one paragraph, summed over
/// paragraphs as min(count1, count2). Never exceeds either phrase frequency.
std::uint64_t paragraph_cooccurrence(const CorpusIndex& index, std::string_view t1, std::string_view t2);

/// Scans every paragraph for `NP connective NP`, where NP is the leftmost-
/// longest match of `np_rule`. When several patterns fit at one place the
/// longest connective wins. One candidate per (hyponym, hypernym, pattern)
/// carries all evidence positions; score = log2(weight * 2 f12 / (f1 + f2)).
/// Sorted by descending score.
std::vector<RelationCandidate> extract_hypernym_pairs(const CorpusIndex& index,
                                                      const std::vector<HypernymPattern>& patterns,
                                                      const TokenPattern& np_rule);

struct SuggestOptions {
    double lexsim_threshold = 0.5;
};

/// Merges pattern candidates whose hyponym is `term` (scores min-max
/// normalized to [0, 1] per query) with `known_terms` whose lexsim to `term`
/// reaches the threshold. One candidate per hypernym, the higher score kept.
std::vector<RelationCandidate> suggest_hypernyms(std::string_view term,
                                                 const std::vector<RelationCandidate>& pattern_candidates,
                                                 const std::vector<std::string>& known_terms,
                                                 const SuggestOptions& options = {});

}  // namespace termwork

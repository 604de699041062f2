#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "termwork/corpus.hpp"

namespace termwork {

struct CollocateProfile {
    std::string term;
    std::string language;
    std::map<std::string, std::uint64_t> collocates;

    bool operator==(const CollocateProfile&) const = default;
};

struct ProfileOptions {
    std::size_t window = 5;
    /// Words allowed as collocates; nullopt admits every word.
    std::optional<std::set<std::string>> vocabulary;
    std::set<std::string> stop_words;
};

/// Counts vocabulary words within +-window tokens of each occurrence of
/// `term`, inside the occurrence's paragraph. Stop words, punctuation and
/// the term's own words are excluded. Absent terms give an empty profile.
CollocateProfile collocate_profile(const CorpusIndex& index, std::string_view term,
                                   const ProfileOptions& options);

/// Word set of a term-candidate list, optionally extended with every
/// NOUN/ADJ/VERB token of `index`.
std::set<std::string> term_vocabulary(const std::vector<std::string>& terms,
                                      const CorpusIndex* content_words_from = nullptr);

class BilingualLexicon {
public:
    BilingualLexicon(std::string source_language, std::string target_language)
        : source_language_(std::move(source_language)), target_language_(std::move(target_language)) {}

    void add(std::string_view source_word, std::string_view target_word);
    /// Case-folded lookup; nullptr when the word has no entry.
    const std::set<std::string>* lookup(std::string_view source_word) const;

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::string& source_language() const { return source_language_; }
    const std::string& target_language() const { return target_language_; }
    const std::map<std::string, std::set<std::string>, std::less<>>& entries() const { return entries_; }

    /// `source<TAB>target` per line; duplicates merge, '#' lines are comments.
    static BilingualLexicon read_tsv(std::istream& in, std::string source_language,
                                     std::string target_language);

private:
    std::string source_language_;
    std::string target_language_;
    std::map<std::string, std::set<std::string>, std::less<>> entries_;
};

struct TranslationCandidate {
    std::string source_term;
    std::string target_term;
    std::size_t overlap = 0;
    std::size_t rank = 0;  // 1-based
};

struct TargetTerm {
    std::string term;
    std::uint64_t frequency = 0;
    CollocateProfile profile;
};

/// Profiles every target-side candidate term with the same window policy.
std::vector<TargetTerm> build_target_side(const CorpusIndex& target_index,
                                          const std::vector<std::string>& target_terms,
                                          const ProfileOptions& options);

/// overlap(s, t) = number of source collocates with a lexicon translation in
/// the profile of t. Zero-overlap targets are dropped; the rest sort by
/// overlap, then target frequency, then phrase, truncated to k. Throws
/// Error("empty_lexicon") when the lexicon has no entries.
std::vector<TranslationCandidate> translation_candidates(const CollocateProfile& source,
                                                         const std::vector<TargetTerm>& targets,
                                                         const BilingualLexicon& lexicon,
                                                         std::size_t k = 10);

std::vector<TranslationCandidate> translation_candidates(const CollocateProfile& source,
                                                         const CorpusIndex& target_index,
                                                         const std::vector<std::string>& target_terms,
                                                         const BilingualLexicon& lexicon, std::size_t k,
                                                         const ProfileOptions& options);

using GoldTranslations = std::map<std::string, std::set<std::string>>;
using CandidateLists = std::map<std::string, std::vector<TranslationCandidate>>;

/// Fraction of gold source terms whose accepted translations include one of
/// the first k candidates (exact match after normalization). Throws
/// Error("invalid_argument") for empty gold or k == 0.
double evaluate_translations(const GoldTranslations& gold, const CandidateLists& candidates, std::size_t k);

nlohmann::json to_json(const CandidateLists& lists);
CandidateLists candidate_lists_from_json(const nlohmann::json& j);

/// Cosine similarity of two collocate-count vectors; 0 if either is empty.
double cosine(const CollocateProfile& a, const CollocateProfile& b);

struct RelatedTerm {
    std::string term;
    double similarity = 0.0;
};

/// Pool members with positive cosine similarity to `query`, descending
/// similarity then term. The query term itself is skipped.
std::vector<RelatedTerm> related_terms(const CollocateProfile& query,
                                       const std::vector<CollocateProfile>& pool);

}  // namespace termwork

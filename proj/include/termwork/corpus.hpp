#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace termwork {

/// Coarse part-of-speech label assigned by a Tagger.
enum class Tag { Noun, Adj, Prep, Verb, Other, Punct };

std::string_view to_string(Tag tag);
/// Accepts the upper-case names used in grammar files (NOUN, ADJ, ...).
bool parse_tag(std::string_view name, Tag& out);

struct Token {
    std::string surface;
    std::string normalized;
    Tag tag = Tag::Other;

    bool operator==(const Token&) const = default;
};

enum class Quality { Good, Boilerplate };

std::string_view to_string(Quality q);

struct Paragraph {
    std::string text;
    Quality quality = Quality::Good;

    bool operator==(const Paragraph&) const = default;
};

struct Document {
    std::string id;
    std::string source;
    std::string language;
    std::vector<Paragraph> paragraphs;
    std::string fetched_at;

    bool operator==(const Document&) const = default;
};

/// Closed-class lexicons and suffix rules for one language. The rule tagger
/// and the cleaning heuristics read from it.
struct LanguageProfile {
    std::string code;
    std::set<std::string> prepositions;
    std::set<std::string> function_words;
    std::set<std::string> verbs;
    std::set<std::string> adjectives;
    std::set<std::string> nouns;
    std::vector<std::string> adjective_suffixes;
    std::set<std::string> stop_words;

    /// Built-in profiles exist for "en" and "cs"; any other code yields an
    /// empty profile (every content word tagged NOUN, no stop list).
    static LanguageProfile builtin(std::string_view code);
    static LanguageProfile from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Reads a stop list: one word per line, '#' starts a comment.
std::set<std::string> read_stop_words(const std::string& path);

class Tagger {
public:
    virtual ~Tagger() = default;
    virtual Tag tag(std::string_view normalized) const = 0;
};

/// Lexicon lookup first, then adjective suffixes; content words default to NOUN.
class RuleTagger final : public Tagger {
public:
    explicit RuleTagger(LanguageProfile profile) : profile_(std::move(profile)) {}
    Tag tag(std::string_view normalized) const override;

private:
    LanguageProfile profile_;
};

class Tokenizer {
public:
    explicit Tokenizer(LanguageProfile profile, std::shared_ptr<const Tagger> tagger = nullptr);

    std::vector<Token> tokenize(std::string_view text) const;
    const LanguageProfile& profile() const { return profile_; }

private:
    LanguageProfile profile_;
    std::shared_ptr<const Tagger> tagger_;
};

/// Splits on whitespace and punctuation; hyphenated words, digit groups
/// (3.5, 1,000) and in-word apostrophes stay single tokens.
std::vector<Token> tokenize(std::string_view text, const LanguageProfile& profile);

struct TaggedParagraph {
    Quality quality = Quality::Good;
    std::vector<Token> tokens;

    bool operator==(const TaggedParagraph&) const = default;
};

struct TaggedDocument {
    std::string id;
    std::string source;
    std::string language;
    std::string fetched_at;
    std::vector<TaggedParagraph> paragraphs;

    bool operator==(const TaggedDocument&) const = default;
};

TaggedDocument tag_document(const Document& doc, const Tokenizer& tokenizer);
/// Paragraph text becomes the surfaces joined by single spaces.
Document untag_document(const TaggedDocument& doc);

struct Position {
    std::uint32_t doc = 0;     // index into CorpusIndex::documents()
    std::uint32_t offset = 0;  // token offset inside that document

    auto operator<=>(const Position&) const = default;
};

struct IndexedDocument {
    std::string id;
    std::string source;
    std::string fetched_at;
    std::vector<Token> tokens;
    /// Offsets where each indexed paragraph starts; first element is 0.
    std::vector<std::uint32_t> paragraph_starts;

    std::uint32_t paragraph_of(std::uint32_t offset) const;
    /// Half-open token range [begin, end) of paragraph `p`.
    std::pair<std::uint32_t, std::uint32_t> paragraph_range(std::uint32_t p) const;
};

/// Immutable token-level index over the good paragraphs of a document set.
class CorpusIndex {
public:
    CorpusIndex() = default;

    const std::string& language() const { return language_; }
    std::uint64_t token_count() const { return token_count_; }
    std::size_t doc_count() const { return documents_.size(); }
    const std::vector<IndexedDocument>& documents() const { return documents_; }
    const std::map<std::string, std::uint64_t>& unigram_freq() const { return unigram_freq_; }

    /// All occurrences of a normalized token sequence, in (doc, offset)
    /// order. Matches never cross paragraph boundaries.
    std::vector<Position> find(std::span<const std::string> phrase) const;
    std::vector<Position> find(std::string_view phrase) const;
    std::size_t count(std::string_view phrase) const { return find(phrase).size(); }

    friend CorpusIndex build_corpus(std::vector<TaggedDocument> documents);

private:
    std::string language_;
    std::uint64_t token_count_ = 0;
    std::vector<IndexedDocument> documents_;
    std::map<std::string, std::uint64_t> unigram_freq_;
    std::map<std::string, std::vector<Position>, std::less<>> postings_;
};

/// Indexes good paragraphs only. Throws Error("mixed_language") when the
/// documents disagree on language.
CorpusIndex build_corpus(std::vector<TaggedDocument> documents);
CorpusIndex build_corpus(const std::vector<Document>& documents, const Tokenizer& tokenizer);

struct ConcordanceLine {
    std::string doc_id;
    std::uint32_t offset = 0;
    std::vector<std::string> left;
    std::vector<std::string> match;
    std::vector<std::string> right;

    std::string text() const;
};

/// Keyword-in-context lines for `phrase` (tokens are normalized internally),
/// ordered by (doc id, offset). Context stops at document boundaries.
std::vector<ConcordanceLine> concordance(const CorpusIndex& index,
                                         std::span<const std::string> phrase,
                                         std::size_t window);
std::vector<ConcordanceLine> concordance(const CorpusIndex& index, std::string_view phrase,
                                         std::size_t window);

struct CorpusStats {
    std::uint64_t documents = 0;
    std::uint64_t tokens = 0;
    std::uint64_t unique_tokens = 0;

    bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(const CorpusIndex& index);

}  // namespace termwork

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "termwork/corpus.hpp"
#include "termwork/error.hpp"

namespace termwork {

/// A grammar rule failed to parse. `rule_index()` is 0-based; `position()` is
/// the byte offset inside that rule's text.
class GrammarSyntaxError : public Error {
public:
    GrammarSyntaxError(std::size_t rule_index, std::size_t position, const std::string& what);
    std::size_t rule_index() const noexcept { return rule_index_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t rule_index_;
    std::size_t position_;
};

/// One bracketed constraint: `[tag=NOUN|ADJ]` or `[word=is|are]`.
struct TokenConstraint {
    enum class Kind { Tag, Word };
    Kind kind = Kind::Tag;
    std::vector<Tag> tags;
    std::vector<std::string> words;  // case-folded

    bool matches(const Token& token) const;
};

enum class Quantifier { One, Optional, Star, Plus };

struct PatternElement {
    TokenConstraint constraint;
    Quantifier quantifier = Quantifier::One;
};

/// A sequence of quantified constraints compiled to a position automaton
/// (one state per element plus a start state).
class TokenPattern {
public:
    /// Throws GrammarSyntaxError(rule_index, position, ...).
    static TokenPattern compile(std::string_view source, std::size_t rule_index = 0);
    static TokenPattern from_elements(std::vector<PatternElement> elements, std::string source = {});

    /// Sorted end offsets (exclusive) of every non-empty match anchored at
    /// `begin`.
    std::vector<std::size_t> match_ends(std::span<const Token> tokens, std::size_t begin) const;
    /// End of the longest non-empty match anchored at `begin`.
    std::optional<std::size_t> longest_match(std::span<const Token> tokens, std::size_t begin) const;

    const std::string& source() const { return source_; }
    const std::vector<PatternElement>& elements() const { return elements_; }

private:
    void build();

    std::string source_;
    std::vector<PatternElement> elements_;
    // follow_[0] is the start state; follow_[i + 1] belongs to element i.
    std::vector<std::vector<std::size_t>> follow_;
    std::vector<bool> accepting_;
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Span&) const = default;
};

/// Leftmost-longest, non-overlapping matches of `pattern` over `tokens`.
std::vector<Span> find_matches(const TokenPattern& pattern, std::span<const Token> tokens);

struct TermGrammar {
    std::vector<TokenPattern> rules;
};

/// Throws GrammarSyntaxError for a bad rule and Error("empty_grammar") for
/// an empty rule list.
TermGrammar compile_term_grammar(const std::vector<std::string>& rule_texts);

/// One rule per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> read_grammar_rules(const std::string& path);

}  // namespace termwork

#include "termwork/term_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "termwork/text.hpp"

namespace termwork {

GrammarSyntaxError::GrammarSyntaxError(std::size_t rule_index, std::size_t position,
                                       const std::string& what)
    : Error("grammar_syntax", "rule " + std::to_string(rule_index) + ", position " +
                                  std::to_string(position) + ": " + what),
      rule_index_(rule_index),
      position_(position) {}

bool TokenConstraint::matches(const Token& token) const {
    if (kind == Kind::Tag) return std::find(tags.begin(), tags.end(), token.tag) != tags.end();
    return std::find(words.begin(), words.end(), token.normalized) != words.end();
}

namespace {

bool nullable(Quantifier q) { return q == Quantifier::Optional || q == Quantifier::Star; }
bool loops(Quantifier q) { return q == Quantifier::Star || q == Quantifier::Plus; }

}  // namespace

TokenPattern TokenPattern::compile(std::string_view src, std::size_t rule_index) {
    std::vector<PatternElement> elements;
    std::size_t i = 0;
    auto fail = [&](std::size_t pos, const std::string& what) {
        throw GrammarSyntaxError(rule_index, pos, what);
    };
    while (true) {
        while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
        if (i >= src.size()) break;
        if (src[i] != '[') fail(i, "expected '['");
        const std::size_t open = i;
        const auto close = src.find(']', open);
        if (close == std::string_view::npos) fail(open, "unterminated constraint");
        const std::string_view body = src.substr(open + 1, close - open - 1);
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) fail(open + 1, "expected key=value");
        const std::string key = text::trim(body.substr(0, eq));
        PatternElement el;
        if (key == "tag") {
            el.constraint.kind = TokenConstraint::Kind::Tag;
        } else if (key == "word") {
            el.constraint.kind = TokenConstraint::Kind::Word;
        } else {
            fail(open + 1, "unknown key '" + key + "'");
        }
        std::size_t vpos = open + 1 + eq + 1;
        for (const auto& raw : text::split(body.substr(eq + 1), '|')) {
            const std::string value = text::trim(raw);
            if (value.empty()) fail(vpos, "empty alternative");
            if (el.constraint.kind == TokenConstraint::Kind::Tag) {
                Tag t{};
                if (!parse_tag(value, t)) fail(vpos, "unknown tag '" + value + "'");
                el.constraint.tags.push_back(t);
            } else {
                el.constraint.words.push_back(text::fold_case(value));
            }
            vpos += raw.size() + 1;
        }
        i = close + 1;
        if (i < src.size()) {
            switch (src[i]) {
                case '?': el.quantifier = Quantifier::Optional; ++i; break;
                case '*': el.quantifier = Quantifier::Star; ++i; break;
                case '+': el.quantifier = Quantifier::Plus; ++i; break;
                default: break;
            }
        }
        if (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i]))) {
            fail(i, "expected whitespace between constraints");
        }
        elements.push_back(std::move(el));
    }
    if (elements.empty()) fail(0, "rule has no constraints");
    return from_elements(std::move(elements), std::string(src));
}

TokenPattern TokenPattern::from_elements(std::vector<PatternElement> elements, std::string source) {
    TokenPattern p;
    p.elements_ = std::move(elements);
    p.source_ = std::move(source);
    p.build();
    return p;
}

void TokenPattern::build() {
    const std::size_t m = elements_.size();
    follow_.assign(m + 1, {});
    accepting_.assign(m + 1, false);
    // Elements reachable right after state s (s = 0 is start, s = i + 1 is
    // "just consumed element i").
    for (std::size_t s = 0; s <= m; ++s) {
        if (s > 0 && loops(elements_[s - 1].quantifier)) follow_[s].push_back(s - 1);
        for (std::size_t j = s; j < m; ++j) {
            follow_[s].push_back(j);
            if (!nullable(elements_[j].quantifier)) break;
        }
        bool rest_nullable = true;
        for (std::size_t j = s; j < m; ++j) rest_nullable = rest_nullable && nullable(elements_[j].quantifier);
        accepting_[s] = rest_nullable;
    }
}

std::vector<std::size_t> TokenPattern::match_ends(std::span<const Token> tokens, std::size_t begin) const {
    std::vector<std::size_t> ends;
    const std::size_t m = elements_.size();
    std::vector<char> current(m + 1, 0);
    std::vector<char> next(m + 1, 0);
    current[0] = 1;
    for (std::size_t pos = begin; pos < tokens.size(); ++pos) {
        std::fill(next.begin(), next.end(), 0);
        bool any = false;
        for (std::size_t s = 0; s <= m; ++s) {
            if (!current[s]) continue;
            for (std::size_t e : follow_[s]) {
                if (!next[e + 1] && elements_[e].constraint.matches(tokens[pos])) {
                    next[e + 1] = 1;
                    any = true;
                }
            }
        }
        if (!any) break;
        current.swap(next);
        for (std::size_t s = 1; s <= m; ++s) {
            if (current[s] && accepting_[s]) {
                ends.push_back(pos + 1);
                break;
            }
        }
    }
    return ends;
}

std::optional<std::size_t> TokenPattern::longest_match(std::span<const Token> tokens, std::size_t begin) const {
    const auto ends = match_ends(tokens, begin);
    if (ends.empty()) return std::nullopt;
    return ends.back();
}

std::vector<Span> find_matches(const TokenPattern& pattern, std::span<const Token> tokens) {
    std::vector<Span> spans;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (const auto end = pattern.longest_match(tokens, i)) {
            spans.push_back({i, *end});
            i = *end;
        } else {
            ++i;
        }
    }
    return spans;
}

TermGrammar compile_term_grammar(const std::vector<std::string>& rule_texts) {
    if (rule_texts.empty()) throw Error("empty_grammar", "a term grammar needs at least one rule");
    TermGrammar g;
    for (std::size_t i = 0; i < rule_texts.size(); ++i) {
        g.rules.push_back(TokenPattern::compile(rule_texts[i], i));
    }
    return g;
}

std::vector<std::string> read_grammar_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot read grammar " + path);
    std::vector<std::string> rules;
    std::string line;
    while (std::getline(in, line)) {
        auto t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        rules.push_back(std::move(t));
    }
    return rules;
}

}  // namespace termwork

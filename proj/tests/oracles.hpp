// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code paths with the library beyond
// UTF-8 decoding and basic data types.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "termwork/corpus.hpp"
#include "termwork/term_grammar.hpp"
#include "termwork/text.hpp"

namespace oracle {

using termwork::PatternElement;
using termwork::Quantifier;
using termwork::Token;

// Plain recursive backtracking over (element, position); collects every end
// offset reachable after consuming all elements.
inline void backtrack(const std::vector<PatternElement>& els, std::size_t e, const std::vector<Token>& toks,
                      std::size_t pos, std::set<std::size_t>& ends) {
    if (e == els.size()) {
        ends.insert(pos);
        return;
    }
    const auto& el = els[e];
    auto ok = [&](std::size_t p) { return p < toks.size() && el.constraint.matches(toks[p]); };
    switch (el.quantifier) {
        case Quantifier::One:
            if (ok(pos)) backtrack(els, e + 1, toks, pos + 1, ends);
            break;
        case Quantifier::Optional:
            backtrack(els, e + 1, toks, pos, ends);
            if (ok(pos)) backtrack(els, e + 1, toks, pos + 1, ends);
            break;
        case Quantifier::Star:
        case Quantifier::Plus: {
            std::size_t p = pos;
            if (el.quantifier == Quantifier::Star) backtrack(els, e + 1, toks, p, ends);
            while (ok(p)) {
                ++p;
                backtrack(els, e + 1, toks, p, ends);
            }
            break;
        }
    }
}

/// Non-empty match ends anchored at `begin`, ascending.
inline std::vector<std::size_t> match_ends(const std::vector<PatternElement>& els, const std::vector<Token>& toks,
                                           std::size_t begin) {
    std::set<std::size_t> ends;
    backtrack(els, 0, toks, begin, ends);
    ends.erase(begin);
    return {ends.begin(), ends.end()};
}

/// Leftmost-longest non-overlapping scan built on the brute-force matcher.
inline std::vector<std::pair<std::size_t, std::size_t>> scan(const std::vector<PatternElement>& els,
                                                             const std::vector<Token>& toks) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t i = 0;
    while (i < toks.size()) {
        const auto ends = match_ends(els, toks, i);
        if (ends.empty()) {
            ++i;
        } else {
            out.emplace_back(i, ends.back());
            i = ends.back();
        }
    }
    return out;
}

/// Phrase counts from the brute-force scanner, rule by rule, paragraph by
/// paragraph, skipping boilerplate.
inline std::map<std::string, std::uint64_t> grammar_counts(const std::vector<termwork::TaggedDocument>& docs,
                                                           const termwork::TermGrammar& g) {
    std::map<std::string, std::uint64_t> out;
    for (const auto& d : docs)
        for (const auto& p : d.paragraphs) {
            if (p.quality != termwork::Quality::Good) continue;
            for (const auto& rule : g.rules)
                for (const auto& [b, e] : scan(rule.elements(), p.tokens)) {
                    std::string s;
                    for (auto i = b; i < e; ++i) s += (i > b ? " " : "") + p.tokens[i].normalized;
                    ++out[s];
                }
        }
    return out;
}

/// Counts occurrences of a token sequence inside each paragraph.
inline std::uint64_t count_phrase(const std::vector<std::vector<std::string>>& paragraphs,
                                  const std::vector<std::string>& phrase) {
    std::uint64_t n = 0;
    for (const auto& p : paragraphs) {
        for (std::size_t i = 0; i + phrase.size() <= p.size(); ++i) {
            bool same = true;
            for (std::size_t k = 0; k < phrase.size() && same; ++k) same = p[i + k] == phrase[k];
            if (same) ++n;
        }
    }
    return n;
}

/// Per-million relative frequency ratio computed directly.
inline double rank(std::uint64_t count, std::uint64_t size, std::uint64_t ref_count, std::uint64_t ref_size,
                   double n) {
    const double f = size == 0 ? 0.0 : static_cast<double>(count) * 1e6 / static_cast<double>(size);
    const double fr = ref_size == 0 ? 0.0 : static_cast<double>(ref_count) * 1e6 / static_cast<double>(ref_size);
    return (f + n) / (fr + n);
}

/// Character-bigram Jaccard after case folding and whitespace collapsing;
/// the space between words is an ordinary character.
inline double lexsim(const std::string& a, const std::string& b) {
    auto bigrams = [](const std::string& s) {
        std::string collapsed;
        for (const auto& w : termwork::text::split_ws(s)) {
            if (!collapsed.empty()) collapsed += ' ';
            collapsed += termwork::text::fold_case(w);
        }
        const auto u = termwork::text::decode(collapsed);
        std::set<std::u32string> out;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) out.insert(u.substr(i, 2));
        return std::make_pair(out, u);
    };
    const auto [x, ux] = bigrams(a);
    const auto [y, uy] = bigrams(b);
    if (x.empty() || y.empty()) return ux == uy ? 1.0 : 0.0;
    std::size_t inter = 0;
    for (const auto& g : x) inter += y.count(g);
    return static_cast<double>(inter) / static_cast<double>(x.size() + y.size() - inter);
}

/// Collocate counts by scanning +-window around each occurrence of `phrase`
/// within a paragraph (a token sequence), skipping the excluded words and
/// the occurrence itself.
inline std::map<std::string, std::uint64_t> window_counts(const std::vector<std::vector<std::string>>& paragraphs,
                                                          const std::vector<std::string>& phrase, std::size_t window,
                                                          const std::set<std::string>& excluded) {
    std::map<std::string, std::uint64_t> out;
    for (const auto& p : paragraphs) {
        for (std::size_t i = 0; i + phrase.size() <= p.size(); ++i) {
            bool same = true;
            for (std::size_t k = 0; k < phrase.size() && same; ++k) same = p[i + k] == phrase[k];
            if (!same) continue;
            const std::size_t lo = i >= window ? i - window : 0;
            const std::size_t hi = std::min(p.size(), i + phrase.size() + window);
            for (std::size_t j = lo; j < hi; ++j) {
                if (j >= i && j < i + phrase.size()) continue;
                if (!excluded.count(p[j])) ++out[p[j]];
            }
        }
    }
    return out;
}

inline double cosine(const std::map<std::string, std::uint64_t>& a, const std::map<std::string, std::uint64_t>& b) {
    double dot = 0, na = 0, nb = 0;
    for (const auto& [k, v] : a) {
        na += static_cast<double>(v) * static_cast<double>(v);
        const auto it = b.find(k);
        if (it != b.end()) dot += static_cast<double>(v) * static_cast<double>(it->second);
    }
    for (const auto& [k, v] : b) nb += static_cast<double>(v) * static_cast<double>(v);
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double logdice(double f1, double f2, double f12) { return std::log2(2.0 * f12 / (f1 + f2)); }

}  // namespace oracle

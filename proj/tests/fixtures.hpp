// Seeded generators for synthetic corpora, documents and stores.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "termwork/corpus.hpp"
#include "termwork/text.hpp"
#include "termwork/thesaurus.hpp"

namespace fixture {

using termwork::Tag;
using termwork::TaggedDocument;
using termwork::TaggedParagraph;
using termwork::Token;

inline Token tok(const std::string& word, Tag tag) { return {word, termwork::text::fold_case(word), tag}; }

/// Builds a document from "word/TAG word/TAG ..." paragraphs.
inline TaggedDocument tagged(const std::string& id, const std::vector<std::string>& paragraphs,
                             const std::string& lang = "en") {
    TaggedDocument d{id, "test:" + id, lang, "", {}};
    for (const auto& p : paragraphs) {
        TaggedParagraph para;
        for (const auto& wt : termwork::text::split_ws(p)) {
            const auto slash = wt.rfind('/');
            Tag t = Tag::Noun;
            if (!termwork::parse_tag(wt.substr(slash + 1), t)) throw std::runtime_error("bad tag in " + wt);
            para.tokens.push_back(tok(wt.substr(0, slash), t));
        }
        d.paragraphs.push_back(std::move(para));
    }
    return d;
}

/// Pronounceable pseudo-words, unique per index.
inline std::string pseudo_word(std::size_t i, const std::string& suffix = "") {
    static const char* kOnset[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
    static const char* kVowel[] = {"a", "e", "i", "o", "u"};
    std::string w;
    std::size_t x = i + 1;
    do {
        w += kOnset[x % 14];
        x /= 14;
        w += kVowel[x % 5];
        x /= 5;
    } while (x > 0);
    return w + suffix;
}

/// A domain/reference corpus pair drawn from shared vocabularies with
/// different noun weights, totalling roughly `tokens` tokens.
struct RankCorpora {
    std::vector<TaggedDocument> domain;
    std::vector<TaggedDocument> reference;
};

inline RankCorpora rank_corpora(std::uint32_t seed, std::size_t tokens) {
    std::mt19937 rng(seed);
    std::vector<std::string> adjs, nouns;
    for (std::size_t i = 0; i < 40; ++i) adjs.push_back(pseudo_word(i, "al"));
    for (std::size_t i = 0; i < 120; ++i) nouns.push_back(pseudo_word(i + 500, "on"));
    const std::vector<std::string> preps{"of", "with", "in", "for"};
    const std::vector<std::string> others{"the", "a", "this", "that", "and", "we"};
    const std::vector<std::string> verbs{"shows", "uses", "measures", "gives"};

    auto corpus = [&](bool domain, const std::string& prefix) {
        // Zipf-like noun weights; the domain favours the first third.
        std::vector<double> w(nouns.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            const bool boosted = domain ? i < nouns.size() / 3 : i >= nouns.size() / 3;
            w[i] = (boosted ? 4.0 : 1.0) / static_cast<double>(1 + i % 17);
        }
        std::discrete_distribution<std::size_t> noun(w.begin(), w.end());
        std::uniform_int_distribution<std::size_t> adj(0, adjs.size() - 1), prep(0, preps.size() - 1),
            other(0, others.size() - 1), verb(0, verbs.size() - 1), coin(0, 9);
        std::vector<TaggedDocument> docs;
        std::size_t total = 0;
        while (total < tokens / 2) {
            TaggedDocument d{prefix + std::to_string(docs.size()), "synthetic", "en", "", {}};
            for (int p = 0; p < 4; ++p) {
                TaggedParagraph para;
                for (int s = 0; s < 5; ++s) {
                    para.tokens.push_back(tok(others[other(rng)], Tag::Other));
                    if (coin(rng) < 5) para.tokens.push_back(tok(adjs[adj(rng)], Tag::Adj));
                    para.tokens.push_back(tok(nouns[noun(rng)], Tag::Noun));
                    if (coin(rng) < 3) para.tokens.push_back(tok(nouns[noun(rng)], Tag::Noun));
                    para.tokens.push_back(tok(verbs[verb(rng)], Tag::Verb));
                    if (coin(rng) < 4) para.tokens.push_back(tok(adjs[adj(rng)], Tag::Adj));
                    para.tokens.push_back(tok(nouns[noun(rng)], Tag::Noun));
                    if (coin(rng) < 3) {
                        para.tokens.push_back(tok(preps[prep(rng)], Tag::Prep));
                        para.tokens.push_back(tok(nouns[noun(rng)], Tag::Noun));
                    }
                    para.tokens.push_back(tok(".", Tag::Punct));
                }
                total += para.tokens.size();
                d.paragraphs.push_back(std::move(para));
            }
            docs.push_back(std::move(d));
        }
        return docs;
    };
    return {corpus(true, "dom"), corpus(false, "ref")};
}

/// Planted (hyponym, hypernym, pattern id) triples.
struct PlantedPairs {
    std::vector<TaggedDocument> docs;
    std::vector<std::tuple<std::string, std::string, int>> pairs;
};

/// `per_pattern` instances of each English pattern 1-3 among distractor
/// sentences that contain connective words but no valid pattern.
inline PlantedPairs planted_hypernyms(std::uint32_t seed, std::size_t per_pattern) {
    std::mt19937 rng(seed);
    PlantedPairs out;
    std::size_t next = 0;
    auto np = [&](bool with_adj) {
        std::vector<Token> t;
        if (with_adj) t.push_back(tok(pseudo_word(next++, "ic"), Tag::Adj));
        t.push_back(tok(pseudo_word(next++, "um"), Tag::Noun));
        return t;
    };
    auto text_of = [](const std::vector<Token>& t) {
        std::string s;
        for (const auto& x : t) s += (s.empty() ? "" : " ") + x.normalized;
        return s;
    };
    const std::vector<std::string> kinds{"kind", "type", "part", "example", "way"};
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<std::size_t> pick(0, kinds.size() - 1);
    std::vector<TaggedParagraph> paragraphs;
    auto distractor = [&] {
        // Connective words without a noun phrase in the hypernym slot, or
        // without the required second connective word.
        TaggedParagraph p;
        auto a = np(coin(rng)), b = np(false);
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
            case 0:
                p.tokens = a;
                p.tokens.push_back(tok("is", Tag::Verb));
                p.tokens.push_back(tok("not", Tag::Other));
                p.tokens.push_back(tok("clear", Tag::Adj));
                break;
            case 1:
                p.tokens = a;
                p.tokens.push_back(tok("and", Tag::Other));
                p.tokens.push_back(tok("the", Tag::Other));
                for (auto& x : b) p.tokens.push_back(x);
                break;
            case 2:
                p.tokens.push_back(tok("we", Tag::Other));
                p.tokens.push_back(tok("measure", Tag::Verb));
                for (auto& x : a) p.tokens.push_back(x);
                p.tokens.push_back(tok("with", Tag::Prep));
                for (auto& x : b) p.tokens.push_back(x);
                break;
            default:
                p.tokens = a;
                p.tokens.push_back(tok("uses", Tag::Verb));
                p.tokens.push_back(tok("another", Tag::Other));
                p.tokens.push_back(tok("way", Tag::Noun));
                p.tokens.push_back(tok("of", Tag::Prep));
                p.tokens.push_back(tok("the", Tag::Other));
                for (auto& x : b) p.tokens.push_back(x);
                break;
        }
        p.tokens.push_back(tok(".", Tag::Punct));
        return p;
    };
    for (int pattern = 1; pattern <= 3; ++pattern) {
        for (std::size_t i = 0; i < per_pattern; ++i) {
            const auto hypo = np(coin(rng));
            const auto hyper = np(coin(rng));
            TaggedParagraph p;
            p.tokens.push_back(tok("the", Tag::Other));
            for (const auto& x : hypo) p.tokens.push_back(x);
            if (pattern == 1) {
                p.tokens.push_back(tok(coin(rng) ? "is" : "are", Tag::Verb));
                if (coin(rng)) p.tokens.push_back(tok(coin(rng) ? "a" : "the", Tag::Other));
            } else if (pattern == 2) {
                p.tokens.push_back(tok(coin(rng) ? "and" : "or", Tag::Other));
                p.tokens.push_back(tok(i % 3 == 0 ? "another" : (i % 3 == 1 ? "other" : "similar"),
                                       i % 3 == 2 ? Tag::Adj : Tag::Other));
            } else {
                p.tokens.push_back(tok("is", Tag::Verb));
                if (coin(rng)) p.tokens.push_back(tok("a", Tag::Other));
                p.tokens.push_back(tok(kinds[pick(rng)], Tag::Noun));
                p.tokens.push_back(tok("of", Tag::Prep));
                if (coin(rng)) p.tokens.push_back(tok("the", Tag::Other));
            }
            for (const auto& x : hyper) p.tokens.push_back(x);
            p.tokens.push_back(tok(".", Tag::Punct));
            paragraphs.push_back(std::move(p));
            paragraphs.push_back(distractor());
            paragraphs.push_back(distractor());
            out.pairs.emplace_back(text_of(hypo), text_of(hyper), pattern);
        }
    }
    std::shuffle(paragraphs.begin(), paragraphs.end(), rng);
    for (std::size_t i = 0; i < paragraphs.size(); i += 10) {
        TaggedDocument d{"h" + std::to_string(i / 10), "synthetic", "en", "", {}};
        for (std::size_t k = i; k < paragraphs.size() && k < i + 10; ++k) d.paragraphs.push_back(paragraphs[k]);
        out.docs.push_back(std::move(d));
    }
    return out;
}

/// Comparable corpora in two languages where every source term shares a
/// block of lexicon-linked context words with its true translation, plus
/// shared background words and some cross-term noise.
struct ComparableCorpora {
    std::vector<TaggedDocument> source;
    std::vector<TaggedDocument> target;
    std::vector<std::pair<std::string, std::string>> lexicon;  // source word, target word
    std::vector<std::pair<std::string, std::string>> gold;     // source term, target term
};

inline ComparableCorpora comparable_corpora(std::uint32_t seed, std::size_t terms) {
    std::mt19937 rng(seed);
    ComparableCorpora out;
    const std::size_t kSpecific = 6, kBackground = 12;
    std::vector<std::vector<std::string>> src_ctx(terms), tgt_ctx(terms);
    std::size_t w = 0;
    for (std::size_t t = 0; t < terms; ++t) {
        for (std::size_t k = 0; k < kSpecific; ++k) {
            src_ctx[t].push_back(pseudo_word(w, "ek"));
            tgt_ctx[t].push_back(pseudo_word(w, "ost"));
            out.lexicon.emplace_back(src_ctx[t].back(), tgt_ctx[t].back());
            ++w;
        }
    }
    std::vector<std::string> src_bg, tgt_bg;
    for (std::size_t k = 0; k < kBackground; ++k) {
        src_bg.push_back(pseudo_word(w, "ek"));
        tgt_bg.push_back(pseudo_word(w, "ost"));
        out.lexicon.emplace_back(src_bg.back(), tgt_bg.back());
        ++w;
    }
    std::vector<std::string> src_terms, tgt_terms;
    for (std::size_t t = 0; t < terms; ++t) {
        src_terms.push_back(pseudo_word(5000 + t, "ar"));
        tgt_terms.push_back(pseudo_word(7000 + t, "in"));
        out.gold.emplace_back(src_terms.back(), tgt_terms.back());
    }
    std::uniform_int_distribution<std::size_t> any_term(0, terms - 1), spec(0, kSpecific - 1),
        bg(0, kBackground - 1), coin(0, 9);
    auto build = [&](const std::vector<std::string>& term_words, const std::vector<std::vector<std::string>>& ctx,
                     const std::vector<std::string>& background, const std::string& lang) {
        std::vector<TaggedDocument> docs;
        for (std::size_t t = 0; t < terms; ++t) {
            TaggedDocument d{lang + std::to_string(t), "synthetic", lang, "", {}};
            for (int p = 0; p < 8; ++p) {
                TaggedParagraph para;
                // Term in the middle of its own context words; one noise word
                // from another term's block now and then.
                for (int c = 0; c < 3; ++c) para.tokens.push_back(tok(ctx[t][spec(rng)], Tag::Noun));
                if (coin(rng) < 3) para.tokens.push_back(tok(ctx[any_term(rng)][spec(rng)], Tag::Noun));
                para.tokens.push_back(tok(background[bg(rng)], Tag::Noun));
                para.tokens.push_back(tok(term_words[t], Tag::Noun));
                para.tokens.push_back(tok(background[bg(rng)], Tag::Noun));
                for (int c = 0; c < 2; ++c) para.tokens.push_back(tok(ctx[t][spec(rng)], Tag::Noun));
                para.tokens.push_back(tok(".", Tag::Punct));
                d.paragraphs.push_back(std::move(para));
            }
            docs.push_back(std::move(d));
        }
        std::shuffle(docs.begin(), docs.end(), rng);
        return docs;
    };
    out.source = build(src_terms, src_ctx, src_bg, "xs");
    out.target = build(tgt_terms, tgt_ctx, tgt_bg, "xt");
    return out;
}

/// Documents made of random sentences, with planted exact and near copies.
struct DedupFixture {
    std::vector<termwork::Document> docs;
    std::vector<std::pair<std::size_t, std::size_t>> exact;  // (copy, original) indices
};

inline DedupFixture dedup_documents(std::uint32_t seed, std::size_t n) {
    std::mt19937 rng(seed);
    DedupFixture out;
    std::uniform_int_distribution<std::size_t> word(0, 3000), len(8, 20), kind(0, 9);
    auto paragraph = [&] {
        std::string s;
        const std::size_t k = len(rng);
        for (std::size_t i = 0; i < k; ++i) s += (i ? " " : "") + pseudo_word(word(rng));
        return s;
    };
    for (std::size_t i = 0; i < n; ++i) {
        termwork::Document d{"d" + std::to_string(i), "synthetic", "en", {}, ""};
        const auto k = kind(rng);
        if (i >= 10 && k < 2) {
            const std::size_t src = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
            d.paragraphs = out.docs[src].paragraphs;
            out.exact.emplace_back(i, src);
        } else if (i >= 10 && k < 4) {
            // Near copy: one word changed in one paragraph.
            const std::size_t src = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
            d.paragraphs = out.docs[src].paragraphs;
            auto words = termwork::text::split_ws(d.paragraphs[0].text);
            words[words.size() / 2] = pseudo_word(word(rng), "x");
            d.paragraphs[0].text = termwork::text::join(words, " ");
        } else {
            for (int p = 0; p < 3; ++p) d.paragraphs.push_back({paragraph(), termwork::Quality::Good});
        }
        out.docs.push_back(std::move(d));
    }
    return out;
}

inline termwork::StoreOptions fixed_clock() {
    termwork::StoreOptions o;
    o.clock = [] { return std::string("2024-01-01T00:00:00Z"); };
    return o;
}

/// A store with `n` entries covering every field: multi-parent links,
/// candidates, rejected terms, categories, all translation languages,
/// explanations with topics, provenance and reliability tiers. Terms are
/// unique so entries can be matched by term.
inline termwork::ThesaurusStore random_store(std::uint32_t seed, std::size_t n) {
    using namespace termwork;
    std::mt19937 rng(seed);
    ThesaurusStore store(fixed_clock());
    std::vector<std::string> ids;
    const std::vector<std::string> langs{"en", "de", "fr", "ru", "sk"};
    for (std::size_t i = 0; i < n; ++i) {
        ThesaurusEntry e;
        e.term = pseudo_word(i) + (i % 3 == 0 ? " " + pseudo_word(i + 1000, "ní") : "") + (i % 7 == 0 ? " & <x>" : "");
        if (i % 11 == 5) e.kind = EntryKind::Category;
        const auto roll = rng() % 10;
        if (e.kind == EntryKind::Term && roll == 0) e.status = EntryStatus::Candidate;
        if (roll == 1) e.status = EntryStatus::Rejected;
        if (rng() % 2) e.variants = {pseudo_word(i + 2000), pseudo_word(i + 3000, "ová")};
        for (std::size_t k = 0; k < rng() % 3; ++k) {
            e.explanations.push_back({"výklad " + std::to_string(k) + " \"" + pseudo_word(i) + "\"", k ? "" : "topic" + std::to_string(i % 4)});
        }
        for (const auto& l : langs) {
            if (rng() % 3 == 0) continue;
            e.translations[l].push_back({pseudo_word(i + 4000, l), rng() % 2 ? "manual" : "import"});
            if (rng() % 4 == 0) e.translations[l].push_back({pseudo_word(i + 5000, l), ""});
        }
        if (!ids.empty()) {
            const std::size_t parents = rng() % 3;
            for (std::size_t k = 0; k < parents; ++k) {
                const auto& p = ids[rng() % ids.size()];
                if (std::find(e.broader.begin(), e.broader.end(), p) == e.broader.end()) e.broader.push_back(p);
            }
        }
        e.source = rng() % 2 ? "dataset-" + std::to_string(i % 3) : "";
        e.reliability = static_cast<int>(rng() % 4);
        if (rng() % 3 == 0) e.provenance = {{"rank", std::to_string(i)}, {"note", "a&b"}};
        ids.push_back(store.upsert_entry(std::move(e), "generator"));
    }
    return store;
}

/// Entry contents with ids replaced by terms and revision history dropped,
/// so two stores compare equal up to id renaming.
inline nlohmann::json canonical(const termwork::ThesaurusStore& store) {
    auto term_of = [&](const std::string& id) { return store.get(id).term; };
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [id, e] : store.entries()) {
        auto j = e.to_json();
        j.erase("id");
        j.erase("revisions");
        auto terms = [&](const std::vector<std::string>& rel) {
            std::vector<std::string> t;
            for (const auto& x : rel) t.push_back(term_of(x));
            std::sort(t.begin(), t.end());
            return t;
        };
        j["broader"] = terms(e.broader);
        j["narrower"] = terms(e.narrower);
        out[e.term] = j;
    }
    return out;
}

}  // namespace fixture

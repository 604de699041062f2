#include "termwork/relations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "termwork/error.hpp"
#include "termwork/text.hpp"

namespace termwork {

double logdice(std::uint64_t f1, std::uint64_t f2, std::uint64_t f12) {
    if (f12 > f1 || f12 > f2 || f1 + f2 == 0) {
        throw Error("invalid_argument", "logdice requires f1 >= f12, f2 >= f12 and f1 + f2 > 0");
    }
    if (f12 == 0) return -std::numeric_limits<double>::infinity();
    return std::log2(2.0 * static_cast<double>(f12) / (static_cast<double>(f1) + static_cast<double>(f2)));
}

double lexsim(std::string_view t1, std::string_view t2) {
    const std::u32string a = text::decode(text::normalize_phrase(t1));
    const std::u32string b = text::decode(text::normalize_phrase(t2));
    if (a.size() < 2 || b.size() < 2) return a == b ? 1.0 : 0.0;
    auto bigrams = [](const std::u32string& s) {
        std::set<std::uint64_t> out;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            out.insert((static_cast<std::uint64_t>(s[i]) << 32) | s[i + 1]);
        }
        return out;
    };
    const auto ba = bigrams(a);
    const auto bb = bigrams(b);
    std::size_t shared = 0;
    for (auto g : ba) shared += bb.count(g);
    return static_cast<double>(shared) / static_cast<double>(ba.size() + bb.size() - shared);
}

HypernymPattern HypernymPattern::compile(int id, std::string_view template_text, double weight, bool enabled) {
    auto fail = [&](const std::string& what) {
        throw Error("pattern_syntax", "pattern-" + std::to_string(id) + ": " + what);
    };
    if (!(weight >= 0.0 && weight <= 1.0)) fail("weight must lie in [0, 1]");
    auto parts = text::split_ws(template_text);
    const auto hypo = std::count(parts.begin(), parts.end(), "HYPONYM");
    const auto hyper = std::count(parts.begin(), parts.end(), "HYPERNYM");
    if (hypo != 1 || hyper != 1) fail("HYPONYM and HYPERNYM must each appear exactly once");
    if (parts.size() < 3) fail("connective is empty");
    const bool ends_ok = (parts.front() == "HYPONYM" && parts.back() == "HYPERNYM") ||
                         (parts.front() == "HYPERNYM" && parts.back() == "HYPONYM");
    if (!ends_ok) fail("slots must be at the two ends of the template");

    HypernymPattern p;
    p.id = id;
    p.template_text = std::string(template_text);
    p.weight = weight;
    p.enabled = enabled;
    p.hyponym_first = parts.front() == "HYPONYM";
    std::vector<std::string> middle(parts.begin() + 1, parts.end() - 1);
    try {
        p.connective = TokenPattern::compile(text::join(middle, " "));
    } catch (const GrammarSyntaxError& e) {
        fail(e.what());
    }
    return p;
}

std::vector<HypernymPattern> load_patterns(const nlohmann::json& config, std::string_view language,
                                           bool include_disabled) {
    std::vector<HypernymPattern> out;
    for (const auto& entry : config.at("patterns")) {
        const int id = entry.at("id").get<int>();
        const bool enabled = entry.value("enabled", true);
        if (!enabled && !include_disabled) continue;
        const auto& templates = entry.at("templates");
        const std::string lang(language);
        if (!templates.contains(lang)) {
            throw Error("missing_lexicalization",
                        "pattern-" + std::to_string(id) + " has no lexicalization for language '" + lang + "'");
        }
        out.push_back(HypernymPattern::compile(id, templates.at(lang).get<std::string>(),
                                               entry.value("weight", 1.0), enabled));
    }
    return out;
}

nlohmann::json default_pattern_config() {
    return nlohmann::json::parse(R"({
  "patterns": [
    {"id": 1, "weight": 1.0, "enabled": true, "templates": {
      "en": "HYPONYM [word=is|are] [word=a|an|the]? HYPERNYM",
      "cs": "HYPONYM [word=je|jsou] HYPERNYM"}},
    {"id": 2, "weight": 1.0, "enabled": true, "templates": {
      "en": "HYPONYM [word=and|or] [word=another|other|similar] HYPERNYM",
      "cs": "HYPONYM [word=a|nebo] [word=jiný|jiná|jiné|jiných|další|podobný|podobná|podobné] HYPERNYM"}},
    {"id": 3, "weight": 0.2, "enabled": true, "templates": {
      "en": "HYPONYM [word=is|are] [word=a|an]? [word=kind|type|part|example|way] [word=of] [word=a|an|the]? HYPERNYM",
      "cs": "HYPONYM [word=je|jsou] [word=druh|typ|část|příklad|způsob] HYPERNYM"}},
    {"id": 4, "weight": 0.1, "enabled": false, "templates": {
      "en": "HYPONYM [word=is|are] [word=known|denoted] [word=as] [word=a|an|the]? HYPERNYM",
      "cs": "HYPONYM [word=je|jsou] [word=známý|známá|známé|označovaný|označovaná|označované] [word=jako] HYPERNYM"}}
  ]
})");
}

nlohmann::json RelationCandidate::to_json() const {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : evidence) ev.push_back({{"doc", e.doc_id}, {"offset", e.offset}});
    return {{"hyponym", hyponym},
            {"hypernym", hypernym},
            {"method", method},
            {"score", std::isfinite(score) ? nlohmann::json(score) : nlohmann::json(nullptr)},
            {"association", std::isfinite(association) ? nlohmann::json(association) : nlohmann::json(nullptr)},
            {"evidence", ev}};
}

RelationCandidate RelationCandidate::from_json(const nlohmann::json& j) {
    RelationCandidate c;
    c.hyponym = j.at("hyponym").get<std::string>();
    c.hypernym = j.at("hypernym").get<std::string>();
    c.method = j.at("method").get<std::string>();
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    c.score = j.at("score").is_null() ? kNegInf : j.at("score").get<double>();
    c.association = j.value("association", nlohmann::json(nullptr)).is_null()
                        ? kNegInf
                        : j.at("association").get<double>();
    for (const auto& e : j.value("evidence", nlohmann::json::array())) {
        c.evidence.push_back({e.at("doc").get<std::string>(), e.at("offset").get<std::uint32_t>()});
    }
    return c;
}

std::uint64_t paragraph_cooccurrence(const CorpusIndex& index, std::string_view t1, std::string_view t2) {
    auto per_paragraph = [&](std::string_view t) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
        for (const auto& pos : index.find(t)) {
            ++counts[{pos.doc, index.documents()[pos.doc].paragraph_of(pos.offset)}];
        }
        return counts;
    };
    const auto a = per_paragraph(t1);
    const auto b = per_paragraph(t2);
    std::uint64_t total = 0;
    for (const auto& [key, n] : a) {
        if (const auto it = b.find(key); it != b.end()) total += std::min(n, it->second);
    }
    return total;
}

namespace {

std::string join_normalized(std::span<const Token> tokens, Span s) {
    std::string out;
    for (std::size_t i = s.begin; i < s.end; ++i) {
        if (i > s.begin) out.push_back(' ');
        out += tokens[i].normalized;
    }
    return out;
}

}  // namespace

std::vector<RelationCandidate> extract_hypernym_pairs(const CorpusIndex& index,
                                                      const std::vector<HypernymPattern>& patterns,
                                                      const TokenPattern& np_rule) {
    // (hyponym, hypernym, pattern index) -> evidence
    std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<Evidence>> found;
    for (const auto& doc : index.documents()) {
        const std::span<const Token> all(doc.tokens);
        for (std::uint32_t p = 0; p < doc.paragraph_starts.size(); ++p) {
            const auto [pbegin, pend] = doc.paragraph_range(p);
            const auto para = all.subspan(pbegin, pend - pbegin);
            for (const Span& first : find_matches(np_rule, para)) {
                std::size_t best_pattern = patterns.size();
                std::size_t best_len = 0;
                Span best_second{};
                for (std::size_t k = 0; k < patterns.size(); ++k) {
                    const auto ends = patterns[k].connective.match_ends(para, first.end);
                    for (auto it = ends.rbegin(); it != ends.rend(); ++it) {
                        const auto np_end = np_rule.longest_match(para, *it);
                        if (!np_end) continue;
                        const std::size_t len = *it - first.end;
                        if (len > best_len) {
                            best_len = len;
                            best_pattern = k;
                            best_second = {*it, *np_end};
                        }
                        break;
                    }
                }
                if (best_pattern == patterns.size()) continue;
                const auto& pat = patterns[best_pattern];
                std::string a = join_normalized(para, first);
                std::string b = join_normalized(para, best_second);
                if (!pat.hyponym_first) std::swap(a, b);
                found[{std::move(a), std::move(b), best_pattern}].push_back(
                    {doc.id, static_cast<std::uint32_t>(pbegin + first.begin)});
            }
        }
    }

    std::vector<RelationCandidate> out;
    for (auto& [key, evidence] : found) {
        const auto& [hypo, hyper, k] = key;
        const auto& pat = patterns[k];
        const auto f1 = index.count(hypo);
        const auto f2 = index.count(hyper);
        const auto f12 = paragraph_cooccurrence(index, hypo, hyper);
        RelationCandidate c;
        c.hyponym = hypo;
        c.hypernym = hyper;
        c.method = pat.method();
        c.association = logdice(f1, f2, f12);
        c.score = pat.weight > 0.0 ? c.association + std::log2(pat.weight)
                                   : -std::numeric_limits<double>::infinity();
        c.evidence = std::move(evidence);
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.score != y.score) return x.score > y.score;
        return std::tie(x.hyponym, x.hypernym, x.method) < std::tie(y.hyponym, y.hypernym, y.method);
    });
    return out;
}

std::vector<RelationCandidate> suggest_hypernyms(std::string_view term,
                                                 const std::vector<RelationCandidate>& pattern_candidates,
                                                 const std::vector<std::string>& known_terms,
                                                 const SuggestOptions& options) {
    const std::string norm = text::normalize_phrase(term);
    std::vector<RelationCandidate> pool;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : pattern_candidates) {
        if (text::normalize_phrase(c.hyponym) != norm || text::normalize_phrase(c.hypernym) == norm) continue;
        pool.push_back(c);
        if (std::isfinite(c.score)) {
            lo = std::min(lo, c.score);
            hi = std::max(hi, c.score);
        }
    }
    for (auto& c : pool) {
        if (!std::isfinite(c.score)) {
            c.score = 0.0;
        } else {
            c.score = hi > lo ? (c.score - lo) / (hi - lo) : 1.0;
        }
    }
    std::set<std::string> seen_known;
    for (const auto& known : known_terms) {
        const std::string k = text::normalize_phrase(known);
        if (k == norm || !seen_known.insert(k).second) continue;
        const double sim = lexsim(norm, k);
        if (sim < options.lexsim_threshold) continue;
        pool.push_back({norm, k, "lexsim", sim, sim, {}});
    }

    std::map<std::string, RelationCandidate> merged;
    for (auto& c : pool) {
        const std::string key = text::normalize_phrase(c.hypernym);
        const auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, std::move(c));
        } else if (c.score > it->second.score ||
                   (c.score == it->second.score && it->second.method == "lexsim" && c.method != "lexsim")) {
            it->second = std::move(c);
        }
    }
    std::vector<RelationCandidate> out;
    for (auto& [k, c] : merged) out.push_back(std::move(c));
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.hypernym < b.hypernym;
    });
    return out;
}

}  // namespace termwork

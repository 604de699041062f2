#include "termwork/dedup.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "termwork/error.hpp"
#include "termwork/text.hpp"

namespace termwork {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
}

std::vector<std::string> paragraph_words(const Paragraph& p) {
    static const Tokenizer splitter(LanguageProfile{});
    std::vector<std::string> words;
    for (auto& t : splitter.tokenize(p.text)) words.push_back(std::move(t.normalized));
    return words;
}

std::vector<std::uint64_t> merge_sets(std::vector<std::uint64_t> acc, std::span<const std::uint64_t> add) {
    std::vector<std::uint64_t> out;
    out.reserve(acc.size() + add.size());
    std::set_union(acc.begin(), acc.end(), add.begin(), add.end(), std::back_inserter(out));
    return out;
}

struct Shingled {
    Document doc;
    std::vector<std::vector<std::uint64_t>> paragraph_shingles;  // empty for boilerplate
    std::vector<std::uint64_t> doc_shingles;
};

Shingled shingle_document(const Document& d, std::size_t k) {
    Shingled s{d, {}, {}};
    for (const auto& p : d.paragraphs) {
        if (p.quality != Quality::Good) {
            s.paragraph_shingles.emplace_back();
            continue;
        }
        const auto words = paragraph_words(p);
        s.paragraph_shingles.push_back(shingle_hashes(words, k));
        s.doc_shingles = merge_sets(std::move(s.doc_shingles), s.paragraph_shingles.back());
    }
    return s;
}

// Returns true if anything was removed.
bool document_pass(std::vector<Shingled>& docs, double threshold, DedupReport& report) {
    std::vector<Shingled> kept;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> registry;
    bool changed = false;
    for (auto& d : docs) {
        std::size_t best = kept.size();
        double best_sim = -1.0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            if (kept[k].doc.paragraphs == d.doc.paragraphs) {
                best = k;
                best_sim = 1.0;
                break;
            }
        }
        if (best == kept.size() && !d.doc_shingles.empty()) {
            std::unordered_map<std::size_t, std::size_t> shared;
            for (auto h : d.doc_shingles) {
                if (const auto it = registry.find(h); it != registry.end()) {
                    for (auto k : it->second) ++shared[k];
                }
            }
            for (const auto& [k, n] : shared) {
                const double sim = static_cast<double>(n) /
                                   static_cast<double>(d.doc_shingles.size() + kept[k].doc_shingles.size() - n);
                if (sim > best_sim || (sim == best_sim && k < best)) {
                    best_sim = sim;
                    best = k;
                }
            }
            if (best_sim < threshold) best = kept.size();
        }
        if (best < kept.size()) {
            report.duplicate_pairs.push_back({kept[best].doc.id, d.doc.id, best_sim});
            changed = true;
            continue;
        }
        for (auto h : d.doc_shingles) registry[h].push_back(kept.size());
        kept.push_back(std::move(d));
    }
    docs = std::move(kept);
    return changed;
}

bool paragraph_pass(std::vector<Shingled>& docs, DedupReport& report) {
    std::unordered_set<std::uint64_t> seen;
    bool changed = false;
    std::vector<Shingled> kept;
    for (auto& d : docs) {
        Shingled out{d.doc, {}, {}};
        out.doc.paragraphs.clear();
        for (std::size_t i = 0; i < d.doc.paragraphs.size(); ++i) {
            const auto& sh = d.paragraph_shingles[i];
            const bool good = d.doc.paragraphs[i].quality == Quality::Good;
            if (good && !sh.empty() &&
                std::all_of(sh.begin(), sh.end(), [&](auto h) { return seen.count(h) > 0; })) {
                ++report.paragraphs_removed;
                changed = true;
                continue;
            }
            seen.insert(sh.begin(), sh.end());
            out.doc.paragraphs.push_back(d.doc.paragraphs[i]);
            out.paragraph_shingles.push_back(sh);
            out.doc_shingles = merge_sets(std::move(out.doc_shingles), sh);
        }
        if (out.doc.paragraphs.empty()) {
            ++report.docs_emptied;
            continue;
        }
        kept.push_back(std::move(out));
    }
    docs = std::move(kept);
    return changed;
}

}  // namespace

nlohmann::json DedupReport::to_json() const {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : duplicate_pairs) {
        pairs.push_back({{"kept", p.kept_id}, {"removed", p.removed_id}, {"similarity", p.similarity}});
    }
    return {{"docs_in", docs_in},
            {"docs_kept", docs_kept},
            {"docs_emptied", docs_emptied},
            {"paragraphs_removed", paragraphs_removed},
            {"duplicate_pairs", pairs}};
}

std::vector<std::uint64_t> shingle_hashes(std::span<const std::string> tokens, std::size_t k) {
    std::vector<std::uint64_t> out;
    if (tokens.empty() || k == 0) return out;
    const std::size_t width = std::min(k, tokens.size());
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
        std::uint64_t h = kFnvOffset;
        for (std::size_t j = i; j < i + width; ++j) {
            fnv_mix(h, tokens[j]);
            fnv_mix(h, "\x1f");
        }
        out.push_back(h);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t shared = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++shared;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

DedupResult dedup(const std::vector<Document>& documents, const DedupConfig& config) {
    if (config.shingle_len == 0) throw Error("invalid_argument", "shingle_len must be >= 1");
    if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
        throw Error("invalid_argument", "threshold must lie in (0, 1]");
    }
    DedupResult result;
    result.report.docs_in = documents.size();
    std::vector<Shingled> docs;
    docs.reserve(documents.size());
    for (const auto& d : documents) docs.push_back(shingle_document(d, config.shingle_len));

    // Paragraph removal can lower or raise document similarity, so iterate to
    // a fixpoint; this makes dedup idempotent.
    while (true) {
        const bool a = document_pass(docs, config.threshold, result.report);
        const bool b = paragraph_pass(docs, result.report);
        if (!a && !b) break;
    }
    for (auto& d : docs) result.kept.push_back(std::move(d.doc));
    result.report.docs_kept = result.kept.size();
    return result;
}

}  // namespace termwork

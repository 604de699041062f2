#include "termwork/translation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include "termwork/error.hpp"
#include "termwork/text.hpp"

namespace termwork {

CollocateProfile collocate_profile(const CorpusIndex& index, std::string_view term,
                                   const ProfileOptions& options) {
    CollocateProfile profile;
    profile.term = text::normalize_phrase(term);
    profile.language = index.language();
    const auto words = text::split_ws(profile.term);
    const std::set<std::string> own(words.begin(), words.end());
    for (const Position& pos : index.find(std::span<const std::string>(words))) {
        const auto& doc = index.documents()[pos.doc];
        const auto [pbegin, pend] = doc.paragraph_range(doc.paragraph_of(pos.offset));
        const std::size_t begin = pos.offset;
        const std::size_t end = begin + words.size();
        const std::size_t lo = begin >= pbegin + options.window ? begin - options.window : pbegin;
        const std::size_t hi = std::min<std::size_t>(pend, end + options.window);
        for (std::size_t i = lo; i < hi; ++i) {
            if (i >= begin && i < end) continue;
            const Token& t = doc.tokens[i];
            if (t.tag == Tag::Punct || own.count(t.normalized) || options.stop_words.count(t.normalized)) continue;
            if (options.vocabulary && !options.vocabulary->count(t.normalized)) continue;
            ++profile.collocates[t.normalized];
        }
    }
    return profile;
}

std::set<std::string> term_vocabulary(const std::vector<std::string>& terms, const CorpusIndex* content_words_from) {
    std::set<std::string> vocab;
    for (const auto& t : terms) {
        for (auto& w : text::split_ws(text::normalize_phrase(t))) vocab.insert(std::move(w));
    }
    if (content_words_from) {
        for (const auto& doc : content_words_from->documents()) {
            for (const auto& tok : doc.tokens) {
                if (tok.tag == Tag::Noun || tok.tag == Tag::Adj || tok.tag == Tag::Verb) vocab.insert(tok.normalized);
            }
        }
    }
    return vocab;
}

void BilingualLexicon::add(std::string_view source_word, std::string_view target_word) {
    const auto s = text::normalize_phrase(source_word);
    const auto t = text::normalize_phrase(target_word);
    if (s.empty() || t.empty()) return;
    entries_[s].insert(t);
}

const std::set<std::string>* BilingualLexicon::lookup(std::string_view source_word) const {
    const auto it = entries_.find(text::normalize_phrase(source_word));
    return it == entries_.end() ? nullptr : &it->second;
}

BilingualLexicon BilingualLexicon::read_tsv(std::istream& in, std::string source_language,
                                            std::string target_language) {
    BilingualLexicon lex(std::move(source_language), std::move(target_language));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line[0] == '#') continue;
        const auto fields = text::split(line, '\t');
        if (fields.size() < 2) {
            throw Error("table_syntax", "lexicon line " + std::to_string(lineno) + ": expected source<TAB>target");
        }
        lex.add(fields[0], fields[1]);
    }
    return lex;
}

std::vector<TargetTerm> build_target_side(const CorpusIndex& target_index,
                                          const std::vector<std::string>& target_terms,
                                          const ProfileOptions& options) {
    std::vector<TargetTerm> out;
    out.reserve(target_terms.size());
    for (const auto& t : target_terms) {
        TargetTerm tt;
        tt.term = text::normalize_phrase(t);
        tt.frequency = target_index.count(tt.term);
        tt.profile = collocate_profile(target_index, tt.term, options);
        out.push_back(std::move(tt));
    }
    return out;
}

std::vector<TranslationCandidate> translation_candidates(const CollocateProfile& source,
                                                         const std::vector<TargetTerm>& targets,
                                                         const BilingualLexicon& lexicon, std::size_t k) {
    if (lexicon.empty()) throw Error("empty_lexicon", "translation candidates need a non-empty lexicon");
    struct Scored {
        const TargetTerm* target;
        std::size_t overlap;
    };
    std::vector<Scored> scored;
    for (const auto& t : targets) {
        std::size_t overlap = 0;
        for (const auto& [collocate, count] : source.collocates) {
            const auto* translations = lexicon.lookup(collocate);
            if (!translations) continue;
            const bool hit = std::any_of(translations->begin(), translations->end(), [&](const std::string& w) {
                return t.profile.collocates.count(w) > 0;
            });
            if (hit) ++overlap;
        }
        if (overlap > 0) scored.push_back({&t, overlap});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.target->frequency != b.target->frequency) return a.target->frequency > b.target->frequency;
        return a.target->term < b.target->term;
    });
    if (scored.size() > k) scored.resize(k);
    std::vector<TranslationCandidate> out;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        out.push_back({source.term, scored[i].target->term, scored[i].overlap, i + 1});
    }
    return out;
}

std::vector<TranslationCandidate> translation_candidates(const CollocateProfile& source,
                                                         const CorpusIndex& target_index,
                                                         const std::vector<std::string>& target_terms,
                                                         const BilingualLexicon& lexicon, std::size_t k,
                                                         const ProfileOptions& options) {
    return translation_candidates(source, build_target_side(target_index, target_terms, options), lexicon, k);
}

double evaluate_translations(const GoldTranslations& gold, const CandidateLists& candidates, std::size_t k) {
    if (gold.empty()) throw Error("invalid_argument", "gold translation set is empty");
    if (k == 0) throw Error("invalid_argument", "k must be >= 1");
    std::map<std::string, const std::vector<TranslationCandidate>*> by_source;
    for (const auto& [src, list] : candidates) by_source[text::normalize_phrase(src)] = &list;
    std::size_t hits = 0;
    for (const auto& [src, accepted] : gold) {
        const auto it = by_source.find(text::normalize_phrase(src));
        if (it == by_source.end()) continue;
        std::set<std::string> norm_accepted;
        for (const auto& a : accepted) norm_accepted.insert(text::normalize_phrase(a));
        const auto& list = *it->second;
        const std::size_t n = std::min(k, list.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (norm_accepted.count(text::normalize_phrase(list[i].target_term))) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

nlohmann::json to_json(const CandidateLists& lists) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [src, list] : lists) {
        nlohmann::json targets = nlohmann::json::array();
        for (const auto& c : list) {
            targets.push_back({{"term", c.target_term}, {"overlap", c.overlap}, {"rank", c.rank}});
        }
        out.push_back({{"source_term", src}, {"targets", targets}});
    }
    return out;
}

CandidateLists candidate_lists_from_json(const nlohmann::json& j) {
    CandidateLists lists;
    for (const auto& item : j) {
        const auto src = item.at("source_term").get<std::string>();
        auto& list = lists[src];
        for (const auto& t : item.at("targets")) {
            list.push_back({src, t.at("term").get<std::string>(), t.at("overlap").get<std::size_t>(),
                            t.at("rank").get<std::size_t>()});
        }
    }
    return lists;
}

double cosine(const CollocateProfile& a, const CollocateProfile& b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [w, c] : a.collocates) {
        na += static_cast<double>(c) * static_cast<double>(c);
        if (const auto it = b.collocates.find(w); it != b.collocates.end()) {
            dot += static_cast<double>(c) * static_cast<double>(it->second);
        }
    }
    for (const auto& [w, c] : b.collocates) nb += static_cast<double>(c) * static_cast<double>(c);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<RelatedTerm> related_terms(const CollocateProfile& query, const std::vector<CollocateProfile>& pool) {
    std::vector<RelatedTerm> out;
    for (const auto& p : pool) {
        if (p.term == query.term) continue;
        const double sim = cosine(query, p);
        if (sim > 0.0) out.push_back({p.term, sim});
    }
    std::sort(out.begin(), out.end(), [](const RelatedTerm& a, const RelatedTerm& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.term < b.term;
    });
    return out;
}

}  // namespace termwork

#include "termwork/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "termwork/error.hpp"
#include "termwork/text.hpp"

namespace termwork {

namespace {

const std::set<std::string> kEnglishStopWords = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and",
    "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
    "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing", "down",
    "during", "each", "few", "for", "from", "further", "had", "has", "have", "having",
    "he", "her", "here", "hers", "him", "his", "how", "i", "if", "in", "into", "is", "it",
    "its", "itself", "just", "may", "me", "more", "most", "my", "no", "nor", "not", "now",
    "of", "off", "on", "once", "only", "or", "other", "our", "ours", "out", "over", "own",
    "same", "she", "should", "so", "some", "such", "than", "that", "the", "their",
    "theirs", "them", "then", "there", "these", "they", "this", "those", "through", "to",
    "too", "under", "until", "up", "very", "was", "we", "were", "what", "when", "where",
    "which", "while", "who", "whom", "why", "will", "with", "would", "you", "your"};

const std::set<std::string> kCzechStopWords = {
    "a",    "aby",  "ale",   "ani",  "asi",  "až",    "bez",  "by",   "byl",  "byla",
    "bylo", "byly", "být",   "co",   "do",   "i",     "jak",  "jako", "je",   "jeho",
    "jej",  "její", "jejich", "jen", "ještě", "již",  "jsou", "k",    "kde",  "když",
    "ke",   "která", "které", "který", "kteří", "mezi", "na", "nad",  "ne",   "nebo",
    "o",    "od",   "po",    "pod",  "pro",  "proto", "před", "při", "s",    "se",
    "si",   "tak",  "také",  "tedy", "to",   "tom",   "tento", "toto", "u",   "v",
    "ve",   "z",    "za",    "ze",   "že"};

LanguageProfile english_profile() {
    LanguageProfile p;
    p.code = "en";
    p.prepositions = {"about",  "above",  "across", "against", "along",  "among",  "around",
                      "at",     "behind", "below",  "between", "beyond", "by",     "during",
                      "for",    "from",   "in",     "into",    "near",   "of",     "on",
                      "onto",   "over",   "per",    "through", "to",     "toward", "towards",
                      "under",  "upon",   "via",    "with",    "within", "without"};
    p.function_words = {
        "a",    "all",   "also",    "an",    "and",   "another", "any",   "as",    "both",
        "but",  "can",   "could",   "each",  "either", "every",  "he",    "her",   "here",
        "his",  "how",   "i",       "if",    "it",    "its",     "many",  "may",   "might",
        "more", "most",  "much",    "must",  "neither", "no",    "nor",   "not",   "one",
        "only", "or",    "other",   "our",   "own",   "same",    "shall", "she",   "should",
        "so",   "some",  "such",    "than",  "that",  "the",     "their", "them",  "then",
        "there", "these", "they",   "this",  "those", "too",     "very",  "we",    "what",
        "when", "where", "which",   "who",   "whom",  "whose",   "why",   "will",  "would",
        "you",  "your"};
    p.verbs = {"allows",   "am",       "are",      "be",       "been",     "being",
               "called",   "contains", "define",   "defines",  "denoted",  "describes",
               "did",      "do",       "does",     "had",      "has",      "have",
               "include",  "includes", "is",       "known",    "measure",  "measured",
               "measures", "produces", "provides", "requires", "shows",    "use",
               "used",     "uses",     "was",      "were"};
    p.adjectives = {"accurate", "basic",   "certain", "common",  "different", "entire",
                    "general",  "global",  "good",    "great",   "high",      "important",
                    "key",      "large",   "local",   "low",     "main",      "major",
                    "minor",    "modern",  "new",     "old",     "precise",   "several",
                    "similar",  "simple",  "small",   "special", "specific",  "total",
                    "various",  "whole"};
    p.nouns = {"arithmetic", "boundary", "clinic",    "critic",   "dictionary", "glossary",
               "interval",   "library",  "logic",     "manual",   "material",   "mathematician",
               "mechanic",   "music",    "musician",  "signal",   "summary",    "technician",
               "terminal",   "topic",    "traffic",   "potential", "statistic"};
    p.adjective_suffixes = {"ical", "ian", "al", "ic", "ive", "ous", "ary", "ible", "able", "ful",
                            "less"};
    p.stop_words = kEnglishStopWords;
    return p;
}

LanguageProfile czech_profile() {
    LanguageProfile p;
    p.code = "cs";
    p.prepositions = {"bez", "do",  "k",  "ke",  "mezi", "na", "nad", "o",  "od", "po", "pod",
                      "pro", "před", "přes", "při", "s",  "se",  "u",  "v",  "ve", "z",  "za",
                      "ze"};
    p.function_words = {"a",     "ale",   "další",  "i",       "jiná",    "jiné",  "jiný",
                        "jiných", "která", "které", "který",   "nebo",    "podobná", "podobné",
                        "podobný", "ta",   "ten",   "tento",   "tato",    "to",    "toto",
                        "že"};
    p.verbs = {"byl", "byla", "bylo", "byly", "být", "je", "jsou", "má", "mají"};
    p.adjective_suffixes = {"ský", "cký", "ový", "ová", "ové", "ní", "ý", "á", "é"};
    p.stop_words = kCzechStopWords;
    return p;
}

std::set<std::string> json_set(const nlohmann::json& j, const char* key) {
    std::set<std::string> out;
    if (j.contains(key)) {
        for (const auto& v : j.at(key)) out.insert(text::fold_case(v.get<std::string>()));
    }
    return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_hyphen(char32_t cp) { return cp == U'-' || cp == 0x2010 || cp == 0x2011; }
bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

}  // namespace

std::string_view to_string(Tag tag) {
    switch (tag) {
        case Tag::Noun: return "NOUN";
        case Tag::Adj: return "ADJ";
        case Tag::Prep: return "PREP";
        case Tag::Verb: return "VERB";
        case Tag::Other: return "OTHER";
        case Tag::Punct: return "PUNCT";
    }
    return "OTHER";
}

bool parse_tag(std::string_view name, Tag& out) {
    static constexpr std::pair<std::string_view, Tag> kTags[] = {
        {"NOUN", Tag::Noun}, {"ADJ", Tag::Adj},     {"PREP", Tag::Prep},
        {"VERB", Tag::Verb}, {"OTHER", Tag::Other}, {"PUNCT", Tag::Punct}};
    for (const auto& [n, t] : kTags) {
        if (n == name) {
            out = t;
            return true;
        }
    }
    return false;
}

std::string_view to_string(Quality q) { return q == Quality::Good ? "good" : "boilerplate"; }

LanguageProfile LanguageProfile::builtin(std::string_view code) {
    if (code == "en") return english_profile();
    if (code == "cs") return czech_profile();
    LanguageProfile p;
    p.code = std::string(code);
    return p;
}

LanguageProfile LanguageProfile::from_json(const nlohmann::json& j) {
    LanguageProfile p;
    p.code = j.at("code").get<std::string>();
    p.prepositions = json_set(j, "prepositions");
    p.function_words = json_set(j, "function_words");
    p.verbs = json_set(j, "verbs");
    p.adjectives = json_set(j, "adjectives");
    p.nouns = json_set(j, "nouns");
    p.stop_words = json_set(j, "stop_words");
    if (j.contains("adjective_suffixes")) {
        p.adjective_suffixes = j.at("adjective_suffixes").get<std::vector<std::string>>();
    }
    return p;
}

nlohmann::json LanguageProfile::to_json() const {
    return {{"code", code},
            {"prepositions", prepositions},
            {"function_words", function_words},
            {"verbs", verbs},
            {"adjectives", adjectives},
            {"nouns", nouns},
            {"adjective_suffixes", adjective_suffixes},
            {"stop_words", stop_words}};
}

std::set<std::string> read_stop_words(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open stop list " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto word = text::trim(line);
        if (!word.empty()) words.insert(text::fold_case(word));
    }
    return words;
}

Tag RuleTagger::tag(std::string_view normalized) const {
    const auto cps = text::decode(normalized);
    if (cps.empty()) return Tag::Other;
    if (std::all_of(cps.begin(), cps.end(), [](char32_t c) { return text::is_punct(c); })) {
        return Tag::Punct;
    }
    if (text::is_digit(cps.front())) return Tag::Other;
    const std::string key(normalized);
    if (profile_.function_words.count(key)) return Tag::Other;
    if (profile_.prepositions.count(key)) return Tag::Prep;
    if (profile_.verbs.count(key)) return Tag::Verb;
    if (profile_.adjectives.count(key)) return Tag::Adj;
    if (profile_.nouns.count(key)) return Tag::Noun;
    const std::size_t len = cps.size();
    for (const auto& suffix : profile_.adjective_suffixes) {
        // Require a stem of at least three code points before the suffix.
        if (ends_with(normalized, suffix) && len >= text::length(suffix) + 3) return Tag::Adj;
    }
    return Tag::Noun;
}

Tokenizer::Tokenizer(LanguageProfile profile, std::shared_ptr<const Tagger> tagger)
    : profile_(std::move(profile)), tagger_(std::move(tagger)) {
    if (!tagger_) tagger_ = std::make_shared<RuleTagger>(profile_);
}

std::vector<Token> Tokenizer::tokenize(std::string_view input) const {
    const std::u32string cps = text::decode(input);
    std::vector<Token> tokens;
    std::u32string word;

    auto flush = [&] {
        if (word.empty()) return;
        Token t;
        t.surface = text::encode(word);
        t.normalized = text::fold_case(t.surface);
        t.tag = tagger_->tag(t.normalized);
        tokens.push_back(std::move(t));
        word.clear();
    };

    const std::size_t n = cps.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char32_t c = cps[i];
        if (text::is_space(c)) {
            flush();
            continue;
        }
        if (text::is_punct(c)) {
            const bool joins_word = !word.empty() && i + 1 < n && text::is_word_char(cps[i + 1]);
            const bool digit_group = joins_word && (c == U'.' || c == U',') &&
                                     text::is_digit(word.back()) && text::is_digit(cps[i + 1]);
            if (joins_word && (is_hyphen(c) || is_apostrophe(c) || digit_group)) {
                word.push_back(c);
                continue;
            }
            flush();
            word.push_back(c);
            flush();
            continue;
        }
        word.push_back(c);
    }
    flush();
    return tokens;
}

std::vector<Token> tokenize(std::string_view text, const LanguageProfile& profile) {
    return Tokenizer(profile).tokenize(text);
}

TaggedDocument tag_document(const Document& doc, const Tokenizer& tokenizer) {
    TaggedDocument out{doc.id, doc.source, doc.language, doc.fetched_at, {}};
    out.paragraphs.reserve(doc.paragraphs.size());
    for (const auto& p : doc.paragraphs) {
        out.paragraphs.push_back({p.quality, tokenizer.tokenize(p.text)});
    }
    return out;
}

Document untag_document(const TaggedDocument& doc) {
    Document out{doc.id, doc.source, doc.language, {}, doc.fetched_at};
    for (const auto& p : doc.paragraphs) {
        std::string joined;
        for (const auto& t : p.tokens) {
            if (!joined.empty()) joined.push_back(' ');
            joined += t.surface;
        }
        out.paragraphs.push_back({std::move(joined), p.quality});
    }
    return out;
}

std::uint32_t IndexedDocument::paragraph_of(std::uint32_t offset) const {
    const auto it = std::upper_bound(paragraph_starts.begin(), paragraph_starts.end(), offset);
    return static_cast<std::uint32_t>(std::distance(paragraph_starts.begin(), it) - 1);
}

std::pair<std::uint32_t, std::uint32_t> IndexedDocument::paragraph_range(std::uint32_t p) const {
    const std::uint32_t begin = paragraph_starts.at(p);
    const std::uint32_t end = p + 1 < paragraph_starts.size()
                                  ? paragraph_starts[p + 1]
                                  : static_cast<std::uint32_t>(tokens.size());
    return {begin, end};
}

CorpusIndex build_corpus(std::vector<TaggedDocument> documents) {
    CorpusIndex index;
    for (const auto& d : documents) {
        if (index.language_.empty()) {
            index.language_ = d.language;
        } else if (d.language != index.language_) {
            throw Error("mixed_language", "document " + d.id + " has language '" + d.language +
                                              "', corpus language is '" + index.language_ + "'");
        }
    }
    index.documents_.reserve(documents.size());
    for (auto& d : documents) {
        IndexedDocument doc{std::move(d.id), std::move(d.source), std::move(d.fetched_at), {}, {}};
        for (auto& p : d.paragraphs) {
            if (p.quality != Quality::Good || p.tokens.empty()) continue;
            doc.paragraph_starts.push_back(static_cast<std::uint32_t>(doc.tokens.size()));
            std::move(p.tokens.begin(), p.tokens.end(), std::back_inserter(doc.tokens));
        }
        if (doc.paragraph_starts.empty()) doc.paragraph_starts.push_back(0);
        const auto doc_no = static_cast<std::uint32_t>(index.documents_.size());
        for (std::uint32_t off = 0; off < doc.tokens.size(); ++off) {
            const auto& norm = doc.tokens[off].normalized;
            ++index.unigram_freq_[norm];
            index.postings_[norm].push_back({doc_no, off});
        }
        index.token_count_ += doc.tokens.size();
        index.documents_.push_back(std::move(doc));
    }
    return index;
}

CorpusIndex build_corpus(const std::vector<Document>& documents, const Tokenizer& tokenizer) {
    std::vector<TaggedDocument> tagged;
    tagged.reserve(documents.size());
    for (const auto& d : documents) tagged.push_back(tag_document(d, tokenizer));
    return build_corpus(std::move(tagged));
}

std::vector<Position> CorpusIndex::find(std::span<const std::string> phrase) const {
    if (phrase.empty()) return {};
    std::vector<std::string> norm;
    norm.reserve(phrase.size());
    for (const auto& w : phrase) norm.push_back(text::fold_case(w));

    const auto first = postings_.find(norm.front());
    if (first == postings_.end()) return {};
    std::vector<Position> out;
    for (const Position& pos : first->second) {
        const auto& doc = documents_[pos.doc];
        const auto [pbegin, pend] = doc.paragraph_range(doc.paragraph_of(pos.offset));
        (void)pbegin;
        if (pos.offset + norm.size() > pend) continue;
        bool ok = true;
        for (std::size_t k = 1; k < norm.size() && ok; ++k) {
            ok = doc.tokens[pos.offset + k].normalized == norm[k];
        }
        if (ok) out.push_back(pos);
    }
    return out;
}

std::vector<Position> CorpusIndex::find(std::string_view phrase) const {
    const auto words = text::split_ws(text::normalize_phrase(phrase));
    return find(std::span<const std::string>(words));
}

std::string ConcordanceLine::text() const {
    std::string out = text::join(left, " ");
    out += out.empty() ? "[" : " [";
    out += text::join(match, " ");
    out += "]";
    if (!right.empty()) out += " " + text::join(right, " ");
    return out;
}

std::vector<ConcordanceLine> concordance(const CorpusIndex& index,
                                         std::span<const std::string> phrase,
                                         std::size_t window) {
    std::vector<ConcordanceLine> lines;
    for (const Position& pos : index.find(phrase)) {
        const auto& doc = index.documents()[pos.doc];
        const std::size_t begin = pos.offset;
        const std::size_t end = begin + phrase.size();
        const std::size_t left_begin = begin >= window ? begin - window : 0;
        const std::size_t right_end = std::min(doc.tokens.size(), end + window);
        ConcordanceLine line;
        line.doc_id = doc.id;
        line.offset = pos.offset;
        for (std::size_t i = left_begin; i < begin; ++i) line.left.push_back(doc.tokens[i].surface);
        for (std::size_t i = begin; i < end; ++i) line.match.push_back(doc.tokens[i].surface);
        for (std::size_t i = end; i < right_end; ++i) line.right.push_back(doc.tokens[i].surface);
        lines.push_back(std::move(line));
    }
    std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
        return std::tie(a.doc_id, a.offset) < std::tie(b.doc_id, b.offset);
    });
    return lines;
}

std::vector<ConcordanceLine> concordance(const CorpusIndex& index, std::string_view phrase,
                                         std::size_t window) {
    const auto words = text::split_ws(text::normalize_phrase(phrase));
    return concordance(index, std::span<const std::string>(words), window);
}

CorpusStats corpus_stats(const CorpusIndex& index) {
    return {index.doc_count(), index.token_count(), index.unigram_freq().size()};
}

}  // namespace termwork

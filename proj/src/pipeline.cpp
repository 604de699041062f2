#include "termwork/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>

#include "termwork/api.hpp"
#include "termwork/error.hpp"
#include "termwork/import.hpp"
#include "termwork/relations.hpp"
#include "termwork/skos.hpp"
#include "termwork/term_grammar.hpp"
#include "termwork/text.hpp"
#include "termwork/thesaurus.hpp"
#include "termwork/translation.hpp"
#include "termwork/vertical.hpp"

namespace termwork {

namespace {

using nlohmann::json;

constexpr std::string_view kRoles[] = {"domain", "reference"};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("io", "cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, std::string_view content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("io", "failed writing " + p.string());
}

void require_artifact(const fs::path& p, std::string_view producer) {
    if (!fs::exists(p)) {
        throw Error("missing_artifact",
                    "missing artifact " + p.string() + " (run the '" + std::string(producer) + "' stage first)");
    }
}

json read_json(const fs::path& p) {
    try {
        return json::parse(read_file(p));
    } catch (const json::parse_error& e) {
        throw Error("io", p.string() + ": " + e.what());
    }
}

std::vector<Document> read_documents(const fs::path& p) {
    std::vector<Document> docs;
    std::istringstream in(read_file(p));
    std::string line;
    while (std::getline(in, line)) {
        if (!text::trim(line).empty()) docs.push_back(document_from_json(json::parse(line)));
    }
    return docs;
}

std::string documents_jsonl(const std::vector<Document>& docs) {
    std::string out;
    for (const auto& d : docs) {
        out += document_to_json(d).dump();
        out += '\n';
    }
    return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return {};
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::map<std::string, fs::path> path_map(const json& j, const char* key, const fs::path& base) {
    std::map<std::string, fs::path> out;
    const auto m = j.value(key, json::object());
    for (const auto& [k, v] : m.items()) out[k] = resolve(base, v.get<std::string>());
    return out;
}

StoreOptions store_options(const PipelineConfig& c) {
    StoreOptions o;
    if (!c.revision_timestamp.empty()) {
        o.clock = [ts = c.revision_timestamp] { return ts; };
    }
    return o;
}

TermGrammar load_grammar(const PipelineConfig& c, const std::string& lang) {
    const auto it = c.grammars.find(lang);
    if (it == c.grammars.end()) throw Error("invalid_config", "no grammar configured for language " + lang);
    return compile_term_grammar(read_grammar_rules(it->second.string()));
}

std::vector<HypernymPattern> load_pattern_set(const PipelineConfig& c, const std::string& lang) {
    const json cfg = c.patterns.empty() ? default_pattern_config() : read_json(c.patterns);
    return load_patterns(cfg, lang);
}

std::vector<TermCandidate> load_ranked(const Artifacts& a, const std::string& lang) {
    require_artifact(a.ranked(lang), "rank");
    std::ifstream in(a.ranked(lang));
    return read_ranked_terms(in);
}

CorpusIndex load_index(const Artifacts& a, const std::string& lang, std::string_view role) {
    require_artifact(a.vertical(lang, role), "index");
    require_artifact(a.sidecar(lang, role), "index");
    return load_corpus(a.vertical(lang, role).string(), a.sidecar(lang, role).string());
}

std::vector<std::string> top_terms(const std::vector<TermCandidate>& ranked, std::size_t limit) {
    std::vector<std::string> out;
    for (const auto& c : ranked) {
        if (limit != 0 && out.size() >= limit) break;
        out.push_back(c.phrase);
    }
    return out;
}

ProfileOptions profile_options(const PipelineConfig& c, const std::string& lang) {
    ProfileOptions o;
    o.window = c.translate_window;
    o.stop_words = load_profile(c, lang).stop_words;
    return o;
}

// ---- stages -------------------------------------------------------------

json stage_ingest(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "ingest"}, {"corpora", json::array()}};
    for (const auto& lang : c.languages) {
        const auto it = c.corpora.find(lang);
        if (it == c.corpora.end()) continue;
        for (const auto role : kRoles) {
            const fs::path src = role == "domain" ? it->second.domain : it->second.reference;
            if (src.empty()) continue;
            const auto dir = a.raw_dir(lang, role);
            fs::remove_all(dir);
            fs::create_directories(dir);
            json manifest = json::array();
            auto add = [&](std::string id, std::string source, std::string fetched_at, std::string format,
                           std::string_view content) {
                char name[32];
                std::snprintf(name, sizeof name, "%06zu.raw", manifest.size());
                write_file(dir / name, content);
                manifest.push_back({{"id", std::move(id)},
                                    {"source", std::move(source)},
                                    {"fetched_at", std::move(fetched_at)},
                                    {"format", std::move(format)},
                                    {"file", name}});
            };
            if (fs::is_directory(src)) {
                std::vector<fs::path> files;
                for (const auto& e : fs::recursive_directory_iterator(src)) {
                    if (e.is_regular_file()) files.push_back(e.path());
                }
                std::sort(files.begin(), files.end());
                for (const auto& f : files) {
                    const auto rel = fs::relative(f, src).generic_string();
                    const auto ext = f.extension().string();
                    add(rel, "file:" + rel, "", ext == ".html" || ext == ".htm" ? "html" : "text", read_file(f));
                }
            } else {
                // JSON Lines: {"id", "source", "fetched_at", "content", "format"}
                std::istringstream in(read_file(src));
                std::string line;
                std::size_t n = 0;
                while (std::getline(in, line)) {
                    ++n;
                    if (text::trim(line).empty()) continue;
                    const auto j = json::parse(line);
                    add(j.value("id", "doc" + std::to_string(n)), j.value("source", src.filename().string()),
                        j.value("fetched_at", ""), j.value("format", "auto"), j.at("content").get<std::string>());
                }
            }
            write_file(a.raw_manifest(lang, role), manifest.dump(2) + "\n");
            report["corpora"].push_back({{"language", lang}, {"role", role}, {"documents", manifest.size()}});
        }
    }
    return report;
}

json stage_clean(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "clean"}, {"corpora", json::array()}};
    for (const auto& lang : c.languages) {
        const auto profile = load_profile(c, lang);
        for (const auto role : kRoles) {
            if (!c.corpora.count(lang)) continue;
            const auto& cp = c.corpora.at(lang);
            if ((role == "domain" ? cp.domain : cp.reference).empty()) continue;
            require_artifact(a.raw_manifest(lang, role), "ingest");
            const auto manifest = read_json(a.raw_manifest(lang, role));
            std::vector<Document> docs;
            CleaningReport total;
            json skipped = json::array();
            for (const auto& m : manifest) {
                const std::string raw = read_file(a.raw_dir(lang, role) / m.at("file").get<std::string>());
                DocumentMeta meta{m.at("id"), m.at("source"), lang, m.at("fetched_at")};
                try {
                    auto cleaned = clean_document(raw, meta, profile, c.cleaning);
                    total.paragraphs_kept += cleaned.report.paragraphs_kept;
                    total.paragraphs_dropped += cleaned.report.paragraphs_dropped;
                    for (const auto& [r, n] : cleaned.report.drop_reasons) total.drop_reasons[r] += n;
                    docs.push_back(std::move(cleaned.document));
                } catch (const Error& e) {
                    skipped.push_back({{"id", meta.id}, {"code", e.code()}, {"message", e.what()}});
                }
            }
            write_file(a.cleaned(lang, role), documents_jsonl(docs));
            auto r = total.to_json();
            r["language"] = lang;
            r["role"] = role;
            r["documents_in"] = manifest.size();
            r["documents_out"] = docs.size();
            r["skipped"] = skipped;
            report["corpora"].push_back(r);
        }
    }
    return report;
}

json stage_dedup(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "dedup"}, {"corpora", json::array()}};
    for (const auto& lang : c.languages) {
        for (const auto role : kRoles) {
            if (!c.corpora.count(lang)) continue;
            const auto& cp = c.corpora.at(lang);
            if ((role == "domain" ? cp.domain : cp.reference).empty()) continue;
            require_artifact(a.cleaned(lang, role), "clean");
            const auto result = dedup(read_documents(a.cleaned(lang, role)), c.dedup);
            write_file(a.deduped(lang, role), documents_jsonl(result.kept));
            auto r = result.report.to_json();
            r["language"] = lang;
            r["role"] = role;
            report["corpora"].push_back(r);
        }
    }
    return report;
}

json stage_index(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "index"}, {"corpora", json::array()}};
    for (const auto& lang : c.languages) {
        const Tokenizer tokenizer(load_profile(c, lang));
        for (const auto role : kRoles) {
            if (!c.corpora.count(lang)) continue;
            const auto& cp = c.corpora.at(lang);
            if ((role == "domain" ? cp.domain : cp.reference).empty()) continue;
            require_artifact(a.deduped(lang, role), "dedup");
            std::vector<TaggedDocument> tagged;
            for (const auto& d : read_documents(a.deduped(lang, role))) tagged.push_back(tag_document(d, tokenizer));
            fs::create_directories(a.vertical(lang, role).parent_path());
            write_vertical_file(a.vertical(lang, role).string(), tagged);
            const auto index = build_corpus(std::move(tagged));
            const auto sidecar = index_sidecar(index);
            write_file(a.sidecar(lang, role), sidecar.dump() + "\n");
            const auto stats = corpus_stats(index);
            report["corpora"].push_back({{"language", lang},
                                         {"role", role},
                                         {"documents", stats.documents},
                                         {"tokens", stats.tokens},
                                         {"unique_tokens", stats.unique_tokens}});
        }
    }
    return report;
}

json stage_extract(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "extract"}, {"corpora", json::array()}};
    for (const auto& lang : c.languages) {
        if (!c.corpora.count(lang)) continue;
        const auto grammar = load_grammar(c, lang);
        for (const auto role : kRoles) {
            const auto& cp = c.corpora.at(lang);
            if ((role == "domain" ? cp.domain : cp.reference).empty()) continue;
            const auto index = load_index(a, lang, role);
            const auto table = extract_candidates(index, grammar, c.extract_threads);
            std::ostringstream out;
            write_phrase_table(out, table);
            write_file(a.phrases(lang, role), out.str());
            report["corpora"].push_back({{"language", lang},
                                         {"role", role},
                                         {"corpus_size", table.corpus_size},
                                         {"distinct_phrases", table.counts.size()}});
        }
    }
    return report;
}

json stage_rank(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "rank"}, {"languages", json::array()}};
    for (const auto& lang : c.languages) {
        if (!c.corpora.count(lang)) continue;
        require_artifact(a.phrases(lang, "domain"), "extract");
        require_artifact(a.phrases(lang, "reference"), "extract");
        std::ifstream din(a.phrases(lang, "domain")), rin(a.phrases(lang, "reference"));
        const auto domain = read_phrase_table(din);
        const auto reference = read_phrase_table(rin);
        const auto ranked = rank_terms(domain, reference, c.rank);
        std::ostringstream out;
        write_ranked_terms(out, ranked);
        write_file(a.ranked(lang), out.str());
        json top = json::array();
        for (std::size_t i = 0; i < ranked.size() && i < 20; ++i) {
            top.push_back({{"phrase", ranked[i].phrase}, {"rank", ranked[i].rank}, {"raw_count", ranked[i].raw_count}});
        }
        report["languages"].push_back({{"language", lang}, {"terms", ranked.size()}, {"top", top}});
    }
    return report;
}

json stage_relate(const PipelineConfig& c, const Artifacts& a) {
    const auto& lang = c.pivot_language;
    const auto index = load_index(a, lang, "domain");
    const auto grammar = load_grammar(c, lang);
    if (c.np_rule >= grammar.rules.size()) throw Error("invalid_config", "np_rule is out of range for the grammar");
    const auto pairs = extract_hypernym_pairs(index, load_pattern_set(c, lang), grammar.rules[c.np_rule]);
    json out = json::array();
    std::map<std::string, std::size_t> per_method;
    for (const auto& p : pairs) {
        out.push_back(p.to_json());
        ++per_method[p.method];
    }
    write_file(a.hypernyms(lang), out.dump(1) + "\n");
    return {{"stage", "relate"}, {"language", lang}, {"candidates", pairs.size()}, {"per_method", per_method}};
}

json stage_translate(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "translate"}, {"languages", json::array()}};
    const auto& pivot = c.pivot_language;
    const auto source_terms = top_terms(load_ranked(a, pivot), c.translate_source_limit);
    const auto source_index = load_index(a, pivot, "domain");
    const auto source_opts = profile_options(c, pivot);
    for (const auto& [lang, lexicon_path] : c.lexicons) {
        if (lang == pivot) continue;
        std::ifstream lin(lexicon_path);
        if (!lin) throw Error("io", "cannot read " + lexicon_path.string());
        const auto lexicon = BilingualLexicon::read_tsv(lin, pivot, lang);
        const auto target_index = load_index(a, lang, "domain");
        const auto targets = build_target_side(target_index, top_terms(load_ranked(a, lang), c.translate_target_limit),
                                               profile_options(c, lang));
        CandidateLists lists;
        std::size_t with_candidates = 0;
        for (const auto& term : source_terms) {
            const auto profile = collocate_profile(source_index, term, source_opts);
            auto cands = translation_candidates(profile, targets, lexicon, c.translate_k);
            if (!cands.empty()) ++with_candidates;
            lists[text::normalize_phrase(term)] = std::move(cands);
        }
        write_file(a.translations(pivot, lang), to_json(lists).dump(1) + "\n");
        report["languages"].push_back({{"language", lang},
                                       {"source_terms", source_terms.size()},
                                       {"target_terms", targets.size()},
                                       {"with_candidates", with_candidates}});
    }
    return report;
}

json stage_import(const PipelineConfig& c, const Artifacts& a) {
    ThesaurusStore store = c.base_store.empty() ? ThesaurusStore(store_options(c))
                                                : ThesaurusStore::load(c.base_store.string(), store_options(c));
    json datasets = json::array();
    for (const auto& d : c.datasets) {
        const auto mapping = ImportMapping::from_json(read_json(d.mapping));
        auto r = import_dataset(read_file(d.file), mapping, store, c.editor).to_json();
        r["file"] = d.file.filename().string();
        datasets.push_back(std::move(r));
    }
    json candidates = nullptr;
    if (c.import_candidates) {
        const auto ids = import_term_candidates(store, load_ranked(a, c.pivot_language), c.candidate_limit, c.editor);
        candidates = {{"created", ids.size()}};
    }
    const auto problems = store.validate();
    if (!problems.empty()) throw Error("internal", "store invariants violated: " + problems.front());
    store.save(a.store().string());
    return {{"stage", "import"}, {"datasets", datasets}, {"candidates", candidates}, {"entries", store.size()}};
}

json stage_export(const PipelineConfig& c, const Artifacts& a) {
    require_artifact(a.store(), "import");
    const auto store = ThesaurusStore::load(a.store().string(), store_options(c));
    SkosOptions opts;
    opts.pivot_language = c.pivot_language;
    write_file(a.skos_rdfxml(), export_skos_rdfxml(store, opts));
    write_file(a.skos_jsonld(), export_skos_jsonld(store, opts).dump(1) + "\n");
    return {{"stage", "export-skos"},
            {"concepts", store.size()},
            {"rdfxml", a.skos_rdfxml().string()},
            {"jsonld", a.skos_jsonld().string()}};
}

GoldTranslations read_gold(const fs::path& p) {
    GoldTranslations gold;
    std::istringstream in(read_file(p));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line[0] == '#') continue;
        const auto parts = text::split(line, '\t');
        if (parts.size() != 2) throw Error("io", p.string() + ": expected 'source<TAB>target' lines");
        gold[text::normalize_phrase(parts[0])].insert(text::normalize_phrase(parts[1]));
    }
    return gold;
}

json stage_eval(const PipelineConfig& c, const Artifacts& a) {
    json report = {{"stage", "eval-translations"}, {"k", c.eval_k}, {"languages", json::array()}};
    for (const auto& [lang, path] : c.gold) {
        require_artifact(a.translations(c.pivot_language, lang), "translate");
        const auto lists = candidate_lists_from_json(read_json(a.translations(c.pivot_language, lang)));
        const auto gold = read_gold(path);
        report["languages"].push_back({{"language", lang},
                                       {"gold_terms", gold.size()},
                                       {"hit_rate", evaluate_translations(gold, lists, c.eval_k)}});
    }
    return report;
}

}  // namespace

void PipelineConfig::validate() const {
    auto bad = [](const std::string& what) { throw Error("invalid_config", what); };
    if (languages.empty()) bad("languages must not be empty");
    if (std::find(languages.begin(), languages.end(), pivot_language) == languages.end()) {
        bad("pivot language '" + pivot_language + "' is not in the language list");
    }
    auto must_exist = [&](const fs::path& p, const std::string& what) {
        if (!p.empty() && !fs::exists(p)) bad(what + " not found: " + p.string());
    };
    for (const auto& [lang, cp] : corpora) {
        must_exist(cp.domain, "domain corpus for " + lang);
        must_exist(cp.reference, "reference corpus for " + lang);
    }
    for (const auto* m : {&profiles, &grammars, &stop_words, &lexicons, &gold}) {
        for (const auto& [lang, p] : *m) must_exist(p, "file for " + lang);
    }
    for (const auto& lang : languages) {
        if (corpora.count(lang) && !grammars.count(lang)) bad("no grammar configured for " + lang);
    }
    must_exist(patterns, "pattern file");
    must_exist(base_store, "base store");
    for (const auto& d : datasets) {
        must_exist(d.file, "import dataset");
        must_exist(d.mapping, "import mapping");
        if (d.mapping.empty()) bad("import dataset " + d.file.string() + " has no mapping");
    }
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base) {
    PipelineConfig c;
    try {
        c.workdir = resolve(base, j.value("workdir", "work"));
        c.languages = j.at("languages").get<std::vector<std::string>>();
        c.pivot_language = j.at("pivot_language").get<std::string>();
        const auto corpora = j.value("corpora", json::object());
        for (const auto& [lang, v] : corpora.items()) {
            c.corpora[lang] = {resolve(base, v.value("domain", "")), resolve(base, v.value("reference", ""))};
        }
        c.profiles = path_map(j, "profiles", base);
        c.grammars = path_map(j, "grammars", base);
        c.stop_words = path_map(j, "stop_words", base);
        c.lexicons = path_map(j, "lexicons", base);
        c.gold = path_map(j, "gold", base);
        c.patterns = resolve(base, j.value("patterns", ""));
        if (j.contains("cleaning")) c.cleaning = CleaningConfig::from_json(j.at("cleaning"));
        const auto dd = j.value("dedup", json::object());
        c.dedup.shingle_len = dd.value("shingle_len", c.dedup.shingle_len);
        c.dedup.threshold = dd.value("threshold", c.dedup.threshold);
        const auto rk = j.value("rank", json::object());
        c.rank.n = SimpleMath(rk.value("n", 1.0));
        c.rank.min_count = rk.value("min_count", c.rank.min_count);
        c.extract_threads = j.value("extract", json::object()).value("threads", c.extract_threads);
        c.np_rule = j.value("relate", json::object()).value("np_rule", c.np_rule);
        const auto tr = j.value("translate", json::object());
        c.translate_window = tr.value("window", c.translate_window);
        c.translate_k = tr.value("k", c.translate_k);
        c.translate_source_limit = tr.value("source_limit", c.translate_source_limit);
        c.translate_target_limit = tr.value("target_limit", c.translate_target_limit);
        c.eval_k = j.value("eval", json::object()).value("k", c.eval_k);
        const auto im = j.value("import", json::object());
        c.base_store = resolve(base, im.value("base_store", ""));
        for (const auto& d : im.value("datasets", json::array())) {
            c.datasets.push_back({resolve(base, d.at("file").get<std::string>()),
                                  resolve(base, d.value("mapping", ""))});
        }
        c.import_candidates = im.value("candidates", c.import_candidates);
        c.candidate_limit = im.value("candidate_limit", c.candidate_limit);
        c.editor = im.value("editor", c.editor);
        c.revision_timestamp = j.value("revision_timestamp", "");
        c.api = j.value("api", json::object());
        const auto sv = j.value("serve", json::object());
        c.host = sv.value("host", c.host);
        c.port = sv.value("port", c.port);
    } catch (const json::exception& e) {
        throw Error("invalid_config", e.what());
    }
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
    if (!fs::exists(path)) throw Error("invalid_config", "config file not found: " + path.string());
    return from_json(read_json(path), fs::absolute(path).parent_path());
}

fs::path Artifacts::raw_dir(std::string_view lang, std::string_view role) const {
    return root / "raw" / (std::string(lang) + "-" + std::string(role));
}
fs::path Artifacts::raw_manifest(std::string_view lang, std::string_view role) const {
    return root / "raw" / (std::string(lang) + "-" + std::string(role) + ".json");
}
fs::path Artifacts::cleaned(std::string_view lang, std::string_view role) const {
    return root / "clean" / (std::string(lang) + "-" + std::string(role) + ".jsonl");
}
fs::path Artifacts::deduped(std::string_view lang, std::string_view role) const {
    return root / "dedup" / (std::string(lang) + "-" + std::string(role) + ".jsonl");
}
fs::path Artifacts::vertical(std::string_view lang, std::string_view role) const {
    return root / "index" / (std::string(lang) + "-" + std::string(role) + ".vert");
}
fs::path Artifacts::sidecar(std::string_view lang, std::string_view role) const {
    return root / "index" / (std::string(lang) + "-" + std::string(role) + ".vert.json");
}
fs::path Artifacts::phrases(std::string_view lang, std::string_view role) const {
    return root / "terms" / (std::string(lang) + "-" + std::string(role) + ".phrases.tsv");
}
fs::path Artifacts::ranked(std::string_view lang) const { return root / "terms" / (std::string(lang) + ".ranked.tsv"); }
fs::path Artifacts::hypernyms(std::string_view lang) const {
    return root / "relations" / (std::string(lang) + ".hypernyms.json");
}
fs::path Artifacts::translations(std::string_view pivot, std::string_view lang) const {
    return root / "translations" / (std::string(pivot) + "-" + std::string(lang) + ".json");
}
fs::path Artifacts::store() const { return root / "store.json"; }
fs::path Artifacts::skos_rdfxml() const { return root / "export" / "thesaurus.rdf"; }
fs::path Artifacts::skos_jsonld() const { return root / "export" / "thesaurus.jsonld"; }
fs::path Artifacts::report(std::string_view stage) const { return root / "reports" / (std::string(stage) + ".json"); }

const std::vector<std::string>& stage_names() {
    static const std::vector<std::string> kNames{"ingest", "clean",  "dedup",       "index",
                                                 "extract", "rank",  "relate",      "translate",
                                                 "import",  "export-skos", "serve", "eval-translations"};
    return kNames;
}

json run_stage(std::string_view stage, const PipelineConfig& c) {
    const Artifacts a{c.workdir};
    json report;
    if (stage == "ingest") {
        report = stage_ingest(c, a);
    } else if (stage == "clean") {
        report = stage_clean(c, a);
    } else if (stage == "dedup") {
        report = stage_dedup(c, a);
    } else if (stage == "index") {
        report = stage_index(c, a);
    } else if (stage == "extract") {
        report = stage_extract(c, a);
    } else if (stage == "rank") {
        report = stage_rank(c, a);
    } else if (stage == "relate") {
        report = stage_relate(c, a);
    } else if (stage == "translate") {
        report = stage_translate(c, a);
    } else if (stage == "import") {
        report = stage_import(c, a);
    } else if (stage == "export-skos") {
        report = stage_export(c, a);
    } else if (stage == "eval-translations") {
        report = stage_eval(c, a);
    } else {
        throw Error("invalid_argument", "unknown batch stage '" + std::string(stage) + "'");
    }
    write_file(a.report(stage), report.dump(2) + "\n");
    return report;
}

void serve(const PipelineConfig& c) {
    const Artifacts a{c.workdir};
    require_artifact(a.store(), "import");
    auto store = ThesaurusStore::load(a.store().string());
    auto config = ApiConfig::from_json(c.api);
    if (config.store_path.empty()) config.store_path = a.store().string();
    config.skos.pivot_language = c.pivot_language;
    config.profile_options = profile_options(c, c.pivot_language);

    std::shared_ptr<const CorpusIndex> corpus;
    if (fs::exists(a.vertical(c.pivot_language, "domain"))) {
        corpus = std::make_shared<const CorpusIndex>(load_index(a, c.pivot_language, "domain"));
    }
    SuggestionData data;
    if (fs::exists(a.hypernyms(c.pivot_language))) {
        for (const auto& j : read_json(a.hypernyms(c.pivot_language))) {
            data.hypernym_candidates.push_back(RelationCandidate::from_json(j));
        }
    }
    for (const auto& lang : c.languages) {
        if (lang == c.pivot_language || !fs::exists(a.translations(c.pivot_language, lang))) continue;
        data.translations[lang] = candidate_lists_from_json(read_json(a.translations(c.pivot_language, lang)));
    }
    ApiService service(std::move(store), std::move(config), corpus, std::move(data));
    HttpServer server(service);
    server.listen(c.host, c.port);
}

json document_to_json(const Document& d) {
    json paras = json::array();
    for (const auto& p : d.paragraphs) paras.push_back({{"text", p.text}, {"quality", to_string(p.quality)}});
    return {{"id", d.id},
            {"source", d.source},
            {"language", d.language},
            {"fetched_at", d.fetched_at},
            {"paragraphs", paras}};
}

Document document_from_json(const json& j) {
    Document d;
    d.id = j.at("id").get<std::string>();
    d.source = j.value("source", "");
    d.language = j.value("language", "");
    d.fetched_at = j.value("fetched_at", "");
    for (const auto& p : j.at("paragraphs")) {
        d.paragraphs.push_back(
            {p.at("text").get<std::string>(), p.value("quality", "good") == "boilerplate" ? Quality::Boilerplate : Quality::Good});
    }
    return d;
}

LanguageProfile load_profile(const PipelineConfig& c, const std::string& lang) {
    LanguageProfile p;
    if (const auto it = c.profiles.find(lang); it != c.profiles.end()) {
        p = LanguageProfile::from_json(read_json(it->second));
    } else {
        p = LanguageProfile::builtin(lang);
    }
    if (const auto it = c.stop_words.find(lang); it != c.stop_words.end()) {
        p.stop_words = read_stop_words(it->second.string());
    }
    if (p.code.empty()) p.code = lang;
    return p;
}

}  // namespace termwork

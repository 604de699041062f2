// Python bindings. Structured values cross the boundary as JSON text; the
// termwork package wraps them into dicts and lists.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "termwork/api.hpp"
#include "termwork/corpus.hpp"
#include "termwork/dedup.hpp"
#include "termwork/error.hpp"
#include "termwork/import.hpp"
#include "termwork/pipeline.hpp"
#include "termwork/relations.hpp"
#include "termwork/skos.hpp"
#include "termwork/term_extraction.hpp"
#include "termwork/term_grammar.hpp"
#include "termwork/text.hpp"
#include "termwork/thesaurus.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace termwork;

namespace {

const std::vector<std::string> kDefaultRules{"[tag=ADJ]* [tag=NOUN]+",
                                             "[tag=ADJ]* [tag=NOUN]+ [tag=PREP] [tag=ADJ]* [tag=NOUN]+"};

// Blank lines separate paragraphs.
std::vector<std::string> paragraphs_of(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find('\n', start);
        if (end == std::string::npos) end = s.size();
        const auto line = text::trim(std::string_view(s).substr(start, end - start));
        if (line.empty()) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += (cur.empty() ? "" : " ") + std::string(line);
        }
        start = end + 1;
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

CorpusIndex index_texts(const std::vector<std::string>& texts, const std::string& language) {
    const Tokenizer tokenizer(LanguageProfile::builtin(language));
    std::vector<Document> docs;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Document d{"doc" + std::to_string(i), "python", language, {}, ""};
        for (auto& p : paragraphs_of(texts[i])) d.paragraphs.push_back({std::move(p), Quality::Good});
        docs.push_back(std::move(d));
    }
    return build_corpus(docs, tokenizer);
}

std::string rank(const std::vector<std::string>& domain, const std::vector<std::string>& reference,
                 const std::string& language, const std::optional<std::vector<std::string>>& rules, double n,
                 std::uint64_t min_count) {
    const auto grammar = compile_term_grammar(rules ? *rules : kDefaultRules);
    const auto ranked = rank_terms(extract_candidates(index_texts(domain, language), grammar),
                                   extract_candidates(index_texts(reference, language), grammar),
                                   {SimpleMath(n), min_count});
    json out = json::array();
    for (const auto& c : ranked) {
        out.push_back({{"phrase", c.phrase}, {"raw_count", c.raw_count}, {"f", c.f}, {"f_ref", c.f_ref},
                       {"rank", c.rank}});
    }
    return out.dump();
}

std::string dedup_documents(const std::string& documents_json, std::size_t shingle_len, double threshold) {
    std::vector<Document> docs;
    for (const auto& d : json::parse(documents_json)) docs.push_back(document_from_json(d));
    const auto r = dedup(docs, {shingle_len, threshold});
    json kept = json::array();
    for (const auto& d : r.kept) kept.push_back(document_to_json(d));
    return json{{"kept", kept}, {"report", r.report.to_json()}}.dump();
}

class PyStore {
public:
    PyStore() = default;
    explicit PyStore(ThesaurusStore s) : store_(std::move(s)) {}

    std::string upsert(const std::string& entry_json, const std::string& editor,
                       std::optional<std::size_t> expected_revisions) {
        return store_.upsert_entry(ThesaurusEntry::from_json(json::parse(entry_json)), editor, {},
                                   expected_revisions);
    }
    std::string get(const std::string& id) const { return store_.get(id).to_json().dump(); }
    std::vector<std::string> find(const std::string& term) const { return store_.find_by_term(term); }
    std::size_t size() const { return store_.size(); }
    std::vector<std::string> validate() const { return store_.validate(); }
    std::string dump() const { return store_.dump().dump(); }
    std::string tree(std::optional<std::string> root, bool include_rejected, std::size_t depth) const {
        TreeOptions o;
        o.include_rejected = include_rejected;
        o.depth = depth;
        json out = json::array();
        const auto nodes = root ? termwork::tree(store_, std::string_view(*root), o) : termwork::tree(store_, std::nullopt, o);
        for (const auto& n : nodes) out.push_back(n.to_json());
        return out.dump();
    }
    std::string import_dataset(const std::string& content, const std::string& mapping_json, const std::string& editor) {
        return termwork::import_dataset(content, ImportMapping::from_json(json::parse(mapping_json)), store_, editor)
            .to_json()
            .dump();
    }
    std::string close_terms(const std::string& term, double threshold) const {
        json out = json::array();
        for (const auto& c : detect_close_terms(term, store_, threshold)) out.push_back({{"id", c.id}, {"score", c.score}});
        return out.dump();
    }
    std::string skos_rdfxml() const { return export_skos_rdfxml(store_); }
    std::string skos_jsonld() const { return export_skos_jsonld(store_).dump(); }

    const ThesaurusStore& store() const { return store_; }

private:
    ThesaurusStore store_;
};

class PyApi {
public:
    PyApi(const PyStore& store, const std::string& config_json)
        : service_(store.store(), ApiConfig::from_json(json::parse(config_json))) {}

    py::tuple handle(const std::string& method, const std::string& path, const std::map<std::string, std::string>& query,
                     const std::map<std::string, std::string>& headers, const std::string& body) {
        std::map<std::string, std::string> lower;
        for (const auto& [k, v] : headers) lower[text::fold_case(k)] = v;
        ApiResponse r;
        {
            py::gil_scoped_release release;
            r = service_.handle({method, path, query, lower, body});
        }
        return py::make_tuple(r.status, r.content_type, r.body);
    }

private:
    ApiService service_;
};

}  // namespace

PYBIND11_MODULE(_termwork, m) {
    m.doc() = "Terminology thesaurus workbench core";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            exc.attr("code") = e.code();
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def("normalize_phrase", [](const std::string& s) { return text::normalize_phrase(s); });
    m.def("strip_diacritics", [](const std::string& s) { return text::strip_diacritics(s); });
    m.def("lexsim", [](const std::string& a, const std::string& b) { return lexsim(a, b); });
    m.def("logdice", &logdice, py::arg("f1"), py::arg("f2"), py::arg("f12"));
    m.def("term_rank", [](double f, double f_ref, double n) { return term_rank(f, f_ref, SimpleMath(n)); },
          py::arg("f"), py::arg("f_ref"), py::arg("n") = 1.0);
    m.def("tokenize", [](const std::string& s, const std::string& language) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& t : tokenize(s, LanguageProfile::builtin(language))) out.emplace_back(t.surface, std::string(to_string(t.tag)));
        return out;
    });
    m.def("rank", &rank, py::arg("domain"), py::arg("reference"), py::arg("language") = "en",
          py::arg("rules") = std::nullopt, py::arg("n") = 1.0, py::arg("min_count") = 2);
    m.def("dedup", &dedup_documents, py::arg("documents"), py::arg("shingle_len") = 5, py::arg("threshold") = 0.9);
    m.def("run_stage", [](const std::string& stage, const std::string& config_path) {
        return run_stage(stage, PipelineConfig::load(config_path)).dump();
    });

    py::class_<PyStore>(m, "Store")
        .def(py::init<>())
        .def_static("restore", [](const std::string& dump) { return PyStore(ThesaurusStore::restore(json::parse(dump))); })
        .def_static("load", [](const std::string& path) { return PyStore(ThesaurusStore::load(path)); })
        .def_static("from_skos_rdfxml", [](const std::string& xml) { return PyStore(import_skos_rdfxml(xml)); })
        .def("upsert", &PyStore::upsert, py::arg("entry"), py::arg("editor"), py::arg("expected_revisions") = std::nullopt)
        .def("get", &PyStore::get)
        .def("find", &PyStore::find)
        .def("__len__", &PyStore::size)
        .def("validate", &PyStore::validate)
        .def("dump", &PyStore::dump)
        .def("tree", &PyStore::tree, py::arg("root") = std::nullopt, py::arg("include_rejected") = false,
             py::arg("depth") = 0)
        .def("import_dataset", &PyStore::import_dataset)
        .def("close_terms", &PyStore::close_terms, py::arg("term"), py::arg("threshold") = 0.8)
        .def("skos_rdfxml", &PyStore::skos_rdfxml)
        .def("skos_jsonld", &PyStore::skos_jsonld);

    py::class_<PyApi>(m, "Api")
        .def(py::init<const PyStore&, const std::string&>())
        .def("handle", &PyApi::handle);
}

#include "termwork/skos.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "termwork/error.hpp"
#include "termwork/text.hpp"
#include "termwork/vertical.hpp"

namespace termwork {

namespace {

constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view kSkosNs = "http://www.w3.org/2004/02/skos/core#";
constexpr std::string_view kDctNs = "http://purl.org/dc/terms/";
constexpr std::string_view kTwNs = "urn:termwork:vocab#";
constexpr std::string_view kImportEditor = "skos-import";

std::string scheme_iri(const SkosOptions& o) { return o.base_iri + "scheme"; }

std::string id_from_iri(const std::string& iri, const SkosOptions& o) {
    if (iri.rfind(o.base_iri, 0) == 0) return iri.substr(o.base_iri.size());
    const auto cut = iri.find_last_of("/#:");
    return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

// Inserts parsed entries parents-first so every broader id already exists.
ThesaurusStore rebuild(std::vector<ThesaurusEntry> entries, StoreOptions store_options) {
    ThesaurusStore store(std::move(store_options));
    std::set<std::string> known;
    for (const auto& e : entries) known.insert(e.id);
    std::vector<bool> done(entries.size(), false);
    std::size_t remaining = entries.size();
    std::set<std::string> inserted;
    while (remaining > 0) {
        bool progress = false;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (done[i]) continue;
            const auto& e = entries[i];
            const bool ready = std::all_of(e.broader.begin(), e.broader.end(), [&](const std::string& b) {
                if (!known.count(b)) throw Error("skos_syntax", "concept " + e.id + " has unknown broader " + b);
                return inserted.count(b) > 0;
            });
            if (!ready) continue;
            auto copy = e;
            copy.narrower.clear();
            store.upsert_entry(std::move(copy), kImportEditor, "imported from SKOS");
            inserted.insert(e.id);
            done[i] = true;
            --remaining;
            progress = true;
        }
        if (!progress) throw Error("skos_syntax", "broader relation in the import contains a cycle");
    }
    return store;
}

}  // namespace

std::string export_skos_rdfxml(const ThesaurusStore& store, const SkosOptions& o) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<rdf:RDF xmlns:rdf=\"" << kRdfNs << "\"\n"
        << "         xmlns:skos=\"" << kSkosNs << "\"\n"
        << "         xmlns:dct=\"" << kDctNs << "\"\n"
        << "         xmlns:tw=\"" << kTwNs << "\">\n";
    out << "  <skos:ConceptScheme rdf:about=\"" << xml_escape(scheme_iri(o)) << "\">\n"
        << "    <dct:title>" << xml_escape(o.scheme_title) << "</dct:title>\n"
        << "  </skos:ConceptScheme>\n";
    auto iri = [&](const std::string& id) { return xml_escape(o.base_iri + id); };
    auto literal = [&](std::string_view tag, const std::string& lang, const std::string& value) {
        out << "    <" << tag;
        if (!lang.empty()) out << " xml:lang=\"" << xml_escape(lang) << "\"";
        out << ">" << xml_escape(value) << "</" << tag << ">\n";
    };
    for (const auto& [id, e] : store.entries()) {
        out << "  <skos:Concept rdf:about=\"" << iri(id) << "\">\n";
        out << "    <skos:inScheme rdf:resource=\"" << xml_escape(scheme_iri(o)) << "\"/>\n";
        literal("skos:prefLabel", o.pivot_language, e.term);
        for (const auto& v : e.variants) literal("skos:altLabel", o.pivot_language, v);
        for (const auto& [lang, list] : e.translations) {
            for (std::size_t i = 0; i < list.size(); ++i) {
                literal(i == 0 ? "skos:prefLabel" : "skos:altLabel", lang, list[i].phrase);
            }
        }
        if (!e.explanations.empty()) literal("skos:definition", o.pivot_language, e.explanations.front().text);
        for (std::size_t i = 0; i < e.explanations.size(); ++i) {
            out << "    <tw:explanation rdf:parseType=\"Resource\">"
                << "<rdf:value>" << xml_escape(e.explanations[i].text) << "</rdf:value>"
                << "<tw:topic>" << xml_escape(e.explanations[i].category) << "</tw:topic>"
                << "<tw:position>" << i << "</tw:position></tw:explanation>\n";
        }
        for (const auto& [lang, list] : e.translations) {
            for (const auto& t : list) {
                if (t.source.empty()) continue;
                out << "    <tw:translationSource rdf:parseType=\"Resource\">"
                    << "<tw:language>" << xml_escape(lang) << "</tw:language>"
                    << "<rdf:value>" << xml_escape(t.phrase) << "</rdf:value>"
                    << "<dct:source>" << xml_escape(t.source) << "</dct:source></tw:translationSource>\n";
            }
        }
        for (const auto& b : e.broader) out << "    <skos:broader rdf:resource=\"" << iri(b) << "\"/>\n";
        for (const auto& n : e.narrower) out << "    <skos:narrower rdf:resource=\"" << iri(n) << "\"/>\n";
        if (e.broader.empty()) {
            out << "    <skos:topConceptOf rdf:resource=\"" << xml_escape(scheme_iri(o)) << "\"/>\n";
        }
        if (!e.source.empty()) literal("dct:source", "", e.source);
        literal("tw:status", "", std::string(to_string(e.status)));
        literal("tw:reliability", "", std::to_string(e.reliability));
        if (e.kind == EntryKind::Category) literal("tw:kind", "", "category");
        for (const auto& [k, v] : e.provenance) {
            out << "    <tw:provenance rdf:parseType=\"Resource\"><tw:key>" << xml_escape(k)
                << "</tw:key><rdf:value>" << xml_escape(v) << "</rdf:value></tw:provenance>\n";
        }
        out << "  </skos:Concept>\n";
    }
    out << "</rdf:RDF>\n";
    return out.str();
}

nlohmann::json export_skos_jsonld(const ThesaurusStore& store, const SkosOptions& o) {
    using nlohmann::json;
    json graph = json::array();
    graph.push_back({{"@id", scheme_iri(o)}, {"@type", "skos:ConceptScheme"}, {"dct:title", o.scheme_title}});
    for (const auto& [id, e] : store.entries()) {
        json pref = json::array({{{"@value", e.term}, {"@language", o.pivot_language}}});
        json alt = json::array();
        for (const auto& v : e.variants) alt.push_back({{"@value", v}, {"@language", o.pivot_language}});
        json sources = json::array();
        for (const auto& [lang, list] : e.translations) {
            for (std::size_t i = 0; i < list.size(); ++i) {
                json label = {{"@value", list[i].phrase}, {"@language", lang}};
                (i == 0 ? pref : alt).push_back(label);
                if (!list[i].source.empty()) {
                    sources.push_back({{"tw:language", lang}, {"tw:phrase", list[i].phrase}, {"dct:source", list[i].source}});
                }
            }
        }
        json explanations = json::array();
        for (const auto& x : e.explanations) explanations.push_back({{"tw:text", x.text}, {"tw:topic", x.category}});
        json broader = json::array();
        for (const auto& b : e.broader) broader.push_back({{"@id", o.base_iri + b}});
        json narrower = json::array();
        for (const auto& n : e.narrower) narrower.push_back({{"@id", o.base_iri + n}});
        json node = {{"@id", o.base_iri + id},
                        {"@type", "skos:Concept"},
                        {"skos:inScheme", {{"@id", scheme_iri(o)}}},
                        {"skos:prefLabel", pref},
                        {"skos:altLabel", alt},
                        {"skos:broader", broader},
                        {"skos:narrower", narrower},
                        {"tw:explanation", explanations},
                        {"tw:translationSource", sources},
                        {"tw:status", to_string(e.status)},
                        {"tw:reliability", e.reliability},
                        {"tw:kind", e.kind == EntryKind::Category ? "category" : "term"},
                        {"tw:provenance", e.provenance}};
        if (!e.explanations.empty()) {
            node["skos:definition"] = {{"@value", e.explanations.front().text}, {"@language", o.pivot_language}};
        }
        if (!e.source.empty()) node["dct:source"] = e.source;
        if (e.broader.empty()) node["skos:topConceptOf"] = {{"@id", scheme_iri(o)}};
        graph.push_back(std::move(node));
    }
    return {{"@context",
             {{"rdf", kRdfNs}, {"skos", kSkosNs}, {"dct", kDctNs}, {"tw", kTwNs}}},
            {"@graph", graph}};
}

namespace {

// Labels in document order: pivot prefLabel is the term, pivot altLabels are
// variants, other languages list prefLabel first then altLabels.
struct LabelCollector {
    std::string pivot;
    std::string term;
    std::vector<std::string> variants;
    std::map<std::string, std::string> pref;
    std::map<std::string, std::vector<std::string>> alt;

    void add(bool preferred, const std::string& lang, const std::string& value) {
        if (lang == pivot) {
            if (preferred) {
                term = value;
            } else {
                variants.push_back(value);
            }
        } else if (preferred) {
            pref[lang] = value;
        } else {
            alt[lang].push_back(value);
        }
    }

    void apply(ThesaurusEntry& e, const std::map<std::pair<std::string, std::string>, std::string>& sources) const {
        e.term = term;
        e.variants = variants;
        std::set<std::string> langs;
        for (const auto& [l, v] : pref) langs.insert(l);
        for (const auto& [l, v] : alt) langs.insert(l);
        for (const auto& lang : langs) {
            auto& list = e.translations[lang];
            if (const auto it = pref.find(lang); it != pref.end()) list.push_back({it->second, ""});
            if (const auto it = alt.find(lang); it != alt.end()) {
                for (const auto& v : it->second) list.push_back({v, ""});
            }
            for (auto& t : list) {
                if (const auto s = sources.find({lang, t.phrase}); s != sources.end()) t.source = s->second;
            }
        }
    }
};

}  // namespace

ThesaurusStore import_skos_rdfxml(std::string_view xml, const SkosOptions& o, StoreOptions store_options) {
    namespace pt = boost::property_tree;
    pt::ptree doc;
    try {
        std::istringstream in{std::string(xml)};
        pt::read_xml(in, doc, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw Error("skos_syntax", std::string("malformed RDF/XML: ") + e.what());
    }
    const auto root = doc.get_child_optional("rdf:RDF");
    if (!root) throw Error("skos_syntax", "missing rdf:RDF root element");

    std::vector<ThesaurusEntry> entries;
    for (const auto& [name, node] : *root) {
        if (name != "skos:Concept") continue;
        ThesaurusEntry e;
        e.id = id_from_iri(node.get<std::string>("<xmlattr>.rdf:about", ""), o);
        if (e.id.empty()) throw Error("skos_syntax", "skos:Concept without rdf:about");
        LabelCollector labels{o.pivot_language, {}, {}, {}, {}};
        std::map<std::pair<std::string, std::string>, std::string> tsources;
        std::vector<std::pair<int, Explanation>> explanations;
        std::string definition;
        for (const auto& [prop, value] : node) {
            const std::string lang = value.get<std::string>("<xmlattr>.xml:lang", "");
            const std::string resource = value.get<std::string>("<xmlattr>.rdf:resource", "");
            if (prop == "skos:prefLabel" || prop == "skos:altLabel") {
                labels.add(prop == "skos:prefLabel", lang, value.data());
            } else if (prop == "skos:definition") {
                if (definition.empty()) definition = value.data();
            } else if (prop == "tw:explanation") {
                explanations.push_back({value.get<int>("tw:position", static_cast<int>(explanations.size())),
                                        {value.get<std::string>("rdf:value", ""), value.get<std::string>("tw:topic", "")}});
            } else if (prop == "tw:translationSource") {
                tsources[{value.get<std::string>("tw:language", ""), value.get<std::string>("rdf:value", "")}] =
                    value.get<std::string>("dct:source", "");
            } else if (prop == "skos:broader") {
                e.broader.push_back(id_from_iri(resource, o));
            } else if (prop == "dct:source") {
                e.source = value.data();
            } else if (prop == "tw:status") {
                e.status = parse_status(value.data());
            } else if (prop == "tw:reliability") {
                e.reliability = std::stoi(value.data());
            } else if (prop == "tw:kind") {
                e.kind = value.data() == "category" ? EntryKind::Category : EntryKind::Term;
            } else if (prop == "tw:provenance") {
                e.provenance[value.get<std::string>("tw:key", "")] = value.get<std::string>("rdf:value", "");
            }
        }
        labels.apply(e, tsources);
        if (!explanations.empty()) {
            std::stable_sort(explanations.begin(), explanations.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& [pos, x] : explanations) e.explanations.push_back(std::move(x));
        } else if (!definition.empty()) {
            e.explanations.push_back({definition, ""});
        }
        entries.push_back(std::move(e));
    }
    return rebuild(std::move(entries), std::move(store_options));
}

ThesaurusStore import_skos_jsonld(const nlohmann::json& doc, const SkosOptions& o, StoreOptions store_options) {
    if (!doc.contains("@graph") || !doc.at("@graph").is_array()) throw Error("skos_syntax", "missing @graph array");
    std::vector<ThesaurusEntry> entries;
    for (const auto& node : doc.at("@graph")) {
        if (node.value("@type", "") != "skos:Concept") continue;
        ThesaurusEntry e;
        e.id = id_from_iri(node.value("@id", ""), o);
        if (e.id.empty()) throw Error("skos_syntax", "concept without @id");
        LabelCollector labels{o.pivot_language, {}, {}, {}, {}};
        for (const auto& l : node.value("skos:prefLabel", nlohmann::json::array())) {
            labels.add(true, l.value("@language", ""), l.value("@value", ""));
        }
        for (const auto& l : node.value("skos:altLabel", nlohmann::json::array())) {
            labels.add(false, l.value("@language", ""), l.value("@value", ""));
        }
        std::map<std::pair<std::string, std::string>, std::string> tsources;
        for (const auto& s : node.value("tw:translationSource", nlohmann::json::array())) {
            tsources[{s.value("tw:language", ""), s.value("tw:phrase", "")}] = s.value("dct:source", "");
        }
        labels.apply(e, tsources);
        for (const auto& x : node.value("tw:explanation", nlohmann::json::array())) {
            e.explanations.push_back({x.value("tw:text", ""), x.value("tw:topic", "")});
        }
        if (e.explanations.empty() && node.contains("skos:definition")) {
            e.explanations.push_back({node.at("skos:definition").value("@value", ""), ""});
        }
        for (const auto& b : node.value("skos:broader", nlohmann::json::array())) {
            e.broader.push_back(id_from_iri(b.value("@id", ""), o));
        }
        e.source = node.value("dct:source", "");
        e.status = parse_status(node.value("tw:status", "approved"));
        e.reliability = node.value("tw:reliability", 0);
        e.kind = node.value("tw:kind", "term") == "category" ? EntryKind::Category : EntryKind::Term;
        e.provenance = node.value("tw:provenance", std::map<std::string, std::string>{});
        entries.push_back(std::move(e));
    }
    return rebuild(std::move(entries), std::move(store_options));
}

}  // namespace termwork

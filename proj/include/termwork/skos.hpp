#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "termwork/thesaurus.hpp"

namespace termwork {

struct SkosOptions {
    /// Concept IRIs are base_iri + entry id.
    std::string base_iri = "urn:termwork:concept:";
    std::string pivot_language = "cs";
    std::string scheme_title = "Terminology thesaurus";
};

/// RDF/XML. Each entry becomes a skos:Concept with prefLabel/altLabel in the
/// pivot and translation languages, skos:definition from the first
/// explanation, id-based broader/narrower links and dct:source provenance.
/// Fields SKOS has no term for (status, reliability, explanation topics,
/// translation provenance) use the `tw:` namespace so a re-import is lossless.
std::string export_skos_rdfxml(const ThesaurusStore& store, const SkosOptions& options = {});

/// The same graph as a JSON-LD document with an "@graph" array.
nlohmann::json export_skos_jsonld(const ThesaurusStore& store, const SkosOptions& options = {});

/// Rebuilds a store from an export produced by the functions above. Revision
/// histories restart with a single import revision per entry.
/// Throws Error("skos_syntax").
ThesaurusStore import_skos_rdfxml(std::string_view xml, const SkosOptions& options = {},
                                  StoreOptions store_options = {});
ThesaurusStore import_skos_jsonld(const nlohmann::json& doc, const SkosOptions& options = {},
                                  StoreOptions store_options = {});

}  // namespace termwork

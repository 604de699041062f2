#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "termwork/thesaurus.hpp"

namespace termwork {

enum class ImportFormat { Csv, Tsv, StructuredText };

/// How records of an external dataset map onto entry fields.
///
/// Target fields: "term", "variants", "explanation", "explanation_category",
/// "translation.<lang>", "broader" (resolved by id, then by term), "source",
/// "reliability", "status". Multi-valued targets split on
/// `multi_value_separator`.
///
/// CSV/TSV records are rows under a header line; structured-text records are
/// blocks of `Field: value` lines separated by blank lines.
struct ImportMapping {
    ImportFormat format = ImportFormat::Csv;
    std::map<std::string, std::string> fields;  // source field -> target field
    std::string multi_value_separator = ";";
    bool punctuation_cleanup = true;
    /// Whole-word replacements applied to terms, variants and translations.
    std::map<std::string, std::string> abbreviations;
    std::string default_source = "import";
    int default_reliability = kUnrated;
    EntryStatus default_status = EntryStatus::Approved;
    double close_threshold = 0.8;

    /// Throws Error("invalid_mapping") unless some field maps to "term".
    void validate() const;

    nlohmann::json to_json() const;
    static ImportMapping from_json(const nlohmann::json& j);
};

struct FlaggedRecord {
    std::string incoming;
    std::string existing_id;
    double score = 0.0;
};

struct RecordError {
    std::size_t record = 0;  // 1-based
    std::string message;
};

/// created + merged + flagged.size() + errors.size() equals the number of
/// input records. Warnings (unresolved broader terms etc.) do not count.
struct ImportReport {
    std::size_t records = 0;
    std::size_t created = 0;
    std::size_t merged = 0;
    std::vector<FlaggedRecord> flagged;
    std::vector<RecordError> errors;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

/// Collapses whitespace, removes spaces before , . ; : ! ? and strips stray
/// leading/trailing separators.
std::string clean_punctuation(std::string_view s);

std::string expand_abbreviations(std::string_view s, const std::map<std::string, std::string>& table);

/// Imports `content` into `store`. A record whose normalized term equals an
/// existing term merges field-wise (nothing is ever removed); otherwise a
/// record close to an existing term (diacritic-insensitive lexsim >=
/// close_threshold) is flagged and skipped; otherwise a new entry is created.
/// Unparseable or invalid records are reported and skipped.
ImportReport import_dataset(std::string_view content, const ImportMapping& mapping, ThesaurusStore& store,
                            std::string_view editor);

}  // namespace termwork

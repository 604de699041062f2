#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "termwork/corpus.hpp"
#include "termwork/error.hpp"

namespace termwork {

struct CleaningConfig {
    double max_link_density = 0.3;
    double min_stopword_ratio = 0.2;
    std::size_t min_length = 20;
    /// "latin1" re-decodes non-UTF-8 input as ISO-8859-1 instead of failing.
    std::string fallback_encoding;

    static CleaningConfig from_json(const nlohmann::json& j);
};

struct CleaningReport {
    std::size_t paragraphs_kept = 0;
    std::size_t paragraphs_dropped = 0;
    std::map<std::string, std::size_t> drop_reasons;

    nlohmann::json to_json() const;
};

/// Raised when input is neither valid UTF-8 nor covered by a fallback.
class DecodeError : public Error {
public:
    explicit DecodeError(std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct DocumentMeta {
    std::string id;
    std::string source;
    std::string language;
    std::string fetched_at;
};

struct CleanedDocument {
    Document document;
    CleaningReport report;
};

/// Per-paragraph measurements behind the quality label.
struct ParagraphMetrics {
    std::size_t length = 0;  // code points
    double link_density = 0.0;
    double stopword_ratio = 0.0;
};

/// Returns the drop reason ("too_short", "link_density",
/// "low_stopword_ratio") or an empty string for a good paragraph.
std::string classify_paragraph(const ParagraphMetrics& m, const CleaningConfig& config,
                               bool has_stop_list);

/// Strips markup (scripts, styles and comments removed, block elements split
/// paragraphs) or splits plain text on blank lines, then labels every
/// paragraph. Throws DecodeError or Error("empty_document").
CleanedDocument clean_document(std::string_view raw, const DocumentMeta& meta,
                               const LanguageProfile& profile, const CleaningConfig& config = {});

}  // namespace termwork

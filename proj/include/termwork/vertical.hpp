#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "termwork/corpus.hpp"

namespace termwork {

// Vertical corpus format: one token per line as `surface<TAB>normalized<TAB>TAG`,
// structure lines `<doc id=".." source=".." lang=".." fetched_at="..">`,
// `<p quality="good|boilerplate">`, `</p>` and `</doc>`.

void write_vertical(std::ostream& out, const std::vector<TaggedDocument>& documents);
/// Throws Error("vertical_syntax") naming the offending line number.
std::vector<TaggedDocument> read_vertical(std::istream& in);

void write_vertical_file(const std::string& path, const std::vector<TaggedDocument>& documents);
std::vector<TaggedDocument> read_vertical_file(const std::string& path);

/// Sidecar summary written next to an indexed vertical file.
nlohmann::json index_sidecar(const CorpusIndex& index);

/// Rebuilds the index from a vertical file and checks it against the
/// sidecar when one is given. Throws Error("index_mismatch") on drift.
CorpusIndex load_corpus(const std::string& vertical_path, const std::string& sidecar_path = {});

std::string xml_escape(std::string_view s);
std::string xml_unescape(std::string_view s);

}  // namespace termwork

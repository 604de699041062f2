#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "termwork/cleaning.hpp"
#include "termwork/corpus.hpp"
#include "termwork/dedup.hpp"
#include "termwork/term_extraction.hpp"

namespace termwork {

namespace fs = std::filesystem;

/// Declarative description of a pipeline run. Relative paths in the JSON are
/// resolved against the directory holding the config file.
struct PipelineConfig {
    struct Corpora {
        fs::path domain;
        fs::path reference;
    };
    struct Dataset {
        fs::path file;
        fs::path mapping;
    };

    fs::path workdir = "work";
    std::vector<std::string> languages;
    std::string pivot_language;
    std::map<std::string, Corpora> corpora;
    std::map<std::string, fs::path> profiles;    // optional LanguageProfile JSON
    std::map<std::string, fs::path> grammars;    // required per language
    std::map<std::string, fs::path> stop_words;  // optional, overrides profile
    std::map<std::string, fs::path> lexicons;    // pivot -> language TSV
    std::map<std::string, fs::path> gold;        // pivot -> language gold TSV
    fs::path patterns;                           // empty: built-in patterns

    CleaningConfig cleaning;
    DedupConfig dedup;
    RankOptions rank;
    std::size_t extract_threads = 1;
    /// Grammar rule (by index) delimiting hypernym-pattern noun phrases.
    std::size_t np_rule = 0;
    std::size_t translate_window = 5;
    std::size_t translate_k = 10;
    std::size_t translate_source_limit = 200;
    std::size_t translate_target_limit = 1000;
    std::size_t eval_k = 10;

    fs::path base_store;
    std::vector<Dataset> datasets;
    bool import_candidates = true;
    std::size_t candidate_limit = 100;
    std::string editor = "pipeline";
    /// Fixed revision timestamp for reproducible store artifacts; empty uses
    /// the wall clock.
    std::string revision_timestamp;

    nlohmann::json api = nlohmann::json::object();
    std::string host = "127.0.0.1";
    int port = 8080;

    /// Throws Error("invalid_config") for a missing pivot or a referenced file
    /// that does not exist.
    void validate() const;

    static PipelineConfig from_json(const nlohmann::json& j, const fs::path& base_dir);
    static PipelineConfig load(const fs::path& path);
};

/// Where each stage puts its outputs.
struct Artifacts {
    fs::path root;

    fs::path raw_dir(std::string_view lang, std::string_view role) const;
    fs::path raw_manifest(std::string_view lang, std::string_view role) const;
    fs::path cleaned(std::string_view lang, std::string_view role) const;
    fs::path deduped(std::string_view lang, std::string_view role) const;
    fs::path vertical(std::string_view lang, std::string_view role) const;
    fs::path sidecar(std::string_view lang, std::string_view role) const;
    fs::path phrases(std::string_view lang, std::string_view role) const;
    fs::path ranked(std::string_view lang) const;
    fs::path hypernyms(std::string_view lang) const;
    fs::path translations(std::string_view pivot, std::string_view lang) const;
    fs::path store() const;
    fs::path skos_rdfxml() const;
    fs::path skos_jsonld() const;
    fs::path report(std::string_view stage) const;
};

const std::vector<std::string>& stage_names();

/// Runs one batch stage, writes its artifacts and its JSON report, and
/// returns the report. Missing inputs raise Error("missing_artifact") naming
/// the file. "serve" is not a batch stage; use serve().
nlohmann::json run_stage(std::string_view stage, const PipelineConfig& config);

/// Loads the store and corpus artifacts and serves the API until stopped.
void serve(const PipelineConfig& config);

nlohmann::json document_to_json(const Document& d);
Document document_from_json(const nlohmann::json& j);

LanguageProfile load_profile(const PipelineConfig& config, const std::string& language);

}  // namespace termwork

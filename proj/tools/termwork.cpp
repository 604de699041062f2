// Command-line driver for the terminology pipeline.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "termwork/error.hpp"
#include "termwork/pipeline.hpp"

namespace {

struct Overrides {
    std::optional<double> n;
    std::optional<std::uint64_t> min_count;
    std::optional<std::size_t> threads;
    std::optional<double> dedup_threshold;
    std::optional<std::size_t> k;
    std::optional<std::size_t> window;
    std::optional<std::string> dataset;
    std::optional<std::string> mapping;
    std::optional<std::size_t> candidate_limit;
    bool no_candidates = false;
    std::optional<std::string> host;
    std::optional<int> port;
    std::optional<std::string> workdir;
};

void apply(const Overrides& o, termwork::PipelineConfig& c) {
    if (o.workdir) c.workdir = *o.workdir;
    if (o.n) c.rank.n = termwork::SimpleMath(*o.n);
    if (o.min_count) c.rank.min_count = *o.min_count;
    if (o.threads) c.extract_threads = *o.threads;
    if (o.dedup_threshold) c.dedup.threshold = *o.dedup_threshold;
    if (o.k) {
        c.translate_k = *o.k;
        c.eval_k = *o.k;
    }
    if (o.window) c.translate_window = *o.window;
    if (o.dataset) {
        if (!o.mapping) throw termwork::Error("invalid_argument", "--dataset needs --mapping");
        c.datasets.push_back({*o.dataset, *o.mapping});
    }
    if (o.candidate_limit) c.candidate_limit = *o.candidate_limit;
    if (o.no_candidates) c.import_candidates = false;
    if (o.host) c.host = *o.host;
    if (o.port) c.port = *o.port;
    c.validate();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"termwork - terminology thesaurus workbench"};
    app.require_subcommand(1);
    std::string config_path = "termwork.json";
    app.add_option("-c,--config", config_path, "pipeline config file")->capture_default_str();
    Overrides o;
    app.add_option("--workdir", o.workdir, "artifact directory (overrides config)");

    app.add_subcommand("ingest", "copy raw corpora into the work directory");
    app.add_subcommand("clean", "strip markup and label boilerplate paragraphs");
    auto* dedup = app.add_subcommand("dedup", "remove exact and near-duplicate documents and paragraphs");
    dedup->add_option("--threshold", o.dedup_threshold, "shingle Jaccard threshold");
    app.add_subcommand("index", "tokenize, tag and index the cleaned corpora");
    auto* extract = app.add_subcommand("extract", "extract grammar-matching phrases");
    extract->add_option("--threads", o.threads, "worker threads");
    auto* rank = app.add_subcommand("rank", "rank domain phrases against the reference corpus");
    rank->add_option("-n,--smoothing", o.n, "simple-math smoothing parameter");
    rank->add_option("--min-count", o.min_count, "minimum raw frequency");
    app.add_subcommand("relate", "mine hypernym candidates with lexico-syntactic patterns");
    auto* translate = app.add_subcommand("translate", "mine translation candidates from comparable corpora");
    translate->add_option("-k", o.k, "candidates per term");
    translate->add_option("--window", o.window, "collocation window");
    auto* import = app.add_subcommand("import", "build the thesaurus store from datasets and term candidates");
    import->add_option("--dataset", o.dataset, "additional dataset file");
    import->add_option("--mapping", o.mapping, "mapping for --dataset");
    import->add_option("--candidate-limit", o.candidate_limit, "ranked candidates to import (0 = all)");
    import->add_flag("--no-candidates", o.no_candidates, "skip ranked term candidates");
    app.add_subcommand("export-skos", "write RDF/XML and JSON-LD SKOS exports");
    auto* serve = app.add_subcommand("serve", "serve the JSON HTTP API");
    serve->add_option("--host", o.host, "bind address");
    serve->add_option("--port", o.port, "port");
    auto* eval = app.add_subcommand("eval-translations", "hit rate of translation candidates against gold lists");
    eval->add_option("-k", o.k, "cutoff");

    CLI11_PARSE(app, argc, argv);

    try {
        auto config = termwork::PipelineConfig::load(config_path);
        apply(o, config);
        auto* sub = app.get_subcommands().front();
        if (sub == serve) {
            std::cerr << "serving on http://" << config.host << ":" << config.port << "\n";
            termwork::serve(config);
            return 0;
        }
        const auto report = termwork::run_stage(sub->get_name(), config);
        std::cout << report.dump(2) << "\n";
    } catch (const termwork::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return e.code() == "missing_artifact" ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

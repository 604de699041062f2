#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "termwork/error.hpp"
#include "termwork/pipeline.hpp"
#include "termwork/thesaurus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = fs::path(TERMWORK_SOURCE_DIR) / "tests" / "data" / "pipeline";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("termwork-" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const fs::path& workdir, const std::string& args) {
    const auto out = workdir.parent_path() / (workdir.filename().string() + ".out");
    const auto err = workdir.parent_path() / (workdir.filename().string() + ".err");
    const std::string cmd = std::string("\"") + TERMWORK_CLI + "\" -c \"" + (kData / "config.json").string() +
                            "\" --workdir \"" + workdir.string() + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    fs::remove(out);
    fs::remove(err);
    return r;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
    return files;
}

std::vector<std::string> batch_stages() {
    auto names = termwork::stage_names();
    std::erase(names, "serve");
    return names;
}

void run_all(const fs::path& workdir) {
    for (const auto& stage : batch_stages()) {
        const auto r = cli(workdir, stage);
        INFO(stage << ": " << r.err);
        REQUIRE(r.code == 0);
    }
}

}  // namespace

TEST_CASE("every stage runs end to end from the command line") {
    TempDir tmp("pipeline-e2e");
    const auto work = tmp.path / "work";
    run_all(work);

    for (const auto& stage : batch_stages()) {
        INFO(stage);
        CHECK(fs::exists(work / "reports" / (stage + ".json")));
    }
    const auto dedup = json::parse(slurp(work / "reports" / "dedup.json"));
    bool saw_duplicate = false;
    for (const auto& c : dedup["corpora"]) {
        if (c["language"] == "en" && c["role"] == "domain") {
            saw_duplicate = c["docs_in"] == 11 && c["docs_kept"] == 10;
        }
    }
    CHECK(saw_duplicate);

    const auto relate = json::parse(slurp(work / "reports" / "relate.json"));
    CHECK(relate["candidates"] == 8);
    const auto hypernyms = json::parse(slurp(work / "relations" / "cs.hypernyms.json"));
    bool km = false;
    for (const auto& h : hypernyms) km = km || (h["hyponym"] == "katastrální mapa" && h["hypernym"] == "mapa");
    CHECK(km);

    const auto eval = json::parse(slurp(work / "reports" / "eval-translations.json"));
    CHECK(eval["languages"][0]["hit_rate"] == 1.0);

    const auto store = termwork::ThesaurusStore::load((work / "store.json").string());
    const auto ids = store.find_by_term("katastrální mapa");
    REQUIRE(ids.size() == 1);
    const auto& e = store.get(ids[0]);
    CHECK(e.variants == std::vector<std::string>{"KM"});
    CHECK(store.get(e.broader.at(0)).term == "mapa");
    CHECK(e.revisions.size() == 1);
    CHECK(e.revisions[0].timestamp == "2024-01-01T00:00:00Z");
    // Ranked candidates go under the candidate category.
    CHECK(!store.find_by_term("nivelační lať").empty());
    CHECK(slurp(work / "export" / "thesaurus.rdf").find("skos:Concept") != std::string::npos);

    SUBCASE("rerunning gives byte-identical artifacts") {
        const auto before = snapshot(work);
        run_all(work);
        const auto after = snapshot(work);
        CHECK(before.size() == after.size());
        for (const auto& [name, bytes] : before) {
            INFO(name);
            CHECK(after.at(name) == bytes);
        }
    }
}

TEST_CASE("a stage whose inputs are missing names the artifact") {
    TempDir tmp("pipeline-missing");
    const auto work = tmp.path / "work";
    auto r = cli(work, "rank");
    CHECK(r.code == 3);
    CHECK(r.err.find("missing_artifact") != std::string::npos);
    CHECK(r.err.find("cs-domain.phrases.tsv") != std::string::npos);
    CHECK(r.err.find("extract") != std::string::npos);
    r = cli(work, "ingest");
    CHECK(r.code == 0);
    r = cli(work, "index");
    CHECK(r.code == 3);
    CHECK(r.err.find("dedup") != std::string::npos);
}

TEST_CASE("command-line overrides and bad configs") {
    TempDir tmp("pipeline-args");
    CHECK(cli(tmp.path / "w", "--no-such-flag").code != 0);
    CHECK(cli(tmp.path / "w", "import --dataset x.csv").code == 2);

    const auto cfg = tmp.path / "config.json";
    std::ofstream(cfg) << R"({"languages": ["cs"], "pivot_language": "de"})";
    CHECK_THROWS_WITH_AS(termwork::PipelineConfig::load(cfg), doctest::Contains("pivot"), termwork::Error);
    std::ofstream(cfg) << R"({"languages": ["cs"], "pivot_language": "cs", "grammars": {"cs": "nope.txt"}})";
    try {
        termwork::PipelineConfig::load(cfg);
        FAIL("expected invalid_config");
    } catch (const termwork::Error& e) {
        CHECK(e.code() == "invalid_config");
        CHECK(std::string(e.what()).find("nope.txt") != std::string::npos);
    }
    std::ofstream(cfg) << "{";
    CHECK_THROWS_AS(termwork::PipelineConfig::load(cfg), termwork::Error);

    const auto c = termwork::PipelineConfig::load(kData / "config.json");
    CHECK(c.pivot_language == "cs");
    CHECK(c.workdir == kData / "work");
    CHECK(c.datasets.size() == 1);
    CHECK(c.candidate_limit == 20);
    CHECK(c.revision_timestamp == "2024-01-01T00:00:00Z");
}

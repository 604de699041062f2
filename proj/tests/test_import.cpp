#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "termwork/error.hpp"
#include "termwork/import.hpp"

using namespace termwork;

namespace {

StoreOptions fixed_clock() {
    StoreOptions o;
    o.clock = [] { return std::string("2024-01-01T00:00:00Z"); };
    return o;
}

ImportMapping csv_mapping() {
    ImportMapping m;
    m.fields = {{"Term", "term"},
                {"Variants", "variants"},
                {"Definition", "explanation"},
                {"Topic", "explanation_category"},
                {"English", "translation.en"},
                {"Broader", "broader"},
                {"Reliability", "reliability"}};
    m.default_source = "test-dataset";
    return m;
}

void check_total(const ImportReport& r) {
    CHECK(r.created + r.merged + r.flagged.size() + r.errors.size() == r.records);
}

}  // namespace

TEST_CASE("empty file: all zeros") {
    ThesaurusStore s(fixed_clock());
    for (const char* content : {"", "\n\n"}) {
        const auto r = import_dataset(content, csv_mapping(), s, "importer");
        CHECK(r.records == 0);
        CHECK(r.created == 0);
        CHECK(r.merged == 0);
        CHECK(r.flagged.empty());
        CHECK(r.errors.empty());
    }
    CHECK(s.size() == 0);
}

TEST_CASE("csv import creates entries with all mapped fields") {
    ThesaurusStore s(fixed_clock());
    const std::string csv =
        "Term,Variants,Definition,Topic,English,Broader,Reliability\n"
        "mapa,,Zmenšený obraz povrchu .,kartografie,map,,1\n"
        "\"katastrální mapa\",\"KM; katastr. mapa\",\"Mapa, která zobrazuje pozemky\",katastr,cadastral map;"
        "cadastre map,mapa,2\n";
    const auto r = import_dataset(csv, csv_mapping(), s, "importer");
    check_total(r);
    CHECK(r.created == 2);
    const auto km = s.find_by_term("katastrální mapa");
    REQUIRE(km.size() == 1);
    const auto& e = s.get(km[0]);
    CHECK(e.variants == std::vector<std::string>{"KM", "katastr. mapa"});
    REQUIRE(e.explanations.size() == 1);
    CHECK(e.explanations[0] == Explanation{"Mapa, která zobrazuje pozemky", "katastr"});
    REQUIRE(e.translations.at("en").size() == 2);
    CHECK(e.translations.at("en")[1].phrase == "cadastre map");
    CHECK(e.broader == s.find_by_term("mapa"));
    CHECK(e.reliability == kJournalUsage);
    CHECK(e.source == "test-dataset");
    CHECK(s.get(s.find_by_term("mapa")[0]).explanations[0].text == "Zmenšený obraz povrchu.");
    CHECK(s.validate().empty());
}

TEST_CASE("a record identical to an existing entry merges without a new id") {
    ThesaurusStore s(fixed_clock());
    const std::string csv = "Term,English\nmapa,map\n";
    ImportMapping m;
    m.fields = {{"Term", "term"}, {"English", "translation.en"}};
    import_dataset(csv, m, s, "importer");
    const auto before = s.dump();
    const auto r = import_dataset(csv, m, s, "importer");
    CHECK(r.merged == 1);
    CHECK(r.created == 0);
    CHECK(s.size() == 1);
    // Nothing changed, so no revision was added either.
    CHECK(s.dump() == before);
}

TEST_CASE("merging adds fields and never removes any") {
    ThesaurusStore s(fixed_clock());
    ImportMapping m = csv_mapping();
    import_dataset("Term,Definition,English\nmapa,první výklad,map\n", m, s, "importer");
    const auto id = s.find_by_term("mapa")[0];
    const auto r = import_dataset("Term,Definition,English\nMAPA,druhý výklad,chart\n", m, s, "importer");
    CHECK(r.merged == 1);
    const auto& e = s.get(id);
    REQUIRE(e.explanations.size() == 2);
    CHECK(e.explanations[0].text == "první výklad");
    CHECK(e.explanations[1].text == "druhý výklad");
    REQUIRE(e.translations.at("en").size() == 2);
    CHECK(e.term == "mapa");
    CHECK(e.revisions.size() == 2);
}

TEST_CASE("katastralni mapa is flagged against katastrální mapa") {
    ThesaurusStore s(fixed_clock());
    ThesaurusEntry e;
    e.term = "katastrální mapa";
    const auto id = s.upsert_entry(e, "x");
    ImportMapping m;
    m.fields = {{"Term", "term"}};
    const auto r = import_dataset("Term\nkatastralni mapa\n", m, s, "importer");
    check_total(r);
    REQUIRE(r.flagged.size() == 1);
    CHECK(r.flagged[0].incoming == "katastralni mapa");
    CHECK(r.flagged[0].existing_id == id);
    CHECK(r.flagged[0].score >= 0.8);
    CHECK(s.size() == 1);
}

TEST_CASE("bad records are reported and skipped") {
    ThesaurusStore s(fixed_clock());
    const std::string csv =
        "Term,Reliability\n"
        "dobrý,1\n"
        "too,many,fields\n"
        ",2\n"
        "špatná spolehlivost,7\n"
        "\"unterminated,1\n";
    const auto r = import_dataset(csv, csv_mapping(), s, "importer");
    check_total(r);
    CHECK(r.records == 5);
    CHECK(r.created == 1);
    REQUIRE(r.errors.size() == 4);
    CHECK(r.errors[0].record == 2);
    CHECK(r.errors[1].record == 3);
    CHECK(r.errors[2].record == 4);
    CHECK(r.errors[3].record == 5);
}

TEST_CASE("forward broader references resolve in a second pass") {
    ThesaurusStore s(fixed_clock());
    ImportMapping m;
    m.format = ImportFormat::Tsv;
    m.fields = {{"term", "term"}, {"broader", "broader"}};
    const auto r = import_dataset("term\tbroader\nkatastrální mapa\tmapa\nmapa\t\nlesní mapa\tneexistuje\n", m, s, "x");
    CHECK(r.created == 3);
    const auto km = s.find_by_term("katastrální mapa")[0];
    CHECK(s.get(km).broader == s.find_by_term("mapa"));
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("neexistuje") != std::string::npos);
    CHECK(s.validate().empty());
}

TEST_CASE("a link that would close a cycle is dropped with a warning") {
    ThesaurusStore s(fixed_clock());
    ImportMapping m;
    m.format = ImportFormat::Tsv;
    m.fields = {{"term", "term"}, {"broader", "broader"}};
    import_dataset("term\tbroader\na\t\nb\ta\n", m, s, "x");
    const auto r = import_dataset("term\tbroader\na\tb\n", m, s, "x");
    CHECK(r.merged == 1);
    CHECK(r.warnings.size() == 1);
    CHECK(s.get(s.find_by_term("a")[0]).broader.empty());
    CHECK(s.validate().empty());
}

TEST_CASE("structured text with abbreviations and punctuation cleanup") {
    ThesaurusStore s(fixed_clock());
    ImportMapping m;
    m.format = ImportFormat::StructuredText;
    m.fields = {{"Heslo", "term"}, {"Výklad", "explanation"}, {"DE", "translation.de"}, {"Stav", "status"}};
    m.abbreviations = {{"tzv.", "takzvaný"}, {"zem.", "zemský"}};
    const std::string text =
        "# slovník\n"
        "Heslo: zem. povrch .\n"
        "Výklad: tzv. georeliéf , tedy povrch Země\n"
        "DE: Erdoberfläche\n"
        "\n"
        "Heslo: souřadnice\n"
        "Stav: candidate\n"
        "\n"
        "this line has no colon\n";
    const auto r = import_dataset(text, m, s, "x");
    check_total(r);
    CHECK(r.created == 2);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].record == 3);
    const auto& e = s.get(s.find_by_term("zemský povrch")[0]);
    CHECK(e.explanations[0].text == "takzvaný georeliéf, tedy povrch Země");
    CHECK(e.translations.at("de")[0].phrase == "Erdoberfläche");
    CHECK(s.get(s.find_by_term("souřadnice")[0]).status == EntryStatus::Candidate);
}

TEST_CASE("punctuation and abbreviation helpers") {
    CHECK(clean_punctuation("  a ,  b ; c .") == "a, b; c.");
    CHECK(clean_punctuation(", leading and trailing ;") == "leading and trailing");
    CHECK(clean_punctuation(" ; ") == "");
    CHECK(expand_abbreviations("tzv. mapa, tzv.,", {{"tzv.", "takzvaná"}}) == "takzvaná mapa, takzvaná,");
}

TEST_CASE("mapping validation and json") {
    ImportMapping m;
    CHECK_THROWS_AS(m.validate(), Error);
    m.fields = {{"A", "term"}, {"B", "bogus"}};
    CHECK_THROWS_AS(m.validate(), Error);
    m.fields = {{"A", "term"}, {"B", "translation.fr"}};
    m.abbreviations = {{"č.", "číslo"}};
    m.format = ImportFormat::Tsv;
    m.validate();
    const auto back = ImportMapping::from_json(m.to_json());
    CHECK(back.to_json() == m.to_json());
    CHECK(back.format == ImportFormat::Tsv);
    CHECK_THROWS_AS(ImportMapping::from_json({{"format", "xml"}, {"fields", {{"A", "term"}}}}), Error);

    std::ifstream in(std::string(TERMWORK_SOURCE_DIR) + "/config/import_mapping.example.json");
    ImportMapping::from_json(nlohmann::json::parse(in)).validate();
}

TEST_CASE("report json") {
    ImportReport r;
    r.records = 2;
    r.created = 1;
    r.flagged.push_back({"a", "T000001", 0.9});
    const auto j = r.to_json();
    CHECK(j["records"] == 2);
    CHECK(j["flagged"][0]["existing_id"] == "T000001");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <functional>

#include "oracles.hpp"
#include "termwork/error.hpp"
#include "termwork/thesaurus.hpp"

using namespace termwork;

namespace {

StoreOptions fixed_clock() {
    StoreOptions o;
    o.clock = [] { return std::string("2024-01-01T00:00:00Z"); };
    return o;
}

ThesaurusEntry term(const std::string& t, std::vector<std::string> broader = {}) {
    ThesaurusEntry e;
    e.term = t;
    e.broader = std::move(broader);
    return e;
}

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

std::vector<std::string> ids(const std::vector<TreeNode>& nodes) {
    std::vector<std::string> out;
    for (const auto& n : nodes) out.push_back(n.id);
    return out;
}

}  // namespace

TEST_CASE("new entry without relations: created with one revision") {
    ThesaurusStore s(fixed_clock());
    const auto id = s.upsert_entry(term("  Katastrální   mapa "), "alice");
    CHECK(id == "T000001");
    const auto& e = s.get(id);
    CHECK(e.term == "Katastrální mapa");
    REQUIRE(e.revisions.size() == 1);
    CHECK(e.revisions[0] == Revision{"2024-01-01T00:00:00Z", "alice", "created"});
    CHECK(s.find_by_term("katastrální MAPA") == std::vector<std::string>{id});
    CHECK(s.validate().empty());
}

TEST_CASE("updates append exactly one revision and keep the id") {
    ThesaurusStore s(fixed_clock());
    const auto id = s.upsert_entry(term("map"), "alice");
    auto e = s.get(id);
    e.variants = {"chart"};
    CHECK(s.upsert_entry(e, "bob", "added variant") == id);
    CHECK(s.get(id).revisions.size() == 2);
    CHECK(s.get(id).revisions[1].summary == "added variant");
    // Optimistic concurrency.
    CHECK(error_code([&] { s.upsert_entry(e, "bob", "", 1); }) == "conflict");
    CHECK(s.upsert_entry(e, "bob", "", 2) == id);
    CHECK(s.get(id).revisions.size() == 3);
}

TEST_CASE("2-cycle is rejected with the offending path") {
    ThesaurusStore s(fixed_clock());
    const auto a = s.upsert_entry(term("A"), "x");
    const auto b = s.upsert_entry(term("B"), "x");
    auto ea = s.get(a);
    ea.broader = {b};
    s.upsert_entry(ea, "x");
    auto eb = s.get(b);
    eb.broader = {a};
    try {
        s.upsert_entry(eb, "x");
        FAIL("expected cycle");
    } catch (const Error& e) {
        CHECK(e.code() == "cycle");
        CHECK(std::string(e.what()).find(a) != std::string::npos);
    }
    CHECK(s.get(b).broader.empty());
    CHECK(s.get(b).revisions.size() == 1);
    CHECK(s.validate().empty());
}

TEST_CASE("invalid references and entries") {
    ThesaurusStore s(fixed_clock());
    CHECK(error_code([&] { s.upsert_entry(term("x", {"T999999"}), "x"); }) == "unknown_broader");
    CHECK(error_code([&] { s.upsert_entry(term("   "), "x"); }) == "invalid_entry");
    auto self = term("self");
    self.id = "T000050";
    self.broader = {"T000050"};
    CHECK(error_code([&] { s.upsert_entry(self, "x"); }) == "cycle");
    auto bad_lang = term("y");
    bad_lang.translations["xx"] = {{"z", "manual"}};
    CHECK(error_code([&] { s.upsert_entry(bad_lang, "x"); }) == "invalid_entry");
    auto bad_rel = term("y");
    bad_rel.reliability = 4;
    CHECK(error_code([&] { s.upsert_entry(bad_rel, "x"); }) == "invalid_entry");
    CHECK(error_code([&] { s.get("nope"); }) == "not_found");
    CHECK(s.size() == 0);
}

TEST_CASE("narrower is derived and kept inverse") {
    ThesaurusStore s(fixed_clock());
    const auto p = s.upsert_entry(term("parent"), "x");
    const auto q = s.upsert_entry(term("other parent"), "x");
    const auto c = s.upsert_entry(term("child", {p}), "x");
    CHECK(s.get(p).narrower == std::vector<std::string>{c});
    auto e = s.get(c);
    e.broader = {q};
    e.narrower = {"garbage"};
    s.upsert_entry(e, "x");
    CHECK(s.get(p).narrower.empty());
    CHECK(s.get(q).narrower == std::vector<std::string>{c});
    CHECK(s.get(c).narrower.empty());
    CHECK(s.validate().empty());
}

TEST_CASE("tree: empty, chain, diamond") {
    ThesaurusStore s(fixed_clock());
    CHECK(tree(s).empty());
    const auto a = s.upsert_entry(term("A"), "x");
    const auto b = s.upsert_entry(term("B", {a}), "x");
    const auto c = s.upsert_entry(term("C", {b}), "x");
    SUBCASE("chain gives a depth-3 path") {
        const auto t = tree(s);
        REQUIRE(t.size() == 1);
        CHECK(t[0].id == a);
        REQUIRE(t[0].children.size() == 1);
        CHECK(t[0].children[0].id == b);
        REQUIRE(t[0].children[0].children.size() == 1);
        CHECK(t[0].children[0].children[0].id == c);
        CHECK(t[0].children[0].children[0].children.empty());
        // Depth limit keeps the has_children flag.
        TreeOptions shallow;
        shallow.depth = 1;
        const auto t1 = tree(s, std::nullopt, shallow);
        CHECK(t1[0].children.size() == 1);
        CHECK(t1[0].children[0].children.empty());
        CHECK(t1[0].children[0].has_children);
        CHECK(ids(tree(s, b)) == std::vector<std::string>{b});
    }
    SUBCASE("diamond shows the shared child twice with one id") {
        const auto d = s.upsert_entry(term("D", {b, c}), "x");
        const auto t = tree(s);
        const auto& nb = t[0].children[0];
        CHECK(ids(nb.children) == std::vector<std::string>{c, d});
        CHECK(ids(nb.children[0].children) == std::vector<std::string>{d});
        CHECK(s.validate().empty());
    }
}

TEST_CASE("tree children sort lexicographically; rejected hidden by default") {
    ThesaurusStore s(fixed_clock());
    const auto root = s.upsert_entry(term("root"), "x");
    const auto z = s.upsert_entry(term("zeta", {root}), "x");
    const auto a = s.upsert_entry(term("Alpha", {root}), "x");
    auto r = term("middle", {root});
    r.status = EntryStatus::Rejected;
    const auto m = s.upsert_entry(r, "x");
    CHECK(ids(tree(s)[0].children) == std::vector<std::string>{a, z});
    TreeOptions all;
    all.include_rejected = true;
    CHECK(ids(tree(s, std::nullopt, all)[0].children) == std::vector<std::string>{a, m, z});
}

TEST_CASE("candidates live under the candidate category") {
    ThesaurusStore s(fixed_clock());
    auto c = term("new term");
    c.status = EntryStatus::Candidate;
    const auto id = s.upsert_entry(c, "pipeline");
    CHECK(s.get(id).broader == std::vector<std::string>{std::string(ThesaurusStore::kCandidateCategoryId)});
    const auto& cat = s.get(ThesaurusStore::kCandidateCategoryId);
    CHECK(cat.kind == EntryKind::Category);
    CHECK(cat.narrower == std::vector<std::string>{id});
    CHECK(store_terms(s) == std::vector<std::string>{"new term"});
}

TEST_CASE("close terms") {
    ThesaurusStore s(fixed_clock());
    CHECK(detect_close_terms("mapa", s).empty());
    const auto km = s.upsert_entry(term("katastrální mapa"), "x");
    const auto other = s.upsert_entry(term("katastrální území"), "x");
    SUBCASE("exact duplicate scores 1.0") {
        const auto r = detect_close_terms("Katastrální mapa", s);
        REQUIRE(!r.empty());
        CHECK(r[0].id == km);
        CHECK(r[0].score == 1.0);
    }
    SUBCASE("missing diacritics still match") {
        const auto r = detect_close_terms("katastralni mapa", s);
        REQUIRE(r.size() == 1);
        CHECK(r[0].id == km);
        CHECK(r[0].score == 1.0);
    }
    SUBCASE("near miss scores its bigram Jaccard") {
        const auto r = detect_close_terms("katastralni mapy", s, 0.6);
        REQUIRE(!r.empty());
        CHECK(r[0].id == km);
        CHECK(r[0].score == doctest::Approx(oracle::lexsim("katastralni mapy", "katastralni mapa")));
        CHECK(r[0].score == doctest::Approx(14.0 / 16.0));
        for (const auto& c : r) CHECK(c.id != other);
    }
    CHECK_THROWS_AS(detect_close_terms(" ", s), Error);
}

TEST_CASE("term candidates import") {
    ThesaurusStore s(fixed_clock());
    s.upsert_entry(term("land cover"), "x");
    const std::vector<TermCandidate> ranked{
        {"land cover", 10, 10, 0, 11}, {"cadastre", 4, 4, 0, 5}, {"map", 4, 4, 20, 0.25}, {"plot", 2, 2, 1, 1.5}};
    const auto created = import_term_candidates(s, ranked, 3, "pipeline");
    REQUIRE(created.size() == 2);
    const auto& e = s.get(created[0]);
    CHECK(e.term == "cadastre");
    CHECK(e.status == EntryStatus::Candidate);
    CHECK(e.source == "auto-extraction");
    CHECK(e.provenance.at("rank") == "5");
    CHECK(e.provenance.at("raw_count") == "4");
    CHECK(s.find_by_term("plot").empty());
    CHECK(import_term_candidates(s, ranked, 0, "pipeline").size() == 1);
    CHECK(s.validate().empty());
}

TEST_CASE("dump, restore and files") {
    ThesaurusStore s(fixed_clock());
    const auto a = s.upsert_entry(term("A"), "x");
    auto b = term("B", {a});
    b.translations["en"] = {{"bee", "manual"}};
    b.explanations = {{"the second letter", "alphabet"}};
    b.reliability = kJournalUsage;
    b.provenance = {{"dataset", "letters.csv"}};
    s.upsert_entry(b, "x");
    auto c = term("C");
    c.status = EntryStatus::Candidate;
    s.upsert_entry(c, "x");
    const auto dump = s.dump();
    CHECK(dump["format"] == "termwork-thesaurus");
    CHECK(dump["version"] == 1);
    const auto back = ThesaurusStore::restore(dump, fixed_clock());
    CHECK(back.dump() == dump);
    // Ids keep counting after a restore.
    auto copy = ThesaurusStore::restore(dump, fixed_clock());
    CHECK(copy.upsert_entry(term("D"), "x") == "T000004");

    const auto path = (std::filesystem::temp_directory_path() / "termwork_store.json").string();
    s.save(path);
    CHECK(ThesaurusStore::load(path, fixed_clock()).dump() == dump);
    std::filesystem::remove(path);

    auto broken = dump;
    broken["entries"][0]["broader"] = {"T424242"};
    CHECK(error_code([&] { ThesaurusStore::restore(broken); }) == "invalid_dump");
    CHECK(error_code([&] { ThesaurusStore::restore({{"format", "other"}}); }) == "invalid_dump");
}

TEST_CASE("entry json round trip") {
    ThesaurusEntry e = term("B");
    e.id = "T000002";
    e.variants = {"bb"};
    e.translations["de"] = {{"Be", "suggestion:translation-miner"}};
    e.status = EntryStatus::Rejected;
    e.revisions = {{"t", "ed", "s"}};
    const auto back = ThesaurusEntry::from_json(e.to_json());
    CHECK(back.to_json() == e.to_json());
    CHECK(back.translations.at("de")[0].source == "suggestion:translation-miner");
    CHECK(parse_status("candidate") == EntryStatus::Candidate);
    CHECK(to_string(EntryStatus::Approved) == "approved");
}

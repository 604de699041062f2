#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "termwork/term_grammar.hpp"

using namespace termwork;

namespace {

const char* kNp = "[tag=ADJ]* [tag=NOUN]+";
const char* kNpPp = "[tag=ADJ]* [tag=NOUN]+ [tag=PREP] [tag=ADJ]* [tag=NOUN]+";

std::vector<Token> toks(const std::string& spec) { return fixture::tagged("x", {spec}).paragraphs[0].tokens; }

std::string covered(const std::vector<Token>& t, Span s) {
    std::string out;
    for (std::size_t i = s.begin; i < s.end; ++i) out += (out.empty() ? "" : " ") + t[i].normalized;
    return out;
}

}  // namespace

TEST_CASE("single noun rule") {
    const auto g = compile_term_grammar({"[tag=NOUN]"});
    REQUIRE(g.rules.size() == 1);
    const auto t = toks("the/OTHER map/NOUN of/PREP land/NOUN");
    const auto m = find_matches(g.rules[0], t);
    REQUIRE(m.size() == 2);
    CHECK(covered(t, m[0]) == "map");
    CHECK(covered(t, m[1]) == "land");
}

TEST_CASE("ADJ* NOUN+ matches a three-word term") {
    const auto p = TokenPattern::compile(kNp);
    const auto t = toks("digital/ADJ photogrammetric/ADJ workstation/NOUN");
    const auto m = find_matches(p, t);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == Span{0, 3});
}

TEST_CASE("NP PREP NP rule matches a prepositional term, determiner aside") {
    const auto p = TokenPattern::compile(kNpPp);
    // With the determiner the rule stops at the preposition...
    const auto with_det = toks("parallactic/ADJ figure/NOUN with/PREP an/OTHER auxiliary/ADJ base/NOUN");
    CHECK(find_matches(p, with_det).empty());
    // ...and matches the whole phrase once the determiner is not in the way.
    const auto t = toks("parallactic/ADJ figure/NOUN with/PREP auxiliary/ADJ base/NOUN");
    const auto m = find_matches(p, t);
    REQUIRE(m.size() == 1);
    CHECK(covered(t, m[0]) == "parallactic figure with auxiliary base");
}

TEST_CASE("leftmost-longest, non-overlapping") {
    const auto p = TokenPattern::compile(kNp);
    const auto t = toks("land/NOUN cover/NOUN map/NOUN is/VERB new/ADJ map/NOUN");
    const auto m = find_matches(p, t);
    REQUIRE(m.size() == 2);
    CHECK(m[0] == Span{0, 3});
    CHECK(m[1] == Span{4, 6});
    CHECK(p.match_ends(t, 0) == std::vector<std::size_t>{1, 2, 3});
    CHECK(p.longest_match(t, 0) == 3u);
    CHECK_FALSE(p.longest_match(t, 3).has_value());
}

TEST_CASE("word constraints are case-insensitive; tags alternate") {
    const auto p = TokenPattern::compile("[word=Is|ARE] [word=a|an]? [tag=NOUN|ADJ]");
    CHECK(p.longest_match(toks("is/VERB an/OTHER old/ADJ"), 0) == 3u);
    CHECK(p.longest_match(toks("are/VERB map/NOUN"), 0) == 2u);
    CHECK_FALSE(p.longest_match(toks("was/VERB map/NOUN"), 0).has_value());
}

TEST_CASE("syntax errors carry rule index and position") {
    auto expect = [](const std::vector<std::string>& rules, std::size_t rule, std::size_t pos) {
        try {
            compile_term_grammar(rules);
            FAIL("expected GrammarSyntaxError");
        } catch (const GrammarSyntaxError& e) {
            CHECK(e.rule_index() == rule);
            CHECK(e.position() == pos);
        }
    };
    expect({kNp, "[tag=NOUN] tag=ADJ]"}, 1, 11);
    expect({"[tag=NOUN"}, 0, 0);
    expect({"[tag=NOUN] [tag=VERBX]"}, 0, 16);
    expect({"[pos=NOUN]"}, 0, 1);
    expect({"[tag=NOUN]+[tag=ADJ]"}, 0, 11);
    expect({"   "}, 0, 0);
    CHECK_THROWS_AS(compile_term_grammar({}), Error);
}

TEST_CASE("automaton agrees with a backtracking matcher") {
    std::mt19937 rng(17);
    const std::vector<std::string> tags{"NOUN", "ADJ", "PREP", "VERB"};
    const std::vector<std::string> quant{"", "?", "*", "+"};
    for (int round = 0; round < 300; ++round) {
        std::string src;
        const int n = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) src += "[tag=" + tags[rng() % 3] + "]" + quant[rng() % 4] + " ";
        const auto p = TokenPattern::compile(src);
        std::string seq;
        for (int i = 0; i < 12; ++i) seq += "w" + std::to_string(i) + "/" + tags[rng() % 4] + " ";
        const auto t = toks(seq);
        for (std::size_t b = 0; b < t.size(); ++b) CHECK(p.match_ends(t, b) == oracle::match_ends(p.elements(), t, b));
        std::vector<std::pair<std::size_t, std::size_t>> got;
        for (const auto& s : find_matches(p, t)) got.emplace_back(s.begin, s.end);
        CHECK(got == oracle::scan(p.elements(), t));
    }
}

TEST_CASE("grammar files skip comments and blank lines") {
    const auto path = std::filesystem::temp_directory_path() / "termwork_grammar.txt";
    {
        std::ofstream(path) << "# noun phrases\n\n" << kNp << "\n  \n" << kNpPp << "\n";
    }
    const auto rules = read_grammar_rules(path.string());
    CHECK(rules == std::vector<std::string>{kNp, kNpPp});
    std::filesystem::remove(path);
    const auto shipped = read_grammar_rules(std::string(TERMWORK_SOURCE_DIR) + "/config/grammar/en.txt");
    CHECK(shipped == std::vector<std::string>{kNp, kNpPp});
}

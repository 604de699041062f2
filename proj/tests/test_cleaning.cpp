#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "termwork/cleaning.hpp"

using namespace termwork;

namespace {

const DocumentMeta kMeta{"doc1", "file:doc1.html", "en", "2024-05-01T00:00:00Z"};

CleanedDocument clean(std::string_view raw, const CleaningConfig& c = {}) {
    return clean_document(raw, kMeta, LanguageProfile::builtin("en"), c);
}

}  // namespace

TEST_CASE("a five character paragraph is boilerplate") {
    const auto r = clean("Hello");
    REQUIRE(r.document.paragraphs.size() == 1);
    CHECK(r.document.paragraphs[0].quality == Quality::Boilerplate);
    CHECK(r.report.drop_reasons.at("too_short") == 1);
    CHECK(r.report.paragraphs_kept == 0);
}

TEST_CASE("plain prose without links is good") {
    // 4 of 10 words are stop words.
    const std::string prose = "The theodolite is an instrument for measuring angles in surveying work";
    const auto r = clean(prose);
    REQUIRE(r.document.paragraphs.size() == 1);
    CHECK(r.document.paragraphs[0].quality == Quality::Good);
    CHECK(r.document.paragraphs[0].text == prose);
    CHECK(r.report.paragraphs_kept == 1);
    CHECK(r.report.paragraphs_dropped == 0);
}

TEST_CASE("navigation list with link density 0.9 is boilerplate") {
    // 18 link characters out of 20 visible ones.
    const auto r = clean("<div><a href=\"/\">Homepage</a> | <a href=\"/c\">Contacts</a> | <a href=\"/a\">Ab</a></div>"
                         "<p>The theodolite is an instrument for measuring angles in surveying work.</p>");
    REQUIRE(r.document.paragraphs.size() == 2);
    CHECK(r.document.paragraphs[0].text == "Homepage | Contacts | Ab");
    CHECK(r.document.paragraphs[0].quality == Quality::Boilerplate);
    CHECK(r.report.drop_reasons.at("link_density") == 1);
    CHECK(r.document.paragraphs[1].quality == Quality::Good);
}

TEST_CASE("classify_paragraph applies the rules in order") {
    const CleaningConfig c;
    CHECK(classify_paragraph({5, 0.0, 0.5}, c, true) == "too_short");
    CHECK(classify_paragraph({40, 0.9, 0.5}, c, true) == "link_density");
    CHECK(classify_paragraph({40, 0.3, 0.5}, c, true).empty());
    CHECK(classify_paragraph({40, 0.0, 0.1}, c, true) == "low_stopword_ratio");
    // Without a stop list the ratio rule is skipped.
    CHECK(classify_paragraph({40, 0.0, 0.0}, c, false).empty());
}

TEST_CASE("markup: scripts, styles and comments are removed; entities decoded") {
    const auto r = clean(
        "<html><head><title>x</title><style>p{color:red}</style></head><body>"
        "<script>var a = '<p>not text</p>';</script><!-- a comment -->"
        "<p>Land &amp; property records are kept in the cadastre of the municipality.</p>"
        "<p>The second paragraph&nbsp;is also about the map of the land.</p></body></html>");
    std::vector<std::string> good;
    for (const auto& p : r.document.paragraphs) {
        CHECK(p.text.find("not text") == std::string::npos);
        CHECK(p.text.find("comment") == std::string::npos);
        CHECK(p.text.find("color") == std::string::npos);
        if (p.quality == Quality::Good) good.push_back(p.text);
    }
    REQUIRE(good.size() == 2);
    CHECK(good[0] == "Land & property records are kept in the cadastre of the municipality.");
}

TEST_CASE("plain text splits on blank lines and collapses whitespace") {
    const auto r = clean("First paragraph of the text is\n here in the file.\n\n\n  Second   paragraph is here on the page. ");
    REQUIRE(r.document.paragraphs.size() == 2);
    CHECK(r.document.paragraphs[0].text == "First paragraph of the text is here in the file.");
    CHECK(r.document.paragraphs[1].text == "Second paragraph is here on the page.");
    CHECK(r.document.id == "doc1");
    CHECK(r.document.fetched_at == kMeta.fetched_at);
}

TEST_CASE("invalid UTF-8 raises a decode error unless a fallback is configured") {
    const std::string latin1 = "Katastr\xe1ln\xed mapa je mapa pozemk\xf9 a staveb v katastru.";
    try {
        clean(latin1);
        FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
        CHECK(e.offset() == 7);
        CHECK(e.code() == "undecodable");
    }
    CleaningConfig c;
    c.fallback_encoding = "latin1";
    const auto r = clean(latin1, c);
    REQUIRE(!r.document.paragraphs.empty());
    CHECK(r.document.paragraphs[0].text.find("Katastrální") == 0);
}

TEST_CASE("documents without text content are errors") {
    try {
        clean("<html><script>x()</script></html>");
        FAIL("expected empty_document");
    } catch (const Error& e) {
        CHECK(e.code() == "empty_document");
    }
}

TEST_CASE("config from json keeps defaults for missing keys") {
    const auto c = CleaningConfig::from_json({{"min_length", 5}});
    CHECK(c.min_length == 5);
    CHECK(c.max_link_density == doctest::Approx(0.3));
    CHECK(c.fallback_encoding.empty());
}

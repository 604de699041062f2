#include "termwork/vertical.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "termwork/error.hpp"
#include "termwork/text.hpp"

namespace termwork {

namespace {

std::map<std::string, std::string> parse_attributes(std::string_view line, std::size_t lineno) {
    std::map<std::string, std::string> attrs;
    std::size_t i = line.find(' ');
    while (i != std::string_view::npos && i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        const auto eq = line.find('=', i);
        if (eq == std::string_view::npos) break;
        const std::string key(line.substr(i, eq - i));
        if (eq + 1 >= line.size() || line[eq + 1] != '"') {
            throw Error("vertical_syntax", "line " + std::to_string(lineno) + ": unquoted attribute");
        }
        const auto close = line.find('"', eq + 2);
        if (close == std::string_view::npos) {
            throw Error("vertical_syntax", "line " + std::to_string(lineno) + ": unterminated attribute");
        }
        attrs[key] = xml_unescape(line.substr(eq + 2, close - eq - 2));
        i = close + 1;
    }
    return attrs;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

}  // namespace

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string xml_unescape(std::string_view s) {
    static constexpr std::pair<std::string_view, char> kEntities[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        bool replaced = false;
        if (s[i] == '&') {
            for (const auto& [ent, ch] : kEntities) {
                if (s.substr(i, ent.size()) == ent) {
                    out.push_back(ch);
                    i += ent.size();
                    replaced = true;
                    break;
                }
            }
        }
        if (!replaced) out.push_back(s[i++]);
    }
    return out;
}

void write_vertical(std::ostream& out, const std::vector<TaggedDocument>& documents) {
    for (const auto& d : documents) {
        out << "<doc id=\"" << xml_escape(d.id) << "\" source=\"" << xml_escape(d.source)
            << "\" lang=\"" << xml_escape(d.language) << "\" fetched_at=\""
            << xml_escape(d.fetched_at) << "\">\n";
        for (const auto& p : d.paragraphs) {
            out << "<p quality=\"" << to_string(p.quality) << "\">\n";
            for (const auto& t : p.tokens) {
                out << t.surface << '\t' << t.normalized << '\t' << to_string(t.tag) << '\n';
            }
            out << "</p>\n";
        }
        out << "</doc>\n";
    }
}

std::vector<TaggedDocument> read_vertical(std::istream& in) {
    std::vector<TaggedDocument> docs;
    TaggedDocument* doc = nullptr;
    TaggedParagraph* para = nullptr;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw Error("vertical_syntax", "line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (starts_with(line, "<doc")) {
            if (doc) fail("nested <doc>");
            auto attrs = parse_attributes(line, lineno);
            docs.push_back({attrs["id"], attrs["source"], attrs["lang"], attrs["fetched_at"], {}});
            doc = &docs.back();
        } else if (line == "</doc>") {
            if (!doc || para) fail("unexpected </doc>");
            doc = nullptr;
        } else if (starts_with(line, "<p")) {
            if (!doc || para) fail("unexpected <p>");
            auto attrs = parse_attributes(line, lineno);
            const auto q = attrs.count("quality") ? attrs["quality"] : "good";
            if (q != "good" && q != "boilerplate") fail("unknown quality '" + q + "'");
            doc->paragraphs.push_back({q == "good" ? Quality::Good : Quality::Boilerplate, {}});
            para = &doc->paragraphs.back();
        } else if (line == "</p>") {
            if (!para) fail("unexpected </p>");
            para = nullptr;
        } else {
            if (!para) fail("token outside paragraph");
            const auto fields = text::split(line, '\t');
            Token t;
            t.surface = fields[0];
            t.normalized = fields.size() > 1 ? fields[1] : text::fold_case(fields[0]);
            if (fields.size() > 2 && !parse_tag(fields[2], t.tag)) fail("unknown tag '" + fields[2] + "'");
            para->tokens.push_back(std::move(t));
        }
    }
    if (doc) fail("missing </doc> at end of input");
    return docs;
}

void write_vertical_file(const std::string& path, const std::vector<TaggedDocument>& documents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write " + path);
    write_vertical(out, documents);
}

std::vector<TaggedDocument> read_vertical_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot read " + path);
    return read_vertical(in);
}

nlohmann::json index_sidecar(const CorpusIndex& index) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : index.documents()) {
        docs.push_back({{"id", d.id},
                        {"source", d.source},
                        {"tokens", d.tokens.size()},
                        {"paragraphs", d.paragraph_starts}});
    }
    const auto stats = corpus_stats(index);
    return {{"format", "termwork-index"},
            {"version", 1},
            {"language", index.language()},
            {"documents", stats.documents},
            {"tokens", stats.tokens},
            {"unique_tokens", stats.unique_tokens},
            {"document_table", docs},
            {"unigram_freq", index.unigram_freq()}};
}

CorpusIndex load_corpus(const std::string& vertical_path, const std::string& sidecar_path) {
    CorpusIndex index = build_corpus(read_vertical_file(vertical_path));
    if (!sidecar_path.empty()) {
        std::ifstream in(sidecar_path);
        if (!in) throw Error("io", "cannot read " + sidecar_path);
        const auto sidecar = nlohmann::json::parse(in);
        if (sidecar != index_sidecar(index)) {
            throw Error("index_mismatch", sidecar_path + " does not describe " + vertical_path);
        }
    }
    return index;
}

}  // namespace termwork

#include "termwork/cleaning.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "termwork/text.hpp"

namespace termwork {

namespace {

struct RawParagraph {
    std::string text;
    std::size_t link_chars = 0;
};

constexpr std::array kSkipElements = {"script", "style", "noscript", "template", "head", "svg"};
constexpr std::array kBlockElements = {
    "address", "article", "aside",   "blockquote", "br",     "dd",    "div",    "dl",
    "dt",      "fieldset", "figcaption", "figure",  "footer", "form",  "h1",     "h2",
    "h3",      "h4",      "h5",      "h6",         "header", "hr",    "li",     "main",
    "nav",     "ol",      "p",       "pre",        "section", "table", "td",    "th",
    "title",   "tr",      "ul",      "body",       "html"};

template <std::size_t N>
bool contains(const std::array<const char*, N>& names, std::string_view name) {
    return std::any_of(names.begin(), names.end(), [&](const char* n) { return name == n; });
}

bool looks_like_markup(std::string_view s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '<' && (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/' ||
                            s[i + 1] == '!')) {
            return true;
        }
    }
    return false;
}

// Decodes named and numeric character references.
std::string decode_entities(std::string_view s) {
    static constexpr std::pair<std::string_view, char32_t> kNamed[] = {
        {"amp", U'&'},   {"lt", U'<'},     {"gt", U'>'},     {"quot", U'"'},  {"apos", U'\''},
        {"nbsp", 0xA0},  {"ndash", 0x2013}, {"mdash", 0x2014}, {"hellip", 0x2026},
        {"laquo", 0xAB}, {"raquo", 0xBB},  {"copy", 0xA9},   {"bdquo", 0x201E}, {"ldquo", 0x201C},
        {"rdquo", 0x201D}};
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '&') {
            const auto semi = s.find(';', i);
            if (semi != std::string_view::npos && semi - i <= 10) {
                const auto name = s.substr(i + 1, semi - i - 1);
                char32_t cp = 0;
                if (!name.empty() && name[0] == '#') {
                    const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
                    try {
                        cp = static_cast<char32_t>(
                            std::stoul(std::string(name.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10));
                    } catch (const std::exception&) {
                        cp = 0;
                    }
                } else {
                    for (const auto& [n, c] : kNamed) {
                        if (n == name) cp = c;
                    }
                }
                if (cp != 0 && cp <= 0x10FFFF) {
                    text::append_utf8(out, cp);
                    i = semi + 1;
                    continue;
                }
            }
        }
        out.push_back(s[i++]);
    }
    return out;
}

std::vector<RawParagraph> split_markup(std::string_view html) {
    std::vector<RawParagraph> paras(1);
    int link_depth = 0;
    auto lower = [](std::string_view s) {
        std::string r(s);
        std::transform(r.begin(), r.end(), r.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return r;
    };
    auto append_text = [&](std::string_view raw) {
        const std::string decoded = decode_entities(raw);
        paras.back().text += decoded;
        if (link_depth > 0) {
            for (char32_t cp : text::decode(decoded)) {
                if (!text::is_space(cp)) ++paras.back().link_chars;
            }
        }
    };

    std::size_t i = 0;
    while (i < html.size()) {
        const auto lt = html.find('<', i);
        if (lt == std::string_view::npos) {
            append_text(html.substr(i));
            break;
        }
        append_text(html.substr(i, lt - i));
        if (html.substr(lt, 4) == "<!--") {
            const auto end = html.find("-->", lt + 4);
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        const auto gt = html.find('>', lt);
        if (gt == std::string_view::npos) break;
        std::string_view tag = html.substr(lt + 1, gt - lt - 1);
        const bool closing = !tag.empty() && tag[0] == '/';
        if (closing) tag.remove_prefix(1);
        std::size_t name_end = 0;
        while (name_end < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[name_end])))) {
            ++name_end;
        }
        const std::string name = lower(tag.substr(0, name_end));
        i = gt + 1;
        if (!closing && contains(kSkipElements, name)) {
            const std::string lower_rest = lower(html.substr(i));
            const auto end = lower_rest.find("</" + name);
            if (end == std::string::npos) break;
            const auto close_gt = html.find('>', i + end);
            i = close_gt == std::string_view::npos ? html.size() : close_gt + 1;
            continue;
        }
        if (name == "a") {
            link_depth = closing ? std::max(0, link_depth - 1) : link_depth + 1;
        } else if (contains(kBlockElements, name)) {
            if (!paras.back().text.empty()) paras.emplace_back();
        }
    }
    return paras;
}

std::vector<RawParagraph> split_plain(std::string_view s) {
    std::vector<RawParagraph> paras(1);
    std::size_t start = 0;
    while (start <= s.size()) {
        auto nl = s.find('\n', start);
        if (nl == std::string_view::npos) nl = s.size();
        const std::string line = text::trim(s.substr(start, nl - start));
        if (line.empty()) {
            if (!paras.back().text.empty()) paras.emplace_back();
        } else {
            if (!paras.back().text.empty()) paras.back().text.push_back(' ');
            paras.back().text += line;
        }
        start = nl + 1;
    }
    return paras;
}

std::string latin1_to_utf8(std::string_view s) {
    std::string out;
    for (unsigned char c : s) text::append_utf8(out, c);
    return out;
}

}  // namespace

CleaningConfig CleaningConfig::from_json(const nlohmann::json& j) {
    CleaningConfig c;
    c.max_link_density = j.value("max_link_density", c.max_link_density);
    c.min_stopword_ratio = j.value("min_stopword_ratio", c.min_stopword_ratio);
    c.min_length = j.value("min_length", c.min_length);
    c.fallback_encoding = j.value("fallback_encoding", c.fallback_encoding);
    return c;
}

nlohmann::json CleaningReport::to_json() const {
    return {{"paragraphs_kept", paragraphs_kept},
            {"paragraphs_dropped", paragraphs_dropped},
            {"drop_reasons", drop_reasons}};
}

DecodeError::DecodeError(std::size_t offset)
    : Error("undecodable", "input is not valid UTF-8 at byte offset " + std::to_string(offset)),
      offset_(offset) {}

std::string classify_paragraph(const ParagraphMetrics& m, const CleaningConfig& config,
                               bool has_stop_list) {
    if (m.length < config.min_length) return "too_short";
    if (m.link_density > config.max_link_density) return "link_density";
    if (has_stop_list && m.stopword_ratio < config.min_stopword_ratio) return "low_stopword_ratio";
    return {};
}

CleanedDocument clean_document(std::string_view raw, const DocumentMeta& meta,
                               const LanguageProfile& profile, const CleaningConfig& config) {
    std::string decoded;
    if (const auto bad = text::find_invalid_utf8(raw)) {
        if (config.fallback_encoding != "latin1") throw DecodeError(*bad);
        decoded = latin1_to_utf8(raw);
        raw = decoded;
    }

    const auto raw_paras = looks_like_markup(raw) ? split_markup(raw) : split_plain(raw);
    const bool has_stop_list = !profile.stop_words.empty();
    // Stop-word counting only needs the splitter; tags are irrelevant here.
    LanguageProfile bare;
    bare.code = profile.code;
    const Tokenizer splitter(bare);

    CleanedDocument out;
    out.document = {meta.id, meta.source, meta.language, {}, meta.fetched_at};
    for (const auto& rp : raw_paras) {
        std::string collapsed = text::trim(rp.text);
        {
            std::string tmp;
            bool space = false;
            for (char32_t cp : text::decode(collapsed)) {
                if (text::is_space(cp)) {
                    space = true;
                    continue;
                }
                if (space && !tmp.empty()) tmp.push_back(' ');
                space = false;
                text::append_utf8(tmp, cp);
            }
            collapsed = std::move(tmp);
        }
        if (collapsed.empty()) continue;

        ParagraphMetrics m;
        m.length = text::length(collapsed);
        std::size_t visible = 0;
        for (char32_t cp : text::decode(collapsed)) {
            if (!text::is_space(cp)) ++visible;
        }
        m.link_density = visible ? static_cast<double>(rp.link_chars) / static_cast<double>(visible) : 0.0;
        std::size_t words = 0;
        std::size_t stops = 0;
        for (const auto& tok : splitter.tokenize(collapsed)) {
            if (tok.tag == Tag::Punct) continue;
            ++words;
            if (profile.stop_words.count(tok.normalized)) ++stops;
        }
        m.stopword_ratio = words ? static_cast<double>(stops) / static_cast<double>(words) : 0.0;

        const std::string reason = classify_paragraph(m, config, has_stop_list);
        if (reason.empty()) {
            ++out.report.paragraphs_kept;
            out.document.paragraphs.push_back({std::move(collapsed), Quality::Good});
        } else {
            ++out.report.paragraphs_dropped;
            ++out.report.drop_reasons[reason];
            out.document.paragraphs.push_back({std::move(collapsed), Quality::Boilerplate});
        }
    }
    if (out.document.paragraphs.empty()) {
        throw Error("empty_document", "document " + meta.id + " has no text content");
    }
    return out;
}

}  // namespace termwork

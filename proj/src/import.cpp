#include "termwork/import.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "termwork/error.hpp"
#include "termwork/text.hpp"

namespace termwork {

namespace {

using Fields = std::vector<std::pair<std::string, std::string>>;

struct RawRecord {
    Fields fields;
    std::string error;
};

std::string_view format_name(ImportFormat f) {
    switch (f) {
        case ImportFormat::Csv: return "csv";
        case ImportFormat::Tsv: return "tsv";
        case ImportFormat::StructuredText: return "structured-text";
    }
    return "csv";
}

ImportFormat parse_format(std::string_view s) {
    if (s == "csv") return ImportFormat::Csv;
    if (s == "tsv") return ImportFormat::Tsv;
    if (s == "structured-text" || s == "text") return ImportFormat::StructuredText;
    throw Error("invalid_mapping", "unknown import format '" + std::string(s) + "'");
}

bool blank(std::string_view line) { return text::trim(line).empty(); }

// RFC 4180 rows: quoted fields may hold separators, doubled quotes and line
// breaks. An unterminated quote swallows the rest of the input as one bad row.
std::vector<std::vector<std::string>> read_csv_rows(std::string_view s, std::vector<std::string>& row_errors) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, in_quotes = false, any = false;
    std::size_t i = 0;
    auto end_row = [&](std::string err) {
        row.push_back(std::move(field));
        field.clear();
        const bool empty_line = row.size() == 1 && row[0].empty() && !quoted;
        if (!empty_line || !err.empty()) {
            rows.push_back(std::move(row));
            row_errors.push_back(std::move(err));
        }
        row.clear();
        quoted = false;
        any = false;
    };
    while (i < s.size()) {
        const char c = s[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < s.size() && s[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            ++i;
            continue;
        }
        if (c == '"' && field.empty() && !quoted) {
            in_quotes = quoted = any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            quoted = false;
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
            end_row({});
        } else if (quoted) {
            // Text after a closing quote.
            while (i < s.size() && s[i] != '\n') ++i;
            end_row("unexpected character after closing quote");
            ++i;
            continue;
        } else {
            field.push_back(c);
            any = true;
        }
        ++i;
    }
    if (in_quotes) {
        end_row("unterminated quoted field");
    } else if (any || !field.empty()) {
        end_row({});
    }
    return rows;
}

std::vector<std::vector<std::string>> read_tsv_rows(std::string_view s, std::vector<std::string>& row_errors) {
    std::vector<std::vector<std::string>> rows;
    for (auto line : text::split(s, '\n')) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(text::split(line, '\t'));
        row_errors.emplace_back();
    }
    return rows;
}

std::vector<RawRecord> read_tabular(std::string_view s, bool csv) {
    std::vector<std::string> row_errors;
    auto rows = csv ? read_csv_rows(s, row_errors) : read_tsv_rows(s, row_errors);
    std::vector<RawRecord> out;
    if (rows.empty()) return out;
    if (!row_errors[0].empty()) throw Error("import_syntax", "header row: " + row_errors[0]);
    std::vector<std::string> header;
    for (const auto& h : rows[0]) header.push_back(text::trim(h));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        RawRecord rec;
        if (!row_errors[r].empty()) {
            rec.error = row_errors[r];
        } else if (rows[r].size() != header.size()) {
            rec.error = "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(rows[r].size());
        } else {
            for (std::size_t c = 0; c < header.size(); ++c) rec.fields.emplace_back(header[c], rows[r][c]);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<RawRecord> read_structured(std::string_view s) {
    std::vector<RawRecord> out;
    std::optional<RawRecord> cur;
    auto flush = [&] {
        if (cur) out.push_back(std::move(*cur));
        cur.reset();
    };
    for (auto line : text::split(s, '\n')) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) {
            flush();
            continue;
        }
        if (line[0] == '#') continue;
        if (!cur) cur.emplace();
        if (!cur->error.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            cur->error = "line without 'Field:' prefix: " + text::trim(line);
            continue;
        }
        cur->fields.emplace_back(text::trim(line.substr(0, colon)), text::trim(line.substr(colon + 1)));
    }
    flush();
    return out;
}

std::vector<std::string> split_values(std::string_view value, const std::string& sep) {
    std::vector<std::string> out;
    if (sep.empty()) {
        if (!blank(value)) out.push_back(text::trim(value));
        return out;
    }
    std::size_t start = 0;
    while (start <= value.size()) {
        auto pos = value.find(sep, start);
        if (pos == std::string_view::npos) pos = value.size();
        auto part = text::trim(value.substr(start, pos - start));
        if (!part.empty()) out.push_back(std::move(part));
        start = pos + sep.size();
    }
    return out;
}

bool contains_normalized(const std::vector<std::string>& list, const std::string& value) {
    const auto key = text::normalize_phrase(value);
    return std::any_of(list.begin(), list.end(), [&](const std::string& x) { return text::normalize_phrase(x) == key; });
}

struct Incoming {
    ThesaurusEntry entry;
    std::vector<std::string> broader_refs;
};

std::string clean_label(std::string_view s, const ImportMapping& m, bool is_term) {
    std::string out = text::join(text::split_ws(s), " ");
    out = expand_abbreviations(out, m.abbreviations);
    if (m.punctuation_cleanup) {
        out = clean_punctuation(out);
        if (is_term) {
            while (!out.empty() && out.back() == '.') out.pop_back();
            out = text::trim(out);
        }
    }
    return out;
}

Incoming convert(const RawRecord& rec, const ImportMapping& m) {
    Incoming in;
    auto& e = in.entry;
    e.source = m.default_source;
    e.reliability = m.default_reliability;
    e.status = m.default_status;
    std::vector<std::string> explanations, categories;
    for (const auto& [name, value] : rec.fields) {
        const auto it = m.fields.find(name);
        if (it == m.fields.end() || blank(value)) continue;
        const std::string& target = it->second;
        if (target == "term") {
            e.term = clean_label(value, m, true);
        } else if (target == "variants") {
            for (const auto& v : split_values(value, m.multi_value_separator)) {
                auto c = clean_label(v, m, true);
                if (!c.empty() && !contains_normalized(e.variants, c)) e.variants.push_back(std::move(c));
            }
        } else if (target == "explanation") {
            for (const auto& v : split_values(value, m.multi_value_separator)) {
                explanations.push_back(clean_label(v, m, false));
            }
        } else if (target == "explanation_category") {
            for (const auto& v : split_values(value, m.multi_value_separator)) categories.push_back(v);
        } else if (target.rfind("translation.", 0) == 0) {
            const std::string lang = target.substr(12);
            for (const auto& v : split_values(value, m.multi_value_separator)) {
                auto c = clean_label(v, m, true);
                if (!c.empty()) e.translations[lang].push_back({std::move(c), "import"});
            }
        } else if (target == "broader") {
            for (const auto& v : split_values(value, m.multi_value_separator)) in.broader_refs.push_back(v);
        } else if (target == "source") {
            e.source = text::trim(value);
        } else if (target == "reliability") {
            const auto v = text::trim(value);
            int r = -1;
            if (v.size() == 1 && v[0] >= '0' && v[0] <= '3') r = v[0] - '0';
            if (r < 0) throw Error("invalid_record", "reliability must be 0..3, got '" + v + "'");
            e.reliability = r;
        } else if (target == "status") {
            e.status = parse_status(text::trim(value));
        } else {
            throw Error("invalid_mapping", "unknown target field '" + target + "'");
        }
    }
    if (e.term.empty()) throw Error("invalid_record", "record has no term");
    for (std::size_t i = 0; i < explanations.size(); ++i) {
        std::string cat;
        if (i < categories.size()) {
            cat = categories[i];
        } else if (categories.size() == 1) {
            cat = categories[0];
        }
        e.explanations.push_back({explanations[i], cat});
    }
    return in;
}

std::optional<std::string> resolve_ref(const ThesaurusStore& store, const std::string& ref) {
    if (store.find(ref)) return ref;
    for (const auto& id : store.find_by_term(ref)) {
        return id;
    }
    return std::nullopt;
}

std::string pick_merge_target(const ThesaurusStore& store, const std::vector<std::string>& ids) {
    for (const auto& id : ids) {
        if (store.get(id).kind == EntryKind::Term) return id;
    }
    return ids.front();
}

// Adds every incoming value missing from `target`; never removes anything.
bool merge_into(ThesaurusEntry& target, const ThesaurusEntry& in) {
    bool changed = false;
    for (const auto& v : in.variants) {
        if (text::normalize_phrase(v) != text::normalize_phrase(target.term) && !contains_normalized(target.variants, v)) {
            target.variants.push_back(v);
            changed = true;
        }
    }
    for (const auto& x : in.explanations) {
        const bool have = std::any_of(target.explanations.begin(), target.explanations.end(),
                                      [&](const Explanation& y) { return y.text == x.text; });
        if (!have) {
            target.explanations.push_back(x);
            changed = true;
        }
    }
    for (const auto& [lang, list] : in.translations) {
        auto& mine = target.translations[lang];
        for (const auto& t : list) {
            const bool have = std::any_of(mine.begin(), mine.end(), [&](const Translation& u) {
                return text::normalize_phrase(u.phrase) == text::normalize_phrase(t.phrase);
            });
            if (!have) {
                mine.push_back(t);
                changed = true;
            }
        }
    }
    if (target.source.empty() && !in.source.empty()) {
        target.source = in.source;
        changed = true;
    }
    if (target.reliability == kUnrated && in.reliability != kUnrated) {
        target.reliability = in.reliability;
        changed = true;
    }
    for (const auto& [k, v] : in.provenance) {
        if (target.provenance.emplace(k, v).second) changed = true;
    }
    return changed;
}

struct DeferredLink {
    std::string id;
    std::string ref;
    std::size_t record;
};

// Writes `e` with extra broader links; a link that would close a cycle is
// dropped with a warning rather than failing the whole record.
void commit_with_links(ThesaurusStore& store, ThesaurusEntry e, const std::vector<std::string>& new_links,
                       std::string_view editor, std::string_view summary, std::size_t record,
                       ImportReport& report) {
    auto base = e.broader;
    for (const auto& l : new_links) {
        if (std::find(e.broader.begin(), e.broader.end(), l) == e.broader.end()) e.broader.push_back(l);
    }
    try {
        store.upsert_entry(e, editor, summary);
    } catch (const Error& err) {
        if (err.code() != "cycle") throw;
        report.warnings.push_back("record " + std::to_string(record) + ": broader link dropped: " + err.what());
        e.broader = std::move(base);
        store.upsert_entry(std::move(e), editor, summary);
    }
}

}  // namespace

void ImportMapping::validate() const {
    const bool has_term = std::any_of(fields.begin(), fields.end(), [](const auto& kv) { return kv.second == "term"; });
    if (!has_term) throw Error("invalid_mapping", "mapping must cover the term field");
    static const std::set<std::string, std::less<>> kTargets{
        "term", "variants", "explanation", "explanation_category", "broader", "source", "reliability", "status"};
    for (const auto& [from, to] : fields) {
        if (!kTargets.count(to) && !(to.rfind("translation.", 0) == 0 && to.size() > 12)) {
            throw Error("invalid_mapping", "unknown target field '" + to + "' for '" + from + "'");
        }
    }
    if (close_threshold < 0.0 || close_threshold > 1.0) throw Error("invalid_mapping", "close_threshold must lie in [0, 1]");
    if (default_reliability < kUnrated || default_reliability > kPublicSubmission) {
        throw Error("invalid_mapping", "default_reliability must be 0..3");
    }
}

nlohmann::json ImportMapping::to_json() const {
    return {{"format", format_name(format)},
            {"fields", fields},
            {"multi_value_separator", multi_value_separator},
            {"punctuation_cleanup", punctuation_cleanup},
            {"abbreviations", abbreviations},
            {"default_source", default_source},
            {"default_reliability", default_reliability},
            {"default_status", to_string(default_status)},
            {"close_threshold", close_threshold}};
}

ImportMapping ImportMapping::from_json(const nlohmann::json& j) {
    ImportMapping m;
    try {
        m.format = parse_format(j.value("format", "csv"));
        m.fields = j.at("fields").get<std::map<std::string, std::string>>();
        m.multi_value_separator = j.value("multi_value_separator", m.multi_value_separator);
        m.punctuation_cleanup = j.value("punctuation_cleanup", m.punctuation_cleanup);
        m.abbreviations = j.value("abbreviations", m.abbreviations);
        m.default_source = j.value("default_source", m.default_source);
        m.default_reliability = j.value("default_reliability", m.default_reliability);
        m.default_status = parse_status(j.value("default_status", "approved"));
        m.close_threshold = j.value("close_threshold", m.close_threshold);
    } catch (const nlohmann::json::exception& e) {
        throw Error("invalid_mapping", e.what());
    }
    m.validate();
    return m;
}

nlohmann::json ImportReport::to_json() const {
    nlohmann::json flags = nlohmann::json::array();
    for (const auto& f : flagged) flags.push_back({{"incoming", f.incoming}, {"existing_id", f.existing_id}, {"score", f.score}});
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& e : errors) errs.push_back({{"record", e.record}, {"message", e.message}});
    return {{"records", records}, {"created", created},   {"merged", merged},
            {"flagged", flags},   {"errors", errs},       {"warnings", warnings}};
}

std::string clean_punctuation(std::string_view s) {
    std::string out;
    for (const auto& word : text::split_ws(s)) {
        const bool leading_punct = word.find_first_not_of(",.;:!?") == std::string::npos ||
                                   std::string_view(",.;:!?").find(word[0]) != std::string_view::npos;
        if (!out.empty() && !leading_punct) out.push_back(' ');
        out += word;
    }
    // A punctuation-only word glued to the previous one above; strip the ends.
    const auto first = out.find_first_not_of(" ,;:");
    if (first == std::string::npos) return {};
    const auto last = out.find_last_not_of(" ,;:");
    return out.substr(first, last - first + 1);
}

std::string expand_abbreviations(std::string_view s, const std::map<std::string, std::string>& table) {
    if (table.empty()) return std::string(s);
    std::vector<std::string> words = text::split_ws(s);
    for (auto& w : words) {
        if (const auto it = table.find(w); it != table.end()) {
            w = it->second;
            continue;
        }
        // Allow a trailing separator after the abbreviation ("tzv.,").
        if (w.size() > 1 && (w.back() == ',' || w.back() == ';')) {
            const auto it = table.find(w.substr(0, w.size() - 1));
            if (it != table.end()) w = it->second + w.back();
        }
    }
    return text::join(words, " ");
}

ImportReport import_dataset(std::string_view content, const ImportMapping& mapping, ThesaurusStore& store,
                            std::string_view editor) {
    mapping.validate();
    std::vector<RawRecord> records;
    switch (mapping.format) {
        case ImportFormat::Csv: records = read_tabular(content, true); break;
        case ImportFormat::Tsv: records = read_tabular(content, false); break;
        case ImportFormat::StructuredText: records = read_structured(content); break;
    }

    ImportReport report;
    report.records = records.size();
    std::vector<DeferredLink> deferred;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const std::size_t no = r + 1;
        if (!records[r].error.empty()) {
            report.errors.push_back({no, records[r].error});
            continue;
        }
        try {
            Incoming in = convert(records[r], mapping);
            std::vector<std::string> links;
            std::vector<std::string> pending;
            for (const auto& ref : in.broader_refs) {
                if (auto id = resolve_ref(store, ref)) {
                    links.push_back(*id);
                } else {
                    pending.push_back(ref);
                }
            }
            const auto same = store.find_by_term(in.entry.term);
            std::string id;
            if (!same.empty()) {
                id = pick_merge_target(store, same);
                ThesaurusEntry target = store.get(id);
                const bool changed = merge_into(target, in.entry);
                const bool new_links = std::any_of(links.begin(), links.end(), [&](const std::string& l) {
                    return std::find(target.broader.begin(), target.broader.end(), l) == target.broader.end();
                });
                if (changed || new_links) {
                    commit_with_links(store, std::move(target), links, editor, "merged from import", no, report);
                }
                ++report.merged;
            } else {
                const auto close = detect_close_terms(in.entry.term, store, mapping.close_threshold);
                if (!close.empty()) {
                    report.flagged.push_back({in.entry.term, close.front().id, close.front().score});
                    continue;
                }
                in.entry.broader = links;
                id = store.upsert_entry(std::move(in.entry), editor, "imported");
                ++report.created;
            }
            for (auto& ref : pending) deferred.push_back({id, std::move(ref), no});
        } catch (const Error& e) {
            report.errors.push_back({no, e.what()});
        }
    }

    // Second pass: broader terms that were defined later in the same file.
    for (const auto& d : deferred) {
        const auto target_id = resolve_ref(store, d.ref);
        if (!target_id) {
            report.warnings.push_back("record " + std::to_string(d.record) + ": unresolved broader '" + d.ref + "'");
            continue;
        }
        ThesaurusEntry e = store.get(d.id);
        if (std::find(e.broader.begin(), e.broader.end(), *target_id) != e.broader.end()) continue;
        if (*target_id == d.id) {
            report.warnings.push_back("record " + std::to_string(d.record) + ": entry cannot be its own broader");
            continue;
        }
        try {
            commit_with_links(store, std::move(e), {*target_id}, editor, "linked broader from import", d.record,
                              report);
        } catch (const Error& err) {
            report.warnings.push_back("record " + std::to_string(d.record) + ": " + err.what());
        }
    }
    return report;
}

}  // namespace termwork

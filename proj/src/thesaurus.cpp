#include "termwork/thesaurus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <deque>
#include <filesystem>
#include <fstream>

#include "termwork/error.hpp"
#include "termwork/relations.hpp"
#include "termwork/text.hpp"

namespace termwork {

namespace {

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string collapse(std::string_view s) {
    std::string out;
    for (const auto& w : text::split_ws(s)) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

bool valid_id(std::string_view id) {
    return !id.empty() && std::none_of(id.begin(), id.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '/' || c == '?' || c == '#' || c == '"' ||
               c == '<' || c == '>' || c == '&';
    });
}

void erase_value(std::vector<std::string>& v, const std::string& value) {
    v.erase(std::remove(v.begin(), v.end(), value), v.end());
}

std::string sort_key(const ThesaurusEntry& e) { return text::normalize_phrase(e.term); }

}  // namespace

std::string_view to_string(EntryStatus s) {
    switch (s) {
        case EntryStatus::Candidate: return "candidate";
        case EntryStatus::Approved: return "approved";
        case EntryStatus::Rejected: return "rejected";
    }
    return "approved";
}

EntryStatus parse_status(std::string_view s) {
    if (s == "candidate") return EntryStatus::Candidate;
    if (s == "approved") return EntryStatus::Approved;
    if (s == "rejected") return EntryStatus::Rejected;
    throw Error("invalid_entry", "unknown status '" + std::string(s) + "'");
}

nlohmann::json ThesaurusEntry::to_json() const {
    nlohmann::json expl = nlohmann::json::array();
    for (const auto& e : explanations) expl.push_back({{"text", e.text}, {"category", e.category}});
    nlohmann::json trans = nlohmann::json::object();
    for (const auto& [lang, list] : translations) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : list) arr.push_back({{"phrase", t.phrase}, {"source", t.source}});
        trans[lang] = arr;
    }
    nlohmann::json revs = nlohmann::json::array();
    for (const auto& r : revisions) {
        revs.push_back({{"timestamp", r.timestamp}, {"editor", r.editor}, {"summary", r.summary}});
    }
    return {{"id", id},
            {"kind", kind == EntryKind::Category ? "category" : "term"},
            {"term", term},
            {"variants", variants},
            {"explanations", expl},
            {"translations", trans},
            {"broader", broader},
            {"narrower", narrower},
            {"status", to_string(status)},
            {"source", source},
            {"reliability", reliability},
            {"provenance", provenance},
            {"revisions", revs}};
}

ThesaurusEntry ThesaurusEntry::from_json(const nlohmann::json& j) {
    ThesaurusEntry e;
    e.id = j.value("id", "");
    e.kind = j.value("kind", "term") == "category" ? EntryKind::Category : EntryKind::Term;
    e.term = j.value("term", "");
    e.variants = j.value("variants", std::vector<std::string>{});
    for (const auto& x : j.value("explanations", nlohmann::json::array())) {
        if (x.is_string()) {
            e.explanations.push_back({x.get<std::string>(), ""});
        } else {
            e.explanations.push_back({x.value("text", ""), x.value("category", "")});
        }
    }
    const auto translations = j.value("translations", nlohmann::json::object());
    for (const auto& [lang, list] : translations.items()) {
        auto& out = e.translations[lang];
        for (const auto& t : list) {
            if (t.is_string()) {
                out.push_back({t.get<std::string>(), ""});
            } else {
                out.push_back({t.value("phrase", ""), t.value("source", "")});
            }
        }
    }
    e.broader = j.value("broader", std::vector<std::string>{});
    e.narrower = j.value("narrower", std::vector<std::string>{});
    e.status = parse_status(j.value("status", "approved"));
    e.source = j.value("source", "");
    e.reliability = j.value("reliability", 0);
    e.provenance = j.value("provenance", std::map<std::string, std::string>{});
    for (const auto& r : j.value("revisions", nlohmann::json::array())) {
        e.revisions.push_back({r.value("timestamp", ""), r.value("editor", ""), r.value("summary", "")});
    }
    return e;
}

nlohmann::json TreeNode::to_json() const {
    nlohmann::json kids = nlohmann::json::array();
    for (const auto& c : children) kids.push_back(c.to_json());
    return {{"id", id}, {"term", term}, {"status", to_string(status)}, {"has_children", has_children},
            {"children", kids}};
}

ThesaurusStore::ThesaurusStore(StoreOptions options) : options_(std::move(options)) {
    if (!options_.clock) options_.clock = utc_now;
}

std::string ThesaurusStore::now() const { return options_.clock(); }

std::string ThesaurusStore::next_id() {
    while (true) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "T%06llu", static_cast<unsigned long long>(++counter_));
        if (!entries_.count(buf)) return buf;
    }
}

void ThesaurusStore::index_term(const ThesaurusEntry& e) { term_index_[text::normalize_phrase(e.term)].insert(e.id); }

void ThesaurusStore::unindex_term(const ThesaurusEntry& e) {
    const auto it = term_index_.find(text::normalize_phrase(e.term));
    if (it == term_index_.end()) return;
    it->second.erase(e.id);
    if (it->second.empty()) term_index_.erase(it);
}

std::vector<std::string> ThesaurusStore::path_to(std::string_view from, std::string_view to) const {
    // Breadth-first walk along broader links, remembering predecessors.
    std::map<std::string, std::string, std::less<>> parent;
    std::deque<std::string> queue{std::string(from)};
    parent[std::string(from)] = "";
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        if (cur == to) {
            std::vector<std::string> path;
            for (std::string at = cur; !at.empty(); at = parent[at]) path.push_back(at);
            std::reverse(path.begin(), path.end());
            return path;
        }
        const auto it = entries_.find(cur);
        if (it == entries_.end()) continue;
        for (const auto& b : it->second.broader) {
            if (parent.emplace(b, cur).second) queue.push_back(b);
        }
    }
    return {};
}

const std::string& ThesaurusStore::ensure_candidate_category(std::string_view editor) {
    if (candidate_category_.empty()) {
        const std::string id(kCandidateCategoryId);
        if (!entries_.count(id)) {
            ThesaurusEntry cat;
            cat.id = id;
            cat.kind = EntryKind::Category;
            cat.term = "candidate terms";
            cat.source = "system";
            upsert_entry(std::move(cat), editor, "created candidate category");
        }
        candidate_category_ = id;
    }
    return candidate_category_;
}

std::string ThesaurusStore::upsert_entry(ThesaurusEntry e, std::string_view editor, std::string_view summary,
                                         std::optional<std::size_t> expected_revisions) {
    auto invalid = [](const std::string& what) { throw Error("invalid_entry", what); };
    e.term = collapse(e.term);
    if (e.term.empty()) invalid("term must not be empty");
    if (e.id.empty()) e.id = next_id();
    if (!valid_id(e.id)) invalid("invalid id '" + e.id + "'");
    if (e.reliability < kUnrated || e.reliability > kPublicSubmission) invalid("reliability must be 0..3");
    if (e.kind == EntryKind::Category && e.status == EntryStatus::Candidate) {
        invalid("category nodes cannot be candidates");
    }

    const auto existing = entries_.find(e.id);
    const bool is_new = existing == entries_.end();
    const std::size_t current_revisions = is_new ? 0 : existing->second.revisions.size();
    if (expected_revisions && *expected_revisions != current_revisions) {
        throw Error("conflict", "entry " + e.id + " is at revision " + std::to_string(current_revisions) +
                                    ", expected " + std::to_string(*expected_revisions));
    }

    for (auto it = e.translations.begin(); it != e.translations.end();) {
        if (!options_.translation_languages.count(it->first)) invalid("unsupported translation language '" + it->first + "'");
        auto& list = it->second;
        for (auto& t : list) t.phrase = collapse(t.phrase);
        list.erase(std::remove_if(list.begin(), list.end(), [](const Translation& t) { return t.phrase.empty(); }),
                   list.end());
        it = list.empty() ? e.translations.erase(it) : std::next(it);
    }
    for (auto& v : e.variants) v = collapse(v);
    erase_value(e.variants, "");

    std::vector<std::string> broader;
    for (const auto& b : e.broader) {
        if (std::find(broader.begin(), broader.end(), b) == broader.end()) broader.push_back(b);
    }
    for (const auto& b : broader) {
        if (b == e.id) throw Error("cycle", "self-loop: " + e.id + " -> " + e.id);
        if (!entries_.count(b)) throw Error("unknown_broader", "broader entry '" + b + "' does not exist");
        if (!is_new) {
            const auto path = path_to(b, e.id);
            if (!path.empty()) {
                throw Error("cycle", "cycle: " + e.id + " -> " + text::join(path, " -> "));
            }
        }
    }
    if (e.kind == EntryKind::Term && e.status == EntryStatus::Candidate && broader.empty()) {
        broader.push_back(ensure_candidate_category(editor));
    }
    e.broader = std::move(broader);

    std::vector<std::string> old_broader;
    if (!is_new) {
        old_broader = existing->second.broader;
        e.narrower = existing->second.narrower;
        e.revisions = existing->second.revisions;
        unindex_term(existing->second);
    } else {
        e.narrower.clear();
        e.revisions.clear();
    }
    for (const auto& b : old_broader) {
        if (std::find(e.broader.begin(), e.broader.end(), b) == e.broader.end()) {
            erase_value(entries_.at(b).narrower, e.id);
        }
    }
    for (const auto& b : e.broader) {
        auto& kids = entries_.at(b).narrower;
        if (std::find(kids.begin(), kids.end(), e.id) == kids.end()) {
            kids.insert(std::upper_bound(kids.begin(), kids.end(), e.id), e.id);
        }
    }
    e.revisions.push_back({now(), std::string(editor),
                           summary.empty() ? std::string(is_new ? "created" : "updated") : std::string(summary)});
    index_term(e);
    const std::string id = e.id;
    entries_[id] = std::move(e);
    return id;
}

const ThesaurusEntry* ThesaurusStore::find(std::string_view id) const {
    const auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

const ThesaurusEntry& ThesaurusStore::get(std::string_view id) const {
    const auto* e = find(id);
    if (!e) throw Error("not_found", "no entry with id '" + std::string(id) + "'");
    return *e;
}

std::vector<std::string> ThesaurusStore::find_by_term(std::string_view term) const {
    const auto it = term_index_.find(text::normalize_phrase(term));
    if (it == term_index_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<std::string> ThesaurusStore::validate() const {
    std::vector<std::string> problems;
    auto contains = [](const std::vector<std::string>& v, const std::string& x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    std::map<std::string, std::size_t> indegree;
    for (const auto& [id, e] : entries_) {
        if (e.id != id) problems.push_back("entry keyed " + id + " carries id " + e.id);
        indegree.emplace(id, 0);
        for (const auto& b : e.broader) {
            if (b == id) problems.push_back("self-loop on " + id);
            const auto* parent = find(b);
            if (!parent) {
                problems.push_back(id + " has unknown broader " + b);
            } else if (!contains(parent->narrower, id)) {
                problems.push_back(b + " lacks narrower " + id);
            }
        }
        for (const auto& n : e.narrower) {
            const auto* child = find(n);
            if (!child) {
                problems.push_back(id + " has unknown narrower " + n);
            } else if (!contains(child->broader, id)) {
                problems.push_back(n + " lacks broader " + id);
            }
        }
        const auto ids = find_by_term(e.term);
        if (!contains(ids, id)) problems.push_back(id + " missing from term index");
    }
    // Kahn's algorithm over child -> parent edges.
    for (const auto& [id, e] : entries_) {
        for (const auto& b : e.broader) {
            if (entries_.count(b)) ++indegree[b];
        }
    }
    std::deque<std::string> ready;
    for (const auto& [id, d] : indegree) {
        if (d == 0) ready.push_back(id);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const auto id = ready.front();
        ready.pop_front();
        ++visited;
        for (const auto& b : entries_.find(id)->second.broader) {
            if (entries_.count(b) && --indegree[b] == 0) ready.push_back(b);
        }
    }
    if (visited != entries_.size()) problems.push_back("broader relation contains a cycle");
    return problems;
}

nlohmann::json ThesaurusStore::dump() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [id, e] : entries_) entries.push_back(e.to_json());
    return {{"format", "termwork-thesaurus"}, {"version", 1}, {"counter", counter_}, {"entries", entries}};
}

ThesaurusStore ThesaurusStore::restore(const nlohmann::json& dump, StoreOptions options) {
    if (dump.value("format", "") != "termwork-thesaurus") throw Error("invalid_dump", "not a thesaurus dump");
    if (dump.value("version", 0) != 1) throw Error("invalid_dump", "unsupported dump version");
    ThesaurusStore store(std::move(options));
    store.counter_ = dump.value("counter", std::uint64_t{0});
    for (const auto& j : dump.at("entries")) {
        auto e = ThesaurusEntry::from_json(j);
        if (e.kind == EntryKind::Category && e.id == kCandidateCategoryId) store.candidate_category_ = e.id;
        store.index_term(e);
        const std::string id = e.id;
        store.entries_.emplace(id, std::move(e));
    }
    if (const auto problems = store.validate(); !problems.empty()) {
        throw Error("invalid_dump", "dump violates store invariants: " + problems.front());
    }
    return store;
}

void ThesaurusStore::save(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("io", "cannot write " + tmp);
        out << dump().dump(1) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

ThesaurusStore ThesaurusStore::load(const std::string& path, StoreOptions options) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot read " + path);
    return restore(nlohmann::json::parse(in), std::move(options));
}

std::vector<CloseTerm> detect_close_terms(std::string_view term, const ThesaurusStore& store, double threshold) {
    if (text::normalize_phrase(term).empty()) throw Error("invalid_argument", "term must not be empty");
    const std::string probe = text::strip_diacritics(text::normalize_phrase(term));
    std::vector<CloseTerm> out;
    for (const auto& [id, e] : store.entries()) {
        if (e.kind == EntryKind::Category) continue;
        const double s = lexsim(probe, text::strip_diacritics(text::normalize_phrase(e.term)));
        if (s >= threshold) out.push_back({id, s});
    }
    std::sort(out.begin(), out.end(), [](const CloseTerm& a, const CloseTerm& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return out;
}

namespace {

bool visible(const ThesaurusEntry& e, const TreeOptions& o) {
    return o.include_rejected || e.status != EntryStatus::Rejected;
}

void sort_ids(const ThesaurusStore& store, std::vector<std::string>& ids) {
    std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
        const auto ka = sort_key(store.get(a));
        const auto kb = sort_key(store.get(b));
        return ka != kb ? ka < kb : a < b;
    });
}

TreeNode build_node(const ThesaurusStore& store, const ThesaurusEntry& e, const TreeOptions& o, std::size_t level) {
    TreeNode node{e.id, e.term, e.status, false, {}};
    std::vector<std::string> kids;
    for (const auto& n : e.narrower) {
        if (visible(store.get(n), o)) kids.push_back(n);
    }
    node.has_children = !kids.empty();
    if (o.depth != 0 && level >= o.depth) return node;
    sort_ids(store, kids);
    for (const auto& k : kids) node.children.push_back(build_node(store, store.get(k), o, level + 1));
    return node;
}

}  // namespace

std::vector<TreeNode> tree(const ThesaurusStore& store, std::optional<std::string_view> root, const TreeOptions& options) {
    std::vector<TreeNode> out;
    if (root) {
        out.push_back(build_node(store, store.get(*root), options, 0));
        return out;
    }
    std::vector<std::string> roots;
    for (const auto& [id, e] : store.entries()) {
        if (e.broader.empty() && visible(e, options)) roots.push_back(id);
    }
    sort_ids(store, roots);
    for (const auto& r : roots) out.push_back(build_node(store, store.get(r), options, 0));
    return out;
}

std::vector<std::string> import_term_candidates(ThesaurusStore& store, const std::vector<TermCandidate>& ranked,
                                                std::size_t limit, std::string_view editor) {
    std::vector<std::string> created;
    std::size_t considered = 0;
    for (const auto& c : ranked) {
        if (limit != 0 && considered >= limit) break;
        ++considered;
        if (!store.find_by_term(c.phrase).empty()) continue;
        ThesaurusEntry e;
        e.term = c.phrase;
        e.status = EntryStatus::Candidate;
        e.source = "auto-extraction";
        e.provenance = {{"rank", text::format_double(c.rank)},
                        {"raw_count", std::to_string(c.raw_count)},
                        {"f", text::format_double(c.f)},
                        {"f_ref", text::format_double(c.f_ref)}};
        created.push_back(store.upsert_entry(std::move(e), editor, "auto-extracted candidate"));
    }
    return created;
}

std::vector<std::string> store_terms(const ThesaurusStore& store) {
    std::vector<std::string> out;
    for (const auto& [id, e] : store.entries()) {
        if (e.kind == EntryKind::Term && e.status != EntryStatus::Rejected) out.push_back(e.term);
    }
    return out;
}

}  // namespace termwork

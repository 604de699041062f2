#include "termwork/api.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "httplib.h"
#include "termwork/error.hpp"
#include "termwork/text.hpp"

namespace termwork {

namespace {

using nlohmann::json;

ApiResponse reply(int status, const json& body) { return {status, "application/json", body.dump()}; }

ApiResponse error_reply(int status, std::string_view code, std::string_view message) {
    return reply(status, {{"error", {{"code", code}, {"message", message}}}});
}

int status_for(const std::string& code) {
    static const std::map<std::string, int, std::less<>> kStatus{
        {"not_found", 404},       {"conflict", 409},        {"cycle", 409},
        {"already_reviewed", 409}, {"unauthorized", 401},    {"forbidden", 403},
        {"method_not_allowed", 405}, {"invalid_entry", 422}, {"unknown_broader", 422},
    };
    const auto it = kStatus.find(code);
    return it == kStatus.end() ? 400 : it->second;
}

std::vector<std::string> segments(std::string_view path) {
    std::vector<std::string> out;
    for (auto& s : text::split(path, '/')) {
        if (!s.empty()) out.push_back(std::move(s));
    }
    return out;
}

bool flag(const ApiRequest& r, const std::string& name) {
    const auto it = r.query.find(name);
    return it != r.query.end() && (it->second == "1" || it->second == "true" || it->second == "yes");
}

std::size_t number(const ApiRequest& r, const std::string& name, std::size_t fallback) {
    const auto it = r.query.find(name);
    if (it == r.query.end() || it->second.empty()) return fallback;
    std::size_t v = 0;
    const auto* first = it->second.data();
    const auto* last = first + it->second.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw Error("bad_request", "query parameter '" + name + "' must be a non-negative integer");
    }
    return v;
}

json page_of(const json& items, const ApiRequest& r, const ApiConfig& c) {
    const std::size_t size = std::min(std::max<std::size_t>(number(r, "page_size", c.page_size), 1), c.max_page_size);
    const std::size_t page = std::max<std::size_t>(number(r, "page", 1), 1);
    json slice = json::array();
    const std::size_t begin = (page - 1) * size;
    for (std::size_t i = begin; i < items.size() && i < begin + size; ++i) slice.push_back(items[i]);
    return {{"items", slice}, {"page", page}, {"page_size", size}, {"total", items.size()}};
}

json parse_body(const ApiRequest& r) {
    if (r.body.empty()) return json::object();
    try {
        auto j = json::parse(r.body);
        if (!j.is_object()) throw Error("bad_request", "request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw Error("bad_request", std::string("malformed JSON body: ") + e.what());
    }
}

json summary(const ThesaurusEntry& e, std::string_view match, double score) {
    return {{"id", e.id},
            {"term", e.term},
            {"status", to_string(e.status)},
            {"kind", e.kind == EntryKind::Category ? "category" : "term"},
            {"match", match},
            {"score", score}};
}

json line_json(const ConcordanceLine& l) {
    return {{"doc_id", l.doc_id}, {"offset", l.offset}, {"left", l.left},
            {"match", l.match},   {"right", l.right},   {"text", l.text()}};
}

double rank_of(const ThesaurusEntry& e) {
    const auto it = e.provenance.find("rank");
    if (it == e.provenance.end()) return 0.0;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        return 0.0;
    }
}

// Every root-to-entry path along broader links.
void collect_paths(const ThesaurusStore& store, const std::string& id, std::vector<std::string>& suffix,
                   std::vector<std::vector<std::string>>& out) {
    if (out.size() >= 100) return;
    const auto& e = store.get(id);
    suffix.push_back(id);
    if (e.broader.empty()) {
        out.emplace_back(suffix.rbegin(), suffix.rend());
    } else {
        for (const auto& b : e.broader) collect_paths(store, b, suffix, out);
    }
    suffix.pop_back();
}

std::optional<std::size_t> expected_revisions(const ApiRequest& r, const json& body) {
    if (body.contains("expected_revisions") && !body.at("expected_revisions").is_null()) {
        return body.at("expected_revisions").get<std::size_t>();
    }
    if (const auto it = r.headers.find("if-match"); it != r.headers.end()) {
        std::string v = it->second;
        v.erase(std::remove(v.begin(), v.end(), '"'), v.end());
        try {
            return static_cast<std::size_t>(std::stoull(v));
        } catch (const std::exception&) {
            throw Error("bad_request", "If-Match must carry a revision count");
        }
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Role r) {
    switch (r) {
        case Role::Reader: return "reader";
        case Role::Editor: return "editor";
        case Role::Admin: return "admin";
    }
    return "reader";
}

Role parse_role(std::string_view s) {
    if (s == "reader") return Role::Reader;
    if (s == "editor") return Role::Editor;
    if (s == "admin") return Role::Admin;
    throw Error("invalid_config", "unknown role '" + std::string(s) + "'");
}

ApiConfig ApiConfig::from_json(const json& j) {
    ApiConfig c;
    const auto tokens = j.value("tokens", json::object());
    for (const auto& [token, u] : tokens.items()) {
        c.tokens[token] = {u.value("name", token), parse_role(u.value("role", "reader"))};
    }
    c.page_size = j.value("page_size", c.page_size);
    c.max_page_size = j.value("max_page_size", c.max_page_size);
    c.detail_examples = j.value("detail_examples", c.detail_examples);
    c.detail_related = j.value("detail_related", c.detail_related);
    c.concordance_window = j.value("concordance_window", c.concordance_window);
    c.store_path = j.value("store_path", c.store_path);
    c.suggest_options.lexsim_threshold = j.value("lexsim_threshold", c.suggest_options.lexsim_threshold);
    if (c.page_size == 0 || c.max_page_size < c.page_size) throw Error("invalid_config", "bad page size limits");
    return c;
}

ApiService::ApiService(ThesaurusStore store, ApiConfig config, std::shared_ptr<const CorpusIndex> pivot_corpus,
                       SuggestionData suggestions)
    : store_(std::move(store)), config_(std::move(config)), corpus_(std::move(pivot_corpus)),
      data_(std::move(suggestions)) {
    if (data_.profiles.empty()) refresh_profiles_locked();
}

void ApiService::refresh_profiles() {
    std::unique_lock lock(mutex_);
    refresh_profiles_locked();
}

void ApiService::refresh_profiles_locked() {
    if (!corpus_) return;
    data_.profiles.clear();
    for (const auto& term : store_terms(store_)) {
        data_.profiles.push_back(collocate_profile(*corpus_, term, config_.profile_options));
    }
}

void ApiService::set_suggestions(SuggestionData data) {
    std::unique_lock lock(mutex_);
    const bool keep_profiles = data.profiles.empty();
    auto old = std::move(data_.profiles);
    data_ = std::move(data);
    if (keep_profiles) data_.profiles = std::move(old);
}

json ApiService::dump_store() const {
    std::shared_lock lock(mutex_);
    return store_.dump();
}

const ApiUser& ApiService::require(const ApiRequest& req, Role role) const {
    const auto it = req.headers.find("authorization");
    if (it == req.headers.end()) throw Error("unauthorized", "missing bearer token");
    constexpr std::string_view kBearer = "Bearer ";
    if (it->second.rfind(kBearer, 0) != 0) throw Error("unauthorized", "authorization must use a bearer token");
    const auto user = config_.tokens.find(it->second.substr(kBearer.size()));
    if (user == config_.tokens.end()) throw Error("unauthorized", "unknown token");
    if (static_cast<int>(user->second.role) < static_cast<int>(role)) {
        throw Error("forbidden", "role '" + std::string(to_string(user->second.role)) + "' may not do this");
    }
    return user->second;
}

void ApiService::persist() {
    if (!config_.store_path.empty()) store_.save(config_.store_path);
}

ApiResponse ApiService::handle(const ApiRequest& request) {
    try {
        return route(request);
    } catch (const Error& e) {
        return error_reply(status_for(e.code()), e.code(), e.what());
    } catch (const json::exception& e) {
        return error_reply(400, "bad_request", e.what());
    } catch (const std::exception& e) {
        return error_reply(500, "internal", e.what());
    }
}

ApiResponse ApiService::route(const ApiRequest& req) {
    const auto seg = segments(req.path);
    const std::string& m = req.method;
    auto not_allowed = [&] { return error_reply(405, "method_not_allowed", m + " " + req.path); };
    auto unknown = [&] { return error_reply(404, "not_found", "no route for " + req.path); };
    if (seg.empty()) return unknown();

    if (seg[0] == "entries") {
        if (seg.size() == 1) {
            if (m == "GET") {
                std::shared_lock lock(mutex_);
                const auto it = req.query.find("q");
                const auto hits = search(it == req.query.end() ? "" : it->second, flag(req, "include_candidates"),
                                         flag(req, "include_rejected"));
                return reply(200, page_of(hits, req, config_));
            }
            if (m == "POST") {
                const auto& user = require(req, Role::Editor);
                const auto body = parse_body(req);
                auto entry = ThesaurusEntry::from_json(body);
                std::unique_lock lock(mutex_);
                if (!entry.id.empty() && store_.find(entry.id)) {
                    throw Error("conflict", "entry " + entry.id + " already exists; use PUT");
                }
                const auto id = store_.upsert_entry(std::move(entry), user.name, body.value("summary", "created"));
                persist();
                return reply(201, store_.get(id).to_json());
            }
            return not_allowed();
        }
        const std::string& id = seg[1];
        if (seg.size() == 2) {
            if (m == "GET") {
                std::shared_lock lock(mutex_);
                return reply(200, entry_detail(store_.get(id)));
            }
            if (m == "PUT") {
                const auto& user = require(req, Role::Editor);
                const auto body = parse_body(req);
                auto entry = ThesaurusEntry::from_json(body);
                if (!entry.id.empty() && entry.id != id) throw Error("bad_request", "body id does not match path id");
                entry.id = id;
                const auto expected = expected_revisions(req, body);
                std::unique_lock lock(mutex_);
                const bool created = store_.find(id) == nullptr;
                store_.upsert_entry(std::move(entry), user.name, body.value("summary", ""), expected);
                persist();
                return reply(created ? 201 : 200, store_.get(id).to_json());
            }
            return not_allowed();
        }
        if (seg.size() == 3 && m != "GET") return not_allowed();
        if (seg.size() == 3) {
            std::shared_lock lock(mutex_);
            const auto& e = store_.get(id);
            if (seg[2] == "examples") return reply(200, page_of(examples(e), req, config_));
            if (seg[2] == "related") return reply(200, page_of(related(e), req, config_));
            if (seg[2] == "suggestions") return reply(200, suggestions(e));
        }
        return unknown();
    }

    if (seg[0] == "tree" && seg.size() == 1) {
        if (m != "GET") return not_allowed();
        TreeOptions opts;
        opts.include_rejected = flag(req, "include_rejected");
        opts.depth = number(req, "depth", 0);
        std::shared_lock lock(mutex_);
        std::optional<std::string_view> root;
        const auto it = req.query.find("root");
        if (it != req.query.end() && !it->second.empty()) root = it->second;
        json items = json::array();
        for (const auto& n : tree(store_, root, opts)) items.push_back(n.to_json());
        return reply(200, page_of(items, req, config_));
    }

    if (seg[0] == "candidates") {
        if (seg.size() == 1) {
            if (m != "GET") return not_allowed();
            std::shared_lock lock(mutex_);
            std::vector<const ThesaurusEntry*> queue;
            for (const auto& [id, e] : store_.entries()) {
                if (e.kind == EntryKind::Term && e.status == EntryStatus::Candidate) queue.push_back(&e);
            }
            std::stable_sort(queue.begin(), queue.end(), [](const ThesaurusEntry* a, const ThesaurusEntry* b) {
                const double ra = rank_of(*a), rb = rank_of(*b);
                return ra != rb ? ra > rb : a->id < b->id;
            });
            json items = json::array();
            for (const auto* e : queue) {
                const auto s = suggestions(*e);
                items.push_back({{"id", e->id},
                                 {"term", e->term},
                                 {"rank", rank_of(*e)},
                                 {"source", e->source},
                                 {"provenance", e->provenance},
                                 {"revisions", e->revisions.size()},
                                 {"suggested_hypernyms", s.at("hypernyms")},
                                 {"suggested_translations", s.at("translations")}});
            }
            return reply(200, page_of(items, req, config_));
        }
        if (seg.size() == 3 && seg[2] == "review") {
            if (m != "POST") return not_allowed();
            const auto& user = require(req, Role::Editor);
            const auto body = parse_body(req);
            std::unique_lock lock(mutex_);
            auto out = review(seg[1], body, user);
            persist();
            return reply(200, out);
        }
        return unknown();
    }

    if (seg[0] == "export" && seg.size() == 2 && seg[1] == "skos") {
        if (m != "GET") return not_allowed();
        const auto it = req.query.find("format");
        const std::string format = it == req.query.end() ? "rdfxml" : it->second;
        std::shared_lock lock(mutex_);
        if (format == "rdfxml" || format == "xml") {
            return {200, "application/rdf+xml", export_skos_rdfxml(store_, config_.skos)};
        }
        if (format == "jsonld") return {200, "application/ld+json", export_skos_jsonld(store_, config_.skos).dump()};
        throw Error("bad_request", "format must be rdfxml or jsonld");
    }

    if (seg[0] == "admin" && seg.size() == 2) {
        require(req, Role::Admin);
        if (seg[1] == "dump" && m == "GET") {
            std::shared_lock lock(mutex_);
            return reply(200, store_.dump());
        }
        if (seg[1] == "refresh" && m == "POST") {
            std::unique_lock lock(mutex_);
            refresh_profiles_locked();
            return reply(200, {{"profiles", data_.profiles.size()}});
        }
        return unknown();
    }

    if (seg[0] == "health" && seg.size() == 1) {
        std::shared_lock lock(mutex_);
        return reply(200, {{"status", "ok"}, {"entries", store_.size()}, {"corpus", corpus_ != nullptr}});
    }
    return unknown();
}

json ApiService::search(const std::string& q, bool include_candidates, bool include_rejected) const {
    const std::string nq = text::normalize_phrase(q);
    const std::string folded_q = text::strip_diacritics(nq);
    struct Hit {
        int group;
        double score;
        std::string key;
        const ThesaurusEntry* e;
    };
    std::vector<Hit> hits;
    for (const auto& [id, e] : store_.entries()) {
        if (e.status == EntryStatus::Candidate && !include_candidates) continue;
        if (e.status == EntryStatus::Rejected && !include_rejected) continue;
        const std::string key = text::normalize_phrase(e.term);
        if (nq.empty()) {
            hits.push_back({0, 1.0, key, &e});
            continue;
        }
        bool exact = key == nq;
        for (const auto& v : e.variants) exact = exact || text::normalize_phrase(v) == nq;
        for (const auto& [lang, list] : e.translations) {
            for (const auto& t : list) exact = exact || text::normalize_phrase(t.phrase) == nq;
        }
        if (exact) {
            hits.push_back({0, 1.0, key, &e});
        } else if (key.rfind(nq, 0) == 0) {
            hits.push_back({1, lexsim(nq, key), key, &e});
        } else {
            const double s = std::max(lexsim(nq, key), lexsim(folded_q, text::strip_diacritics(key)));
            if (s >= config_.suggest_options.lexsim_threshold) hits.push_back({2, s, key, &e});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.group != b.group) return a.group < b.group;
        if (a.group == 2 && a.score != b.score) return a.score > b.score;
        if (a.key != b.key) return a.key < b.key;
        return a.e->id < b.e->id;
    });
    static constexpr std::string_view kMatch[] = {"exact", "prefix", "similar"};
    json out = json::array();
    for (const auto& h : hits) out.push_back(summary(*h.e, nq.empty() ? "all" : kMatch[h.group], h.score));
    return out;
}

json ApiService::examples(const ThesaurusEntry& e) const {
    json out = json::array();
    if (!corpus_) return out;
    for (const auto& l : concordance(*corpus_, e.term, config_.concordance_window)) out.push_back(line_json(l));
    return out;
}

json ApiService::related(const ThesaurusEntry& e) const {
    json out = json::array();
    const std::string key = text::normalize_phrase(e.term);
    std::optional<CollocateProfile> query;
    for (const auto& p : data_.profiles) {
        if (text::normalize_phrase(p.term) == key) {
            query = p;
            break;
        }
    }
    if (!query && corpus_) query = collocate_profile(*corpus_, e.term, config_.profile_options);
    if (!query) return out;
    for (const auto& r : related_terms(*query, data_.profiles)) {
        const auto ids = store_.find_by_term(r.term);
        out.push_back({{"term", r.term}, {"similarity", r.similarity}, {"in_store", !ids.empty()}, {"ids", ids}});
    }
    return out;
}

json ApiService::suggestions(const ThesaurusEntry& e) const {
    std::vector<std::string> known;
    const std::string key = text::normalize_phrase(e.term);
    for (const auto& t : store_terms(store_)) {
        if (text::normalize_phrase(t) != key) known.push_back(t);
    }
    json hypernyms = json::array();
    for (const auto& c : suggest_hypernyms(e.term, data_.hypernym_candidates, known, config_.suggest_options)) {
        auto j = c.to_json();
        std::vector<std::string> ids;
        for (const auto& id : store_.find_by_term(c.hypernym)) {
            if (id != e.id) ids.push_back(id);
        }
        j["ids"] = ids;
        hypernyms.push_back(std::move(j));
    }
    json translations = json::object();
    for (const auto& [lang, lists] : data_.translations) {
        json arr = json::array();
        if (const auto it = lists.find(key); it != lists.end()) {
            for (const auto& c : it->second) {
                arr.push_back({{"phrase", c.target_term}, {"overlap", c.overlap}, {"rank", c.rank}});
            }
        }
        translations[lang] = arr;
    }
    return {{"id", e.id}, {"term", e.term}, {"hypernyms", hypernyms}, {"translations", translations}};
}

json ApiService::entry_detail(const ThesaurusEntry& e) const {
    std::vector<std::vector<std::string>> paths;
    std::vector<std::string> suffix;
    collect_paths(store_, e.id, suffix, paths);
    std::sort(paths.begin(), paths.end());
    const auto ex = examples(e);
    const auto rel = related(e);
    json ex_head = json::array(), rel_head = json::array();
    for (std::size_t i = 0; i < ex.size() && i < config_.detail_examples; ++i) ex_head.push_back(ex[i]);
    for (std::size_t i = 0; i < rel.size() && i < config_.detail_related; ++i) rel_head.push_back(rel[i]);
    return {{"entry", e.to_json()},
            {"broader_paths", paths},
            {"examples", ex_head},
            {"examples_total", ex.size()},
            {"related", rel_head}};
}

json ApiService::review(const std::string& id, const json& body, const ApiUser& user) {
    ThesaurusEntry e = store_.get(id);
    if (e.status != EntryStatus::Candidate) {
        throw Error("already_reviewed", "entry " + id + " was already reviewed; status is " +
                                            std::string(to_string(e.status)));
    }
    if (const auto expected = body.value("expected_revisions", json()); !expected.is_null()) {
        if (expected.get<std::size_t>() != e.revisions.size()) {
            throw Error("conflict", "entry " + id + " is at revision " + std::to_string(e.revisions.size()));
        }
    }
    const std::string decision = body.value("decision", "");
    if (decision != "approve" && decision != "reject") {
        throw Error("bad_request", "decision must be 'approve' or 'reject'");
    }

    const auto offered = suggestions(e);
    for (const auto& v : body.value("variants", std::vector<std::string>{})) {
        if (std::find(e.variants.begin(), e.variants.end(), v) == e.variants.end()) e.variants.push_back(v);
    }
    for (const auto& x : body.value("explanations", json::array())) {
        if (x.is_string()) {
            e.explanations.push_back({x.get<std::string>(), ""});
        } else {
            e.explanations.push_back({x.value("text", ""), x.value("category", "")});
        }
    }
    const auto translations = body.value("translations", json::object());
    for (const auto& [lang, list] : translations.items()) {
        std::set<std::string> suggested;
        if (offered.at("translations").contains(lang)) {
            for (const auto& c : offered.at("translations").at(lang)) {
                suggested.insert(text::normalize_phrase(c.at("phrase").get<std::string>()));
            }
        }
        auto& mine = e.translations[lang];
        for (const auto& t : list) {
            Translation tr;
            if (t.is_string()) {
                tr.phrase = t.get<std::string>();
                tr.source = suggested.count(text::normalize_phrase(tr.phrase)) ? "suggestion:translation-miner" : "manual";
            } else {
                tr.phrase = t.value("phrase", "");
                tr.source = t.value("source", "manual");
            }
            const bool have = std::any_of(mine.begin(), mine.end(), [&](const Translation& u) {
                return text::normalize_phrase(u.phrase) == text::normalize_phrase(tr.phrase);
            });
            if (!have) mine.push_back(std::move(tr));
        }
    }
    if (body.contains("reliability")) e.reliability = body.at("reliability").get<int>();

    std::string summary;
    if (decision == "approve") {
        if (body.contains("broader")) {
            e.broader = body.at("broader").get<std::vector<std::string>>();
        }
        e.broader.erase(std::remove(e.broader.begin(), e.broader.end(),
                                    std::string(ThesaurusStore::kCandidateCategoryId)),
                        e.broader.end());
        e.status = EntryStatus::Approved;
        summary = "approved by review";
        if (!e.broader.empty()) summary += " under " + text::join(e.broader, ", ");
    } else {
        e.status = EntryStatus::Rejected;
        summary = "rejected by review";
    }
    if (body.contains("comment")) summary += ": " + body.at("comment").get<std::string>();
    store_.upsert_entry(std::move(e), user.name, summary);
    return store_.get(id).to_json();
}

HttpServer::HttpServer(ApiService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto handler = [this](const httplib::Request& in, httplib::Response& out) {
        ApiRequest req;
        req.method = in.method;
        req.path = in.path;
        req.body = in.body;
        for (const auto& [k, v] : in.params) req.query[k] = v;
        for (const auto& [k, v] : in.headers) {
            std::string name = k;
            std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
            req.headers[name] = v;
        }
        const auto res = service_.handle(req);
        out.status = res.status;
        out.set_header("Access-Control-Allow-Origin", "*");
        out.set_content(res.body, res.content_type);
    };
    server_->Get(".*", handler);
    server_->Post(".*", handler);
    server_->Put(".*", handler);
    server_->Delete(".*", handler);
    server_->Options(".*", [](const httplib::Request&, httplib::Response& out) {
        out.set_header("Access-Control-Allow-Origin", "*");
        out.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
        out.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type, If-Match");
        out.status = 204;
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
    port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (port_ < 0) throw Error("io", "cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void HttpServer::listen(const std::string& host, int port) {
    port_ = port;
    if (!server_->listen(host, port)) throw Error("io", "cannot listen on " + host + ":" + std::to_string(port));
}

void HttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace termwork

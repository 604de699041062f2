#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "termwork/corpus.hpp"
#include "termwork/relations.hpp"
#include "termwork/skos.hpp"
#include "termwork/thesaurus.hpp"
#include "termwork/translation.hpp"

namespace httplib {
class Server;
}

namespace termwork {

enum class Role { Reader = 0, Editor = 1, Admin = 2 };

std::string_view to_string(Role r);
Role parse_role(std::string_view s);

struct ApiUser {
    std::string name;
    Role role = Role::Reader;
};

struct ApiConfig {
    /// Bearer token -> identity. Mutating endpoints need an editor or admin.
    std::map<std::string, ApiUser> tokens;
    std::size_t page_size = 50;
    std::size_t max_page_size = 500;
    /// Concordance lines embedded in an entry detail.
    std::size_t detail_examples = 10;
    std::size_t detail_related = 10;
    std::size_t concordance_window = 7;
    /// Store is saved here after every successful mutation when non-empty.
    std::string store_path;
    ProfileOptions profile_options;
    SuggestOptions suggest_options;
    SkosOptions skos;

    /// `{"tokens": {"<token>": {"name": .., "role": ..}}, "page_size": ..}`
    static ApiConfig from_json(const nlohmann::json& j);
};

/// Corpus-derived data computed offline by the pipeline and served as-is.
struct SuggestionData {
    std::vector<RelationCandidate> hypernym_candidates;
    /// target language -> candidate lists keyed by normalized source term
    std::map<std::string, CandidateLists> translations;
    /// Pivot-language collocate profiles of store terms (related-terms pool).
    std::vector<CollocateProfile> profiles;
};

struct ApiRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers;  // lower-case names
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;

    nlohmann::json json() const { return nlohmann::json::parse(body); }
};

/// Transport-independent request handler. Reads take a shared lock, writes an
/// exclusive one, so concurrent requests see consistent snapshots.
class ApiService {
public:
    ApiService(ThesaurusStore store, ApiConfig config, std::shared_ptr<const CorpusIndex> pivot_corpus = nullptr,
               SuggestionData suggestions = {});

    ApiResponse handle(const ApiRequest& request);

    /// Recomputes the related-terms pool from the loaded corpus for the
    /// current store terms. No-op without a corpus.
    void refresh_profiles();
    void set_suggestions(SuggestionData data);

    nlohmann::json dump_store() const;

private:
    ApiResponse route(const ApiRequest& req);
    const ApiUser& require(const ApiRequest& req, Role role) const;
    void persist();

    nlohmann::json search(const std::string& q, bool include_candidates, bool include_rejected) const;
    nlohmann::json entry_detail(const ThesaurusEntry& e) const;
    nlohmann::json examples(const ThesaurusEntry& e) const;
    nlohmann::json related(const ThesaurusEntry& e) const;
    nlohmann::json suggestions(const ThesaurusEntry& e) const;
    nlohmann::json review(const std::string& id, const nlohmann::json& body, const ApiUser& user);
    void refresh_profiles_locked();

    mutable std::shared_mutex mutex_;
    ThesaurusStore store_;
    ApiConfig config_;
    std::shared_ptr<const CorpusIndex> corpus_;
    SuggestionData data_;
};

/// Serves an ApiService over HTTP on a background thread.
class HttpServer {
public:
    explicit HttpServer(ApiService& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds (port 0 picks a free port) and starts serving; returns the port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    /// Blocks serving on the calling thread.
    void listen(const std::string& host, int port);
    void stop();
    int port() const { return port_; }

private:
    ApiService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace termwork

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace playstyle::explorer {

struct ApiRequest {
    std::string path;// e.g. "/api/projection"
    std::map<std::string, std::string> query;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/*
 * Read-only view of a pipeline output directory. Everything small is loaded
 * once at construction; replays are re-simulated per request from the stored
 * command streams.
 *
 * Endpoints (all GET, JSON):
 *   /api/schemes                               clustered schemes
 *   /api/groups?scheme=<s>                     groups with sizes and ks
 *   /api/projection?scheme=<s>&group=<m,side,slot>[&k=<k>]
 *   /api/trace/<trace_id>/replay
 *   /api/metrics?scheme=<s>
 */
class ArtifactStore
{
  public:
    explicit ArtifactStore(std::filesystem::path root);
    ~ArtifactStore();
    ArtifactStore(ArtifactStore &&) noexcept;
    ArtifactStore &operator=(ArtifactStore &&) noexcept;

    [[nodiscard]] const std::filesystem::path &root() const noexcept;

    [[nodiscard]] ApiResponse schemes() const;
    [[nodiscard]] ApiResponse groups(const std::optional<std::string> &scheme) const;
    [[nodiscard]] ApiResponse projection(const std::optional<std::string> &scheme,
      const std::optional<std::string> &group,
      const std::optional<std::string> &k) const;
    [[nodiscard]] ApiResponse replay(const std::string &trace_id) const;
    [[nodiscard]] ApiResponse metrics(const std::optional<std::string> &scheme) const;

    /// Routes a request path to the handlers above; unknown paths give 404.
    [[nodiscard]] ApiResponse handle(const ApiRequest &request) const;

    struct Data;

  private:
    std::unique_ptr<Data> data_;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;// 0 picks a free port
    std::optional<std::filesystem::path> ui_dir;// static assets mounted at "/"
};

/// HTTP front end of a store: JSON endpoints under /api, CORS headers on
/// every response, optional static UI at "/".
class HttpServer
{
  public:
    HttpServer(const ArtifactStore &store, const ServeOptions &options);
    ~HttpServer();
    HttpServer(const HttpServer &) = delete;
    HttpServer &operator=(const HttpServer &) = delete;

    /// Binds the socket and returns the port. Throws std::runtime_error on failure.
    int bind();
    /// Serves until stop() is called; binds first if needed.
    void run();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Blocks serving the store over HTTP until the process is stopped.
void serve(const ArtifactStore &store, const ServeOptions &options);

}// namespace playstyle::explorer

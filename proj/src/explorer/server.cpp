#include "playstyle/explorer/service.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <stdexcept>

namespace playstyle::explorer {

struct HttpServer::Impl {
    Impl(const ArtifactStore &s, ServeOptions o) : store(s), options(std::move(o)) {}

    const ArtifactStore &store;
    ServeOptions options;
    httplib::Server server;
    int port = -1;
};

HttpServer::HttpServer(const ArtifactStore &store, const ServeOptions &options)
  : impl_(std::make_unique<Impl>(store, options))
{
    auto &server = impl_->server;
    server.set_default_headers({ { "Access-Control-Allow-Origin", "*" },
      { "Access-Control-Allow-Methods", "GET, OPTIONS" },
      { "Access-Control-Allow-Headers", "Content-Type" } });
    server.Options(R"(/api/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });
    server.Get(R"(/api/.*)", [&store](const httplib::Request &req, httplib::Response &res) {
        ApiRequest request{ req.path, {} };
        for (const auto &[name, value] : req.params) { request.query.emplace(name, value); }
        ApiResponse response;
        try {
            response = store.handle(request);
        } catch (const std::exception &e) {
            response = { 500, { { "error", e.what() } } };
        }
        res.status = response.status;
        res.set_content(response.body.dump(), "application/json");
    });
    if (options.ui_dir && !server.set_mount_point("/", options.ui_dir->string())) {
        throw std::runtime_error("cannot serve UI assets from " + options.ui_dir->string());
    }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind()
{
    auto &i = *impl_;
    if (i.port >= 0) { return i.port; }
    i.port = i.options.port == 0 ? i.server.bind_to_any_port(i.options.host)
                                 : (i.server.bind_to_port(i.options.host, i.options.port) ? i.options.port : -1);
    if (i.port < 0) {
        throw std::runtime_error("cannot listen on " + i.options.host + ":" + std::to_string(i.options.port));
    }
    return i.port;
}

void HttpServer::run()
{
    const int port = bind();
    spdlog::info("serving {} on http://{}:{}", impl_->store.root().string(), impl_->options.host, port);
    impl_->server.listen_after_bind();
}

void HttpServer::stop() { impl_->server.stop(); }

void serve(const ArtifactStore &store, const ServeOptions &options)
{
    HttpServer server(store, options);
    server.run();
}

}// namespace playstyle::explorer

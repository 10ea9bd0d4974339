#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <thread>

#include <httplib.h>

#include "crosshunt/report.hpp"
#include "crosshunt/workspace.hpp"

namespace crosshunt {

inline int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::not_found:
    case Errc::missing_seed: return 404;
    case Errc::empty_corpus: return 409;
    case Errc::io_failure: return 500;
    default: return 400;
  }
}

namespace detail {

inline void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

inline void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, {{"error", code}, {"message", message}}, status);
}

inline std::optional<double> query_double(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  auto v = parse_double(req.get_param_value(name));
  if (!v) throw Error(Errc::invalid_argument, std::string(name) + " must be a number");
  return v;
}

inline std::optional<std::uint64_t> query_u64(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  auto v = parse_u64(req.get_param_value(name));
  if (!v) throw Error(Errc::invalid_argument, std::string(name) + " must be a non-negative integer");
  return v;
}

inline BucketParams bucket_params_from_query(const httplib::Request& req, BucketParams p) {
  if (auto v = query_double(req, "jaccard_threshold")) p.jaccard_threshold = *v;
  if (auto v = query_u64(req, "signature_length")) p.signature_length = *v;
  if (auto v = query_u64(req, "seed")) p.seed = *v;
  return p;
}

inline double number_field(const json& body, const char* name) {
  const auto& v = body.at(name);
  if (!v.is_number()) throw Error(Errc::invalid_argument, std::string(name) + " must be a number");
  return v.get<double>();
}

inline std::uint64_t count_field(const json& body, const char* name) {
  const auto& v = body.at(name);
  if (!v.is_number_unsigned()) throw Error(Errc::invalid_argument, std::string(name) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace detail

/// Parses a POST /hunt body over the workspace defaults. Accepted fields:
/// seeds (array of graph ids), threshold, weights ({w1,w2,w3} or [w1,w2,w3]),
/// jaccard_threshold, signature_length, minhash_seed.
inline HuntConfig hunt_request(const json& body, const Config& defaults) {
  if (!body.is_object()) throw Error(Errc::malformed_document, "hunt body must be a JSON object");
  HuntConfig cfg = defaults.hunt_config();
  for (const auto& [key, value] : body.items()) {
    if (key == "seeds") {
      if (!value.is_array()) throw Error(Errc::invalid_argument, "seeds must be an array of graph ids");
      for (const auto& s : value) {
        if (!s.is_string()) throw Error(Errc::invalid_argument, "seeds must be an array of graph ids");
        cfg.seed_ids.push_back(s.get<std::string>());
      }
    } else if (key == "threshold") {
      cfg.alert_threshold = detail::number_field(body, "threshold");
    } else if (key == "weights") {
      if (value.is_array() && value.size() == 3 && value[0].is_number() && value[1].is_number() &&
          value[2].is_number()) {
        cfg.weights = {value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
      } else if (value.is_object()) {
        for (const auto& [wk, _] : value.items()) {
          if (wk != "w1" && wk != "w2" && wk != "w3") throw Error(Errc::invalid_argument, "unknown weight '" + wk + "'");
        }
        if (value.contains("w1")) cfg.weights.w1 = detail::number_field(value, "w1");
        if (value.contains("w2")) cfg.weights.w2 = detail::number_field(value, "w2");
        if (value.contains("w3")) cfg.weights.w3 = detail::number_field(value, "w3");
      } else {
        throw Error(Errc::invalid_argument, "weights must be {w1,w2,w3} or a 3-element array");
      }
    } else if (key == "jaccard_threshold") {
      cfg.buckets.jaccard_threshold = detail::number_field(body, "jaccard_threshold");
    } else if (key == "signature_length") {
      cfg.buckets.signature_length = detail::count_field(body, "signature_length");
    } else if (key == "minhash_seed") {
      cfg.buckets.seed = detail::count_field(body, "minhash_seed");
    } else {
      throw Error(Errc::invalid_argument, "unknown field '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

/// Read-only JSON API over a workspace. Binds loopback unless told otherwise.
class ApiServer {
 public:
  explicit ApiServer(Workspace& ws) : ws_(ws) { routes(); }
  ~ApiServer() { stop(); }

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds `host:port`; port 0 picks a free one. Returns the bound port.
  int bind(const std::string& host = "127.0.0.1", int port = 0) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(Errc::io_failure, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
  }

  /// Serves on the bound socket until stop().
  void listen() { server_.listen_after_bind(); }

  void start() {
    thread_ = std::thread([this] { listen(); });
    server_.wait_until_ready();
  }

  void stop() {
    if (server_.is_running()) server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Server& server() noexcept { return server_; }

 private:
  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        detail::send_error(res, http_status(e.code()), to_string(e.code()), e.message());
      } catch (const json::exception& e) {
        detail::send_error(res, 400, "malformed-document", e.what());
      }
    };
  }

  void routes() {
    server_.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server_.Get("/graphs", guarded([this](const httplib::Request&, httplib::Response& res) {
                  detail::send_json(res, graph_listing_json(*ws_.corpus()));
                }));

    server_.Get(R"(/graphs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto corpus = ws_.corpus();
                  detail::send_json(res, graph_json(corpus->at(req.matches[1].str())));
                }));

    server_.Get("/buckets", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  if (ws_.corpus()->empty()) throw Error(Errc::empty_corpus, "no graphs have been ingested");
                  const auto params = detail::bucket_params_from_query(req, ws_.config().buckets);
                  const auto b = ws_.buckets(params);
                  res.set_header("X-Buckets-Recomputed", b.recomputed ? "true" : "false");
                  detail::send_json(res, buckets_json(*b.index, params));
                }));

    server_.Post("/hunt", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const auto body = req.body.empty() ? json::object() : json::parse(req.body);
                   const auto h = ws_.hunt(hunt_request(body, ws_.config()));
                   res.set_header("X-Buckets-Recomputed", h.buckets_recomputed ? "true" : "false");
                   detail::send_json(res, hunt_json(h.report));
                 }));

    server_.Get("/compare", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  if (!req.has_param("a") || !req.has_param("b")) {
                    throw Error(Errc::invalid_argument, "compare needs a= and b= graph ids");
                  }
                  Weights w = ws_.config().weights;
                  if (auto v = detail::query_double(req, "w1")) w.w1 = *v;
                  if (auto v = detail::query_double(req, "w2")) w.w2 = *v;
                  if (auto v = detail::query_double(req, "w3")) w.w3 = *v;
                  const auto params = detail::bucket_params_from_query(req, ws_.config().buckets);
                  const auto c = ws_.compare(req.get_param_value("a"), req.get_param_value("b"), params, w);
                  detail::send_json(res, comparison_json(c));
                }));
  }

  Workspace& ws_;
  httplib::Server server_;
  std::thread thread_;
};

}  // namespace crosshunt

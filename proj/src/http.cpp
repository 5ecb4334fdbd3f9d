#include <httplib.h>

#include <charconv>

#include "vital/error.hpp"
#include "vital/service.hpp"

namespace vital {

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code,
                std::string_view message) {
  send_json(res, status,
            {{"error", {{"code", std::string(code)}, {"message", std::string(message)}}}});
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), error_code_name(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

std::optional<std::string> param(const httplib::Request& req, const std::string& key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

int int_param(const httplib::Request& req, const std::string& key, int fallback) {
  auto text = param(req, key);
  if (!text) return fallback;
  int value = 0;
  auto [end, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || end != text->data() + text->size()) {
    throw Error(ErrorCode::bad_request, key + " must be an integer, got '" + *text + "'");
  }
  return value;
}

std::optional<Date> date_param(const httplib::Request& req, const std::string& key) {
  auto text = param(req, key);
  if (!text || text->empty()) return std::nullopt;
  return parse_date_param(key, *text);
}

Json json_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::bad_request, std::string("body is not valid JSON: ") + e.what());
  }
}

std::vector<InputFile> uploaded_files(const httplib::Request& req) {
  std::vector<InputFile> files;
  if (req.is_multipart_form_data()) {
    for (const auto& [field, part] : req.files) {
      files.push_back({part.filename.empty() ? part.name : part.filename, part.content});
    }
  } else if (!req.body.empty()) {
    auto name = param(req, "name");
    if (!name || name->empty()) {
      throw Error(ErrorCode::bad_request, "a raw upload needs ?name=<file name>");
    }
    files.push_back({*name, req.body});
  }
  return files;
}

FilterSpec quality_spec(const httplib::Request& req) {
  FilterSpec spec;
  spec.recency_lookback_days = int_param(req, "lookback_days", spec.recency_lookback_days);
  spec.hr_low = int_param(req, "hr_low", spec.hr_low);
  spec.hr_high = int_param(req, "hr_high", spec.hr_high);
  spec.steps_during_sleep_step_threshold =
      int_param(req, "step_threshold", spec.steps_during_sleep_step_threshold);
  spec.sleep_window_min_minutes =
      int_param(req, "sleep_window_min", spec.sleep_window_min_minutes);
  spec.min_correlation_pairs = int_param(req, "min_pairs", spec.min_correlation_pairs);
  return spec;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_request:
    case ErrorCode::invalid_config:
    case ErrorCode::parse_error:
    case ErrorCode::schema_error:
    case ErrorCode::encoding_error:
    case ErrorCode::unknown_format:
    case ErrorCode::ambiguous_format:
    case ErrorCode::unknown_stage:
    case ErrorCode::invalid_value:
    case ErrorCode::degenerate_span:
      return 400;
    case ErrorCode::unauthorized:
      return 401;
    case ErrorCode::not_found:
      return 404;
    case ErrorCode::conflict:
      return 409;
    case ErrorCode::integration_failed:
    case ErrorCode::empty_dataset:
      return 422;
    default:
      return 500;
  }
}

HttpServer::HttpServer(Service& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto& s = *server_;
  Service& svc = service_;

  s.set_pre_routing_handler([&svc](const httplib::Request& req, httplib::Response& res) {
    const auto& token = svc.config().token;
    if (!token) return httplib::Server::HandlerResponse::Unhandled;
    if (req.get_header_value("Authorization") == "Bearer " + *token) {
      return httplib::Server::HandlerResponse::Unhandled;
    }
    send_error(res, 401, error_code_name(ErrorCode::unauthorized),
               "missing or wrong bearer token");
    return httplib::Server::HandlerResponse::Handled;
  });
  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      send_error(res, 404, error_code_name(ErrorCode::not_found),
                 "no route for " + req.method + " " + req.path);
    } else {
      send_error(res, res.status, "http", httplib::status_message(res.status));
    }
  });

  s.Post("/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    const Json body = json_body(req);
    if (!body.is_object()) throw Error(ErrorCode::bad_request, "body must be an object");
    std::string tz = "UTC";
    if (auto it = body.find("timezone"); it != body.end()) {
      if (!it->is_string()) throw Error(ErrorCode::bad_request, "timezone must be a string");
      tz = it->get<std::string>();
    }
    send_json(res, 201, to_json(svc.create_session(tz)));
  }));

  s.Get(R"(/sessions/([^/]+))",
        guarded([&svc](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, to_json(svc.session(req.matches[1])));
        }));

  s.Post(R"(/sessions/([^/]+)/files)",
         guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, to_json(svc.handle_upload(req.matches[1], uploaded_files(req))));
         }));

  s.Post(R"(/sessions/([^/]+)/integrate)",
         guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           const int interval = int_param(req, "interval", WindowGrid::kDefaultIntervalMinutes);
           MergePolicy policy;
           if (auto p = param(req, "priority"); p && !p->empty()) policy = parse_priority(*p);
           std::optional<std::string> tz = param(req, "tz");
           if (tz && tz->empty()) tz.reset();
           const std::string id = svc.handle_integrate(req.matches[1], interval, policy, tz);
           Json body = svc.dataset_manifest(id);
           body["session"] = to_json(svc.session(req.matches[1]));
           send_json(res, 201, body);
         }));

  s.Get("/datasets", guarded([&svc](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, svc.list_datasets());
  }));

  s.Get(R"(/datasets/([^/]+))",
        guarded([&svc](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, svc.dataset_manifest(req.matches[1]));
        }));

  s.Delete(R"(/datasets/([^/]+))",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             svc.delete_dataset(req.matches[1]);
             send_json(res, 200, {{"deleted", std::string(req.matches[1])}});
           }));

  s.Get(R"(/datasets/([^/]+)/frames)",
        guarded([&svc](const httplib::Request& req, httplib::Response& res) {
          const std::string granularity = param(req, "granularity").value_or("window");
          send_json(res, 200,
                    svc.handle_query_frames(req.matches[1], granularity,
                                            date_param(req, "from"), date_param(req, "to")));
        }));

  s.Get(R"(/datasets/([^/]+)/quality)",
        guarded([&svc](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, svc.handle_quality(req.matches[1], quality_spec(req)));
        }));

  s.Post(R"(/datasets/([^/]+)/filter)",
         guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           Json body = json_body(req);
           if (!body.is_object()) throw Error(ErrorCode::bad_request, "body must be an object");
           std::string name = "active";
           if (auto it = body.find("name"); it != body.end()) {
             if (!it->is_string()) throw Error(ErrorCode::bad_request, "name must be a string");
             name = it->get<std::string>();
             body.erase("name");
           }
           send_json(res, 200,
                     svc.handle_filter(req.matches[1], filter_spec_from_json(body), name));
         }));

  s.Get(R"(/datasets/([^/]+)/export\.csv)",
        guarded([&svc](const httplib::Request& req, httplib::Response& res) {
          std::optional<std::string> filter = param(req, "filter");
          if (filter && filter->empty()) filter.reset();
          res.status = 200;
          res.set_content(svc.handle_export(req.matches[1], filter), "text/csv");
        }));
}

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::io_error, "cannot bind " + host);
  } else if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::io_error, "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::io_error, "cannot bind " + host + ":" + std::to_string(port));
  }
  server_->listen_after_bind();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace vital

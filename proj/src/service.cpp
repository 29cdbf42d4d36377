#include "relspace/service.hpp"

#include "relspace/error.hpp"

#include <httplib.h>

#include <iostream>
#include <regex>

namespace relspace {
namespace {

void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, ErrorKind kind, const std::string& message) {
  send(res, {status, Json{{"error", std::string(to_string(kind))}, {"message", message}}});
}

std::optional<Json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    return req.body.empty() ? Json::object() : Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    send_error(res, 400, ErrorKind::InvalidArgument, e.what());
    return std::nullopt;
  }
}

}  // namespace

std::unique_ptr<Session> make_session(const ServiceOptions& options) {
  Environment env = default_environment();
  if (!options.catalog_file.empty()) env.catalog = catalog_from_json(read_json_file(options.catalog_file));
  if (!options.workspace_file.empty()) env.workspace = read_json_file(options.workspace_file).get<Workspace>();
  if (!options.grounding_file.empty()) env.grounding = grounding_from_json(read_json_file(options.grounding_file));
  Scene scene = options.scene_file.empty() ? default_scene() : read_json_file(options.scene_file).get<Scene>();
  auto session = std::make_unique<Session>(std::move(env), std::move(scene));
  if (!options.memory_dir.empty()) session->bind_memory(options.memory_dir);
  return session;
}

void register_routes(httplib::Server& server, Session& session) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/command", [&session](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    if (!body->contains("text") || !body->at("text").is_string()) {
      send_error(res, 400, ErrorKind::InvalidArgument, "body must be {\"text\": string}");
      return;
    }
    send(res, session.command(body->at("text").get<std::string>()));
  });

  server.Post("/scene", [&session](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (body) send(res, session.move(*body));
  });

  server.Post("/cue", [&session](const httplib::Request&, httplib::Response& res) { send(res, session.cue()); });
  server.Post("/reset", [&session](const httplib::Request&, httplib::Response& res) { send(res, session.reset()); });
  server.Get("/state", [&session](const httplib::Request&, httplib::Response& res) { send(res, session.state()); });

  server.Get(R"(/model/([A-Za-z0-9_\-]+)/heatmap)", [&session](const httplib::Request& req, httplib::Response& res) {
    std::size_t w = 64, h = 64;
    if (req.has_param("grid")) {
      static const std::regex pattern(R"((\d{1,4})[xX×](\d{1,4}))");
      std::smatch m;
      const std::string grid = req.get_param_value("grid");
      if (!std::regex_match(grid, m, pattern)) {
        send_error(res, 400, ErrorKind::InvalidArgument, "grid must look like 64x48");
        return;
      }
      w = std::stoul(m[1]);
      h = std::stoul(m[2]);
    }
    send(res, session.heatmap(req.matches[1], w, h));
  });

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, 400, e.kind(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, ErrorKind::InvalidArgument, e.what());
    }
  });
}

int run_service(const ServiceOptions& options) {
  auto session = make_session(options);
  httplib::Server server;
  register_routes(server, *session);
  std::cout << "listening on http://" << options.address << ":" << options.port << "\n" << std::flush;
  if (!server.listen(options.address, options.port)) {
    std::cerr << "error: cannot listen on " << options.address << ":" << options.port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace relspace

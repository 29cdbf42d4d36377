#pragma once

#include "relspace/session.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace relspace {

struct ServiceOptions {
  std::string address = "127.0.0.1";
  int port = 8080;
  std::string catalog_file;
  std::string workspace_file;
  std::string scene_file;
  std::string grounding_file;
  std::string memory_dir;
};

/// Builds the session from the option files, falling back to the default
/// kitchen-table environment and scene for any file not given.
std::unique_ptr<Session> make_session(const ServiceOptions& options);

/// Installs the JSON routes for `session` on `server`:
///   POST /command  POST /scene  POST /cue  POST /reset
///   GET  /state    GET  /model/<relation>/heatmap?grid=WxH
void register_routes(httplib::Server& server, Session& session);

/// Blocks serving requests until the process is stopped.
int run_service(const ServiceOptions& options);

}  // namespace relspace

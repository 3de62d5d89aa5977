#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "col/error.hpp"
#include "col/knowledge_base.hpp"

namespace col {

class Session;

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

// 400 parse/protocol, 404 unknown element, 409 conflicts, 422 other domain
// errors, 500 I/O.
int http_status(ErrorCode code);

struct Answer;
// Wire form of a query answer, as served by POST /kb/query.
std::string answer_json(const Answer& answer, const std::string& goal);

// The HTTP API over one knowledge base. Handlers are plain functions of the
// request so they can be exercised without a socket; serve() wires them to a
// listener.
class Service {
 public:
  Service(std::shared_ptr<KbStore> store, std::filesystem::path kb_path,
          std::optional<std::string> initial_concept = std::nullopt);
  ~Service();

  HttpResponse create_session();
  HttpResponse post_statement(const std::string& session_id, const std::string& body);
  HttpResponse close_session(const std::string& session_id);
  HttpResponse graph() const;
  HttpResponse query(const std::string& body) const;
  HttpResponse frame(const std::string& name) const;
  HttpResponse save();

  // Dispatches on method and path the same way the listener does.
  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body);

  // Binds the listener; port 0 picks a free port. Returns the bound port or
  // throws IoError.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

  KbStore& store() { return *store_; }

 private:
  struct Entry;
  struct Server;

  std::shared_ptr<Entry> session(const std::string& id);

  std::shared_ptr<KbStore> store_;
  std::filesystem::path kb_path_;
  std::optional<std::string> initial_concept_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_session_ = 1;
  std::mutex save_mutex_;
  std::unique_ptr<Server> server_;
};

}  // namespace col

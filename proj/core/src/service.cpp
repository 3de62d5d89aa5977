#include "col/service.hpp"

#include <regex>

#include <httplib.h>

#include "codec.hpp"
#include "col/document.hpp"
#include "col/engine.hpp"
#include "col/graph.hpp"
#include "col/session.hpp"

namespace col {

using codec::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ProtocolError:
    case ErrorCode::FormatError:
      return 400;
    case ErrorCode::UnknownConcept:
    case ErrorCode::UnknownClass:
    case ErrorCode::UnknownFrame:
    case ErrorCode::UnknownReference:
    case ErrorCode::UnknownValue:
      return 404;
    case ErrorCode::ReciprocityConflict:
    case ErrorCode::Inconsistent:
    case ErrorCode::DuplicateConcept:
    case ErrorCode::DuplicateFeature:
    case ErrorCode::DuplicateValue:
    case ErrorCode::DuplicateFrame:
    case ErrorCode::InUse:
      return 409;
    case ErrorCode::IoError:
      return 500;
    default:
      return 422;
  }
}

std::string answer_json(const Answer& answer, const std::string& goal) {
  json out = codec::to_json(answer);
  out["goal"] = goal;
  return out.dump();
}

struct Service::Entry {
  std::mutex mutex;
  Session session;
};

struct Service::Server {
  httplib::Server http;
};

namespace {

HttpResponse ok(const json& body) { return {200, body.dump()}; }

HttpResponse failure(const Error& e) {
  json body{{"error", std::string(error_name(e.code()))}, {"message", e.detail()}};
  if (const auto* invalid = dynamic_cast<const InvalidKbError*>(&e)) {
    json list = json::array();
    for (const auto& v : invalid->violations()) {
      list.push_back({{"element", v.element}, {"invariant", v.invariant}, {"detail", v.detail}});
    }
    body["violations"] = list;
  }
  return {http_status(e.code()), body.dump()};
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::FormatError, "/: malformed JSON at byte " + std::to_string(e.byte));
  }
}

json utterance_json(const MachineUtterance& u) {
  json out{{"kind", std::string(to_string(u.kind))}, {"text", u.text}};
  out["proposal"] = nullptr;
  if (u.proposal) {
    out["proposal"] = {{"noun", u.proposal->noun},
                       {"concept", u.proposal->concept_name ? json(*u.proposal->concept_name) : json(nullptr)}};
  }
  out["answer"] = u.answer ? codec::to_json(*u.answer) : json(nullptr);
  out["parse_error"] = nullptr;
  if (u.parse_error) {
    out["parse_error"] = {{"line", u.parse_error->line},
                          {"column", u.parse_error->column},
                          {"expected", u.parse_error->expected},
                          {"message", u.parse_error->message}};
  }
  return out;
}

template <class Fn>
HttpResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return failure(e);
  }
}

}  // namespace

Service::Service(std::shared_ptr<KbStore> store, std::filesystem::path kb_path,
                 std::optional<std::string> initial_concept)
    : store_(std::move(store)), kb_path_(std::move(kb_path)), initial_concept_(std::move(initial_concept)) {}

Service::~Service() { stop(); }

std::shared_ptr<Service::Entry> Service::session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownReference, "no session " + id);
  return it->second;
}

HttpResponse Service::create_session() {
  return guarded([&] {
    std::lock_guard lock(sessions_mutex_);
    const std::string id = "s" + std::to_string(next_session_);
    auto entry = std::shared_ptr<Entry>(new Entry{{}, Session(id, store_, initial_concept_)});
    ++next_session_;
    sessions_.emplace(id, entry);
    return ok({{"session_id", id}});
  });
}

HttpResponse Service::post_statement(const std::string& session_id, const std::string& body) {
  return guarded([&] {
    const json request = parse_body(body);
    const codec::Reader r(request, "");
    const std::string text = r.at("text").str();
    auto entry = session(session_id);
    std::lock_guard lock(entry->mutex);
    const auto before = store_->snapshot();
    const MachineUtterance reply = entry->session.step(text);
    const auto after = store_->snapshot();
    json out{{"machine_reply", utterance_json(reply)},
             {"kb_delta", codec::to_json(diff(*before, *after))},
             {"revision", after->revision()}};
    return HttpResponse{reply.parse_error ? 400 : 200, out.dump()};
  });
}

HttpResponse Service::close_session(const std::string& session_id) {
  return guarded([&] {
    session(session_id);
    const HttpResponse saved = save();
    if (saved.status != 200) return saved;
    std::lock_guard lock(sessions_mutex_);
    sessions_.erase(session_id);
    return ok({{"closed", session_id}, {"revision", store_->snapshot()->revision()}});
  });
}

HttpResponse Service::graph() const {
  return guarded([&] { return HttpResponse{200, graph_json(export_graph(*store_->snapshot()))}; });
}

HttpResponse Service::query(const std::string& body) const {
  return guarded([&] {
    const json request = parse_body(body);
    const codec::Reader r(request, "");
    const auto kb = store_->snapshot();
    FactSet facts;
    static const json no_facts = json::object();
    const codec::Reader given = r.has("facts") ? r.at("facts") : codec::Reader(no_facts, "/facts");
    for (const auto& k : given.keys()) {
      const Binding b = resolve_binding(*kb, k, given.at(k.c_str()).value());
      facts.set(b.feature, b.value);
    }
    const std::string goal = kb->feature(r.at("goal").str()).name;
    return HttpResponse{200, answer_json(col::query(*kb, facts, goal), goal)};
  });
}

HttpResponse Service::frame(const std::string& name) const {
  return guarded([&] { return ok(codec::frame_table(store_->snapshot()->frame(name))); });
}

HttpResponse Service::save() {
  return guarded([&] {
    std::lock_guard lock(save_mutex_);
    const auto kb = store_->snapshot();
    save_kb(*kb, kb_path_);
    return ok({{"saved", kb_path_.string()}, {"revision", kb->revision()}});
  });
}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  static const std::regex statements("^/sessions/([^/]+)/statements$");
  static const std::regex one_session("^/sessions/([^/]+)$");
  static const std::regex one_frame("^/kb/frames/(.+)$");
  std::smatch m;
  if (method == "POST" && path == "/sessions") return create_session();
  if (method == "POST" && std::regex_match(path, m, statements)) return post_statement(m[1], body);
  if (method == "DELETE" && std::regex_match(path, m, one_session)) return close_session(m[1]);
  if (method == "GET" && path == "/kb/graph") return graph();
  if (method == "POST" && path == "/kb/query") return query(body);
  if (method == "GET" && std::regex_match(path, m, one_frame)) return frame(m[1]);
  if (method == "POST" && path == "/kb/save") return save();
  return {404, json{{"error", "NotFound"}, {"message", method + " " + path}}.dump()};
}

int Service::bind(const std::string& host, int port) {
  server_ = std::make_unique<Server>();
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  auto& http = server_->http;
  http.Post("/sessions", route);
  http.Post(R"(/sessions/[^/]+/statements)", route);
  http.Delete(R"(/sessions/[^/]+)", route);
  http.Get("/kb/graph", route);
  http.Post("/kb/query", route);
  http.Get(R"(/kb/frames/.+)", route);
  http.Post("/kb/save", route);
  const int bound = port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    server_.reset();
    throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void Service::listen() {
  if (!server_) throw Error(ErrorCode::IoError, "service is not bound");
  server_->http.listen_after_bind();
}

void Service::stop() {
  if (server_) server_->http.stop();
}

}  // namespace col

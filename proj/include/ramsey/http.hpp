#pragma once

// JSON routes for GameService:
//   POST   /api/games              {"t":3}            -> {"gameId","state"}
//   GET    /api/games/{id}                           -> state
//   POST   /api/games/{id}/moves   {"u":3,"v":"fresh"} -> {"accepted","engineMove","state","threats","outcome"}
//   DELETE /api/games/{id}

#include <string>

#include <httplib.h>
#include <json.hpp>

#include "ramsey/service.hpp"

namespace ramsey {

inline void install_routes(httplib::Server& server, GameService& service) {
  auto send = [](httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };
  auto guarded = [send](auto&& fn) {
    return [send, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ServiceError& e) {
        send(res, e.status(), {{"error", e.what()}});
      } catch (const nlohmann::json::exception& e) {
        send(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
      } catch (const std::exception& e) {
        send(res, 500, {{"error", e.what()}});
      }
    };
  };
  auto body_of = [](const httplib::Request& req) {
    return req.body.empty() ? nlohmann::json::object() : nlohmann::json::parse(req.body);
  };

  server.Post("/api/games", guarded([&service, send, body_of](const httplib::Request& req, httplib::Response& res) {
    auto body = body_of(req);
    int t = body.value("t", 3);
    send(res, 201, service.create(t));
  }));
  server.Get(R"(/api/games/([^/]+))", guarded([&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, service.get(req.matches[1]));
  }));
  server.Post(R"(/api/games/([^/]+)/moves)",
              guarded([&service, send, body_of](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.move(req.matches[1], body_of(req)));
              }));
  server.Delete(R"(/api/games/([^/]+))", guarded([&service, send](const httplib::Request& req, httplib::Response& res) {
    service.remove(req.matches[1]);
    send(res, 200, {{"deleted", std::string(req.matches[1])}});
  }));
}

}  // namespace ramsey

#pragma once

// In-memory games against the engine. The engine plays P1 with the scripted
// strategy when t = 3 and with the solver otherwise; the human plays P2.

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "ramsey/core.hpp"
#include "ramsey/position_io.hpp"
#include "ramsey/solver.hpp"
#include "ramsey/strategy.hpp"

namespace ramsey {

class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct EngineReply {
  MoveSpec move;
  StrategyState next;
};

// Chooses P1's move. Falls back to the solver if the script cannot continue.
inline EngineReply engine_move(Strategy& strategy, const Position& p, const StrategyState& s) {
  if (p.t() == 3) {
    try {
      auto sm = strategy.next_move(p, s);
      return {sm.move, sm.next};
    } catch (const VerificationGap&) {
    }
  }
  StrategyState next = s;
  next.phase = Phase::FALLBACK;
  next.step = 0;
  next.roles.clear();
  return {Solver({16, 20'000'000}).best_move(p), next};
}

inline nlohmann::json edge_list(const std::vector<Edge>& edges) {
  nlohmann::json out = nlohmann::json::array();
  for (const Edge& e : edges) out.push_back({e.u, e.v});
  return out;
}

class GameService {
 public:
  explicit GameService(StrategyOptions options = {}) : strategy_(options) {}

  // Creates a game; the engine makes its first move before returning.
  nlohmann::json create(int t) {
    if (t < 1 || t > 3) throw ServiceError(400, "t must be 1, 2 or 3");
    std::lock_guard lock(mutex_);
    std::string id = std::to_string(++counter_);
    Game g{new_game(t), {}, {}};
    reply(g);
    auto state = state_json(g);
    games_.emplace(id, std::move(g));
    return {{"gameId", id}, {"state", state}};
  }

  nlohmann::json get(const std::string& id) {
    std::lock_guard lock(mutex_);
    return state_json(find(id));
  }

  // Applies the human's move, then the engine's reply when the game goes on.
  nlohmann::json move(const std::string& id, const nlohmann::json& body) {
    std::lock_guard lock(mutex_);
    Game& g = find(id);
    if (is_terminal(g.position)) throw ServiceError(409, "game is over");
    if (g.position.turn() != PlayerId::P2) throw ServiceError(409, "not your turn");
    MoveSpec m = parse_body(body);
    try {
      check_legal(g.position, m);
    } catch (const GameError& e) {
      throw ServiceError(400, e.what());
    }
    g.position = apply(g.position, m);
    g.transcript.push_back("P2: " + to_string(m));
    nlohmann::json engine = nullptr;
    if (!is_terminal(g.position)) engine = reply(g);
    auto state = state_json(g);
    return {{"accepted", true},
            {"engineMove", engine},
            {"state", state},
            {"threats", state["threats"]},
            {"outcome", state["outcome"]}};
  }

  void remove(const std::string& id) {
    std::lock_guard lock(mutex_);
    if (!games_.erase(id)) throw ServiceError(404, "unknown game " + id);
  }

 private:
  struct Game {
    Position position;
    StrategyState state;
    std::vector<std::string> transcript;
  };

  Game& find(const std::string& id) {
    auto it = games_.find(id);
    if (it == games_.end()) throw ServiceError(404, "unknown game " + id);
    return it->second;
  }

  nlohmann::json reply(Game& g) {
    EngineReply r;
    try {
      r = engine_move(strategy_, g.position, g.state);
    } catch (const GameError& e) {
      throw ServiceError(500, std::string("engine failed: ") + e.what());
    }
    Edge e = resolve(g.position, r.move);
    g.position = apply(g.position, r.move);
    g.state = r.next;
    g.transcript.push_back("P1: " + to_string(r.move));
    return {{"u", e.u}, {"v", e.v}, {"text", to_string(r.move)}};
  }

  static MoveSpec parse_body(const nlohmann::json& body) {
    if (!body.is_object() || !body.contains("u") || !body.contains("v"))
      throw ServiceError(400, "move must be an object with fields u and v");
    auto endpoint = [](const nlohmann::json& j) {
      if (j.is_string() && (j == "fresh" || j == "new")) return Endpoint::new_vertex();
      if (j.is_number_integer() && j.get<long long>() >= 0 && j.get<long long>() < kMaxVertices)
        return Endpoint::existing(j.get<int>());
      if (j.is_number_integer()) throw ServiceError(400, "vertex " + j.dump() + " does not exist");
      throw ServiceError(400, "endpoint must be a vertex id or \"fresh\"");
    };
    return {endpoint(body["u"]), endpoint(body["v"]), PlayerId::P2};
  }

  static nlohmann::json state_json(const Game& g) {
    const Position& p = g.position;
    nlohmann::json edges = position_to_json(p)["edges"];
    bool over = is_terminal(p);
    return {{"t", p.t()},
            {"vertices", p.vertex_count()},
            {"edges", edges},
            {"turn", over ? nlohmann::json(nullptr) : nlohmann::json(to_string(p.turn()))},
            {"phase", std::string(to_string(g.state.phase))},
            {"outcome", std::string(to_string(outcome(p)))},
            {"threats",
             {{"P1", edge_list(over ? std::vector<Edge>{} : threats(p, PlayerId::P1))},
              {"P2", edge_list(over ? std::vector<Edge>{} : threats(p, PlayerId::P2))}}},
            {"transcript", g.transcript}};
  }

  Strategy strategy_;
  std::mutex mutex_;
  std::map<std::string, Game> games_;
  long long counter_ = 0;
};

}  // namespace ramsey

#pragma once

// Position JSON:
//   {"t":3,"turn":"P1","edges":[{"u":0,"v":1,"color":"P1"}, ...], "free":false}
// "free" is optional; when true the turn/edge-count check is skipped.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ramsey/core.hpp"

namespace ramsey {

inline nlohmann::json position_to_json(const Position& p) {
  nlohmann::json edges = nlohmann::json::array();
  for (PlayerId who : {PlayerId::P1, PlayerId::P2})
    for (const Edge& e : p.edges(who)) edges.push_back({{"u", e.u}, {"v", e.v}, {"color", to_string(who)}});
  std::sort(edges.begin(), edges.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
    return std::pair(a["u"].get<int>(), a["v"].get<int>()) < std::pair(b["u"].get<int>(), b["v"].get<int>());
  });
  nlohmann::json out = {{"t", p.t()}, {"turn", to_string(p.turn())}, {"edges", edges}};
  if (p.is_free()) out["free"] = true;
  return out;
}

inline Position position_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw GameError("position must be a JSON object");
    int t = j.at("t").get<int>();
    auto turn = parse_player(j.at("turn").get<std::string>());
    if (!turn) throw GameError("turn must be \"P1\" or \"P2\"");
    bool free = j.value("free", false);
    std::vector<std::pair<Edge, PlayerId>> edges;
    for (const auto& e : j.at("edges")) {
      auto color = parse_player(e.at("color").get<std::string>());
      if (!color) throw GameError("edge color must be \"P1\" or \"P2\"");
      int u = e.at("u").get<int>(), v = e.at("v").get<int>();
      if (u < 0 || v < 0) throw GameError("vertex ids must be non-negative");
      edges.emplace_back(Edge(u, v), *color);
    }
    return Position::from_edges(t, *turn, edges, free);
  } catch (const nlohmann::json::exception& e) {
    throw GameError(std::string("malformed position JSON: ") + e.what());
  }
}

inline Position load_position(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GameError("cannot open position file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GameError("malformed position JSON in " + path + ": " + e.what());
  }
  return position_from_json(j);
}

inline void save_position(const Position& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GameError("cannot write " + path);
  out << position_to_json(p).dump(2) << "\n";
}

}  // namespace ramsey

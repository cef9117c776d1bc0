#pragma once

// Game model for the strong Ramsey game on the infinite complete graph with
// target K^_{2,t} (K_{2,t} plus the edge joining its two main vertices).
//
// Only the touched part of the board is stored. Vertices 0..n-1 each carry at
// least one colored edge; every other board vertex is fresh and all fresh
// vertices are interchangeable.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ramsey {

inline constexpr int kMaxVertices = 32;

using VertexId = int;
using VertexMask = std::uint32_t;

enum class PlayerId : std::uint8_t { P1 = 0, P2 = 1 };

constexpr PlayerId opponent(PlayerId p) { return p == PlayerId::P1 ? PlayerId::P2 : PlayerId::P1; }
constexpr int index(PlayerId p) { return static_cast<int>(p); }

inline std::string_view to_string(PlayerId p) { return p == PlayerId::P1 ? "P1" : "P2"; }

inline std::optional<PlayerId> parse_player(std::string_view s) {
  if (s == "P1" || s == "p1") return PlayerId::P1;
  if (s == "P2" || s == "p2") return PlayerId::P2;
  return std::nullopt;
}

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  Edge() = default;
  Edge(VertexId a, VertexId b) : u(std::min(a, b)), v(std::max(a, b)) {
    if (a == b) throw GameError("edge endpoints must differ");
  }
  auto operator<=>(const Edge&) const = default;
};

inline std::string to_string(const Edge& e) { return std::to_string(e.u) + "-" + std::to_string(e.v); }

// One endpoint of a claimed edge: an existing touched vertex or a fresh one.
struct Endpoint {
  bool fresh = true;
  VertexId id = -1;

  static Endpoint new_vertex() { return {true, -1}; }
  static Endpoint existing(VertexId v) { return {false, v}; }
  auto operator<=>(const Endpoint&) const = default;
};

struct MoveSpec {
  Endpoint first;
  Endpoint second;
  PlayerId mover = PlayerId::P1;

  int fresh_count() const { return int(first.fresh) + int(second.fresh); }
  auto operator<=>(const MoveSpec&) const = default;

  static MoveSpec claim(VertexId u, VertexId v, PlayerId who) {
    return {Endpoint::existing(u), Endpoint::existing(v), who};
  }
  static MoveSpec claim_fresh(VertexId u, PlayerId who) {
    return {Endpoint::existing(u), Endpoint::new_vertex(), who};
  }
  static MoveSpec fresh_pair(PlayerId who) { return {Endpoint::new_vertex(), Endpoint::new_vertex(), who}; }
};

// Text form used by transcripts and certificates: "3-7", "3-new", "new-new".
// Existing endpoints come first, in ascending order.
inline std::string to_string(const MoveSpec& m) {
  auto text = [](const Endpoint& e) { return e.fresh ? std::string("new") : std::to_string(e.id); };
  Endpoint a = m.first, b = m.second;
  if (a.fresh && !b.fresh) std::swap(a, b);
  if (!a.fresh && !b.fresh && a.id > b.id) std::swap(a, b);
  return text(a) + "-" + text(b);
}

inline MoveSpec parse_move(std::string_view text, PlayerId mover) {
  auto dash = text.find('-');
  if (dash == std::string_view::npos) throw GameError("move must look like '3-7', '3-new' or 'new-new'");
  auto endpoint = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s == "new" || s == "fresh") return Endpoint::new_vertex();
    if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw GameError("bad endpoint '" + std::string(s) + "'");
    return Endpoint::existing(std::stoi(std::string(s)));
  };
  return {endpoint(text.substr(0, dash)), endpoint(text.substr(dash + 1)), mover};
}

enum class GameOutcome { P1Win, P2Win, Ongoing };

inline std::string_view to_string(GameOutcome o) {
  switch (o) {
    case GameOutcome::P1Win: return "P1Win";
    case GameOutcome::P2Win: return "P2Win";
    default: return "Ongoing";
  }
}

class Position;
inline Position apply(const Position& p, const MoveSpec& m);
inline Position undo(const Position& p, const MoveSpec& m);
inline bool wins(const Position& p, PlayerId who);

// The touched subgraph of the board plus whose turn it is.
class Position {
 public:
  explicit Position(int t = 3) : t_(t) {
    if (t < 1) throw GameError("target parameter t must be at least 1");
  }

  int t() const { return t_; }
  PlayerId turn() const { return turn_; }
  int vertex_count() const { return n_; }
  bool is_free() const { return free_; }
  std::size_t history_size() const { return history_.size(); }

  VertexMask neighbors(PlayerId who, VertexId v) const { return adj_[index(who)][v]; }

  std::optional<PlayerId> color(VertexId u, VertexId v) const {
    if (adj_[0][u] >> v & 1u) return PlayerId::P1;
    if (adj_[1][u] >> v & 1u) return PlayerId::P2;
    return std::nullopt;
  }
  bool is_colored(VertexId u, VertexId v) const { return ((adj_[0][u] | adj_[1][u]) >> v) & 1u; }

  int edge_count(PlayerId who) const { return edges_[index(who)]; }
  int edge_count() const { return edges_[0] + edges_[1]; }

  std::vector<Edge> edges(PlayerId who) const {
    std::vector<Edge> out;
    for (VertexId u = 0; u < n_; ++u)
      for (VertexMask m = adj_[index(who)][u] >> (u + 1); m; m &= m - 1) out.emplace_back(u, u + 1 + std::countr_zero(m));
    return out;
  }

  // Builds a position from an explicit edge list. Vertex ids must be
  // contiguous from 0. Unless `free` is set, the turn must agree with the edge
  // counts (P1 moves first and players alternate).
  static Position from_edges(int t, PlayerId turn, const std::vector<std::pair<Edge, PlayerId>>& edges,
                             bool free = false) {
    Position p(t);
    p.turn_ = turn;
    p.free_ = free;
    int n = 0;
    for (const auto& [e, who] : edges) {
      if (e.u < 0 || e.v >= kMaxVertices) throw GameError("vertex id out of range 0.." + std::to_string(kMaxVertices - 1));
      n = std::max(n, e.v + 1);
    }
    p.n_ = n;
    for (const auto& [e, who] : edges) {
      if (p.is_colored(e.u, e.v)) throw GameError("edge " + to_string(e) + " listed twice");
      p.set_edge(e.u, e.v, who);
    }
    for (VertexId v = 0; v < n; ++v)
      if ((p.adj_[0][v] | p.adj_[1][v]) == 0) throw GameError("vertex ids must be contiguous; vertex " + std::to_string(v) + " is untouched");
    if (!free) {
      int diff = p.edges_[0] - p.edges_[1];
      if (diff != 0 && diff != 1) throw GameError("edge counts are not reachable by alternating play");
      if ((diff == 1) != (turn == PlayerId::P2)) throw GameError("turn does not match edge counts");
    }
    if (wins(p, PlayerId::P1) && wins(p, PlayerId::P2)) throw GameError("both players hold a completed copy");
    return p;
  }

  bool operator==(const Position& o) const {
    return t_ == o.t_ && turn_ == o.turn_ && n_ == o.n_ && adj_ == o.adj_ && history_ == o.history_;
  }

 private:
  friend Position apply(const Position&, const MoveSpec&);
  friend Position undo(const Position&, const MoveSpec&);

  void set_edge(VertexId u, VertexId v, PlayerId who) {
    adj_[index(who)][u] |= VertexMask{1} << v;
    adj_[index(who)][v] |= VertexMask{1} << u;
    ++edges_[index(who)];
  }
  void clear_edge(VertexId u, VertexId v, PlayerId who) {
    adj_[index(who)][u] &= ~(VertexMask{1} << v);
    adj_[index(who)][v] &= ~(VertexMask{1} << u);
    --edges_[index(who)];
  }

  struct Played {
    Edge edge;
    std::uint8_t fresh = 0;
    bool operator==(const Played&) const = default;
  };

  int t_ = 3;
  PlayerId turn_ = PlayerId::P1;
  int n_ = 0;
  bool free_ = false;
  std::array<int, 2> edges_{0, 0};
  std::array<std::array<VertexMask, kMaxVertices>, 2> adj_{};
  std::vector<Played> history_;
};

inline Position new_game(int t) {
  if (t < 1) throw GameError("target parameter t must be at least 1");
  return Position(t);
}

// Does `who` hold a K^_{t}: an edge whose endpoints have >= t common neighbours?
inline bool wins(const Position& p, PlayerId who) {
  for (VertexId u = 0; u < p.vertex_count(); ++u) {
    VertexMask nu = p.neighbors(who, u);
    for (VertexMask m = nu >> (u + 1); m; m &= m - 1) {
      VertexId v = u + 1 + std::countr_zero(m);
      if (std::popcount(nu & p.neighbors(who, v)) >= p.t()) return true;
    }
  }
  return false;
}

// Would claiming the uncolored pair uv give `who` a copy that uses uv?
inline bool completes(const Position& p, PlayerId who, VertexId u, VertexId v) {
  VertexMask nu = p.neighbors(who, u), nv = p.neighbors(who, v);
  VertexMask both = nu & nv;
  if (std::popcount(both) >= p.t()) return true;  // uv as the main edge
  // uv as a leaf edge: the other main w is adjacent to both u and v.
  for (VertexMask m = both; m; m &= m - 1) {
    VertexId w = std::countr_zero(m);
    if (std::popcount(nv & p.neighbors(who, w)) + 1 >= p.t()) return true;
    if (std::popcount(nu & p.neighbors(who, w)) + 1 >= p.t()) return true;
  }
  return false;
}

// One-move lookahead: uncolored pairs of touched vertices whose claim by `who`
// completes a copy of the target. Never involves a fresh vertex, since every
// vertex of K^_{2,t} minus an edge still has degree >= 1.
inline std::vector<Edge> winning_moves(const Position& p, PlayerId who) {
  std::vector<Edge> out;
  for (VertexId u = 0; u < p.vertex_count(); ++u)
    for (VertexId v = u + 1; v < p.vertex_count(); ++v)
      if (!p.is_colored(u, v) && completes(p, who, u, v)) out.emplace_back(u, v);
  return out;
}

inline bool has_winning_move(const Position& p, PlayerId who) {
  for (VertexId u = 0; u < p.vertex_count(); ++u)
    for (VertexId v = u + 1; v < p.vertex_count(); ++v)
      if (!p.is_colored(u, v) && completes(p, who, u, v)) return true;
  return false;
}

// Threat edges by enumerating copies of K^_{2,t} minus one edge whose missing
// edge is unclaimed. Returns the same set as winning_moves(); kept as a
// separate implementation so the two can be checked against each other.
inline std::vector<Edge> threats(const Position& p, PlayerId who) {
  const int n = p.vertex_count();
  auto mine = [&](VertexId a, VertexId b) { return p.color(a, b) == who; };
  auto open = [&](VertexId a, VertexId b) { return !p.is_colored(a, b); };
  std::vector<Edge> out;
  for (VertexId m1 = 0; m1 < n; ++m1) {
    for (VertexId m2 = m1 + 1; m2 < n; ++m2) {
      int common = 0;
      for (VertexId w = 0; w < n; ++w)
        if (w != m1 && w != m2 && mine(w, m1) && mine(w, m2)) ++common;
      if (open(m1, m2) && common >= p.t()) out.emplace_back(m1, m2);
      if (!mine(m1, m2) || common < p.t() - 1) continue;
      for (VertexId w = 0; w < n; ++w) {
        if (w == m1 || w == m2) continue;
        if (mine(w, m1) && open(w, m2)) out.emplace_back(w, m2);
        if (mine(w, m2) && open(w, m1)) out.emplace_back(w, m1);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline int degree(const Position& p, PlayerId who, VertexId v) {
  if (v < 0 || v >= p.vertex_count()) throw GameError("vertex " + std::to_string(v) + " out of range");
  return std::popcount(p.neighbors(who, v));
}

inline GameOutcome outcome(const Position& p) {
  bool w1 = wins(p, PlayerId::P1), w2 = wins(p, PlayerId::P2);
  if (w1 && w2) throw GameError("corrupt position: both players hold a completed copy");
  if (w1) return GameOutcome::P1Win;
  if (w2) return GameOutcome::P2Win;
  return GameOutcome::Ongoing;
}

inline bool is_terminal(const Position& p) { return wins(p, PlayerId::P1) || wins(p, PlayerId::P2); }

// Resolves the endpoints a move would touch, allocating fresh ids in order of
// appearance starting at n.
inline Edge resolve(const Position& p, const MoveSpec& m) {
  VertexId next = p.vertex_count();
  auto id = [&](const Endpoint& e) { return e.fresh ? next++ : e.id; };
  VertexId a = id(m.first);
  VertexId b = id(m.second);
  return Edge(a, b);
}

inline void check_legal(const Position& p, const MoveSpec& m) {
  if (m.mover != p.turn()) throw GameError(std::string("it is ") + std::string(to_string(p.turn())) + "'s turn");
  for (const Endpoint* e : {&m.first, &m.second})
    if (!e->fresh && (e->id < 0 || e->id >= p.vertex_count()))
      throw GameError("vertex " + std::to_string(e->id) + " does not exist");
  if (!m.first.fresh && !m.second.fresh) {
    if (m.first.id == m.second.id) throw GameError("edge endpoints must differ");
    if (p.is_colored(m.first.id, m.second.id))
      throw GameError("edge " + to_string(Edge(m.first.id, m.second.id)) + " is already taken");
  }
  if (p.vertex_count() + m.fresh_count() > kMaxVertices) throw GameError("vertex limit reached");
  if (is_terminal(p)) throw GameError("game is over");
}

inline Position apply(const Position& p, const MoveSpec& m) {
  check_legal(p, m);
  Position q = p;
  Edge e = resolve(p, m);
  q.n_ += m.fresh_count();
  q.set_edge(e.u, e.v, m.mover);
  q.turn_ = opponent(p.turn_);
  q.history_.push_back({e, static_cast<std::uint8_t>(m.fresh_count())});
  return q;
}

inline Position undo(const Position& p, const MoveSpec& m) {
  if (p.history_.empty()) throw GameError("nothing to undo");
  const auto& last = p.history_.back();
  if (m.mover != opponent(p.turn_) || m.fresh_count() != last.fresh)
    throw GameError("undo does not match the last move");
  Position q = p;
  q.clear_edge(last.edge.u, last.edge.v, m.mover);
  q.n_ -= last.fresh;
  q.turn_ = m.mover;
  q.history_.pop_back();
  return q;
}

// Bitmask of touched vertices.
inline VertexMask vertex_mask(const Position& p) {
  return p.vertex_count() == 32 ? ~VertexMask{0} : (VertexMask{1} << p.vertex_count()) - 1;
}

// Every legal move type for the side to move: uncolored existing pairs, one
// existing-fresh move per vertex, and the single fresh-fresh move.
inline std::vector<MoveSpec> legal_moves(const Position& p) {
  std::vector<MoveSpec> out;
  const int n = p.vertex_count();
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (!p.is_colored(u, v)) out.push_back(MoveSpec::claim(u, v, p.turn()));
  if (n < kMaxVertices)
    for (VertexId u = 0; u < n; ++u) out.push_back(MoveSpec::claim_fresh(u, p.turn()));
  if (n + 2 <= kMaxVertices) out.push_back(MoveSpec::fresh_pair(p.turn()));
  return out;
}

}  // namespace ramsey

#pragma once

// P1's scripted strategy for t = 3 as a phase machine.
//
//   OPENING -> TRIANGLE | MAINLEM | SPCASE1 | CASE_C | FALLBACK
//   TRIANGLE, MAINLEM, SPCASE1, CASE_C -> END_POSITION -> FINISH_DOUBLE_THREAT
//
// Every tie is broken by the canonical labelling of (position, roles), so the
// chosen move depends only on the isomorphism class of the input. A phase
// whose preconditions fail raises VerificationGap instead of guessing.

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ramsey/core.hpp"
#include "ramsey/solver.hpp"
#include "ramsey/symmetry.hpp"

namespace ramsey {

class VerificationGap : public GameError {
 public:
  using GameError::GameError;
};

enum class Phase { OPENING, TRIANGLE, MAINLEM, SPCASE1, CASE_C, END_POSITION, FINISH_DOUBLE_THREAT, FALLBACK };

inline std::string_view to_string(Phase ph) {
  switch (ph) {
    case Phase::OPENING: return "OPENING";
    case Phase::TRIANGLE: return "TRIANGLE";
    case Phase::MAINLEM: return "MAINLEM";
    case Phase::SPCASE1: return "SPCASE1";
    case Phase::CASE_C: return "CASE_C";
    case Phase::END_POSITION: return "END_POSITION";
    case Phase::FINISH_DOUBLE_THREAT: return "FINISH_DOUBLE_THREAT";
    default: return "FALLBACK";
  }
}

inline constexpr std::string_view kPhaseLetters = "OTMSCEFX";

struct StrategyState {
  Phase phase = Phase::OPENING;
  int step = 0;
  char variant = 0;  // CASE_C line: 'A', 'B' or 'C'
  RoleMap roles;

  // Short label such as "O3", "C2A" or "E0"; together with the role-annotated
  // canonical key it identifies a node of the strategy tree.
  std::string tag() const {
    std::string s(1, kPhaseLetters[static_cast<int>(phase)]);
    s += std::to_string(step);
    if (variant) s += variant;
    return s;
  }

  static StrategyState from_tag(std::string_view tag, RoleMap roles) {
    StrategyState s;
    auto pos = kPhaseLetters.find(tag.empty() ? '?' : tag[0]);
    if (pos == std::string_view::npos || tag.size() < 2) throw GameError("bad strategy tag '" + std::string(tag) + "'");
    s.phase = static_cast<Phase>(pos);
    std::size_t i = 1;
    int step = 0;
    while (i < tag.size() && tag[i] >= '0' && tag[i] <= '9') step = step * 10 + (tag[i++] - '0');
    s.step = step;
    if (i < tag.size()) s.variant = tag[i++];
    if (i != tag.size()) throw GameError("bad strategy tag '" + std::string(tag) + "'");
    s.roles = roles;
    return s;
  }

  bool operator==(const StrategyState&) const = default;
};

enum class OpeningClass { GENERIC, CRITICAL_A, CRITICAL_B, CRITICAL_C, FALLBACK };

inline std::string_view to_string(OpeningClass c) {
  switch (c) {
    case OpeningClass::GENERIC: return "GENERIC";
    case OpeningClass::CRITICAL_A: return "CRITICAL_A";
    case OpeningClass::CRITICAL_B: return "CRITICAL_B";
    case OpeningClass::CRITICAL_C: return "CRITICAL_C";
    default: return "FALLBACK";
  }
}

struct StrategyMove {
  MoveSpec move;
  StrategyState next;
  bool immediate_win = false;
  bool fallback = false;
};

struct StrategyOptions {
  int bound = 24;                       // ply budget for the whole game
  long long fallback_budget = 5'000'000;
  bool allow_fallback = true;
};

namespace detail {

// Canonical ranks of the vertices of (p, roles), for tie-breaking.
struct Ranker {
  std::vector<int> label;
  Ranker(const Position& p, const RoleMap& roles) : label(canonical_form(p, roles).label) {}
  int operator()(VertexId v) const { return label[v]; }
  VertexId min_of(VertexMask m) const {
    VertexId best = -1;
    for (; m; m &= m - 1) {
      VertexId v = std::countr_zero(m);
      if (best < 0 || label[v] < label[best]) best = v;
    }
    return best;
  }
  std::pair<int, int> rank(const Edge& e) const {
    return {std::min(label[e.u], label[e.v]), std::max(label[e.u], label[e.v])};
  }
};

inline VertexMask bit(VertexId v) { return VertexMask{1} << v; }

inline bool holds(const Position& p, PlayerId who, VertexId u, VertexId v) { return p.color(u, v) == who; }

// Triangle a,b,c plus pendant ad and nothing else in P1's colour.
struct TrianglePendant {
  VertexId a, b, c, d;
};

inline std::optional<TrianglePendant> triangle_pendant(const Position& p) {
  if (p.edge_count(PlayerId::P1) != 4) return std::nullopt;
  for (VertexId d = 0; d < p.vertex_count(); ++d) {
    if (degree(p, PlayerId::P1, d) != 1) continue;
    VertexId a = std::countr_zero(p.neighbors(PlayerId::P1, d));
    VertexMask rest = p.neighbors(PlayerId::P1, a) & ~bit(d);
    if (std::popcount(rest) != 2) continue;
    VertexId b = std::countr_zero(rest), c = 31 - std::countl_zero(rest);
    if (holds(p, PlayerId::P1, b, c)) return TrianglePendant{a, b, c, d};
  }
  return std::nullopt;
}

// Does `who` hold an edge from v to some m where v and m have >= 2 common
// neighbours, i.e. a K^_{2,2} with main vertex v?
inline bool is_main_of_k22(const Position& p, PlayerId who, VertexId v) {
  for (VertexMask m = p.neighbors(who, v); m; m &= m - 1) {
    VertexId w = std::countr_zero(m);
    if (std::popcount(p.neighbors(who, v) & p.neighbors(who, w)) >= 2) return true;
  }
  return false;
}

}  // namespace detail

// Returns the safe main vertex for the end-position phase: one that is not a
// main vertex of any K^_{2,2} in P2's colour, preferring the smaller rank.
inline VertexId select_safe_main(const Position& p, std::pair<VertexId, VertexId> mains, const RoleMap& roles = {}) {
  detail::Ranker rank(p, roles);
  auto [x, y] = mains;
  if (rank(y) < rank(x)) std::swap(x, y);
  if (!detail::is_main_of_k22(p, PlayerId::P2, x)) return x;
  if (!detail::is_main_of_k22(p, PlayerId::P2, y)) return y;
  throw VerificationGap("both main vertices are main vertices of a P2 K^_{2,2}");
}

class Strategy {
 public:
  explicit Strategy(StrategyOptions options = {}) : options_(options) {}

  const StrategyOptions& options() const { return options_; }

  StrategyMove next_move(const Position& p, const StrategyState& s) {
    if (p.t() != 3) throw GameError("the scripted strategy only covers t = 3");
    if (p.turn() != PlayerId::P1) throw GameError("the strategy plays P1");
    if (is_terminal(p)) throw GameError("game is over");
    s.roles.validate(p);
    detail::Ranker rank(p, s.roles);

    auto mine = winning_moves(p, PlayerId::P1);
    if (!mine.empty()) {
      Edge e = *std::min_element(mine.begin(), mine.end(),
                                 [&](const Edge& x, const Edge& y) { return rank.rank(x) < rank.rank(y); });
      return {MoveSpec::claim(e.u, e.v, PlayerId::P1), s, true, false};
    }
    if (s.phase == Phase::FALLBACK) return fallback(p, s);
    if (has_winning_move(p, PlayerId::P2)) throw gap(s, "P2 has a threat");

    switch (s.phase) {
      case Phase::OPENING: return opening(p, s);
      case Phase::TRIANGLE: return triangle(p, s, rank);
      case Phase::MAINLEM: return mainlem(p, s, rank);
      case Phase::SPCASE1: return spcase1(p, s, rank);
      case Phase::CASE_C: return case_c(p, s, rank);
      case Phase::END_POSITION: return end_position(p, s, rank);
      case Phase::FINISH_DOUBLE_THREAT: throw gap(s, "no immediate win after the double threat");
      default: throw gap(s, "unknown phase");
    }
  }

  // Classification of an opening position after P2's third move (P1 holds the
  // star ab, ad, ac; roles a, b, c, d set). Cached by role-annotated key.
  struct OpeningDecision {
    OpeningClass cls = OpeningClass::FALLBACK;
    int plan = -1;
  };

  OpeningDecision classify_opening(const Position& p, const RoleMap& roles) {
    std::string key = canonical_key(p, roles).bytes;
    {
      std::lock_guard lock(mutex_);
      if (auto it = opening_cache_.find(key); it != opening_cache_.end()) return it->second;
    }
    OpeningDecision d = compute_opening(p, roles);
    std::lock_guard lock(mutex_);
    opening_cache_.emplace(key, d);
    return d;
  }

  // Depth (plies until P1 completes) of the scripted tree from (p, s) when
  // every P2 line ends in a P1 win without fallback moves, else nothing.
  std::optional<int> script_depth(const Position& p, const StrategyState& s) {
    std::unordered_map<std::string, std::optional<int>> memo;
    return script_depth(p, s, memo);
  }

 private:
  static VerificationGap gap(const StrategyState& s, const std::string& why) {
    return VerificationGap(std::string(to_string(s.phase)) + " step " + std::to_string(s.step) + ": " + why);
  }

  static StrategyMove play(const MoveSpec& m, Phase ph, int step, RoleMap roles = {}, char variant = 0) {
    StrategyState next;
    next.phase = ph;
    next.step = step;
    next.roles = roles;
    next.variant = variant;
    return {m, next, false, false};
  }
  static StrategyMove claim(VertexId u, VertexId v, Phase ph, int step, RoleMap roles = {}, char variant = 0) {
    return play(MoveSpec::claim(u, v, PlayerId::P1), ph, step, roles, variant);
  }

  StrategyMove fallback(const Position& p, const StrategyState& s) {
    if (!options_.allow_fallback) throw gap(s, "fallback search disabled");
    int plies = std::max(1, options_.bound - p.edge_count());
    try {
      MoveSpec m = Solver({plies, options_.fallback_budget}).best_move(p);
      StrategyState next = s;
      next.phase = Phase::FALLBACK;
      next.step = 0;
      next.roles.clear();
      return {m, next, false, true};
    } catch (const VerificationGap&) {
      throw;
    } catch (const GameError& e) {
      throw gap(s, std::string("fallback search found no win: ") + e.what());
    }
  }

  StrategyMove opening(const Position& p, const StrategyState& s) {
    RoleMap r = s.roles;
    const int n = p.vertex_count();
    switch (s.step) {
      case 0: {
        if (p.edge_count() != 0) throw gap(s, "board is not empty");
        r.clear();
        r.set(Role::a, 0);
        r.set(Role::b, 1);
        return play(MoveSpec::fresh_pair(PlayerId::P1), Phase::OPENING, 1, r);
      }
      case 1: {
        auto theirs = p.edges(PlayerId::P2);
        if (theirs.size() != 1) throw gap(s, "expected one P2 edge");
        VertexId a = r.at(Role::a), b = r.at(Role::b);
        const Edge e = theirs[0];
        if ((e.u == b || e.v == b) && e.u != a && e.v != a) r.swap_roles(Role::a, Role::b);
        r.set(Role::d, n);
        return play(MoveSpec::claim_fresh(r.at(Role::a), PlayerId::P1), Phase::OPENING, 2, r);
      }
      case 2: {
        VertexId a = r.at(Role::a), b = r.at(Role::b), d = r.at(Role::d);
        if (!p.is_colored(b, d)) return claim(b, d, Phase::TRIANGLE, 0);
        r.set(Role::c, n);
        return play(MoveSpec::claim_fresh(a, PlayerId::P1), Phase::OPENING, 3, r);
      }
      case 3: {
        OpeningDecision dec = classify_opening(p, r);
        if (dec.plan < 0) {
          StrategyState next = s;
          next.phase = Phase::FALLBACK;
          next.step = 0;
          next.roles.clear();
          return fallback(p, next);
        }
        auto m = try_plan(p, r, dec.plan);
        if (!m) throw gap(s, "opening plan not applicable");
        return *m;
      }
      default: throw gap(s, "bad step");
    }
  }

  // Opening plans in the order tried. Plans 0-3 join two leaves of P1's star
  // at a into a triangle; the remaining leaf becomes the pendant.
  //   0: triangle through b and c, then MAINLEM      1: same through d and c
  //   2: triangle through b and c, then SPCASE1      3: same through d and c
  //   4: P2 holds two leaf pairs: a-fresh, then CASE_C
  static constexpr int kPlanCount = 5;

  std::optional<StrategyMove> try_plan(const Position& p, const RoleMap& r, int plan) const {
    VertexId a = r.at(Role::a), b = r.at(Role::b), c = r.at(Role::c), d = r.at(Role::d);
    if (plan < 4) {
      VertexId u = (plan % 2 == 0) ? b : d;
      if (p.is_colored(u, c)) return std::nullopt;
      return claim(u, c, plan < 2 ? Phase::MAINLEM : Phase::SPCASE1, 0);
    }
    // The leaf joined to both others in P2's colour plays d.
    std::array<VertexId, 3> leaves = {b, c, d};
    for (VertexId centre : leaves) {
      std::vector<VertexId> others;
      for (VertexId w : leaves)
        if (w != centre) others.push_back(w);
      if (detail::holds(p, PlayerId::P2, centre, others[0]) && detail::holds(p, PlayerId::P2, centre, others[1])) {
        RoleMap nr;
        nr.set(Role::a, a);
        nr.set(Role::b, others[0]);
        nr.set(Role::c, others[1]);
        nr.set(Role::d, centre);
        nr.set(Role::z, p.vertex_count());
        return play(MoveSpec::claim_fresh(a, PlayerId::P1), Phase::CASE_C, 1, nr);
      }
    }
    return std::nullopt;
  }

  OpeningDecision compute_opening(const Position& p, const RoleMap& r) {
    const int remaining = options_.bound - p.edge_count();
    for (int plan = 0; plan < kPlanCount; ++plan) {
      auto m = try_plan(p, r, plan);
      if (!m) continue;
      Position q = apply(p, m->move);
      auto depth = script_depth(q, m->next);
      if (!depth || 1 + *depth > remaining) continue;
      OpeningDecision d;
      d.plan = plan;
      if (plan < 2) {
        d.cls = OpeningClass::GENERIC;
      } else if (plan < 4) {
        bool touches_c = p.neighbors(PlayerId::P2, r.at(Role::c)) != 0;
        d.cls = touches_c ? OpeningClass::CRITICAL_B : OpeningClass::CRITICAL_A;
      } else {
        d.cls = OpeningClass::CRITICAL_C;
      }
      return d;
    }
    return {};
  }

  std::optional<int> script_depth(const Position& p, const StrategyState& s,
                                  std::unordered_map<std::string, std::optional<int>>& memo) {
    std::string key = canonical_key(p, s.roles).bytes + "." + s.tag();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::optional<int> result;
    if (p.turn() == PlayerId::P1) {
      try {
        StrategyMove sm = next_move(p, s);
        if (sm.immediate_win) {
          result = 1;
        } else if (!sm.fallback) {
          if (auto sub = script_depth(apply(p, sm.move), sm.next, memo)) result = 1 + *sub;
        }
      } catch (const VerificationGap&) {
      }
    } else {
      result = p2_node_depth(p, s.roles, [&](const Position& child) { return script_depth(child, s, memo); });
    }
    memo.emplace(std::move(key), result);
    return result;
  }

 public:
  // P2 node rule shared with the verifier: fail if P2 can win now; a P1
  // double threat is a win in 2; a single threat leaves only the block;
  // otherwise every reduced class must be answered.
  template <class Child>
  static std::optional<int> p2_node_depth(const Position& p, const RoleMap& roles, Child&& child) {
    if (has_winning_move(p, PlayerId::P2)) return std::nullopt;
    auto threats_p1 = winning_moves(p, PlayerId::P1);
    if (threats_p1.size() >= 2) return 2;
    if (threats_p1.size() == 1) {
      auto sub = child(apply(p, MoveSpec::claim(threats_p1[0].u, threats_p1[0].v, PlayerId::P2)));
      return sub ? std::optional<int>(1 + *sub) : std::nullopt;
    }
    int worst = 0;
    for (const auto& c : reduced_moves(p, roles)) {
      auto sub = child(apply(p, c.representative));
      if (!sub) return std::nullopt;
      worst = std::max(worst, 1 + *sub);
    }
    return worst;
  }

 private:
  StrategyMove triangle(const Position& p, const StrategyState& s, const detail::Ranker& rank) {
    if (s.step == 0) {
      auto mine = p.edges(PlayerId::P1);
      if (mine.size() != 3) throw gap(s, "P1 does not hold exactly a triangle");
      VertexMask tri = 0;
      for (const Edge& e : mine) tri |= detail::bit(e.u) | detail::bit(e.v);
      if (std::popcount(tri) != 3) throw gap(s, "P1 does not hold exactly a triangle");
      VertexId v = rank.min_of(tri);
      RoleMap r;
      r.set(Role::a, v);
      r.set(Role::z, p.vertex_count());
      return play(MoveSpec::claim_fresh(v, PlayerId::P1), Phase::TRIANGLE, 1, r);
    }
    VertexId a = s.roles.at(Role::a), z = s.roles.at(Role::z);
    VertexMask others = p.neighbors(PlayerId::P1, a) & ~detail::bit(z);
    VertexMask open = 0;
    for (VertexMask m = others; m; m &= m - 1)
      if (!p.is_colored(std::countr_zero(m), z)) open |= detail::bit(std::countr_zero(m));
    if (!open) throw gap(s, "both triangle edges to z are taken");
    return claim(rank.min_of(open), z, Phase::END_POSITION, 0);
  }

  StrategyMove mainlem(const Position& p, const StrategyState& s, const detail::Ranker& rank) {
    if (s.step == 0) {
      auto tp = detail::triangle_pendant(p);
      if (!tp) throw gap(s, "P1 does not hold a triangle with a pendant edge");
      auto [a, b, c, d] = *tp;
      if (auto m = pendant_completion(p, *tp, rank)) return *m;
      if (!mainlem_hypothesis(p, *tp)) throw gap(s, "no suitable P2 edge for MAINLEM");
      RoleMap r;
      r.set(Role::a, a);
      r.set(Role::z, p.vertex_count());
      return play(MoveSpec::claim_fresh(a, PlayerId::P1), Phase::MAINLEM, 1, r);
    }
    VertexId a = s.roles.at(Role::a), z = s.roles.at(Role::z);
    VertexMask open = 0;
    for (VertexMask m = p.neighbors(PlayerId::P1, a); m; m &= m - 1) {
      VertexId w = std::countr_zero(m);
      if (degree(p, PlayerId::P1, w) == 2 && !p.is_colored(w, z)) open |= detail::bit(w);
    }
    if (!open) throw gap(s, "both triangle edges to z are taken");
    return claim(rank.min_of(open), z, Phase::END_POSITION, 0);
  }

  // Claims bd or cd when one is still open, completing a K^_{2,2}.
  static std::optional<StrategyMove> pendant_completion(const Position& p, const detail::TrianglePendant& tp,
                                                         const detail::Ranker& rank) {
    VertexMask open = 0;
    for (VertexId w : {tp.b, tp.c})
      if (!p.is_colored(w, tp.d)) open |= detail::bit(w);
    if (!open) return std::nullopt;
    return claim(rank.min_of(open), tp.d, Phase::END_POSITION, 0);
  }

  // Some P2 edge contains a, or some P2 edge avoids {a,b,c,d} and the position
  // is not one of the two special cases: P2 = {bd, cd, xy, w} with w joining
  // {x,y} to {b,c,d}.
  static bool mainlem_hypothesis(const Position& p, const detail::TrianglePendant& tp) {
    if (p.neighbors(PlayerId::P2, tp.a)) return true;
    VertexMask core = detail::bit(tp.a) | detail::bit(tp.b) | detail::bit(tp.c) | detail::bit(tp.d);
    auto theirs = p.edges(PlayerId::P2);
    bool disjoint = false;
    for (const Edge& e : theirs)
      if (!(core & (detail::bit(e.u) | detail::bit(e.v)))) disjoint = true;
    if (!disjoint) return false;
    return !special_case(p, tp);
  }

  static bool special_case(const Position& p, const detail::TrianglePendant& tp) {
    if (p.edge_count(PlayerId::P2) != 4) return false;
    if (!detail::holds(p, PlayerId::P2, tp.b, tp.d) || !detail::holds(p, PlayerId::P2, tp.c, tp.d)) return false;
    VertexMask core = detail::bit(tp.a) | detail::bit(tp.b) | detail::bit(tp.c) | detail::bit(tp.d);
    std::vector<Edge> rest;
    for (const Edge& e : p.edges(PlayerId::P2))
      if (!(e == Edge(tp.b, tp.d) || e == Edge(tp.c, tp.d))) rest.push_back(e);
    for (int i = 0; i < 2; ++i) {
      const Edge& xy = rest[i];
      const Edge& w = rest[1 - i];
      VertexMask xym = detail::bit(xy.u) | detail::bit(xy.v);
      VertexMask wm = detail::bit(w.u) | detail::bit(w.v);
      VertexMask bcd = detail::bit(tp.b) | detail::bit(tp.c) | detail::bit(tp.d);
      if (!(core & xym) && std::popcount(wm & xym) == 1 && std::popcount(wm & bcd) == 1) return true;
    }
    return false;
  }

  StrategyMove spcase1(const Position& p, const StrategyState& s, const detail::Ranker& rank) {
    switch (s.step) {
      case 0: {
        auto tp = detail::triangle_pendant(p);
        if (!tp) throw gap(s, "P1 does not hold a triangle with a pendant edge");
        if (auto m = pendant_completion(p, *tp, rank)) return *m;
        // P2 = {bd, cd, BX, XY} with B in {b, c} and X, Y outside {a, b, c, d}.
        if (p.edge_count(PlayerId::P2) != 4) throw gap(s, "not the special case");
        VertexMask core = detail::bit(tp->a) | detail::bit(tp->b) | detail::bit(tp->c) | detail::bit(tp->d);
        for (VertexId B : {tp->b, tp->c}) {
          VertexMask outside = p.neighbors(PlayerId::P2, B) & ~core;
          if (std::popcount(outside) != 1) continue;
          VertexId X = std::countr_zero(outside);
          VertexMask xn = p.neighbors(PlayerId::P2, X) & ~detail::bit(B);
          if (std::popcount(xn) != 1 || (xn & core)) continue;
          VertexId C = B == tp->b ? tp->c : tp->b;
          RoleMap r;
          r.set(Role::a, tp->a);
          r.set(Role::b, B);
          r.set(Role::c, C);
          r.set(Role::d, tp->d);
          r.set(Role::x, X);
          return claim(C, X, Phase::SPCASE1, 1, r);
        }
        throw gap(s, "not the special case");
      }
      case 1: {
        VertexId a = s.roles.at(Role::a), x = s.roles.at(Role::x);
        if (!p.is_colored(a, x)) return claim(a, x, Phase::END_POSITION, 0);
        RoleMap r;
        r.set(Role::a, a);
        r.set(Role::b, s.roles.at(Role::b));
        r.set(Role::c, s.roles.at(Role::c));
        r.set(Role::z, p.vertex_count());
        return play(MoveSpec::claim_fresh(a, PlayerId::P1), Phase::SPCASE1, 2, r);
      }
      case 2: {
        VertexId b = s.roles.at(Role::b), c = s.roles.at(Role::c), z = s.roles.at(Role::z);
        if (!p.is_colored(z, b)) return claim(z, b, Phase::END_POSITION, 0);
        if (!p.is_colored(z, c)) return claim(z, c, Phase::END_POSITION, 0);
        throw gap(s, "both zb and zc are taken");
      }
      default: throw gap(s, "bad step");
    }
  }

  StrategyMove case_c(const Position& p, const StrategyState& s, const detail::Ranker& rank) {
    RoleMap r = s.roles;
    VertexId z = r.at(Role::z);
    auto p2 = [&](VertexId u, VertexId v) { return detail::holds(p, PlayerId::P2, u, v); };
    if (s.step == 1) {
      VertexId b = r.at(Role::b), c = r.at(Role::c), d = r.at(Role::d);
      if (p2(b, z) || p2(c, z)) {
        if (!p2(b, z)) r.swap_roles(Role::b, Role::c);
        return claim(r.at(Role::c), z, Phase::CASE_C, 2, r, 'A');
      }
      if (p2(d, z)) return claim(c, z, Phase::CASE_C, 2, r, 'B');
      return claim(d, z, Phase::CASE_C, 2, r, 'C');
    }
    VertexId b = r.at(Role::b), c = r.at(Role::c), d = r.at(Role::d);
    auto first_open = [&](std::initializer_list<Edge> options) -> StrategyMove {
      for (const Edge& e : options)
        if (!p.is_colored(e.u, e.v)) return claim(e.u, e.v, Phase::END_POSITION, 0);
      throw gap(s, "no edge left to complete a K^_{2,2}");
    };
    switch (s.variant) {
      case 'A': return first_open({Edge(d, z), Edge(b, c)});
      case 'B': return first_open({Edge(b, z), Edge(b, c)});
      case 'C': {
        VertexId w1 = b, w2 = c;
        if (rank(w2) < rank(w1)) std::swap(w1, w2);
        return first_open({Edge(w1, z), Edge(w2, z)});
      }
      default: throw gap(s, "bad variant");
    }
  }

  StrategyMove end_position(const Position& p, const StrategyState& s, const detail::Ranker& rank) {
    const int n = p.vertex_count();
    if (s.step == 0) {
      if (p.edge_count(PlayerId::P2) > 7) throw gap(s, "P2 holds more than 7 edges");
      // Main pairs of P1's K^_{2,2} copies, in rank order.
      std::vector<std::pair<std::pair<int, int>, Edge>> pairs;
      for (const Edge& e : p.edges(PlayerId::P1))
        if (std::popcount(p.neighbors(PlayerId::P1, e.u) & p.neighbors(PlayerId::P1, e.v)) >= 2)
          pairs.push_back({rank.rank(e), e});
      if (pairs.empty()) throw gap(s, "P1 does not hold a K^_{2,2}");
      std::sort(pairs.begin(), pairs.end());
      for (const auto& [rk, e] : pairs) {
        VertexId x;
        try {
          x = select_safe_main(p, {e.u, e.v}, s.roles);
        } catch (const VerificationGap&) {
          continue;
        }
        VertexId y = x == e.u ? e.v : e.u;
        VertexId leaf = rank.min_of(p.neighbors(PlayerId::P1, x) & p.neighbors(PlayerId::P1, y));
        RoleMap r;
        r.set(Role::main1, x);
        r.set(Role::main2, y);
        r.set(Role::leaf1, leaf);
        r.set(Role::z1, n);
        return play(MoveSpec::claim_fresh(y, PlayerId::P1), Phase::END_POSITION, 1, r);
      }
      throw gap(s, "no safe main vertex");
    }
    RoleMap r = s.roles;
    VertexId y = r.at(Role::main2);
    if (s.step == 1 || s.step == 2) {
      r.set(s.step == 1 ? Role::z2 : Role::z3, n);
      return play(MoveSpec::claim_fresh(y, PlayerId::P1), Phase::END_POSITION, s.step + 1, r);
    }
    if (s.step == 3) return claim(r.at(Role::leaf1), r.at(Role::z1), Phase::FINISH_DOUBLE_THREAT, 0, r);
    throw gap(s, "bad step");
  }

  StrategyOptions options_;
  std::mutex mutex_;
  std::unordered_map<std::string, OpeningDecision> opening_cache_;
};

}  // namespace ramsey

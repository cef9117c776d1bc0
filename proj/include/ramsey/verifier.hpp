#pragma once

// Certificate construction and independent re-checking.
//
// A node key is base64url(role-annotated canonical key) + "." + strategy tag.
// Positions inside the certificate are the canonically labelled ones the keys
// decode to, and every recorded move is written in those labels.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ramsey/core.hpp"
#include "ramsey/position_io.hpp"
#include "ramsey/strategy.hpp"
#include "ramsey/symmetry.hpp"

namespace ramsey {

struct CertChild {
  std::string move;
  int orbit = 1;
  std::string child;
  bool operator==(const CertChild&) const = default;
};

struct CertNode {
  PlayerId mover = PlayerId::P1;
  int depth = 0;
  // P1 nodes.
  std::string move;
  std::string child;  // empty when the move wins on the spot
  bool win = false;
  bool fallback = false;
  std::string opening_class;
  // P2 nodes: "classes", "block" or "double".
  std::string rule;
  std::vector<CertChild> children;

  bool operator==(const CertNode&) const = default;
};

struct CriticalClass {
  std::string position;  // stripped canonical key, base64url
  std::string label;
};

struct CertStats {
  std::size_t nodes = 0;
  std::size_t p1_nodes = 0;
  std::size_t p2_nodes = 0;
  int max_depth = 0;
  std::size_t fallback_moves = 0;
  std::size_t end_entries = 0;
  std::size_t opening_positions = 0;
  std::vector<CriticalClass> critical_classes;
  bool operator==(const CertStats&) const = default;
};

struct Certificate {
  int t = 3;
  int bound = 24;
  std::string root;
  Position root_position{3};
  std::map<std::string, CertNode> nodes;
  CertStats stats;
};

inline std::string node_key(const CanonicalKey& k, const std::string& tag) { return to_string(k) + "." + tag; }

struct NodeRef {
  Position position;
  RoleMap roles;
  std::string tag;
};

inline NodeRef decode_node(const std::string& key) {
  auto dot = key.find('.');
  if (dot == std::string::npos) throw GameError("node key without strategy tag: " + key);
  auto [p, r] = decode_key(parse_key(key.substr(0, dot)));
  return {p, r, key.substr(dot + 1)};
}

inline std::string stripped_key(const Position& p) { return to_string(canonical_key(p, {})); }

struct VerifyOptions {
  int bound = 24;
  int threads = 1;
  StrategyOptions strategy{};
};

struct VerifyResult {
  bool ok = false;
  std::string error;
  std::vector<std::string> counterexample;  // "node key: move" lines from the root
  Certificate certificate;
};

namespace detail {

struct Expansion {
  CertNode node;
  std::string error;
};

inline Expansion expand(Strategy& strategy, const std::string& key) {
  Expansion out;
  CertNode& node = out.node;
  NodeRef ref = decode_node(key);
  StrategyState state = StrategyState::from_tag(ref.tag, ref.roles);
  const Position& p = ref.position;
  node.mover = p.turn();
  if (p.turn() == PlayerId::P1) {
    try {
      StrategyMove sm = strategy.next_move(p, state);
      Position q = apply(p, sm.move);
      node.move = to_string(sm.move);
      node.fallback = sm.fallback;
      if (wins(q, PlayerId::P1)) {
        node.win = true;
      } else {
        node.child = node_key(canonical_key(q, sm.next.roles), sm.next.tag());
      }
      if (state.phase == Phase::OPENING && state.step == 3)
        node.opening_class = std::string(to_string(strategy.classify_opening(p, ref.roles).cls));
    } catch (const GameError& e) {
      out.error = e.what();
    }
    return out;
  }
  if (has_winning_move(p, PlayerId::P2)) {
    out.error = "P2 can complete a copy";
    return out;
  }
  auto threats_p1 = winning_moves(p, PlayerId::P1);
  if (threats_p1.size() >= 2) {
    node.rule = "double";
  } else if (threats_p1.size() == 1) {
    node.rule = "block";
    MoveSpec m = MoveSpec::claim(threats_p1[0].u, threats_p1[0].v, PlayerId::P2);
    node.children.push_back({to_string(m), 1, node_key(canonical_key(apply(p, m), ref.roles), ref.tag)});
  } else {
    node.rule = "classes";
    for (const auto& c : reduced_moves(p, ref.roles))
      node.children.push_back({to_string(c.representative), c.orbit_size, node_key(c.successor, ref.tag)});
  }
  return out;
}

inline std::vector<std::string> path_to(const std::map<std::string, std::pair<std::string, std::string>>& parent,
                                        const std::string& key, const std::string& last) {
  std::vector<std::string> out;
  if (!last.empty()) out.push_back(key + ": " + last);
  std::string cur = key;
  while (true) {
    auto it = parent.find(cur);
    if (it == parent.end() || it->second.first.empty()) break;
    out.push_back(it->second.first + ": " + it->second.second);
    cur = it->second.first;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Breadth-first expansion of the strategy tree. Each level is expanded in
// parallel; results are merged in key order, so the certificate does not
// depend on the thread count.
inline VerifyResult verify(const Position& root, const StrategyState& s, const VerifyOptions& options,
                           Strategy* shared = nullptr) {
  Strategy local(options.strategy);
  Strategy& strategy = shared ? *shared : local;
  VerifyResult result;
  Certificate& cert = result.certificate;
  cert.t = root.t();
  cert.bound = options.bound;
  cert.root_position = root;
  cert.root = node_key(canonical_key(root, s.roles), s.tag());

  // child -> (parent, move) with the smallest parent key.
  std::map<std::string, std::pair<std::string, std::string>> parent;
  parent[cert.root] = {"", ""};
  std::vector<std::string> frontier{cert.root};
  const int threads = std::max(1, options.threads);
  for (int level = 0; !frontier.empty(); ++level) {
    std::vector<detail::Expansion> results(frontier.size());
    if (level >= options.bound) {
      result.error = "ply bound " + std::to_string(options.bound) + " exceeded";
      result.counterexample = detail::path_to(parent, frontier.front(), "");
      return result;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < frontier.size();) {
        try {
          results[i] = detail::expand(strategy, frontier[i]);
        } catch (const std::exception& e) {
          results[i].error = e.what();
        }
      }
    };
    if (threads == 1 || frontier.size() < 2) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    std::vector<std::string> next_frontier;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const std::string& key = frontier[i];
      if (!results[i].error.empty()) {
        result.error = results[i].error + " at " + key;
        result.counterexample = detail::path_to(parent, key, "");
        return result;
      }
      CertNode& node = cert.nodes[key] = std::move(results[i].node);
      auto link = [&](const std::string& child, const std::string& move) {
        auto [it, fresh] = parent.try_emplace(child, key, move);
        if (fresh) next_frontier.push_back(child);
        else if (key < it->second.first) it->second = {key, move};
      };
      if (node.mover == PlayerId::P1) {
        if (!node.win) link(node.child, node.move);
      } else {
        for (const auto& c : node.children) link(c.child, c.move);
      }
    }
    std::sort(next_frontier.begin(), next_frontier.end());
    frontier = std::move(next_frontier);
  }

  // Depths bottom-up: every child has one more edge than its parent.
  std::vector<std::pair<int, const std::string*>> order;
  for (auto& [key, node] : cert.nodes) order.emplace_back(-static_cast<int>(parse_key(key.substr(0, key.find('.'))).bytes.size()), &key);
  std::sort(order.begin(), order.end());
  for (auto& [neg, keyp] : order) {
    CertNode& node = cert.nodes[*keyp];
    if (node.mover == PlayerId::P1) {
      node.depth = node.win ? 1 : 1 + cert.nodes.at(node.child).depth;
    } else if (node.rule == "double") {
      node.depth = 2;
    } else {
      int worst = 0;
      for (const auto& c : node.children) worst = std::max(worst, 1 + cert.nodes.at(c.child).depth);
      node.depth = worst;
    }
  }

  CertStats& st = cert.stats;
  std::map<std::string, std::string> critical;
  std::set<std::string> openings;
  for (const auto& [key, node] : cert.nodes) {
    ++st.nodes;
    if (node.mover == PlayerId::P1) {
      ++st.p1_nodes;
      st.fallback_moves += node.fallback;
      if (key.ends_with(".E0")) ++st.end_entries;
      if (!node.opening_class.empty()) {
        std::string pos = stripped_key(decode_node(key).position);
        openings.insert(pos);
        if (node.opening_class != "GENERIC") critical.emplace(pos, node.opening_class);
      }
    } else {
      ++st.p2_nodes;
    }
  }
  st.opening_positions = openings.size();
  for (const auto& [pos, label] : critical) st.critical_classes.push_back({pos, label});
  st.max_depth = cert.nodes.at(cert.root).depth;
  if (st.max_depth > options.bound) {
    result.error = "strategy needs " + std::to_string(st.max_depth) + " plies, above the bound";
    // The deepest line.
    for (std::string k = cert.root;;) {
      const CertNode& n = cert.nodes.at(k);
      if (n.mover == PlayerId::P1) {
        result.counterexample.push_back(k + ": " + n.move);
        if (n.win) break;
        k = n.child;
      } else {
        if (n.children.empty()) {
          result.counterexample.push_back(k + ": any (P1 has two threats)");
          break;
        }
        const CertChild* worst = &n.children.front();
        for (const auto& c : n.children)
          if (cert.nodes.at(c.child).depth > cert.nodes.at(worst->child).depth) worst = &c;
        result.counterexample.push_back(k + ": " + worst->move);
        k = worst->child;
      }
    }
    return result;
  }
  result.ok = true;
  return result;
}

// Phase a verification run starts in when given an arbitrary position.
inline StrategyState infer_state(const Position& p) {
  StrategyState s;
  if (p.edge_count() == 0) return s;
  bool k22 = false;
  for (const Edge& e : p.edges(PlayerId::P1))
    if (std::popcount(p.neighbors(PlayerId::P1, e.u) & p.neighbors(PlayerId::P1, e.v)) >= 2) k22 = true;
  s.phase = k22 ? Phase::END_POSITION : Phase::FALLBACK;
  return s;
}

// ---------------------------------------------------------------------------
// Serialisation.

inline nlohmann::json to_json(const CertStats& st) {
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& c : st.critical_classes) crit.push_back({{"position", c.position}, {"class", c.label}});
  return {{"nodes", st.nodes},
          {"p1Nodes", st.p1_nodes},
          {"p2Nodes", st.p2_nodes},
          {"maxDepth", st.max_depth},
          {"fallbackMoves", st.fallback_moves},
          {"endPositionEntries", st.end_entries},
          {"openingPositions", st.opening_positions},
          {"criticalClasses", crit}};
}

inline nlohmann::json to_json(const CertNode& n) {
  nlohmann::json j;
  j["mover"] = to_string(n.mover);
  j["depth"] = n.depth;
  if (n.mover == PlayerId::P1) {
    j["move"] = n.move;
    if (n.win) j["win"] = true;
    else j["child"] = n.child;
    if (n.fallback) j["fallback"] = true;
    if (!n.opening_class.empty()) j["class"] = n.opening_class;
  } else {
    j["rule"] = n.rule;
    nlohmann::json kids = nlohmann::json::array();
    for (const auto& c : n.children) kids.push_back({{"move", c.move}, {"orbit", c.orbit}, {"child", c.child}});
    j["children"] = kids;
  }
  return j;
}

inline void write_certificate(const Certificate& c, std::ostream& out) {
  nlohmann::json nodes = nlohmann::json::object();
  for (const auto& [key, node] : c.nodes) nodes[key] = to_json(node);
  nlohmann::json j = {{"t", c.t},
                      {"bound", c.bound},
                      {"root", c.root},
                      {"rootPosition", position_to_json(c.root_position)},
                      {"nodes", nodes},
                      {"stats", to_json(c.stats)}};
  out << j.dump(1) << "\n";
}

inline std::string certificate_text(const Certificate& c) {
  std::ostringstream out;
  write_certificate(c, out);
  return out.str();
}

inline void save_certificate(const Certificate& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GameError("cannot write " + path);
  write_certificate(c, out);
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    c.t = j.at("t").get<int>();
    c.bound = j.at("bound").get<int>();
    c.root = j.at("root").get<std::string>();
    c.root_position = position_from_json(j.at("rootPosition"));
    for (const auto& [key, v] : j.at("nodes").items()) {
      CertNode n;
      auto who = parse_player(v.at("mover").get<std::string>());
      if (!who) throw GameError("bad mover in node " + key);
      n.mover = *who;
      n.depth = v.value("depth", 0);
      if (n.mover == PlayerId::P1) {
        n.move = v.at("move").get<std::string>();
        n.win = v.value("win", false);
        n.child = v.value("child", std::string());
        n.fallback = v.value("fallback", false);
        n.opening_class = v.value("class", std::string());
      } else {
        n.rule = v.at("rule").get<std::string>();
        for (const auto& k : v.at("children"))
          n.children.push_back({k.at("move").get<std::string>(), k.at("orbit").get<int>(), k.at("child").get<std::string>()});
      }
      c.nodes.emplace(key, std::move(n));
    }
    const auto& st = j.at("stats");
    c.stats.nodes = st.value("nodes", 0u);
    c.stats.p1_nodes = st.value("p1Nodes", 0u);
    c.stats.p2_nodes = st.value("p2Nodes", 0u);
    c.stats.max_depth = st.value("maxDepth", 0);
    c.stats.fallback_moves = st.value("fallbackMoves", 0u);
    c.stats.end_entries = st.value("endPositionEntries", 0u);
    c.stats.opening_positions = st.value("openingPositions", 0u);
    for (const auto& k : st.value("criticalClasses", nlohmann::json::array()))
      c.stats.critical_classes.push_back({k.at("position").get<std::string>(), k.at("class").get<std::string>()});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw GameError(std::string("malformed certificate: ") + e.what());
  }
}

inline Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GameError("cannot open certificate " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GameError("malformed certificate JSON in " + path + ": " + e.what());
  }
  return certificate_from_json(j);
}

// ---------------------------------------------------------------------------
// Independent checking: only core and symmetry are used here.

struct CheckResult {
  bool ok = true;
  std::string node;  // failing node key
  std::string message;
  int root_depth = 0;
};

namespace detail {

inline std::string stripped_of_node(const std::string& key) { return stripped_key(decode_node(key).position); }

// An explicit vertex bijection from `from` onto `to` built from the two
// canonical labellings, confirmed edge by edge; empty if they differ.
inline std::optional<Permutation> explicit_isomorphism(const Position& from, const Position& to) {
  if (from.vertex_count() != to.vertex_count() || from.turn() != to.turn()) return std::nullopt;
  auto f = canonical_form(from, {});
  auto g = canonical_form(to, {});
  if (f.key != g.key) return std::nullopt;
  Permutation perm(from.vertex_count());
  for (int v = 0; v < from.vertex_count(); ++v) perm[v] = g.order[f.label[v]];
  for (int u = 0; u < from.vertex_count(); ++u)
    for (int v = u + 1; v < from.vertex_count(); ++v)
      if (from.color(u, v) != to.color(perm[u], perm[v])) return std::nullopt;
  return perm;
}

}  // namespace detail

// Replays every node. P1 nodes: the move is legal and either wins or leads to
// a position isomorphic to the recorded child; scripted (non-fallback) moves
// may only face a P2 threat when they win at once. P2 nodes: P2 cannot win at
// once; a single P1 threat is answered by its block, two threats need no
// children, and otherwise every class of reduced_moves has a child with the
// same successor. Depths are recomputed and must equal the recorded ones; the
// root must fit the bound.
// With a seed, a sample of P2 nodes is also checked move by move with explicit
// isomorphisms.
inline CheckResult check_certificate(const Certificate& c, std::optional<std::uint64_t> seed = std::nullopt,
                                     std::size_t samples = 200) {
  auto fail = [](const std::string& key, const std::string& why) {
    CheckResult r;
    r.ok = false;
    r.node = key;
    r.message = why;
    return r;
  };
  if (!c.nodes.count(c.root)) return fail(c.root, "root node missing");
  try {
    if (detail::stripped_of_node(c.root) != stripped_key(c.root_position)) return fail(c.root, "root key does not match the root position");
  } catch (const GameError& e) {
    return fail(c.root, e.what());
  }
  std::map<std::string, int> depth;
  std::vector<std::string> p2_keys;
  // Children always carry one more edge, so visiting by decreasing key length
  // (edge count) settles children first.
  std::vector<std::pair<std::size_t, const std::string*>> order;
  for (const auto& [key, node] : c.nodes) order.emplace_back(key.find('.'), &key);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : *x.second < *y.second;
  });
  auto child_depth = [&](const std::string& key) -> std::optional<int> {
    auto it = depth.find(key);
    if (it == depth.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [len, keyp] : order) {
    const std::string& key = *keyp;
    const CertNode& node = c.nodes.at(key);
    try {
      NodeRef ref = decode_node(key);
      const Position& p = ref.position;
      if (p.t() != c.t) return fail(key, "wrong target parameter");
      if (p.turn() != node.mover) return fail(key, "mover does not match the position");
      if (is_terminal(p)) return fail(key, "node is already decided");
      if (node.mover == PlayerId::P1) {
        Position q = apply(p, parse_move(node.move, PlayerId::P1));
        if (node.win) {
          if (!wins(q, PlayerId::P1)) return fail(key, "recorded win does not complete a copy");
          if (node.depth != 1) return fail(key, "recorded depth differs from the recomputed 1");
          depth[key] = 1;
          continue;
        }
        if (!node.fallback && has_winning_move(p, PlayerId::P2))
          return fail(key, "scripted move ignores a P2 threat without winning at once");
        if (!c.nodes.count(node.child)) return fail(key, "missing child " + node.child);
        if (detail::stripped_of_node(node.child) != stripped_key(q)) return fail(key, "child is not the position reached");
        auto d = child_depth(node.child);
        if (!d) return fail(key, "child depth unresolved");
        depth[key] = 1 + *d;
        if (node.depth != depth[key]) return fail(key, "recorded depth differs from the recomputed " + std::to_string(depth[key]));
        continue;
      }
      if (has_winning_move(p, PlayerId::P2)) return fail(key, "P2 can complete a copy");
      auto threats_p1 = winning_moves(p, PlayerId::P1);
      if (threats_p1.size() >= 2) {
        if (!node.children.empty()) return fail(key, "double threat node lists children");
        if (node.depth != 2) return fail(key, "recorded depth differs from the recomputed 2");
        depth[key] = 2;
        continue;
      }
      std::map<std::string, std::string> by_position;  // successor stripped key -> child key
      int worst = 0;
      for (const auto& ch : node.children) {
        if (!c.nodes.count(ch.child)) return fail(key, "missing child " + ch.child);
        Position q = apply(p, parse_move(ch.move, PlayerId::P2));
        std::string sk = stripped_key(q);
        if (detail::stripped_of_node(ch.child) != sk) return fail(key, "child is not the position reached by " + ch.move);
        by_position.emplace(sk, ch.child);
        auto d = child_depth(ch.child);
        if (!d) return fail(key, "child depth unresolved");
        worst = std::max(worst, 1 + *d);
      }
      if (threats_p1.size() == 1) {
        Position q = apply(p, MoveSpec::claim(threats_p1[0].u, threats_p1[0].v, PlayerId::P2));
        if (!by_position.count(stripped_key(q))) return fail(key, "the forced block is not covered");
      } else {
        for (const auto& cls : reduced_moves(p, ref.roles)) {
          Position q = apply(p, cls.representative);
          if (!by_position.count(stripped_key(q)))
            return fail(key, "P2 move " + to_string(cls.representative) + " is not covered");
        }
        p2_keys.push_back(key);
      }
      if (node.depth != worst) return fail(key, "recorded depth differs from the recomputed " + std::to_string(worst));
      depth[key] = worst;
    } catch (const GameError& e) {
      return fail(key, e.what());
    }
  }
  // Reachability from the root.
  std::set<std::string> seen{c.root};
  std::vector<std::string> stack{c.root};
  while (!stack.empty()) {
    std::string k = stack.back();
    stack.pop_back();
    const CertNode& n = c.nodes.at(k);
    auto visit = [&](const std::string& ch) {
      if (seen.insert(ch).second) stack.push_back(ch);
    };
    if (n.mover == PlayerId::P1) {
      if (!n.win) visit(n.child);
    } else {
      for (const auto& ch : n.children) visit(ch.child);
    }
  }
  if (seen.size() != c.nodes.size()) {
    for (const auto& [key, node] : c.nodes)
      if (!seen.count(key)) return fail(key, "node unreachable from the root");
  }
  CheckResult ok;
  ok.root_depth = depth.at(c.root);
  if (ok.root_depth > c.bound) return fail(c.root, "depth " + std::to_string(ok.root_depth) + " exceeds the bound");

  if (seed && !p2_keys.empty()) {
    std::mt19937_64 rng(*seed);
    std::vector<std::string> picked;
    std::sample(p2_keys.begin(), p2_keys.end(), std::back_inserter(picked), samples, rng);
    for (const auto& key : picked) {
      NodeRef ref = decode_node(key);
      const CertNode& node = c.nodes.at(key);
      std::vector<Position> kids;
      for (const auto& ch : node.children) kids.push_back(decode_node(ch.child).position);
      for (const auto& m : legal_moves(ref.position)) {
        Position q = apply(ref.position, m);
        bool covered = false;
        for (const auto& k : kids)
          if (detail::explicit_isomorphism(q, k)) {
            covered = true;
            break;
          }
        if (!covered) return fail(key, "sampled P2 move " + to_string(m) + " has no isomorphic child");
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Per-phase report over a scripted certificate.

struct PhaseReport {
  std::size_t end_entries = 0;
  std::size_t end_entries_ok = 0;         // K^_{2,2}, no P2 threat, <= 7 P2 edges
  std::size_t end_entries_within_9 = 0;   // subtree depth <= 9
  std::size_t mainlem_entries = 0;
  std::size_t mainlem_shape_ok = 0;
  std::size_t generic = 0, critical = 0, fallback = 0;  // opening positions
  std::vector<std::string> problems;
};

inline PhaseReport phase_report(const Certificate& c) {
  PhaseReport r;
  for (const auto& [key, node] : c.nodes) {
    if (node.mover != PlayerId::P1) continue;
    NodeRef ref = decode_node(key);
    const Position& p = ref.position;
    if (ref.tag == "E0") {
      ++r.end_entries;
      bool k22 = false;
      for (const Edge& e : p.edges(PlayerId::P1))
        if (std::popcount(p.neighbors(PlayerId::P1, e.u) & p.neighbors(PlayerId::P1, e.v)) >= 2) k22 = true;
      bool ok = k22 && threats(p, PlayerId::P2).empty() && p.edge_count(PlayerId::P2) <= 7;
      r.end_entries_ok += ok;
      r.end_entries_within_9 += node.depth <= 9;
      if (!ok) r.problems.push_back("end entry hypotheses fail at " + key);
      if (node.depth > 9) r.problems.push_back("end entry needs " + std::to_string(node.depth) + " plies at " + key);
    } else if (ref.tag == "M0") {
      ++r.mainlem_entries;
      bool shape = detail::triangle_pendant(p).has_value();
      r.mainlem_shape_ok += shape;
      if (!shape) r.problems.push_back("MAINLEM entry without triangle and pendant at " + key);
    }
  }
  std::map<std::string, std::string> by_position;
  for (const auto& [key, node] : c.nodes)
    if (!node.opening_class.empty()) by_position.emplace(stripped_key(decode_node(key).position), node.opening_class);
  for (const auto& [pos, cls] : by_position) {
    if (cls == "GENERIC") ++r.generic;
    else if (cls == "FALLBACK") ++r.fallback;
    else ++r.critical;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Graphviz export: P1 moves solid, P2 classes dashed with their orbit size.

inline void write_dot(const Certificate& c, std::ostream& out) {
  std::map<std::string, int> id;
  for (const auto& [key, node] : c.nodes) id.emplace(key, static_cast<int>(id.size()));
  out << "digraph certificate {\n  node [shape=box, fontsize=9];\n";
  for (const auto& [key, node] : c.nodes) {
    std::string tag = key.substr(key.find('.') + 1);
    out << "  n" << id[key] << " [label=\"" << to_string(node.mover) << " " << tag << "\\nd=" << node.depth << "\""
        << (node.mover == PlayerId::P1 ? ", color=violet" : ", color=blue") << "];\n";
  }
  int wins = 0;
  for (const auto& [key, node] : c.nodes) {
    if (node.mover == PlayerId::P1) {
      if (node.win) {
        out << "  w" << wins << " [label=\"P1 wins\", shape=ellipse];\n";
        out << "  n" << id[key] << " -> w" << wins++ << " [label=\"" << node.move << "\"];\n";
      } else {
        out << "  n" << id[key] << " -> n" << id[node.child] << " [label=\"" << node.move << "\"];\n";
      }
    } else {
      for (const auto& ch : node.children)
        out << "  n" << id[key] << " -> n" << id[ch.child] << " [style=dashed, label=\"" << ch.move << " x" << ch.orbit
            << "\"];\n";
    }
  }
  out << "}\n";
}

}  // namespace ramsey

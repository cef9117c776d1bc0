#pragma once

// Canonical labelling of 2-edge-coloured positions with optional role tags,
// automorphism generators, and move generation up to symmetry.
//
// The canonical form is found by equitable partition refinement followed by
// individualisation over the first non-singleton cell, keeping the
// lexicographically smallest sorted edge code. Leaves with equal codes yield
// automorphisms, which prune sibling branches lying in one orbit.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ramsey/core.hpp"

namespace ramsey {

// Vertex names used by the scripted strategy. Tags act as vertex colours for
// canonicalisation, so tagged vertices are never identified with each other.
enum class Role : std::uint8_t { a, b, c, d, x, y, z, z1, z2, z3, main1, main2, leaf1 };
inline constexpr int kRoleCount = 13;
inline constexpr std::array<std::string_view, kRoleCount> kRoleNames = {
    "a", "b", "c", "d", "x", "y", "z", "z1", "z2", "z3", "main1", "main2", "leaf1"};

inline std::string_view to_string(Role r) { return kRoleNames[static_cast<int>(r)]; }

inline std::optional<Role> parse_role(std::string_view s) {
  for (int i = 0; i < kRoleCount; ++i)
    if (kRoleNames[i] == s) return static_cast<Role>(i);
  return std::nullopt;
}

// Partial injective map role -> vertex.
class RoleMap {
 public:
  RoleMap() { slot_.fill(-1); }

  std::optional<VertexId> get(Role r) const {
    int v = slot_[static_cast<int>(r)];
    return v < 0 ? std::nullopt : std::optional<VertexId>(v);
  }
  VertexId at(Role r) const {
    auto v = get(r);
    if (!v) throw GameError("role " + std::string(to_string(r)) + " is not assigned");
    return *v;
  }
  bool has(Role r) const { return slot_[static_cast<int>(r)] >= 0; }

  void set(Role r, VertexId v) {
    for (int i = 0; i < kRoleCount; ++i)
      if (slot_[i] == v && i != static_cast<int>(r)) throw GameError("vertex " + std::to_string(v) + " already carries a role");
    slot_[static_cast<int>(r)] = static_cast<std::int8_t>(v);
  }
  void erase(Role r) { slot_[static_cast<int>(r)] = -1; }
  void clear() { slot_.fill(-1); }
  bool empty() const { return mask() == 0; }

  // Role tag index carried by v, or -1.
  int tag_of(VertexId v) const {
    for (int i = 0; i < kRoleCount; ++i)
      if (slot_[i] == v) return i;
    return -1;
  }
  std::uint16_t mask() const {
    std::uint16_t m = 0;
    for (int i = 0; i < kRoleCount; ++i)
      if (slot_[i] >= 0) m |= std::uint16_t(1u << i);
    return m;
  }
  void swap_roles(Role r, Role s) { std::swap(slot_[static_cast<int>(r)], slot_[static_cast<int>(s)]); }

  // Relabels every tagged vertex through perm (old id -> new id).
  RoleMap mapped(const std::vector<int>& perm) const {
    RoleMap out;
    for (int i = 0; i < kRoleCount; ++i)
      if (slot_[i] >= 0) out.slot_[i] = static_cast<std::int8_t>(perm[slot_[i]]);
    return out;
  }

  void validate(const Position& p) const {
    for (int i = 0; i < kRoleCount; ++i)
      if (slot_[i] >= p.vertex_count()) throw GameError("role " + std::string(kRoleNames[i]) + " names a missing vertex");
  }

  bool operator==(const RoleMap&) const = default;

 private:
  std::array<std::int8_t, kRoleCount> slot_{};
};

// Byte string: [t][turn][n][role mask lo][role mask hi] then one big-endian
// 16-bit word per edge (i<<6 | j<<1 | colour) in increasing order, where i<j
// are canonical labels. Tagged vertices take labels 0..k-1 in role order.
struct CanonicalKey {
  std::string bytes;
  auto operator<=>(const CanonicalKey&) const = default;
};

inline std::string base64url_encode(std::string_view in) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  std::string out;
  out.reserve((in.size() * 4 + 2) / 3);
  std::size_t i = 0;
  for (; i + 2 < in.size(); i += 3) {
    std::uint32_t w = std::uint8_t(in[i]) << 16 | std::uint8_t(in[i + 1]) << 8 | std::uint8_t(in[i + 2]);
    for (int s = 18; s >= 0; s -= 6) out += kAlphabet[(w >> s) & 63];
  }
  if (i + 1 == in.size()) {
    std::uint32_t w = std::uint8_t(in[i]) << 16;
    out += kAlphabet[(w >> 18) & 63];
    out += kAlphabet[(w >> 12) & 63];
  } else if (i + 2 == in.size()) {
    std::uint32_t w = std::uint8_t(in[i]) << 16 | std::uint8_t(in[i + 1]) << 8;
    out += kAlphabet[(w >> 18) & 63];
    out += kAlphabet[(w >> 12) & 63];
    out += kAlphabet[(w >> 6) & 63];
  }
  return out;
}

inline std::string base64url_decode(std::string_view in) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '-') return 62;
    if (c == '_') return 63;
    throw GameError(std::string("bad base64url character '") + c + "'");
  };
  if (in.size() % 4 == 1) throw GameError("bad base64url length");
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : in) {
    acc = (acc << 6) | value(c);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((acc >> bits) & 0xff);
    }
  }
  return out;
}

inline std::string to_string(const CanonicalKey& k) { return base64url_encode(k.bytes); }
inline CanonicalKey parse_key(std::string_view text) { return {base64url_decode(text)}; }

// Rebuilds the canonically labelled position and role map a key describes.
// The decoded position has no history and skips the turn/count check.
inline std::pair<Position, RoleMap> decode_key(const CanonicalKey& key) {
  const std::string& b = key.bytes;
  if (b.size() < 5 || (b.size() - 5) % 2 != 0) throw GameError("malformed canonical key");
  int t = std::uint8_t(b[0]);
  auto turn = std::uint8_t(b[1]) == 0 ? PlayerId::P1 : PlayerId::P2;
  int n = std::uint8_t(b[2]);
  std::uint16_t mask = std::uint16_t(std::uint8_t(b[3]) | std::uint8_t(b[4]) << 8);
  std::vector<std::pair<Edge, PlayerId>> edges;
  for (std::size_t i = 5; i < b.size(); i += 2) {
    int w = std::uint8_t(b[i]) << 8 | std::uint8_t(b[i + 1]);
    int u = w >> 6, v = (w >> 1) & 31;
    if (u >= v || v >= n) throw GameError("malformed canonical key");
    edges.emplace_back(Edge(u, v), (w & 1) ? PlayerId::P2 : PlayerId::P1);
  }
  Position p = Position::from_edges(t, turn, edges, true);
  if (p.vertex_count() != n) throw GameError("malformed canonical key");
  RoleMap roles;
  int next = 0;
  for (int i = 0; i < kRoleCount; ++i)
    if (mask >> i & 1) {
      if (next >= n) throw GameError("malformed canonical key");
      roles.set(static_cast<Role>(i), next++);
    }
  return {p, roles};
}

using Permutation = std::vector<int>;

struct CanonicalForm {
  std::vector<int> label;  // vertex -> canonical label
  std::vector<int> order;  // canonical label -> vertex
  std::vector<Permutation> generators;  // automorphisms found during the search
  CanonicalKey key;
};

namespace detail {

struct Graph {
  int n = 0;
  std::array<VertexMask, kMaxVertices> adj1{}, adj2{};
};

using Cells = std::vector<VertexMask>;

// Splits cells until every cell is equitable with respect to every other.
// Sub-cells appear in increasing order of their neighbour counts, so the
// result depends only on the structure, never on vertex ids.
inline void refine(const Graph& g, Cells& cells) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < cells.size(); ++s) {
      const VertexMask splitter = cells[s];
      for (std::size_t i = 0; i < cells.size(); ++i) {
        VertexMask cell = cells[i];
        if (std::has_single_bit(cell)) continue;
        std::array<std::pair<int, int>, kMaxVertices> keyed;
        int cnt = 0;
        for (VertexMask m = cell; m; m &= m - 1) {
          int v = std::countr_zero(m);
          keyed[cnt++] = {std::popcount(g.adj1[v] & splitter) << 6 | std::popcount(g.adj2[v] & splitter), v};
        }
        bool uniform = true;
        for (int k = 1; k < cnt; ++k)
          if (keyed[k].first != keyed[0].first) { uniform = false; break; }
        if (uniform) continue;
        std::sort(keyed.begin(), keyed.begin() + cnt);
        Cells parts;
        VertexMask cur = 0;
        for (int k = 0; k < cnt; ++k) {
          if (k > 0 && keyed[k].first != keyed[k - 1].first) {
            parts.push_back(cur);
            cur = 0;
          }
          cur |= VertexMask{1} << keyed[k].second;
        }
        parts.push_back(cur);
        cells.erase(cells.begin() + i);
        cells.insert(cells.begin() + i, parts.begin(), parts.end());
        i += parts.size() - 1;
        changed = true;
      }
    }
  }
}

struct Searcher {
  const Graph& g;
  std::vector<std::uint16_t> best_code;
  std::vector<int> best_order;
  bool have_best = false;
  std::vector<Permutation> generators;

  explicit Searcher(const Graph& graph) : g(graph) {}

  std::vector<std::uint16_t> code_of(const std::vector<int>& label) const {
    std::vector<std::uint16_t> code;
    for (int u = 0; u < g.n; ++u) {
      for (int c = 0; c < 2; ++c) {
        VertexMask m = (c == 0 ? g.adj1[u] : g.adj2[u]) >> (u + 1);
        for (; m; m &= m - 1) {
          int v = u + 1 + std::countr_zero(m);
          int a = label[u], b = label[v];
          if (a > b) std::swap(a, b);
          code.push_back(std::uint16_t(a << 6 | b << 1 | c));
        }
      }
    }
    std::sort(code.begin(), code.end());
    return code;
  }

  void leaf(const Cells& cells) {
    std::vector<int> order(g.n), label(g.n);
    for (int i = 0; i < g.n; ++i) {
      order[i] = std::countr_zero(cells[i]);
      label[order[i]] = i;
    }
    auto code = code_of(label);
    if (!have_best || code < best_code) {
      best_code = std::move(code);
      best_order = std::move(order);
      have_best = true;
    } else if (code == best_code) {
      Permutation gamma(g.n);
      bool identity = true;
      for (int v = 0; v < g.n; ++v) {
        gamma[v] = best_order[label[v]];
        identity &= gamma[v] == v;
      }
      if (!identity) generators.push_back(std::move(gamma));
    }
  }

  void search(const Cells& cells, std::vector<int>& path) {
    if (static_cast<int>(cells.size()) == g.n) {
      leaf(cells);
      return;
    }
    std::size_t target = 0;
    while (std::has_single_bit(cells[target])) ++target;
    std::vector<int> explored;
    for (VertexMask m = cells[target]; m; m &= m - 1) {
      int v = std::countr_zero(m);
      if (!explored.empty() && same_orbit_as_explored(v, explored, path)) continue;
      Cells next = cells;
      next[target] = cells[target] & ~(VertexMask{1} << v);
      next.insert(next.begin() + target, VertexMask{1} << v);
      refine(g, next);
      path.push_back(v);
      search(next, path);
      path.pop_back();
      explored.push_back(v);
    }
  }

  // Is v in the orbit of an explored sibling under the automorphisms found so
  // far that fix the current path pointwise?
  bool same_orbit_as_explored(int v, const std::vector<int>& explored, const std::vector<int>& path) const {
    std::vector<int> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const auto& gamma : generators) {
      bool fixes = true;
      for (int w : path)
        if (gamma[w] != w) { fixes = false; break; }
      if (!fixes) continue;
      any = true;
      for (int x = 0; x < g.n; ++x) parent[find(x)] = find(gamma[x]);
    }
    if (!any) return false;
    for (int u : explored)
      if (find(u) == find(v)) return true;
    return false;
  }
};

}  // namespace detail

inline CanonicalForm canonical_form(const Position& p, const RoleMap& roles) {
  const int n = p.vertex_count();
  if (n > kMaxVertices) throw GameError("position too large to canonicalise");
  roles.validate(p);
  detail::Graph g;
  g.n = n;
  for (int v = 0; v < n; ++v) {
    g.adj1[v] = p.neighbors(PlayerId::P1, v);
    g.adj2[v] = p.neighbors(PlayerId::P2, v);
  }
  // Initial cells ordered by (role tag, untagged last; P1 degree; P2 degree).
  std::vector<std::pair<int, int>> keyed;
  for (int v = 0; v < n; ++v) {
    int tag = roles.tag_of(v);
    int k = (tag < 0 ? 255 : tag) << 12 | std::popcount(g.adj1[v]) << 6 | std::popcount(g.adj2[v]);
    keyed.emplace_back(k, v);
  }
  std::sort(keyed.begin(), keyed.end());
  detail::Cells cells;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || keyed[i].first != keyed[i - 1].first) cells.push_back(0);
    cells.back() |= VertexMask{1} << keyed[i].second;
  }
  detail::refine(g, cells);
  detail::Searcher s(g);
  std::vector<int> path;
  if (n > 0) s.search(cells, path);

  CanonicalForm out;
  out.order = s.best_order;
  out.label.assign(n, 0);
  for (int i = 0; i < n; ++i) out.label[out.order[i]] = i;
  out.generators = std::move(s.generators);
  std::string& b = out.key.bytes;
  std::uint16_t mask = roles.mask();
  b.reserve(5 + 2 * s.best_code.size());
  b += static_cast<char>(p.t());
  b += static_cast<char>(index(p.turn()));
  b += static_cast<char>(n);
  b += static_cast<char>(mask & 0xff);
  b += static_cast<char>(mask >> 8);
  for (std::uint16_t w : s.best_code) {
    b += static_cast<char>(w >> 8);
    b += static_cast<char>(w & 0xff);
  }
  return out;
}

inline CanonicalKey canonical_key(const Position& p, const RoleMap& roles = {}) { return canonical_form(p, roles).key; }

// Relabels p through perm (old id -> new id); perm must be a bijection on 0..n-1.
inline Position permuted(const Position& p, const Permutation& perm) {
  std::vector<std::pair<Edge, PlayerId>> edges;
  for (PlayerId who : {PlayerId::P1, PlayerId::P2})
    for (const Edge& e : p.edges(who)) edges.emplace_back(Edge(perm[e.u], perm[e.v]), who);
  return Position::from_edges(p.t(), p.turn(), edges, true);
}

// Every colour- and role-preserving permutation, as the closure of the
// generators found by canonical_form. Throws above `limit` elements.
inline std::vector<Permutation> automorphisms(const Position& p, const RoleMap& roles = {},
                                              std::size_t limit = 1'000'000) {
  auto form = canonical_form(p, roles);
  const int n = p.vertex_count();
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<Permutation> seen{id};
  std::vector<Permutation> frontier{id};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& g : frontier)
      for (const auto& h : form.generators) {
        Permutation gh(n);
        for (int v = 0; v < n; ++v) gh[v] = h[g[v]];
        if (seen.insert(gh).second) {
          if (seen.size() > limit) throw GameError("automorphism group too large to list");
          next.push_back(std::move(gh));
        }
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

// One orbit of legal move types for the side to move.
struct MoveClass {
  MoveSpec representative;
  int orbit_size = 0;
  std::vector<MoveSpec> members;
  CanonicalKey successor;  // canonical key of the result, same role map
};

// Rank of a move under a canonical labelling; a fresh endpoint ranks as n.
inline std::pair<int, int> move_rank(const MoveSpec& m, const std::vector<int>& label, int n) {
  int a = m.first.fresh ? n : label[m.first.id];
  int b = m.second.fresh ? n : label[m.second.id];
  return {std::min(a, b), std::max(a, b)};
}

// Legal move types up to automorphisms fixing every tagged vertex, with all
// fresh vertices equivalent. Orbits whose successors are isomorphic are merged,
// so the classes are pairwise non-isomorphic as successor positions.
inline std::vector<MoveClass> reduced_moves(const Position& p, const RoleMap& roles = {}) {
  if (is_terminal(p)) throw GameError("no moves from a terminal position");
  const int n = p.vertex_count();
  const PlayerId who = p.turn();
  auto form = canonical_form(p, roles);
  // Move type (u, v) with u < v <= n; v == n stands for a fresh endpoint.
  const int width = n + 1;
  std::vector<int> parent(width * width);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto id = [&](int u, int v) { return u < v ? u * width + v : v * width + u; };
  for (const auto& gamma : form.generators) {
    for (int u = 0; u < n; ++u) {
      parent[find(id(u, n))] = find(id(gamma[u], n));
      for (int v = u + 1; v < n; ++v)
        if (!p.is_colored(u, v)) parent[find(id(u, v))] = find(id(gamma[u], gamma[v]));
    }
  }
  std::vector<std::vector<MoveSpec>> orbits(width * width);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v)
      if (!p.is_colored(u, v)) orbits[find(id(u, v))].push_back(MoveSpec::claim(u, v, who));
    if (n < kMaxVertices) orbits[find(id(u, n))].push_back(MoveSpec::claim_fresh(u, who));
  }
  struct Group {
    std::pair<int, int> rank;
    std::vector<MoveSpec> members;
  };
  std::vector<Group> groups;
  for (auto& o : orbits) {
    if (o.empty()) continue;
    auto best = *std::min_element(o.begin(), o.end(), [&](const MoveSpec& x, const MoveSpec& y) {
      return move_rank(x, form.label, n) < move_rank(y, form.label, n);
    });
    groups.push_back({move_rank(best, form.label, n), std::move(o)});
    std::swap(groups.back().members.front(),
              *std::find(groups.back().members.begin(), groups.back().members.end(), best));
  }
  if (n + 2 <= kMaxVertices) groups.push_back({{n, n + 1}, {MoveSpec::fresh_pair(who)}});
  std::sort(groups.begin(), groups.end(), [](const Group& x, const Group& y) { return x.rank < y.rank; });

  std::vector<MoveClass> out;
  for (auto& grp : groups) {
    CanonicalKey succ = canonical_key(apply(p, grp.members.front()), roles);
    auto same = std::find_if(out.begin(), out.end(), [&](const MoveClass& c) { return c.successor == succ; });
    if (same != out.end()) {
      same->orbit_size += static_cast<int>(grp.members.size());
      same->members.insert(same->members.end(), grp.members.begin(), grp.members.end());
      continue;
    }
    MoveClass c;
    c.representative = grp.members.front();
    c.orbit_size = static_cast<int>(grp.members.size());
    c.members = std::move(grp.members);
    c.successor = std::move(succ);
    out.push_back(std::move(c));
  }
  return out;
}

// Number of legal move types: uncoloured existing pairs, one existing-fresh
// type per vertex, and the fresh-fresh type.
inline int move_type_count(const Position& p) { return static_cast<int>(legal_moves(p).size()); }

}  // namespace ramsey

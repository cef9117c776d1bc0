#pragma once

// Bounded perfect-play search. W(p, d): the side to move forces a win within
// d plies. L(p, d): the opponent forces a win within d plies. Anything else is
// Unknown at that horizon; the game may be drawn or simply deeper.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ramsey/core.hpp"
#include "ramsey/symmetry.hpp"

namespace ramsey {

enum class Verdict { MoverWin, MoverLoss, Unknown };

struct Outcome {
  Verdict verdict = Verdict::Unknown;
  int plies = 0;  // win or loss depth; 0 when unknown

  bool operator==(const Outcome&) const = default;
};

inline std::string to_string(const Outcome& o) {
  switch (o.verdict) {
    case Verdict::MoverWin: return "MoverWin(" + std::to_string(o.plies) + ")";
    case Verdict::MoverLoss: return "MoverLoss(" + std::to_string(o.plies) + ")";
    default: return "Unknown";
  }
}

struct SearchLimits {
  int max_plies = 16;
  long long node_budget = 5'000'000;
};

class Solver {
 public:
  explicit Solver(SearchLimits limits = {}) : limits_(limits) {
    if (limits.max_plies < 1 || limits.node_budget < 1) throw GameError("search limits must be positive");
  }

  // Iterative deepening: the first horizon at which a verdict appears is the
  // minimal win (or loss) depth.
  Outcome solve(const Position& p) {
    if (is_terminal(p)) throw GameError("cannot solve a terminal position");
    nodes_ = 0;
    for (int d = 1; d <= limits_.max_plies; ++d) {
      Result r = search(p, d);
      if (r == Result::Budget) return {};
      if (r == Result::Win) return {Verdict::MoverWin, d};
      if (r == Result::Loss) return {Verdict::MoverLoss, d};
    }
    return {};
  }

  // A move reaching a position lost for the opponent within d-1 plies, where
  // d is the minimal win depth; the first such move in canonical order.
  MoveSpec best_move(const Position& p) {
    Outcome o = solve(p);
    if (o.verdict != Verdict::MoverWin) throw GameError("no certified win within the search limits");
    auto form = canonical_form(p, {});
    const int n = p.vertex_count();
    if (o.plies == 1) {
      auto wm = winning_moves(p, p.turn());
      auto best = *std::min_element(wm.begin(), wm.end(), [&](const Edge& x, const Edge& y) {
        return move_rank(MoveSpec::claim(x.u, x.v, p.turn()), form.label, n) <
               move_rank(MoveSpec::claim(y.u, y.v, p.turn()), form.label, n);
      });
      return MoveSpec::claim(best.u, best.v, p.turn());
    }
    for (const auto& c : reduced_moves(p, {})) {
      Position q = apply(p, c.representative);
      if (wins(q, p.turn())) return c.representative;
      Result r = search(q, o.plies - 1);
      if (r == Result::Budget) break;
      if (r == Result::Loss) return c.representative;
    }
    throw GameError("search budget exhausted while extracting the winning move");
  }

  long long nodes() const { return nodes_; }
  std::size_t table_size() const { return table_.size(); }

 private:
  enum class Result { Win, Loss, Unknown, Budget };

  static constexpr int kNever = INT_MAX;

  struct Entry {
    int win_at = kNever;     // W holds from this horizon on
    int loss_at = kNever;    // L holds from this horizon on
    int no_win_up_to = 0;    // W fails at every horizon up to this one
    int no_loss_up_to = 0;
  };

  Result search(const Position& p, int d) {
    if (++nodes_ > limits_.node_budget) return Result::Budget;
    const PlayerId me = p.turn(), them = opponent(me);
    if (has_winning_move(p, me)) return Result::Win;
    if (d <= 1) return Result::Unknown;
    auto theirs = winning_moves(p, them);
    if (theirs.size() >= 2) return Result::Loss;
    if (d == 2) return Result::Unknown;
    if (theirs.size() == 1) {
      // Anything but the block loses at once.
      Result r = search(apply(p, MoveSpec::claim(theirs[0].u, theirs[0].v, me)), d - 1);
      return flip(r);
    }
    if (d == 3) return double_threat_available(p) ? Result::Win : Result::Unknown;

    std::string key = canonical_key(p, {}).bytes;
    if (auto it = table_.find(key); it != table_.end()) {
      const Entry& e = it->second;
      if (e.win_at <= d) return Result::Win;
      if (e.loss_at <= d) return Result::Loss;
      if (e.no_win_up_to >= d && e.no_loss_up_to >= d) return Result::Unknown;
    }
    auto classes = reduced_moves(p, {});
    std::vector<std::pair<Position, int>> children;
    children.reserve(classes.size());
    for (const auto& c : classes) {
      Position q = apply(p, c.representative);
      children.emplace_back(std::move(q), 0);
      children.back().second = static_cast<int>(winning_moves(children.back().first, me).size());
    }
    std::vector<int> order(classes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      if (children[x].second != children[y].second) return children[x].second > children[y].second;
      return classes[x].orbit_size > classes[y].orbit_size;
    });
    bool all_lose = true;
    Result verdict = Result::Unknown;
    for (int i : order) {
      Result r = search(children[i].first, d - 1);
      if (r == Result::Budget) return r;
      if (r == Result::Loss) {
        verdict = Result::Win;
        break;
      }
      if (r != Result::Win) all_lose = false;
    }
    if (verdict != Result::Win && all_lose) verdict = Result::Loss;
    Entry& e = table_[key];
    if (verdict == Result::Win) {
      e.win_at = std::min(e.win_at, d);
      e.no_loss_up_to = kNever;
    } else if (verdict == Result::Loss) {
      e.loss_at = std::min(e.loss_at, d);
      e.no_win_up_to = kNever;
    } else {
      e.no_win_up_to = std::max(e.no_win_up_to, d);
      e.no_loss_up_to = std::max(e.no_loss_up_to, d);
    }
    return verdict;
  }

  // With no threats on either side: is there a move leaving two threats?
  static bool double_threat_available(const Position& p) {
    for (const auto& m : legal_moves(p))
      if (winning_moves(apply(p, m), p.turn()).size() >= 2) return true;
    return false;
  }

  static Result flip(Result r) {
    if (r == Result::Win) return Result::Loss;
    if (r == Result::Loss) return Result::Win;
    return r;
  }

  SearchLimits limits_;
  long long nodes_ = 0;
  std::unordered_map<std::string, Entry> table_;
};

inline Outcome solve(const Position& p, SearchLimits limits = {}) { return Solver(limits).solve(p); }
inline MoveSpec best_move(const Position& p, SearchLimits limits = {}) { return Solver(limits).best_move(p); }

}  // namespace ramsey

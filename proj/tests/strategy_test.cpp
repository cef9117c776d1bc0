#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "ramsey/strategy.hpp"
#include "test_support.hpp"

using namespace ramsey;
using namespace ramsey::testing;

namespace {

struct Played {
  Position p;
  StrategyState s;
};

// Strategy for P1 against uniformly random P2 moves. Stops when P1 is to move
// after `p2_moves` P2 moves, or at the end of the game.
Played play_random(std::mt19937_64& rng, Strategy& strategy, int p2_moves) {
  Position p = new_game(3);
  StrategyState s;
  for (int k = 0; !is_terminal(p); ++k) {
    if (k == p2_moves) break;
    StrategyMove sm = strategy.next_move(p, s);
    p = apply(p, sm.move);
    s = sm.next;
    if (is_terminal(p)) break;
    auto moves = legal_moves(p);
    p = apply(p, moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)]);
  }
  return {p, s};
}

}  // namespace

TEST(StrategyState, TagRoundTrip) {
  for (std::string tag : {"O0", "O3", "T1", "M0", "S2", "C2A", "C1", "E3", "F0", "X0"}) {
    EXPECT_EQ(StrategyState::from_tag(tag, {}).tag(), tag);
  }
  EXPECT_THROW(StrategyState::from_tag("Q1", {}), GameError);
  EXPECT_THROW(StrategyState::from_tag("E", {}), GameError);
  EXPECT_THROW(StrategyState::from_tag("E1AB", {}), GameError);
}

TEST(Strategy, OpeningMoves) {
  Strategy st;
  Position p = new_game(3);
  StrategyMove m = st.next_move(p, {});
  EXPECT_EQ(to_string(m.move), "new-new");
  EXPECT_EQ(m.next.tag(), "O1");
  p = apply(p, m.move);

  // P2 touches only b: roles swap so that a is the touched end; P1 extends
  // from a either way.
  Position q = apply(p, MoveSpec::claim_fresh(1, PlayerId::P2));
  StrategyMove m2 = st.next_move(q, m.next);
  EXPECT_EQ(to_string(m2.move), "1-new");
  EXPECT_EQ(m2.next.roles.at(Role::a), 1);
  EXPECT_EQ(m2.next.roles.at(Role::d), 3);

  Position r = apply(p, MoveSpec::claim_fresh(0, PlayerId::P2));
  StrategyMove m3 = st.next_move(r, m.next);
  EXPECT_EQ(to_string(m3.move), "0-new");
  EXPECT_EQ(m3.next.roles.at(Role::a), 0);

  Position u = apply(p, MoveSpec::fresh_pair(PlayerId::P2));
  EXPECT_EQ(st.next_move(u, m.next).next.roles.at(Role::a), 0);
}

TEST(Strategy, TakesImmediateWin) {
  Strategy st;
  Position p = build(3, V, {{0, 1, V}, {0, 2, V}, {1, 2, V}, {0, 3, V}, {1, 3, V}, {0, 4, V}, {5, 6, B}, {5, 7, B}});
  StrategyMove m = st.next_move(p, StrategyState::from_tag("E2", {}));
  EXPECT_TRUE(m.immediate_win);
  EXPECT_EQ(to_string(m.move), "1-4");
}

TEST(Strategy, RejectsWrongInputs) {
  Strategy st;
  EXPECT_THROW(st.next_move(new_game(2), {}), GameError);
  Position p = apply(new_game(3), MoveSpec::fresh_pair(PlayerId::P1));
  EXPECT_THROW(st.next_move(p, {}), GameError);
  // Unblocked P2 threat: the script has no answer, so it reports a gap.
  Position q = build(3, V, {{0, 1, B}, {0, 2, B}, {1, 2, B}, {0, 3, B}, {1, 3, B}, {0, 4, B}, {5, 6, V}, {5, 7, V}});
  EXPECT_THROW(st.next_move(q, StrategyState::from_tag("E0", {})), VerificationGap);
}

TEST(Strategy, TrianglePendantShape) {
  auto tp = detail::triangle_pendant(build(3, V, {{0, 1, V}, {0, 2, V}, {1, 2, V}, {0, 3, V}, {4, 5, B}}));
  ASSERT_TRUE(tp.has_value());
  EXPECT_EQ(tp->a, 0);
  EXPECT_EQ(tp->d, 3);
  EXPECT_FALSE(detail::triangle_pendant(build(3, V, {{0, 1, V}, {0, 2, V}, {1, 2, V}, {1, 3, V}, {0, 3, V}})));
  EXPECT_FALSE(detail::triangle_pendant(build(3, V, {{0, 1, V}, {0, 2, V}, {0, 3, V}, {0, 4, V}})));
}

TEST(Strategy, SafeMainAvoidsP2DoubleCentre) {
  // P2 holds K_{2,2} with mains 0 and 4 (leaves 5 and 6), so 0 is unsafe.
  Position p = build(3, V,
                     {{0, 1, V}, {0, 2, V}, {1, 2, V}, {0, 3, V}, {1, 3, V}, {0, 4, B}, {0, 5, B}, {4, 5, B}, {0, 6, B},
                      {4, 6, B}});
  EXPECT_EQ(select_safe_main(p, {0, 1}), 1);
  EXPECT_EQ(select_safe_main(p, {1, 0}), 1);
  Position q = build(3, V, {{0, 1, V}, {0, 2, V}, {1, 2, V}, {0, 3, V}, {1, 3, V}, {4, 5, B}});
  VertexId s = select_safe_main(q, {0, 1});
  EXPECT_TRUE(s == 0 || s == 1);
  EXPECT_EQ(select_safe_main(q, {1, 0}), s);
}

TEST(Strategy, WholeScriptFitsThePlyBound) {
  Strategy st;
  auto d = st.script_depth(new_game(3), {});
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(*d, 23);
}

TEST(Strategy, BeatsRandomOpponents) {
  std::mt19937_64 rng(2024);
  Strategy st;
  for (int g = 0; g < 300; ++g) {
    Played r = play_random(rng, st, 100);
    ASSERT_EQ(outcome(r.p), GameOutcome::P1Win) << "game " << g;
    EXPECT_LE(r.p.history_size(), 23u);
  }
}

TEST(Strategy, EquivariantUnderRelabelling) {
  // Same position and roles under a random relabelling: the chosen move and
  // successor agree up to the relabelling.
  std::mt19937_64 rng(99);
  Strategy st;
  for (int g = 0; g < 150; ++g) {
    Played r = play_random(rng, st, 1 + g % 8);
    if (is_terminal(r.p)) continue;
    Permutation perm(r.p.vertex_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Position q = permuted(r.p, perm);
    StrategyState qs = r.s;
    qs.roles = r.s.roles.mapped(perm);
    StrategyMove a = st.next_move(r.p, r.s), b = st.next_move(q, qs);
    EXPECT_EQ(a.next.tag(), b.next.tag());
    EXPECT_EQ(canonical_key(apply(r.p, a.move), a.next.roles), canonical_key(apply(q, b.move), b.next.roles));
  }
}

#include <gtest/gtest.h>

#include <sstream>

#include "ramsey/verifier.hpp"
#include "test_support.hpp"

using namespace ramsey;
using namespace ramsey::testing;

namespace {

const VerifyResult& theorem() {
  static const VerifyResult r = verify(new_game(3), {}, {24, 1, {}});
  return r;
}

// Some P2 node with at least two classes, and a P1 node that does not win on
// the spot, picked in key order so the mutations are reproducible.
std::string first_node(const Certificate& c, bool p2) {
  for (const auto& [key, node] : c.nodes) {
    if (p2 && node.mover == PlayerId::P2 && node.rule == "classes" && node.children.size() >= 2) return key;
    if (!p2 && node.mover == PlayerId::P1 && !node.win) return key;
  }
  return {};
}

// A position meeting the end-position hypotheses: P1 holds K_{2,2} (mains 0,1;
// leaves 2,3), P2 has five edges and no threat. P1 to move.
Position end_entry() {
  return build(3, V, {{0, 1, V}, {0, 2, V}, {1, 2, V}, {0, 3, V}, {1, 3, V}, {2, 3, B}, {4, 5, B}, {4, 6, B}, {0, 7, B},
                      {6, 7, B}},
               false);
}

}  // namespace

TEST(Verifier, TheoremHolds) {
  const VerifyResult& r = theorem();
  ASSERT_TRUE(r.ok) << r.error;
  const CertStats& st = r.certificate.stats;
  EXPECT_LE(st.max_depth, 24);
  EXPECT_EQ(st.max_depth, 23);
  EXPECT_EQ(st.fallback_moves, 0u);
  EXPECT_EQ(st.nodes, st.p1_nodes + st.p2_nodes);
  EXPECT_EQ(st.nodes, r.certificate.nodes.size());
  EXPECT_EQ(st.opening_positions, 15u);
  EXPECT_EQ(st.critical_classes.size(), 3u);
  EXPECT_EQ(r.certificate.nodes.at(r.certificate.root).depth, 23);
}

TEST(Verifier, EveryLeafIsAP1Win) {
  for (const auto& [key, node] : theorem().certificate.nodes) {
    if (node.mover != PlayerId::P1 || !node.win) continue;
    NodeRef ref = decode_node(key);
    Position q = apply(ref.position, parse_move(node.move, PlayerId::P1));
    ASSERT_TRUE(wins(q, PlayerId::P1)) << key;
    ASSERT_FALSE(wins(q, PlayerId::P2)) << key;
  }
}

TEST(Verifier, TighterBoundFailsWithCounterexample) {
  VerifyResult r = verify(new_game(3), {}, {22, 1, {}});
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.error.empty());
  EXPECT_FALSE(r.counterexample.empty());
}

TEST(Verifier, ThreadCountDoesNotChangeTheCertificate) {
  VerifyResult r = verify(new_game(3), {}, {24, 3, {}});
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(certificate_text(r.certificate), certificate_text(theorem().certificate));
}

TEST(Verifier, CheckerAcceptsAndRoundTrips) {
  const Certificate& c = theorem().certificate;
  CheckResult chk = check_certificate(c, 5);
  EXPECT_TRUE(chk.ok) << chk.node << ": " << chk.message;
  EXPECT_EQ(chk.root_depth, 23);
  Certificate back = certificate_from_json(nlohmann::json::parse(certificate_text(c)));
  EXPECT_EQ(certificate_text(back), certificate_text(c));
  EXPECT_TRUE(check_certificate(back).ok);
}

TEST(Verifier, CheckerRejectsDeletedClass) {
  Certificate c = theorem().certificate;
  std::string key = first_node(c, true);
  ASSERT_FALSE(key.empty());
  c.nodes[key].children.pop_back();
  EXPECT_FALSE(check_certificate(c).ok);
}

TEST(Verifier, CheckerRejectsFakeWin) {
  Certificate c = theorem().certificate;
  std::string key = first_node(c, false);
  ASSERT_FALSE(key.empty());
  c.nodes[key].win = true;
  c.nodes[key].child.clear();
  c.nodes[key].depth = 1;
  EXPECT_FALSE(check_certificate(c).ok);
}

TEST(Verifier, CheckerRejectsWrongDepthAndMissingNode) {
  Certificate c = theorem().certificate;
  c.nodes[c.root].depth = 21;
  EXPECT_FALSE(check_certificate(c).ok);

  Certificate d = theorem().certificate;
  std::string p1 = first_node(d, false);
  std::string child = d.nodes[p1].child;
  ASSERT_FALSE(child.empty());
  d.nodes.erase(child);
  EXPECT_FALSE(check_certificate(d).ok);
}

TEST(Verifier, CheckerRejectsWrongMove) {
  Certificate c = theorem().certificate;
  // Swap in a move to a non-isomorphic position at the first P1 node that has
  // one; the stored child no longer matches.
  bool mutated = false;
  for (auto& [key, n] : c.nodes) {
    if (n.mover != PlayerId::P1 || n.win) continue;
    NodeRef ref = decode_node(key);
    std::string reached = stripped_key(apply(ref.position, parse_move(n.move, PlayerId::P1)));
    for (const auto& m : legal_moves(ref.position)) {
      Position q = apply(ref.position, m);
      if (stripped_key(q) == reached || wins(q, PlayerId::P1)) continue;
      n.move = to_string(m);
      mutated = true;
      break;
    }
    if (mutated) break;
  }
  ASSERT_TRUE(mutated);
  EXPECT_FALSE(check_certificate(c).ok);
}

TEST(Verifier, EndPositionEntriesWithinNinePlies) {
  PhaseReport lr = phase_report(theorem().certificate);
  EXPECT_GT(lr.end_entries, 0u);
  EXPECT_EQ(lr.end_entries_ok, lr.end_entries);
  EXPECT_EQ(lr.end_entries_within_9, lr.end_entries);
  EXPECT_EQ(lr.mainlem_shape_ok, lr.mainlem_entries);
  EXPECT_EQ(lr.generic + lr.critical + lr.fallback, 15u);
  EXPECT_EQ(lr.critical, 3u);
  EXPECT_EQ(lr.fallback, 0u);
  EXPECT_TRUE(lr.problems.empty());
}

TEST(Verifier, EndPositionSubtreeFromFile) {
  Position p = end_entry();
  StrategyState s = infer_state(p);
  EXPECT_EQ(s.phase, Phase::END_POSITION);
  VerifyResult r = verify(p, s, {9, 1, {}});
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_LE(r.certificate.stats.max_depth, 9);
  EXPECT_TRUE(check_certificate(r.certificate, 3).ok);
  EXPECT_FALSE(verify(p, s, {4, 1, {}}).ok);
}

TEST(Verifier, DotExport) {
  std::ostringstream out;
  write_dot(verify(end_entry(), StrategyState::from_tag("E0", {}), {9, 1, {}}).certificate, out);
  EXPECT_NE(out.str().find("digraph"), std::string::npos);
  EXPECT_NE(out.str().find("->"), std::string::npos);
}

TEST(Verifier, ExplicitIsomorphism) {
  Position p = build(3, V, {{0, 1, V}, {1, 2, B}, {2, 3, V}});
  Position q = permuted(p, {3, 2, 1, 0});
  auto iso = detail::explicit_isomorphism(p, q);
  ASSERT_TRUE(iso.has_value());
  EXPECT_EQ(permuted(p, *iso), q);
  EXPECT_FALSE(detail::explicit_isomorphism(p, build(3, V, {{0, 1, V}, {1, 2, V}, {2, 3, B}})).has_value());
}

TEST(Verifier, CheckerRejectsBlockingInsteadOfWinning) {
  // P2 threatens 1-4. P1 has no win, but claiming 1-4 both blocks and leaves
  // P1 two threats, so the line is sound. The script never relies on such
  // blocks, and a certificate that records one is refused.
  Position p = build(3, V, {{0, 1, B}, {0, 2, B}, {1, 2, B}, {0, 3, B}, {1, 3, B}, {0, 4, B}, {1, 5, V}, {4, 5, V},
                            {1, 6, V}, {4, 6, V}, {4, 7, V}, {1, 8, V}});
  ASSERT_EQ(threats(p, PlayerId::P2), std::vector<Edge>{Edge(1, 4)});
  ASSERT_FALSE(has_winning_move(p, PlayerId::P1));
  Position q = apply(p, MoveSpec::claim(1, 4, PlayerId::P1));
  ASSERT_EQ(threats(q, PlayerId::P1).size(), 2u);
  Certificate c;
  c.root_position = p;
  c.root = node_key(canonical_key(p), "X0");
  std::string child = node_key(canonical_key(q), "X0");
  c.nodes[c.root] = CertNode{PlayerId::P1, 3, "1-4", child};
  CertNode two;
  two.mover = PlayerId::P2;
  two.depth = 2;
  two.rule = "double";
  c.nodes[child] = two;
  CheckResult r = check_certificate(c);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.message.find("threat"), std::string::npos) << r.message;
}

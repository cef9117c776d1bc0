#include <gtest/gtest.h>

#include <thread>

#include "ramsey/http.hpp"
#include "ramsey/position_io.hpp"
#include "ramsey/symmetry.hpp"

using namespace ramsey;
using nlohmann::json;

namespace {

// Rebuilds the board from a state object.
Position board_of(const json& state) {
  json pos = {{"t", state["t"]}, {"turn", state["turn"].is_null() ? json("P1") : state["turn"]},
              {"edges", state["edges"]}, {"free", true}};
  return position_from_json(pos);
}

// P2 policy for the scripted games: block a P1 threat when there is one,
// otherwise cycle through fresh-fresh, existing-fresh and existing-existing
// moves so that every request shape is exercised.
json p2_move(const json& state, int k) {
  const json& th = state["threats"]["P1"];
  if (!th.empty()) return {{"u", th[0][0]}, {"v", th[0][1]}};
  Position p = board_of(state);
  const int n = p.vertex_count();
  if (k % 3 == 0) return {{"u", "fresh"}, {"v", "fresh"}};
  if (k % 3 == 1) return {{"u", k % n}, {"v", "fresh"}};
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!p.is_colored(u, v)) return {{"u", u}, {"v", v}};
  return {{"u", "fresh"}, {"v", "fresh"}};
}

struct Server {
  GameService service;
  httplib::Server http;
  int port = 0;
  std::thread thread;

  Server() {
    install_routes(http, service);
    port = http.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { http.listen_after_bind(); });
    http.wait_until_ready();
  }
  ~Server() {
    http.stop();
    thread.join();
  }
};

}  // namespace

TEST(GameService, CreateMakesTheFirstEngineMove) {
  GameService s;
  json g = s.create(3);
  EXPECT_EQ(g["gameId"], "1");
  EXPECT_EQ(g["state"]["edges"].size(), 1u);
  EXPECT_EQ(g["state"]["turn"], "P2");
  EXPECT_EQ(g["state"]["outcome"], "Ongoing");
  EXPECT_EQ(g["state"]["transcript"][0], "P1: new-new");
  EXPECT_EQ(s.get("1"), g["state"]);
  EXPECT_THROW(s.create(4), ServiceError);
}

TEST(GameService, Errors) {
  GameService s;
  s.create(3);
  auto status = [&](auto&& fn) {
    try {
      fn();
    } catch (const ServiceError& e) {
      return e.status();
    }
    return 0;
  };
  json before = s.get("1");
  EXPECT_EQ(status([&] { s.move("1", {{"u", 0}, {"v", 1}}); }), 400);  // already coloured
  EXPECT_EQ(status([&] { s.move("1", {{"u", 0}, {"v", 9}}); }), 400);  // no such vertex
  EXPECT_EQ(status([&] { s.move("1", {{"u", 0}}); }), 400);
  EXPECT_EQ(status([&] { s.move("1", {{"u", "x"}, {"v", 1}}); }), 400);
  EXPECT_EQ(s.get("1"), before);
  EXPECT_EQ(status([&] { s.get("7"); }), 404);
  EXPECT_EQ(status([&] { s.move("7", {{"u", 0}, {"v", "fresh"}}); }), 404);
  EXPECT_EQ(status([&] { s.remove("7"); }), 404);
  s.remove("1");
  EXPECT_EQ(status([&] { s.get("1"); }), 404);
}

TEST(GameService, SmallTargetsUseTheSolver) {
  GameService s;
  json g = s.create(1);
  std::string id = g["gameId"];
  json state = g["state"];
  for (int k = 0; state["outcome"] == "Ongoing" && k < 20; ++k) state = s.move(id, p2_move(state, k))["state"];
  EXPECT_EQ(state["outcome"], "P1Win");
  EXPECT_TRUE(state["turn"].is_null());
}

TEST(HttpApi, ScriptedGameEndsInP1Win) {
  Server srv;
  httplib::Client cli("127.0.0.1", srv.port);
  auto created = cli.Post("/api/games", R"({"t":3})", "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  json g = json::parse(created->body);
  std::string id = g["gameId"];
  json state = g["state"];

  // A stubborn P2: mirror the engine's strategy locally and pick the reply
  // class that keeps P1 busy longest, so the game runs its full length.
  Strategy mirror;
  StrategyState s = mirror.next_move(new_game(3), {}).next;
  int p2_moves = 0, fresh_moves = 0, existing_moves = 0;
  while (state["outcome"] == "Ongoing") {
    ASSERT_LT(p2_moves, 30);
    Position p = board_of(state);
    MoveSpec best = MoveSpec::fresh_pair(PlayerId::P2);
    int longest = -1;
    for (const auto& c : reduced_moves(p)) {
      Position q = apply(p, c.representative);
      if (is_terminal(q)) continue;
      auto d = mirror.script_depth(q, s);
      ASSERT_TRUE(d.has_value());
      if (*d > longest) longest = *d, best = c.representative;
    }
    auto endpoint = [](const Endpoint& e) { return e.fresh ? json("fresh") : json(e.id); };
    json mv = {{"u", endpoint(best.first)}, {"v", endpoint(best.second)}};
    auto res = cli.Post("/api/games/" + id + "/moves", mv.dump(), "application/json");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200) << res->body;
    json body = json::parse(res->body);
    EXPECT_TRUE(body["accepted"].get<bool>());
    ++p2_moves;
    (best.fresh_count() > 0 ? fresh_moves : existing_moves)++;
    state = body["state"];
    EXPECT_EQ(body["outcome"], state["outcome"]);
    ASSERT_TRUE(body["engineMove"].is_object());
    StrategyMove sm = mirror.next_move(apply(p, best), s);
    EXPECT_EQ(body["engineMove"]["text"], to_string(sm.move));
    s = sm.next;
    if (state["outcome"] == "Ongoing") EXPECT_EQ(state["turn"], "P2");
  }
  EXPECT_GE(p2_moves, 10);
  EXPECT_GT(fresh_moves, 0);
  EXPECT_GT(existing_moves, 0);
  EXPECT_EQ(state["outcome"], "P1Win");
  Position final_board = board_of(state);
  EXPECT_TRUE(wins(final_board, PlayerId::P1));
  EXPECT_FALSE(wins(final_board, PlayerId::P2));

  auto late = cli.Post("/api/games/" + id + "/moves", R"({"u":"fresh","v":"fresh"})", "application/json");
  ASSERT_TRUE(late);
  EXPECT_EQ(late->status, 409);
  auto got = cli.Get("/api/games/" + id);
  ASSERT_TRUE(got);
  EXPECT_EQ(json::parse(got->body), state);
}

TEST(HttpApi, IllegalMoveLeavesStateUnchanged) {
  Server srv;
  httplib::Client cli("127.0.0.1", srv.port);
  auto created = cli.Post("/api/games", "{}", "application/json");
  ASSERT_TRUE(created);
  std::string id = json::parse(created->body)["gameId"];
  auto before = cli.Get("/api/games/" + id);
  ASSERT_TRUE(before);
  EXPECT_EQ(before->status, 200);

  auto bad = cli.Post("/api/games/" + id + "/moves", R"({"u":0,"v":1})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_FALSE(json::parse(bad->body)["error"].get<std::string>().empty());
  auto junk = cli.Post("/api/games/" + id + "/moves", "{not json", "application/json");
  ASSERT_TRUE(junk);
  EXPECT_EQ(junk->status, 400);
  auto after = cli.Get("/api/games/" + id);
  EXPECT_EQ(after->body, before->body);

  auto missing = cli.Get("/api/games/nope");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  auto del = cli.Delete("/api/games/" + id);
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 200);
  EXPECT_EQ(cli.Get("/api/games/" + id)->status, 404);
  auto bad_t = cli.Post("/api/games", R"({"t":9})", "application/json");
  EXPECT_EQ(bad_t->status, 400);
}

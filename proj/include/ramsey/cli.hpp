#pragma once

// Command-line front end. run() returns the process exit code:
// 0 success, 1 verification failure, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ramsey/http.hpp"
#include "ramsey/ramsey.hpp"

namespace ramsey::cli {

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline void print_stats(std::ostream& out, const Certificate& c) {
  const CertStats& st = c.stats;
  out << "nodes: " << st.nodes << " (P1 " << st.p1_nodes << ", P2 " << st.p2_nodes << ")\n";
  out << "max depth: " << st.max_depth << " plies (bound " << c.bound << ")\n";
  out << "fallback moves: " << st.fallback_moves << "\n";
  out << "END_POSITION entries: " << st.end_entries << "\n";
}

inline void print_opening_report(std::ostream& out, const Certificate& c, const PhaseReport& lr) {
  out << "opening positions after P2's third move: " << c.stats.opening_positions << " (generic " << lr.generic
      << ", critical " << lr.critical << ", fallback " << lr.fallback << ")\n";
  for (const auto& cc : c.stats.critical_classes) out << "  critical class " << cc.label << ": " << cc.position << "\n";
  std::size_t n = c.stats.critical_classes.size();
  if (n == 3) {
    out << "critical classes up to symmetry: 3 (matches the expected 3)\n";
  } else {
    out << "critical classes up to symmetry: " << n << " (FLAG: expected 3)\n";
  }
}

inline void print_phase_report(std::ostream& out, const PhaseReport& lr) {
  out << "end-position entries satisfying the hypotheses: " << lr.end_entries_ok << "/" << lr.end_entries << "\n";
  out << "end-position subtrees within 9 plies: " << lr.end_entries_within_9 << "/" << lr.end_entries << "\n";
  out << "MAINLEM entries with the triangle-and-pendant shape: " << lr.mainlem_shape_ok << "/" << lr.mainlem_entries
      << "\n";
  for (const auto& p : lr.problems) out << "  problem: " << p << "\n";
}

inline int report_failure(std::ostream& err, const VerifyResult& r) {
  err << "verification FAILED: " << r.error << "\n";
  if (!r.counterexample.empty()) {
    err << "counterexample path:\n";
    for (const auto& line : r.counterexample) err << "  " << line << "\n";
  }
  return 1;
}

// Text like "3-7", "3 7", "3-new" or "new new".
inline MoveSpec read_move(std::string line, PlayerId who) {
  for (char& ch : line)
    if (ch == ' ' || ch == ',') ch = '-';
  while (line.find("--") != std::string::npos) line.erase(line.find("--"), 1);
  if (!line.empty() && line.front() == '-') line.erase(0, 1);
  if (!line.empty() && line.back() == '-') line.pop_back();
  return parse_move(line, who);
}

// Engine policy when it plays P2: win, block, search for a forced win, or
// take the first move class in canonical order.
inline MoveSpec p2_engine_move(const Position& p) {
  if (auto w = winning_moves(p, PlayerId::P2); !w.empty()) return MoveSpec::claim(w[0].u, w[0].v, PlayerId::P2);
  if (auto w = winning_moves(p, PlayerId::P1); !w.empty()) return MoveSpec::claim(w[0].u, w[0].v, PlayerId::P2);
  try {
    return Solver({7, 200'000}).best_move(p);
  } catch (const GameError&) {
  }
  return reduced_moves(p, {}).front().representative;
}

inline int play(Streams io, int t, const std::string& side) {
  const PlayerId human = side == "p1" ? PlayerId::P1 : PlayerId::P2;
  Strategy strategy;
  Position p = new_game(t);
  StrategyState state;
  io.err << "You play " << to_string(human) << ". Enter moves like '3-7', '3-new' or 'new-new'; 'quit' to stop.\n";
  while (!is_terminal(p)) {
    if (p.turn() == human) {
      io.err << "[" << p.vertex_count() << " vertices] your move> " << std::flush;
      std::string line;
      if (!std::getline(io.in, line)) return 0;
      if (line == "quit" || line == "exit") return 0;
      if (line.empty()) continue;
      try {
        MoveSpec m = read_move(line, human);
        Position q = apply(p, m);
        io.out << to_string(human) << ": " << to_string(m) << "\n";
        p = std::move(q);
      } catch (const GameError& e) {
        io.err << "illegal move: " << e.what() << "\n";
      }
      continue;
    }
    MoveSpec m;
    if (human == PlayerId::P2) {
      auto reply = engine_move(strategy, p, state);
      m = reply.move;
      state = reply.next;
    } else {
      m = p2_engine_move(p);
    }
    p = apply(p, m);
    io.out << to_string(opponent(human)) << ": " << to_string(m) << "\n";
  }
  io.out << "outcome: " << to_string(outcome(p)) << "\n";
  return 0;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, Streams io) {
  CLI::App app{"Strong Ramsey game engine, solver and certificate verifier"};
  app.require_subcommand(1);

  int t = 3, max_plies = 24, threads = 1, port = 8080;
  long long node_budget = 5'000'000;
  std::string position_path, out_path, side = "p2", cert_path;
  std::optional<std::uint64_t> seed;

  auto* vt = app.add_subcommand("verify-theorem", "verify the scripted t=3 strategy from the empty board");
  auto* vp = app.add_subcommand("verify", "verify the strategy from a position file");
  auto* so = app.add_subcommand("solve", "bounded solver on a position");
  auto* pl = app.add_subcommand("play", "play against the engine in the terminal");
  auto* sv = app.add_subcommand("serve", "serve the HTTP JSON API");
  auto* ed = app.add_subcommand("export-dot", "write a certificate as a Graphviz graph");
  auto* cc = app.add_subcommand("check-cert", "independently re-check a certificate");

  for (auto* sc : {vt, vp, so, pl, sv, ed, cc}) {
    sc->add_option("--t", t, "target parameter t")->check(CLI::PositiveNumber);
    sc->add_option("--max-plies", max_plies, "ply bound")->check(CLI::PositiveNumber);
    sc->add_option("--node-budget", node_budget, "search node budget")->check(CLI::PositiveNumber);
    sc->add_option("--position", position_path, "position JSON file");
    sc->add_option("--out", out_path, "output file");
    sc->add_option("--seed", seed, "seed for randomized checks");
    sc->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sc->add_option("--port", port, "HTTP port")->check(CLI::Range(1, 65535));
    sc->add_option("--as", side, "side the human plays")->check(CLI::IsMember({"p1", "p2"}));
  }
  ed->add_option("certificate", cert_path, "certificate JSON")->required();
  cc->add_option("certificate", cert_path, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    io.out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    io.err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (vt->parsed() || vp->parsed()) {
      Position root = new_game(t);
      StrategyState state;
      if (vp->parsed()) {
        if (position_path.empty()) {
          io.err << "usage error: verify needs --position\n";
          return 2;
        }
        root = load_position(position_path);
        state = infer_state(root);
      }
      if (root.t() != 3) {
        io.err << "usage error: the scripted strategy only covers t = 3\n";
        return 2;
      }
      StrategyOptions so_opts;
      so_opts.bound = max_plies;
      so_opts.fallback_budget = node_budget;
      auto result = verify(root, state, {max_plies, threads, so_opts});
      if (!result.ok) return detail::report_failure(io.err, result);
      const Certificate& cert = result.certificate;
      io.out << "verified: every P2 line ends in a P1 win within " << cert.stats.max_depth << " plies\n";
      detail::print_stats(io.out, cert);
      auto check = check_certificate(cert, seed);
      if (!check.ok) {
        io.err << "certificate check FAILED at " << check.node << ": " << check.message << "\n";
        return 1;
      }
      io.out << "certificate check: ok\n";
      auto lr = phase_report(cert);
      detail::print_phase_report(io.out, lr);
      if (vt->parsed()) detail::print_opening_report(io.out, cert, lr);
      if (!out_path.empty()) {
        save_certificate(cert, out_path);
        io.out << "certificate written to " << out_path << "\n";
      }
      return 0;
    }
    if (so->parsed()) {
      Position p = position_path.empty() ? new_game(t) : load_position(position_path);
      if (is_terminal(p)) {
        io.out << "position is already decided: " << to_string(outcome(p)) << "\n";
        return 0;
      }
      Solver solver({max_plies, node_budget});
      Outcome o = solver.solve(p);
      io.out << to_string(o) << "\n";
      io.out << "nodes: " << solver.nodes() << "\n";
      if (o.verdict == Verdict::MoverWin) io.out << "best move: " << to_string(solver.best_move(p)) << "\n";
      return 0;
    }
    if (pl->parsed()) return detail::play(io, t, side);
    if (sv->parsed()) {
      GameService service;
      httplib::Server server;
      install_routes(server, service);
      io.out << "listening on port " << port << "\n" << std::flush;
      if (!server.listen("0.0.0.0", port)) {
        io.err << "cannot listen on port " << port << "\n";
        return 2;
      }
      return 0;
    }
    if (ed->parsed()) {
      Certificate c = load_certificate(cert_path);
      if (out_path.empty()) {
        write_dot(c, io.out);
      } else {
        std::ofstream f(out_path);
        if (!f) throw GameError("cannot write " + out_path);
        write_dot(c, f);
      }
      return 0;
    }
    if (cc->parsed()) {
      Certificate c = load_certificate(cert_path);
      auto r = check_certificate(c, seed);
      if (!r.ok) {
        io.err << "certificate INVALID at node " << r.node << ": " << r.message << "\n";
        return 1;
      }
      io.out << "certificate ok: " << c.nodes.size() << " nodes, root depth " << r.root_depth << " plies\n";
      return 0;
    }
  } catch (const GameError& e) {
    io.err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ramsey::cli

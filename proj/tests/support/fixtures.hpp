#pragma once

// Shared test inputs: the capacity-constrained Blocksworld example, the toy
// 3-block Blocksworld dataset labelled by exhaustive search, and random
// domains / tasks / graphs.

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "wlkit/wlkit.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return WLKIT_DATA_DIR; }

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline wlkit::Domain cc_domain() {
  return wlkit::parse_domain(read(data_dir() / "ccblocksworld" / "domain.pddl"));
}

inline wlkit::Problem cc_problem(const wlkit::Domain& d) {
  return wlkit::parse_problem(read(data_dir() / "ccblocksworld" / "problem.pddl"), d);
}

/// The 12-node excerpt of the example: objects a b d x y, three true `on`
/// facts, the two goal atoms and capacity(x) = capacity(y) = 3.
inline wlkit::Problem cc_subgraph_problem(const wlkit::Domain& d) {
  return wlkit::parse_problem(read(data_dir() / "ccblocksworld" / "subgraph.pddl"), d);
}

// ---------------------------------------------------------------------------
// Toy Blocksworld: blocks a, b, c; goal tower a on b on c. A configuration
// stores what each block sits on (-1 = table). Moves take a clear block onto
// the table or onto another clear block.

using Config = std::array<int, 3>;

inline bool valid(const Config& below) {
  for (int b = 0; b < 3; ++b) {
    // no cycles
    int x = b, steps = 0;
    while (x != -1 && steps <= 3) x = below[x], ++steps;
    if (steps > 3) return false;
    // at most one block on top of b
    int on_top = 0;
    for (int o = 0; o < 3; ++o) on_top += below[o] == b;
    if (on_top > 1) return false;
  }
  return true;
}

inline std::vector<Config> all_configs() {
  std::vector<Config> out;
  for (int a = -1; a < 3; ++a)
    for (int b = -1; b < 3; ++b)
      for (int c = -1; c < 3; ++c) {
        Config cfg{a, b, c};
        if (cfg[0] != 0 && cfg[1] != 1 && cfg[2] != 2 && valid(cfg)) out.push_back(cfg);
      }
  return out;
}

inline std::vector<Config> successors(const Config& cfg) {
  auto clear = [&](int b) {
    for (int o = 0; o < 3; ++o)
      if (cfg[o] == b) return false;
    return true;
  };
  std::vector<Config> out;
  for (int b = 0; b < 3; ++b) {
    if (!clear(b)) continue;
    for (int dest = -1; dest < 3; ++dest) {
      if (dest == b || dest == cfg[b] || (dest != -1 && !clear(dest))) continue;
      Config next = cfg;
      next[b] = dest;
      out.push_back(next);
    }
  }
  return out;
}

/// Optimal cost-to-go of every configuration, by breadth-first search
/// backwards from the goal (moves are reversible).
inline std::map<Config, int> cost_to_go() {
  const Config goal{1, 2, -1};
  std::map<Config, int> dist{{goal, 0}};
  std::queue<Config> q;
  q.push(goal);
  while (!q.empty()) {
    Config cur = q.front();
    q.pop();
    for (const auto& n : successors(cur))
      if (dist.emplace(n, dist[cur] + 1).second) q.push(n);
  }
  return dist;
}

inline wlkit::Domain blocks_domain() {
  return wlkit::Domain("blocksworld", {{"on", 2}, {"ontable", 1}, {"clear", 1}}, {}, {});
}

inline wlkit::State blocks_state(const Config& cfg) {
  wlkit::State s;
  for (int b = 0; b < 3; ++b) {
    if (cfg[b] == -1)
      s.add_proposition({1, {b}});
    else
      s.add_proposition({0, {b, cfg[b]}});
    bool clear = true;
    for (int o = 0; o < 3; ++o) clear &= cfg[o] != b;
    if (clear) s.add_proposition({2, {b}});
  }
  return s;
}

/// One task, all 13 states of the 3-block space labelled with cost-to-go.
inline wlkit::Dataset blocks_dataset() {
  wlkit::Domain d = blocks_domain();
  const Config start{-1, -1, -1};
  wlkit::Problem p(d, {"a", "b", "c"}, {{true, {0, {0, 1}}}, {true, {0, {1, 2}}}}, {}, blocks_state(start));
  wlkit::DatasetEntry entry{p, {}, std::vector<double>{}};
  auto dist = cost_to_go();
  for (const auto& cfg : all_configs()) {
    entry.states.push_back(blocks_state(cfg));
    entry.labels->push_back(dist.at(cfg));
  }
  return wlkit::Dataset{d, {entry}};
}

/// Two identical states with different labels.
inline wlkit::Dataset degenerate_dataset() {
  wlkit::Dataset ds = blocks_dataset();
  auto& e = ds.entries[0];
  e.states = {e.states[0], e.states[0]};
  e.labels = std::vector<double>{1.0, 2.0};
  return ds;
}

// ---------------------------------------------------------------------------
// Random inputs.

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline wlkit::Domain random_domain(Rng& rng, int max_predicates = 5, int max_functions = 3) {
  std::vector<wlkit::Symbol> preds, funcs;
  std::vector<std::string> consts;
  int np = uniform(rng, 1, max_predicates), nf = uniform(rng, 0, max_functions), nc = uniform(rng, 0, 3);
  for (int i = 0; i < np; ++i) preds.push_back({"p" + std::to_string(i), uniform(rng, 0, 3)});
  for (int i = 0; i < nf; ++i) funcs.push_back({"f" + std::to_string(i), uniform(rng, 0, 2)});
  for (int i = 0; i < nc; ++i) consts.push_back("k" + std::to_string(i));
  return wlkit::Domain("dom" + std::to_string(uniform(rng, 0, 1000)), preds, funcs, consts);
}

inline wlkit::GroundAtom random_atom(Rng& rng, wlkit::SymbolId symbol, int arity, int n_objects) {
  wlkit::GroundAtom a{symbol, {}};
  std::vector<int> pool(n_objects);
  for (int i = 0; i < n_objects; ++i) pool[i] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int k = 0; k < arity; ++k) a.args.push_back(pool[k]);  // distinct arguments
  return a;
}

inline wlkit::State random_state(Rng& rng, const wlkit::Domain& d, int n_objects,
                                 const std::vector<wlkit::GroundAtom>& fluents, int max_props) {
  wlkit::State s;
  int props = uniform(rng, 0, max_props);
  for (int i = 0; i < props; ++i) {
    auto p = uniform(rng, 0, static_cast<int>(d.predicates().size()) - 1);
    if (d.predicates()[p].arity > n_objects) continue;
    s.add_proposition(random_atom(rng, p, d.predicates()[p].arity, n_objects));
  }
  for (const auto& f : fluents) s.set_value(f, static_cast<double>(uniform(rng, -5, 5)));
  return s;
}

struct RandomTask {
  wlkit::Domain domain;
  wlkit::Problem problem;
  std::vector<wlkit::State> states;
};

/// A random task whose first state yields a graph of at most `max_nodes` nodes.
inline RandomTask random_task(Rng& rng, std::size_t max_nodes = 40, int n_states = 1) {
  for (;;) {
    wlkit::Domain d = random_domain(rng);
    int n_objects = uniform(rng, 2, 7);
    std::vector<std::string> objects;
    for (int i = 0; i < n_objects; ++i) objects.push_back("o" + std::to_string(i));
    n_objects += static_cast<int>(d.constants().size());

    std::vector<wlkit::GroundAtom> fluents;
    for (std::size_t f = 0; f < d.functions().size(); ++f) {
      int arity = d.functions()[f].arity;
      for (int k = 0; k < uniform(rng, 0, 3); ++k) {
        auto a = random_atom(rng, static_cast<int>(f), arity, n_objects);
        if (std::find(fluents.begin(), fluents.end(), a) == fluents.end()) fluents.push_back(a);
      }
    }
    std::vector<wlkit::GoalLiteral> goals;
    for (int i = 0; i < uniform(rng, 0, 4); ++i) {
      auto p = uniform(rng, 0, static_cast<int>(d.predicates().size()) - 1);
      if (d.predicates()[p].arity > n_objects) continue;
      goals.push_back({uniform(rng, 0, 4) > 0, random_atom(rng, p, d.predicates()[p].arity, n_objects)});
    }
    std::vector<wlkit::NumericCondition> numeric;
    if (!fluents.empty()) {
      for (int i = 0; i < uniform(rng, 0, 2); ++i) {
        using K = wlkit::Expr::Kind;
        auto var = [&] { return wlkit::Expr::variable(fluents[uniform(rng, 0, static_cast<int>(fluents.size()) - 1)]); };
        wlkit::Expr e = uniform(rng, 0, 1) ? wlkit::Expr::binary(K::Subtract, var(), wlkit::Expr::constant(uniform(rng, -3, 3)))
                                           : wlkit::Expr::binary(K::Add, var(), var());
        numeric.push_back({e, static_cast<wlkit::Comparator>(uniform(rng, 0, 2))});
      }
    }
    std::vector<wlkit::State> states;
    for (int i = 0; i < n_states; ++i) states.push_back(random_state(rng, d, n_objects, fluents, 12));
    wlkit::Problem p(d, objects, goals, numeric, states[0]);
    wlkit::IlgGenerator gen(d);
    gen.set_problem(p);
    if (gen.to_graph(states[0]).node_count() <= max_nodes) return {d, p, states};
  }
}

inline std::vector<wlkit::NodeId> random_permutation(Rng& rng, std::size_t n) {
  std::vector<wlkit::NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<wlkit::NodeId>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

/// Small random graph with colours in [0, n_colours) and edge labels in [0, n_labels).
inline wlkit::Graph random_graph(Rng& rng, int max_nodes, int n_colours, int n_labels, double density) {
  wlkit::Graph g;
  int n = uniform(rng, 1, max_nodes);
  for (int i = 0; i < n; ++i) g.add_node(uniform(rng, 0, n_colours - 1), uniform(rng, -3, 3));
  std::bernoulli_distribution edge(density);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (edge(rng)) g.add_edge(u, v, uniform(rng, 0, n_labels - 1));
  return g;
}

inline wlkit::Graph to_graph(const oracle::SimpleGraph& s) {
  wlkit::Graph g;
  for (int c : s.colours) g.add_node(c);
  for (auto [u, v, l] : s.edges) g.add_edge(u, v, l);
  return g;
}

inline oracle::SimpleGraph to_simple(const wlkit::Graph& g) {
  oracle::SimpleGraph s;
  s.n = static_cast<int>(g.node_count());
  s.colours.assign(g.colours().begin(), g.colours().end());
  for (int u = 0; u < s.n; ++u)
    for (const auto& nb : g.neighbours(u))
      if (u < nb.node) s.edges.emplace_back(u, nb.node, nb.label);
  return s;
}

}  // namespace fixtures

#pragma once

// Brute-force colour refinement used as a reference for the kernels. Colours
// are strings interned level by level in a dictionary shared by every graph
// under comparison, so two graphs get equal multisets exactly when the
// refinement cannot tell them apart. Nothing here touches wlkit's registry
// or key encoding.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct SimpleGraph {
  int n = 0;
  std::vector<int> colours;
  std::vector<std::tuple<int, int, int>> edges;  // u, v, label

  std::vector<std::vector<int>> label_matrix() const {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, -1));
    for (auto [u, v, l] : edges) m[u][v] = m[v][u] = l;
    return m;
  }
};

inline SimpleGraph cycle(int n, int colour = 0) {
  SimpleGraph g{n, std::vector<int>(n, colour), {}};
  for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n, 0);
  return g;
}

inline SimpleGraph disjoint_union(const SimpleGraph& a, const SimpleGraph& b) {
  SimpleGraph g = a;
  g.n = a.n + b.n;
  g.colours.insert(g.colours.end(), b.colours.begin(), b.colours.end());
  for (auto [u, v, l] : b.edges) g.edges.emplace_back(u + a.n, v + a.n, l);
  return g;
}

inline SimpleGraph complete(int n, int colour = 0) {
  SimpleGraph g{n, std::vector<int>(n, colour), {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j, 0);
  return g;
}

using Multiset = std::multiset<std::string>;

class Dictionary {
 public:
  int intern(const std::string& signature) {
    auto [it, inserted] = ids_.emplace(signature, static_cast<int>(ids_.size()));
    (void)inserted;
    return it->second;
  }

 private:
  std::map<std::string, int> ids_;
};

/// Plain WL; `individualised` (if >= 0) starts from a colour no other node has.
inline std::vector<std::vector<int>> wl_levels(const SimpleGraph& g, int iterations, std::vector<Dictionary>& dict,
                                               int individualised = -1) {
  auto labels = g.label_matrix();
  std::vector<std::vector<int>> levels;
  std::vector<int> c(g.n);
  for (int v = 0; v < g.n; ++v)
    c[v] = dict[0].intern(v == individualised ? "X" : "c" + std::to_string(g.colours[v]));
  levels.push_back(c);
  for (int j = 1; j <= iterations; ++j) {
    std::vector<int> next(g.n);
    for (int v = 0; v < g.n; ++v) {
      std::vector<std::string> parts;
      for (int u = 0; u < g.n; ++u)
        if (labels[v][u] >= 0) parts.push_back(std::to_string(c[u]) + "/" + std::to_string(labels[v][u]));
      std::sort(parts.begin(), parts.end());
      std::string sig = std::to_string(c[v]) + "|";
      for (const auto& p : parts) sig += p + ";";
      next[v] = dict[j].intern(sig);
    }
    c = next;
    levels.push_back(c);
  }
  return levels;
}

inline void add_levels(Multiset& m, const std::vector<std::vector<int>>& levels) {
  for (std::size_t j = 0; j < levels.size(); ++j)
    for (int x : levels[j]) m.insert(std::to_string(j) + ":" + std::to_string(x));
}

inline std::vector<Multiset> wl(const std::vector<SimpleGraph>& graphs, int iterations) {
  std::vector<Dictionary> dict(iterations + 1);
  std::vector<Multiset> out;
  for (const auto& g : graphs) {
    Multiset m;
    add_levels(m, wl_levels(g, iterations, dict));
    out.push_back(m);
  }
  return out;
}

inline std::vector<Multiset> iwl(const std::vector<SimpleGraph>& graphs, int iterations) {
  std::vector<Dictionary> dict(iterations + 1);
  std::vector<Multiset> out;
  for (const auto& g : graphs) {
    Multiset m;
    for (int w = 0; w < g.n; ++w) add_levels(m, wl_levels(g, iterations, dict, w));
    out.push_back(m);
  }
  return out;
}

inline std::vector<Multiset> two_wl(const std::vector<SimpleGraph>& graphs, int iterations) {
  std::vector<Dictionary> dict(iterations + 1);
  std::vector<Multiset> out;
  for (const auto& g : graphs) {
    auto labels = g.label_matrix();
    const int n = g.n;
    std::vector<std::vector<int>> c(n, std::vector<int>(n));
    Multiset m;
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u) {
        c[v][u] = dict[0].intern(std::to_string(g.colours[v]) + "," + std::to_string(g.colours[u]) + "," +
                                 (labels[v][u] < 0 ? std::string("none") : std::to_string(labels[v][u])));
        m.insert("0:" + std::to_string(c[v][u]));
      }
    for (int j = 1; j <= iterations; ++j) {
      auto next = c;
      for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) {
          std::vector<std::string> parts;
          for (int w = 0; w < n; ++w) parts.push_back(std::to_string(c[w][u]) + "," + std::to_string(c[v][w]));
          std::sort(parts.begin(), parts.end());
          std::string sig = std::to_string(c[v][u]) + "|";
          for (const auto& p : parts) sig += p + ";";
          next[v][u] = dict[j].intern(sig);
          m.insert(std::to_string(j) + ":" + std::to_string(next[v][u]));
        }
      c = next;
    }
    out.push_back(m);
  }
  return out;
}

inline std::vector<Multiset> two_lwl(const std::vector<SimpleGraph>& graphs, int iterations) {
  std::vector<Dictionary> dict(iterations + 1);
  std::vector<Multiset> out;
  for (const auto& g : graphs) {
    auto labels = g.label_matrix();
    const int n = g.n;
    std::vector<std::vector<int>> c(n, std::vector<int>(n, -1));
    Multiset m;
    for (int v = 0; v < n; ++v)
      for (int u = v + 1; u < n; ++u) {
        int a = std::min(g.colours[v], g.colours[u]), b = std::max(g.colours[v], g.colours[u]);
        c[v][u] = c[u][v] = dict[0].intern(std::to_string(a) + "," + std::to_string(b) + "," +
                                           (labels[v][u] < 0 ? std::string("none") : std::to_string(labels[v][u])));
        m.insert("0:" + std::to_string(c[v][u]));
      }
    for (int j = 1; j <= iterations; ++j) {
      auto next = c;
      for (int v = 0; v < n; ++v)
        for (int u = v + 1; u < n; ++u) {
          std::vector<std::string> parts;
          for (int w = 0; w < n; ++w) {
            if (w == v || w == u) continue;
            if (labels[v][w] < 0 && labels[u][w] < 0) continue;
            int x = c[w][u], y = c[v][w];
            parts.push_back(std::to_string(std::min(x, y)) + "," + std::to_string(std::max(x, y)));
          }
          std::sort(parts.begin(), parts.end());
          std::string sig = std::to_string(c[v][u]) + "|";
          for (const auto& p : parts) sig += p + ";";
          next[v][u] = next[u][v] = dict[j].intern(sig);
          m.insert(std::to_string(j) + ":" + std::to_string(next[v][u]));
        }
      c = next;
    }
    out.push_back(m);
  }
  return out;
}

enum class Kernel { WL, TwoWL, TwoLWL, IWL };

/// True when `kernel` with `iterations` rounds gives `a` and `b` different multisets.
inline bool distinguishes(Kernel kernel, const SimpleGraph& a, const SimpleGraph& b, int iterations) {
  std::vector<Multiset> r;
  switch (kernel) {
    case Kernel::WL: r = wl({a, b}, iterations); break;
    case Kernel::TwoWL: r = two_wl({a, b}, iterations); break;
    case Kernel::TwoLWL: r = two_lwl({a, b}, iterations); break;
    case Kernel::IWL: r = iwl({a, b}, iterations); break;
  }
  return r[0] != r[1];
}

}  // namespace oracle

#pragma once

// Colour refinement kernels over wlkit::Graph:
//
//   wl      node colours refined by (colour, sorted (neighbour colour, edge label))
//   two_wl  ordered node pairs; neighbours of (v,u) are (c(w,u), c(v,w)) for all w
//   two_lwl unordered node pairs; w ranges over N(v) | N(u)
//   iwl     wl rerun once per node, that node starting from the individualised colour
//   ccwl    wl plus an aggregate of continuous node values per colour
//
// All kernels share one ColourRegistry per model and return the multiset of
// every colour produced at iterations 0..L.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wlkit/error.hpp"
#include "wlkit/graph.hpp"
#include "wlkit/registry.hpp"

namespace wlkit {

enum class KernelKind { WL, TwoWL, TwoLWL, IWL, CCWL };

constexpr std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::WL: return "wl";
    case KernelKind::TwoWL: return "2wl";
    case KernelKind::TwoLWL: return "2lwl";
    case KernelKind::IWL: return "iwl";
    case KernelKind::CCWL: return "ccwl";
  }
  return "?";
}

inline std::optional<KernelKind> parse_kernel_kind(std::string_view s) {
  for (KernelKind k : {KernelKind::WL, KernelKind::TwoWL, KernelKind::TwoLWL, KernelKind::IWL, KernelKind::CCWL})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

enum class Aggregator { Sum, Mean, Max };

constexpr std::string_view to_string(Aggregator a) {
  switch (a) {
    case Aggregator::Sum: return "sum";
    case Aggregator::Mean: return "mean";
    case Aggregator::Max: return "max";
  }
  return "?";
}

inline std::optional<Aggregator> parse_aggregator(std::string_view s) {
  for (Aggregator a : {Aggregator::Sum, Aggregator::Mean, Aggregator::Max})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

/// Sorted (colour, count) pairs with positive counts.
class ColourMultiset {
 public:
  ColourMultiset() = default;

  /// Builds from an unordered list of colour occurrences.
  static ColourMultiset from_occurrences(std::vector<ColourId> occurrences) {
    std::sort(occurrences.begin(), occurrences.end());
    ColourMultiset m;
    for (std::size_t i = 0; i < occurrences.size();) {
      std::size_t j = i;
      while (j < occurrences.size() && occurrences[j] == occurrences[i]) ++j;
      m.entries_.emplace_back(occurrences[i], static_cast<std::int64_t>(j - i));
      i = j;
    }
    return m;
  }

  std::int64_t count(ColourId c) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                               [](const auto& e, ColourId x) { return e.first < x; });
    return it != entries_.end() && it->first == c ? it->second : 0;
  }

  std::int64_t total() const {
    std::int64_t n = 0;
    for (const auto& e : entries_) n += e.second;
    return n;
  }

  std::size_t distinct() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const ColourMultiset&, const ColourMultiset&) = default;

 private:
  std::vector<std::pair<ColourId, std::int64_t>> entries_;
};

struct KernelOptions {
  /// Upper bound on the number of node pairs the pair kernels may colour.
  std::size_t pair_budget = 10'000'000;
};

namespace kernel_detail {

enum KeyTag : std::int32_t { WlRefine = 1, PairInit = 2, PairRefine = 3, SetInit = 4, SetRefine = 5 };

constexpr std::int32_t kNoEdge = -1;

inline void check_colours(const Graph& g, ColourId base) {
  for (ColourId c : g.colours())
    if (c < 0 || c > base)
      fail(ErrorKind::InvalidGraph, "categorical colour " + std::to_string(c) + " outside the colour table");
}

inline std::int64_t pack(std::int32_t a, std::int32_t b) {
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

/// One WL refinement round: next[v] = hash(colours[v], {{(colours[u], l) | (u, l) in N(v)}}).
template <RegistryHandle H>
void refine_nodes(const Graph& g, const std::vector<ColourId>& colours, std::vector<ColourId>& next, const H& reg,
                  RefinementKey& key, std::vector<std::int64_t>& scratch) {
  const std::size_t n = g.node_count();
  next.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    scratch.clear();
    for (const auto& nb : g.neighbours(static_cast<NodeId>(v))) scratch.push_back(pack(colours[nb.node], nb.label));
    std::sort(scratch.begin(), scratch.end());
    key.clear();
    key.push_back(WlRefine);
    key.push_back(colours[v]);
    for (std::int64_t p : scratch) {
      key.push_back(static_cast<std::int32_t>(p >> 32));
      key.push_back(static_cast<std::int32_t>(p & 0xffffffff));
    }
    next[v] = reg.resolve(key);
  }
}

/// Runs WL from `colours`, appending every colour of every iteration to
/// `out` and, when `history` is given, recording (colour, node) pairs.
template <RegistryHandle H>
void run_wl(const Graph& g, std::vector<ColourId> colours, std::size_t iterations, const H& reg,
            std::vector<ColourId>& out, std::vector<std::pair<ColourId, NodeId>>* history = nullptr) {
  RefinementKey key;
  std::vector<std::int64_t> scratch;
  std::vector<ColourId> next;
  for (std::size_t j = 0;; ++j) {
    out.insert(out.end(), colours.begin(), colours.end());
    if (history)
      for (std::size_t v = 0; v < colours.size(); ++v) history->emplace_back(colours[v], static_cast<NodeId>(v));
    if (j == iterations) break;
    refine_nodes(g, colours, next, reg, key, scratch);
    colours.swap(next);
  }
}

inline void check_pair_budget(std::size_t pairs, const KernelOptions& options) {
  if (pairs > options.pair_budget)
    fail(ErrorKind::NodeBudgetExceeded, std::to_string(pairs) + " node pairs exceed the pair budget of " +
                                            std::to_string(options.pair_budget));
}

/// Dense |V| x |V| edge label matrix with kNoEdge for non-edges and the diagonal.
inline std::vector<std::int32_t> label_matrix(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::int32_t> labels(n * n, kNoEdge);
  for (std::size_t v = 0; v < n; ++v)
    for (const auto& nb : g.neighbours(static_cast<NodeId>(v))) labels[v * n + nb.node] = nb.label;
  return labels;
}

}  // namespace kernel_detail

/// Algorithm: WL colour refinement with edge labels.
template <RegistryHandle H>
ColourMultiset wl(const Graph& g, std::size_t iterations, const H& reg) {
  kernel_detail::check_colours(g, reg.registry().base());
  std::vector<ColourId> out;
  out.reserve(g.node_count() * (iterations + 1));
  kernel_detail::run_wl(g, std::vector<ColourId>(g.colours().begin(), g.colours().end()), iterations, reg, out);
  return ColourMultiset::from_occurrences(std::move(out));
}

/// Refinement over all |V|^2 ordered pairs, self pairs included.
template <RegistryHandle H>
ColourMultiset two_wl(const Graph& g, std::size_t iterations, const H& reg, const KernelOptions& options = {}) {
  using namespace kernel_detail;
  check_colours(g, reg.registry().base());
  const std::size_t n = g.node_count();
  check_pair_budget(n * n, options);
  const auto labels = label_matrix(g);

  std::vector<ColourId> colours(n * n), next(n * n);
  std::vector<ColourId> out;
  out.reserve(n * n * (iterations + 1));
  RefinementKey key;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      key = {PairInit, g.colour(static_cast<NodeId>(v)), g.colour(static_cast<NodeId>(u)), labels[v * n + u]};
      colours[v * n + u] = reg.resolve(key);
    }
  }
  std::vector<std::int64_t> scratch;
  for (std::size_t j = 0;; ++j) {
    out.insert(out.end(), colours.begin(), colours.end());
    if (j == iterations) break;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t u = 0; u < n; ++u) {
        scratch.clear();
        for (std::size_t w = 0; w < n; ++w) scratch.push_back(pack(colours[w * n + u], colours[v * n + w]));
        std::sort(scratch.begin(), scratch.end());
        key.clear();
        key.push_back(PairRefine);
        key.push_back(colours[v * n + u]);
        for (std::int64_t p : scratch) {
          key.push_back(static_cast<std::int32_t>(p >> 32));
          key.push_back(static_cast<std::int32_t>(p & 0xffffffff));
        }
        next[v * n + u] = reg.resolve(key);
      }
    }
    colours.swap(next);
  }
  return ColourMultiset::from_occurrences(std::move(out));
}

/// Refinement over the C(|V|,2) unordered node pairs. The neighbours of
/// {v,u} are the sets {{w,u}, {v,w}} for w in N(v) | N(u), w not in {v,u}.
template <RegistryHandle H>
ColourMultiset two_lwl(const Graph& g, std::size_t iterations, const H& reg, const KernelOptions& options = {}) {
  using namespace kernel_detail;
  check_colours(g, reg.registry().base());
  const std::size_t n = g.node_count();
  const std::size_t n_pairs = n < 2 ? 0 : n * (n - 1) / 2;
  check_pair_budget(n_pairs, options);
  const auto labels = label_matrix(g);

  // Symmetric matrix; only off-diagonal entries are meaningful.
  std::vector<ColourId> colours(n * n, 0), next(n * n, 0);
  std::vector<ColourId> out;
  out.reserve(n_pairs * (iterations + 1));
  RefinementKey key;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = v + 1; u < n; ++u) {
      ColourId a = g.colour(static_cast<NodeId>(v)), b = g.colour(static_cast<NodeId>(u));
      key = {SetInit, std::min(a, b), std::max(a, b), labels[v * n + u]};
      colours[v * n + u] = colours[u * n + v] = reg.resolve(key);
    }
  }

  std::vector<std::vector<NodeId>> sorted_neighbours(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& nb : g.neighbours(static_cast<NodeId>(v))) sorted_neighbours[v].push_back(nb.node);
    std::sort(sorted_neighbours[v].begin(), sorted_neighbours[v].end());
  }

  std::vector<NodeId> witnesses;
  std::vector<std::int64_t> scratch;
  for (std::size_t j = 0;; ++j) {
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u = v + 1; u < n; ++u) out.push_back(colours[v * n + u]);
    if (j == iterations) break;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t u = v + 1; u < n; ++u) {
        witnesses.clear();
        std::set_union(sorted_neighbours[v].begin(), sorted_neighbours[v].end(), sorted_neighbours[u].begin(),
                       sorted_neighbours[u].end(), std::back_inserter(witnesses));
        scratch.clear();
        for (NodeId w : witnesses) {
          if (static_cast<std::size_t>(w) == v || static_cast<std::size_t>(w) == u) continue;
          ColourId x = colours[w * n + u], y = colours[v * n + w];
          scratch.push_back(pack(std::min(x, y), std::max(x, y)));
        }
        std::sort(scratch.begin(), scratch.end());
        key.clear();
        key.push_back(SetRefine);
        key.push_back(colours[v * n + u]);
        for (std::int64_t p : scratch) {
          key.push_back(static_cast<std::int32_t>(p >> 32));
          key.push_back(static_cast<std::int32_t>(p & 0xffffffff));
        }
        next[v * n + u] = next[u * n + v] = reg.resolve(key);
      }
    }
    colours.swap(next);
  }
  return ColourMultiset::from_occurrences(std::move(out));
}

/// WL run |V| times; in run w node w starts from the individualised colour.
template <RegistryHandle H>
ColourMultiset iwl(const Graph& g, std::size_t iterations, const H& reg) {
  kernel_detail::check_colours(g, reg.registry().base());
  const std::size_t n = g.node_count();
  std::vector<ColourId> out;
  out.reserve(n * n * (iterations + 1));
  const std::vector<ColourId> initial(g.colours().begin(), g.colours().end());
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<ColourId> colours = initial;
    colours[w] = reg.registry().individualised();
    kernel_detail::run_wl(g, std::move(colours), iterations, reg, out);
  }
  return ColourMultiset::from_occurrences(std::move(out));
}

struct CcwlResult {
  ColourMultiset colours;
  /// Aggregated continuous value per colour; the unseen colour is absent.
  std::map<ColourId, double> features;
};

/// WL plus, for every colour c, the aggregate of the continuous values of the
/// nodes that exhibited c at some iteration.
template <RegistryHandle H>
CcwlResult ccwl(const Graph& g, std::size_t iterations, const H& reg, Aggregator aggregator = Aggregator::Sum) {
  kernel_detail::check_colours(g, reg.registry().base());
  std::vector<ColourId> out;
  std::vector<std::pair<ColourId, NodeId>> history;
  kernel_detail::run_wl(g, std::vector<ColourId>(g.colours().begin(), g.colours().end()), iterations, reg, out,
                        &history);
  std::sort(history.begin(), history.end());
  history.erase(std::unique(history.begin(), history.end()), history.end());

  CcwlResult result;
  const ColourId unseen = reg.registry().unseen();
  for (std::size_t i = 0; i < history.size();) {
    const ColourId c = history[i].first;
    std::size_t k = i;
    double acc = aggregator == Aggregator::Max ? g.value(history[i].second) : 0.0;
    for (; k < history.size() && history[k].first == c; ++k) {
      double x = g.value(history[k].second);
      if (aggregator == Aggregator::Max)
        acc = std::max(acc, x);
      else
        acc += x;
    }
    if (aggregator == Aggregator::Mean) acc /= static_cast<double>(k - i);
    if (c != unseen) result.features.emplace(c, acc);
    i = k;
  }
  result.colours = ColourMultiset::from_occurrences(std::move(out));
  return result;
}

/// Runs `kind` and returns its multiset; ccwl's continuous part is dropped.
template <RegistryHandle H>
ColourMultiset run_kernel(KernelKind kind, const Graph& g, std::size_t iterations, const H& reg,
                          const KernelOptions& options = {}) {
  switch (kind) {
    case KernelKind::WL: return wl(g, iterations, reg);
    case KernelKind::TwoWL: return two_wl(g, iterations, reg, options);
    case KernelKind::TwoLWL: return two_lwl(g, iterations, reg, options);
    case KernelKind::IWL: return iwl(g, iterations, reg);
    case KernelKind::CCWL: return ccwl(g, iterations, reg).colours;
  }
  return {};
}

}  // namespace wlkit

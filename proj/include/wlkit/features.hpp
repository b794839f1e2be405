#pragma once

// Dataset-level colour collection, fixed-size embeddings, linear prediction,
// distinguishability counts and JSON persistence of feature models.

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "wlkit/error.hpp"
#include "wlkit/graph.hpp"
#include "wlkit/ilg.hpp"
#include "wlkit/json_io.hpp"
#include "wlkit/kernels.hpp"
#include "wlkit/registry.hpp"
#include "wlkit/task_model.hpp"

namespace wlkit {

inline constexpr int kModelSchemaVersion = 1;

struct Budgets {
  std::size_t nodes = IlgOptions{}.node_budget;
  std::size_t pairs = KernelOptions{}.pair_budget;
};

struct IndistinguishablePair {
  /// Flat state indices in dataset order.
  std::size_t first;
  std::size_t second;
};

struct DistinguishReport {
  std::size_t pairs_total = 0;
  std::size_t pairs_indistinguishable = 0;
  std::vector<IndistinguishablePair> offending;
};

class FeatureModel {
 public:
  FeatureModel(Domain domain, KernelKind kernel, std::size_t iterations,
               Aggregator aggregator = Aggregator::Sum, Budgets budgets = {})
      : domain_(std::move(domain)),
        kernel_(kernel),
        iterations_(iterations),
        aggregator_(aggregator),
        table_(domain_),
        registry_(static_cast<ColourId>(table_.size())),
        budgets_(budgets) {}

  const Domain& domain() const { return domain_; }
  KernelKind kernel() const { return kernel_; }
  std::size_t iterations() const { return iterations_; }
  /// Only meaningful for ccwl.
  Aggregator aggregator() const { return aggregator_; }
  const ColourTable& colour_table() const { return table_; }
  const ColourRegistry& registry() const { return registry_; }
  const std::vector<ColourId>& collected_colours() const { return collected_; }
  bool is_collected() const { return is_collected_; }
  const Budgets& budgets() const { return budgets_; }
  void set_budgets(Budgets b) { budgets_ = b; }

  std::size_t dimension() const { return (kernel_ == KernelKind::CCWL ? 2 : 1) * collected_.size(); }

  IlgGenerator make_generator() const { return IlgGenerator(domain_, IlgOptions{budgets_.nodes}); }

  /// Adds every colour the kernel produces on `dataset` to the vocabulary,
  /// in order of first appearance. Existing colour indices never change.
  void collect(const Dataset& dataset) {
    check_domain(dataset.domain);
    IlgGenerator gen = make_generator();
    for (const auto& entry : dataset.entries) {
      gen.set_problem(entry.problem);
      for (const auto& state : entry.states) collect(gen.to_graph(state));
    }
    is_collected_ = true;
  }

  void collect(const Graph& graph) {
    ColourMultiset m = run(graph, CollectingRegistry(registry_)).colours;
    for (const auto& [colour, count] : m) {
      (void)count;
      if (index_.emplace(colour, collected_.size()).second) collected_.push_back(colour);
    }
    is_collected_ = true;
  }

  std::vector<double> embed(const Graph& graph) const {
    require_collected();
    auto [m, features] = run(graph, FrozenRegistry(registry_));
    std::vector<double> x(dimension(), 0.0);
    for (const auto& [colour, count] : m) {
      auto it = index_.find(colour);
      if (it != index_.end()) x[it->second] = static_cast<double>(count);
    }
    if (kernel_ == KernelKind::CCWL) {
      for (const auto& [colour, value] : features) {
        auto it = index_.find(colour);
        if (it != index_.end()) x[collected_.size() + it->second] = value;
      }
    }
    return x;
  }

  std::vector<double> embed_state(const Problem& problem, const State& state) const {
    require_collected();
    IlgGenerator gen = make_generator();
    gen.set_problem(problem);
    return embed(gen.to_graph(state));
  }

  /// One row per state in dataset order. With threads > 1 the entries are
  /// embedded concurrently; the result is identical to the serial one.
  std::vector<std::vector<double>> embed_dataset(const Dataset& dataset, unsigned threads = 1) const {
    require_collected();
    check_domain(dataset.domain);
    std::vector<std::size_t> offsets;
    std::size_t rows = 0;
    for (const auto& e : dataset.entries) {
      offsets.push_back(rows);
      rows += e.states.size();
    }
    std::vector<std::vector<double>> out(rows);
    auto embed_entry = [&](std::size_t i) {
      IlgGenerator gen = make_generator();
      gen.set_problem(dataset.entries[i].problem);
      const auto& states = dataset.entries[i].states;
      for (std::size_t k = 0; k < states.size(); ++k) out[offsets[i] + k] = embed(gen.to_graph(states[k]));
    };
    if (threads <= 1 || dataset.entries.size() <= 1) {
      for (std::size_t i = 0; i < dataset.entries.size(); ++i) embed_entry(i);
      return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i; (i = next.fetch_add(1)) < dataset.entries.size();) embed_entry(i);
          } catch (...) {
            errors[t] = std::current_exception();
            next = dataset.entries.size();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return out;
  }

  bool has_weights() const { return weights_.has_value(); }
  const std::optional<std::vector<double>>& weights() const { return weights_; }
  double bias() const { return bias_; }

  void set_weights(std::vector<double> weights, double bias = 0.0) {
    require_collected();
    if (weights.size() != dimension())
      fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(dimension()) + " weights, got " +
                                             std::to_string(weights.size()));
    weights_ = std::move(weights);
    bias_ = bias;
  }

  double predict(const std::vector<double>& x) const {
    if (!weights_) fail(ErrorKind::NoWeights, "model has no weights");
    if (x.size() != weights_->size())
      fail(ErrorKind::DimensionMismatch, "embedding of size " + std::to_string(x.size()) + " for " +
                                             std::to_string(weights_->size()) + " weights");
    double y = bias_;
    for (std::size_t i = 0; i < x.size(); ++i) y += (*weights_)[i] * x[i];
    return y;
  }

  double predict(const Problem& problem, const State& state) const {
    if (!weights_) fail(ErrorKind::NoWeights, "model has no weights");
    return predict(embed_state(problem, state));
  }

  /// Counts state pairs with different labels whose embeddings agree
  /// component-wise within `tolerance`.
  DistinguishReport distinguish(const Dataset& dataset, double tolerance = 0.0, unsigned threads = 1) const {
    if (!dataset.fully_labelled()) fail(ErrorKind::MissingLabels, "every dataset entry needs labels");
    if (tolerance < 0.0) fail(ErrorKind::DimensionMismatch, "tolerance must be non-negative");
    auto x = embed_dataset(dataset, threads);
    std::vector<double> y;
    for (const auto& e : dataset.entries) y.insert(y.end(), e.labels->begin(), e.labels->end());

    DistinguishReport report;
    const std::size_t n = x.size();
    report.pairs_total = n < 2 ? 0 : n * (n - 1) / 2;
    auto consider = [&](std::size_t i, std::size_t j) {
      if (y[i] != y[j]) report.offending.push_back({i, j});
    };
    if (tolerance == 0.0) {
      std::map<std::vector<double>, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < n; ++i) groups[x[i]].push_back(i);
      for (const auto& [vec, members] : groups) {
        (void)vec;
        for (std::size_t a = 0; a < members.size(); ++a)
          for (std::size_t b = a + 1; b < members.size(); ++b) consider(members[a], members[b]);
      }
      std::sort(report.offending.begin(), report.offending.end(),
                [](const auto& p, const auto& q) { return std::pair(p.first, p.second) < std::pair(q.first, q.second); });
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          bool equal = true;
          for (std::size_t k = 0; k < x[i].size() && equal; ++k) equal = std::abs(x[i][k] - x[j][k]) <= tolerance;
          if (equal) consider(i, j);
        }
      }
    }
    report.pairs_indistinguishable = report.offending.size();
    return report;
  }

  nlohmann::json to_json() const {
    require_collected();
    nlohmann::json registry = nlohmann::json::array();
    const auto& keys = registry_.keys();
    for (std::size_t i = 0; i < keys.size(); ++i)
      registry.push_back(nlohmann::json::array({keys[i], registry_.first_refined() + static_cast<ColourId>(i)}));
    nlohmann::json j;
    j["schema_version"] = kModelSchemaVersion;
    j["domain"] = domain_to_json(domain_);
    j["kernel"] = std::string(to_string(kernel_));
    j["iterations"] = iterations_;
    j["aggregator"] = kernel_ == KernelKind::CCWL ? nlohmann::json(std::string(to_string(aggregator_))) : nullptr;
    j["colour_table"] = table_.names();
    j["registry"] = std::move(registry);
    j["collected"] = collected_;
    j["weights"] = weights_ ? nlohmann::json(*weights_) : nlohmann::json(nullptr);
    j["bias"] = weights_ ? nlohmann::json(bias_) : nlohmann::json(nullptr);
    return j;
  }

  static FeatureModel from_json(const nlohmann::json& j, Budgets budgets = {}) {
    try {
      return from_json_unchecked(j, budgets);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::SchemaError, std::string("model: ") + e.what());
    }
  }

  std::string serialize() const { return to_json().dump(2) + "\n"; }

  static FeatureModel deserialize(std::string_view text, Budgets budgets = {}) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::SchemaError, std::string("model: ") + e.what());
    }
    return from_json(j, budgets);
  }

  void save(const std::filesystem::path& path) const {
    std::string text = serialize();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) fail(ErrorKind::IoError, "failed writing " + path.string());
  }

  static FeatureModel load(const std::filesystem::path& path, Budgets budgets = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str(), budgets);
  }

 private:
  void check_domain(const Domain& d) const {
    if (!(d == domain_))
      fail(ErrorKind::DomainMismatch, "data for domain '" + d.name() + "' given to a model of domain '" +
                                          domain_.name() + "'");
  }

  void require_collected() const {
    if (!is_collected_) fail(ErrorKind::ModelNotCollected, "collect must be called first");
  }

  template <RegistryHandle H>
  CcwlResult run(const Graph& g, const H& handle) const {
    if (kernel_ == KernelKind::CCWL) return ccwl(g, iterations_, handle, aggregator_);
    return {run_kernel(kernel_, g, iterations_, handle, KernelOptions{budgets_.pairs}), {}};
  }

  static FeatureModel from_json_unchecked(const nlohmann::json& j, Budgets budgets) {
    if (!j.is_object()) fail(ErrorKind::SchemaError, "model must be a JSON object");
    if (j.at("schema_version") != kModelSchemaVersion)
      fail(ErrorKind::SchemaVersionMismatch, "unsupported schema_version " + j.at("schema_version").dump());
    auto kind = parse_kernel_kind(j.at("kernel").get<std::string>());
    if (!kind) fail(ErrorKind::SchemaVersionMismatch, "unknown kernel kind " + j.at("kernel").dump());
    Aggregator agg = Aggregator::Sum;
    if (*kind == KernelKind::CCWL) {
      auto a = parse_aggregator(j.at("aggregator").get<std::string>());
      if (!a) fail(ErrorKind::SchemaVersionMismatch, "unknown aggregator " + j.at("aggregator").dump());
      agg = *a;
    } else if (!j.at("aggregator").is_null()) {
      fail(ErrorKind::SchemaError, "aggregator is only meaningful for ccwl");
    }
    const auto& iterations = j.at("iterations");
    if (!iterations.is_number_unsigned()) fail(ErrorKind::SchemaError, "iterations must be a non-negative integer");

    FeatureModel m(domain_from_json(j.at("domain")), *kind, iterations.get<std::size_t>(), agg, budgets);
    if (j.at("colour_table").get<std::vector<std::string>>() != m.table_.names())
      fail(ErrorKind::CorruptRegistry, "colour table does not match the domain");

    std::vector<std::pair<RefinementKey, ColourId>> entries;
    for (const auto& e : j.at("registry")) {
      if (!e.is_array() || e.size() != 2) fail(ErrorKind::CorruptRegistry, "registry entry must be [key, id]");
      entries.emplace_back(e[0].get<RefinementKey>(), e[1].get<ColourId>());
    }
    m.registry_ = ColourRegistry::restore(m.registry_.base(), std::move(entries));

    for (ColourId c : j.at("collected").get<std::vector<ColourId>>()) {
      bool known = (c >= 0 && c <= m.registry_.individualised()) ||
                   (c >= m.registry_.first_refined() && c < m.registry_.next_id());
      if (!known) fail(ErrorKind::CorruptRegistry, "collected colour " + std::to_string(c) + " is unknown");
      if (!m.index_.emplace(c, m.collected_.size()).second)
        fail(ErrorKind::CorruptRegistry, "collected colour " + std::to_string(c) + " listed twice");
      m.collected_.push_back(c);
    }
    m.is_collected_ = true;
    if (!j.at("weights").is_null()) {
      double bias = j.at("bias").is_null() ? 0.0 : j.at("bias").get<double>();
      m.set_weights(j.at("weights").get<std::vector<double>>(), bias);
    }
    return m;
  }

  Domain domain_;
  KernelKind kernel_;
  std::size_t iterations_;
  Aggregator aggregator_;
  ColourTable table_;
  ColourRegistry registry_;
  Budgets budgets_;
  std::vector<ColourId> collected_;
  std::unordered_map<ColourId, std::size_t> index_;
  bool is_collected_ = false;
  std::optional<std::vector<double>> weights_;
  double bias_ = 0.0;
};

/// CSV with header problem_index,state_index,f0..f{d-1}[,label].
inline void write_embedding_csv(std::ostream& out, const Dataset& dataset,
                                const std::vector<std::vector<double>>& rows, std::size_t dimension,
                                bool with_labels) {
  if (with_labels && !dataset.fully_labelled()) fail(ErrorKind::MissingLabels, "--with-labels needs labels");
  out << "problem_index,state_index";
  for (std::size_t k = 0; k < dimension; ++k) out << ",f" << k;
  if (with_labels) out << ",label";
  out << "\n";
  std::size_t row = 0;
  for (std::size_t p = 0; p < dataset.entries.size(); ++p) {
    const auto& entry = dataset.entries[p];
    for (std::size_t s = 0; s < entry.states.size(); ++s, ++row) {
      out << p << "," << s;
      for (double v : rows.at(row)) out << "," << format_real(v);
      if (with_labels) out << "," << format_real((*entry.labels)[s]);
      out << "\n";
    }
  }
}

}  // namespace wlkit

#pragma once

// Numeric instance learning graph: a (task, state) pair becomes a graph with
// one node per object, per true proposition or goal atom, per numeric
// variable and per numeric goal condition.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wlkit/error.hpp"
#include "wlkit/graph.hpp"
#include "wlkit/task_model.hpp"

namespace wlkit {

/// Achievement status of a proposition node.
enum class PropositionStatus { AchievedGoal = 0, UnachievedGoal = 1, AchievedNonGoal = 2 };

/// Categorical node features of a domain, enumerated as
///   object, one per constant, (P, apg) (P, upg) (P, apn) per predicate,
///   one per function, (cmp, ung) (cmp, ang) for cmp in >=, >, =.
/// Two ids past the end are reserved: the individualisation colour and the
/// unseen colour.
class ColourTable {
 public:
  ColourTable() = default;

  explicit ColourTable(const Domain& d)
      : n_constants_(static_cast<int>(d.constants().size())),
        n_predicates_(static_cast<int>(d.predicates().size())),
        n_functions_(static_cast<int>(d.functions().size())) {
    names_.push_back("object");
    for (const auto& c : d.constants()) names_.push_back("constant:" + c);
    for (const auto& p : d.predicates()) {
      names_.push_back(p.name + ":apg");
      names_.push_back(p.name + ":upg");
      names_.push_back(p.name + ":apn");
    }
    for (const auto& f : d.functions()) names_.push_back(f.name);
    for (Comparator c : {Comparator::GE, Comparator::GT, Comparator::EQ}) {
      names_.push_back(std::string(to_string(c)) + ":ung");
      names_.push_back(std::string(to_string(c)) + ":ang");
    }
  }

  static constexpr ColourId object() { return 0; }
  ColourId constant(int index) const { return 1 + index; }
  ColourId predicate(SymbolId p, PropositionStatus status) const {
    return 1 + n_constants_ + 3 * p + static_cast<int>(status);
  }
  ColourId function(SymbolId f) const { return 1 + n_constants_ + 3 * n_predicates_ + f; }
  ColourId numeric_goal(Comparator c, bool achieved) const {
    return 1 + n_constants_ + 3 * n_predicates_ + n_functions_ + 2 * static_cast<int>(c) + (achieved ? 1 : 0);
  }

  std::size_t size() const { return names_.size(); }
  ColourId individualised() const { return static_cast<ColourId>(names_.size()); }
  ColourId unseen() const { return static_cast<ColourId>(names_.size()) + 1; }

  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const ColourTable&, const ColourTable&) = default;

 private:
  int n_constants_ = 0;
  int n_predicates_ = 0;
  int n_functions_ = 0;
  std::vector<std::string> names_;
};

struct IlgOptions {
  std::size_t node_budget = 1'000'000;
};

class IlgGenerator {
 public:
  explicit IlgGenerator(Domain domain, IlgOptions options = {})
      : domain_(std::move(domain)), table_(domain_), options_(options) {}

  const Domain& domain() const { return domain_; }
  const ColourTable& colour_table() const { return table_; }
  const IlgOptions& options() const { return options_; }
  bool has_problem() const { return problem_.has_value(); }
  const Problem& problem() const {
    if (!problem_) fail(ErrorKind::ProblemNotSet, "set_problem must be called before to_graph");
    return *problem_;
  }

  void set_problem(Problem problem) {
    if (problem.domain_name() != domain_.name())
      fail(ErrorKind::DomainMismatch,
           "problem for domain '" + problem.domain_name() + "' given to generator of '" + domain_.name() + "'");
    object_colours_.clear();
    for (const auto& o : problem.objects()) {
      auto c = domain_.find_constant(o);
      object_colours_.push_back(c ? table_.constant(*c) : ColourTable::object());
    }
    goal_atoms_.clear();
    for (const auto& g : problem.propositional_goals()) {
      bool seen = std::any_of(goal_atoms_.begin(), goal_atoms_.end(),
                              [&](const GoalLiteral& x) { return x.atom == g.atom; });
      if (!seen) goal_atoms_.push_back(g);
    }
    sorted_goal_atoms_.clear();
    for (const auto& g : goal_atoms_) sorted_goal_atoms_.push_back(g.atom);
    std::sort(sorted_goal_atoms_.begin(), sorted_goal_atoms_.end());
    problem_ = std::move(problem);
  }

  Graph to_graph(const State& state) const {
    const Problem& p = problem();
    validate_state(domain_, p.object_count(), state);
    p.check_goal_fluents(domain_, state);

    std::size_t extra_props = 0;
    for (const auto& a : state.propositions())
      if (!is_goal_atom(a)) ++extra_props;
    std::size_t n_nodes = p.object_count() + goal_atoms_.size() + extra_props + state.values().size() +
                          p.numeric_goals().size();
    if (n_nodes > options_.node_budget)
      fail(ErrorKind::NodeBudgetExceeded,
           std::to_string(n_nodes) + " nodes exceed the budget of " + std::to_string(options_.node_budget));

    Graph g;
    const auto objects = p.objects();
    for (std::size_t o = 0; o < objects.size(); ++o) g.add_node(object_colours_[o], 0.0, objects[o]);

    for (const auto& goal : goal_atoms_) {
      bool achieved = goal.satisfied_by(state);
      auto status = achieved ? PropositionStatus::AchievedGoal : PropositionStatus::UnachievedGoal;
      add_atom_node(g, goal.atom, table_.predicate(goal.atom.symbol, status), 0.0, false);
    }
    for (const auto& a : state.propositions()) {
      if (is_goal_atom(a)) continue;
      add_atom_node(g, a, table_.predicate(a.symbol, PropositionStatus::AchievedNonGoal), 0.0, false);
    }
    std::map<GroundAtom, NodeId> variable_nodes;
    for (const auto& [a, v] : state.values())
      variable_nodes.emplace(a, add_atom_node(g, a, table_.function(a.symbol), v, true));

    const auto goals = p.numeric_goals();
    for (std::size_t i = 0; i < goals.size(); ++i) {
      double error = evaluate_expression(goals[i].expression, state);
      bool achieved = compare_to_zero(error, goals[i].comparator);
      NodeId node = g.add_node(table_.numeric_goal(goals[i].comparator, achieved), achieved ? 0.0 : error,
                               "goal" + std::to_string(i) + std::string(to_string(goals[i].comparator)) + "0");
      for (const auto& v : variables(goals[i].expression)) g.add_edge(node, variable_nodes.at(v), 0);
    }
    return g;
  }

  /// "pred(a,b)" for a predicate atom, or a function atom when `numeric`.
  std::string atom_name(const GroundAtom& a, bool numeric) const {
    const Symbol& sym = numeric ? domain_.functions()[a.symbol] : domain_.predicates()[a.symbol];
    std::string out = sym.name + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) out += (i ? "," : "") + problem().objects()[a.args[i]];
    return out + ")";
  }

 private:
  bool is_goal_atom(const GroundAtom& a) const {
    return std::binary_search(sorted_goal_atoms_.begin(), sorted_goal_atoms_.end(), a);
  }

  NodeId add_atom_node(Graph& g, const GroundAtom& a, ColourId colour, double value, bool numeric) const {
    NodeId node = g.add_node(colour, value, atom_name(a, numeric));
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      // An object repeated in the argument list keeps only its first position.
      if (!g.edge_label(node, a.args[i])) g.add_edge(node, a.args[i], static_cast<EdgeLabel>(i + 1));
    }
    return node;
  }

  Domain domain_;
  ColourTable table_;
  IlgOptions options_;
  std::optional<Problem> problem_;
  std::vector<ColourId> object_colours_;
  std::vector<GoalLiteral> goal_atoms_;
  std::vector<GroundAtom> sorted_goal_atoms_;
};

}  // namespace wlkit

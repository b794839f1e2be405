#pragma once

// Command implementations for the wlkit executable. Kept in a header so the
// test suites can drive the commands in-process.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wlkit/wlkit.hpp"

namespace wlkit::cli {

enum class InputFormat { Auto, Pddl, Json };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
  file << text;
  if (!file) fail(ErrorKind::IoError, "failed writing " + path);
}

inline bool is_json(const std::string& path, InputFormat format) {
  if (format != InputFormat::Auto) return format == InputFormat::Json;
  return std::filesystem::path(path).extension() == ".json";
}

inline Budgets budgets_from_environment() {
  Budgets b;
  if (const char* env = std::getenv("WLKIT_NODE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') fail(ErrorKind::SchemaError, "WLKIT_NODE_BUDGET must be a positive integer");
    b.nodes = b.pairs = static_cast<std::size_t>(v);
  }
  return b;
}

inline Domain load_domain(const std::string& path, InputFormat format) {
  std::string text = read_file(path);
  if (!is_json(path, format)) return parse_domain(text, path);
  Json j = parse_json_text(text);
  return json_detail::translating_json_errors([&] { return domain_from_json(j.contains("domain") ? j["domain"] : j); });
}

inline Problem load_problem(const std::string& path, const Domain& domain, InputFormat format) {
  std::string text = read_file(path);
  if (!is_json(path, format)) return parse_problem(text, domain, path);
  Json j = parse_json_text(text);
  return json_detail::translating_json_errors(
      [&] { return problem_from_json(j.contains("problem") ? j["problem"] : j, domain); });
}

inline Dataset load_dataset(const std::string& path) { return parse_json_dataset(read_file(path)); }

struct Options {
  InputFormat input_format = InputFormat::Auto;

  // graphify
  std::string domain, problem, state, format = "dot", out;
  // collect / embed / distinguish / inspect
  std::string dataset, kernel, aggregator = "sum", model;
  std::size_t iterations = 0;
  bool with_labels = false;
  double tolerance = 0.0;
  unsigned threads = 1;
};

inline void cmd_graphify(const Options& o, std::ostream& out) {
  Domain domain = load_domain(o.domain, o.input_format);
  Problem problem = load_problem(o.problem, domain, o.input_format);
  State state = problem.initial_state();
  if (!o.state.empty()) state = state_from_json(parse_json_text(read_file(o.state)), domain, problem);
  IlgGenerator gen(domain, IlgOptions{budgets_from_environment().nodes});
  gen.set_problem(problem);
  Graph g = gen.to_graph(state);
  std::string text = o.format == "json" ? to_text(graph_to_json(g)) : to_dot(g, gen.colour_table().names());
  write_output(o.out, text, out);
}

inline void cmd_collect(const Options& o, std::ostream& out) {
  Dataset dataset = load_dataset(o.dataset);
  auto kind = parse_kernel_kind(o.kernel);
  auto agg = parse_aggregator(o.aggregator);
  FeatureModel model(dataset.domain, *kind, o.iterations, *agg, budgets_from_environment());
  model.collect(dataset);
  model.save(o.out);
  out << "collected_colours: " << model.collected_colours().size() << "\n";
}

inline void cmd_embed(const Options& o, std::ostream& out) {
  FeatureModel model = FeatureModel::load(o.model, budgets_from_environment());
  Dataset dataset = load_dataset(o.dataset);
  auto rows = model.embed_dataset(dataset, o.threads);
  std::ostringstream csv;
  write_embedding_csv(csv, dataset, rows, model.dimension(), o.with_labels);
  write_output(o.out, csv.str(), out);
}

inline void cmd_distinguish(const Options& o, std::ostream& out) {
  FeatureModel model = FeatureModel::load(o.model, budgets_from_environment());
  Dataset dataset = load_dataset(o.dataset);
  DistinguishReport r = model.distinguish(dataset, o.tolerance, o.threads);
  // Map flat indices back to (problem, state).
  std::vector<std::pair<std::size_t, std::size_t>> where;
  for (std::size_t p = 0; p < dataset.entries.size(); ++p)
    for (std::size_t s = 0; s < dataset.entries[p].states.size(); ++s) where.emplace_back(p, s);
  out << "pairs_total: " << r.pairs_total << "\n";
  out << "pairs_indistinguishable: " << r.pairs_indistinguishable << "\n";
  for (const auto& pair : r.offending) {
    auto [p1, s1] = where[pair.first];
    auto [p2, s2] = where[pair.second];
    out << "indistinguishable: " << p1 << "," << s1 << " " << p2 << "," << s2 << "\n";
  }
}

inline void cmd_inspect(const Options& o, std::ostream& out) {
  FeatureModel model = FeatureModel::load(o.model);
  out << "domain: " << model.domain().name() << "\n";
  out << "kernel: " << to_string(model.kernel()) << "\n";
  out << "iterations: " << model.iterations() << "\n";
  out << "aggregator: " << (model.kernel() == KernelKind::CCWL ? to_string(model.aggregator()) : "none") << "\n";
  out << "colour_table_size: " << model.colour_table().size() << "\n";
  out << "collected_colours: " << model.collected_colours().size() << "\n";
  out << "registry_size: " << model.registry().size() << "\n";
  out << "dimension: " << model.dimension() << "\n";
  out << "weights: " << (model.has_weights() ? "present" : "absent") << "\n";
}

/// Runs the command line `args` (without the program name). Returns the exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph kernels for planning tasks: νILG construction, WL-family embeddings, model files"};
  app.name("wlkit");
  app.require_subcommand(1);
  Options o;
  const std::map<std::string, InputFormat> formats{{"pddl", InputFormat::Pddl}, {"json", InputFormat::Json}};

  auto* graphify = app.add_subcommand("graphify", "Print the νILG of a task and state");
  graphify->add_option("--domain", o.domain, "Domain file (PDDL or JSON)")->required();
  graphify->add_option("--problem", o.problem, "Problem file (PDDL or JSON)")->required();
  graphify->add_option("--state", o.state, "State JSON; defaults to the initial state");
  graphify->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"dot", "json"}));
  graphify->add_option("--out", o.out, "Output path; stdout when omitted");
  graphify->add_option("--input-format", o.input_format, "Override extension sniffing")
      ->transform(CLI::CheckedTransformer(formats));

  auto* collect = app.add_subcommand("collect", "Collect colours from a dataset and save a model");
  collect->add_option("--dataset", o.dataset, "Dataset JSON")->required();
  collect->add_option("--kernel", o.kernel, "Kernel")->required()->check(
      CLI::IsMember({"wl", "2wl", "2lwl", "iwl", "ccwl"}));
  collect->add_option("--iterations", o.iterations, "Refinement iterations")->required();
  collect->add_option("--aggregator", o.aggregator, "ccwl aggregator")->check(CLI::IsMember({"sum", "mean", "max"}));
  collect->add_option("--out", o.out, "Model JSON path")->required();

  auto* embed = app.add_subcommand("embed", "Embed a dataset with a saved model as CSV");
  embed->add_option("--model", o.model, "Model JSON")->required();
  embed->add_option("--dataset", o.dataset, "Dataset JSON")->required();
  embed->add_option("--out", o.out, "CSV path; stdout when omitted");
  embed->add_flag("--with-labels", o.with_labels, "Append the label column");
  embed->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* distinguish = app.add_subcommand("distinguish", "Count differently labelled states with equal embeddings");
  distinguish->add_option("--model", o.model, "Model JSON")->required();
  distinguish->add_option("--dataset", o.dataset, "Labelled dataset JSON")->required();
  distinguish->add_option("--tolerance", o.tolerance, "Component-wise equality tolerance")
      ->check(CLI::NonNegativeNumber);
  distinguish->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* inspect = app.add_subcommand("inspect", "Summarise a saved model");
  inspect->add_option("--model", o.model, "Model JSON")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*graphify) cmd_graphify(o, out);
    else if (*collect) cmd_collect(o, out);
    else if (*embed) cmd_embed(o, out);
    else if (*distinguish) cmd_distinguish(o, out);
    else if (*inspect) cmd_inspect(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wlkit::cli

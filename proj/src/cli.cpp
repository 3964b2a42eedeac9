#include "zonecost/cli.hpp"

#include "zonecost/explorer.hpp"
#include "zonecost/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace zonecost::cli {

namespace {

struct Options {
  std::string model;
  std::string inclusion = "abstract";
  std::string strategy = "sbfs";
  bool prune = false;
  bool no_prune = false;
  std::string hint;
  bool uniform_m = false;
  std::optional<std::uint64_t> cap;
  std::optional<double> timeout;
  bool oracle = false;
  std::string witness;
  std::string stats = "text";
  bool progress = false;
};

struct Report {
  Verdict verdict;
  std::optional<model::Run> witness;
  std::optional<Rational> witness_cost;
  std::string witness_error;
  std::optional<ExtValue> oracle_cost;
  std::string oracle_error;
};

nlohmann::ordered_json to_json(Report const & r, model::Automaton const & a) {
  Stats const & s = r.verdict.stats;
  nlohmann::ordered_json j;
  j["cost"] = to_string(r.verdict.cost);
  j["terminated"] = r.verdict.terminated;
  j["added_to_waiting"] = s.added_to_waiting;
  j["added_to_passed"] = s.added_to_passed;
  j["max_stored"] = s.max_stored;
  j["tests"] = s.tests;
  j["successful_tests"] = s.successful_tests;
  j["wall_time_ms"] = s.wall_time_ms;
  if (r.witness) {
    auto steps = nlohmann::ordered_json::array();
    for (auto const & st : r.witness->steps)
      steps.push_back({{"delay", to_string(st.delay)},
                       {"edge", st.edge},
                       {"target", a.locations[a.edges[st.edge].target].name}});
    j["witness"] = {{"steps", steps}, {"cost", to_string(*r.witness_cost)}};
  } else if (!r.witness_error.empty()) {
    j["witness_error"] = r.witness_error;
  }
  if (r.oracle_cost) {
    j["oracle_cost"] = to_string(*r.oracle_cost);
    j["oracle_agrees"] = *r.oracle_cost == r.verdict.cost;
  } else if (!r.oracle_error.empty()) {
    j["oracle_error"] = r.oracle_error;
  }
  return j;
}

void print_text(std::ostream & out, Report const & r, model::Automaton const & a) {
  Stats const & s = r.verdict.stats;
  out << "cost: " << to_string(r.verdict.cost) << '\n'
      << "terminated: " << (r.verdict.terminated ? "true" : "false") << '\n'
      << "added_to_waiting: " << s.added_to_waiting << '\n'
      << "added_to_passed: " << s.added_to_passed << '\n'
      << "max_stored: " << s.max_stored << '\n'
      << "tests: " << s.tests << '\n'
      << "successful_tests: " << s.successful_tests << '\n'
      << "wall_time_ms: " << s.wall_time_ms << '\n';
  if (r.witness) {
    out << "witness: " << model::to_string(*r.witness, a) << '\n';
    out << "witness_cost: " << to_string(*r.witness_cost) << '\n';
  } else if (!r.witness_error.empty()) {
    out << "witness: none (" << r.witness_error << ")\n";
  }
  if (r.oracle_cost) {
    out << "oracle_cost: " << to_string(*r.oracle_cost) << '\n';
    out << "oracle_agrees: " << (*r.oracle_cost == r.verdict.cost ? "true" : "false") << '\n';
  } else if (!r.oracle_error.empty()) {
    out << "oracle: " << r.oracle_error << '\n';
  }
}

}  // namespace

int run(int argc, char const * const * argv, std::ostream & out, std::ostream & err) {
  Options o;
  CLI::App app{"Optimal-cost reachability for weighted timed automata"};
  app.add_option("model", o.model, "Model file")->required();
  app.add_option("--inclusion", o.inclusion, "Inclusion test")->check(CLI::IsMember({"abstract", "simple"}));
  app.add_option("--strategy", o.strategy, "Order of exploration")->check(CLI::IsMember({"bfs", "dfs", "sbfs"}));
  auto * prune = app.add_flag("--prune", o.prune, "Drop states costing at least the best cost so far");
  app.add_flag("--no-prune", o.no_prune, "Never prune")->excludes(prune);
  app.add_option("--hint", o.hint, "Known upper bound on the optimal cost");
  app.add_flag("--uniform-m", o.uniform_m, "Use max_x M(x) for every clock");
  app.add_option("--cap", o.cap, "Maximal number of explored states")->check(CLI::PositiveNumber);
  app.add_option("--timeout", o.timeout, "Time limit in seconds")->check(CLI::PositiveNumber);
  app.add_flag("--oracle", o.oracle, "Cross-check with the corner-point abstraction");
  app.add_option("--witness", o.witness, "Print a run within EPS of the optimum");
  app.add_option("--stats", o.stats, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--progress", o.progress, "Print each improvement of the best cost");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const &) {
    out << app.help();
    return 0;
  } catch (CLI::ParseError const & e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  ExplorerConfig cfg;
  std::optional<Rational> eps;
  try {
    if (!o.hint.empty()) cfg.hint = parse_rational(o.hint);
    if (!o.witness.empty()) {
      eps = parse_rational(o.witness);
      if (*eps <= 0) throw std::invalid_argument("witness precision must be positive");
    }
  } catch (std::invalid_argument const & e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ifstream in(o.model);
  if (!in) {
    err << "error: cannot read " << o.model << '\n';
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();
  model::Automaton a;
  try {
    a = model::compose(model::parse_model(text.str()));
  } catch (model::ParseError const & e) {
    err << o.model << ':' << e.what() << '\n';
    return 1;
  }

  bool const negative = a.has_negative_weights();
  if (negative && (o.prune || cfg.hint)) {
    err << "error: --prune and --hint need nonnegative rates and weights\n";
    return 2;
  }
  cfg.inclusion = o.inclusion == "simple" ? InclusionKind::simple : InclusionKind::abstract;
  cfg.strategy = o.strategy == "bfs" ? Strategy::bfs : o.strategy == "dfs" ? Strategy::dfs : Strategy::sbfs;
  cfg.pruning = o.prune || (!o.no_prune && !negative);
  cfg.uniform_m = o.uniform_m;
  cfg.iteration_cap = o.cap;
  if (o.timeout) cfg.time_cap = std::chrono::milliseconds(static_cast<std::int64_t>(*o.timeout * 1000));
  if (o.progress)
    cfg.on_progress = [&err](ExtValue const & c, std::uint64_t popped) {
      err << "progress cost=" << to_string(c) << " popped=" << popped << '\n';
    };

  Report r;
  try {
    r.verdict = explore(a, cfg);
  } catch (std::invalid_argument const & e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  for (auto const & w : r.verdict.warnings) err << "warning: " << w << '\n';

  if (eps) {
    if (r.verdict.cost.is_finite()) {
      r.witness = extract_witness(a, r.verdict.trace, *eps);
      r.witness_cost = model::evaluate_run(a, *r.witness);
    } else {
      r.witness_error = "cost is " + to_string(r.verdict.cost);
    }
  }
  if (o.oracle) {
    try {
      r.oracle_cost = oracle::optimal_cost(a);
    } catch (oracle::TooLarge const & e) {
      r.oracle_error = e.what();
    }
  }

  if (o.stats == "json")
    out << to_json(r, a).dump(2) << '\n';
  else
    print_text(out, r, a);
  return 0;
}

}  // namespace zonecost::cli

#include "adjustkit/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adjustkit/copula.hpp"
#include "adjustkit/dag.hpp"
#include "adjustkit/error.hpp"
#include "adjustkit/io.hpp"
#include "adjustkit/selection.hpp"
#include "adjustkit/set_analysis.hpp"
#include "adjustkit/sim_bench.hpp"

namespace adjustkit {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularCovariance:
    case ErrorKind::SingularBlock:
    case ErrorKind::SliceTooSmall:
    case ErrorKind::Numerical:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Schema, "bad integer list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::Schema, "empty list");
  return out;
}

std::vector<Variant> parse_variants(const std::string& text) {
  if (text == "both") return {Variant::Normal, Variant::Copula};
  return {parse_variant(text)};
}

std::vector<int> parse_arms(const std::string& text) {
  if (text == "both") return {0, 1};
  if (text == "0") return {0};
  if (text == "1") return {1};
  throw Error(ErrorKind::Schema, "arm must be 0, 1 or both");
}

struct SelectOptions {
  std::string input;
  std::string variant = "mn";
  std::string arm = "both";
  std::string out = ".";
  double c0 = 0.6;
  double cn = 0;
  int slices = kDefaultSlices;
  std::string outcome_method = "sir";
  std::string treatment_method = "sir";
  unsigned threads = 0;
  std::string hints;
  int max_block = kDefaultMaxBlock;
};

int cmd_select(const SelectOptions& o, std::ostream& out) {
  const Dataset data = load_csv(o.input);
  const Variant variant = parse_variant(o.variant);
  const auto arms = parse_arms(o.arm);
  SelectorConfig sel;
  sel.c0 = o.c0;
  if (o.cn != 0) sel.cn = o.cn;
  sel.validate();
  if (o.slices < 2) throw Error(ErrorKind::Schema, "--slices must be >= 2");

  CriterionConfig cc;
  cc.estimators.slices = o.slices;
  cc.estimators.outcome_method = parse_method(o.outcome_method);
  cc.estimators.treatment_method = parse_method(o.treatment_method);
  cc.threads = o.threads;
  std::optional<ReducedUniverse> reduced;
  if (!o.hints.empty()) {
    const auto h = load_hints(o.hints, data.p());
    reduced = prune_hints(data.p(), h.forks, h.colliders, h.noncolliders);
    cc.universe = reduced->masks;
  }
  if (data.p() >= kWarnDimension)
    std::cerr << "warning: p = " << data.p() << " means " << (std::size_t{1} << data.p()) << " subsets per arm\n";

  std::filesystem::create_directories(o.out);
  // The copula transform does not depend on the arm, so do it once.
  std::optional<CopulaResult> cop;
  if (variant == Variant::Copula) cop = transform_dataset(data);

  for (int arm : arms) {
    CriterionTable table = criterion_table_prepared(cop ? cop->data : data, arm, variant, cc);
    if (cop)
      for (std::size_t j = 0; j < cop->coordinates.size(); ++j)
        if (cop->coordinates[j].pool.degenerate) table.meta.degenerate_pooling.push_back(static_cast<int>(j) + 1);
    if (table.meta.singular_count == table.size())
      throw Error(ErrorKind::Numerical, "every subset hit a singular block");
    const auto res = select_tail(table, sel);
    const AdjustmentCollection chosen(data.p(), res.selected, Source::Estimated);

    auto doc = selection_json(res, table);
    doc["universe"] = reduced ? "reduced" : "full";
    if (reduced) {
      doc["hints"] = {{"forks", reduced->forks.indices()},
                      {"colliders", reduced->colliders.indices()},
                      {"noncolliders", reduced->noncolliders.indices()}};
      doc["implied_count"] = reduced->expand(chosen).size();
    } else {
      doc["structure"] = report_json(structure_report(chosen, o.max_block, o.threads));
    }
    const std::string stem = (std::filesystem::path(o.out) / ("t" + std::to_string(arm))).string();
    write_text(stem + "_selection.json", doc.dump(2) + "\n");
    {
      std::ofstream f(stem + "_table.csv");
      write_table_csv(f, res);
    }
    {
      std::ofstream f(stem + "_scree.csv");
      write_scree_csv(f, res);
    }
    out << "t=" << arm << " variant=" << to_string(variant) << " subsets=" << table.size() << " tau=" << res.tau
        << " selected=" << res.selected.size() << " -> " << stem << "_selection.json\n";
  }
  return kExitOk;
}

std::string list_text(const std::vector<SubsetId>& sets) {
  std::string s;
  for (auto a : sets) s += (s.empty() ? "" : " ") + a.to_string();
  return s.empty() ? "(none)" : s;
}

int cmd_oracle(const std::string& path, const std::string& rule_text, int max_block, const std::string& json_out,
               bool list_all, std::ostream& out) {
  const Dag g = Dag::load(path);
  const ColliderRule rule = parse_collider_rule(rule_text);
  const auto c = true_collection(g, rule);
  const auto r = structure_report(c, max_block);
  out << "p=" << g.p() << " rule=" << to_string(rule) << " |A_t|=" << c.size() << "\n";
  if (list_all || c.size() <= 64) out << "A_t: " << list_text(c.members()) << "\n";
  out << "locally minimal: " << list_text(r.locally_minimal) << "\n";
  out << "unique minimal: " << (r.unique_minimal ? r.unique_minimal->to_string() : "none") << "\n";
  out << "fork intersection: " << r.intersection_of_minimal.to_string() << "\n";
  out << "C_t: " << r.colliders.to_string() << "\n";
  out << "refined C_t: " << r.refined_colliders.to_string() << "\n";
  out << "A_Y: " << markov_boundary(g, kOutcome).to_string() << "  A_T: " << markov_boundary(g, kTreatment).to_string()
      << "\n";
  if (!json_out.empty()) {
    auto doc = report_json(r);
    doc["rule"] = to_string(rule);
    doc["collection"] = collection_json(c);
    write_text(json_out, doc.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exhaustive recovery of sufficient adjustment sets"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SelectOptions so;
  auto* select = app.add_subcommand("select", "Criterion table, ridge-ratio cut and structure report per arm");
  select->add_option("--input", so.input, "CSV with T, Y, X1..Xp")->required();
  select->add_option("--variant", so.variant, "mn or gc")->check(CLI::IsMember({"mn", "gc", "MN", "GC"}));
  select->add_option("--arm", so.arm, "0, 1 or both")->check(CLI::IsMember({"0", "1", "both"}));
  select->add_option("--out", so.out, "output directory");
  select->add_option("--c0", so.c0, "first ridge ratio");
  select->add_option("--cn", so.cn, "ridge constant (default 0.2 log(n)/sqrt(n))");
  select->add_option("--slices", so.slices, "slices for continuous outcomes");
  select->add_option("--outcome-method", so.outcome_method)->check(CLI::IsMember({"sir", "save"}));
  select->add_option("--treatment-method", so.treatment_method)->check(CLI::IsMember({"sir", "save"}));
  select->add_option("--threads", so.threads);
  select->add_option("--hints", so.hints, "JSON with forks / colliders / noncolliders");
  select->add_option("--max-block", so.max_block);

  std::string dag_path, rule = "standard", oracle_json;
  int oracle_block = kDefaultMaxBlock;
  bool list_all = false;
  auto* oracle = app.add_subcommand("oracle", "Exact adjustment sets and structure from a DAG edge list");
  oracle->add_option("--dag", dag_path, "edge-list file")->required();
  oracle->add_option("--rule", rule, "collider rule: standard or self-only");
  oracle->add_option("--max-block", oracle_block);
  oracle->add_option("--json", oracle_json, "write the report here");
  oracle->add_flag("--list", list_all, "print every member");

  std::string models = "1", ns = "400", sim_variant = "mn", sim_out;
  int reps = 10, sim_p = 10, sim_block = kDefaultMaxBlock;
  std::uint64_t seed = 1;
  unsigned sim_threads = 0;
  auto* simulate = app.add_subcommand("simulate", "Benchmark on the simulation models");
  simulate->add_option("--models", models, "comma separated ids 1..5");
  simulate->add_option("--n", ns, "comma separated sample sizes");
  simulate->add_option("--variant", sim_variant, "mn, gc or both")->check(CLI::IsMember({"mn", "gc", "both"}));
  simulate->add_option("--reps", reps);
  simulate->add_option("--seed", seed);
  simulate->add_option("--p", sim_p);
  simulate->add_option("--threads", sim_threads);
  simulate->add_option("--max-block", sim_block);
  simulate->add_option("--out", sim_out, "CSV path (default: stdout only)");

  int gen_model = 1, gen_p = 10;
  Eigen::Index gen_n = 400;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write one draw of a simulation model as CSV");
  generate->add_option("--model", gen_model);
  generate->add_option("--n", gen_n);
  generate->add_option("--p", gen_p);
  generate->add_option("--seed", gen_seed);
  generate->add_option("--out", gen_out)->required();

  std::string ate_input, a0_text, a1_text;
  auto* ate = app.add_subcommand("ate", "Matching estimate of the average treatment effect");
  ate->add_option("--input", ate_input)->required();
  ate->add_option("--a0", a0_text, "indices for Y(0), e.g. 2,3 (empty: arm mean)");
  ate->add_option("--a1", a1_text, "indices for Y(1)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*select) return cmd_select(so, out);
    if (*oracle) return cmd_oracle(dag_path, rule, oracle_block, oracle_json, list_all, out);
    if (*simulate) {
      BenchmarkConfig bc;
      bc.models = parse_int_list(models);
      bc.ns.clear();
      for (int n : parse_int_list(ns)) bc.ns.push_back(n);
      bc.variants = parse_variants(sim_variant);
      bc.reps = reps;
      bc.seed = seed;
      bc.p = sim_p;
      bc.threads = sim_threads;
      bc.max_block = sim_block;
      for (int m : bc.models) ground_truth(m, sim_p);
      for (auto n : bc.ns)
        if (n < 100) throw Error(ErrorKind::Schema, "n must be >= 100");
      const auto result = run_benchmark(bc);
      const auto csv = result.to_csv();
      if (!sim_out.empty()) write_text(sim_out, csv);
      out << result.render();
      for (const auto& c : result.cells)
        if (c.failed > 0)
          err << "warning: model " << c.model << " " << to_string(c.variant) << " n=" << c.n << " t=" << c.arm << ": "
              << c.failed << " failed reps excluded\n";
      return kExitOk;
    }
    if (*generate) {
      const auto d = generate_model({gen_model, gen_n, gen_p, gen_seed});
      std::ofstream f(gen_out);
      if (!f) throw Error(ErrorKind::Schema, "cannot write " + gen_out);
      write_csv(f, d);
      return kExitOk;
    }
    if (*ate) {
      const Dataset d = load_csv(ate_input);
      const auto a0 = parse_indices(a0_text, d.p());
      const auto a1 = parse_indices(a1_text, d.p());
      const double v = estimate_ate(d, a0, a1);
      out << "ate=" << v << " a0=" << a0.to_string() << " a1=" << a1.to_string() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace adjustkit

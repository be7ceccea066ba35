#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hornlog/harness.hpp"

namespace {

using namespace hornlog;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Strategy parse_mode(const std::string& s) {
  if (s == "unif") return Strategy::Unif;
  if (s == "tm") return Strategy::Tm;
  if (s == "struct") return Strategy::Struct;
  throw CLI::ValidationError("--mode", "expected unif, tm or struct");
}

Selection parse_selection(const std::string& s) {
  if (s == "leftmost") return Selection::Leftmost;
  if (s == "rightmost") return Selection::Rightmost;
  throw CLI::ValidationError("--selection", "expected leftmost or rightmost");
}

std::string query_to_text(const GoalSet& q) {
  std::string out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += ", ";
    out += to_string(q[i]);
  }
  return out;
}

std::string answer_line(const Substitution& bindings) {
  if (bindings.empty()) return "true";
  std::string out;
  bool first = true;
  for (const auto& [v, t] : bindings.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += v + " = " + to_string(t);
  }
  return out;
}

struct CommonOpts {
  Budget budget;
  std::string selection = "leftmost";
  std::string trace_path;
  std::string trace_json_path;
};

void add_budget_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--max-steps", opts.budget.max_steps,
                  "clause application attempts overall")
      ->capture_default_str();
  cmd->add_option("--max-tm-steps", opts.budget.max_tm_steps,
                  "matching steps per normalization run")
      ->capture_default_str();
  cmd->add_option("--max-solutions", opts.budget.max_solutions,
                  "stop after this many answers")
      ->capture_default_str();
  cmd->add_option("--max-depth", opts.budget.max_depth, "derivation depth")
      ->capture_default_str();
  cmd->add_option("--selection", opts.selection, "leftmost | rightmost")
      ->capture_default_str();
}

Program load_program(const std::string& path) {
  return parse_program(read_file(path));
}

GoalSet load_query(const Program& p, const std::string& text) {
  GoalSet q = parse_query(text);
  check_query_against(p, q);
  for (const auto& pred : unknown_predicates(p, q))
    std::cerr << "warning: predicate '" << pred
              << "' does not occur in the program\n";
  return q;
}

void write_traces(const SolveResult& res, const CommonOpts& opts) {
  if (!opts.trace_path.empty()) {
    std::ofstream out(opts.trace_path);
    for (const auto& a : res.answers) out << trace_to_text(a.trace) << '\n';
    if (res.stuck_trace) out << trace_to_text(*res.stuck_trace) << '\n';
  }
  if (!opts.trace_json_path.empty()) {
    std::ofstream out(opts.trace_json_path);
    out << "[\n";
    bool first = true;
    for (const auto& a : res.answers) {
      if (!first) out << ",\n";
      first = false;
      out << trace_to_json(a.trace);
    }
    if (res.stuck_trace) {
      if (!first) out << ",\n";
      out << trace_to_json(*res.stuck_trace);
    }
    out << "\n]\n";
  }
}

int exit_code(const SolveResult& res) {
  for (const auto& a : res.answers)
    if (a.trace.outcome.kind == OutcomeKind::Success) return 0;
  if (res.outcome.kind == OutcomeKind::Stuck) return 1;
  return 2;
}

int cmd_solve(const std::string& program_path, const std::string& query_text,
              const std::string& mode, const CommonOpts& opts) {
  Program p = load_program(program_path);
  GoalSet q = load_query(p, query_text);
  SolveResult res = solve(p, q, parse_mode(mode), opts.budget,
                          parse_selection(opts.selection));
  for (std::size_t i = 0; i < res.answers.size(); ++i) {
    const Answer& a = res.answers[i];
    std::string line = a.trace.outcome.kind == OutcomeKind::Success
                           ? answer_line(a.bindings)
                           : "goals=" + to_string(a.trace.outcome.stuck_goals);
    std::cout << line << (i + 1 < res.answers.size() ? " ;" : "") << '\n';
  }
  std::cout << outcome_to_text(res.outcome) << '\n';
  write_traces(res, opts);
  return exit_code(res);
}

int cmd_transform(const std::string& program_path, const std::string& out_path) {
  Program p = load_program(program_path);
  Program t = transform_program(p);
  std::string text = to_string(t);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
  }
  return 0;
}

int cmd_check(const std::string& program_path,
              const std::vector<std::string>& measures, std::size_t bound) {
  Program p = load_program(program_path);
  std::map<std::string, std::size_t> positions;
  for (const auto& m : measures) {
    auto colon = m.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--measure", "expected pred:position");
    positions[m.substr(0, colon)] =
        static_cast<std::size_t>(std::stoul(m.substr(colon + 1)));
  }
  auto overlap = check_non_overlapping(p);
  if (overlap.non_overlapping) {
    std::cout << "non-overlapping: ok\n";
  } else {
    std::cout << "non-overlapping: refuted witness=(" << overlap.witness->label_a
              << "," << overlap.witness->label_b << ") unifier="
              << overlap.witness->unifier.to_string() << '\n';
  }
  auto cert = check_productivity(p, positions, bound);
  switch (cert.kind) {
    case Certificate::Kind::MeasureDecreasing: {
      std::cout << "productivity: measure-decreasing positions={";
      bool first = true;
      for (const auto& [pred, pos] : cert.positions) {
        if (!first) std::cout << ", ";
        first = false;
        std::cout << pred << ":" << pos;
      }
      std::cout << "}\n";
      break;
    }
    case Certificate::Kind::Refuted:
      std::cout << "productivity: refuted\n";
      if (cert.witness) std::cout << trace_to_text(*cert.witness);
      break;
    case Certificate::Kind::BoundedEvidence:
      std::cout << "productivity: bounded-evidence depth=" << cert.depth
                << " queries=" << cert.queries_tried << '\n';
      break;
    case Certificate::Kind::Unknown:
      std::cout << "productivity: unknown\n";
      break;
  }
  if (!overlap.non_overlapping || cert.kind == Certificate::Kind::Refuted)
    return 1;
  if (cert.kind != Certificate::Kind::MeasureDecreasing) return 2;
  return 0;
}

int cmd_prove(const std::string& program_path, const std::string& query_text,
              const CommonOpts& opts) {
  Program p = load_program(program_path);
  GoalSet q = load_query(p, query_text);
  Budget b = opts.budget;
  b.max_solutions = 1;
  SolveResult res = solve(p, q, Strategy::Unif, b,
                          parse_selection(opts.selection));
  const Answer* success = nullptr;
  for (const auto& a : res.answers)
    if (a.trace.outcome.kind == OutcomeKind::Success) {
      success = &a;
      break;
    }
  if (!success) {
    std::cout << "no proof\n" << outcome_to_text(res.outcome) << '\n';
    return res.outcome.kind == OutcomeKind::Stuck ? 1 : 2;
  }
  auto ext = extract_proof(success->trace);
  if (!ext) {
    std::cerr << "error: trace does not replay\n";
    return 3;
  }
  bool all_ok = true;
  for (std::size_t i = 0; i < ext->proofs.size(); ++i) {
    auto nf = beta_normalize(ext->proofs[i]);
    if (!nf) {
      std::cerr << "error: proof does not normalize\n";
      return 3;
    }
    std::cout << "proof = " << to_string(*nf) << '\n';
    if (is_first_order(*nf) && free_proof_vars(*nf).empty())
      std::cout << "represent = " << to_string(represent(*nf, {})) << '\n';
    auto check = check_judgement(p, ext->judgements[i]);
    std::cout << "check = " << (check.ok ? "ok" : "failed: " + check.diagnostic)
              << '\n';
    all_ok = all_ok && check.ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_diff(const std::string& program_path, const std::string& query_text,
             const std::string& theorems, bool raw, bool corpus,
             std::size_t count, std::uint64_t seed,
             const std::string& report_path, std::size_t depth) {
  std::vector<std::string> selected;
  {
    std::stringstream ss(theorems);
    std::string item;
    while (std::getline(ss, item, ',')) selected.push_back(item);
  }
  CheckBudget budget;
  budget.depth = depth;
  std::ofstream report;
  if (!report_path.empty()) report.open(report_path);

  std::map<std::string, std::map<Verdict, std::size_t>> tally;
  bool any_refuted = false;

  auto run_item = [&](const Program& p, const GoalSet& q, std::uint64_t item_seed) {
    for (const auto& name : selected) {
      TheoremReport rep;
      if (name == "equiv") {
        if (raw) {
          rep = check_equiv_struct_unif(p, q, budget, false);
        } else {
          rep = check_equiv_struct_unif(transform_program(p), q, budget, true);
        }
      } else if (name == "preserve") {
        rep = check_preservation(p, q, budget);
      } else if (name == "record") {
        rep = check_record(p, q, budget);
      } else if (name == "stepwise") {
        rep = raw ? check_stepwise(p, q, budget)
                  : check_stepwise(transform_program(p), transform_query(q),
                                   budget);
      } else {
        throw CLI::ValidationError("--theorems", "unknown theorem '" + name +
                                                     "'");
      }
      tally[rep.theorem][rep.verdict]++;
      any_refuted = any_refuted || rep.verdict == Verdict::Refuted;
      if (report.is_open())
        report << report_to_json(rep, item_seed, to_string(p), query_to_text(q))
               << '\n';
      if (!corpus)
        std::cout << "theorem=" << rep.theorem
                  << " verdict=" << to_string(rep.verdict)
                  << (rep.detail.empty() ? "" : " detail=" + rep.detail)
                  << '\n';
    }
  };

  if (corpus) {
    for (std::size_t i = 0; i < count; ++i) {
      GenConfig cfg;
      cfg.seed = seed + i;
      Program p = generate_program(cfg);
      for (const auto& q : corpus_queries(p)) run_item(p, q, cfg.seed);
    }
    for (const auto& [theorem, verdicts] : tally) {
      std::cout << "theorem=" << theorem;
      for (const auto& [v, n] : verdicts)
        std::cout << ' ' << to_string(v) << '=' << n;
      std::cout << '\n';
    }
  } else {
    Program p = load_program(program_path);
    GoalSet q = load_query(p, query_text);
    run_item(p, q, seed);
  }
  return any_refuted ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Horn-clause resolution engine with structural reduction"};
  app.require_subcommand(1);

  std::string program_path, query_text, mode = "unif", out_path;
  std::string theorems = "equiv,preserve,record,stepwise", report_path;
  std::vector<std::string> measures;
  std::size_t bound = 64, count = 200, depth = 6;
  std::uint64_t seed = 0;
  bool raw = false, corpus = false;
  CommonOpts opts;

  auto* solve_cmd = app.add_subcommand("solve", "run a query");
  solve_cmd->add_option("program", program_path)->required();
  solve_cmd->add_option("query", query_text)->required();
  solve_cmd->add_option("--mode", mode, "unif | tm | struct");
  solve_cmd->add_option("--trace", opts.trace_path, "write derivation traces");
  solve_cmd->add_option("--trace-json", opts.trace_json_path,
                        "write traces as a JSON tree");
  add_budget_options(solve_cmd, opts);

  auto* transform_cmd =
      app.add_subcommand("transform", "add proof-witness arguments");
  transform_cmd->add_option("program", program_path)->required();
  transform_cmd->add_option("-o,--out", out_path, "output file");

  auto* check_cmd =
      app.add_subcommand("check", "overlap and productivity report");
  check_cmd->add_option("program", program_path)->required();
  check_cmd->add_option("--measure", measures,
                        "pred:position measured argument");
  check_cmd->add_option("--bound", bound, "exploration depth")
      ->capture_default_str();

  auto* prove_cmd =
      app.add_subcommand("prove", "derive, extract and check a proof");
  prove_cmd->add_option("program", program_path)->required();
  prove_cmd->add_option("query", query_text)->required();
  add_budget_options(prove_cmd, opts);

  auto* diff_cmd =
      app.add_subcommand("diff", "differential theorem checks");
  diff_cmd->add_option("program", program_path);
  diff_cmd->add_option("query", query_text);
  diff_cmd->add_option("--theorems", theorems,
                       "comma list: equiv,preserve,record,stepwise")
      ->capture_default_str();
  diff_cmd->add_flag("--raw", raw, "run the program untransformed");
  diff_cmd->add_flag("--corpus", corpus, "run on generated programs");
  diff_cmd->add_option("--count", count, "corpus size")
      ->capture_default_str();
  diff_cmd->add_option("--seed", seed, "corpus base seed")
      ->capture_default_str();
  diff_cmd->add_option("--report", report_path, "JSONL report file");
  diff_cmd->add_option("--depth", depth, "oracle depth")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return cmd_solve(program_path, query_text, mode, opts);
    if (transform_cmd->parsed()) return cmd_transform(program_path, out_path);
    if (check_cmd->parsed()) return cmd_check(program_path, measures, bound);
    if (prove_cmd->parsed()) return cmd_prove(program_path, query_text, opts);
    if (diff_cmd->parsed()) {
      if (!corpus && (program_path.empty() || query_text.empty())) {
        std::cerr << "error: diff needs a program and a query, or --corpus\n";
        return 3;
      }
      return cmd_diff(program_path, query_text, theorems, raw, corpus, count,
                      seed, report_path, depth);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const TransformError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 3;
}

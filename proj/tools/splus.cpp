// splus: translate, trace, learn, verify and end-to-end pipeline runs.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stripsplus/pddl_io.hpp"
#include "stripsplus/pipeline.hpp"
#include "stripsplus/synth.hpp"
#include "stripsplus/tracegen.hpp"
#include "stripsplus/translate.hpp"
#include "stripsplus/verify.hpp"

namespace fs = std::filesystem;
using namespace stripsplus;

namespace {

struct Stage {
  const char* name;
  template <class F>
  auto operator()(F&& f) const {
    try {
      return f();
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(name) + ": " + e.what());
    }
  }
};

Domain load_domain(const std::string& path) { return parse_stripsplus_domain(read_file(path)); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

struct TranslateArgs {
  std::string domain, out = "-", report;
  std::vector<std::string> problems;
  std::size_t length = 500;
  std::uint64_t seed = 1;
};

int run_translate(const TranslateArgs& a) {
  Domain strips = Stage{"parse"}([&] { return parse_domain(read_file(a.domain)); });
  std::vector<Trace> traces;
  for (std::size_t i = 0; i < a.problems.size(); ++i) {
    Problem p = Stage{"parse"}([&] { return parse_problem(read_file(a.problems[i]), strips); });
    traces.push_back(Stage{"trace"}([&] { return generate_trace(p, strips, a.length, a.seed + i); }));
  }
  auto res = Stage{"translate"}([&] { return translate_domain(strips, traces); });
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  emit(a.out, write_stripsplus_domain(res.domain));
  const std::string report = render_translation_report(strips, res);
  if (!a.report.empty()) {
    write_file(a.report, report);
  } else {
    std::cerr << report;
  }
  return 0;
}

struct TraceArgs {
  std::string domain, problem, out = "-";
  std::size_t length = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> drop;
};

int run_trace(const TraceArgs& a) {
  Domain d = Stage{"parse"}([&] { return load_domain(a.domain); });
  Problem p = Stage{"parse"}([&] { return parse_problem(read_file(a.problem), d); });
  Trace t = Stage{"trace"}([&] { return generate_trace(p, d, a.length, a.seed, a.drop); });
  emit(a.out, write_trace_text(t));
  return 0;
}

struct LearnArgs {
  std::vector<std::string> traces;
  std::string out = "-", report, flat;
  std::size_t max_atoms = 3, jobs = 1;
  bool timing = false;
};

int run_learn(const LearnArgs& a) {
  std::vector<Trace> traces;
  for (const auto& f : a.traces) traces.push_back(Stage{"parse"}([&] { return read_trace(f); }));
  auto res = Stage{"learn"}([&] { return learn_domain(traces, {a.max_atoms, a.jobs}); });
  emit(a.out, write_stripsplus_domain(res.domain));
  if (!a.flat.empty()) write_file(a.flat, write_stripsplus_domain(res.domain, DomainStyle::Flattened));
  if (!a.report.empty()) write_file(a.report, render_learn_report(res, a.timing));
  return 0;
}

struct VerifyArgs {
  std::string hidden, learned, problem, against, report;
  std::size_t pairs = 1000, walk = 50;
  std::uint64_t seed = 1;
};

int run_verify(const VerifyArgs& a) {
  Domain hidden = Stage{"parse"}([&] { return load_domain(a.hidden); });
  Domain learned = Stage{"parse"}([&] { return load_domain(a.learned); });
  Problem p = Stage{"parse"}([&] { return parse_problem(read_file(a.problem), hidden); });
  auto rep = Stage{"verify"}([&] { return verify_equivalence(p, hidden, learned, {a.pairs, a.seed, a.walk}); });
  std::string text = render_verify_report(rep);
  if (!a.against.empty()) {
    Domain strips = Stage{"parse"}([&] { return parse_domain(read_file(a.against)); });
    auto extra = Stage{"verify"}([&] {
      return compare_successor_sets(p, strips, learned, rep.states, a.seed, a.walk);
    });
    text += "against-strips (not scored)\n" + render_verify_report(extra);
  }
  if (!a.report.empty()) write_file(a.report, text);
  std::cout << text;
  return rep.perfect() ? 0 : 1;
}

struct PipelineArgs {
  std::string domain, train, verify, out_dir, label;
  std::size_t length = 100, pairs = 1000, max_atoms = 3, jobs = 1, walk = 50;
  std::uint64_t seed = 1;
  std::vector<std::string> drop;
  bool timing = false;
};

int run_pipeline_cmd(const PipelineArgs& a) {
  PipelineConfig cfg;
  cfg.strips = Stage{"parse"}([&] { return parse_domain(read_file(a.domain)); });
  cfg.train = Stage{"parse"}([&] { return parse_problem(read_file(a.train), cfg.strips); });
  cfg.verify = Stage{"parse"}([&] { return parse_problem(read_file(a.verify), cfg.strips); });
  cfg.label = a.label;
  cfg.length = a.length;
  cfg.seed = a.seed;
  cfg.dropped = a.drop;
  cfg.pairs = a.pairs;
  cfg.learn = {a.max_atoms, a.jobs};
  cfg.walk_length = a.walk;
  auto res = Stage{"pipeline"}([&] { return run_pipeline(cfg); });
  if (!a.out_dir.empty()) {
    fs::path dir(a.out_dir);
    fs::create_directories(dir);
    write_file(dir / "hidden.sp", write_stripsplus_domain(res.translation.domain));
    write_file(dir / "translate.txt", render_translation_report(cfg.strips, res.translation));
    write_trace(res.trace, dir / "train.trace");
    write_file(dir / "learned.sp", write_stripsplus_domain(res.learned.domain));
    write_file(dir / "learn.txt", render_learn_report(res.learned, a.timing));
    write_file(dir / "verify.txt", render_verify_report(res.verify));
  }
  std::cout << res.row.key_values() << TableRow::tsv_header() << "\n" << res.row.tsv() << "\n";
  return res.verify.perfect() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn STRIPS+ domains from state-action traces"};
  app.set_config("--config", "", "TOML/INI file mirroring the flags; flags win");
  app.require_subcommand(1);

  TranslateArgs ta;
  auto* tr = app.add_subcommand("translate", "Demote determined arguments of a STRIPS domain");
  tr->add_option("--domain", ta.domain)->required()->check(CLI::ExistingFile);
  tr->add_option("--problem", ta.problems, "Instances used as evidence")->required()->check(CLI::ExistingFile);
  tr->add_option("--length", ta.length);
  tr->add_option("--seed", ta.seed);
  tr->add_option("--out", ta.out);
  tr->add_option("--report", ta.report);

  TraceArgs tg;
  auto* tc = app.add_subcommand("trace", "Record a seeded random trace");
  tc->add_option("--domain", tg.domain)->required()->check(CLI::ExistingFile);
  tc->add_option("--problem", tg.problem)->required()->check(CLI::ExistingFile);
  tc->add_option("--length", tg.length);
  tc->add_option("--seed", tg.seed);
  tc->add_option("--drop", tg.drop, "Predicate to omit from stored states");
  tc->add_option("--out", tg.out);

  LearnArgs la;
  auto* lr = app.add_subcommand("learn", "Learn a STRIPS+ domain from traces");
  lr->add_option("--trace", la.traces)->required()->check(CLI::ExistingFile);
  lr->add_option("--out", la.out);
  lr->add_option("--max-atoms", la.max_atoms);
  lr->add_option("--jobs", la.jobs);
  lr->add_option("--report", la.report);
  lr->add_option("--flat", la.flat, "Also write the flattened view");
  lr->add_flag("--timing", la.timing, "Include timings in the report");

  VerifyArgs va;
  auto* vr = app.add_subcommand("verify", "Compare learned and hidden domains on sampled pairs");
  vr->add_option("--hidden", va.hidden)->required()->check(CLI::ExistingFile);
  vr->add_option("--learned", va.learned)->required()->check(CLI::ExistingFile);
  vr->add_option("--problem", va.problem)->required()->check(CLI::ExistingFile);
  vr->add_option("--pairs", va.pairs);
  vr->add_option("--seed", va.seed);
  vr->add_option("--walk-length", va.walk);
  vr->add_option("--against-strips", va.against)->check(CLI::ExistingFile);
  vr->add_option("--report", va.report);

  PipelineArgs pa;
  auto* pl = app.add_subcommand("pipeline", "Translate, trace, learn and verify in one run");
  pl->add_option("--domain", pa.domain)->required()->check(CLI::ExistingFile);
  pl->add_option("--train", pa.train)->required()->check(CLI::ExistingFile);
  pl->add_option("--verify", pa.verify)->required()->check(CLI::ExistingFile);
  pl->add_option("--length", pa.length);
  pl->add_option("--seed", pa.seed);
  pl->add_option("--drop", pa.drop);
  pl->add_option("--pairs", pa.pairs);
  pl->add_option("--max-atoms", pa.max_atoms);
  pl->add_option("--jobs", pa.jobs);
  pl->add_option("--walk-length", pa.walk);
  pl->add_option("--label", pa.label);
  pl->add_option("--out", pa.out_dir, "Directory for artifacts");
  pl->add_flag("--timing", pa.timing);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*tr) return run_translate(ta);
    if (*tc) return run_trace(tg);
    if (*lr) return run_learn(la);
    if (*vr) return run_verify(va);
    if (*pl) return run_pipeline_cmd(pa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

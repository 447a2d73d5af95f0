#include "corpus.hpp"

#include <map>
#include <memory>

#include "stripsplus/pddl_io.hpp"

#ifndef STRIPSPLUS_CORPUS_DIR
#error "STRIPSPLUS_CORPUS_DIR must point at the bundled corpus"
#endif

namespace stripsplus::testing {

const std::vector<CorpusRow>& full_rows() {
  static const std::vector<CorpusRow> rows = {
      {"blocks3", "blocks3", 250, 1200, {}, 5, 6},
      {"blocks4", "blocks4", 250, 1600, {}, 5, 6},
      {"ferry", "ferry", 100, 1200, {}, 8, 10},
      {"gripper", "gripper", 500, 1000, {}, 10, 12},
      {"hanoi", "hanoi", 200, 400, {}, 8, 10},
      {"miconic", "miconic", 600, 1600, {}, 9, 12},
      {"sokoban", "sokoban", 1000, 800, {}, 30, 30},
      {"sokoban-pull", "sokoban-pull", 600, 1200, {}, 25, 30},
      {"c-puzzle", "c-puzzle", 500, 1600, {}, 49, 49},
  };
  return rows;
}

const std::vector<CorpusRow>& incomplete_rows() {
  static const std::vector<CorpusRow> rows = {
      {"blocks3-", "blocks3", 250, 1200, {"on_table", "clear"}, 5, 6},
      {"ferry-", "ferry", 100, 1200, {"on"}, 8, 10},
      {"miconic-", "miconic", 600, 1600, {"in_lift"}, 9, 12},
      {"c-puzzle-", "c-puzzle", 500, 1600, {"blank"}, 49, 49},
  };
  return rows;
}

std::string corpus_path(const std::string& dir, const std::string& file) {
  return std::string(STRIPSPLUS_CORPUS_DIR) + "/" + dir + "/" + file;
}

Domain load_strips(const std::string& dir) { return parse_domain(read_file(corpus_path(dir, "domain.pddl"))); }

Problem load_problem(const std::string& dir, const std::string& which, const Domain& strips) {
  return parse_problem(read_file(corpus_path(dir, which + ".pddl")), strips);
}

PipelineConfig make_config(const CorpusRow& row, std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.label = row.label;
  cfg.strips = load_strips(row.dir);
  cfg.train = load_problem(row.dir, "train", cfg.strips);
  cfg.verify = load_problem(row.dir, "verify", cfg.strips);
  cfg.length = row.length;
  cfg.seed = seed;
  cfg.dropped = row.dropped;
  cfg.pairs = row.pairs;
  return cfg;
}

const CorpusRow& row_named(const std::string& label) {
  for (const auto* rows : {&full_rows(), &incomplete_rows()})
    for (const auto& r : *rows)
      if (r.label == label) return r;
  throw Error("no corpus row " + label);
}

const PipelineResult& cached_pipeline(const std::string& label, std::uint64_t seed) {
  static std::map<std::pair<std::string, std::uint64_t>, std::unique_ptr<PipelineResult>> cache;
  auto& slot = cache[{label, seed}];
  if (!slot) slot = std::make_unique<PipelineResult>(run_pipeline(make_config(row_named(label), seed)));
  return *slot;
}

}  // namespace stripsplus::testing

#include <benchmark/benchmark.h>

#include "stripsplus/pddl_io.hpp"
#include "stripsplus/pipeline.hpp"
#include "stripsplus/synth.hpp"
#include "stripsplus/tracegen.hpp"
#include "stripsplus/translate.hpp"

using namespace stripsplus;

namespace {

struct Fixture {
  Domain strips;
  Problem train;
  Problem verify;
  TranslationResult translation;
  Trace trace;
};

Fixture make(const std::string& dir, std::size_t length) {
  const std::string base = std::string(STRIPSPLUS_CORPUS_DIR) + "/" + dir + "/";
  Fixture f;
  f.strips = parse_domain(read_file(base + "domain.pddl"));
  f.train = parse_problem(read_file(base + "train.pddl"), f.strips);
  f.verify = parse_problem(read_file(base + "verify.pddl"), f.strips);
  const std::vector<Trace> evidence = {generate_trace(f.train, f.strips, length, 1)};
  f.translation = translate_domain(f.strips, evidence);
  f.trace = generate_trace(f.train, f.translation.domain, length, 1);
  return f;
}

void BM_Learn(benchmark::State& st, const char* dir, std::size_t length) {
  const Fixture f = make(dir, length);
  for (auto _ : st) benchmark::DoNotOptimize(learn_domain(std::span<const Trace>(&f.trace, 1)));
}
BENCHMARK_CAPTURE(BM_Learn, blocks3, "blocks3", 250)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Learn, gripper, "gripper", 500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Learn, sokoban, "sokoban", 1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Learn, c_puzzle, "c-puzzle", 500)->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& st, const char* dir, std::size_t length, std::size_t pairs) {
  const Fixture f = make(dir, length);
  const Domain learned = learn_domain(std::span<const Trace>(&f.trace, 1)).domain;
  for (auto _ : st)
    benchmark::DoNotOptimize(verify_equivalence(f.verify, f.translation.domain, learned, {pairs, 1, 50}));
}
BENCHMARK_CAPTURE(BM_Verify, blocks3, "blocks3", 250, 1200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Verify, c_puzzle, "c-puzzle", 500, 1600)->Unit(benchmark::kMillisecond);

}  // namespace

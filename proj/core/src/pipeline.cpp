#include "stripsplus/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "stripsplus/engine.hpp"
#include "stripsplus/tracegen.hpp"

namespace stripsplus {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string TableRow::tsv_header() {
  return "domain\t#O\t#L\t|x'|\t|x|\t|x|+|z|\t|z|\t|x'\\z|\t|z\\x'|\tT\t#O_V\t#S_V\tT_V\t%V";
}

std::string TableRow::tsv() const {
  std::ostringstream out;
  out << label << '\t' << objects << '\t' << length << '\t' << strips_arity << '\t' << explicit_arity << '\t'
      << learned_total << '\t' << learned_z << '\t' << missed << '\t' << extra << '\t' << fixed(learn_seconds, 2)
      << '\t' << verify_objects << '\t' << verify_pairs << '\t' << fixed(verify_seconds, 2) << '\t'
      << fixed(score, 1);
  return out.str();
}

std::string TableRow::key_values() const {
  std::ostringstream out;
  out << "domain=" << label << "\nobjects=" << objects << "\nlength=" << length << "\nstrips_arity=" << strips_arity
      << "\nexplicit_arity=" << explicit_arity << "\nlearned_total=" << learned_total << "\nlearned_z=" << learned_z
      << "\nmissed=" << missed << "\nextra=" << extra << "\nlearn_seconds=" << fixed(learn_seconds, 3)
      << "\nverify_objects=" << verify_objects << "\nverify_pairs=" << verify_pairs
      << "\nverify_seconds=" << fixed(verify_seconds, 3) << "\nscore=" << fixed(score, 3) << "\n";
  return out.str();
}

RecoveryCount count_recovery(const Problem& train, const TranslationResult& translation,
                             const std::vector<State>& full_states, const Trace& trace, const Domain& learned) {
  RecoveryCount rc;
  const Domain& hidden = translation.domain;
  CompiledDomain hd(hidden, train.objects);
  CompiledDomain ld(learned, trace.objects);
  PredicateMap to_learned(trace.predicates, learned.predicates);

  for (const auto& tr : translation.report) {
    const CompiledSchema* hs = hd.find(tr.action);
    const CompiledSchema* ls = ld.find(tr.action);
    const std::size_t n_orig = tr.kept.size() + tr.moved.size();
    const std::size_t n_learned_z = ls ? ls->schema().implicit_count() : 0;
    // per original param: still a match candidate for each learned z
    std::vector<std::vector<bool>> same(n_orig, std::vector<bool>(n_learned_z, true));
    bool any = false;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
      const auto& a = trace.steps[k].action;
      if (a.name != tr.action || !hs || !ls) continue;
      StateIndex hidx(full_states[k], hidden.predicates.size());
      auto hz = hs->applicable(EvalContext{hidx, hd.domains()}, a.args);
      const State lstate = to_learned.apply(trace.state_before(k));
      StateIndex lidx(lstate, learned.predicates.size());
      auto lz = ls->applicable(EvalContext{lidx, ld.domains()}, a.args);
      if (!hz || !lz) throw Error("replay of " + a.name + " failed at step " + std::to_string(k));
      any = true;
      std::vector<ObjectId> orig(n_orig, kNoObject);
      for (std::size_t i = 0; i < tr.kept.size(); ++i) orig[tr.kept[i]] = a.args[i];
      for (std::size_t j = 0; j < tr.moved.size(); ++j) orig[tr.moved[j].param] = (*hz)[j];
      for (std::size_t p = 0; p < n_orig; ++p)
        for (std::size_t j = 0; j < n_learned_z; ++j)
          if (orig[p] != (*lz)[j]) same[p][j] = false;
    }
    for (const auto& d : tr.moved) {
      bool found = false;
      for (std::size_t j = 0; any && j < n_learned_z; ++j) found = found || same[d.param][j];
      if (!found) ++rc.missed;
    }
    for (std::size_t j = 0; j < n_learned_z; ++j) {
      bool found = false;
      for (std::size_t p = 0; any && p < n_orig; ++p) found = found || same[p][j];
      if (!found) ++rc.extra;
    }
  }
  return rc;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult res;
  {
    // evidence for uniqueness comes from both instances
    std::vector<Trace> strips_traces;
    strips_traces.push_back(generate_trace(cfg.train, cfg.strips, cfg.length, cfg.seed));
    strips_traces.push_back(generate_trace(cfg.verify, cfg.strips, cfg.length, cfg.seed ^ 0x5DEECE66Dull));
    res.translation = translate_domain(cfg.strips, strips_traces);
  }
  const Domain& hidden = res.translation.domain;

  FullWalk walk = generate_walk(cfg.train, hidden, cfg.length, cfg.seed, cfg.dropped);
  res.trace = walk.trace;

  res.learned = learn_domain(std::span<const Trace>(&res.trace, 1), cfg.learn);

  std::size_t pairs = cfg.pairs;
  auto t0 = std::chrono::steady_clock::now();
  res.verify = verify_equivalence(cfg.verify, hidden, res.learned.domain, {pairs, cfg.seed, cfg.walk_length});
  const double tv = seconds_since(t0);

  TableRow& row = res.row;
  row.label = cfg.label.empty() ? cfg.strips.name : cfg.label;
  row.objects = cfg.train.objects.names.size();
  row.length = res.trace.length();
  for (const auto& s : cfg.strips.schemas) row.strips_arity += s.arity();
  for (const auto& s : hidden.schemas) row.explicit_arity += s.arity();
  for (const auto& s : res.learned.domain.schemas) row.learned_z += s.implicit_count();
  row.learned_total = row.explicit_arity + row.learned_z;
  auto rc = count_recovery(cfg.train, res.translation, walk.full_states, res.trace, res.learned.domain);
  row.missed = rc.missed;
  row.extra = rc.extra;
  row.learn_seconds = res.learned.seconds;
  row.verify_objects = cfg.verify.objects.names.size();
  row.verify_pairs = res.verify.pairs_tested;
  row.verify_seconds = tv;
  row.score = res.verify.score();
  return res;
}

}  // namespace stripsplus

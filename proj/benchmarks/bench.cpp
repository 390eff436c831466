// Microbenchmarks for the hot paths: proof checking, parsing and printing,
// normalization, interpolation, and bounded countermodel search.

#include <benchmark/benchmark.h>

#include "stproof/interpolate.hpp"
#include "stproof/normalize.hpp"
#include "stproof/proof_io.hpp"
#include "stproof/semantics.hpp"

using namespace stp;

namespace {

constexpr CalculusId MQ = CalculusId::MQST;

Signature sig() {
  Signature s;
  s.relations = {{"P", 1}, {"Q", 1}, {"p", 0}, {"q", 0}};
  s.functions = {{"c", 0}, {"f", 1}};
  return s;
}

DerivPtr drinker() {
  Signature sg;
  return parse_derivation(
      read_file(std::string(STPROOF_FIXTURES_DIR) + "/drinker_stq.proof"), sg);
}

// A chain of n negation introduction/elimination detours over one premise.
DerivPtr detour_chain(int n) {
  auto s = sig();
  FormulaPtr p = parse_formula("p", s, false);
  DerivPtr d = mk_assumption("a", Sequent{{}, {p}});
  for (int i = 0; i < n; ++i) {
    d = mk_rule(MQ, RuleId::NegLI, {d}, {.principal = mk_neg(p)});
    d = mk_rule(MQ, RuleId::NegLE, {d}, {.principal = mk_neg(p)});
  }
  return d;
}

DerivPtr conj_ladder(int n) {
  auto s = sig();
  std::vector<DerivPtr> leaves;
  for (int i = 0; i < n; ++i)
    leaves.push_back(mk_assumption("a" + std::to_string(i),
                                   Sequent{{}, {parse_formula(i % 2 ? "p" : "q", s, false)}}));
  DerivPtr d = leaves[0];
  for (int i = 1; i < n; ++i)
    d = mk_rule(MQ, RuleId::AndRI, {d, leaves[i]},
                {.principal = mk_conj(d->sequent.succ.back(),
                                      leaves[i]->sequent.succ[0])});
  return d;
}

void bm_check_drinker(benchmark::State& state) {
  DerivPtr d = drinker();
  for (auto _ : state) benchmark::DoNotOptimize(check(d, CalculusId::STQ));
}
BENCHMARK(bm_check_drinker);

void bm_parse_print_roundtrip(benchmark::State& state) {
  std::string text =
      read_file(std::string(STPROOF_FIXTURES_DIR) + "/drinker_stq.proof");
  for (auto _ : state) {
    Signature sg;
    benchmark::DoNotOptimize(print_derivation(parse_derivation(text, sg)));
  }
}
BENCHMARK(bm_parse_print_roundtrip);

void bm_normalize_detours(benchmark::State& state) {
  DerivPtr d = detour_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(normalize(d));
}
BENCHMARK(bm_normalize_detours)->Arg(4)->Arg(16)->Arg(64);

void bm_interpolate_ladder(benchmark::State& state) {
  DerivPtr d = conj_ladder(4);
  Split split;
  for (int i = 0; i < 4; ++i)
    split["a" + std::to_string(i)] = i % 2 ? SplitSide::X2 : SplitSide::X1;
  auto sg = sig();
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(d, split, sg));
}
BENCHMARK(bm_interpolate_ladder);

void bm_countermodel_search(benchmark::State& state) {
  auto sg = sig();
  Sequent prem1 = parse_sequent("P(c) |- Q(c)", sg, false);
  Sequent goal = parse_sequent("P(f(c)) |- Q(f(c))", sg, false);
  for (auto _ : state)
    benchmark::DoNotOptimize(consequence_bounded({prem1}, goal, 2));
}
BENCHMARK(bm_countermodel_search);

}  // namespace

BENCHMARK_MAIN();

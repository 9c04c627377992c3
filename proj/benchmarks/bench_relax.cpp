#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "cqrelax/search.hpp"
#include "cqrelax/similarity.hpp"
#include "cqrelax/spj.hpp"

namespace {

using namespace cqrelax;

constexpr int kDiseases = 20;

std::string disease(int i) { return "D" + std::to_string(i); }

// Ill with `rows` random (patient, disease) pairs and one prescription per patient.
Database synthetic_db(int rows) {
  auto schemas = load_schema(
      "relation Ill(Name: string, Disease: string)\n"
      "relation Treat(Name: string, Prescription: string)\n");
  std::mt19937 rng(42);
  const int patients = std::max(1, rows / 3);
  std::uniform_int_distribution<int> person(0, patients - 1), illness(0, kDiseases - 1);
  Relation ill(schemas[0]), treat(schemas[1]);
  for (int i = 0; i < rows; ++i)
    ill.insert({Value("P" + std::to_string(person(rng))), Value(disease(illness(rng)))});
  for (int p = 0; p < patients; ++p)
    treat.insert({Value("P" + std::to_string(p)), Value("M" + std::to_string(p % 7))});
  Database db;
  db.add(std::move(ill));
  db.add(std::move(treat));
  return db;
}

SimilarityConfig synthetic_similarity() {
  PairTable t;
  for (int a = 0; a < kDiseases; ++a)
    for (int b = a + 1; b < kDiseases; ++b) t.add(disease(a), disease(b), 1.0 / (1 + b - a));
  SimilarityConfig cfg;
  cfg.bind("Disease", t);
  return cfg;
}

const char* const kQuery = "Ill(x, D0) & Ill(x, D1) & Treat(x, y)";

void BM_Evaluate(benchmark::State& state) {
  auto db = synthetic_db(static_cast<int>(state.range(0)));
  auto spj = translate(parse_query(kQuery), db);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(spj, db));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->RangeMultiplier(4)->Range(64, 16384);

void BM_EvaluateNaive(benchmark::State& state) {
  auto db = synthetic_db(static_cast<int>(state.range(0)));
  auto spj = translate(parse_query(kQuery), db);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_naive(spj, db));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateNaive)->RangeMultiplier(2)->Range(16, 128);

void BM_RelaxOneStep(benchmark::State& state) {
  auto db = synthetic_db(static_cast<int>(state.range(0)));
  auto spj = translate(parse_query(kQuery), db);
  RuleBase rules{parse_rule("Ill(x, D0) -> Treat(x, M0)")};
  for (auto _ : state) benchmark::DoNotOptimize(relax_one_step(spj, db, rules));
}
BENCHMARK(BM_RelaxOneStep)->RangeMultiplier(4)->Range(64, 4096);

void BM_RelaxRanked(benchmark::State& state) {
  auto db = synthetic_db(128);
  auto cfg = synthetic_similarity();
  RuleBase rules{parse_rule("Ill(x, D0) -> Treat(x, M0)")};
  RelaxOptions opts;
  opts.max_steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(relax(parse_query(kQuery), db, rules, cfg, opts));
}
BENCHMARK(BM_RelaxRanked)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_TaxonomyWuPalmer(benchmark::State& state) {
  std::vector<std::pair<std::string, std::string>> edges;
  const int n = static_cast<int>(state.range(0));
  for (int i = 1; i < n; ++i) edges.emplace_back("N" + std::to_string(i), "N" + std::to_string((i - 1) / 2));
  Taxonomy tax(edges);
  Value a("N" + std::to_string(n - 1)), b("N" + std::to_string(n / 2));
  for (auto _ : state) benchmark::DoNotOptimize(tax.similarity(TaxonomyMeasure::WuPalmer, a, b, 0.0));
}
BENCHMARK(BM_TaxonomyWuPalmer)->Range(16, 4096);

}  // namespace

BENCHMARK_MAIN();

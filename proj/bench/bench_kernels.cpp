// Serial reference against the OpenMP kernels on identical inputs.

#include <benchmark/benchmark.h>

#include <random>

#include "pagesift/dataset.hpp"
#include "pagesift/dom.hpp"
#include "pagesift/features.hpp"
#include "pagesift/gbm.hpp"
#include "pagesift/layout.hpp"

using namespace pagesift;

namespace {

struct Problem {
  features::Matrix x;
  std::vector<double> grad, hess;
};

Problem make_problem(std::size_t rows) {
  std::mt19937_64 rng(rows);
  std::uniform_real_distribution<double> u(-1, 1);
  Problem p{features::Matrix(rows, features::kFeatureCount), {}, {}};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < features::kFeatureCount; ++c) p.x.at(r, c) = u(rng);
    double prob = 0.5 + 0.45 * u(rng);
    p.grad.push_back((p.x.at(r, 0) + 0.3 * p.x.at(r, 5) > 0 ? 1.0 : 0.0) - prob);
    p.hess.push_back(prob * (1 - prob));
  }
  return p;
}

template <auto Split>
void BM_find_best_split(benchmark::State& state) {
  auto p = make_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Split(p.x, p.grad, p.hess, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fit>
void BM_fit_tree(benchmark::State& state) {
  auto p = make_problem(static_cast<std::size_t>(state.range(0)));
  gbm::TrainingConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(Fit(p.x, p.grad, p.hess, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Extract>
void BM_extract_all(benchmark::State& state) {
  auto page = dataset::synth_generate(1, 1).front();
  auto doc = dom::parse_document(page.html);
  auto tree = layout::compute_layout(doc, {});
  for (auto _ : state) benchmark::DoNotOptimize(Extract(doc, tree));
}

void BM_parse_and_layout(benchmark::State& state) {
  auto page = dataset::synth_generate(1, 1).front();
  for (auto _ : state) {
    auto doc = dom::parse_document(page.html);
    benchmark::DoNotOptimize(layout::compute_layout(doc, {}));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(page.html.size()));
}

}  // namespace

BENCHMARK(BM_find_best_split<gbm::find_best_split_serial>)->Name("find_best_split/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_find_best_split<gbm::find_best_split>)->Name("find_best_split/parallel")->Arg(1000)->Arg(20000);
BENCHMARK(BM_fit_tree<gbm::fit_tree_serial>)->Name("fit_tree/serial")->Arg(2000)->Arg(20000);
BENCHMARK(BM_fit_tree<gbm::fit_tree>)->Name("fit_tree/parallel")->Arg(2000)->Arg(20000);
BENCHMARK(BM_extract_all<features::extract_all_serial>)->Name("extract_all/serial");
BENCHMARK(BM_extract_all<features::extract_all>)->Name("extract_all/parallel");
BENCHMARK(BM_parse_and_layout);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "wugbench/corpus.hpp"
#include "wugbench/decode.hpp"
#include "wugbench/nd/graph.hpp"
#include "wugbench/nd/rng.hpp"
#include "wugbench/seq2seq/model.hpp"
#include "wugbench/wugeval.hpp"

namespace {

using namespace wugbench;

corpus::Alphabet alphabet() {
  corpus::Alphabet a;
  a.add_tag("PST");
  for (char c = 'a'; c <= 'z'; ++c) a.add_character(std::string(1, c));
  return a;
}

std::unique_ptr<seq2seq::Model> model(seq2seq::Architecture arch) {
  seq2seq::ModelConfig c;
  c.arch = arch;
  c.seed = 1;
  return seq2seq::build_model(c, alphabet());
}

const std::vector<std::string> kTags{"PST"};

void BM_LossBackward(benchmark::State& state) {
  auto m = model(static_cast<seq2seq::Architecture>(state.range(0)));
  const auto source = corpus::encode_source(m->alphabet(), "glorp", kTags);
  const auto target = corpus::encode_target(m->alphabet(), "glorped");
  for (auto _ : state) {
    nd::Graph g;
    const nd::Var loss = m->loss(g, source, target);
    g.backward(loss);
    benchmark::DoNotOptimize(loss.value().item());
  }
  state.SetLabel(std::string(seq2seq::to_string(m->config().arch)));
}

void BM_BeamDecode(benchmark::State& state) {
  auto m = model(static_cast<seq2seq::Architecture>(state.range(0)));
  const auto source = corpus::encode_source(m->alphabet(), "splung", kTags);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode::beam_decode(*m, source, 12));
  }
  state.SetLabel(std::string(seq2seq::to_string(m->config().arch)));
}

void BM_ForceScore(benchmark::State& state) {
  auto m = model(static_cast<seq2seq::Architecture>(state.range(0)));
  const auto source = corpus::encode_source(m->alphabet(), "splung", kTags);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode::force_score(*m, source, std::string_view("splunged")));
  }
  state.SetLabel(std::string(seq2seq::to_string(m->config().arch)));
}

void BM_Spearman(benchmark::State& state) {
  nd::Rng rng(7);
  std::vector<double> x(state.range(0)), y(state.range(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal();
    y[i] = x[i] + rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(wugeval::spearman(x, y).r);
}

}  // namespace

BENCHMARK(BM_LossBackward)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BeamDecode)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForceScore)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Spearman)->Arg(132)->Arg(1000);
BENCHMARK_MAIN();

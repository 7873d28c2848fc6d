#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "mcvt/flow.hpp"
#include "mcvt/maskgen.hpp"
#include "mcvt/mgbi.hpp"
#include "mcvt/warp.hpp"

namespace {

using namespace mcvt;

Frame noise_frame(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.f, 1.f);
  std::vector<float> d(static_cast<std::size_t>(w) * h * 3);
  for (float& v : d) v = u(rng);
  return Frame(w, h, std::move(d));
}

FlowField wobble_flow(int w, int h) {
  std::vector<float> uv(static_cast<std::size_t>(w) * h * 2);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      uv[(static_cast<std::size_t>(y) * w + x) * 2] = 3.f * std::sin(0.05f * y) + 0.3f;
      uv[(static_cast<std::size_t>(y) * w + x) * 2 + 1] = 2.f * std::cos(0.07f * x) - 0.4f;
    }
  return FlowField(w, h, std::move(uv));
}

void BM_BackwardWarp(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Frame f = noise_frame(n, n, 1);
  const FlowField flow = wobble_flow(n, n);
  for (auto _ : st) benchmark::DoNotOptimize(backward_warp(f, flow));
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_BackwardWarp)->Arg(256)->Arg(512);

void BM_ForwardWarpOnes(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const FlowField flow = wobble_flow(n, n);
  for (auto _ : st) benchmark::DoNotOptimize(forward_warp_ones(flow));
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_ForwardWarpOnes)->Arg(256)->Arg(512);

void BM_BlockMatch(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Frame a = noise_frame(n, n, 2), b = noise_frame(n, n, 3);
  for (auto _ : st) benchmark::DoNotOptimize(block_match(a, b, 8, 4));
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_BlockMatch)->Arg(128)->Arg(256);

void BM_ExpandMask(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 1);
  for (std::size_t k = 0; k < m.size(); k += 97) m[k] = 0;
  const BinaryMask mask(n, n, std::move(m));
  for (auto _ : st) benchmark::DoNotOptimize(expand_mask(mask, 2.0, 4, 0.99));
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_ExpandMask)->Arg(256)->Arg(512);

// Residual + occlusion + threshold + expansion + latent pooling for one P-frame.
void BM_MaskGeneration(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Frame cur = noise_frame(n, n, 4), ref = noise_frame(n, n, 5);
  const FlowField flow = wobble_flow(n, n);
  for (auto _ : st) {
    const ScalarField r = residual_map(cur, backward_warp(ref, flow));
    const ScalarField o = forward_warp_ones(flow);
    const BinaryMask m = expand_mask(inpaint_mask(o, r, 5.0, 0.5), 2.0, 4, 0.99);
    benchmark::DoNotOptimize(to_latent_mask(m, 8));
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_MaskGeneration)->Arg(256)->Arg(512);

void BM_MatchScoresBlend(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const ScalarField o = ScalarField::filled(n, n, 1.f), r = ScalarField::filled(n, n, 0.01f);
  const Frame a = noise_frame(n, n, 6), b = noise_frame(n, n, 7);
  for (auto _ : st) benchmark::DoNotOptimize(blend_frames(a, b, match_scores(o, r, o, r, 10.0, 20.0)));
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_MatchScoresBlend)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();

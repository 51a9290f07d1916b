#include "symdyn/avoidance.hpp"
#include "symdyn/game.hpp"
#include "symdyn/matching.hpp"
#include "symdyn/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace symdyn;

namespace {

const MarkovPartition& dyadic() {
  static const auto p = MarkovPartition::uniform(2, 1);
  return p;
}

void BM_CountAvoiding(benchmark::State& state) {
  const auto& ts = dyadic().ts();
  Word gamma = parse_word("2111111111121", 2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_avoiding(ts, gamma, n));
}
BENCHMARK(BM_CountAvoiding)->Arg(20)->Arg(200)->Arg(2000);

void BM_NoMatchingExtend(benchmark::State& state) {
  const auto& ts = dyadic().ts();
  Word gamma = parse_word("2111111111121", 2);
  Word alpha = parse_word("12121212121212", 2);
  for (auto _ : state) benchmark::DoNotOptimize(no_matching_extend(ts, gamma, alpha));
}
BENCHMARK(BM_NoMatchingExtend);

void BM_CertifyExtension(benchmark::State& state) {
  const auto& ts = dyadic().ts();
  Word gamma = parse_word("2111111111121", 2);
  Word alpha = parse_word("12121212121212", 2);
  auto pair = no_matching_extend(ts, gamma, alpha);
  for (auto _ : state) benchmark::DoNotOptimize(certify_extension(ts, gamma, alpha, pair.joined(), 12));
}
BENCHMARK(BM_CertifyExtension);

void BM_TreeLikeLevels(benchmark::State& state) {
  Word gamma = parse_word("2111111111121", 2);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    TreeLikeCollection tc(dyadic(), {{gamma}, 12, k, Variant::every_position, std::nullopt});
    benchmark::DoNotOptimize(hd_lower_bound(tc, k));
  }
}
BENCHMARK(BM_TreeLikeLevels)->Arg(10)->Arg(30);

void BM_SpectralDimension(benchmark::State& state) {
  Word gamma = parse_word("2111111111121", 2);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_dimension(dyadic(), {gamma}));
}
BENCHMARK(BM_SpectralDimension);

void BM_PlayAndVerify(benchmark::State& state) {
  GameParams g;
  g.white_ratio = Rational(1, 64);
  g.black_ratio = Rational(1, 4);
  g.x0 = Rational(1, 3);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    g.seed = seed++;
    auto t = play(dyadic(), g, 60);
    benchmark::DoNotOptimize(verify_transcript(t, dyadic(), 1000).ok());
  }
}
BENCHMARK(BM_PlayAndVerify)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

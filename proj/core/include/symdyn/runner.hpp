#pragma once

#include "symdyn/avoidance.hpp"
#include "symdyn/game.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symdyn {

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExampleInputs {
  Word gamma1{2, 1, 1};
  Word alpha1{1, 2, 2, 2, 1};
  Word gamma2{2, 1, 2, 1, 1};
  Word alpha2{1, 1, 1, 1, 1, 2, 1, 2, 1};
  int q3 = 10;
  int k3 = 50;
  std::vector<int> s_exponents{2, 3, 4};
};

// The dyadic 2^s-partition with letters 1 and 2^{s-1} exchanged, so that the element
// at the left of 1/2 carries letter 1 and a..ab sits next to the top element.
MarkovPartition exchanged_dyadic(int s_exponent);

std::vector<CheckLine> reproduce_examples(const ExampleInputs& in = {});
std::string format_check_lines(const std::vector<CheckLine>& lines);

struct HdRow {
  int k = 0;
  Integer size;
  std::optional<Rational> delta;
  std::optional<Rational> diameter;
  std::optional<RealEnclosure> bound;
  bool death = false;
  std::string note;
};

struct HdExperiment {
  CollectionSpec spec;
  std::vector<HdRow> rows;
  RealEnclosure strided_closed;
  std::optional<RealEnclosure> corrected_closed;  // with eps(2 s P)
  std::optional<DimensionResult> oracle;
  std::string oracle_note;
  std::vector<std::string> warnings;
};

HdExperiment hd_experiment(const MarkovPartition& p, const CollectionSpec& spec,
                           DensitySource source = DensitySource::measured, const Rational& floor = Rational(0),
                           bool with_oracle = true);
std::string hd_csv(const HdExperiment& e);
std::string hd_json(const HdExperiment& e, int s);

struct BatchEntry {
  GameParams params;
  bool ok = false;
  std::optional<std::string> strategy_failure;
  std::vector<std::string> failures;
  bool out_of_theorem = false;
  std::size_t certificate_length = 0;
  std::optional<int> Q;
};

// Jobs run on `threads` workers; results come back in job order.
std::vector<BatchEntry> game_batch(const MarkovPartition& p, const std::vector<GameParams>& jobs, int rounds,
                                   int horizon = 1000, int threads = 1);

}  // namespace symdyn

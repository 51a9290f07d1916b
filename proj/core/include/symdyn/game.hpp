#pragma once

#include "symdyn/circle.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

// Closed arc [center - radius, center + radius] of R/Z; center kept in [0,1).
struct Ball {
  Rational center;
  Rational radius;

  Interval arc() const { return {center - radius, center + radius}; }
  Rational diameter() const { return 2 * radius; }
  friend bool operator==(const Ball& a, const Ball& b) { return a.center == b.center && a.radius == b.radius; }
};

enum class BlackStrategy { random, hug_target, replay };
std::string to_string(BlackStrategy b);
BlackStrategy parse_black_strategy(std::string_view text);

// all: every representation of x0 is avoided in one play (serial extension).
// single: only the lexicographically first representation.
enum class TargetMode { all, single };
std::string to_string(TargetMode t);
TargetMode parse_target_mode(std::string_view text);

enum class Phase { filler, fit_eta, expand, choose_q, descent };
std::string to_string(Phase phase);
Phase parse_phase(std::string_view text);

struct GameParams {
  Rational white_ratio;  // n
  Rational black_ratio;  // m
  Rational x0;
  std::uint64_t seed = 0;
  BlackStrategy black = BlackStrategy::random;
  TargetMode targets = TargetMode::all;
  Rational initial_radius{1, 4};
  std::vector<Ball> replay;  // Black's balls B_1, B_2, ... for BlackStrategy::replay
};

struct StrategyConstants {
  int s = 0;
  Rational lambda;
  Rational C{1};
  Rational r;
  Rational delta_t;
  Rational max_diameter;
  Rational eps1;
  Rational eps2s;
  Rational eps7s2;
  Rational eps_descent;  // eps(7s+2), or eps(5) without degenerate letters
  int descent_length = 0;
  int P = 0;
  int L0 = 0;
  Rational winning_ratio;
  bool degenerate = false;
};

StrategyConstants strategy_constants(const MarkovPartition& p);
Rational winning_ratio(const MarkovPartition& p);
// Several maps played at once: the smallest ratio.
Rational winning_ratio(const std::vector<const MarkovPartition*>& partitions);

struct StrategyState {
  Phase phase = Phase::filler;
  int P = 0;
  int L0 = 0;
  std::optional<int> J, L1, L, N0, N, Q;
  Word eta;
  Word current_word;       // certified cylinder word containing the last W
  Word pending_extension;  // extension appended after the last fitted word
  std::vector<int> q_history;
  std::vector<std::size_t> extension_lengths;  // l(b0)+l(b1) before each q
  std::vector<Word> gamma_truncations;
  bool q_window_ok = true;
  bool inequality_11 = false;  // m large enough for the q-window guarantee
  bool ladder_fallback = false;
  bool widened_first_step = false;
};

struct Move {
  int turn = 0;
  char player = 'B';
  Ball ball;
  Phase phase = Phase::filler;
  std::optional<Word> word;
};

struct GameTranscript {
  Rational white_ratio;
  Rational black_ratio;
  Rational x0;
  std::uint64_t seed = 0;
  BlackStrategy black = BlackStrategy::random;
  TargetMode targets = TargetMode::all;
  int rounds = 0;
  bool out_of_theorem = false;
  std::vector<Move> moves;
  StrategyState state;

  // Word of the last certified cylinder, empty before descent.
  Word certificate() const { return state.current_word; }
};

class WhiteStrategy {
 public:
  WhiteStrategy(const MarkovPartition& p, const Rational& x0, const Rational& n, const Rational& m,
                TargetMode mode = TargetMode::all);

  Ball move(const Ball& B, int turn);
  const StrategyState& state() const noexcept { return state_; }
  const StrategyConstants& constants() const noexcept { return k_; }
  // Phase in which the last W was chosen.
  Phase last_phase() const noexcept { return last_phase_; }

 private:
  Word gamma(std::size_t t, int Q);
  std::size_t target_count();
  std::vector<Word> targets(int Q);
  bool eligible(const Word& g) const;
  int choose_q_ladder(int N);
  std::vector<int> q_candidates(int N);
  Word extend(const std::vector<Word>& gammas, const Word& alpha) const;
  Ball place_in(const CylinderSet& cyl, const Ball& B, int turn, const char* what) const;
  Ball place_in_half(const Interval& bplus, const Ball& B) const;
  Ball start_descent(const Ball& B, int turn);
  Ball descend(const Ball& B, int turn);

  const MarkovPartition& p_;
  Rational x0_;
  Rational n_;
  Rational m_;
  TargetMode mode_;
  StrategyConstants k_;
  StrategyState state_;
  Phase last_phase_ = Phase::filler;
  std::optional<CylinderSet> eta_cur_;
  std::optional<CylinderSet> cert_cyl_;
  int alpha_generation_ = 0;
  int rep_depth_ = 0;
  std::vector<Word> reps_;
};

class BlackPlayer {
 public:
  BlackPlayer(BlackStrategy strategy, const Rational& x0, const Rational& m, std::uint64_t seed,
              std::vector<Ball> replay = {});

  Ball first(const Rational& radius);
  Ball next(const Ball& W);

 private:
  Rational pick(const Rational& lo, const Rational& hi);

  BlackStrategy strategy_;
  Rational x0_;
  Rational m_;
  std::mt19937_64 rng_;
  std::vector<Ball> replay_;
  std::size_t cursor_ = 0;
};

// Black moves first; `rounds` pairs B_i, W_i.
GameTranscript play(const MarkovPartition& p, const GameParams& params, int rounds);

struct VerificationReport {
  bool ratios_ok = true;        // (a)
  bool certificate_ok = true;   // (b)
  bool orbit_ok = true;         // (c)
  bool neighborhood_ok = true;  // (d)
  bool q_window_ok = true;
  std::optional<int> failing_turn;
  std::vector<std::string> failures;
  Rational neighborhood_left;   // x0 - left end of the avoided neighborhood
  Rational neighborhood_right;
  int orbit_iterates = 0;

  bool ok() const { return ratios_ok && certificate_ok && orbit_ok && neighborhood_ok && q_window_ok; }
};

VerificationReport verify_transcript(const GameTranscript& t, const MarkovPartition& p, int horizon = 1000);

}  // namespace symdyn

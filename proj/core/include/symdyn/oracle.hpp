#pragma once

#include "symdyn/circle.hpp"
#include "symdyn/rational.hpp"
#include "symdyn/sft.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace symdyn {

// Aho-Corasick automaton for a set of forbidden words, crossed with the last letter so
// that transitions respect the transition matrix.
class AvoidanceAutomaton {
 public:
  struct State {
    int node = 0;
    Letter last = 0;
    friend auto operator<=>(const State&, const State&) = default;
  };

  AvoidanceAutomaton(const TransitionSystem& ts, std::vector<Word> forbidden);

  const TransitionSystem& ts() const noexcept { return ts_; }
  const std::vector<Word>& forbidden() const noexcept { return forbidden_; }
  int node_count() const noexcept { return static_cast<int>(depth_.size()); }
  int depth(int node) const { return depth_.at(static_cast<std::size_t>(node)); }

  // nullopt when a forbidden word has just been completed.
  std::optional<State> start(Letter x) const;
  std::optional<State> step(State st, Letter x) const;
  // Trie node reached by reading x from the root, ignoring failure links; -1 if none.
  int child_of_root(Letter x) const { return trie_[0][static_cast<std::size_t>(x - 1)]; }
  int trie_child(int node, Letter x) const { return trie_[static_cast<std::size_t>(node)][static_cast<std::size_t>(x - 1)]; }
  bool terminal(int node) const { return terminal_[static_cast<std::size_t>(node)]; }

  // States reachable from some start state, sorted.
  std::vector<State> live_states() const;

 private:
  TransitionSystem ts_;
  std::vector<Word> forbidden_;
  std::vector<std::vector<int>> trie_;   // -1 for missing edges
  std::vector<std::vector<int>> goto_;   // total transition function on nodes
  std::vector<int> depth_;
  std::vector<bool> terminal_;
};

// Valid n-strings (n+1 letters) containing no match of any forbidden word.
Integer count_avoiding(const TransitionSystem& ts, const std::vector<Word>& forbidden, int n);
Integer count_avoiding(const TransitionSystem& ts, const Word& gamma, int n);
Integer count_avoiding_brute(const TransitionSystem& ts, const std::vector<Word>& forbidden, int n,
                             std::size_t cap = kDefaultWordCap);
// Counts for n = 0..n_max in one pass.
std::vector<Integer> count_avoiding_series(const TransitionSystem& ts, const std::vector<Word>& forbidden, int n_max);

struct SpectralEnclosure {
  Rational rho_lo;
  Rational rho_hi;
  int iterations = 0;
};

// Spectral radius of a nonnegative integer matrix, enclosed by Collatz-Wielandt bounds on
// each strongly connected component; width below `width`.
SpectralEnclosure spectral_radius(const std::vector<std::vector<int>>& matrix, const Rational& width);

struct DimensionResult {
  SpectralEnclosure rho;
  double dimension_lo = 0;  // rounded down
  double dimension_hi = 0;  // rounded up
  double dimension = 0;     // nearest
  std::vector<Integer> counts;
};

// Dimension of the set of points whose itineraries avoid every forbidden word, for a
// uniform partition of x -> m x. Throws InputError for other partitions.
DimensionResult spectral_dimension(const MarkovPartition& p, const std::vector<Word>& forbidden, int count_terms = 0);

// Certified natural logs and ratios, 128-bit MPFR with directed rounding.
struct RealEnclosure {
  double lo;
  double hi;
  double mid;
};
RealEnclosure log_enclosure(const Rational& lo, const Rational& hi);
// log(a) / log(b) for rational intervals of a and b (b != 1 throughout).
RealEnclosure log_ratio(const Rational& a_lo, const Rational& a_hi, const Rational& b_lo, const Rational& b_hi);

}  // namespace symdyn

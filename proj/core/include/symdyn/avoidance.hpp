#pragma once

#include "symdyn/circle.hpp"
#include "symdyn/oracle.hpp"
#include "symdyn/rational.hpp"
#include "symdyn/sft.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symdyn {

// every_position: no match at any position. strided: no match at positions 0, q, 2q, ...
enum class Variant { every_position, strided };
std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

struct CollectionSpec {
  std::vector<Word> gammas;  // each in Sigma(q)
  int q = 0;
  int k_max = 1;
  Variant variant = Variant::every_position;
  std::optional<Letter> first_letter;
};

// Walker state: automaton node (Aho-Corasick node for every_position, trie node or -1 inside the
// current block for strided) plus the last letter read.
struct WalkState {
  int node = 0;
  Letter last = 0;
  friend auto operator<=>(const WalkState&, const WalkState&) = default;
};

struct LevelClass {
  WalkState state;  // state at the level boundary
  Integer count;    // number of level elements ending in this state
  Word witness;     // one such element
};

struct StateDensity {
  WalkState state;
  Integer count;
  Word witness;
  Rational density;
};

struct DensityReport {
  int k = 0;
  std::vector<StateDensity> classes;
  std::optional<Rational> delta;  // nullopt: level k is empty
  std::optional<Word> min_witness;
};

// Levels E_1..E_{k_max}, stored by boundary state. Requires a linear map.
class TreeLikeCollection {
 public:
  TreeLikeCollection(MarkovPartition p, CollectionSpec spec);

  const CollectionSpec& spec() const noexcept { return spec_; }
  const MarkovPartition& partition() const noexcept { return p_; }
  int k_max() const noexcept { return spec_.k_max; }
  int dim_M() const noexcept { return 1; }

  const std::vector<LevelClass>& level(int k) const;
  Integer size(int k) const;
  bool empty(int k) const { return level(k).empty(); }
  // d_k; throws CollectionDeath for an empty level.
  Rational diameter(int k) const;

  bool contains(const Word& alpha) const;
  // density(E_{k+1}, R_alpha) for alpha in E_k.
  Rational density(const Word& alpha) const;
  Rational density_of_state(const WalkState& boundary) const;
  DensityReport density_report(int k) const;
  std::optional<Rational> delta(int k) const;

  // Explicit words of level k, lexicographic.
  std::vector<Word> words(int k, std::size_t cap = 1'000'000) const;

  // Walker primitives, exposed for tests and certification.
  std::optional<WalkState> begin_word(Letter first) const;
  std::optional<WalkState> advance(const WalkState& st, Letter x, int pos_in_block) const;
  WalkState to_boundary(const WalkState& st) const;
  WalkState block_start(const WalkState& boundary) const;
  std::optional<WalkState> run(const Word& alpha) const;

 private:
  MarkovPartition p_;
  CollectionSpec spec_;
  std::unique_ptr<AvoidanceAutomaton> aut_;
  std::vector<std::vector<LevelClass>> levels_;
  mutable std::map<WalkState, Rational> density_cache_;
};

// Membership via exact interval images T^n(R_alpha) against Int R_gamma.
bool geometric_member(const MarkovPartition& p, const Word& alpha, const CollectionSpec& spec);

enum class DensitySource { measured, floor };

struct BoundReport {
  int k = 0;
  RealEnclosure value;  // value.lo is a certified lower bound
  Rational delta_product;
  Rational diameter;
};

// dim M - (sum_{j<=k} log Delta_j) / log d_k. With DensitySource::floor each Delta_j is
// replaced by `floor` after checking that the measured Delta_j is at least `floor`.
BoundReport hd_lower_bound(const TreeLikeCollection& tc, int k, DensitySource source = DensitySource::measured,
                           const Rational& floor = Rational(0));

// 1 - log 2 / (q log lambda).
RealEnclosure strided_closed_form(int q, const Rational& lambda);
// 1 + log(eps / C) / (q log lambda).
RealEnclosure corrected_closed_form(const Rational& eps, const Rational& C, int q, const Rational& lambda);

struct AvoidanceCertificate {
  bool ok = true;
  bool vacuous = false;
  int samples = 0;
  std::string witness;
};

// Midpoints of deepest-level cylinders; orbit checked at n = 0, stride, 2 stride, ... <= horizon.
AvoidanceCertificate certify_avoidance(const TreeLikeCollection& tc, int horizon, int stride = 1,
                                       std::size_t max_samples = 256);

}  // namespace symdyn

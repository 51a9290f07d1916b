#pragma once

#include "symdyn/rational.hpp"
#include "symdyn/sft.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symdyn {

// Orientation preserving piecewise-linear expanding map of R/Z, given by its lift
// F on [0,1]: F(nodes[i]) = values[i], F(x+1) = F(x) + degree.
class ExpandingCircleMap {
 public:
  enum class Kind { linear, piecewise_linear };

  static ExpandingCircleMap linear(int m);
  static ExpandingCircleMap piecewise_linear(std::vector<Rational> nodes, std::vector<Rational> values);

  Kind kind() const noexcept { return kind_; }
  int degree() const noexcept { return degree_; }
  const std::vector<Rational>& nodes() const noexcept { return nodes_; }
  const std::vector<Rational>& values() const noexcept { return values_; }

  Rational lift(const Rational& x) const;
  Rational lift_inverse(const Rational& y) const;
  // T(x) in [0,1).
  Rational apply(const Rational& x) const;
  // The `degree` points of T^{-1}(y) in [0,1).
  std::vector<Rational> preimages(const Rational& y) const;
  // Slope on [a,b] subset of [0,1]; nullopt if a node lies strictly inside.
  std::optional<Rational> slope_on(const Rational& a, const Rational& b) const;

  const Rational& expansion() const noexcept { return lambda_; }
  const Rational& injectivity_diameter() const noexcept { return delta_t_; }

 private:
  ExpandingCircleMap() = default;
  void finish();
  std::size_t piece_of(const Rational& f) const;

  Kind kind_ = Kind::linear;
  int degree_ = 0;
  std::vector<Rational> nodes_;
  std::vector<Rational> values_;
  std::vector<Rational> slopes_;
  Rational lambda_;
  Rational delta_t_;
};

struct CylinderSet {
  Word word;
  Interval interval;

  Rational measure() const { return interval.length(); }
  int generation() const { return static_cast<int>(word.size()) - 1; }
};

class DistortionProfile;

class MarkovPartition {
 public:
  // m^{s_exponent} equal intervals for x -> m x.
  static MarkovPartition uniform(int m, int s_exponent);
  // Breakpoints sorted in [0,1) and containing 0. endpoint_tolerant: nullopt detects
  // automatically, false demands strict small diameter.
  static MarkovPartition custom(ExpandingCircleMap map, std::vector<Rational> breakpoints,
                                std::optional<bool> endpoint_tolerant = std::nullopt);

  // new_label[old - 1] is the new letter of old element `old`.
  MarkovPartition relabeled(const std::vector<Letter>& new_label) const;

  int size() const noexcept { return static_cast<int>(elements_.size()); }
  const ExpandingCircleMap& map() const noexcept { return map_; }
  const TransitionSystem& ts() const noexcept { return ts_; }
  const Interval& element(Letter i) const { return elements_.at(static_cast<std::size_t>(i - 1)); }
  Rational measure(Letter i) const { return element(i).length(); }
  const Rational& slope(Letter i) const { return slopes_.at(static_cast<std::size_t>(i - 1)); }
  // R_{ij}; requires A[i][j] = 1.
  const Interval& step_cylinder(Letter i, Letter j) const;
  const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }

  Rational distortion_constant() const { return Rational(1); }
  const Rational& r() const noexcept { return r_; }
  const Rational& min_diameter() const noexcept { return min_diameter_; }
  const Rational& max_diameter() const noexcept { return max_diameter_; }
  bool endpoint_tolerant() const noexcept { return endpoint_tolerant_; }
  // Present for partitions built by uniform(): the map degree m.
  std::optional<int> uniform_degree() const noexcept { return uniform_m_; }
  std::optional<int> uniform_exponent() const noexcept { return uniform_exponent_; }
  const DistortionProfile& distortion() const { return *distortion_; }

 private:
  MarkovPartition(ExpandingCircleMap map) : map_(std::move(map)) {}
  void build(const std::vector<Rational>& breakpoints, std::optional<bool> endpoint_tolerant);
  void derive();

  ExpandingCircleMap map_;
  std::vector<Rational> breakpoints_;
  std::vector<Interval> elements_;
  std::vector<Rational> slopes_;
  std::vector<std::vector<std::optional<Interval>>> steps_;
  TransitionSystem ts_;
  Rational r_;
  Rational min_diameter_;
  Rational max_diameter_;
  bool endpoint_tolerant_ = false;
  std::optional<int> uniform_m_;
  std::optional<int> uniform_exponent_;
  std::shared_ptr<const DistortionProfile> distortion_;
};

// Exact eps(q), Eps(q) and the per-prefix versions, computed by a min/max path
// recursion over the transition graph; valid because branches are affine.
class DistortionProfile {
 public:
  explicit DistortionProfile(const MarkovPartition& p);
  ~DistortionProfile();

  Rational eps(int q) const;
  Rational Eps(int q) const;
  // Relative to any eta ending in `last`: eps_eta(q), Eps_eta(q).
  Rational eps_from(Letter last, int q) const;
  Rational Eps_from(Letter last, int q) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Rational eps_eta(const MarkovPartition& p, const Word& eta, int q);
Rational Eps_eta(const MarkovPartition& p, const Word& eta, int q);

// Direct enumeration over Sigma(q); throws ResourceError past `cap` words.
struct DistortionSample {
  Rational eps;
  Rational Eps;
};
DistortionSample distortion_by_enumeration(const MarkovPartition& p, int q, std::size_t cap = kDefaultWordCap);

CylinderSet cylinder(const MarkovPartition& p, const Word& alpha);
CylinderSet refine(const MarkovPartition& p, const CylinderSet& parent, Letter next);
std::vector<CylinderSet> children(const MarkovPartition& p, const CylinderSet& parent);
// Same interval computed from the right through inverse branches.
Interval cylinder_by_preimages(const MarkovPartition& p, const Word& alpha);
std::vector<CylinderSet> generation(const MarkovPartition& p, int n, std::size_t cap = kDefaultWordCap);

struct Representation {
  Rational point;
  std::vector<Word> words;  // depth-truncated, lexicographic
};

Representation representations_of(const MarkovPartition& p, const Rational& x, int depth);
std::vector<CylinderSet> adjacency_set(const MarkovPartition& p, const Rational& x, int generation);
std::optional<int> weight(const MarkovPartition& p, const Rational& x, int max_depth);
// Endpoints of all G(n) cylinders, reduced to [0,1), sorted.
std::vector<Rational> boundary_points(const MarkovPartition& p, int n);
// Max representation count over the boundary points of G(0).
int max_representation_count(const MarkovPartition& p);

struct InvarianceReport {
  bool ok = true;
  int checked = 0;
  std::string witness;
};
InvarianceReport forward_invariance_check(const MarkovPartition& p, int depth);
InvarianceReport backward_invariance_check(const MarkovPartition& p, int depth);

// Arc helpers; arcs are intervals of the line with length < 1.
std::optional<Interval> shift_into(const Interval& arc, const Interval& target);
bool arc_contains(const Interval& outer_arc, const Interval& inner_arc);

enum class FitCase { one, two_a, two_b };
std::string to_string(FitCase c);

struct FitResult {
  int N = 0;
  CylinderSet eta;    // generation N-1
  CylinderSet eta_i;  // generation N, inside B and eta
  FitCase fit_case = FitCase::one;
  Interval b_plus;    // half of B inside eta, in eta's coordinates
  std::optional<Rational> split_point;
};

// hint: a cylinder known to contain B; used only when B lies in its interior.
FitResult fit_interval(const MarkovPartition& p, const Interval& B, const CylinderSet* hint = nullptr);
// Fit starting from `outer`, which must contain B (touching its boundary is allowed);
// the result always extends outer's word.
FitResult fit_within(const MarkovPartition& p, const Interval& B, const CylinderSet& outer);
std::optional<CylinderSet> containing_cylinder(const MarkovPartition& p, const Interval& B, int generation);

}  // namespace symdyn

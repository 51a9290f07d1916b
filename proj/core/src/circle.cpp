#include "symdyn/circle.hpp"

#include "symdyn/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace symdyn {

namespace {

Rational min_of(const std::vector<Rational>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

// ---------------------------------------------------------------- map

ExpandingCircleMap ExpandingCircleMap::linear(int m) {
  if (m < 2) throw InputError("linear map needs integer m >= 2, got " + std::to_string(m));
  ExpandingCircleMap f;
  f.kind_ = Kind::linear;
  f.nodes_ = {Rational(0), Rational(1)};
  f.values_ = {Rational(0), Rational(m)};
  f.finish();
  return f;
}

ExpandingCircleMap ExpandingCircleMap::piecewise_linear(std::vector<Rational> nodes, std::vector<Rational> values) {
  if (nodes.size() < 2 || nodes.size() != values.size())
    throw InputError("piecewise-linear map needs matching node and value lists of length >= 2");
  if (nodes.front() != 0 || nodes.back() != 1) throw InputError("map nodes must start at 0 and end at 1");
  ExpandingCircleMap f;
  f.kind_ = Kind::piecewise_linear;
  f.nodes_ = std::move(nodes);
  f.values_ = std::move(values);
  f.finish();
  return f;
}

void ExpandingCircleMap::finish() {
  if (values_.front() < 0 || values_.front() >= 1) throw InputError("F(0) must lie in [0,1)");
  Rational deg = values_.back() - values_.front();
  if (deg.get_den() != 1 || deg < 2) throw InputError("F(1) - F(0) must be an integer >= 2");
  degree_ = static_cast<int>(deg.get_num().get_si());
  slopes_.clear();
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (nodes_[i + 1] <= nodes_[i]) throw InputError("map nodes must be strictly increasing");
    Rational sl = (values_[i + 1] - values_[i]) / (nodes_[i + 1] - nodes_[i]);
    if (sl <= 1) throw InputError("map is not expanding: slope " + format_rational(sl) + " on piece " + std::to_string(i));
    slopes_.push_back(sl);
  }
  lambda_ = min_of(slopes_);

  // g(x) = F^{-1}(F(x)+1) - x is linear between these candidates.
  std::vector<Rational> cand(nodes_.begin(), nodes_.end() - 1);
  for (const auto& v : values_)
    for (int t = -1; t <= 1; ++t) {
      Rational y = v + t * degree_ - 1;
      if (y >= values_.front() && y < values_.back()) cand.push_back(lift_inverse(y));
    }
  delta_t_ = Rational(2);
  for (const auto& x : cand) {
    if (x < 0 || x >= 1) continue;
    Rational g = lift_inverse(lift(x) + 1) - x;
    if (g < delta_t_) delta_t_ = g;
  }
}

std::size_t ExpandingCircleMap::piece_of(const Rational& f) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), f);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, slopes_.size() - 1);
}

Rational ExpandingCircleMap::lift(const Rational& x) const {
  Rational n = floor_rational(x);
  Rational f = x - n;
  std::size_t i = piece_of(f);
  return values_[i] + slopes_[i] * (f - nodes_[i]) + n * degree_;
}

Rational ExpandingCircleMap::lift_inverse(const Rational& y) const {
  Rational n = floor_rational((y - values_.front()) / degree_);
  Rational f = y - n * degree_;
  auto it = std::upper_bound(values_.begin(), values_.end(), f);
  std::size_t i = static_cast<std::size_t>(it - values_.begin());
  i = i == 0 ? 0 : std::min(i - 1, slopes_.size() - 1);
  return nodes_[i] + (f - values_[i]) / slopes_[i] + n;
}

Rational ExpandingCircleMap::apply(const Rational& x) const { return frac(lift(frac(x))); }

std::vector<Rational> ExpandingCircleMap::preimages(const Rational& y) const {
  std::vector<Rational> out;
  Rational y0 = frac(y);
  for (int j = -1; j <= degree_ + 1; ++j) {
    Rational v = y0 + j;
    if (v >= values_.front() && v < values_.back()) out.push_back(lift_inverse(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Rational> ExpandingCircleMap::slope_on(const Rational& a, const Rational& b) const {
  for (const auto& n : nodes_)
    if (a < n && n < b) return std::nullopt;
  return slopes_[piece_of(a)];
}

// ---------------------------------------------------------------- partition

MarkovPartition MarkovPartition::uniform(int m, int s_exponent) {
  if (s_exponent < 1) throw InputError("uniform partition exponent must be >= 1");
  MarkovPartition p(ExpandingCircleMap::linear(m));
  Integer k = 1;
  for (int i = 0; i < s_exponent; ++i) k *= m;
  if (k > 1'000'000) throw ResourceError("uniform partition with " + k.get_str() + " elements");
  long count = k.get_si();
  std::vector<Rational> bp;
  for (long i = 0; i < count; ++i) bp.emplace_back(Rational(Integer(i), k));
  for (auto& b : bp) b.canonicalize();
  p.build(bp, std::nullopt);
  p.uniform_m_ = m;
  p.uniform_exponent_ = s_exponent;
  return p;
}

MarkovPartition MarkovPartition::custom(ExpandingCircleMap map, std::vector<Rational> breakpoints,
                                        std::optional<bool> endpoint_tolerant) {
  MarkovPartition p(std::move(map));
  p.build(breakpoints, endpoint_tolerant);
  return p;
}

void MarkovPartition::build(const std::vector<Rational>& bp, std::optional<bool> tolerant) {
  if (bp.size() < 2) throw InputError("a partition needs at least two elements");
  for (const auto& b : bp)
    if (b < 0 || b >= 1) throw InputError("breakpoint " + format_rational(b) + " outside [0,1)");
  for (std::size_t i = 0; i + 1 < bp.size(); ++i)
    if (bp[i + 1] <= bp[i]) throw InputError("breakpoints must be strictly increasing");
  if (bp.front() != 0) throw InputError("0 must be a breakpoint");
  breakpoints_ = bp;
  elements_.clear();
  for (std::size_t i = 0; i < bp.size(); ++i)
    elements_.push_back({bp[i], i + 1 < bp.size() ? bp[i + 1] : Rational(1)});

  slopes_.clear();
  for (const auto& e : elements_) {
    auto sl = map_.slope_on(e.lo, e.hi);
    if (!sl) throw InputError("map is not affine on element " + format_interval(e));
    slopes_.push_back(*sl);
  }
  std::set<Rational> bset(bp.begin(), bp.end());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const Interval& e = elements_[i];
    Rational u0 = frac(map_.lift(e.lo));
    Rational len = slopes_[i] * e.length();
    if (!bset.count(u0) || !bset.count(frac(u0 + len)))
      throw ValidationError("Markov images", "T(" + format_interval(e) + ") = " +
                                                     format_interval({u0, u0 + len}) +
                                                     " is not a union of elements");
  }

  const Rational& dt = map_.injectivity_diameter();
  bool needs_tolerance = false;
  for (const auto& e : elements_) {
    if (e.length() > dt)
      throw ValidationError("small diameter", "element " + format_interval(e) + " is longer than " + format_rational(dt));
    if (e.length() == dt) needs_tolerance = true;
  }
  if (needs_tolerance && tolerant.has_value() && !*tolerant)
    throw ValidationError("small diameter", "an element has diameter equal to " + format_rational(dt) +
                                                " and the partition is not endpoint-tolerant");
  endpoint_tolerant_ = needs_tolerance;
  derive();
}

void MarkovPartition::derive() {
  const std::size_t s = elements_.size();
  std::vector<std::vector<int>> A(s, std::vector<int>(s, 0));
  steps_.assign(s, std::vector<std::optional<Interval>>(s));
  for (std::size_t i = 0; i < s; ++i) {
    const Interval& e = elements_[i];
    Rational u0 = frac(map_.lift(e.lo));
    Rational len = slopes_[i] * e.length();
    for (std::size_t j = 0; j < s; ++j) {
      for (int k = 0; k <= 1; ++k) {
        Interval rj = elements_[j].shifted(k);
        if (u0 <= rj.lo && rj.hi <= u0 + len) {
          A[i][j] = 1;
          steps_[i][j] = Interval{e.lo + (rj.lo - u0) / slopes_[i], e.lo + (rj.hi - u0) / slopes_[i]};
          break;
        }
      }
    }
  }
  ts_ = TransitionSystem(A);
  std::vector<Rational> ms;
  for (const auto& e : elements_) ms.push_back(e.length());
  min_diameter_ = min_of(ms);
  max_diameter_ = *std::max_element(ms.begin(), ms.end());
  r_ = min_diameter_ / max_diameter_;
  distortion_ = std::make_shared<const DistortionProfile>(*this);
}

MarkovPartition MarkovPartition::relabeled(const std::vector<Letter>& new_label) const {
  const int s = size();
  if (static_cast<int>(new_label.size()) != s) throw InputError("relabeling must list every letter");
  std::vector<bool> seen(s, false);
  for (Letter l : new_label) {
    if (l < 1 || l > s || seen[l - 1]) throw InputError("relabeling is not a permutation");
    seen[l - 1] = true;
  }
  MarkovPartition p = *this;
  for (int old = 0; old < s; ++old) {
    int nw = new_label[old] - 1;
    p.elements_[nw] = elements_[old];
    p.slopes_[nw] = slopes_[old];
  }
  p.derive();
  return p;
}

const Interval& MarkovPartition::step_cylinder(Letter i, Letter j) const {
  const auto& c = steps_.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(j - 1));
  if (!c) throw InputError("transition " + std::to_string(i) + " -> " + std::to_string(j) + " is not allowed");
  return *c;
}

// ---------------------------------------------------------------- distortion

struct DistortionProfile::Impl {
  int s = 0;
  std::vector<Rational> measure;
  std::vector<Rational> inv_slope;
  std::vector<std::vector<Letter>> succ;
  mutable std::mutex mu;
  // lo[q][a][j]: extreme product of 1/slope over paths a -> j of q steps; nullopt if none.
  mutable std::vector<std::vector<std::vector<std::optional<Rational>>>> lo, hi;

  void extend_to(int q) const {
    if (lo.empty()) {
      std::vector<std::vector<std::optional<Rational>>> id(s, std::vector<std::optional<Rational>>(s));
      for (int a = 0; a < s; ++a) id[a][a] = Rational(1);
      lo.push_back(id);
      hi.push_back(id);
    }
    while (static_cast<int>(lo.size()) <= q) {
      const auto& pl = lo.back();
      const auto& ph = hi.back();
      std::vector<std::vector<std::optional<Rational>>> nl(s, std::vector<std::optional<Rational>>(s)), nh = nl;
      for (int a = 0; a < s; ++a)
        for (int i = 0; i < s; ++i) {
          if (!pl[a][i]) continue;
          Rational vl = *pl[a][i] * inv_slope[i];
          Rational vh = *ph[a][i] * inv_slope[i];
          for (Letter j1 : succ[i]) {
            int j = j1 - 1;
            if (!nl[a][j] || vl < *nl[a][j]) nl[a][j] = vl;
            if (!nh[a][j] || vh > *nh[a][j]) nh[a][j] = vh;
          }
        }
      lo.push_back(std::move(nl));
      hi.push_back(std::move(nh));
    }
  }

  Rational extreme(int a, int q, bool want_min) const {
    if (q < 0) throw InputError("distortion order must be >= 0");
    std::lock_guard<std::mutex> lock(mu);
    extend_to(q);
    const auto& tab = want_min ? lo[q] : hi[q];
    std::optional<Rational> best;
    for (int j = 0; j < s; ++j) {
      if (!tab[a][j]) continue;
      Rational v = measure[j] / measure[a] * *tab[a][j];
      if (!best || (want_min ? v < *best : v > *best)) best = v;
    }
    return *best;
  }
};

DistortionProfile::DistortionProfile(const MarkovPartition& p) : impl_(std::make_unique<Impl>()) {
  impl_->s = p.size();
  for (Letter i = 1; i <= p.size(); ++i) {
    impl_->measure.push_back(p.measure(i));
    impl_->inv_slope.push_back(1 / p.slope(i));
    impl_->succ.push_back(p.ts().successors(i));
  }
}

DistortionProfile::~DistortionProfile() = default;

Rational DistortionProfile::eps_from(Letter last, int q) const { return impl_->extreme(last - 1, q, true); }
Rational DistortionProfile::Eps_from(Letter last, int q) const { return impl_->extreme(last - 1, q, false); }

Rational DistortionProfile::eps(int q) const {
  Rational best = eps_from(1, q);
  for (Letter a = 2; a <= impl_->s; ++a) { Rational v = eps_from(a, q); if (v < best) best = v; }
  return best;
}

Rational DistortionProfile::Eps(int q) const {
  Rational best = Eps_from(1, q);
  for (Letter a = 2; a <= impl_->s; ++a) { Rational v = Eps_from(a, q); if (v > best) best = v; }
  return best;
}

Rational eps_eta(const MarkovPartition& p, const Word& eta, int q) { return p.distortion().eps_from(eta.back(), q); }
Rational Eps_eta(const MarkovPartition& p, const Word& eta, int q) { return p.distortion().Eps_from(eta.back(), q); }

DistortionSample distortion_by_enumeration(const MarkovPartition& p, int q, std::size_t cap) {
  std::optional<Rational> lo, hi;
  std::size_t seen = 0;
  for_each_word(p.ts(), q, nullptr, [&](const Word& w) {
    if (++seen > cap) throw ResourceError("distortion enumeration exceeds cap");
    Rational ratio = cylinder(p, w).measure() / p.measure(w.front());
    if (!lo || ratio < *lo) lo = ratio;
    if (!hi || ratio > *hi) hi = ratio;
    return true;
  });
  return {*lo, *hi};
}

// ---------------------------------------------------------------- cylinders

CylinderSet refine(const MarkovPartition& p, const CylinderSet& parent, Letter next) {
  Letter last = parent.word.back();
  const Interval& step = p.step_cylinder(last, next);
  const Interval& el = p.element(last);
  Rational scale = parent.interval.length() / el.length();
  CylinderSet c;
  c.word = parent.word;
  c.word.push_back(next);
  c.interval = {parent.interval.lo + (step.lo - el.lo) * scale, parent.interval.lo + (step.hi - el.lo) * scale};
  return c;
}

CylinderSet cylinder(const MarkovPartition& p, const Word& alpha) {
  if (alpha.empty()) throw InputError("cylinder of the empty word");
  require_valid_word(p.ts(), alpha, "cylinder word");
  CylinderSet c{Word{alpha.front()}, p.element(alpha.front())};
  for (std::size_t i = 1; i < alpha.size(); ++i) c = refine(p, c, alpha[i]);
  return c;
}

std::vector<CylinderSet> children(const MarkovPartition& p, const CylinderSet& parent) {
  std::vector<CylinderSet> out;
  for (Letter x : p.ts().successors(parent.word.back())) out.push_back(refine(p, parent, x));
  std::sort(out.begin(), out.end(), [](const CylinderSet& a, const CylinderSet& b) { return a.interval.lo < b.interval.lo; });
  return out;
}

Interval cylinder_by_preimages(const MarkovPartition& p, const Word& alpha) {
  require_valid_word(p.ts(), alpha, "cylinder word");
  Interval cur = p.element(alpha.back());
  for (std::size_t k = alpha.size() - 1; k-- > 0;) {
    const Interval& e = p.element(alpha[k]);
    Rational u0 = frac(p.map().lift(e.lo));
    Rational len = p.slope(alpha[k]) * e.length();
    Interval target = cur;
    if (!(u0 <= target.lo && target.hi <= u0 + len)) target = cur.shifted(1);
    cur = {e.lo + (target.lo - u0) / p.slope(alpha[k]), e.lo + (target.hi - u0) / p.slope(alpha[k])};
  }
  return cur;
}

std::vector<CylinderSet> generation(const MarkovPartition& p, int n, std::size_t cap) {
  std::vector<CylinderSet> cur;
  for (Letter i = 1; i <= p.size(); ++i) cur.push_back({Word{i}, p.element(i)});
  for (int g = 0; g < n; ++g) {
    std::vector<CylinderSet> next;
    for (const auto& c : cur)
      for (Letter x : p.ts().successors(c.word.back())) {
        if (next.size() >= cap) throw ResourceError("generation " + std::to_string(n) + " exceeds cap");
        next.push_back(refine(p, c, x));
      }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------- points

namespace {

struct Located {
  CylinderSet cyl;
  Rational point;  // x or x+1, whichever lies in cyl
};

std::vector<Located> locate(const MarkovPartition& p, const Rational& x, int depth) {
  Rational x0 = frac(x);
  std::vector<Located> cur;
  for (Letter i = 1; i <= p.size(); ++i) {
    const Interval& e = p.element(i);
    if (e.contains(x0)) cur.push_back({{Word{i}, e}, x0});
    else if (x0 == 0 && e.contains(Rational(1))) cur.push_back({{Word{i}, e}, Rational(1)});
  }
  for (int g = 0; g < depth; ++g) {
    std::vector<Located> next;
    for (const auto& l : cur)
      for (const auto& c : children(p, l.cyl))
        if (c.interval.contains(l.point)) next.push_back({c, l.point});
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

Representation representations_of(const MarkovPartition& p, const Rational& x, int depth) {
  Representation r{frac(x), {}};
  for (const auto& l : locate(p, x, depth)) r.words.push_back(l.cyl.word);
  std::sort(r.words.begin(), r.words.end());
  r.words.erase(std::unique(r.words.begin(), r.words.end()), r.words.end());
  return r;
}

std::vector<CylinderSet> adjacency_set(const MarkovPartition& p, const Rational& x, int gen) {
  std::vector<CylinderSet> out;
  for (auto& l : locate(p, x, gen)) out.push_back(std::move(l.cyl));
  std::sort(out.begin(), out.end(), [](const CylinderSet& a, const CylinderSet& b) { return a.word < b.word; });
  return out;
}

std::optional<int> weight(const MarkovPartition& p, const Rational& x, int max_depth) {
  Rational x0 = frac(x);
  std::vector<Located> cur;
  for (Letter i = 1; i <= p.size(); ++i) {
    const Interval& e = p.element(i);
    if (e.contains(x0)) cur.push_back({{Word{i}, e}, x0});
    else if (x0 == 0 && e.contains(Rational(1))) cur.push_back({{Word{i}, e}, Rational(1)});
  }
  for (int g = 0;; ++g) {
    if (cur.size() >= 2) return g;
    if (g == max_depth) return std::nullopt;
    std::vector<Located> next;
    for (const auto& l : cur)
      for (const auto& c : children(p, l.cyl))
        if (c.interval.contains(l.point)) next.push_back({c, l.point});
    cur = std::move(next);
  }
}

std::vector<Rational> boundary_points(const MarkovPartition& p, int n) {
  std::set<Rational> pts;
  for (const auto& c : generation(p, n)) {
    pts.insert(frac(c.interval.lo));
    pts.insert(frac(c.interval.hi));
  }
  return {pts.begin(), pts.end()};
}

int max_representation_count(const MarkovPartition& p) {
  std::size_t best = 1;
  for (const auto& b : p.breakpoints()) best = std::max(best, locate(p, b, 0).size());
  return static_cast<int>(best);
}

InvarianceReport forward_invariance_check(const MarkovPartition& p, int depth) {
  InvarianceReport rep;
  std::vector<std::vector<Rational>> levels;
  for (int n = 0; n <= depth; ++n) levels.push_back(boundary_points(p, n));
  for (int n = 0; n <= depth; ++n) {
    const auto& below = levels[static_cast<std::size_t>(std::max(n - 1, 0))];
    for (const auto& x : levels[static_cast<std::size_t>(n)]) {
      ++rep.checked;
      Rational tx = p.map().apply(x);
      if (!std::binary_search(below.begin(), below.end(), tx)) {
        rep.ok = false;
        rep.witness = "T(" + format_rational(x) + ") = " + format_rational(tx) + " not in boundary of generation " +
                      std::to_string(std::max(n - 1, 0));
        return rep;
      }
    }
  }
  return rep;
}

InvarianceReport backward_invariance_check(const MarkovPartition& p, int depth) {
  InvarianceReport rep;
  std::vector<Rational> cur = boundary_points(p, 0);
  for (int n = 0; n < depth; ++n) {
    std::vector<Rational> next = boundary_points(p, n + 1);
    for (const auto& x : cur)
      for (const auto& y : p.map().preimages(x)) {
        ++rep.checked;
        if (!std::binary_search(next.begin(), next.end(), y)) {
          rep.ok = false;
          rep.witness = "preimage " + format_rational(y) + " of " + format_rational(x) +
                        " not in boundary of generation " + std::to_string(n + 1);
          return rep;
        }
      }
    cur = std::move(next);
  }
  return rep;
}

// ---------------------------------------------------------------- fitting

std::optional<Interval> shift_into(const Interval& arc, const Interval& target) {
  Integer k0 = floor_rational(target.lo).get_num() - floor_rational(arc.lo).get_num();
  for (int d = -1; d <= 1; ++d) {
    Interval s = arc.shifted(Rational(k0 + d));
    if (target.contains(s)) return s;
  }
  return std::nullopt;
}

bool arc_contains(const Interval& outer, const Interval& inner) { return shift_into(inner, outer).has_value(); }

std::string to_string(FitCase c) {
  switch (c) {
    case FitCase::one: return "1";
    case FitCase::two_a: return "2A";
    case FitCase::two_b: return "2B";
  }
  return "?";
}

namespace {

// B+ touches y; descend through the cylinders adjacent to y on B+'s side.
FitResult descend_from_point(const MarkovPartition& p, CylinderSet cyl, const Rational& y, const Interval& bplus,
                             FitCase fc) {
  bool right = bplus.lo == y;
  for (;;) {
    std::optional<CylinderSet> adj;
    for (auto& c : children(p, cyl))
      if ((right && c.interval.lo == y) || (!right && c.interval.hi == y)) adj = std::move(c);
    if (!adj) throw DefectError("no child cylinder adjacent to " + format_rational(y));
    Rational z = right ? adj->interval.hi : adj->interval.lo;
    if (bplus.contains(z)) {
      FitResult r;
      r.N = adj->generation();
      r.eta = std::move(cyl);
      r.eta_i = std::move(*adj);
      r.fit_case = fc;
      r.b_plus = bplus;
      r.split_point = y;
      return r;
    }
    cyl = std::move(*adj);
  }
}

// Split B at y (in the same coordinates); the larger half, leftmost on ties.
Interval larger_half(const Interval& B, const Rational& y) {
  Interval left{B.lo, y}, right{y, B.hi};
  return left.length() >= right.length() ? left : right;
}

FitResult fit_inside(const MarkovPartition& p, CylinderSet cyl, const Interval& B) {
  for (;;) {
    auto kids = children(p, cyl);
    std::vector<Rational> inner;
    for (const auto& c : kids) {
      if (B.contains(c.interval.lo)) inner.push_back(c.interval.lo);
      if (B.contains(c.interval.hi)) inner.push_back(c.interval.hi);
    }
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    if (inner.size() >= 2) {
      for (auto& c : kids)
        if (B.contains(c.interval)) {
          FitResult r;
          r.N = c.generation();
          r.eta = std::move(cyl);
          r.eta_i = std::move(c);
          r.fit_case = FitCase::two_a;
          r.b_plus = B;
          return r;
        }
      throw DefectError("two boundary points inside B but no child inside B");
    }
    if (inner.size() == 1) {
      const Rational y = inner.front();
      Interval bplus = larger_half(B, y);
      return descend_from_point(p, std::move(cyl), y, bplus, FitCase::two_b);
    }
    std::optional<CylinderSet> next;
    for (auto& c : kids)
      if (c.interval.contains(B)) next = std::move(c);
    if (!next) throw DefectError("no child cylinder contains " + format_interval(B));
    cyl = std::move(*next);
  }
}

}  // namespace

FitResult fit_interval(const MarkovPartition& p, const Interval& B, const CylinderSet* hint) {
  if (B.length() <= 0) throw InputError("fit_interval needs an interval of positive length");
  if (B.length() >= p.min_diameter())
    throw InputError("interval " + format_interval(B) + " is not shorter than every partition element");
  if (hint) {
    if (auto s = shift_into(B, hint->interval); s && s->lo > hint->interval.lo && s->hi < hint->interval.hi)
      return fit_inside(p, *hint, *s);
  }
  // Weight-0 point inside B (at most one, since B is shorter than every element).
  for (const auto& b : p.breakpoints()) {
    Rational k = floor_rational(B.lo - b);
    for (int d = 0; d <= 1; ++d) {
      Rational y = b + k + d;
      if (!B.contains(y)) continue;
      Interval bplus = larger_half(B, y);
      bool right = bplus.lo == y;
      // Coordinates with y as an element endpoint inside [0,1].
      Rational yc = frac(y);
      if (!right && yc == 0) yc = 1;
      Interval bp = bplus.shifted(yc - y);
      for (Letter i = 1; i <= p.size(); ++i) {
        const Interval& e = p.element(i);
        if ((right && e.lo == yc) || (!right && e.hi == yc))
          return descend_from_point(p, CylinderSet{Word{i}, e}, yc, bp, FitCase::one);
      }
      throw DefectError("no element adjacent to breakpoint " + format_rational(yc));
    }
  }
  for (Letter i = 1; i <= p.size(); ++i)
    if (auto s = shift_into(B, p.element(i))) return fit_inside(p, CylinderSet{Word{i}, p.element(i)}, *s);
  throw DefectError("no element contains " + format_interval(B));
}

FitResult fit_within(const MarkovPartition& p, const Interval& B, const CylinderSet& outer) {
  if (B.length() <= 0) throw InputError("fit_within needs an interval of positive length");
  auto s = shift_into(B, outer.interval);
  if (!s) throw InputError(format_interval(B) + " is not inside " + format_interval(outer.interval));
  return fit_inside(p, outer, *s);
}

std::optional<CylinderSet> containing_cylinder(const MarkovPartition& p, const Interval& B, int gen) {
  for (Letter i = 1; i <= p.size(); ++i) {
    auto s = shift_into(B, p.element(i));
    if (!s) continue;
    CylinderSet cur{Word{i}, p.element(i)};
    bool ok = true;
    for (int g = 0; g < gen && ok; ++g) {
      ok = false;
      for (auto& c : children(p, cur))
        if (c.interval.contains(*s)) {
          cur = std::move(c);
          ok = true;
          break;
        }
    }
    if (ok) return cur;
  }
  return std::nullopt;
}

}  // namespace symdyn

#include "symdyn/avoidance.hpp"

#include "symdyn/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace symdyn {

std::string to_string(Variant v) { return v == Variant::every_position ? "every-position" : "strided"; }

Variant parse_variant(const std::string& text) {
  if (text == "every-position") return Variant::every_position;
  if (text == "strided") return Variant::strided;
  throw InputError("unknown variant '" + text + "' (expected every-position or strided)");
}

TreeLikeCollection::TreeLikeCollection(MarkovPartition p, CollectionSpec spec) : p_(std::move(p)), spec_(std::move(spec)) {
  if (p_.map().kind() != ExpandingCircleMap::Kind::linear) throw InputError("avoidance collections need a linear map");
  if (spec_.q < 1) throw InputError("q must be >= 1");
  if (spec_.k_max < 1) throw InputError("k_max must be >= 1");
  if (spec_.gammas.empty()) throw InputError("at least one target word is required");
  for (const auto& g : spec_.gammas) {
    if (static_cast<int>(g.size()) != spec_.q + 1)
      throw InputError("target " + format_word(g, p_.size()) + " is not in Sigma(" + std::to_string(spec_.q) + ")");
    for (std::size_t i = 0; i < g.size(); ++i) p_.ts().check_letter(g[i]);
  }
  if (spec_.first_letter) p_.ts().check_letter(*spec_.first_letter);
  aut_ = std::make_unique<AvoidanceAutomaton>(p_.ts(), spec_.gammas);

  using Acc = std::map<WalkState, std::pair<Integer, Word>>;
  auto run_block = [&](Acc cur) {
    for (int pos = 1; pos <= spec_.q; ++pos) {
      Acc next;
      for (const auto& [st, entry] : cur)
        for (Letter x : p_.ts().successors(st.last)) {
          auto ns = advance(st, x, pos);
          if (!ns) continue;
          auto [it, fresh] = next.try_emplace(*ns, Integer(0), Word{});
          if (fresh) {
            it->second.second = entry.second;
            it->second.second.push_back(x);
          }
          it->second.first += entry.first;
        }
      cur = std::move(next);
    }
    std::map<WalkState, LevelClass> merged;
    for (auto& [st, entry] : cur) {
      WalkState b = to_boundary(st);
      auto [it, fresh] = merged.try_emplace(b, LevelClass{b, Integer(0), entry.second});
      it->second.count += entry.first;
    }
    std::vector<LevelClass> out;
    for (auto& [b, cls] : merged) out.push_back(std::move(cls));
    return out;
  };

  Acc start;
  for (Letter x = 1; x <= p_.size(); ++x) {
    if (spec_.first_letter && x != *spec_.first_letter) continue;
    if (auto st = begin_word(x)) start.emplace(*st, std::make_pair(Integer(1), Word{x}));
  }
  levels_.push_back(run_block(std::move(start)));
  for (int k = 2; k <= spec_.k_max; ++k) {
    Acc cur;
    for (const auto& cls : levels_.back()) {
      auto [it, fresh] = cur.try_emplace(block_start(cls.state), Integer(0), cls.witness);
      it->second.first += cls.count;
    }
    levels_.push_back(run_block(std::move(cur)));
  }
}

std::optional<WalkState> TreeLikeCollection::begin_word(Letter first) const {
  if (spec_.variant == Variant::every_position) {
    auto st = aut_->start(first);
    if (!st) return std::nullopt;
    return WalkState{st->node, st->last};
  }
  return WalkState{aut_->child_of_root(first), first};
}

std::optional<WalkState> TreeLikeCollection::advance(const WalkState& st, Letter x, int) const {
  if (!p_.ts().allows(st.last, x)) return std::nullopt;
  if (spec_.variant == Variant::every_position) {
    auto ns = aut_->step({st.node, st.last}, x);
    if (!ns) return std::nullopt;
    return WalkState{ns->node, ns->last};
  }
  int node = st.node >= 0 ? aut_->trie_child(st.node, x) : -1;
  if (node >= 0 && aut_->depth(node) == spec_.q + 1) return std::nullopt;
  return WalkState{node, x};
}

WalkState TreeLikeCollection::to_boundary(const WalkState& st) const {
  if (spec_.variant == Variant::every_position) return st;
  return {0, st.last};
}

WalkState TreeLikeCollection::block_start(const WalkState& b) const {
  if (spec_.variant == Variant::every_position) return b;
  return {aut_->child_of_root(b.last), b.last};
}

std::optional<WalkState> TreeLikeCollection::run(const Word& alpha) const {
  if (alpha.size() < static_cast<std::size_t>(spec_.q) + 1 || (alpha.size() - 1) % static_cast<std::size_t>(spec_.q) != 0)
    return std::nullopt;
  if (!is_valid_word(p_.ts(), alpha)) return std::nullopt;
  if (spec_.first_letter && alpha.front() != *spec_.first_letter) return std::nullopt;
  auto st = begin_word(alpha.front());
  const int n = static_cast<int>(alpha.size()) - 1;
  for (int pos = 1; st && pos <= n; ++pos) {
    st = advance(*st, alpha[static_cast<std::size_t>(pos)], (pos - 1) % spec_.q + 1);
    if (st && pos % spec_.q == 0) st = pos == n ? to_boundary(*st) : block_start(to_boundary(*st));
  }
  return st;
}

const std::vector<LevelClass>& TreeLikeCollection::level(int k) const {
  if (k < 1 || k > spec_.k_max) throw InputError("level " + std::to_string(k) + " was not built");
  return levels_[static_cast<std::size_t>(k - 1)];
}

Integer TreeLikeCollection::size(int k) const {
  Integer total = 0;
  for (const auto& c : level(k)) total += c.count;
  return total;
}

Rational TreeLikeCollection::diameter(int k) const {
  const auto& lv = level(k);
  if (lv.empty()) throw CollectionDeath(k, "level is empty");
  Rational best = 0;
  for (const auto& c : lv) best = std::max(best, p_.measure(c.state.last));
  return best / pow(Rational(p_.map().degree()), static_cast<long>(k) * spec_.q);
}

bool TreeLikeCollection::contains(const Word& alpha) const { return run(alpha).has_value(); }

Rational TreeLikeCollection::density_of_state(const WalkState& b) const {
  if (auto it = density_cache_.find(b); it != density_cache_.end()) return it->second;
  std::map<WalkState, Rational> cur{{block_start(b), Rational(1)}};
  for (int pos = 1; pos <= spec_.q; ++pos) {
    std::map<WalkState, Rational> next;
    for (const auto& [st, w] : cur) {
      Rational scaled = w / p_.slope(st.last);
      for (Letter x : p_.ts().successors(st.last))
        if (auto ns = advance(st, x, pos)) next[*ns] += scaled;
    }
    cur = std::move(next);
  }
  Rational total = 0;
  for (const auto& [st, w] : cur) total += w * p_.measure(st.last);
  total /= p_.measure(b.last);
  density_cache_.emplace(b, total);
  return total;
}

Rational TreeLikeCollection::density(const Word& alpha) const {
  auto st = run(alpha);
  if (!st) throw InputError("word " + format_word(alpha, p_.size()) + " is not an element of the collection");
  return density_of_state(*st);
}

DensityReport TreeLikeCollection::density_report(int k) const {
  DensityReport r;
  r.k = k;
  for (const auto& c : level(k)) {
    Rational d = density_of_state(c.state);
    if (!r.delta || d < *r.delta) {
      r.delta = d;
      r.min_witness = c.witness;
    }
    r.classes.push_back({c.state, c.count, c.witness, d});
  }
  return r;
}

std::optional<Rational> TreeLikeCollection::delta(int k) const { return density_report(k).delta; }

std::vector<Word> TreeLikeCollection::words(int k, std::size_t cap) const {
  level(k);
  std::vector<Word> out;
  const int n = k * spec_.q;
  Word w;
  std::function<void(const WalkState&, int)> dfs = [&](const WalkState& st, int pos) {
    if (pos == n) {
      if (out.size() >= cap) throw ResourceError("level " + std::to_string(k) + " has more than " + std::to_string(cap) + " elements");
      out.push_back(w);
      return;
    }
    for (Letter x : p_.ts().successors(st.last)) {
      auto ns = advance(st, x, pos % spec_.q + 1);
      if (!ns) continue;
      if ((pos + 1) % spec_.q == 0 && pos + 1 < n) ns = block_start(to_boundary(*ns));
      w.push_back(x);
      dfs(*ns, pos + 1);
      w.pop_back();
    }
  };
  for (Letter x = 1; x <= p_.size(); ++x) {
    if (spec_.first_letter && x != *spec_.first_letter) continue;
    auto st = begin_word(x);
    if (!st) continue;
    w = Word{x};
    dfs(*st, 0);
  }
  return out;
}

bool geometric_member(const MarkovPartition& p, const Word& alpha, const CollectionSpec& spec) {
  if (spec.q < 1 || alpha.size() < static_cast<std::size_t>(spec.q) + 1 ||
      (alpha.size() - 1) % static_cast<std::size_t>(spec.q) != 0)
    throw InputError("word length is not kq+1");
  if (spec.first_letter && alpha.front() != *spec.first_letter) return false;
  const int k = static_cast<int>(alpha.size() - 1) / spec.q;
  std::vector<Interval> targets;
  for (const auto& g : spec.gammas) targets.push_back(cylinder(p, g).interval);
  Interval img = cylinder(p, alpha).interval;
  const int last_n = (k - 1) * spec.q;
  for (int n = 0; n <= last_n; ++n) {
    bool checked = spec.variant == Variant::every_position || n % spec.q == 0;
    if (checked)
      for (const auto& t : targets)
        for (int sh = -1; sh <= 1; ++sh) {
          Rational lo = std::max(Rational(img.lo + sh), t.lo);
          Rational hi = std::min(Rational(img.hi + sh), t.hi);
          if (lo < hi) return false;
        }
    Rational len = img.length() * p.slope(alpha[static_cast<std::size_t>(n)]);
    Rational lo = p.map().lift(img.lo);
    lo -= floor_rational(lo);
    img = {lo, lo + len};
  }
  return true;
}

namespace {

double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

}  // namespace

BoundReport hd_lower_bound(const TreeLikeCollection& tc, int k, DensitySource source, const Rational& floor) {
  if (k < 1 || k > tc.k_max()) throw InputError("bound level out of range");
  BoundReport r;
  r.k = k;
  r.delta_product = 1;
  for (int j = 1; j <= k; ++j) {
    auto d = tc.delta(j);
    if (!d) throw CollectionDeath(j, "level is empty");
    if (*d <= 0) throw CollectionDeath(j + 1, "an element of level " + std::to_string(j) + " has no surviving children");
    if (source == DensitySource::floor) {
      if (*d < floor)
        throw DefectError("measured density " + format_rational(*d) + " at level " + std::to_string(j) +
                          " is below the floor " + format_rational(floor));
      r.delta_product *= floor;
    } else {
      r.delta_product *= *d;
    }
  }
  r.diameter = tc.diameter(k);
  auto ratio = log_ratio(r.delta_product, r.delta_product, r.diameter, r.diameter);
  r.value = {down(tc.dim_M() - ratio.hi), up(tc.dim_M() - ratio.lo), tc.dim_M() - ratio.mid};
  return r;
}

RealEnclosure strided_closed_form(int q, const Rational& lambda) {
  auto r = log_ratio(Rational(2), Rational(2), lambda, lambda);
  return {down(1 - up(r.hi / q)), up(1 - down(r.lo / q)), 1 - r.mid / q};
}

RealEnclosure corrected_closed_form(const Rational& eps, const Rational& C, int q, const Rational& lambda) {
  Rational x = eps / C;
  auto r = log_ratio(x, x, lambda, lambda);
  return {down(1 + down(r.lo / q)), up(1 + up(r.hi / q)), 1 + r.mid / q};
}

AvoidanceCertificate certify_avoidance(const TreeLikeCollection& tc, int horizon, int stride, std::size_t max_samples) {
  AvoidanceCertificate cert;
  const int k = tc.k_max();
  if (tc.empty(k)) {
    cert.vacuous = true;
    cert.witness = "deepest level is empty";
    return cert;
  }
  if (stride < 1) throw InputError("stride must be >= 1");
  const auto& p = tc.partition();
  std::vector<Word> samples;
  for (const auto& c : tc.level(k)) samples.push_back(c.witness);
  try {
    auto all = tc.words(k, max_samples);
    samples.insert(samples.end(), all.begin(), all.end());
  } catch (const ResourceError&) {
  }
  std::vector<Interval> targets;
  for (const auto& g : tc.spec().gammas) targets.push_back(cylinder(p, g).interval);
  for (const auto& w : samples) {
    ++cert.samples;
    Rational x = cylinder(p, w).interval.midpoint();
    for (int n = 0; n <= horizon; ++n) {
      if (n % stride == 0)
        for (std::size_t t = 0; t < targets.size(); ++t)
          if (targets[t].interior_contains(x)) {
            cert.ok = false;
            cert.witness = "midpoint of " + format_word(w, p.size()) + " enters Int R_" +
                           format_word(tc.spec().gammas[t], p.size()) + " at n=" + std::to_string(n);
            return cert;
          }
      x = p.map().apply(x);
    }
  }
  return cert;
}

}  // namespace symdyn

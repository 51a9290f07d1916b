#include "symdyn/game.hpp"

#include "symdyn/errors.hpp"
#include "symdyn/matching.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace symdyn {

std::string to_string(BlackStrategy b) {
  switch (b) {
    case BlackStrategy::random: return "random";
    case BlackStrategy::hug_target: return "hug-target";
    case BlackStrategy::replay: return "replay";
  }
  return "?";
}

BlackStrategy parse_black_strategy(std::string_view text) {
  if (text == "random") return BlackStrategy::random;
  if (text == "hug-target" || text == "hug") return BlackStrategy::hug_target;
  if (text == "replay" || text == "adversarial-replay") return BlackStrategy::replay;
  throw InputError("unknown black strategy '" + std::string(text) + "'");
}

std::string to_string(TargetMode t) { return t == TargetMode::all ? "all" : "single"; }

TargetMode parse_target_mode(std::string_view text) {
  if (text == "all") return TargetMode::all;
  if (text == "single") return TargetMode::single;
  throw InputError("unknown target mode '" + std::string(text) + "'");
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::filler: return "filler";
    case Phase::fit_eta: return "fit-eta";
    case Phase::expand: return "expand";
    case Phase::choose_q: return "choose-Q";
    case Phase::descent: return "descent";
  }
  return "?";
}

Phase parse_phase(std::string_view text) {
  for (Phase ph : {Phase::filler, Phase::fit_eta, Phase::expand, Phase::choose_q, Phase::descent})
    if (text == to_string(ph)) return ph;
  throw InputError("unknown phase '" + std::string(text) + "'");
}

StrategyConstants strategy_constants(const MarkovPartition& p) {
  if (p.map().kind() != ExpandingCircleMap::Kind::linear)
    throw InputError("the game strategy needs a linear map (cylinder ratios are not uniform otherwise)");
  StrategyConstants k;
  k.s = p.size();
  k.lambda = p.map().expansion();
  k.r = p.r();
  k.delta_t = p.map().injectivity_diameter();
  k.max_diameter = p.max_diameter();
  const auto& d = p.distortion();
  k.eps1 = d.eps(1);
  k.eps2s = d.eps(2 * k.s);
  k.eps7s2 = d.eps(7 * k.s + 2);
  k.degenerate = p.ts().has_degenerate_letters();
  k.descent_length = k.degenerate ? 7 * k.s + 2 : 5;
  k.eps_descent = k.degenerate ? k.eps7s2 : d.eps(5);
  k.winning_ratio = k.eps_descent / (2 * k.C);

  // 4C^4 dT lambda^-P / (e1 e2s e7s2 r dmax) < r e1 / (2C^2)
  const Rational C2 = k.C * k.C;
  const Rational lhs = 4 * C2 * C2 * k.delta_t * 2 * C2;
  const Rational rhs_base = k.r * k.eps1 * k.eps1 * k.eps2s * k.eps7s2 * k.r * k.max_diameter;
  int P = 4 * k.s - 2;
  Rational lp = pow(k.lambda, P);
  while (!(lhs < rhs_base * lp)) {
    ++P;
    lp *= k.lambda;
    if (P > 100000) throw DefectError("no P found below 100000");
  }
  k.P = P;

  // s^(-1/L) >= lambda^(-1/2)  <=>  s^2 <= lambda^L
  int L = 1;
  Rational ll = k.lambda;
  const Rational s2 = Rational(k.s * k.s);
  while (ll < s2) {
    ++L;
    ll *= k.lambda;
  }
  k.L0 = L;
  return k;
}

Rational winning_ratio(const MarkovPartition& p) {
  const auto& d = p.distortion();
  const int s = p.size();
  Rational e = p.ts().has_degenerate_letters() ? d.eps(7 * s + 2) : d.eps(5);
  return e / (2 * p.distortion_constant());
}

Rational winning_ratio(const std::vector<const MarkovPartition*>& partitions) {
  if (partitions.empty()) throw InputError("no partitions given");
  Rational best = winning_ratio(*partitions.front());
  for (const auto* p : partitions) {
    Rational w = winning_ratio(*p);
    if (w < best) best = w;
  }
  return best;
}

namespace {

Ball make_ball(const Rational& center, const Rational& radius) { return Ball{frac(center), radius}; }

bool overlaps(const Interval& c, const Interval& arc) {
  for (int k = -1; k <= 1; ++k)
    if (c.lo < arc.hi + k && arc.lo + k < c.hi) return true;
  return false;
}

// Cylinders of generation `gen` contained in the arc.
std::vector<CylinderSet> cylinders_inside(const MarkovPartition& p, const Interval& arc, int gen, std::size_t cap) {
  std::vector<CylinderSet> out;
  std::function<void(const CylinderSet&)> walk = [&](const CylinderSet& c) {
    if (!overlaps(c.interval, arc)) return;
    if (c.generation() == gen) {
      if (arc_contains(arc, c.interval)) {
        if (out.size() >= cap) throw ResourceError("more than " + std::to_string(cap) + " candidate cylinders");
        out.push_back(c);
      }
      return;
    }
    for (const auto& k : children(p, c)) walk(k);
  };
  for (Letter i = 1; i <= p.size(); ++i) walk(CylinderSet{Word{i}, p.element(i)});
  return out;
}

CylinderSet refine_by(const MarkovPartition& p, CylinderSet c, const Word& ext) {
  for (Letter x : ext.letters()) c = refine(p, c, x);
  return c;
}

constexpr std::size_t kCandidateCap = 4096;

}  // namespace

WhiteStrategy::WhiteStrategy(const MarkovPartition& p, const Rational& x0, const Rational& n, const Rational& m,
                             TargetMode mode)
    : p_(p), x0_(frac(x0)), n_(n), m_(m), mode_(mode), k_(strategy_constants(p)) {
  if (n <= 0 || n >= 1) throw InputError("white ratio must lie in (0,1)");
  if (m <= 0 || m >= 1) throw InputError("black ratio must lie in (0,1)");
  state_.P = k_.P;
  state_.L0 = k_.L0;
}

Word WhiteStrategy::gamma(std::size_t t, int Q) {
  if (rep_depth_ < Q || reps_.empty()) {
    rep_depth_ = std::max(2 * Q, 64);
    reps_ = representations_of(p_, x0_, rep_depth_).words;
    if (reps_.empty()) throw DefectError("x0 has no representation");
  }
  if (t >= reps_.size()) throw DefectError("representation index out of range");
  return reps_[t].prefix(static_cast<std::size_t>(Q) + 1);
}

std::size_t WhiteStrategy::target_count() {
  gamma(0, 32);
  return mode_ == TargetMode::single ? 1 : reps_.size();
}

std::vector<Word> WhiteStrategy::targets(int Q) {
  std::vector<Word> out;
  std::size_t count = target_count();
  for (std::size_t t = 0; t < count; ++t) out.push_back(gamma(t, Q));
  return out;
}

bool WhiteStrategy::eligible(const Word& g) const {
  const auto& ts = p_.ts();
  const long n = static_cast<long>(g.size()) - 1;
  if (n < 8L * k_.s - 4) return false;
  if (ts.degenerate(g[static_cast<std::size_t>(n - 1)])) return false;
  return !exceptional_shape(ts, g).is_exceptional;
}

int WhiteStrategy::choose_q_ladder(int N) {
  const auto& ts = p_.ts();
  const int s = k_.s;
  int Q = 0;
  if (!k_.degenerate) {
    Q = N + 1;
    if (exceptional_shape(ts, gamma(0, Q)).is_exceptional) Q = N + 2;
  } else {
    Word g = gamma(0, N + 5 * s + 2);
    std::vector<int> pos;
    for (int t = s + 1; pos.size() < 4 && N + t < static_cast<int>(g.size()); ++t)
      if (!ts.degenerate(g[static_cast<std::size_t>(N + t)])) pos.push_back(t);
    if (pos.size() < 4) throw DefectError("fewer than four nondegenerate positions after gamma(N+s)");
    const int Q4 = N + pos[3] + 1;
    Q = exceptional_shape(ts, gamma(0, Q4)).is_exceptional ? N + pos[0] + 1 : Q4;
  }
  if (!eligible(gamma(0, Q))) {
    state_.ladder_fallback = true;
    for (int c = N + 1; c <= N + 8 * s; ++c)
      if (eligible(gamma(0, c))) return c;
    throw StrategyFailure(0, "no admissible Q after N = " + std::to_string(N));
  }
  return Q;
}

std::vector<int> WhiteStrategy::q_candidates(int N) {
  std::vector<int> out;
  const int hi = k_.degenerate ? N + 5 * k_.s + 1 : N + 6;
  for (int Q = N; Q <= hi && out.size() < 3; ++Q) {
    bool ok = true;
    for (const Word& g : targets(Q)) ok = ok && eligible(g);
    if (ok) out.push_back(Q);
  }
  return out;
}

Word WhiteStrategy::extend(const std::vector<Word>& gammas, const Word& alpha) const {
  if (gammas.size() == 1) return no_matching_extend(p_.ts(), gammas.front(), alpha).joined();
  return serial_extend(p_.ts(), gammas, alpha).extension;
}

Ball WhiteStrategy::place_in(const CylinderSet& cyl, const Ball& B, int turn, const char* what) const {
  const Rational rho = n_ * B.radius;
  auto inside = shift_into(cyl.interval, B.arc());
  if (!inside) throw StrategyFailure(turn, std::string(what) + " cylinder is not inside B");
  if (2 * rho > cyl.measure()) {
    throw StrategyFailure(turn, std::string(what) + " cylinder " + format_word(cyl.word, k_.s) + " of diameter " +
                                    format_rational(cyl.measure()) + " cannot hold a ball of diameter " +
                                    format_rational(2 * rho));
  }
  return make_ball(inside->midpoint(), rho);
}

Ball WhiteStrategy::start_descent(const Ball& B, int turn) {
  FitResult f = fit_within(p_, B.arc(), *eta_cur_);
  const int N = f.N;
  state_.N = N;
  if (N - 1 < 2 * k_.P)
    throw StrategyFailure(turn, "fitted generation N-1 = " + std::to_string(N - 1) + " is below 2P");

  int bestQ = -1;
  Word best_alpha, best_ext;
  std::optional<CylinderSet> best_cyl;
  auto consider = [&](int Q, const std::vector<Word>& gammas, const CylinderSet& a) {
    for (const Word& g : gammas)
      if (a.word == g) return;
    Word ext = extend(gammas, a.word);
    CylinderSet c = refine_by(p_, a, ext);
    if (!best_cyl || c.measure() > best_cyl->measure()) {
      bestQ = Q;
      best_alpha = a.word;
      best_ext = std::move(ext);
      best_cyl = std::move(c);
    }
  };

  const bool ladder = target_count() == 1;
  if (ladder) {
    const int Q = choose_q_ladder(N);
    auto gammas = targets(Q);
    std::vector<CylinderSet> frontier{f.eta_i};
    for (int g = N; g < Q; ++g) {
      std::vector<CylinderSet> next;
      for (const auto& c : frontier)
        for (auto& k : children(p_, c)) next.push_back(std::move(k));
      if (next.size() > kCandidateCap) throw ResourceError("too many Q-extensions of the fitted cylinder");
      frontier = std::move(next);
    }
    for (const auto& a : frontier) consider(Q, gammas, a);
  } else {
    for (int Q : q_candidates(N)) {
      auto gammas = targets(Q);
      for (const auto& a : cylinders_inside(p_, B.arc(), Q, kCandidateCap)) consider(Q, gammas, a);
    }
  }
  if (!best_cyl) throw StrategyFailure(turn, "no admissible first descent cylinder");
  if (!ladder && (bestQ <= N || !best_alpha.starts_with(f.eta_i.word))) state_.widened_first_step = true;

  state_.Q = bestQ;
  state_.gamma_truncations = targets(bestQ);
  {
    const Rational c = k_.r * k_.eps1 / (2 * k_.C * k_.C);
    state_.inequality_11 = m_ * m_ * pow(k_.lambda, bestQ) >= c * c;
  }
  Ball W = place_in(*best_cyl, B, turn, "first descent");
  if (ladder) {
    const Rational low = k_.eps_descent * k_.eps1 / (2 * k_.C * k_.C);
    if (n_ <= k_.winning_ratio && !(n_ * B.diameter() >= low * best_cyl->measure()))
      throw DefectError("first descent cylinder is too large relative to B");
  }
  alpha_generation_ = static_cast<int>(best_alpha.size()) - 1;
  state_.current_word = best_alpha + best_ext;
  state_.pending_extension = best_ext;
  cert_cyl_ = std::move(best_cyl);
  state_.phase = Phase::descent;
  return W;
}

Ball WhiteStrategy::descend(const Ball& B, int turn) {
  FitResult f = fit_within(p_, B.arc(), *cert_cyl_);
  const int Q = *state_.Q;
  const int q = f.N - alpha_generation_;
  alpha_generation_ = f.N;
  const std::size_t ext_len = state_.pending_extension.size();
  state_.q_history.push_back(q);
  state_.extension_lengths.push_back(ext_len);
  if (!(static_cast<long>(ext_len) < q && q <= Q)) state_.q_window_ok = false;

  const Word& alpha = f.eta_i.word;
  if (!alpha.starts_with(state_.current_word)) throw DefectError("fitted word does not extend the certificate");
  for (std::size_t t = 0; t < state_.gamma_truncations.size(); ++t)
    if (contains_match(state_.gamma_truncations[t], alpha))
      throw StrategyFailure(turn, "certificate word contains a match of target " + std::to_string(t));

  Word ext = extend(state_.gamma_truncations, alpha);
  CylinderSet c = refine_by(p_, f.eta_i, ext);
  Ball W = place_in(c, B, turn, "descent");
  state_.current_word = alpha + ext;
  state_.pending_extension = std::move(ext);
  cert_cyl_ = std::move(c);
  return W;
}

Ball WhiteStrategy::move(const Ball& B, int turn) {
  const Rational rho = n_ * B.radius;
  if (state_.phase == Phase::filler) {
    if (B.diameter() < p_.min_diameter()) {
      state_.J = turn;
      state_.phase = Phase::fit_eta;
    } else {
      last_phase_ = Phase::filler;
      return make_ball(B.center, rho);
    }
  }
  if (state_.phase == Phase::fit_eta) {
    last_phase_ = Phase::fit_eta;
    FitResult f = fit_interval(p_, B.arc());
    state_.eta = f.eta.word;
    state_.N0 = f.eta.generation();
    eta_cur_ = f.eta;
    state_.phase = Phase::expand;
    return place_in_half(f.b_plus, B);
  }
  if (state_.phase == Phase::expand) {
    const int p = turn - *state_.J;
    if (!state_.L1 && containing_cylinder(p_, B.arc(), 2 * k_.P)) state_.L1 = p;
    if (state_.L1 && p >= k_.L0) {
      state_.L = p;
      state_.phase = Phase::choose_q;
      last_phase_ = Phase::choose_q;
      return start_descent(B, turn);
    }
    last_phase_ = Phase::expand;
    FitResult f = fit_within(p_, B.arc(), *eta_cur_);
    eta_cur_ = f.eta;
    return place_in_half(f.b_plus, B);
  }
  last_phase_ = Phase::descent;
  return descend(B, turn);
}

// Centered in B+ when it fits, otherwise as close to its middle as B allows.
Ball WhiteStrategy::place_in_half(const Interval& bplus, const Ball& B) const {
  const Rational rho = n_ * B.radius;
  auto half = shift_into(bplus, B.arc());
  if (!half) throw DefectError("B+ is not inside B");
  Rational c = half->midpoint();
  const Rational slack = B.radius - rho;
  if (c < B.center - slack) c = B.center - slack;
  if (c > B.center + slack) c = B.center + slack;
  return make_ball(c, rho);
}

BlackPlayer::BlackPlayer(BlackStrategy strategy, const Rational& x0, const Rational& m, std::uint64_t seed,
                         std::vector<Ball> replay)
    : strategy_(strategy), x0_(frac(x0)), m_(m), rng_(seed), replay_(std::move(replay)) {}

Rational BlackPlayer::pick(const Rational& lo, const Rational& hi) {
  constexpr long kGrid = (1L << 20) - 1;
  const long t = static_cast<long>(rng_() >> 44);
  Rational u(t, kGrid);
  u.canonicalize();
  return lo + (hi - lo) * u;
}

Ball BlackPlayer::first(const Rational& radius) {
  switch (strategy_) {
    case BlackStrategy::random: return make_ball(pick(0, 1), radius);
    case BlackStrategy::hug_target: return make_ball(x0_, radius);
    case BlackStrategy::replay:
      if (replay_.empty()) throw InputError("replay has no Black moves");
      return replay_[cursor_++];
  }
  throw DefectError("unknown black strategy");
}

Ball BlackPlayer::next(const Ball& W) {
  const Rational rho = m_ * W.radius;
  const Rational slack = W.radius - rho;
  switch (strategy_) {
    case BlackStrategy::random: return make_ball(pick(W.center - slack, W.center + slack), rho);
    case BlackStrategy::hug_target: {
      Rational k = floor_rational(W.center - x0_ + Rational(1, 2));
      Rational c = x0_ + k;
      if (c < W.center - slack) c = W.center - slack;
      if (c > W.center + slack) c = W.center + slack;
      return make_ball(c, rho);
    }
    case BlackStrategy::replay:
      if (cursor_ >= replay_.size()) throw InputError("replay ran out of Black moves");
      return replay_[cursor_++];
  }
  throw DefectError("unknown black strategy");
}

GameTranscript play(const MarkovPartition& p, const GameParams& params, int rounds) {
  if (rounds < 1) throw InputError("rounds must be at least 1");
  if (params.initial_radius <= 0 || params.initial_radius >= Rational(1, 2))
    throw InputError("initial radius must lie in (0, 1/2)");
  WhiteStrategy white(p, params.x0, params.white_ratio, params.black_ratio, params.targets);
  BlackPlayer black(params.black, params.x0, params.black_ratio, params.seed, params.replay);

  GameTranscript t;
  t.white_ratio = params.white_ratio;
  t.black_ratio = params.black_ratio;
  t.x0 = frac(params.x0);
  t.seed = params.seed;
  t.black = params.black;
  t.targets = params.targets;
  t.rounds = rounds;
  t.out_of_theorem = params.white_ratio > white.constants().winning_ratio || params.white_ratio > Rational(1, 2);

  Ball B = black.first(params.initial_radius);
  for (int i = 1; i <= rounds; ++i) {
    t.moves.push_back(Move{i, 'B', B, white.state().phase, std::nullopt});
    Ball W = white.move(B, i);
    Move mw{i, 'W', W, white.last_phase(), std::nullopt};
    if (white.state().phase == Phase::descent) mw.word = white.state().current_word;
    t.moves.push_back(std::move(mw));
    if (i < rounds) B = black.next(W);
  }
  t.state = white.state();
  return t;
}

namespace {

struct Fail {
  VerificationReport& r;
  void operator()(bool& flag, int turn, std::string msg) {
    flag = false;
    if (!r.failing_turn && turn > 0) r.failing_turn = turn;
    r.failures.push_back(turn > 0 ? "turn " + std::to_string(turn) + ": " + msg : msg);
  }
};

}  // namespace

VerificationReport verify_transcript(const GameTranscript& t, const MarkovPartition& p, int horizon) {
  VerificationReport r;
  Fail fail{r};
  const int s = p.size();

  // (a) alternation, ratios, nesting
  const Ball* prev = nullptr;
  char expect = 'B';
  int round = 1;
  for (const Move& mv : t.moves) {
    if (mv.player != expect || mv.turn != round) {
      fail(r.ratios_ok, mv.turn, std::string("expected ") + expect + " at round " + std::to_string(round));
      break;
    }
    const Ball& b = mv.ball;
    if (b.radius <= 0 || b.radius >= Rational(1, 2)) fail(r.ratios_ok, mv.turn, "radius out of (0, 1/2)");
    if (prev) {
      const Rational ratio = mv.player == 'W' ? t.white_ratio : t.black_ratio;
      if (b.radius != ratio * prev->radius)
        fail(r.ratios_ok, mv.turn,
             std::string(1, mv.player) + " radius " + format_rational(b.radius) + " != " +
                 format_rational(ratio) + " * " + format_rational(prev->radius));
      if (!arc_contains(prev->arc(), b.arc()))
        fail(r.ratios_ok, mv.turn, std::string(1, mv.player) + " ball is not inside the previous ball");
    }
    prev = &b;
    if (expect == 'W') ++round;
    expect = expect == 'B' ? 'W' : 'B';
  }

  // (b) certificate chain
  if (!t.state.Q || t.state.gamma_truncations.empty()) {
    fail(r.certificate_ok, 0, "no certified descent (the game ended before the strategy reached descent)");
    r.orbit_ok = r.neighborhood_ok = false;
    return r;
  }
  const int Q = *t.state.Q;
  auto reps = representations_of(p, t.x0, std::max(2 * Q, 64)).words;
  std::vector<Word> gammas;
  for (const Word& w : reps) gammas.push_back(w.prefix(static_cast<std::size_t>(Q) + 1));
  std::vector<Word> targeted = gammas;
  if (t.targets == TargetMode::single) targeted.resize(1);
  if (targeted != t.state.gamma_truncations) fail(r.certificate_ok, 0, "recorded targets differ from x0's truncations");

  std::optional<CylinderSet> cyl;
  Word last;
  for (const Move& mv : t.moves) {
    if (!mv.word) continue;
    const Word& w = *mv.word;
    if (!cyl) {
      cyl = cylinder(p, w);
    } else {
      if (!w.starts_with(last)) {
        fail(r.certificate_ok, mv.turn, "certificate word does not extend the previous one");
        cyl = cylinder(p, w);
      } else {
        cyl = refine_by(p, *cyl, w.suffix_from(last.size()));
      }
    }
    if (!arc_contains(cyl->interval, mv.ball.arc()))
      fail(r.certificate_ok, mv.turn, "W is not inside R_" + format_word(w, s));
    last = w;
  }
  if (last.empty()) fail(r.certificate_ok, 0, "no certificate words recorded");
  for (std::size_t i = 0; i < targeted.size(); ++i) {
    auto hits = find_matches(targeted[i], last);
    if (!hits.empty())
      fail(r.certificate_ok, 0, "certificate matches target " + std::to_string(i) + " at head " +
                                    std::to_string(hits.front()));
  }

  // q window
  const auto& qs = t.state.q_history;
  for (std::size_t i = 0; i < qs.size() && i < t.state.extension_lengths.size(); ++i) {
    bool in = static_cast<long>(t.state.extension_lengths[i]) < qs[i] && qs[i] <= Q;
    if (!in && t.state.inequality_11)
      fail(r.q_window_ok, 0, "q = " + std::to_string(qs[i]) + " outside (" +
                                 std::to_string(t.state.extension_lengths[i]) + ", " + std::to_string(Q) + "]");
  }

  // (c) exact orbit of the final midpoint
  std::vector<Interval> bad;
  for (const Word& g : gammas) bad.push_back(cylinder(p, g).interval);
  Rational x = t.moves.empty() ? Rational(0) : frac(t.moves.back().ball.center);
  for (int j = 0; j < horizon; ++j) {
    auto hit = std::find_if(bad.begin(), bad.end(), [&](const Interval& iv) {
      return iv.interior_contains(x) || (x == 0 && iv.interior_contains(Rational(1)));
    });
    if (hit != bad.end()) {
      fail(r.orbit_ok, 0, "T^" + std::to_string(j) + "(x) = " + format_rational(x) + " enters Int R_" +
                              format_word(gammas[static_cast<std::size_t>(hit - bad.begin())], s));
      break;
    }
    r.orbit_iterates = j + 1;
    x = p.map().apply(x);
  }

  // (d) neighborhood of x0 covered by the avoided cylinders
  auto adj = adjacency_set(p, t.x0, Q);
  std::set<Word> adj_words, target_words(targeted.begin(), targeted.end());
  for (const auto& c : adj) adj_words.insert(c.word);
  if (adj_words != std::set<Word>(gammas.begin(), gammas.end()))
    fail(r.neighborhood_ok, 0, "adjacency set differs from the representations of x0");
  r.neighborhood_left = 0;
  r.neighborhood_right = 0;
  for (const auto& c : adj) {
    if (!target_words.count(c.word)) continue;
    for (int k = -1; k <= 1; ++k) {
      Interval iv = c.interval.shifted(Rational(k));
      if (!iv.contains(t.x0)) continue;
      Rational left = t.x0 - iv.lo, right = iv.hi - t.x0;
      if (left > r.neighborhood_left) r.neighborhood_left = left;
      if (right > r.neighborhood_right) r.neighborhood_right = right;
    }
  }
  if (r.neighborhood_left <= 0 || r.neighborhood_right <= 0)
    fail(r.neighborhood_ok, 0, "the avoided cylinders do not cover a neighborhood of x0 on both sides");
  return r;
}

}  // namespace symdyn

#include "symdyn/errors.hpp"
#include "symdyn/game.hpp"
#include "symdyn/io.hpp"
#include "symdyn/matching.hpp"

#include <doctest.h>

#include <map>

using namespace symdyn;

namespace {

MarkovPartition three_element() {
  return MarkovPartition::custom(ExpandingCircleMap::linear(2), {Rational(0), Rational(1, 4), Rational(1, 2)});
}

GameParams params(const Rational& n, const Rational& m, const Rational& x0, BlackStrategy b, std::uint64_t seed = 1) {
  GameParams g;
  g.white_ratio = n;
  g.black_ratio = m;
  g.x0 = x0;
  g.black = b;
  g.seed = seed;
  return g;
}

std::vector<Ball> black_balls(const GameTranscript& t) {
  std::vector<Ball> out;
  for (const auto& mv : t.moves)
    if (mv.player == 'B') out.push_back(mv.ball);
  return out;
}

}  // namespace

TEST_CASE("winning ratios") {
  auto dy = MarkovPartition::uniform(2, 1);
  CHECK(winning_ratio(dy) == Rational(1, 64));
  CHECK(dy.distortion().eps(5) == Rational(1, 32));

  auto p3 = three_element();
  // Sigma(23) is too large to list; split each word at generation 11 and chain the
  // extreme ratios of explicit cylinders, grouped by first and last letter.
  auto least = [&](int q) {
    std::map<std::pair<Letter, Letter>, Rational> best;
    for (const auto& w : enumerate_words(p3.ts(), q, nullptr)) {
      Rational r = cylinder(p3, w).measure() / p3.measure(w.front());
      auto key = std::make_pair(w.front(), w.back());
      auto it = best.find(key);
      if (it == best.end() || r < it->second) best[key] = r;
    }
    return best;
  };
  auto head = least(11), tail = least(12);
  std::optional<Rational> eps23;
  for (const auto& [k1, r1] : head)
    for (const auto& [k2, r2] : tail)
      if (k1.second == k2.first && (!eps23 || r1 * r2 < *eps23)) eps23 = r1 * r2;
  REQUIRE(eps23);
  CHECK(winning_ratio(p3) == *eps23 / 2);
  CHECK(winning_ratio(p3) == Rational(1, 33554432));
  CHECK(distortion_by_enumeration(p3, 9).eps == p3.distortion().eps(9));

  std::vector<const MarkovPartition*> both{&dy, &p3};
  CHECK(winning_ratio(both) == Rational(1, 33554432));
}

TEST_CASE("strategy constants") {
  for (const auto& p : {MarkovPartition::uniform(2, 1), three_element()}) {
    auto k = strategy_constants(p);
    auto holds = [&](int P) {
      Rational lhs = 4 * k.delta_t * pow(k.lambda, -P) / (k.eps1 * k.eps2s * k.eps7s2 * k.r * k.max_diameter);
      return P >= 4 * k.s - 2 && lhs < k.r * k.eps1 / 2;
    };
    CHECK(holds(k.P));
    CHECK_FALSE(holds(k.P - 1));
    CHECK(pow(k.lambda, k.L0) >= Rational(k.s * k.s));
    CHECK(pow(k.lambda, k.L0 - 1) < Rational(k.s * k.s));
  }
  CHECK(strategy_constants(MarkovPartition::uniform(2, 1)).P == 26);
  CHECK(strategy_constants(MarkovPartition::uniform(2, 1)).L0 == 2);
  CHECK(strategy_constants(three_element()).P == 41);
  CHECK(strategy_constants(three_element()).L0 == 4);
}

TEST_CASE("black moves") {
  const Ball W{Rational(1, 10), Rational(1, 20)};
  BlackPlayer hug(BlackStrategy::hug_target, Rational(1, 2), Rational(1, 2), 0);
  Ball B = hug.next(W);
  CHECK(B.radius == Rational(1, 40));
  CHECK(B.center == Rational(1, 8));

  BlackPlayer wrap(BlackStrategy::hug_target, Rational(19, 20), Rational(1, 2), 0);
  CHECK(wrap.next(W).center == Rational(3, 40));

  BlackPlayer inside(BlackStrategy::hug_target, Rational(11, 100), Rational(1, 2), 0);
  CHECK(inside.next(W).center == Rational(11, 100));

  BlackPlayer r1(BlackStrategy::random, 0, Rational(3, 4), 99), r2(BlackStrategy::random, 0, Rational(3, 4), 99);
  for (int i = 0; i < 20; ++i) {
    Ball a = r1.next(W), b = r2.next(W);
    CHECK(a == b);
    CHECK(a.radius == Rational(3, 4) * W.radius);
    CHECK(arc_contains(W.arc(), a.arc()));
  }
}

TEST_CASE("filler phase is a concentric shrink") {
  auto p = MarkovPartition::uniform(2, 1);
  WhiteStrategy white(p, Rational(1, 3), Rational(1, 64), Rational(1, 2));
  Ball B{Rational(3, 10), Rational(1, 4)};
  Ball W = white.move(B, 1);
  CHECK(W.center == B.center);
  CHECK(W.radius == B.radius / 64);
  CHECK(white.last_phase() == Phase::filler);
  CHECK_FALSE(white.state().J);
}

TEST_CASE("game at the winning ratio, x0 = 1/3") {
  auto p = MarkovPartition::uniform(2, 1);
  auto t = play(p, params(Rational(1, 64), Rational(1, 2), Rational(1, 3), BlackStrategy::random, 7), 60);
  auto r = verify_transcript(t, p, 1000);
  CHECK(r.ok());
  CHECK_FALSE(t.out_of_theorem);
  const auto& st = t.state;
  REQUIRE(st.Q);
  CHECK(t.certificate().size() > 40);
  REQUIRE(st.gamma_truncations.size() == 1);
  const Word& gamma = st.gamma_truncations.front();
  CHECK(find_matches(gamma, t.certificate()).empty());

  // Expansion reached a G(2P) cylinder in finitely many steps.
  REQUIRE(st.L1);
  CHECK(*st.L == std::max(st.L0, *st.L1));
  CHECK(*st.N - 1 >= 2 * st.P);
  CHECK((*st.Q == *st.N + 1 || *st.Q == *st.N + 2));

  // First descent word: alpha of Q+1 letters plus (b0, b1), oracle-checked.
  const Move* first = nullptr;
  for (const auto& mv : t.moves)
    if (mv.word) {
      first = &mv;
      break;
    }
  REQUIRE(first);
  CHECK(first->phase == Phase::choose_q);
  Word alpha = first->word->prefix(static_cast<std::size_t>(*st.Q) + 1);
  Word ext = first->word->suffix_from(alpha.size());
  CHECK(ext.size() == 2);
  CHECK(certify_extension(p.ts(), gamma, alpha, ext, static_cast<std::size_t>(*st.Q)));
  CHECK(arc_contains(cylinder(p, *first->word).interval, first->ball.arc()));

  for (std::size_t i = 0; i < st.q_history.size(); ++i) {
    CHECK(static_cast<int>(st.extension_lengths[i]) < st.q_history[i]);
    CHECK(st.q_history[i] <= *st.Q);
  }
  CHECK(st.inequality_11);
}

TEST_CASE("boundary target avoids both representations") {
  auto p = MarkovPartition::uniform(2, 1);
  for (auto b : {BlackStrategy::hug_target, BlackStrategy::random}) {
    auto t = play(p, params(Rational(1, 64), Rational(1, 4), Rational(1, 2), b, 3), 60);
    auto r = verify_transcript(t, p, 1000);
    CHECK(r.ok());
    REQUIRE(t.state.gamma_truncations.size() == 2);
    for (const auto& g : t.state.gamma_truncations) CHECK(find_matches(g, t.certificate()).empty());
    CHECK(r.neighborhood_left > 0);
    CHECK(r.neighborhood_right > 0);
    CHECK(r.neighborhood_left == pow(Rational(2), -(*t.state.Q + 1)));
  }
  // Targeting one side only leaves the other side of 1/2 uncovered.
  GameParams g = params(Rational(1, 64), Rational(1, 4), Rational(1, 2), BlackStrategy::hug_target);
  g.targets = TargetMode::single;
  auto t = play(p, g, 60);
  auto r = verify_transcript(t, p, 1000);
  CHECK(r.ratios_ok);
  CHECK(r.certificate_ok);
  CHECK_FALSE(r.neighborhood_ok);
}

TEST_CASE("q window under a tiny black ratio") {
  auto p = MarkovPartition::uniform(2, 1);
  auto t = play(p, params(Rational(1, 64), Rational(1, 1 << 20), Rational(1, 7), BlackStrategy::random, 5), 30);
  auto r = verify_transcript(t, p, 1000);
  CHECK(r.ok());
  CHECK(t.state.inequality_11);
  CHECK(t.state.q_window_ok);
  CHECK(*std::max_element(t.state.q_history.begin(), t.state.q_history.end()) > 20);
}

TEST_CASE("fault injection and replay") {
  auto p = MarkovPartition::uniform(2, 1);
  auto t = play(p, params(Rational(1, 64), Rational(3, 4), Rational(1, 3), BlackStrategy::random, 11), 40);
  REQUIRE(verify_transcript(t, p).ok());

  auto bad = t;
  for (auto& mv : bad.moves)
    if (mv.player == 'W' && mv.turn == 17) mv.ball.radius *= Rational(1'000'001, 1'000'000);
  auto r = verify_transcript(bad, p);
  CHECK_FALSE(r.ratios_ok);
  REQUIRE(r.failing_turn);
  CHECK(*r.failing_turn == 17);

  GameParams g = params(Rational(1, 64), Rational(3, 4), Rational(1, 3), BlackStrategy::replay);
  g.replay = black_balls(t);
  auto again = play(p, g, 40);
  REQUIRE(again.moves.size() == t.moves.size());
  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    CHECK(again.moves[i].ball == t.moves[i].ball);
    CHECK(again.moves[i].word == t.moves[i].word);
  }

  // Mutated replays: nudge recorded Black moves but keep them legal.
  for (int turn : {3, 9, 25}) {
    auto moves = black_balls(t);
    GameParams gm = params(Rational(1, 64), Rational(3, 4), Rational(1, 3), BlackStrategy::replay);
    // From the mutation point on Black hugs x0 instead of replaying.
    WhiteStrategy white(p, gm.x0, gm.white_ratio, gm.black_ratio);
    BlackPlayer hug(BlackStrategy::hug_target, gm.x0, gm.black_ratio, 0);
    GameTranscript mt;
    mt.white_ratio = gm.white_ratio;
    mt.black_ratio = gm.black_ratio;
    mt.x0 = gm.x0;
    Ball B = moves[0];
    for (int i = 1; i <= 40; ++i) {
      mt.moves.push_back({i, 'B', B, white.state().phase, std::nullopt});
      Ball W = white.move(B, i);
      Move mw{i, 'W', W, white.last_phase(), std::nullopt};
      if (white.state().phase == Phase::descent) mw.word = white.state().current_word;
      mt.moves.push_back(mw);
      B = i < turn - 1 ? moves[static_cast<std::size_t>(i)] : hug.next(W);
    }
    mt.state = white.state();
    CHECK(verify_transcript(mt, p).ok());
  }
}

TEST_CASE("transcript round trip") {
  auto p = MarkovPartition::uniform(2, 1);
  auto t = play(p, params(Rational(1, 64), Rational(1, 10), Rational(1, 2), BlackStrategy::random, 2), 25);
  std::string text = transcript_to_jsonl(t, p.size());
  auto back = transcript_from_jsonl(text, p.size());
  CHECK(transcript_to_jsonl(back, p.size()) == text);
  CHECK(verify_transcript(back, p).ok());
  CHECK(text.find("\"player\":\"W\"") != std::string::npos);
}

TEST_CASE("degenerate partition game") {
  auto p = three_element();
  const Rational n = winning_ratio(p);
  for (const Rational& x0 : {Rational(1, 3), Rational(0)}) {
    auto t = play(p, params(n, Rational(1, 2), x0, BlackStrategy::random, 4), 25);
    auto r = verify_transcript(t, p, 1000);
    CHECK(r.ok());
    if (x0 != 0) CHECK(*t.state.Q > *t.state.N + 3);
  }
}

TEST_CASE("out-of-theorem parameters are flagged") {
  auto p = MarkovPartition::uniform(2, 1);
  GameParams g = params(Rational(3, 4), Rational(1, 2), Rational(1, 3), BlackStrategy::hug_target);
  try {
    auto t = play(p, g, 20);
    CHECK(t.out_of_theorem);
  } catch (const StrategyFailure&) {
    CHECK(true);
  }
  CHECK_THROWS_AS(play(p, params(Rational(0), Rational(1, 2), Rational(1, 3), BlackStrategy::random), 5), InputError);
  CHECK_THROWS_AS(play(p, params(Rational(1, 64), Rational(1), Rational(1, 3), BlackStrategy::random), 5), InputError);
}

#include "symdyn/runner.hpp"

#include "symdyn/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace symdyn {

using nlohmann::json;

namespace {

Word repeat(Letter x, int n) { return Word(std::vector<Letter>(static_cast<std::size_t>(n), x)); }

std::string num(double x) {
  std::ostringstream ss;
  ss << std::setprecision(12) << x;
  return ss.str();
}

}  // namespace

MarkovPartition exchanged_dyadic(int s_exponent) {
  auto base = MarkovPartition::uniform(2, s_exponent);
  const int size = base.size();
  std::vector<Letter> perm(static_cast<std::size_t>(size));
  for (int i = 1; i <= size; ++i) perm[static_cast<std::size_t>(i - 1)] = i;
  std::swap(perm[0], perm[static_cast<std::size_t>(size / 2 - 1)]);
  return base.relabeled(perm);
}

std::vector<CheckLine> reproduce_examples(const ExampleInputs& in) {
  std::vector<CheckLine> out;
  auto guarded = [&](const std::string& name, auto&& body) {
    CheckLine line{name, true, ""};
    try {
      body(line);
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail = e.what();
    }
    out.push_back(std::move(line));
  };
  auto expect = [](CheckLine& line, bool cond, const std::string& what) {
    if (cond) return;
    line.pass = false;
    if (!line.detail.empty()) line.detail += "; ";
    line.detail += what;
  };

  const auto dyadic = MarkovPartition::uniform(2, 1);
  const auto& ts2 = dyadic.ts();

  guarded("first counterexample", [&](CheckLine& line) {
    TreeLikeCollection tc(dyadic, {{in.gamma1}, 2, 3, Variant::every_position, 1});
    expect(line, tc.contains(in.alpha1), "R_" + format_word(in.alpha1, 2) + " is not in E_2");
    for (Letter x = 1; x <= 2; ++x) {
      Word w = in.alpha1 + Word{1, x};
      expect(line, !tc.contains(w), "R_" + format_word(w, 2) + " is in E_3");
    }
    if (line.pass)
      line.detail = "R_" + format_word(in.alpha1, 2) + " in E_2, both R_" + format_word(in.alpha1, 2) + "1* not in E_3";
  });

  guarded("second counterexample", [&](CheckLine& line) {
    TreeLikeCollection tc(dyadic, {{in.gamma2}, 4, 3, Variant::every_position, 1});
    expect(line, tc.contains(in.alpha2), "R_" + format_word(in.alpha2, 2) + " is not in E_2");
    for (const auto& tail : enumerate_words(ts2, 3, nullptr)) {
      Word w = in.alpha2 + tail;
      if (tail.front() == 1) expect(line, !tc.contains(w), "R_" + format_word(w, 2) + " is in E_3");
    }
    for (Letter x = 1; x <= 2; ++x) {
      Word w = in.alpha2 + Word{2, 1, 1, x};
      expect(line, !tc.contains(w), "R_" + format_word(w, 2) + " is in E_3");
    }
    if (line.pass)
      line.detail = "density(E_3, R_alpha) = " + format_rational(tc.density(in.alpha2)) + ", R_alpha1*** and R_alpha211* excluded";
  });

  for (int s_exp : in.s_exponents) {
    guarded("third counterexample (s_exponent " + std::to_string(s_exp) + ")", [&](CheckLine& line) {
      const int q = in.q3;
      auto p = exchanged_dyadic(s_exp);
      const Letter a = static_cast<Letter>(1 << s_exp), b = a - 1;
      Word gamma = repeat(a, q) + Word{b};
      TreeLikeCollection tc(p, {{gamma}, q, in.k3, Variant::every_position, 1});
      const Rational expected = pow(Rational(2), -q);
      for (int k : {1, 2, 5}) {
        if (k > in.k3) continue;
        Word alpha = Word{1} + repeat(a, k * q);
        if (!tc.contains(alpha)) {
          expect(line, false, "R_" + format_word(alpha, p.size()) + " is not in E_" + std::to_string(k));
          continue;
        }
        Rational d = tc.density(alpha);
        expect(line, d == expected, "density at k = " + std::to_string(k) + " is " + format_rational(d));
      }
      for (int k = 1; k <= in.k3; ++k) {
        auto dk = tc.delta(k);
        expect(line, dk && *dk == expected,
               "Delta_" + std::to_string(k) + " = " + (dk ? format_rational(*dk) : std::string("empty")));
        if (!line.pass) break;
      }
      auto bound = hd_lower_bound(tc, in.k3);
      expect(line, std::abs(bound.value.mid) < 1e-2, "bound at k = " + std::to_string(in.k3) + " is " + num(bound.value.mid));
      if (line.pass)
        line.detail = "density = Delta_k = 2^-" + std::to_string(q) + ", bound(k=" + std::to_string(in.k3) +
                      ") = " + num(bound.value.mid);
    });
  }
  return out;
}

std::string format_check_lines(const std::vector<CheckLine>& lines) {
  std::ostringstream ss;
  for (const auto& l : lines) ss << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << '\n';
  return ss.str();
}

HdExperiment hd_experiment(const MarkovPartition& p, const CollectionSpec& spec, DensitySource source,
                           const Rational& floor, bool with_oracle) {
  HdExperiment e;
  e.spec = spec;
  const Rational& lambda = p.map().expansion();
  e.strided_closed = strided_closed_form(spec.q, lambda);
  const int s = p.size();
  const int P = static_cast<int>(spec.gammas.size());
  try {
    e.corrected_closed = corrected_closed_form(p.distortion().eps(2 * s * P), p.distortion_constant(), spec.q, lambda);
  } catch (const std::exception& ex) {
    e.warnings.push_back(std::string("corrected closed form unavailable: ") + ex.what());
  }

  TreeLikeCollection tc(p, spec);
  for (int k = 1; k <= spec.k_max; ++k) {
    HdRow row;
    row.k = k;
    row.size = tc.size(k);
    if (tc.empty(k)) {
      row.death = true;
      row.note = "level is empty";
      e.rows.push_back(row);
      e.warnings.push_back("collection dies at level " + std::to_string(k));
      break;
    }
    row.delta = tc.delta(k);
    row.diameter = tc.diameter(k);
    try {
      row.bound = hd_lower_bound(tc, k, source, floor).value;
    } catch (const CollectionDeath& ex) {
      row.death = true;
      row.note = ex.what();
      e.rows.push_back(row);
      e.warnings.push_back(ex.what());
      break;
    }
    e.rows.push_back(row);
  }

  if (with_oracle) {
    try {
      e.oracle = spectral_dimension(p, spec.gammas);
    } catch (const InputError& ex) {
      e.oracle_note = ex.what();
    }
  }
  return e;
}

std::string hd_csv(const HdExperiment& e) {
  std::ostringstream ss;
  ss << "k,size,delta,diameter,bound_lo,bound,bound_hi,death\n";
  for (const auto& r : e.rows) {
    ss << r.k << ',' << r.size.get_str() << ',' << (r.delta ? format_rational(*r.delta) : "") << ','
       << (r.diameter ? format_rational(*r.diameter) : "") << ',';
    if (r.bound)
      ss << num(r.bound->lo) << ',' << num(r.bound->mid) << ',' << num(r.bound->hi);
    else
      ss << ",,";
    ss << ',' << (r.death ? "true" : "false") << '\n';
  }
  return ss.str();
}

std::string hd_json(const HdExperiment& e, int s) {
  json j;
  json gammas = json::array();
  for (const auto& g : e.spec.gammas) gammas.push_back(format_word(g, s));
  j["variant"] = to_string(e.spec.variant);
  j["q"] = e.spec.q;
  j["k_max"] = e.spec.k_max;
  j["gammas"] = gammas;
  j["closed_forms"]["strided"] = {e.strided_closed.lo, e.strided_closed.hi};
  if (e.corrected_closed) j["closed_forms"]["corrected"] = {e.corrected_closed->lo, e.corrected_closed->hi};
  json rows = json::array();
  for (const auto& r : e.rows) {
    json row;
    row["k"] = r.k;
    row["size"] = r.size.get_str();
    row["delta"] = r.delta ? json(format_rational(*r.delta)) : json(nullptr);
    row["delta_ge_half"] = r.delta ? json(*r.delta >= Rational(1, 2)) : json(nullptr);
    row["diameter"] = r.diameter ? json(format_rational(*r.diameter)) : json(nullptr);
    row["bound"] = r.bound ? json{r.bound->lo, r.bound->mid, r.bound->hi} : json(nullptr);
    row["death"] = r.death;
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  j["rows"] = rows;
  if (e.oracle) {
    j["oracle"] = {{"rho_interval", {format_rational(e.oracle->rho.rho_lo), format_rational(e.oracle->rho.rho_hi)}},
                   {"dimension", e.oracle->dimension},
                   {"dimension_interval", {e.oracle->dimension_lo, e.oracle->dimension_hi}}};
  } else if (!e.oracle_note.empty()) {
    j["oracle"] = {{"unavailable", e.oracle_note}};
  }
  j["warnings"] = e.warnings;
  return j.dump(2);
}

std::vector<BatchEntry> game_batch(const MarkovPartition& p, const std::vector<GameParams>& jobs, int rounds,
                                   int horizon, int threads) {
  std::vector<BatchEntry> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      BatchEntry& e = out[i];
      e.params = jobs[i];
      try {
        GameTranscript t = play(p, jobs[i], rounds);
        VerificationReport r = verify_transcript(t, p, horizon);
        e.ok = r.ok();
        e.failures = r.failures;
        e.out_of_theorem = t.out_of_theorem;
        e.certificate_length = t.certificate().size();
        e.Q = t.state.Q;
      } catch (const StrategyFailure& ex) {
        e.strategy_failure = ex.what();
      }
    }
  };
  const int n = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace symdyn

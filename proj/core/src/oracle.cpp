#include "symdyn/oracle.hpp"

#include "symdyn/errors.hpp"
#include "symdyn/matching.hpp"

#include <mpfr.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace symdyn {

AvoidanceAutomaton::AvoidanceAutomaton(const TransitionSystem& ts, std::vector<Word> forbidden)
    : ts_(ts), forbidden_(std::move(forbidden)) {
  const std::size_t s = static_cast<std::size_t>(ts_.size());
  trie_.push_back(std::vector<int>(s, -1));
  depth_.push_back(0);
  terminal_.push_back(false);
  for (const auto& g : forbidden_) {
    if (g.empty()) throw InputError("forbidden words must be nonempty");
    int node = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      ts_.check_letter(g[i]);
      int& nxt = trie_[static_cast<std::size_t>(node)][static_cast<std::size_t>(g[i] - 1)];
      if (nxt < 0) {
        nxt = static_cast<int>(depth_.size());
        trie_.push_back(std::vector<int>(s, -1));
        depth_.push_back(static_cast<int>(i) + 1);
        terminal_.push_back(false);
      }
      node = trie_[static_cast<std::size_t>(node)][static_cast<std::size_t>(g[i] - 1)];
    }
    terminal_[static_cast<std::size_t>(node)] = true;
  }
  const std::size_t n = depth_.size();
  goto_.assign(n, std::vector<int>(s, 0));
  std::vector<int> fail(n, 0);
  std::deque<int> queue;
  for (std::size_t x = 0; x < s; ++x) {
    int c = trie_[0][x];
    if (c >= 0) {
      goto_[0][x] = c;
      fail[static_cast<std::size_t>(c)] = 0;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    auto uu = static_cast<std::size_t>(u);
    if (terminal_[static_cast<std::size_t>(fail[uu])]) terminal_[uu] = true;
    for (std::size_t x = 0; x < s; ++x) {
      int c = trie_[uu][x];
      if (c >= 0) {
        fail[static_cast<std::size_t>(c)] = goto_[static_cast<std::size_t>(fail[uu])][x];
        goto_[uu][x] = c;
        queue.push_back(c);
      } else {
        goto_[uu][x] = goto_[static_cast<std::size_t>(fail[uu])][x];
      }
    }
  }
}

std::optional<AvoidanceAutomaton::State> AvoidanceAutomaton::start(Letter x) const {
  ts_.check_letter(x);
  int node = goto_[0][static_cast<std::size_t>(x - 1)];
  if (terminal_[static_cast<std::size_t>(node)]) return std::nullopt;
  return State{node, x};
}

std::optional<AvoidanceAutomaton::State> AvoidanceAutomaton::step(State st, Letter x) const {
  if (!ts_.allows(st.last, x)) return std::nullopt;
  int node = goto_[static_cast<std::size_t>(st.node)][static_cast<std::size_t>(x - 1)];
  if (terminal_[static_cast<std::size_t>(node)]) return std::nullopt;
  return State{node, x};
}

std::vector<AvoidanceAutomaton::State> AvoidanceAutomaton::live_states() const {
  std::set<State> seen;
  std::vector<State> stack;
  for (Letter x = 1; x <= ts_.size(); ++x)
    if (auto st = start(x); st && seen.insert(*st).second) stack.push_back(*st);
  while (!stack.empty()) {
    State st = stack.back();
    stack.pop_back();
    for (Letter x : ts_.successors(st.last))
      if (auto nx = step(st, x); nx && seen.insert(*nx).second) stack.push_back(*nx);
  }
  return {seen.begin(), seen.end()};
}

std::vector<Integer> count_avoiding_series(const TransitionSystem& ts, const std::vector<Word>& forbidden, int n_max) {
  if (n_max < 0) throw InputError("word length index must be >= 0");
  AvoidanceAutomaton aut(ts, forbidden);
  std::map<AvoidanceAutomaton::State, Integer> cur;
  for (Letter x = 1; x <= ts.size(); ++x)
    if (auto st = aut.start(x)) cur[*st] += 1;
  std::vector<Integer> out;
  for (int n = 0;; ++n) {
    Integer total = 0;
    for (const auto& [st, c] : cur) total += c;
    out.push_back(total);
    if (n == n_max) break;
    std::map<AvoidanceAutomaton::State, Integer> next;
    for (const auto& [st, c] : cur)
      for (Letter x : ts.successors(st.last))
        if (auto nx = aut.step(st, x)) next[*nx] += c;
    cur = std::move(next);
  }
  return out;
}

Integer count_avoiding(const TransitionSystem& ts, const std::vector<Word>& forbidden, int n) {
  return count_avoiding_series(ts, forbidden, n).back();
}

Integer count_avoiding(const TransitionSystem& ts, const Word& gamma, int n) {
  return count_avoiding(ts, std::vector<Word>{gamma}, n);
}

Integer count_avoiding_brute(const TransitionSystem& ts, const std::vector<Word>& forbidden, int n, std::size_t cap) {
  Integer total = 0;
  std::size_t seen = 0;
  for_each_word(ts, n, nullptr, [&](const Word& w) {
    if (++seen > cap) throw ResourceError("brute-force count exceeds cap");
    for (const auto& g : forbidden)
      if (g.size() <= w.size() && contains_match(g, w)) return true;
    total += 1;
    return true;
  });
  return total;
}

// ---------------------------------------------------------------- spectral radius

namespace {

std::vector<std::vector<int>> strongly_connected(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp_of(n, -1);
  std::vector<bool> on(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int counter = 0;
  // Iterative Tarjan.
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = true;
    while (!call.empty()) {
      auto& [v, it] = call.back();
      if (it < adj[v].size()) {
        int w = adj[v][it++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      int finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }
  return comps;
}

}  // namespace

SpectralEnclosure spectral_radius(const std::vector<std::vector<int>>& M, const Rational& width) {
  const int n = static_cast<int>(M.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(M[i].size()) != n) throw InputError("matrix must be square");
    for (int j = 0; j < n; ++j) {
      if (M[i][j] < 0) throw InputError("matrix must be nonnegative");
      if (M[i][j] > 0) adj[i].push_back(j);
    }
  }
  SpectralEnclosure out{Rational(0), Rational(0), 0};
  for (const auto& comp : strongly_connected(adj)) {
    const int c = static_cast<int>(comp.size());
    std::vector<int> local(n, -1);
    for (int i = 0; i < c; ++i) local[comp[i]] = i;
    bool cyclic = c > 1 || M[comp[0]][comp[0]] > 0;
    if (!cyclic) continue;
    // (M + I) restricted to the component is primitive.
    std::vector<std::vector<std::pair<int, int>>> rows(c);
    for (int i = 0; i < c; ++i) {
      rows[i].push_back({i, 1});
      for (int j : adj[comp[i]])
        if (local[j] >= 0) rows[i].push_back({local[j], M[comp[i]][j]});
    }
    std::vector<Integer> x(c, Integer(1)), y(c);
    Rational lo, hi;
    for (int it = 0;; ++it) {
      if (it > 2'000'000) throw ResourceError("spectral radius iteration did not converge");
      for (int i = 0; i < c; ++i) {
        y[i] = 0;
        for (auto [j, w] : rows[i]) y[i] += w * x[j];
      }
      lo = Rational(y[0], x[0]);
      hi = lo;
      for (int i = 1; i < c; ++i) {
        Rational r(y[i], x[i]);
        if (r < lo) lo = r;
        if (r > hi) hi = r;
      }
      lo.canonicalize();
      hi.canonicalize();
      out.iterations = std::max(out.iterations, it + 1);
      if (hi - lo < width) break;
      std::size_t bits = 0;
      for (const auto& v : y) bits = std::max(bits, mpz_sizeinbase(v.get_mpz_t(), 2));
      if (bits > 512) {
        mp_bitcnt_t shift = bits - 256;
        for (auto& v : y) {
          mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), shift);
          v += 1;
        }
      }
      std::swap(x, y);
    }
    lo -= 1;
    hi -= 1;
    if (lo > out.rho_lo) out.rho_lo = lo;
    if (hi > out.rho_hi) out.rho_hi = hi;
  }
  return out;
}

// ---------------------------------------------------------------- certified logs

namespace {

constexpr mpfr_prec_t kPrec = 128;

struct Mpfr {
  mpfr_t v;
  Mpfr() { mpfr_init2(v, kPrec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

void log_of(Mpfr& out, const Rational& x, mpfr_rnd_t rnd) {
  if (x <= 0) throw InputError("logarithm of a nonpositive number");
  Mpfr t;
  mpfr_set_q(t.v, x.get_mpq_t(), rnd);
  mpfr_log(out.v, t.v, rnd);
}

}  // namespace

RealEnclosure log_enclosure(const Rational& lo, const Rational& hi) {
  Mpfr a, b, m;
  log_of(a, lo, MPFR_RNDD);
  log_of(b, hi, MPFR_RNDU);
  log_of(m, (lo + hi) / 2, MPFR_RNDN);
  return {mpfr_get_d(a.v, MPFR_RNDD), mpfr_get_d(b.v, MPFR_RNDU), mpfr_get_d(m.v, MPFR_RNDN)};
}

RealEnclosure log_ratio(const Rational& a_lo, const Rational& a_hi, const Rational& b_lo, const Rational& b_hi) {
  if (b_lo <= 1 && b_hi >= 1) throw InputError("log ratio denominator interval contains 1");
  Mpfr la_lo, la_hi, lb_lo, lb_hi;
  log_of(la_lo, a_lo, MPFR_RNDD);
  log_of(la_hi, a_hi, MPFR_RNDU);
  log_of(lb_lo, b_lo, MPFR_RNDD);
  log_of(lb_hi, b_hi, MPFR_RNDU);
  Mpfr q, best_lo, best_hi;
  mpfr_set_inf(best_lo.v, 1);
  mpfr_set_inf(best_hi.v, -1);
  for (auto* num : {&la_lo, &la_hi})
    for (auto* den : {&lb_lo, &lb_hi}) {
      mpfr_div(q.v, num->v, den->v, MPFR_RNDD);
      mpfr_min(best_lo.v, best_lo.v, q.v, MPFR_RNDD);
      mpfr_div(q.v, num->v, den->v, MPFR_RNDU);
      mpfr_max(best_hi.v, best_hi.v, q.v, MPFR_RNDU);
    }
  Mpfr ma, mb, mid;
  log_of(ma, (a_lo + a_hi) / 2, MPFR_RNDN);
  log_of(mb, (b_lo + b_hi) / 2, MPFR_RNDN);
  mpfr_div(mid.v, ma.v, mb.v, MPFR_RNDN);
  return {mpfr_get_d(best_lo.v, MPFR_RNDD), mpfr_get_d(best_hi.v, MPFR_RNDU), mpfr_get_d(mid.v, MPFR_RNDN)};
}

DimensionResult spectral_dimension(const MarkovPartition& p, const std::vector<Word>& forbidden, int count_terms) {
  if (p.map().kind() != ExpandingCircleMap::Kind::linear || p.min_diameter() != p.max_diameter())
    throw InputError("spectral dimension needs a uniform partition of a linear map");
  AvoidanceAutomaton aut(p.ts(), forbidden);
  auto states = aut.live_states();
  const std::size_t n = states.size();
  std::map<AvoidanceAutomaton::State, int> idx;
  for (std::size_t i = 0; i < n; ++i) idx[states[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> M(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (Letter x : p.ts().successors(states[i].last))
      if (auto nx = aut.step(states[i], x)) M[i][static_cast<std::size_t>(idx.at(*nx))] += 1;
  DimensionResult r;
  r.rho = spectral_radius(M, Rational(1, 10'000'000'000L));
  const Rational m(p.map().degree());
  if (r.rho.rho_hi <= 0) {
    r.dimension_lo = r.dimension_hi = r.dimension = 0;
  } else if (r.rho.rho_lo < 1) {
    // Subexponential growth: zero dimension when rho < 1 is impossible for nonzero rho.
    auto e = log_ratio(std::max(r.rho.rho_lo, Rational(1)), r.rho.rho_hi, m, m);
    r.dimension_lo = 0;
    r.dimension_hi = e.hi;
    r.dimension = e.mid;
  } else {
    auto e = log_ratio(r.rho.rho_lo, r.rho.rho_hi, m, m);
    r.dimension_lo = e.lo;
    r.dimension_hi = e.hi;
    r.dimension = e.mid;
  }
  if (count_terms > 0) r.counts = count_avoiding_series(p.ts(), forbidden, count_terms);
  return r;
}

}  // namespace symdyn

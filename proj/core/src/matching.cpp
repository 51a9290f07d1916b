#include "symdyn/matching.hpp"

#include "symdyn/errors.hpp"

#include <algorithm>

namespace symdyn {

std::vector<long> find_matches(const Word& gamma, const Word& alpha) {
  std::vector<long> heads;
  const std::size_t len = gamma.size();
  if (len == 0 || len > alpha.size()) return heads;
  for (std::size_t pos = 0; pos + len <= alpha.size(); ++pos) {
    std::size_t t = 0;
    while (t < len && alpha[pos + t] == gamma[t]) ++t;
    if (t == len) heads.push_back(alpha.start_index() + static_cast<long>(pos));
  }
  return heads;
}

bool contains_match(const Word& gamma, const Word& alpha) {
  const auto& a = alpha.letters();
  const auto& g = gamma.letters();
  return !g.empty() && std::search(a.begin(), a.end(), g.begin(), g.end()) != a.end();
}

std::vector<PartialMatch> find_partial_matches(const Word& gamma, const Word& alpha) {
  std::vector<PartialMatch> out;
  const std::size_t len_a = alpha.size();
  const std::size_t len_g = gamma.size();
  if (len_a == 0 || len_g < 2) return out;
  std::size_t longest = std::min(len_a, len_g - 1);
  for (std::size_t m = longest; m >= 1; --m) {
    std::size_t pos = len_a - m;
    bool ok = true;
    for (std::size_t t = 0; t < m && ok; ++t) ok = alpha[pos + t] == gamma[t];
    if (ok) out.push_back({alpha.start_index() + static_cast<long>(pos), m});
  }
  return out;
}

std::string to_string(TailKind kind) {
  switch (kind) {
    case TailKind::none: return "none";
    case TailKind::general_block: return "general-block";
    case TailKind::double_general_block: return "double-general-block";
  }
  return "unknown";
}

std::string to_string(ExtensionCase c) {
  switch (c) {
    case ExtensionCase::one: return "1";
    case ExtensionCase::two: return "2";
    case ExtensionCase::three_a: return "3A";
    case ExtensionCase::three_b: return "3B";
  }
  return "?";
}

ExceptionalForm exceptional_shape(const TransitionSystem& ts, const Word& gamma) {
  const std::size_t len = gamma.size();
  std::vector<std::size_t> nd_before(len + 1, 0);
  for (std::size_t t = 0; t < len; ++t) {
    ts.check_letter(gamma[t]);
    nd_before[t + 1] = nd_before[t] + (ts.degenerate(gamma[t]) ? 0 : 1);
  }
  auto nondeg = [&](std::size_t lo, std::size_t hi) { return nd_before[hi] - nd_before[lo]; };
  for (std::size_t p = 1; p < len; ++p) {
    if (nondeg(0, p) != 1) continue;
    std::size_t copies = 1;
    while ((copies + 1) * p <= len) {
      bool same = true;
      for (std::size_t t = 0; t < p && same; ++t) same = gamma[copies * p + t] == gamma[t];
      if (!same) break;
      ++copies;
    }
    ExceptionalForm form;
    for (std::size_t m = 1; m <= copies && m * p < len; ++m) {
      const std::size_t lo = m * p;
      // Equivalent to a a on the overlapping prefix?
      const std::size_t overlap = std::min(len - lo, 2 * p);
      bool equivalent = true;
      for (std::size_t t = 0; t < overlap && equivalent; ++t) equivalent = gamma[lo + t] == gamma[t % p];
      if (equivalent) continue;
      const std::size_t count = nondeg(lo, len);
      bool general = count == 1;
      bool dbl = false;
      if (count == 2) {
        for (std::size_t t = lo; t + 1 < len; ++t) {
          if (!ts.degenerate(gamma[t]) && !ts.degenerate(gamma[t + 1])) dbl = true;
        }
      }
      if (!general && !dbl) continue;
      if (!form.is_exceptional || (general && !form.general_tail)) {
        form.repeated_block = gamma.prefix(p);
        form.copies = m;
        form.tail_kind = general ? TailKind::general_block : TailKind::double_general_block;
      }
      form.is_exceptional = true;
      form.general_tail = form.general_tail || general;
      form.double_tail = form.double_tail || dbl;
    }
    if (form.is_exceptional) return form;
  }
  return {};
}

ExceptionalForm detect_exceptional(const TransitionSystem& ts, const Word& gamma) {
  const int s = ts.size();
  require_valid_word(ts, gamma, "gamma");
  if (gamma.size() < 2) throw InputError("gamma must have at least two letters");
  std::size_t n = gamma.size() - 1;
  if (static_cast<long>(n) < 8L * s - 4) {
    throw InputError("gamma is an " + std::to_string(n) + "-string but the extension needs n >= 8s-4 = " +
                     std::to_string(8 * s - 4));
  }
  if (ts.degenerate(gamma[n - 1])) throw InputError("gamma_{n-1} is degenerate");
  return exceptional_shape(ts, gamma);
}

namespace {

// Forced letters after a degenerate letter, ending with the first nondegenerate one.
Word forced_run(const TransitionSystem& ts, Letter from) {
  Word run;
  Letter cur = from;
  while (ts.degenerate(cur)) {
    cur = ts.forced_successor(cur);
    run.push_back(cur);
  }
  return run;
}

Letter pick_avoiding(const TransitionSystem& ts, Letter prev, Letter avoid) {
  for (Letter x : ts.successors(prev)) {
    if (x != avoid) return x;
  }
  throw DefectError("no admissible letter after " + std::to_string(prev));
}

Letter smallest_successor(const TransitionSystem& ts, Letter prev) { return ts.successors(prev).front(); }

Letter gamma_at(const Word& gamma, std::size_t index) {
  if (index >= gamma.size()) throw DefectError("case analysis stepped past the end of gamma");
  return gamma[index];
}

// Heads are 0-based positions in alpha. Returns true iff every head dies inside ext
// without completing.
bool kills_all_heads(const Word& gamma, const Word& alpha, const std::vector<std::size_t>& heads, const Word& ext) {
  const std::size_t n = gamma.size() - 1;
  std::vector<std::size_t> live = heads;
  std::size_t pos = alpha.size();
  for (std::size_t t = 0; t < ext.size() && !live.empty(); ++t, ++pos) {
    std::vector<std::size_t> next;
    for (std::size_t h : live) {
      std::size_t idx = pos - h;
      if (gamma[idx] != ext[t]) continue;
      if (idx == n) return false;
      next.push_back(h);
    }
    live = std::move(next);
  }
  return live.empty();
}

// Letters b such that last + b ends with a nondegenerate letter at which we may deviate:
// the forced run from `last` (if degenerate) followed by one chosen letter.
Word deflect(const TransitionSystem& ts, Letter last, const std::function<Letter(std::size_t)>& avoid_at) {
  Word out = ts.degenerate(last) ? forced_run(ts, last) : Word{};
  Letter anchor = out.empty() ? last : out.back();
  out.push_back(pick_avoiding(ts, anchor, avoid_at(out.size())));
  return out;
}

void search_pairs(const TransitionSystem& ts, const Word& alpha, std::size_t max_len,
                  const std::function<bool(const Word&, const Word&)>& visit) {
  std::vector<Word> firsts;
  for (std::size_t l = 1; l <= max_len; ++l) {
    Word seed{alpha.back()};
    for_each_word(ts, static_cast<int>(l), &seed, [&](const Word& w) {
      firsts.push_back(w.suffix_from(1));
      return true;
    });
  }
  for (const Word& b0 : firsts) {
    for (std::size_t l = 1; l <= max_len; ++l) {
      Word seed{b0.back()};
      bool go_on = true;
      for_each_word(ts, static_cast<int>(l), &seed, [&](const Word& w) {
        go_on = visit(b0, w.suffix_from(1));
        return go_on;
      });
      if (!go_on) return;
    }
  }
}

}  // namespace

ExtensionPair no_matching_extend(const TransitionSystem& ts, const Word& gamma, const Word& alpha) {
  ExceptionalForm form = detect_exceptional(ts, gamma);
  require_valid_word(ts, alpha, "alpha");
  if (alpha.size() < gamma.size()) {
    throw InputError("alpha is shorter than gamma (the extension needs N >= n)");
  }
  if (form.is_exceptional) throw InputError("gamma has an exceptional form and cannot be extended past");
  if (contains_match(gamma, alpha)) throw InputError("gamma already matches alpha");

  const std::size_t N = alpha.size() - 1;
  auto partial = find_partial_matches(gamma, alpha);
  std::vector<std::size_t> heads;
  for (const auto& pm : partial) heads.push_back(static_cast<std::size_t>(pm.head - alpha.start_index()));

  ExtensionPair out;
  const Letter last = alpha.back();

  if (heads.empty()) {
    out.extension_case = ExtensionCase::one;
    out.b0 = Word{smallest_successor(ts, last)};
    out.b1 = Word{smallest_successor(ts, out.b0.back())};
  } else if (heads.size() == 1) {
    out.extension_case = ExtensionCase::two;
    const std::size_t matched = N - heads[0] + 1;
    out.b0 = deflect(ts, last, [&](std::size_t offset) { return gamma_at(gamma, matched + offset); });
    out.b1 = Word{smallest_successor(ts, out.b0.back())};
  } else {
    const std::size_t i = heads[0];
    const std::size_t p = heads[1] - heads[0];
    const std::size_t L = N - i + 1;  // letters of gamma matched at head i
    const std::size_t r = (L - 1) % p;
    Word c = gamma.prefix(p);
    auto periodic = [&](std::size_t idx) { return c[idx % p]; };

    if (is_general_block(ts, c)) {
      out.extension_case = ExtensionCase::three_a;
      out.b0 = deflect(ts, last, [&](std::size_t offset) { return periodic(r + 1 + offset); });
      Word gi_b0 = alpha.suffix_from(i) + out.b0;
      if (gi_b0.size() <= gamma.size() && gamma.starts_with(gi_b0)) {
        const std::size_t next = gi_b0.size();
        out.b1 = deflect(ts, out.b0.back(), [&](std::size_t offset) { return gamma_at(gamma, next + offset); });
      } else {
        out.b1 = Word{smallest_successor(ts, out.b0.back())};
      }
    } else {
      out.extension_case = ExtensionCase::three_b;
      out.b0 = deflect(ts, last, [&](std::size_t offset) { return gamma_at(gamma, L + offset); });
      // Heads at or beyond the second one follow the period of c.
      std::vector<std::size_t> later(heads.begin() + 1, heads.end());
      bool later_alive = !kills_all_heads(gamma, alpha, later, out.b0);
      bool aligned = true;
      for (std::size_t t = 0; t < out.b0.size(); ++t) aligned = aligned && out.b0[t] == periodic(r + 1 + t);
      if (later_alive && aligned) {
        const std::size_t base = r + 1 + out.b0.size();
        out.b1 = deflect(ts, out.b0.back(), [&](std::size_t offset) { return periodic(base + offset); });
      } else {
        out.b1 = Word{smallest_successor(ts, out.b0.back())};
      }
    }
  }

  const std::size_t s = static_cast<std::size_t>(ts.size());
  if (out.b0.size() > s || out.b1.size() > s || !kills_all_heads(gamma, alpha, heads, out.joined())) {
    bool found = false;
    search_pairs(ts, alpha, s, [&](const Word& b0, const Word& b1) {
      if (!kills_all_heads(gamma, alpha, heads, b0 + b1)) return true;
      out.b0 = b0;
      out.b1 = b1;
      out.repaired = true;
      found = true;
      return false;
    });
    if (!found) {
      throw DefectError("no extension pair of length <= s avoids gamma " + format_word(gamma, ts.size()) +
                        " after alpha " + format_word(alpha, ts.size()));
    }
  }
  return out;
}

std::optional<Word> find_completing_continuation(const TransitionSystem& ts, const Word& gamma, const Word& word,
                                                 std::size_t anchor, std::size_t horizon) {
  const std::size_t len = gamma.size();
  if (len == 0 || word.empty()) return std::nullopt;
  const std::size_t n = len - 1;
  std::vector<std::size_t> live;
  const std::size_t last_head = std::min(anchor, word.size() - 1);
  for (std::size_t h = 0; h <= last_head; ++h) {
    std::size_t t = 0;
    while (t < len && h + t < word.size() && word[h + t] == gamma[t]) ++t;
    if (t == len) return Word{};
    if (h + t == word.size()) live.push_back(h);
  }
  Word beta;
  std::function<bool(const std::vector<std::size_t>&)> dfs = [&](const std::vector<std::size_t>& heads) -> bool {
    if (heads.empty() || beta.size() == horizon) return false;
    const std::size_t pos = word.size() + beta.size();
    Letter prev = beta.empty() ? word.back() : beta.back();
    for (Letter x : ts.successors(prev)) {
      std::vector<std::size_t> next;
      bool complete = false;
      for (std::size_t h : heads) {
        if (gamma[pos - h] != x) continue;
        if (pos - h == n) complete = true;
        next.push_back(h);
      }
      if (next.empty()) continue;
      beta.push_back(x);
      if (complete || dfs(next)) return true;
      beta.pop_back();
    }
    return false;
  };
  if (dfs(live)) return beta;
  return std::nullopt;
}

bool certify_extension(const TransitionSystem& ts, const Word& gamma, const Word& alpha, const Word& extension,
                       std::size_t horizon) {
  if (alpha.empty()) return true;
  return !find_completing_continuation(ts, gamma, alpha + extension, alpha.size() - 1, horizon).has_value();
}

std::vector<ExtensionPair> exhaustive_extensions(const TransitionSystem& ts, const Word& gamma, const Word& alpha,
                                                 std::size_t max_len) {
  require_valid_word(ts, alpha, "alpha");
  std::vector<ExtensionPair> out;
  const std::size_t n = gamma.size() - 1;
  search_pairs(ts, alpha, max_len, [&](const Word& b0, const Word& b1) {
    if (certify_extension(ts, gamma, alpha, b0 + b1, n)) {
      ExtensionPair pair;
      pair.b0 = b0;
      pair.b1 = b1;
      out.push_back(pair);
    }
    return true;
  });
  return out;
}

void check_separation(const TransitionSystem& ts, const std::vector<Word>& gammas) {
  const std::size_t twice_s = 2 * static_cast<std::size_t>(ts.size());
  for (std::size_t a = 0; a < gammas.size(); ++a) {
    for (std::size_t b = 0; b < gammas.size(); ++b) {
      if (a == b) continue;
      const Word& g = gammas[a];
      const Word& h = gammas[b];
      const std::size_t q = g.size() - 1;
      if (q < twice_s) throw InputError("targets are too short for separation (need q >= 2s)");
      const std::size_t overlap = q - twice_s + 1;
      for (std::size_t d = 0; d <= twice_s; ++d) {
        bool same = true;
        for (std::size_t t = 0; t < overlap && same; ++t) same = g[d + t] == h[t];
        if (same) {
          throw InputError("targets " + std::to_string(a) + " and " + std::to_string(b) +
                           " are not separated: shift by " + std::to_string(d) + " agrees on " +
                           std::to_string(overlap) + " letters");
        }
      }
    }
  }
}

SerialExtension serial_extend(const TransitionSystem& ts, const std::vector<Word>& gammas, const Word& alpha) {
  if (gammas.empty()) return {};
  const std::size_t len = gammas.front().size();
  for (const Word& g : gammas) {
    if (g.size() != len) throw InputError("all targets must have the same length");
    require_valid_word(ts, g, "target");
  }
  const std::size_t q = len - 1;
  const std::size_t P = gammas.size();
  const std::size_t s = static_cast<std::size_t>(ts.size());
  if (q < 2 * s * P + 1) {
    throw InputError("targets are " + std::to_string(q) + "-strings but serial extension needs q >= 2sP+1 = " +
                     std::to_string(2 * s * P + 1));
  }
  check_separation(ts, gammas);
  for (std::size_t j = 0; j < P; ++j) {
    if (contains_match(gammas[j], alpha)) throw InputError("target " + std::to_string(j) + " already matches alpha");
  }

  SerialExtension out;
  std::vector<std::size_t> remaining(P);
  for (std::size_t j = 0; j < P; ++j) remaining[j] = j;
  Word current = alpha;
  bool first_pass = true;
  while (!remaining.empty()) {
    std::vector<std::size_t> keep;
    long best_head = 0;
    std::size_t best = P;
    for (std::size_t j : remaining) {
      auto pm = find_partial_matches(gammas[j], current);
      if (pm.empty()) {
        if (first_pass) out.skipped.push_back(j);
        continue;
      }
      keep.push_back(j);
      if (best == P || pm.front().head < best_head) {
        best = j;
        best_head = pm.front().head;
      }
    }
    first_pass = false;
    if (best == P) break;
    ExtensionPair pair = no_matching_extend(ts, gammas[best], current);
    Word next = current + pair.joined();
    for (std::size_t j : keep) {
      if (j != best && contains_match(gammas[j], next)) {
        throw DefectError("serial extension created a match of target " + std::to_string(j));
      }
    }
    out.steps.push_back({best, best_head, pair});
    out.extension.append(pair.joined());
    current = std::move(next);
    keep.erase(std::find(keep.begin(), keep.end(), best));
    remaining = std::move(keep);
  }
  for (std::size_t j = 0; j < P; ++j) {
    if (!certify_extension(ts, gammas[j], alpha, out.extension, q)) {
      throw DefectError("serial extension fails the continuation oracle for target " + std::to_string(j));
    }
  }
  return out;
}

}  // namespace symdyn

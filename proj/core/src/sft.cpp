#include "symdyn/sft.hpp"

#include "symdyn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace symdyn {

Word Word::prefix(std::size_t count) const {
  count = std::min(count, letters_.size());
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<long>(count)), start_);
}

Word Word::substr(std::size_t pos, std::size_t count) const {
  pos = std::min(pos, letters_.size());
  count = std::min(count, letters_.size() - pos);
  auto first = letters_.begin() + static_cast<long>(pos);
  return Word(std::vector<Letter>(first, first + static_cast<long>(count)), start_ + static_cast<long>(pos));
}

Word Word::suffix_from(std::size_t pos) const { return substr(pos, letters_.size()); }

bool Word::starts_with(const Word& other) const {
  return other.size() <= size() && std::equal(other.letters_.begin(), other.letters_.end(), letters_.begin());
}

std::string format_word(const Word& w, int s) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (s > 9 && i > 0) out.push_back(' ');
    out += std::to_string(w[i]);
  }
  return out;
}

Word parse_word(std::string_view text, int s) {
  std::vector<Letter> letters;
  bool spaced = text.find(' ') != std::string_view::npos || text.find(',') != std::string_view::npos;
  if (s > 9 || spaced) {
    std::string buf(text);
    std::replace(buf.begin(), buf.end(), ',', ' ');
    std::istringstream in(buf);
    std::string token;
    while (in >> token) {
      if (!std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw InputError("malformed word: " + std::string(text));
      }
      letters.push_back(std::stoi(token));
    }
  } else {
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("malformed word: " + std::string(text));
      letters.push_back(c - '0');
    }
  }
  for (Letter x : letters) {
    if (x < 1 || x > s) throw InputError("letter " + std::to_string(x) + " outside 1.." + std::to_string(s));
  }
  return Word(std::move(letters));
}

TransitionSystem::TransitionSystem(std::vector<std::vector<int>> matrix) : matrix_(std::move(matrix)) {
  s_ = static_cast<int>(matrix_.size());
  if (s_ < 2) throw InputError("transition system needs at least two letters");
  successors_.resize(static_cast<std::size_t>(s_));
  for (int i = 0; i < s_; ++i) {
    if (static_cast<int>(matrix_[i].size()) != s_) throw InputError("transition matrix is not square");
    for (int j = 0; j < s_; ++j) {
      int a = matrix_[i][j];
      if (a != 0 && a != 1) throw InputError("transition matrix entries must be 0 or 1");
      if (a) successors_[i].push_back(j + 1);
    }
    if (successors_[i].empty()) {
      throw InputError("letter " + std::to_string(i + 1) + " has no valid successor");
    }
  }
  if (!has_degenerate_letters()) return;
  bool any_nondegenerate = false;
  for (int i = 1; i <= s_; ++i) any_nondegenerate |= !degenerate(i);
  if (!any_nondegenerate) throw InputError("every letter is degenerate");
  // Forced successor chains must terminate at a nondegenerate letter.
  for (int i = 1; i <= s_; ++i) {
    Letter cur = i;
    for (int steps = 0; degenerate(cur); ++steps) {
      if (steps > s_) {
        throw InputError("degenerate letters form a cycle through letter " + std::to_string(i));
      }
      cur = forced_successor(cur);
    }
  }
}

TransitionSystem TransitionSystem::full_shift(int s) {
  return TransitionSystem(std::vector<std::vector<int>>(static_cast<std::size_t>(s), std::vector<int>(static_cast<std::size_t>(s), 1)));
}

bool TransitionSystem::has_degenerate_letters() const noexcept {
  return std::any_of(successors_.begin(), successors_.end(), [](const auto& v) { return v.size() == 1; });
}

void TransitionSystem::check_letter(Letter x) const {
  if (x < 1 || x > s_) throw InputError("letter " + std::to_string(x) + " outside 1.." + std::to_string(s_));
}

LetterClassification classify_letters(const TransitionSystem& ts) {
  LetterClassification out;
  for (Letter i = 1; i <= ts.size(); ++i) {
    out.degenerate.push_back(ts.degenerate(i));
    out.successor_sets.push_back(ts.successors(i));
  }
  return out;
}

bool is_valid_word(const TransitionSystem& ts, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) ts.check_letter(w[i]);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (!ts.allows(w[i], w[i + 1])) return false;
  }
  return true;
}

void require_valid_word(const TransitionSystem& ts, const Word& w, std::string_view what) {
  if (!is_valid_word(ts, w)) {
    throw InputError(std::string(what) + " is not a valid word: " + format_word(w, ts.size()));
  }
}

namespace {

bool extend_rec(const TransitionSystem& ts, Word& w, std::size_t target, const std::function<bool(const Word&)>& visit) {
  if (w.size() == target) return visit(w);
  for (Letter x : ts.successors(w.back())) {
    w.push_back(x);
    bool go_on = extend_rec(ts, w, target, visit);
    w.pop_back();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace

void for_each_word(const TransitionSystem& ts, int n, const Word* prefix, const std::function<bool(const Word&)>& visit) {
  if (n < 0) throw InputError("word index must be non-negative");
  if (prefix && !prefix->empty()) {
    require_valid_word(ts, *prefix, "prefix");
    Word w = *prefix;
    extend_rec(ts, w, prefix->size() + static_cast<std::size_t>(n), visit);
    return;
  }
  for (Letter first = 1; first <= ts.size(); ++first) {
    Word w{first};
    if (!extend_rec(ts, w, static_cast<std::size_t>(n) + 1, visit)) return;
  }
}

std::vector<Word> enumerate_words(const TransitionSystem& ts, int n, const Word* prefix, std::size_t cap) {
  std::vector<Word> out;
  for_each_word(ts, n, prefix, [&](const Word& w) {
    if (out.size() >= cap) {
      throw ResourceError("word enumeration exceeds cap of " + std::to_string(cap) + " words");
    }
    out.push_back(w);
    return true;
  });
  return out;
}

Integer count_words(const TransitionSystem& ts, int n) {
  if (n < 0) throw InputError("word index must be non-negative");
  const int s = ts.size();
  std::vector<Integer> v(static_cast<std::size_t>(s), 1);
  for (int step = 0; step < n; ++step) {
    std::vector<Integer> next(static_cast<std::size_t>(s), 0);
    for (int i = 0; i < s; ++i) {
      for (Letter j : ts.successors(i + 1)) next[i] += v[j - 1];
    }
    v = std::move(next);
  }
  Integer total = 0;
  for (const auto& x : v) total += x;
  return total;
}

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::block: return "block";
    case SegmentKind::general_block: return "general-block";
    case SegmentKind::reverse_block: return "reverse-block";
    case SegmentKind::double_general_block: return "double-general-block";
    case SegmentKind::open: return "open";
  }
  return "unknown";
}

BlockDecomposition block_decompose(const TransitionSystem& ts, const Word& w) {
  BlockDecomposition out;
  const std::size_t len = w.size();
  for (std::size_t i = 0; i < len; ++i) {
    ts.check_letter(w[i]);
    if (!ts.degenerate(w[i])) out.nondegenerate_positions.push_back(i);
  }
  std::size_t start = 0;
  for (std::size_t pos : out.nondegenerate_positions) {
    out.segments.push_back({start, pos, SegmentKind::block});
    start = pos + 1;
  }
  if (start < len) out.segments.push_back({start, len - 1, SegmentKind::open});

  const auto& nd = out.nondegenerate_positions;
  for (std::size_t k = 0; k < nd.size(); ++k) {
    std::size_t lo = k == 0 ? 0 : nd[k - 1] + 1;
    std::size_t hi = k + 1 == nd.size() ? len - 1 : nd[k + 1] - 1;
    out.general_blocks.push_back({lo, hi, SegmentKind::general_block});
    if (k + 1 < nd.size() && nd[k + 1] == nd[k] + 1) {
      std::size_t dhi = k + 2 == nd.size() ? len - 1 : nd[k + 2] - 1;
      out.double_general_blocks.push_back({lo, dhi, SegmentKind::double_general_block});
    }
  }
  return out;
}

namespace {

std::vector<std::size_t> nondegenerate_positions(const TransitionSystem& ts, const Word& w) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    ts.check_letter(w[i]);
    if (!ts.degenerate(w[i])) out.push_back(i);
  }
  return out;
}

}  // namespace

bool is_general_block(const TransitionSystem& ts, const Word& w) {
  return nondegenerate_positions(ts, w).size() == 1;
}

bool is_block(const TransitionSystem& ts, const Word& w) {
  auto nd = nondegenerate_positions(ts, w);
  return nd.size() == 1 && nd.front() + 1 == w.size();
}

bool is_reverse_block(const TransitionSystem& ts, const Word& w) {
  auto nd = nondegenerate_positions(ts, w);
  return nd.size() == 1 && nd.front() == 0;
}

bool is_double_general_block(const TransitionSystem& ts, const Word& w) {
  auto nd = nondegenerate_positions(ts, w);
  return nd.size() == 2 && nd[1] == nd[0] + 1;
}

int max_block_length(const TransitionSystem& ts) {
  const int s = ts.size();
  int longest = 0;
  for (Letter i = 1; i <= s; ++i) {
    int length = 0;
    for (Letter cur = i; ts.degenerate(cur); cur = ts.forced_successor(cur)) ++length;
    longest = std::max(longest, length);
  }
  int b = longest + 1;
  if (b > s) throw DefectError("maximal block length exceeds alphabet size");
  return b;
}

}  // namespace symdyn

#pragma once

#include "symdyn/rational.hpp"

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

using Letter = int;

// Finite letter sequence alpha_h ... alpha_t; letters are 1-based.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters, long start_index = 0)
      : letters_(std::move(letters)), start_(start_index) {}

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  // Position based access, 0 <= pos < size().
  Letter operator[](std::size_t pos) const { return letters_[pos]; }
  // Index based access, start_index() <= i <= last_index().
  Letter at_index(long i) const { return letters_.at(static_cast<std::size_t>(i - start_)); }
  long start_index() const noexcept { return start_; }
  long last_index() const noexcept { return start_ + static_cast<long>(letters_.size()) - 1; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  const std::vector<Letter>& letters() const noexcept { return letters_; }

  Word prefix(std::size_t count) const;
  Word substr(std::size_t pos, std::size_t count) const;
  Word suffix_from(std::size_t pos) const;
  void push_back(Letter x) { letters_.push_back(x); }
  void pop_back() { letters_.pop_back(); }
  void append(const Word& other) { letters_.insert(letters_.end(), other.letters_.begin(), other.letters_.end()); }
  bool starts_with(const Word& other) const;

  friend Word operator+(Word a, const Word& b) {
    a.append(b);
    return a;
  }
  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  std::vector<Letter> letters_;
  long start_ = 0;
};

// Digits when s <= 9, space separated integers otherwise.
std::string format_word(const Word& w, int s);
Word parse_word(std::string_view text, int s);

class TransitionSystem {
 public:
  TransitionSystem() = default;
  explicit TransitionSystem(std::vector<std::vector<int>> matrix);
  static TransitionSystem full_shift(int s);

  int size() const noexcept { return s_; }
  bool allows(Letter i, Letter j) const { return matrix_[i - 1][j - 1] != 0; }
  const std::vector<Letter>& successors(Letter i) const { return successors_[i - 1]; }
  bool degenerate(Letter i) const { return successors_[i - 1].size() == 1; }
  Letter forced_successor(Letter i) const { return successors_[i - 1].front(); }
  bool has_degenerate_letters() const noexcept;
  const std::vector<std::vector<int>>& matrix() const noexcept { return matrix_; }
  void check_letter(Letter x) const;

  friend bool operator==(const TransitionSystem& a, const TransitionSystem& b) { return a.matrix_ == b.matrix_; }

 private:
  int s_ = 0;
  std::vector<std::vector<int>> matrix_;
  std::vector<std::vector<Letter>> successors_;
};

struct LetterClassification {
  std::vector<bool> degenerate;  // indexed by letter - 1
  std::vector<std::vector<Letter>> successor_sets;
};

LetterClassification classify_letters(const TransitionSystem& ts);

// Throws InputError on out-of-range letters.
bool is_valid_word(const TransitionSystem& ts, const Word& w);
void require_valid_word(const TransitionSystem& ts, const Word& w, std::string_view what);

inline constexpr std::size_t kDefaultWordCap = 10'000'000;

// Valid n-strings (n+1 letters), or valid extensions of prefix by n letters.
std::vector<Word> enumerate_words(const TransitionSystem& ts, int n, const Word* prefix = nullptr,
                                  std::size_t cap = kDefaultWordCap);
// Streaming form of enumerate_words; return false from visit to stop early.
void for_each_word(const TransitionSystem& ts, int n, const Word* prefix,
                   const std::function<bool(const Word&)>& visit);
// |Sigma(n)| via matrix powers.
Integer count_words(const TransitionSystem& ts, int n);

enum class SegmentKind { block, general_block, reverse_block, double_general_block, open };
std::string to_string(SegmentKind kind);

struct Segment {
  std::size_t start;  // positions within the word, inclusive
  std::size_t end;
  SegmentKind kind;
};

struct BlockDecomposition {
  std::vector<Segment> segments;  // greedy blocks, then possibly one open segment
  std::vector<Segment> general_blocks;  // maximal general blocks, one per nondegenerate letter
  std::vector<Segment> double_general_blocks;  // maximal double general blocks
  std::vector<std::size_t> nondegenerate_positions;
};

BlockDecomposition block_decompose(const TransitionSystem& ts, const Word& w);

bool is_block(const TransitionSystem& ts, const Word& w);
bool is_reverse_block(const TransitionSystem& ts, const Word& w);
bool is_general_block(const TransitionSystem& ts, const Word& w);
bool is_double_general_block(const TransitionSystem& ts, const Word& w);

// 1 + longest run of degenerate letters.
int max_block_length(const TransitionSystem& ts);

}  // namespace symdyn

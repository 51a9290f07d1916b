#pragma once

#include "symdyn/sft.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symdyn {

// Heads i (in alpha's index space) with alpha_{i+t} = gamma_t for t = 0..n.
std::vector<long> find_matches(const Word& gamma, const Word& alpha);
bool contains_match(const Word& gamma, const Word& alpha);

struct PartialMatch {
  long head;
  std::size_t matched_length;
};

// Suffixes of alpha equal to proper prefixes of gamma, sorted by head.
std::vector<PartialMatch> find_partial_matches(const Word& gamma, const Word& alpha);

enum class TailKind { none, general_block, double_general_block };
std::string to_string(TailKind kind);

struct ExceptionalForm {
  bool is_exceptional = false;
  Word repeated_block;
  std::size_t copies = 0;
  TailKind tail_kind = TailKind::none;
  bool general_tail = false;  // form with a general block tail
  bool double_tail = false;   // form with a double general block tail
};

// Checks the eligibility preconditions and throws InputError naming the failure.
ExceptionalForm detect_exceptional(const TransitionSystem& ts, const Word& gamma);
// Shape test a..ab without length preconditions.
ExceptionalForm exceptional_shape(const TransitionSystem& ts, const Word& gamma);

enum class ExtensionCase { one, two, three_a, three_b };
std::string to_string(ExtensionCase c);

struct ExtensionPair {
  Word b0;
  Word b1;
  ExtensionCase extension_case = ExtensionCase::one;
  bool repaired = false;  // the direct case construction was replaced by a bounded search

  Word joined() const { return b0 + b1; }
};

ExtensionPair no_matching_extend(const TransitionSystem& ts, const Word& gamma, const Word& alpha);

// Brute-force oracle: a continuation beta of at most `horizon` letters such that
// word + beta contains a match of gamma with head position <= anchor, if one exists.
// Positions are 0-based offsets into word.
std::optional<Word> find_completing_continuation(const TransitionSystem& ts, const Word& gamma, const Word& word,
                                                 std::size_t anchor, std::size_t horizon);

// True iff no continuation of alpha + extension of up to `horizon` letters completes a
// match of gamma starting inside alpha.
bool certify_extension(const TransitionSystem& ts, const Word& gamma, const Word& alpha, const Word& extension,
                       std::size_t horizon);

// Every (b0, b1) with 1 <= l(b0), l(b1) <= max_len that passes the oracle at horizon n.
std::vector<ExtensionPair> exhaustive_extensions(const TransitionSystem& ts, const Word& gamma, const Word& alpha,
                                                 std::size_t max_len);

struct SerialStep {
  std::size_t gamma_index;
  long smallest_head;
  ExtensionPair pair;
};

struct SerialExtension {
  Word extension;
  std::vector<SerialStep> steps;
  std::vector<std::size_t> skipped;  // targets without partial matches when first inspected
};

// Throws InputError citing the first offending ordered pair.
void check_separation(const TransitionSystem& ts, const std::vector<Word>& gammas);

SerialExtension serial_extend(const TransitionSystem& ts, const std::vector<Word>& gammas, const Word& alpha);

}  // namespace symdyn

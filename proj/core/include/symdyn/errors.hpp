#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

// Malformed or out-of-contract input. Exit code 1 in the CLI.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A Markov partition failed one of its defining properties.
class ValidationError : public InputError {
 public:
  ValidationError(std::string property, std::string witness)
      : InputError("partition property " + property + " violated: " + witness),
        property_(std::move(property)),
        witness_(std::move(witness)) {}
  const std::string& property() const noexcept { return property_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string property_;
  std::string witness_;
};

// A request would exceed a configured enumeration or memory cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructive step that is supposed to always succeed did not.
class DefectError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The fitted-descent strategy could not keep its invariants.
class StrategyFailure : public std::runtime_error {
 public:
  StrategyFailure(int turn, const std::string& what)
      : std::runtime_error("turn " + std::to_string(turn) + ": " + what), turn_(turn) {}
  int turn() const noexcept { return turn_; }

 private:
  int turn_;
};

// Some element of a tree-like collection has no surviving children.
class CollectionDeath : public std::runtime_error {
 public:
  CollectionDeath(int level, const std::string& what)
      : std::runtime_error("collection dies at level " + std::to_string(level) + ": " + what),
        level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

}  // namespace symdyn

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "autograde/model.hpp"
#include "autograde/sexpr.hpp"

namespace autograde {

/// Thrown when a word contains a letter outside the machine's input alphabet.
class LetterNotInAlphabet : public std::runtime_error {
 public:
  LetterNotInAlphabet(SExpr letter, std::size_t index);

  const SExpr& letter() const { return letter_; }
  std::size_t index() const { return index_; }

 private:
  SExpr letter_;
  std::size_t index_;
};

inline constexpr std::size_t kDefaultPdaDepth = 1000;
inline constexpr std::size_t kDefaultTmSteps = 1000;
inline constexpr std::size_t kDefaultPdaNodeBudget = 250000;

struct RunBounds {
  std::size_t pda_depth = kDefaultPdaDepth;
  std::size_t tm_steps = kDefaultTmSteps;
  /// Cap on execution tuples generated by one PDA run. Hitting it ends the
  /// run as not accepted (and not exhausted).
  std::size_t pda_node_budget = kDefaultPdaNodeBudget;

  /// Throws std::invalid_argument unless every bound is at least 1.
  void validate() const;
};

/// Maps each letter of `word` to its index in `alphabet`.
std::vector<std::size_t> encode_word(const SymbolSet& alphabet, std::span<const SExpr> word);

// ---------------------------------------------------------------- DFA

const SExpr& run_dfa(const Dfa& m, std::span<const SExpr> word);
std::size_t run_dfa_from(const Dfa& m, std::size_t state, std::span<const std::size_t> letters);
bool accept_dfa(const Dfa& m, std::span<const SExpr> word);

// ---------------------------------------------------------------- PDA

/// Execution tuple: a state, the stack (front = top), and the unconsumed
/// input suffix, given as an offset into the word being run.
struct PdaExecTuple {
  std::size_t state;
  std::vector<std::size_t> stack;
  std::size_t consumed;

  friend bool operator==(const PdaExecTuple&, const PdaExecTuple&) = default;
};

struct PdaRun {
  bool accepted = false;
  /// Only meaningful when not accepted: true if no active leaf was left
  /// unexpanded, i.e. the answer holds for every depth bound.
  bool exhausted = false;
  std::size_t nodes = 0;  // tuples generated, root included
  bool budget_exceeded = false;
};

/// Breadth-first exploration of the execution tree to depth `depth`.
/// Tuples already generated at a smaller or equal depth are not expanded
/// again.
PdaRun run_pda(const Pda& m, std::span<const SExpr> word, std::size_t depth,
               std::size_t node_budget = kDefaultPdaNodeBudget);
bool accept_pda(const Pda& m, std::span<const SExpr> word, std::size_t depth,
                std::size_t node_budget = kDefaultPdaNodeBudget);

// ---------------------------------------------------------------- TM

enum class TmStatus { Accepted, Rejected, OutOfFuel };

const char* to_string(TmStatus s);

struct TmConfiguration {
  SExpr state;
  Word left;   // nearest-to-head first
  Word right;  // head is over right.front(); empty means blank
  TmStatus status = TmStatus::OutOfFuel;
  std::size_t steps = 0;
};

TmConfiguration run_tm(const Tm& m, std::span<const SExpr> word, std::size_t steps);
Word left_of_head(const TmConfiguration& c);
Word remove_final_nils(Word s);
Word tm_output(const Tm& m, std::span<const SExpr> word, std::size_t steps);
bool accept_tm(const Tm& m, std::span<const SExpr> word, std::size_t steps);

// ---------------------------------------------------------------- any kind

/// accept_x for whichever kind `m` is, under `bounds`.
bool accepts(const Machine& m, std::span<const SExpr> word, const RunBounds& bounds);

}  // namespace autograde

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "autograde/exec.hpp"
#include "autograde/model.hpp"

namespace autograde {

struct TestConfig {
  std::size_t num_tests = 1000;
  std::size_t max_word_len = 8;
  std::size_t exhaustive_len = 4;
  std::uint64_t seed = 0;
  RunBounds bounds;
  std::size_t max_reported = 3;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

class EmptyAlphabet : public std::invalid_argument {
 public:
  EmptyAlphabet() : std::invalid_argument("cannot generate words over an empty alphabet") {}
};

/// Test words over `alphabet`: every word of length <= exhaustive_len in
/// length-then-lexicographic order of the sorted alphabet, then seeded random
/// words (length uniform in [0, max_word_len]) up to num_tests words in total.
/// The exhaustive prefix is always emitted in full, even past num_tests.
std::vector<Word> gen_words(std::span<const SExpr> alphabet, const TestConfig& cfg);

/// nullopt when the sets are equal, otherwise the least element of the
/// symmetric difference.
std::optional<SExpr> alphabet_equal(std::span<const SExpr> a, std::span<const SExpr> b);

struct EquivVerdict {
  enum class Outcome { Equivalent, NotEquivalent, AlphabetMismatch };
  enum class Method { Decision, Testing };

  Outcome outcome = Outcome::Equivalent;
  Method method = Method::Testing;
  std::vector<Word> witnesses;           // NotEquivalent only
  std::optional<SExpr> witness_symbol;   // AlphabetMismatch only
  std::size_t words_tested = 0;

  bool equivalent() const { return outcome == Outcome::Equivalent; }
};

class KindMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Randomized language comparison: the alphabets are compared first, then
/// both machines run on gen_words over the reference alphabet. Up to
/// max_reported distinct disagreeing words are returned in generation order.
EquivVerdict test_equiv_lang(const Machine& student, const Machine& reference,
                             const TestConfig& cfg);

/// Like test_equiv_lang, but compares tm_output instead of acceptance.
EquivVerdict test_equiv_tm_output(const Tm& student, const Tm& reference, const TestConfig& cfg);

/// Complete DFA equivalence check. Returns a shortest distinguishing word
/// when the languages differ.
EquivVerdict dfa_equiv_decide(const Dfa& a, const Dfa& b);

/// True if the two machines disagree on `word` (acceptance, or output when
/// `compare_output` is set for TMs). Used to re-verify witnesses.
bool disagree(const Machine& a, const Machine& b, std::span<const SExpr> word,
              const RunBounds& bounds, bool compare_output = false);

}  // namespace autograde

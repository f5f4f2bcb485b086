#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "autograde/equiv.hpp"
#include "autograde/model.hpp"
#include "autograde/sexpr.hpp"

namespace autograde {

/// Word-valued expression over the single bound word variable.
struct WordExpr {
  enum class Kind { Var, Literal, Concat, Output };
  Kind kind = Kind::Var;
  Word literal;                 // Literal
  std::string machine;          // Output
  std::vector<WordExpr> parts;  // Concat operands, or the Output argument
};

struct Formula {
  enum class Kind { Accepts, Not, Implies, OutEq };
  Kind kind = Kind::Accepts;
  std::string machine;          // Accepts
  std::optional<MachineKind> expected_kind;  // set by the accept-x spellings
  std::vector<WordExpr> words;  // Accepts: 1, OutEq: 2
  std::vector<Formula> subs;    // Not: 1, Implies: 2
};

/// `(property <name> (w) [:option value]... <formula>)`.
///
///   formula  ::= (accepts M we) | (not f) | (implies f f) | (out= we we)
///   we       ::= w | '(letters...) | (concat we...) | (output M we)
///
/// Machine names may be written `*m*`. The alternative spellings `!`, `=>`,
/// `==`, `app`/`append`, `accept-dfa`/`accept-pda`/`accept-tm` and
/// `(remove-final-nils (left-of-head (run-tm we M)))` are read as their
/// counterparts above.
struct PropertySpec {
  std::string name;
  std::string var;
  std::vector<SExpr> alphabet;  // generator alphabet for the variable
  Formula formula;
  /// Keyword options written between the binder and the formula, e.g.
  /// `:points 10` or `:proofs? nil`. Unknown options are kept, not rejected.
  std::map<std::string, SExpr> options;
};

class PropertyError : public std::invalid_argument {
 public:
  enum class Code { Malformed, UnknownMachineName, KindMismatch, InvalidLiteral };

  PropertyError(Code code, const std::string& what) : std::invalid_argument(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Parses the surface syntax. The generator alphabet is left empty for the
/// caller to fill in.
PropertySpec parse_property(const SExpr& form);

using MachineTable = std::map<std::string, Machine, std::less<>>;

/// Canonical lookup name: upper case, surrounding `*` removed.
std::string machine_key(std::string_view name);

struct PropertyResult {
  bool passed = true;
  std::optional<Word> counterexample;
  std::string reason;  // set when evaluation itself failed on the counterexample
  std::size_t words_tested = 0;
};

/// Throws PropertyError if the formula names an unknown machine, applies
/// `output` to a non-TM, or uses a literal letter outside the generator
/// alphabet. Otherwise evaluates the formula on gen_words(alphabet, cfg)
/// and reports the first failing word.
PropertyResult check_property(const PropertySpec& p, const MachineTable& machines,
                              const TestConfig& cfg);

}  // namespace autograde

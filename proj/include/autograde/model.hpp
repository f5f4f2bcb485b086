#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "autograde/sexpr.hpp"

namespace autograde {

enum class ValidationCode {
  MissingComponent,
  UnknownComponent,
  MalformedComponent,
  DuplicateName,
  BadStartState,
  BadAcceptStates,
  BadRejectState,
  BadTransitionDomain,
  BadTransitionCodomain,
  MissingStartTransition,
  BlankMissingFromTape,
  BlankInInputAlphabet,
  InputNotSubsetOfTape,
  AcceptEqualsReject,
  AcceptRejectInDomain,
  DuplicateSymbols,
  DuplicateTransitionKey,
};

const char* to_string(ValidationCode code);

/// One validation failure. `message` is student-facing; every message for a
/// given code starts with the same fixed prefix (see validation_prefix).
struct ValidationError {
  ValidationCode code;
  std::string message;
  std::optional<SExpr> detail;
};

/// The stable leading text of messages with the given code.
std::string_view validation_prefix(ValidationCode code);

enum class MachineKind { Dfa, Pda, Tm };

const char* to_string(MachineKind kind);  // "dfa", "pda", "tm"

/// Position-indexed set of atoms with lookup by value. Declaration order is
/// preserved; indices are stable.
class SymbolSet {
 public:
  SymbolSet() = default;
  explicit SymbolSet(std::vector<SExpr> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const SExpr& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<SExpr>& items() const { return items_; }
  std::optional<std::size_t> index_of(const SExpr& atom) const;
  bool contains(const SExpr& atom) const { return index_of(atom).has_value(); }

  /// Members in canonical (sorted) order.
  std::vector<SExpr> sorted() const;

 private:
  std::vector<SExpr> items_;
  std::map<SExpr, std::size_t> index_;
};

class Dfa {
 public:
  const std::string& name() const { return name_; }
  const SymbolSet& states() const { return states_; }
  const SymbolSet& alphabet() const { return alphabet_; }
  std::size_t start() const { return start_; }
  bool is_accepting(std::size_t state) const { return accepting_[state]; }
  std::size_t next(std::size_t state, std::size_t letter) const {
    return delta_[state * alphabet_.size() + letter];
  }
  std::size_t transition_count() const { return delta_.size(); }

 private:
  friend struct ModelBuilder;
  std::string name_;
  SymbolSet states_;
  SymbolSet alphabet_;
  std::size_t start_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::size_t> delta_;  // |Q| x |Sigma|, row-major by state
};

/// One element of a PDA transition value: go to `target`, pushing
/// `push` (a stack-alphabet index) unless it is empty.
struct PdaMove {
  std::size_t target;
  std::optional<std::size_t> push;

  friend bool operator==(const PdaMove&, const PdaMove&) = default;
};

class Pda {
 public:
  const std::string& name() const { return name_; }
  const SymbolSet& states() const { return states_; }
  const SymbolSet& alphabet() const { return alphabet_; }
  const SymbolSet& stack_alphabet() const { return stack_alphabet_; }
  std::size_t start() const { return start_; }
  bool is_accepting(std::size_t state) const { return accepting_[state]; }

  /// Moves for key (state, letter|eps, top|eps). nullopt components are eps.
  /// Returns nullptr when the key is outside domain(delta).
  const std::vector<PdaMove>* moves(std::size_t state, std::optional<std::size_t> letter,
                                    std::optional<std::size_t> top) const;
  std::size_t key_count() const { return key_count_; }

 private:
  friend struct ModelBuilder;
  std::size_t slot(std::size_t state, std::optional<std::size_t> letter,
                   std::optional<std::size_t> top) const;

  std::string name_;
  SymbolSet states_;
  SymbolSet alphabet_;
  SymbolSet stack_alphabet_;
  std::size_t start_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::optional<std::vector<PdaMove>>> table_;
  std::size_t key_count_ = 0;
};

enum class Direction { Left, Right };

struct TmMove {
  std::size_t target;
  std::size_t write;  // tape-alphabet index
  Direction direction;
};

class Tm {
 public:
  const std::string& name() const { return name_; }
  const SymbolSet& states() const { return states_; }
  const SymbolSet& alphabet() const { return alphabet_; }
  const SymbolSet& tape_alphabet() const { return tape_alphabet_; }
  std::size_t start() const { return start_; }
  std::size_t accept() const { return accept_; }
  std::size_t reject() const { return reject_; }
  std::size_t blank() const { return blank_; }

  /// nullptr when (state, symbol) has no transition.
  const TmMove* move(std::size_t state, std::size_t symbol) const {
    const auto& m = delta_[state * tape_alphabet_.size() + symbol];
    return m ? &*m : nullptr;
  }

 private:
  friend struct ModelBuilder;
  std::string name_;
  SymbolSet states_;
  SymbolSet alphabet_;
  SymbolSet tape_alphabet_;
  std::size_t start_ = 0;
  std::size_t accept_ = 0;
  std::size_t reject_ = 0;
  std::size_t blank_ = 0;
  std::vector<std::optional<TmMove>> delta_;
};

using Machine = std::variant<Dfa, Pda, Tm>;

MachineKind kind_of(const Machine& m);
const std::string& name_of(const Machine& m);
const SymbolSet& alphabet_of(const Machine& m);

template <class T>
struct BuildResult {
  std::optional<T> value;
  std::vector<ValidationError> errors;

  bool ok() const { return value.has_value(); }
};

BuildResult<Dfa> build_dfa(const SExpr& form);
BuildResult<Pda> build_pda(const SExpr& form);
BuildResult<Tm> build_tm(const SExpr& form);

/// Dispatches on the form head (GEN-DFA, GEN-PDA, GEN-TM).
BuildResult<Machine> build_machine(const SExpr& form);

/// The machine kind a `gen-x` form declares, if its head is recognized.
std::optional<MachineKind> form_kind(const SExpr& form);

/// Result of building every form in a definition file.
struct LoadedForm {
  std::optional<MachineKind> kind;
  std::string name;  // canonical, empty when the form has no usable :name
  BuildResult<Machine> result;
};

/// Builds each top-level form. Two forms with the same :name make the later
/// one fail with DuplicateName. Forms that are not `gen-x` forms produce a
/// MalformedComponent error.
std::vector<LoadedForm> load_forms(const std::vector<SExpr>& forms);

}  // namespace autograde

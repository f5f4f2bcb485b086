#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace autograde {

/// A node of the S-expression surface syntax.
///
/// Symbols and keywords are stored in upper case, so `e1` and `E1` are the
/// same symbol. `nil` reads as the symbol NIL (the blank / empty marker) and
/// `:e` as the keyword E (the empty word). A dotted pair is kept distinct from
/// a list: `(a . (b c))` is DottedPair(A, List[B C]), not the list `(A B C)`.
class SExpr {
 public:
  enum class Kind { Symbol, Integer, Keyword, List, DottedPair };

  SExpr() : kind_(Kind::List) {}

  static SExpr symbol(std::string_view name);
  static SExpr integer(std::int64_t value);
  static SExpr keyword(std::string_view name);
  static SExpr list(std::vector<SExpr> elements = {});
  static SExpr dotted(SExpr head, SExpr tail);

  static SExpr nil() { return symbol("NIL"); }
  static SExpr epsilon() { return keyword("E"); }

  Kind kind() const { return kind_; }
  bool is_atom() const {
    return kind_ == Kind::Symbol || kind_ == Kind::Integer || kind_ == Kind::Keyword;
  }
  bool is_symbol() const { return kind_ == Kind::Symbol; }
  bool is_integer() const { return kind_ == Kind::Integer; }
  bool is_keyword() const { return kind_ == Kind::Keyword; }
  bool is_list() const { return kind_ == Kind::List; }
  bool is_dotted() const { return kind_ == Kind::DottedPair; }

  /// Canonical (upper-case) comparison against a symbol name.
  bool is_symbol(std::string_view canonical) const;
  bool is_keyword(std::string_view canonical) const;
  bool is_nil() const { return is_symbol("NIL"); }
  bool is_epsilon() const { return is_keyword("E"); }

  const std::string& name() const;            // Symbol, Keyword
  std::int64_t integer_value() const;          // Integer
  const std::vector<SExpr>& elements() const;  // List
  const SExpr& head() const;                   // DottedPair
  const SExpr& tail() const;                   // DottedPair

  friend bool operator==(const SExpr& a, const SExpr& b);

  /// Total order: integers < symbols < keywords < lists < dotted pairs;
  /// integers numerically, names lexicographically, compound forms
  /// lexicographically by children. This is the canonical order used for
  /// alphabets, witness selection and word enumeration.
  friend std::strong_ordering operator<=>(const SExpr& a, const SExpr& b);

 private:
  Kind kind_;
  std::int64_t int_ = 0;
  std::string name_;
  std::vector<SExpr> items_;  // list elements, or {head, tail} for a pair
};

using Word = std::vector<SExpr>;

enum class ParseErrorKind { UnbalancedParens, IllegalToken, DanglingDot, NestingTooDeep };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, std::size_t line, std::size_t column,
             const std::string& what);

  ParseErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

inline constexpr std::size_t kMaxNestingDepth = 1024;

/// Reads every top-level form in `text`. Whitespace and `;` line comments
/// are skipped; `'x` reads as x. Throws ParseError on malformed input.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// Canonical rendering; parse_sexprs(print_sexpr(e)) == {e}.
std::string print_sexpr(const SExpr& expr);

/// Renders a word as a quoted list, `'(0 1 1)`, or `:e` when empty.
std::string print_word(std::span<const SExpr> word);

/// `(w1 w2 ...)` with each word rendered by print_word, as used in feedback.
std::string print_word_list(std::span<const Word> words);

/// Interprets a form as a word: a list of atoms, or NIL / `:e` for the empty
/// word. Returns false if the form is not a word.
bool as_word(const SExpr& form, Word& out);

}  // namespace autograde

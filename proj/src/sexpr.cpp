#include "autograde/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace autograde {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int kind_rank(SExpr::Kind k) {
  switch (k) {
    case SExpr::Kind::Integer: return 0;
    case SExpr::Kind::Symbol: return 1;
    case SExpr::Kind::Keyword: return 2;
    case SExpr::Kind::List: return 3;
    case SExpr::Kind::DottedPair: return 4;
  }
  return 5;
}

}  // namespace

SExpr SExpr::symbol(std::string_view name) {
  SExpr e;
  e.kind_ = Kind::Symbol;
  e.name_ = upper(name);
  return e;
}

SExpr SExpr::integer(std::int64_t value) {
  SExpr e;
  e.kind_ = Kind::Integer;
  e.int_ = value;
  return e;
}

SExpr SExpr::keyword(std::string_view name) {
  SExpr e;
  e.kind_ = Kind::Keyword;
  e.name_ = upper(name);
  return e;
}

SExpr SExpr::list(std::vector<SExpr> elements) {
  SExpr e;
  e.kind_ = Kind::List;
  e.items_ = std::move(elements);
  return e;
}

SExpr SExpr::dotted(SExpr head, SExpr tail) {
  SExpr e;
  e.kind_ = Kind::DottedPair;
  e.items_.reserve(2);
  e.items_.push_back(std::move(head));
  e.items_.push_back(std::move(tail));
  return e;
}

bool SExpr::is_symbol(std::string_view canonical) const {
  return kind_ == Kind::Symbol && name_ == canonical;
}

bool SExpr::is_keyword(std::string_view canonical) const {
  return kind_ == Kind::Keyword && name_ == canonical;
}

const std::string& SExpr::name() const {
  if (kind_ != Kind::Symbol && kind_ != Kind::Keyword)
    throw std::logic_error("SExpr::name on a non-symbol");
  return name_;
}

std::int64_t SExpr::integer_value() const {
  if (kind_ != Kind::Integer) throw std::logic_error("SExpr::integer_value on a non-integer");
  return int_;
}

const std::vector<SExpr>& SExpr::elements() const {
  if (kind_ != Kind::List) throw std::logic_error("SExpr::elements on a non-list");
  return items_;
}

const SExpr& SExpr::head() const {
  if (kind_ != Kind::DottedPair) throw std::logic_error("SExpr::head on a non-pair");
  return items_[0];
}

const SExpr& SExpr::tail() const {
  if (kind_ != Kind::DottedPair) throw std::logic_error("SExpr::tail on a non-pair");
  return items_[1];
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case SExpr::Kind::Integer: return a.int_ == b.int_;
    case SExpr::Kind::Symbol:
    case SExpr::Kind::Keyword: return a.name_ == b.name_;
    case SExpr::Kind::List:
    case SExpr::Kind::DottedPair: return a.items_ == b.items_;
  }
  return false;
}

std::strong_ordering operator<=>(const SExpr& a, const SExpr& b) {
  if (a.kind_ != b.kind_) return kind_rank(a.kind_) <=> kind_rank(b.kind_);
  switch (a.kind_) {
    case SExpr::Kind::Integer: return a.int_ <=> b.int_;
    case SExpr::Kind::Symbol:
    case SExpr::Kind::Keyword: return a.name_.compare(b.name_) <=> 0;
    case SExpr::Kind::List:
    case SExpr::Kind::DottedPair:
      return std::lexicographical_compare_three_way(a.items_.begin(), a.items_.end(),
                                                    b.items_.begin(), b.items_.end());
  }
  return std::strong_ordering::equal;
}

ParseError::ParseError(ParseErrorKind kind, std::size_t offset, std::size_t line,
                       std::size_t column, const std::string& what)
    : std::runtime_error(what), kind_(kind), offset_(offset), line_(line), column_(column) {}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_delimiter(char c) { return is_space(c) || c == '(' || c == ')' || c == '\'' || c == ';'; }

bool is_token_char(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u < 0x21 || u > 0x7e) return false;
  switch (c) {
    case '"': case '`': case ',': case '|': case '\\': return false;
    default: return !is_delimiter(c);
  }
}

const char* kind_label(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::UnbalancedParens: return "unbalanced parentheses";
    case ParseErrorKind::IllegalToken: return "illegal token";
    case ParseErrorKind::DanglingDot: return "dangling dot";
    case ParseErrorKind::NestingTooDeep: return "nesting too deep";
  }
  return "parse error";
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> forms;
    for (;;) {
      skip_blank();
      if (at_end()) break;
      if (peek() == ')') fail(ParseErrorKind::UnbalancedParens, pos_, "unexpected ')'");
      forms.push_back(read_form(0));
    }
    return forms;
  }

 private:
  // Either a form or the lone `.` token inside a list.
  struct Item {
    bool dot = false;
    std::size_t at = 0;
    SExpr form;
  };

  [[noreturn]] void fail(ParseErrorKind kind, std::size_t at, const std::string& detail) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << kind_label(kind) << " at line " << line << ", column " << col << ": " << detail;
    throw ParseError(kind, at, line, col, msg.str());
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (is_space(c)) {
        ++pos_;
      } else if (c == ';') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read_form(std::size_t depth) {
    Item item = read_item(depth);
    if (item.dot) fail(ParseErrorKind::DanglingDot, item.at, "'.' outside of a pair");
    return std::move(item.form);
  }

  Item read_item(std::size_t depth) {
    skip_blank();
    if (at_end()) fail(ParseErrorKind::UnbalancedParens, pos_, "unexpected end of input");
    std::size_t start = pos_;
    char c = peek();
    if (c == '(') return {false, start, read_list(depth + 1)};
    if (c == ')') fail(ParseErrorKind::UnbalancedParens, pos_, "unexpected ')'");
    if (c == '\'') {
      ++pos_;
      skip_blank();
      if (at_end() || peek() == ')')
        fail(ParseErrorKind::IllegalToken, start, "quote without a form");
      return {false, start, read_form(depth)};
    }
    return read_atom();
  }

  SExpr read_list(std::size_t depth) {
    std::size_t open = pos_;
    if (depth > kMaxNestingDepth)
      fail(ParseErrorKind::NestingTooDeep, open,
           "more than " + std::to_string(kMaxNestingDepth) + " nested lists");
    ++pos_;
    std::vector<SExpr> elements;
    for (;;) {
      skip_blank();
      if (at_end()) fail(ParseErrorKind::UnbalancedParens, open, "'(' is never closed");
      if (peek() == ')') {
        ++pos_;
        return SExpr::list(std::move(elements));
      }
      Item item = read_item(depth);
      if (!item.dot) {
        elements.push_back(std::move(item.form));
        continue;
      }
      if (elements.size() != 1)
        fail(ParseErrorKind::DanglingDot, item.at, "'.' must follow exactly one form");
      skip_blank();
      if (at_end()) fail(ParseErrorKind::UnbalancedParens, open, "'(' is never closed");
      if (peek() == ')') fail(ParseErrorKind::DanglingDot, item.at, "'.' without a tail");
      SExpr tail = read_form(depth);
      skip_blank();
      if (at_end()) fail(ParseErrorKind::UnbalancedParens, open, "'(' is never closed");
      if (peek() != ')')
        fail(ParseErrorKind::DanglingDot, pos_, "a dotted pair takes exactly one tail");
      ++pos_;
      return SExpr::dotted(std::move(elements.front()), std::move(tail));
    }
  }

  Item read_atom() {
    std::size_t start = pos_;
    while (!at_end() && !is_delimiter(peek())) {
      if (!is_token_char(peek()))
        fail(ParseErrorKind::IllegalToken, pos_,
             "character code " + std::to_string(static_cast<unsigned char>(peek())) +
                 " is not allowed");
      ++pos_;
    }
    std::string_view tok = text_.substr(start, pos_ - start);
    if (tok == ".") return {true, start, {}};
    if (std::all_of(tok.begin(), tok.end(), [](char ch) { return ch == '.'; }))
      fail(ParseErrorKind::IllegalToken, start, "'" + std::string(tok) + "'");

    if (tok.front() == ':') {
      std::string_view rest = tok.substr(1);
      if (rest.empty() || rest.find(':') != std::string_view::npos)
        fail(ParseErrorKind::IllegalToken, start, "malformed keyword '" + std::string(tok) + "'");
      return {false, start, SExpr::keyword(rest)};
    }
    if (tok.find(':') != std::string_view::npos)
      fail(ParseErrorKind::IllegalToken, start, "package prefixes are not supported");

    std::size_t digits_at = (tok.front() == '+' || tok.front() == '-') ? 1 : 0;
    if (digits_at < tok.size() && std::isdigit(static_cast<unsigned char>(tok[digits_at]))) {
      std::int64_t value = 0;
      const char* first = tok.data() + (tok.front() == '+' ? 1 : 0);
      const char* last = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last)
        fail(ParseErrorKind::IllegalToken, start,
             "'" + std::string(tok) + "' is not an integer (only integers are numeric atoms)");
      return {false, start, SExpr::integer(value)};
    }
    return {false, start, SExpr::symbol(tok)};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_into(const SExpr& e, std::string& out) {
  switch (e.kind()) {
    case SExpr::Kind::Integer: out += std::to_string(e.integer_value()); break;
    case SExpr::Kind::Symbol: out += e.name(); break;
    case SExpr::Kind::Keyword:
      out += ':';
      out += lower(e.name());
      break;
    case SExpr::Kind::List: {
      out += '(';
      bool first = true;
      for (const auto& item : e.elements()) {
        if (!first) out += ' ';
        first = false;
        print_into(item, out);
      }
      out += ')';
      break;
    }
    case SExpr::Kind::DottedPair:
      out += '(';
      print_into(e.head(), out);
      out += " . ";
      print_into(e.tail(), out);
      out += ')';
      break;
  }
}

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

std::string print_sexpr(const SExpr& expr) {
  std::string out;
  print_into(expr, out);
  return out;
}

std::string print_word(std::span<const SExpr> word) {
  if (word.empty()) return ":e";
  std::string out = "'(";
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    print_into(word[i], out);
  }
  out += ')';
  return out;
}

std::string print_word_list(std::span<const Word> words) {
  std::string out = "(";
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += print_word(words[i]);
  }
  out += ')';
  return out;
}

bool as_word(const SExpr& form, Word& out) {
  if (form.is_nil() || form.is_epsilon()) {
    out.clear();
    return true;
  }
  if (!form.is_list()) return false;
  for (const auto& letter : form.elements())
    if (!letter.is_integer() && !letter.is_symbol()) return false;
  out = form.elements();
  return true;
}

}  // namespace autograde

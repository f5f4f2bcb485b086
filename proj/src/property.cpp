#include "autograde/property.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "autograde/exec.hpp"

namespace autograde {

std::string machine_key(std::string_view name) {
  while (name.size() >= 2 && name.front() == '*' && name.back() == '*')
    name = name.substr(1, name.size() - 2);
  std::string out(name);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

namespace {

[[noreturn]] void malformed(const std::string& what, const SExpr& at) {
  throw PropertyError(PropertyError::Code::Malformed, what + ": " + print_sexpr(at));
}

std::string machine_ref(const SExpr& e) {
  if (!e.is_symbol() || e.is_nil()) malformed("expected a machine name", e);
  return machine_key(e.name());
}

bool head_is(const SExpr& e, std::initializer_list<std::string_view> names) {
  if (!e.is_list() || e.elements().empty() || !e.elements().front().is_symbol()) return false;
  const auto& h = e.elements().front().name();
  return std::find(names.begin(), names.end(), h) != names.end();
}

class FormulaReader {
 public:
  explicit FormulaReader(std::string var) : var_(std::move(var)) {}

  WordExpr word(const SExpr& e) const {
    WordExpr out;
    if (e.is_symbol() && e.name() == var_) {
      out.kind = WordExpr::Kind::Var;
      return out;
    }
    if (head_is(e, {"CONCAT", "APP", "APPEND"})) {
      out.kind = WordExpr::Kind::Concat;
      for (std::size_t i = 1; i < e.elements().size(); ++i)
        out.parts.push_back(word(e.elements()[i]));
      return out;
    }
    if (head_is(e, {"OUTPUT"})) {
      if (e.elements().size() != 3) malformed("output takes a machine and a word", e);
      out.kind = WordExpr::Kind::Output;
      out.machine = machine_ref(e.elements()[1]);
      out.parts.push_back(word(e.elements()[2]));
      return out;
    }
    // (remove-final-nils (left-of-head (run-tm we M))) spells (output M we).
    if (head_is(e, {"REMOVE-FINAL-NILS"}) && e.elements().size() == 2 &&
        head_is(e.elements()[1], {"LEFT-OF-HEAD"}) && e.elements()[1].elements().size() == 2 &&
        head_is(e.elements()[1].elements()[1], {"RUN-TM"})) {
      const SExpr& run = e.elements()[1].elements()[1];
      if (run.elements().size() != 3) malformed("run-tm takes a word and a machine", run);
      out.kind = WordExpr::Kind::Output;
      out.machine = machine_ref(run.elements()[2]);
      out.parts.push_back(word(run.elements()[1]));
      return out;
    }
    if (as_word(e, out.literal)) {
      out.kind = WordExpr::Kind::Literal;
      return out;
    }
    malformed("not a word expression", e);
  }

  Formula formula(const SExpr& e) const {
    Formula f;
    const auto arity = [&](std::size_t n) {
      if (e.elements().size() != n + 1) malformed("wrong number of arguments", e);
    };
    if (head_is(e, {"ACCEPTS", "ACCEPT-DFA", "ACCEPT-PDA", "ACCEPT-TM"})) {
      arity(2);
      f.kind = Formula::Kind::Accepts;
      f.machine = machine_ref(e.elements()[1]);
      f.words.push_back(word(e.elements()[2]));
      const auto& h = e.elements().front().name();
      if (h == "ACCEPT-DFA") f.expected_kind = MachineKind::Dfa;
      if (h == "ACCEPT-PDA") f.expected_kind = MachineKind::Pda;
      if (h == "ACCEPT-TM") f.expected_kind = MachineKind::Tm;
      return f;
    }
    if (head_is(e, {"NOT", "!"})) {
      arity(1);
      f.kind = Formula::Kind::Not;
      f.subs.push_back(formula(e.elements()[1]));
      return f;
    }
    if (head_is(e, {"IMPLIES", "=>"})) {
      arity(2);
      f.kind = Formula::Kind::Implies;
      f.subs.push_back(formula(e.elements()[1]));
      f.subs.push_back(formula(e.elements()[2]));
      return f;
    }
    if (head_is(e, {"OUT=", "=="})) {
      arity(2);
      f.kind = Formula::Kind::OutEq;
      f.words.push_back(word(e.elements()[1]));
      f.words.push_back(word(e.elements()[2]));
      return f;
    }
    malformed("not a formula", e);
  }

 private:
  std::string var_;
};

// Static checks over the formula before any evaluation.
class Checker {
 public:
  Checker(const MachineTable& machines, const std::vector<SExpr>& alphabet)
      : machines_(machines), alphabet_(alphabet.begin(), alphabet.end()) {}

  void check(const Formula& f) const {
    if (f.kind == Formula::Kind::Accepts) {
      const Machine& m = lookup(f.machine);
      if (f.expected_kind && kind_of(m) != *f.expected_kind)
        throw PropertyError(PropertyError::Code::KindMismatch,
                            std::string("accept-") + to_string(*f.expected_kind) + " applied to " +
                                f.machine + ", which is a " + to_string(kind_of(m)));
    }
    for (const auto& w : f.words) check(w);
    for (const auto& s : f.subs) check(s);
  }

  void check(const WordExpr& w) const {
    switch (w.kind) {
      case WordExpr::Kind::Var: break;
      case WordExpr::Kind::Literal:
        for (const auto& l : w.literal)
          if (!alphabet_.count(l))
            throw PropertyError(PropertyError::Code::InvalidLiteral,
                                "literal letter " + print_sexpr(l) +
                                    " is not in the generator alphabet");
        break;
      case WordExpr::Kind::Output:
        if (kind_of(lookup(w.machine)) != MachineKind::Tm)
          throw PropertyError(PropertyError::Code::KindMismatch,
                              "output applied to " + w.machine + ", which is not a TM");
        [[fallthrough]];
      case WordExpr::Kind::Concat:
        for (const auto& p : w.parts) check(p);
        break;
    }
  }

  const Machine& lookup(const std::string& name) const {
    auto it = machines_.find(name);
    if (it == machines_.end())
      throw PropertyError(PropertyError::Code::UnknownMachineName, "unknown machine " + name);
    return it->second;
  }

 private:
  const MachineTable& machines_;
  std::set<SExpr> alphabet_;
};

class Evaluator {
 public:
  Evaluator(const Checker& checker, const RunBounds& bounds, const Word& value)
      : checker_(checker), bounds_(bounds), value_(value) {}

  bool eval(const Formula& f) const {
    switch (f.kind) {
      case Formula::Kind::Accepts:
        return accepts(checker_.lookup(f.machine), eval(f.words[0]), bounds_);
      case Formula::Kind::Not: return !eval(f.subs[0]);
      case Formula::Kind::Implies: return !eval(f.subs[0]) || eval(f.subs[1]);
      case Formula::Kind::OutEq: return eval(f.words[0]) == eval(f.words[1]);
    }
    return false;
  }

  Word eval(const WordExpr& w) const {
    switch (w.kind) {
      case WordExpr::Kind::Var: return value_;
      case WordExpr::Kind::Literal: return w.literal;
      case WordExpr::Kind::Concat: {
        Word out;
        for (const auto& p : w.parts) {
          Word part = eval(p);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      }
      case WordExpr::Kind::Output:
        return tm_output(std::get<Tm>(checker_.lookup(w.machine)), eval(w.parts[0]),
                         bounds_.tm_steps);
    }
    return {};
  }

 private:
  const Checker& checker_;
  const RunBounds& bounds_;
  const Word& value_;
};

}  // namespace

PropertySpec parse_property(const SExpr& form) {
  if (!head_is(form, {"PROPERTY"}) || form.elements().size() < 4 ||
      form.elements().size() % 2 != 0)
    malformed("expected (property <name> (<var>) [:option value]... <formula>)", form);
  const auto& items = form.elements();
  PropertySpec p;
  if (!items[1].is_symbol()) malformed("property name must be a symbol", items[1]);
  p.name = items[1].name();
  const SExpr& binder = items[2];
  // `(w)`, or the typed binder `(w :some-word-type)`; the type is ignored
  // because words are always drawn from the generator alphabet.
  bool binder_ok = binder.is_list() && !binder.elements().empty() &&
                   binder.elements().size() <= 2 && binder.elements()[0].is_symbol() &&
                   (binder.elements().size() == 1 || binder.elements()[1].is_keyword());
  if (!binder_ok) malformed("property binds exactly one word variable", binder);
  p.var = binder.elements()[0].name();
  for (std::size_t i = 3; i + 1 < items.size(); i += 2) {
    if (!items[i].is_keyword()) malformed("expected a keyword option", items[i]);
    p.options[items[i].name()] = items[i + 1];
  }
  FormulaReader reader(p.var);
  p.formula = reader.formula(items.back());
  return p;
}

PropertyResult check_property(const PropertySpec& p, const MachineTable& machines,
                              const TestConfig& cfg) {
  Checker checker(machines, p.alphabet);
  checker.check(p.formula);
  PropertyResult r;
  for (const auto& w : gen_words(p.alphabet, cfg)) {
    ++r.words_tested;
    bool holds = false;
    try {
      holds = Evaluator(checker, cfg.bounds, w).eval(p.formula);
    } catch (const LetterNotInAlphabet& e) {
      r.reason = e.what();
    }
    if (!holds) {
      r.passed = false;
      r.counterexample = w;
      return r;
    }
  }
  return r;
}

}  // namespace autograde

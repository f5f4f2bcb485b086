#include "autograde/model.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace autograde {

const char* to_string(ValidationCode code) {
  switch (code) {
    case ValidationCode::MissingComponent: return "MissingComponent";
    case ValidationCode::UnknownComponent: return "UnknownComponent";
    case ValidationCode::MalformedComponent: return "MalformedComponent";
    case ValidationCode::DuplicateName: return "DuplicateName";
    case ValidationCode::BadStartState: return "BadStartState";
    case ValidationCode::BadAcceptStates: return "BadAcceptStates";
    case ValidationCode::BadRejectState: return "BadRejectState";
    case ValidationCode::BadTransitionDomain: return "BadTransitionDomain";
    case ValidationCode::BadTransitionCodomain: return "BadTransitionCodomain";
    case ValidationCode::MissingStartTransition: return "MissingStartTransition";
    case ValidationCode::BlankMissingFromTape: return "BlankMissingFromTape";
    case ValidationCode::BlankInInputAlphabet: return "BlankInInputAlphabet";
    case ValidationCode::InputNotSubsetOfTape: return "InputNotSubsetOfTape";
    case ValidationCode::AcceptEqualsReject: return "AcceptEqualsReject";
    case ValidationCode::AcceptRejectInDomain: return "AcceptRejectInDomain";
    case ValidationCode::DuplicateSymbols: return "DuplicateSymbols";
    case ValidationCode::DuplicateTransitionKey: return "DuplicateTransitionKey";
  }
  return "Unknown";
}

std::string_view validation_prefix(ValidationCode code) {
  switch (code) {
    case ValidationCode::MissingComponent: return "Missing component";
    case ValidationCode::UnknownComponent: return "Unknown component";
    case ValidationCode::MalformedComponent: return "Malformed component";
    case ValidationCode::DuplicateName: return "Duplicate name";
    case ValidationCode::BadStartState: return "Start state";
    case ValidationCode::BadAcceptStates: return "Accept state";
    case ValidationCode::BadRejectState: return "Reject state";
    case ValidationCode::BadTransitionDomain:
      return "Transition function is not a function with domain";
    case ValidationCode::BadTransitionCodomain:
      return "Transition function is not a function with co-domain";
    case ValidationCode::MissingStartTransition: return "Starting transition from";
    case ValidationCode::BlankMissingFromTape:
      return "Blank tape symbol nil missing from tape-alphabet.";
    case ValidationCode::BlankInInputAlphabet:
      return "Blank tape symbol nil must not appear in the input alphabet.";
    case ValidationCode::InputNotSubsetOfTape:
      return "Input alphabet has to be a subset of the tape alphabet";
    case ValidationCode::AcceptEqualsReject:
      return "Accept state and reject state must be different";
    case ValidationCode::AcceptRejectInDomain:
      return "Transitions out of the accept or reject state are not allowed";
    case ValidationCode::DuplicateSymbols: return "Duplicate element";
    case ValidationCode::DuplicateTransitionKey: return "Duplicate transition for";
  }
  return "";
}

const char* to_string(MachineKind kind) {
  switch (kind) {
    case MachineKind::Dfa: return "dfa";
    case MachineKind::Pda: return "pda";
    case MachineKind::Tm: return "tm";
  }
  return "?";
}

SymbolSet::SymbolSet(std::vector<SExpr> items) : items_(std::move(items)) {
  for (std::size_t i = 0; i < items_.size(); ++i) index_.emplace(items_[i], i);
}

std::optional<std::size_t> SymbolSet::index_of(const SExpr& atom) const {
  auto it = index_.find(atom);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<SExpr> SymbolSet::sorted() const {
  std::vector<SExpr> out = items_;
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Pda::slot(std::size_t state, std::optional<std::size_t> letter,
                      std::optional<std::size_t> top) const {
  std::size_t letters = alphabet_.size() + 1;
  std::size_t tops = stack_alphabet_.size() + 1;
  std::size_t l = letter ? *letter + 1 : 0;
  std::size_t t = top ? *top + 1 : 0;
  return (state * letters + l) * tops + t;
}

const std::vector<PdaMove>* Pda::moves(std::size_t state, std::optional<std::size_t> letter,
                                       std::optional<std::size_t> top) const {
  const auto& entry = table_[slot(state, letter, top)];
  return entry ? &*entry : nullptr;
}

MachineKind kind_of(const Machine& m) {
  return static_cast<MachineKind>(m.index());
}

const std::string& name_of(const Machine& m) {
  return std::visit([](const auto& x) -> const std::string& { return x.name(); }, m);
}

const SymbolSet& alphabet_of(const Machine& m) {
  return std::visit([](const auto& x) -> const SymbolSet& { return x.alphabet(); }, m);
}

namespace {

using Errors = std::vector<ValidationError>;

void add(Errors& errors, ValidationCode code, std::string message,
         std::optional<SExpr> detail = std::nullopt) {
  errors.push_back({code, std::move(message), std::move(detail)});
}

std::string with_prefix(ValidationCode code, const std::string& rest) {
  return std::string(validation_prefix(code)) + rest;
}

// Keyword arguments of a gen-x form, order-insensitive.
class Components {
 public:
  Components(const SExpr& form, std::string_view head, std::span<const std::string_view> allowed,
             Errors& errors)
      : errors_(errors) {
    if (!form.is_list() || form.elements().empty() || !form.elements().front().is_symbol(head)) {
      add(errors, ValidationCode::MalformedComponent,
          with_prefix(ValidationCode::MalformedComponent,
                      ": expected a (" + lower(head) + " ...) form."),
          form);
      return;
    }
    const auto& items = form.elements();
    for (std::size_t i = 1; i < items.size(); i += 2) {
      const SExpr& key = items[i];
      if (!key.is_keyword()) {
        add(errors, ValidationCode::MalformedComponent,
            with_prefix(ValidationCode::MalformedComponent,
                        ": expected a component keyword but found " + print_sexpr(key) + "."),
            key);
        --i;  // resynchronize on the next element
        continue;
      }
      if (i + 1 >= items.size()) {
        add(errors, ValidationCode::MalformedComponent,
            with_prefix(ValidationCode::MalformedComponent,
                        " " + print_sexpr(key) + " has no value."),
            key);
        break;
      }
      bool known = std::find(allowed.begin(), allowed.end(), key.name()) != allowed.end();
      if (!known) {
        add(errors, ValidationCode::UnknownComponent,
            with_prefix(ValidationCode::UnknownComponent, " " + print_sexpr(key) + "."), key);
        continue;
      }
      if (values_.count(key.name())) {
        add(errors, ValidationCode::MalformedComponent,
            with_prefix(ValidationCode::MalformedComponent,
                        " " + print_sexpr(key) + " is given more than once."),
            key);
        continue;
      }
      values_.emplace(key.name(), items[i + 1]);
    }
    valid_form_ = true;
  }

  bool valid_form() const { return valid_form_; }

  const SExpr* get(std::string_view key) const {
    auto it = values_.find(std::string(key));
    return it == values_.end() ? nullptr : &it->second;
  }

  // Reports MissingComponent if absent.
  const SExpr* require(std::string_view key) {
    const SExpr* v = get(key);
    if (!v && valid_form_)
      add(errors_, ValidationCode::MissingComponent,
          with_prefix(ValidationCode::MissingComponent, " :" + lower(key) + "."));
    return v;
  }

  static std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }

 private:
  Errors& errors_;
  std::map<std::string, SExpr> values_;
  bool valid_form_ = false;
};

bool is_letter_atom(const SExpr& e) { return e.is_symbol() || e.is_integer(); }

// A set-valued component: a list of atoms (NIL is the empty list).
std::optional<SymbolSet> atom_set(const SExpr* value, std::string_view key, Errors& errors) {
  if (!value) return std::nullopt;
  std::string kw = ":" + Components::lower(key);
  if (value->is_nil()) return SymbolSet{};
  if (!value->is_list()) {
    add(errors, ValidationCode::MalformedComponent,
        with_prefix(ValidationCode::MalformedComponent, " " + kw + " must be a list."), *value);
    return std::nullopt;
  }
  bool ok = true;
  std::set<SExpr> seen;
  std::vector<SExpr> items;
  for (const auto& e : value->elements()) {
    if (!is_letter_atom(e)) {
      add(errors, ValidationCode::MalformedComponent,
          with_prefix(ValidationCode::MalformedComponent,
                      " " + kw + " contains " + print_sexpr(e) +
                          ", which is not a symbol or an integer."),
          e);
      ok = false;
      continue;
    }
    if (!seen.insert(e).second) {
      add(errors, ValidationCode::DuplicateSymbols,
          with_prefix(ValidationCode::DuplicateSymbols,
                      " " + print_sexpr(e) + " appears more than once in " + kw + "."),
          e);
      ok = false;
      continue;
    }
    items.push_back(e);
  }
  if (!ok) return std::nullopt;
  return SymbolSet(std::move(items));
}

std::optional<std::string> machine_name(const SExpr* value, Errors& errors) {
  if (!value) return std::nullopt;
  if (!value->is_symbol() || value->is_nil()) {
    add(errors, ValidationCode::MalformedComponent,
        with_prefix(ValidationCode::MalformedComponent, " :name must be a symbol."), *value);
    return std::nullopt;
  }
  return value->name();
}

std::optional<std::size_t> member_state(const SExpr* value, const std::optional<SymbolSet>& states,
                                        ValidationCode code, const std::string& what,
                                        Errors& errors) {
  if (!value || !states) return std::nullopt;
  if (is_letter_atom(*value)) {
    if (auto idx = states->index_of(*value)) return idx;
  }
  add(errors, code,
      what + " " + print_sexpr(*value) + " is not one of the given states.", *value);
  return std::nullopt;
}

std::optional<std::vector<bool>> accept_set(const SExpr* value,
                                            const std::optional<SymbolSet>& states,
                                            std::string_view key, Errors& errors) {
  auto set = atom_set(value, key, errors);
  if (!set || !states) return std::nullopt;
  std::vector<bool> accepting(states->size(), false);
  std::vector<SExpr> foreign;
  for (const auto& s : set->items()) {
    if (auto idx = states->index_of(s))
      accepting[*idx] = true;
    else
      foreign.push_back(s);
  }
  if (!foreign.empty()) {
    add(errors, ValidationCode::BadAcceptStates,
        "Accept states are not a subset of the given states: " +
            print_sexpr(SExpr::list(foreign)) + " not in " + print_sexpr(SExpr::list(states->items())) + ".",
        SExpr::list(foreign));
    return std::nullopt;
  }
  return accepting;
}

// Transition entries `(key . value)`; NIL is the empty list.
const std::vector<SExpr>* transition_entries(const SExpr* value, Errors& errors) {
  static const std::vector<SExpr> kEmpty;
  if (!value) return nullptr;
  if (value->is_nil()) return &kEmpty;
  if (!value->is_list()) {
    add(errors, ValidationCode::MalformedComponent,
        with_prefix(ValidationCode::MalformedComponent,
                    " :transition-fun must be a list of (key . value) entries."),
        *value);
    return nullptr;
  }
  return &value->elements();
}

bool pair_entry(const SExpr& entry, Errors& errors) {
  if (entry.is_dotted() && entry.head().is_list()) return true;
  add(errors, ValidationCode::MalformedComponent,
      with_prefix(ValidationCode::MalformedComponent,
                  " :transition-fun entry " + print_sexpr(entry) +
                      " is not of the form (key . value)."),
      entry);
  return false;
}

std::vector<SExpr> list_or_nil(const SExpr& e) {
  if (e.is_nil()) return {};
  return e.elements();
}

constexpr std::array<std::string_view, 6> kDfaKeys = {"NAME",   "STATES", "ALPHABET",
                                                      "START",  "ACCEPT", "TRANSITION-FUN"};
constexpr std::array<std::string_view, 7> kPdaKeys = {
    "NAME", "STATES", "ALPHABET", "STACK-ALPHABET", "START-STATE", "ACCEPT-STATES",
    "TRANSITION-FUN"};
constexpr std::array<std::string_view, 8> kTmKeys = {
    "NAME",         "STATES",       "ALPHABET",     "TAPE-ALPHABET",
    "START-STATE",  "ACCEPT-STATE", "REJECT-STATE", "TRANSITION-FUN"};

}  // namespace

struct ModelBuilder {
  static BuildResult<Dfa> dfa(const SExpr& form) {
    BuildResult<Dfa> out;
    Errors& errors = out.errors;
    Components c(form, "GEN-DFA", kDfaKeys, errors);
    if (!c.valid_form()) return out;
    for (auto key : kDfaKeys) c.require(key);

    auto name = machine_name(c.get("NAME"), errors);
    auto states = atom_set(c.get("STATES"), "STATES", errors);
    auto alphabet = atom_set(c.get("ALPHABET"), "ALPHABET", errors);
    auto start = member_state(c.get("START"), states, ValidationCode::BadStartState,
                              "Start state", errors);
    auto accepting = accept_set(c.get("ACCEPT"), states, "ACCEPT", errors);

    std::vector<std::size_t> delta;
    bool delta_ok = false;
    if (const auto* entries = transition_entries(c.get("TRANSITION-FUN"), errors);
        entries && states && alphabet) {
      delta_ok = true;
      const std::size_t n_letters = alphabet->size();
      constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
      delta.assign(states->size() * n_letters, kUnset);
      const std::string domain_msg = with_prefix(ValidationCode::BadTransitionDomain, " Q x Sigma");
      for (const auto& entry : *entries) {
        if (!pair_entry(entry, errors)) {
          delta_ok = false;
          continue;
        }
        const auto& key = entry.head().elements();
        std::optional<std::size_t> q, a;
        if (key.size() == 2) {
          q = states->index_of(key[0]);
          a = alphabet->index_of(key[1]);
        }
        if (!q || !a) {
          add(errors, ValidationCode::BadTransitionDomain,
              domain_msg + ": " + print_sexpr(entry.head()) + " is not in Q x Sigma.",
              entry.head());
          delta_ok = false;
          continue;
        }
        auto target = states->index_of(entry.tail());
        if (!target) {
          add(errors, ValidationCode::BadTransitionCodomain,
              with_prefix(ValidationCode::BadTransitionCodomain,
                          " Q: " + print_sexpr(entry.tail()) + " is not a state."),
              entry.tail());
          delta_ok = false;
          continue;
        }
        std::size_t& cell = delta[*q * n_letters + *a];
        if (cell != kUnset) {
          add(errors, ValidationCode::DuplicateTransitionKey,
              with_prefix(ValidationCode::DuplicateTransitionKey,
                          " key " + print_sexpr(entry.head()) + "."),
              entry.head());
          delta_ok = false;
          continue;
        }
        cell = *target;
      }
      for (std::size_t q = 0; q < states->size(); ++q) {
        for (std::size_t a = 0; a < n_letters; ++a) {
          if (delta[q * n_letters + a] != kUnset) continue;
          SExpr key = SExpr::list({(*states)[q], (*alphabet)[a]});
          add(errors, ValidationCode::BadTransitionDomain,
              domain_msg + ": no transition for " + print_sexpr(key) + ".", key);
          delta_ok = false;
        }
      }
    }

    if (!errors.empty() || !name || !states || !alphabet || !start || !accepting || !delta_ok)
      return out;
    Dfa m;
    m.name_ = *name;
    m.states_ = std::move(*states);
    m.alphabet_ = std::move(*alphabet);
    m.start_ = *start;
    m.accepting_ = std::move(*accepting);
    m.delta_ = std::move(delta);
    out.value = std::move(m);
    return out;
  }

  static BuildResult<Pda> pda(const SExpr& form) {
    BuildResult<Pda> out;
    Errors& errors = out.errors;
    Components c(form, "GEN-PDA", kPdaKeys, errors);
    if (!c.valid_form()) return out;
    for (auto key : kPdaKeys) c.require(key);

    auto name = machine_name(c.get("NAME"), errors);
    auto states = atom_set(c.get("STATES"), "STATES", errors);
    auto alphabet = atom_set(c.get("ALPHABET"), "ALPHABET", errors);
    auto stack = atom_set(c.get("STACK-ALPHABET"), "STACK-ALPHABET", errors);
    auto start = member_state(c.get("START-STATE"), states, ValidationCode::BadStartState,
                              "Start state", errors);
    auto accepting = accept_set(c.get("ACCEPT-STATES"), states, "ACCEPT-STATES", errors);

    Pda m;
    bool delta_ok = false;
    if (const auto* entries = transition_entries(c.get("TRANSITION-FUN"), errors);
        entries && states && alphabet && stack) {
      delta_ok = true;
      m.states_ = *states;
      m.alphabet_ = *alphabet;
      m.stack_alphabet_ = *stack;
      m.table_.assign(states->size() * (alphabet->size() + 1) * (stack->size() + 1), std::nullopt);
      const std::string domain_msg = with_prefix(
          ValidationCode::BadTransitionDomain, " Q x (Sigma U {:e}) x (Gamma U {:e})");
      const std::string codomain_msg = with_prefix(
          ValidationCode::BadTransitionCodomain, " P(Q x (Gamma U {:e}))");
      auto optional_index = [](const SymbolSet& set, const SExpr& e,
                               std::optional<std::size_t>& idx) {
        if (e.is_epsilon()) {
          idx.reset();
          return true;
        }
        idx = set.index_of(e);
        return idx.has_value();
      };
      for (const auto& entry : *entries) {
        if (!pair_entry(entry, errors)) {
          delta_ok = false;
          continue;
        }
        const auto& key = entry.head().elements();
        std::optional<std::size_t> q, a, t;
        bool key_ok = key.size() == 3 && (q = states->index_of(key[0])) &&
                      optional_index(*alphabet, key[1], a) && optional_index(*stack, key[2], t);
        if (!key_ok) {
          add(errors, ValidationCode::BadTransitionDomain,
              domain_msg + ": " + print_sexpr(entry.head()) + " is not a valid key.",
              entry.head());
          delta_ok = false;
          continue;
        }
        std::vector<PdaMove> moves;
        bool value_ok = entry.tail().is_list() || entry.tail().is_nil();
        if (value_ok) {
          for (const auto& v : list_or_nil(entry.tail())) {
            std::optional<std::size_t> target, push;
            bool ok = v.is_list() && v.elements().size() == 2 &&
                      (target = states->index_of(v.elements()[0])) &&
                      optional_index(*stack, v.elements()[1], push);
            if (!ok) {
              add(errors, ValidationCode::BadTransitionCodomain,
                  codomain_msg + ": " + print_sexpr(v) + " is not a (state stack-symbol) pair.",
                  v);
              value_ok = false;
              continue;
            }
            PdaMove mv{*target, push};
            if (std::find(moves.begin(), moves.end(), mv) == moves.end()) moves.push_back(mv);
          }
        } else {
          add(errors, ValidationCode::BadTransitionCodomain,
              codomain_msg + ": " + print_sexpr(entry.tail()) + " is not a list of moves.",
              entry.tail());
        }
        if (!value_ok) {
          delta_ok = false;
          continue;
        }
        auto& cell = m.table_[m.slot(*q, a, t)];
        if (cell) {
          add(errors, ValidationCode::DuplicateTransitionKey,
              with_prefix(ValidationCode::DuplicateTransitionKey,
                          " key " + print_sexpr(entry.head()) + "."),
              entry.head());
          delta_ok = false;
          continue;
        }
        cell = std::move(moves);
        ++m.key_count_;
      }
      if (start && !m.table_[m.slot(*start, std::nullopt, std::nullopt)]) {
        add(errors, ValidationCode::MissingStartTransition,
            "Starting transition from (" + print_sexpr((*states)[*start]) +
                " :e :e) missing from the transition function.");
        delta_ok = false;
      }
    }

    if (!errors.empty() || !name || !start || !accepting || !delta_ok) return out;
    m.name_ = *name;
    m.start_ = *start;
    m.accepting_ = std::move(*accepting);
    out.value = std::move(m);
    return out;
  }

  static BuildResult<Tm> tm(const SExpr& form) {
    BuildResult<Tm> out;
    Errors& errors = out.errors;
    Components c(form, "GEN-TM", kTmKeys, errors);
    if (!c.valid_form()) return out;
    for (auto key : kTmKeys) c.require(key);

    auto name = machine_name(c.get("NAME"), errors);
    auto states = atom_set(c.get("STATES"), "STATES", errors);
    auto alphabet = atom_set(c.get("ALPHABET"), "ALPHABET", errors);
    auto tape = atom_set(c.get("TAPE-ALPHABET"), "TAPE-ALPHABET", errors);
    auto start = member_state(c.get("START-STATE"), states, ValidationCode::BadStartState,
                              "Start state", errors);
    auto accept = member_state(c.get("ACCEPT-STATE"), states, ValidationCode::BadAcceptStates,
                               "Accept state", errors);
    auto reject = member_state(c.get("REJECT-STATE"), states, ValidationCode::BadRejectState,
                               "Reject state", errors);
    if (accept && reject && *accept == *reject)
      add(errors, ValidationCode::AcceptEqualsReject,
          with_prefix(ValidationCode::AcceptEqualsReject,
                      ": both are " + print_sexpr((*states)[*accept]) + "."));

    const SExpr blank = SExpr::nil();
    bool blank_missing = false;
    if (tape && !tape->contains(blank)) {
      blank_missing = true;
      add(errors, ValidationCode::BlankMissingFromTape,
          std::string(validation_prefix(ValidationCode::BlankMissingFromTape)));
    }
    if (alphabet && alphabet->contains(blank))
      add(errors, ValidationCode::BlankInInputAlphabet,
          std::string(validation_prefix(ValidationCode::BlankInInputAlphabet)));
    if (alphabet && tape) {
      std::vector<SExpr> missing;
      for (const auto& a : alphabet->items())
        if (!tape->contains(a) && !a.is_nil()) missing.push_back(a);
      if (!missing.empty())
        add(errors, ValidationCode::InputNotSubsetOfTape,
            with_prefix(ValidationCode::InputNotSubsetOfTape,
                        ": " + print_sexpr(SExpr::list(missing)) +
                            " missing from the tape alphabet."),
            SExpr::list(missing));
    }

    Tm m;
    bool delta_ok = false;
    if (const auto* entries = transition_entries(c.get("TRANSITION-FUN"), errors);
        entries && states && tape) {
      delta_ok = true;
      // With the blank missing from the tape alphabet, transitions on nil are
      // not reported again: BlankMissingFromTape already covers them.
      auto in_tape = [&](const SExpr& s) {
        return tape->contains(s) || (blank_missing && s.is_nil());
      };
      const std::size_t width = tape->size();
      m.delta_.assign(states->size() * width, std::nullopt);
      std::set<std::pair<std::size_t, SExpr>> seen;
      const std::string domain_msg = with_prefix(ValidationCode::BadTransitionDomain, " Q x Gamma");
      const std::string codomain_msg =
          with_prefix(ValidationCode::BadTransitionCodomain, " Q x Gamma x {L, R}");
      for (const auto& entry : *entries) {
        if (!pair_entry(entry, errors)) {
          delta_ok = false;
          continue;
        }
        const auto& key = entry.head().elements();
        std::optional<std::size_t> q;
        if (key.size() != 2 || !(q = states->index_of(key[0])) || !in_tape(key[1])) {
          add(errors, ValidationCode::BadTransitionDomain,
              domain_msg + ": " + print_sexpr(entry.head()) + " is not in Q x Gamma.",
              entry.head());
          delta_ok = false;
          continue;
        }
        if ((accept && *q == *accept) || (reject && *q == *reject)) {
          add(errors, ValidationCode::AcceptRejectInDomain,
              with_prefix(ValidationCode::AcceptRejectInDomain,
                          ": " + print_sexpr(entry.head()) + "."),
              entry.head());
          delta_ok = false;
          continue;
        }
        const SExpr& value = entry.tail();
        std::optional<std::size_t> target;
        Direction dir = Direction::Right;
        bool value_ok = value.is_list() && value.elements().size() == 3 &&
                        (target = states->index_of(value.elements()[0])) &&
                        in_tape(value.elements()[1]);
        if (value_ok) {
          const SExpr& d = value.elements()[2];
          if (d.is_symbol("L"))
            dir = Direction::Left;
          else if (!d.is_symbol("R"))
            value_ok = false;
        }
        if (!value_ok) {
          add(errors, ValidationCode::BadTransitionCodomain,
              codomain_msg + ": " + print_sexpr(value) + " is not a (state symbol L|R) triple.",
              value);
          delta_ok = false;
          continue;
        }
        if (!seen.emplace(*q, key[1]).second) {
          add(errors, ValidationCode::DuplicateTransitionKey,
              with_prefix(ValidationCode::DuplicateTransitionKey,
                          " key " + print_sexpr(entry.head()) + "."),
              entry.head());
          delta_ok = false;
          continue;
        }
        if (blank_missing) continue;  // no valid table can be built anyway
        m.delta_[*q * width + *tape->index_of(key[1])] =
            TmMove{*target, *tape->index_of(value.elements()[1]), dir};
      }
    }

    if (!errors.empty() || !name || !alphabet || !start || !accept || !reject || !delta_ok)
      return out;
    m.name_ = *name;
    m.states_ = std::move(*states);
    m.alphabet_ = std::move(*alphabet);
    m.blank_ = *tape->index_of(blank);
    m.tape_alphabet_ = std::move(*tape);
    m.start_ = *start;
    m.accept_ = *accept;
    m.reject_ = *reject;
    out.value = std::move(m);
    return out;
  }
};

BuildResult<Dfa> build_dfa(const SExpr& form) { return ModelBuilder::dfa(form); }
BuildResult<Pda> build_pda(const SExpr& form) { return ModelBuilder::pda(form); }
BuildResult<Tm> build_tm(const SExpr& form) { return ModelBuilder::tm(form); }

std::optional<MachineKind> form_kind(const SExpr& form) {
  if (!form.is_list() || form.elements().empty()) return std::nullopt;
  const SExpr& head = form.elements().front();
  if (head.is_symbol("GEN-DFA")) return MachineKind::Dfa;
  if (head.is_symbol("GEN-PDA")) return MachineKind::Pda;
  if (head.is_symbol("GEN-TM")) return MachineKind::Tm;
  return std::nullopt;
}

namespace {

template <class T>
BuildResult<Machine> widen(BuildResult<T> r) {
  BuildResult<Machine> out;
  out.errors = std::move(r.errors);
  if (r.value) out.value = Machine(std::move(*r.value));
  return out;
}

// The :name value of a gen-x form, without validating anything else.
std::string declared_name(const SExpr& form) {
  const auto& items = form.elements();
  for (std::size_t i = 1; i + 1 < items.size(); ++i)
    if (items[i].is_keyword("NAME") && items[i + 1].is_symbol()) return items[i + 1].name();
  return {};
}

}  // namespace

BuildResult<Machine> build_machine(const SExpr& form) {
  auto kind = form_kind(form);
  if (!kind) {
    BuildResult<Machine> out;
    add(out.errors, ValidationCode::MalformedComponent,
        with_prefix(ValidationCode::MalformedComponent,
                    ": expected a gen-dfa, gen-pda or gen-tm form."),
        form);
    return out;
  }
  switch (*kind) {
    case MachineKind::Dfa: return widen(build_dfa(form));
    case MachineKind::Pda: return widen(build_pda(form));
    case MachineKind::Tm: return widen(build_tm(form));
  }
  return {};
}

std::vector<LoadedForm> load_forms(const std::vector<SExpr>& forms) {
  std::vector<LoadedForm> out;
  std::set<std::string> names;
  for (const auto& form : forms) {
    LoadedForm lf;
    lf.kind = form_kind(form);
    lf.result = build_machine(form);
    if (lf.kind) {
      lf.name = declared_name(form);
      if (!lf.name.empty() && !names.insert(lf.name).second) {
        lf.result.value.reset();
        lf.result.errors.insert(
            lf.result.errors.begin(),
            {ValidationCode::DuplicateName,
             with_prefix(ValidationCode::DuplicateName,
                         ": " + lf.name + " is already defined in this file."),
             SExpr::symbol(lf.name)});
      }
    }
    out.push_back(std::move(lf));
  }
  return out;
}

}  // namespace autograde

#include "autograde/exec.hpp"

#include <algorithm>
#include <unordered_set>

namespace autograde {

LetterNotInAlphabet::LetterNotInAlphabet(SExpr letter, std::size_t index)
    : std::runtime_error("letter " + print_sexpr(letter) + " at position " +
                         std::to_string(index) + " is not in the alphabet"),
      letter_(std::move(letter)),
      index_(index) {}

void RunBounds::validate() const {
  if (pda_depth < 1) throw std::invalid_argument("pda depth bound must be at least 1");
  if (tm_steps < 1) throw std::invalid_argument("tm step bound must be at least 1");
  if (pda_node_budget < 1) throw std::invalid_argument("pda node budget must be at least 1");
}

std::vector<std::size_t> encode_word(const SymbolSet& alphabet, std::span<const SExpr> word) {
  std::vector<std::size_t> out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    auto idx = alphabet.index_of(word[i]);
    if (!idx) throw LetterNotInAlphabet(word[i], i);
    out.push_back(*idx);
  }
  return out;
}

std::size_t run_dfa_from(const Dfa& m, std::size_t state, std::span<const std::size_t> letters) {
  for (auto a : letters) state = m.next(state, a);
  return state;
}

const SExpr& run_dfa(const Dfa& m, std::span<const SExpr> word) {
  auto letters = encode_word(m.alphabet(), word);
  return m.states()[run_dfa_from(m, m.start(), letters)];
}

bool accept_dfa(const Dfa& m, std::span<const SExpr> word) {
  auto letters = encode_word(m.alphabet(), word);
  return m.is_accepting(run_dfa_from(m, m.start(), letters));
}

namespace {

struct TupleHash {
  std::size_t operator()(const PdaExecTuple& t) const noexcept {
    std::size_t h = t.state * 0x9e3779b97f4a7c15ULL ^ (t.consumed + 0x632be59bd9b4e019ULL);
    for (auto s : t.stack) h = (h ^ (s + 0x9e3779b9)) * 0x100000001b3ULL;
    return h;
  }
};

bool is_accepting(const Pda& m, const PdaExecTuple& t, std::size_t length) {
  return t.consumed == length && m.is_accepting(t.state);
}

// Children of `t` under every matching key, in key order
// (c,t), (c,eps), (eps,t), (eps,eps). Returns false if `t` is not active.
bool expand(const Pda& m, std::span<const std::size_t> letters, const PdaExecTuple& t,
            std::vector<PdaExecTuple>& children) {
  std::optional<std::size_t> c, top;
  if (t.consumed < letters.size()) c = letters[t.consumed];
  if (!t.stack.empty()) top = t.stack.front();

  bool active = false;
  auto apply = [&](std::optional<std::size_t> letter, std::optional<std::size_t> pop) {
    const auto* moves = m.moves(t.state, letter, pop);
    if (!moves) return;
    active = true;
    for (const auto& mv : *moves) {
      PdaExecTuple child;
      child.state = mv.target;
      child.consumed = t.consumed + (letter ? 1 : 0);
      std::size_t skip = pop ? 1 : 0;
      child.stack.reserve(t.stack.size() - skip + (mv.push ? 1 : 0));
      if (mv.push) child.stack.push_back(*mv.push);
      child.stack.insert(child.stack.end(), t.stack.begin() + static_cast<std::ptrdiff_t>(skip),
                         t.stack.end());
      children.push_back(std::move(child));
    }
  };
  if (c && top) apply(c, top);
  if (c) apply(c, std::nullopt);
  if (top) apply(std::nullopt, top);
  apply(std::nullopt, std::nullopt);
  return active;
}

}  // namespace

PdaRun run_pda(const Pda& m, std::span<const SExpr> word, std::size_t depth,
               std::size_t node_budget) {
  if (depth < 1) throw std::invalid_argument("pda depth bound must be at least 1");
  auto letters = encode_word(m.alphabet(), word);
  PdaRun run;

  PdaExecTuple root{m.start(), {}, 0};
  run.nodes = 1;
  if (is_accepting(m, root, letters.size())) {
    run.accepted = true;
    return run;
  }
  std::unordered_set<PdaExecTuple, TupleHash> seen{root};
  std::vector<PdaExecTuple> frontier{root};
  std::vector<PdaExecTuple> next;
  std::vector<PdaExecTuple> children;

  for (std::size_t level = 0; level < depth; ++level) {
    next.clear();
    for (const auto& t : frontier) {
      children.clear();
      expand(m, letters, t, children);
      for (auto& child : children) {
        ++run.nodes;
        if (is_accepting(m, child, letters.size())) {
          run.accepted = true;
          return run;
        }
        if (run.nodes >= node_budget) {
          run.budget_exceeded = true;
          return run;
        }
        if (seen.insert(child).second) next.push_back(std::move(child));
      }
    }
    frontier.swap(next);
    if (frontier.empty()) {
      run.exhausted = true;
      return run;
    }
  }
  // Nodes at the bound are leaves of the explored tree; any active one means
  // a deeper search could still differ.
  run.exhausted = std::none_of(frontier.begin(), frontier.end(), [&](const PdaExecTuple& t) {
    children.clear();
    return expand(m, letters, t, children);
  });
  return run;
}

bool accept_pda(const Pda& m, std::span<const SExpr> word, std::size_t depth,
                std::size_t node_budget) {
  return run_pda(m, word, depth, node_budget).accepted;
}

const char* to_string(TmStatus s) {
  switch (s) {
    case TmStatus::Accepted: return "accepted";
    case TmStatus::Rejected: return "rejected";
    case TmStatus::OutOfFuel: return "out-of-fuel";
  }
  return "?";
}

TmConfiguration run_tm(const Tm& m, std::span<const SExpr> word, std::size_t steps) {
  const auto& tape = m.tape_alphabet();
  std::vector<std::size_t> input;
  input.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!m.alphabet().contains(word[i])) throw LetterNotInAlphabet(word[i], i);
    input.push_back(*tape.index_of(word[i]));
  }

  // Both halves keep the cell nearest the head at the back.
  std::vector<std::size_t> left;
  std::vector<std::size_t> right(input.rbegin(), input.rend());
  std::size_t state = m.start();
  std::size_t taken = 0;
  const std::size_t blank = m.blank();

  auto halted = [&] { return state == m.accept() || state == m.reject(); };
  while (!halted() && taken < steps) {
    std::size_t symbol = right.empty() ? blank : right.back();
    const TmMove* mv = m.move(state, symbol);
    ++taken;
    if (!mv) {
      state = m.reject();
      break;
    }
    if (right.empty())
      right.push_back(mv->write);
    else
      right.back() = mv->write;
    if (mv->direction == Direction::Right) {
      left.push_back(right.back());
      right.pop_back();
    } else {
      std::size_t cell = blank;
      if (!left.empty()) {
        cell = left.back();
        left.pop_back();
      }
      right.push_back(cell);
    }
    state = mv->target;
  }

  TmConfiguration c;
  c.state = m.states()[state];
  c.status = state == m.accept()   ? TmStatus::Accepted
             : state == m.reject() ? TmStatus::Rejected
                                   : TmStatus::OutOfFuel;
  c.steps = taken;
  for (auto it = left.rbegin(); it != left.rend(); ++it) c.left.push_back(tape[*it]);
  for (auto it = right.rbegin(); it != right.rend(); ++it) c.right.push_back(tape[*it]);
  return c;
}

Word left_of_head(const TmConfiguration& c) { return Word(c.left.rbegin(), c.left.rend()); }

Word remove_final_nils(Word s) {
  while (!s.empty() && s.back().is_nil()) s.pop_back();
  return s;
}

Word tm_output(const Tm& m, std::span<const SExpr> word, std::size_t steps) {
  return remove_final_nils(left_of_head(run_tm(m, word, steps)));
}

bool accept_tm(const Tm& m, std::span<const SExpr> word, std::size_t steps) {
  return run_tm(m, word, steps).status == TmStatus::Accepted;
}

bool accepts(const Machine& m, std::span<const SExpr> word, const RunBounds& bounds) {
  switch (kind_of(m)) {
    case MachineKind::Dfa: return accept_dfa(std::get<Dfa>(m), word);
    case MachineKind::Pda: return accept_pda(std::get<Pda>(m), word, bounds.pda_depth, bounds.pda_node_budget);
    case MachineKind::Tm: return accept_tm(std::get<Tm>(m), word, bounds.tm_steps);
  }
  return false;
}

}  // namespace autograde

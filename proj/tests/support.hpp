#pragma once

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "autograde/model.hpp"
#include "autograde/sexpr.hpp"

namespace testing {

inline std::string data_path(const std::string& name) {
  return std::string(AUTOGRADE_TEST_DATA) + "/" + name;
}

inline std::string slurp(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline autograde::SExpr parse1(std::string_view text) {
  auto forms = autograde::parse_sexprs(text);
  if (forms.size() != 1) throw std::runtime_error("expected one form");
  return forms.front();
}

inline autograde::Machine machine(std::string_view text) {
  auto r = autograde::build_machine(parse1(text));
  if (!r.ok()) throw std::runtime_error("invalid machine: " + r.errors.front().message);
  return *r.value;
}

inline autograde::Machine load(const std::string& name) { return machine(slurp(name)); }

template <class T>
T load_as(const std::string& name) {
  return std::get<T>(load(name));
}

inline autograde::Word bits(std::string_view s) {
  autograde::Word w;
  for (char c : s) w.push_back(autograde::SExpr::integer(c - '0'));
  return w;
}

/// Every word over {0,1} of length <= n, shortest first.
inline std::vector<autograde::Word> all_bit_words(std::size_t n) {
  std::vector<autograde::Word> out{{}};
  for (std::size_t start = 0; start < out.size(); ++start) {
    if (out[start].size() == n) continue;
    for (int b = 0; b < 2; ++b) {
      auto w = out[start];
      w.push_back(autograde::SExpr::integer(b));
      out.push_back(std::move(w));
    }
  }
  return out;
}

/// Random complete DFA over {0,1} with `states` states, as gen-dfa text.
inline std::string random_dfa_text(std::mt19937_64& rng, std::size_t states,
                                   const std::string& name) {
  std::uniform_int_distribution<std::size_t> pick(0, states - 1);
  std::bernoulli_distribution coin(0.5);
  std::string s = "(gen-dfa :name " + name + " :states (";
  for (std::size_t i = 0; i < states; ++i) s += " s" + std::to_string(i);
  s += ") :alphabet (0 1) :start s" + std::to_string(pick(rng)) + " :accept (";
  for (std::size_t i = 0; i < states; ++i)
    if (coin(rng)) s += " s" + std::to_string(i);
  s += ") :transition-fun (";
  for (std::size_t i = 0; i < states; ++i)
    for (int b = 0; b < 2; ++b)
      s += "((s" + std::to_string(i) + " " + std::to_string(b) + ") . s" +
           std::to_string(pick(rng)) + ")";
  s += "))";
  return s;
}

inline std::string random_pda_text(std::mt19937_64& rng) {
  std::size_t n = 1 + rng() % 3;
  auto state = [&](std::size_t i) { return "s" + std::to_string(i); };
  const char* letters[] = {"0", "1", ":e"};
  const char* stack[] = {"a", "b", ":e"};
  std::string s = "(gen-pda :name p :states (";
  for (std::size_t i = 0; i < n; ++i) s += " " + state(i);
  s += ") :alphabet (0 1) :stack-alphabet (a b) :start-state s0 :accept-states (";
  for (std::size_t i = 0; i < n; ++i)
    if (rng() % 2) s += " " + state(i);
  s += ") :transition-fun (";
  std::set<std::string> used;
  auto entry = [&](const std::string& key) {
    if (!used.insert(key).second) return;
    s += "((" + key + ") . (";
    std::size_t k = rng() % 3;
    for (std::size_t j = 0; j < k; ++j)
      s += "(" + state(rng() % n) + " " + stack[rng() % 3] + ")";
    s += "))";
  };
  entry("s0 :e :e");
  std::size_t extra = rng() % 6;
  for (std::size_t i = 0; i < extra; ++i)
    entry(state(rng() % n) + " " + letters[rng() % 3] + " " + stack[rng() % 3]);
  s += "))";
  return s;
}

inline std::string random_tm_text(std::mt19937_64& rng) {
  const char* syms[] = {"0", "1", "nil"};
  std::string s =
      "(gen-tm :name t :states (q0 q1 q2 qa qr) :alphabet (0 1) :tape-alphabet (0 1 nil) "
      ":start-state q0 :accept-state qa :reject-state qr :transition-fun (";
  const char* targets[] = {"q0", "q1", "q2", "qa", "qr", "q0", "q1", "q2"};
  for (const char* q : {"q0", "q1", "q2"})
    for (const char* a : syms)
      if (rng() % 6)
        s += std::string("((") + q + " " + a + ") . (" + targets[rng() % 8] + " " +
             syms[rng() % 3] + (rng() % 2 ? " L" : " R") + "))";
  s += "))";
  return s;
}

inline autograde::Word random_bits(std::mt19937_64& rng, std::size_t max_len) {
  autograde::Word w(rng() % (max_len + 1));
  for (auto& l : w) l = autograde::SExpr::integer(static_cast<std::int64_t>(rng() % 2));
  return w;
}

inline autograde::SExpr random_atom(std::mt19937_64& rng) {
  static const char* names[] = {"A", "Q0", "E1", "STUDENT-DFA", "*M*", "=>", "$", "NIL", "X_Y"};
  switch (rng() % 3) {
    case 0: return autograde::SExpr::integer(static_cast<std::int64_t>(rng() % 2001) - 1000);
    case 1: return autograde::SExpr::symbol(names[rng() % std::size(names)]);
    default: return autograde::SExpr::keyword(rng() % 2 ? "E" : "NAME");
  }
}

inline autograde::SExpr random_sexpr(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return random_atom(rng);
  if (rng() % 4 == 0) return autograde::SExpr::dotted(random_sexpr(rng, depth - 1), random_sexpr(rng, depth - 1));
  std::vector<autograde::SExpr> items(rng() % 5);
  for (auto& it : items) it = random_sexpr(rng, depth - 1);
  return autograde::SExpr::list(std::move(items));
}

}  // namespace testing

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "autograde/equiv.hpp"
#include "autograde/exec.hpp"
#include "autograde/grade.hpp"
#include "autograde/property.hpp"
#include "support.hpp"

using namespace autograde;

namespace {

// Pinned limits.
constexpr double kDfaSeconds = 5.0;
constexpr double kPdaSeconds = 10.0;
constexpr double kPdaOracleSeconds = 60.0;
constexpr std::size_t kPdaDepth = 1000;
constexpr std::size_t kOracleLen = 12;
constexpr std::size_t kOracleWords = 8191;
constexpr std::size_t kMaxN = 6;
constexpr int kDfaPairs = 200;
constexpr std::size_t kMaxStates = 6;
constexpr std::size_t kWitnessLen = 3;
constexpr std::size_t kPropertyTests = 1000;
constexpr int kInvariantCases = 1000;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [" << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const GradeItem* item(const GradeReport& r, std::string_view name) {
  for (const auto& it : r.items)
    if (it.name == name) return &it;
  return nullptr;
}

bool starts_with(const std::string& s, std::string_view prefix) {
  return s.rfind(prefix, 0) == 0;
}

GradeReport grade_file(const Assignment& a, const char* submission) {
  return grade_submission(a, testing::slurp(submission));
}

Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool is_0n1n(const Word& w) {
  if (w.size() % 2) return false;
  std::size_t h = w.size() / 2;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != SExpr::integer(i < h ? 0 : 1)) return false;
  return true;
}

// 1 ------------------------------------------------------------------
void dfa_dialogue(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto a = parse_assignment(testing::slurp("dfa_assignment.lisp"));
  const auto& ref = a.reference;

  auto r1 = grade_file(a, "dfa_stage1.lisp");
  auto v1 = item(r1, "Validity");
  o.require(v1 && !v1->passed &&
                starts_with(v1->feedback, validation_prefix(ValidationCode::BadTransitionDomain)),
            "stage 1 BadTransitionDomain");

  auto r2 = grade_file(a, "dfa_stage2.lisp");
  auto v2 = item(r2, "Alphabet");
  o.require(v2 && v2->feedback == kIncorrectAlphabet, "stage 2 alphabet message");

  auto r3 = grade_file(a, "dfa_stage3.lisp");
  auto v3 = item(r3, "Equivalence");
  auto broken = testing::load("dfa_stage3.lisp");
  bool hit = false, verified = v3 && !v3->witnesses.empty();
  if (v3) {
    for (const auto& w : v3->witnesses) {
      for (const char* s : {"0111", "1110", "111"}) hit = hit || w == testing::bits(s);
      verified = verified && disagree(broken, ref, w, a.cfg.bounds);
    }
  }
  o.require(v3 && starts_with(v3->feedback, kMisclassified), "stage 3 misclassified message");
  o.require(hit, "stage 3 witness among the dialogue words");
  o.require(verified, "stage 3 witnesses are real disagreements");

  auto r4 = grade_file(a, "dfa_stage4.lisp");
  o.require(r4.full_score() && r4.summary() == "student-dfa is correct.", "stage 4 correct");

  double s = seconds_since(t0);
  o.require(s < kDfaSeconds, "runtime");
  o.note << " witnesses " << (v3 ? print_word_list(v3->witnesses) : "-") << ", " << s << " s";
}

// 2 ------------------------------------------------------------------
void pda_dialogue(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto a = parse_assignment(testing::slurp("pda_assignment.lisp"));
  o.require(a.cfg.bounds.pda_depth == kPdaDepth, "pda depth 1000");

  auto r1 = grade_file(a, "pda_stage1.lisp");
  auto v1 = item(r1, "Validity");
  o.require(v1 && v1->feedback ==
                      "Starting transition from (Q1 :e :e) missing from the transition function.",
            "stage 1 start-transition message");

  auto r2 = grade_file(a, "pda_stage2.lisp");
  auto v2 = item(r2, "Equivalence");
  bool has_eps = v2 && std::find(v2->witnesses.begin(), v2->witnesses.end(), Word{}) !=
                           v2->witnesses.end();
  o.require(v2 && starts_with(v2->feedback, kMisclassified) && has_eps &&
                v2->feedback.find(":e") != std::string::npos,
            "stage 2 reports :e");

  for (const char* fix : {"pda_stage3_accept.lisp", "pda_stage3_eps.lisp"}) {
    auto r = grade_file(a, fix);
    o.require(r.full_score() && r.summary() == "student-pda is correct.", fix);
  }
  double s = seconds_since(t0);
  o.require(s < kPdaSeconds, "runtime");
  o.note << " " << s << " s";
}

// 3 ------------------------------------------------------------------
void tm_dialogue(Outcome& o) {
  auto a = parse_assignment(testing::slurp("tm_assignment.lisp"));
  const auto& ref = std::get<Tm>(a.reference);
  std::size_t steps = a.cfg.bounds.tm_steps;

  auto r1 = grade_file(a, "tm_stage1.lisp");
  auto v1 = item(r1, "Validity");
  o.require(v1 && v1->feedback == "Blank tape symbol nil missing from tape-alphabet.",
            "stage 1 blank-tape message");

  auto r2 = grade_file(a, "tm_stage2.lisp");
  auto v2 = item(r2, "Equivalence");
  auto buggy = testing::load_as<Tm>("tm_stage2.lisp");
  bool verified = v2 && !v2->witnesses.empty();
  if (v2)
    for (const auto& w : v2->witnesses)
      verified = verified && tm_output(buggy, w, steps) != tm_output(ref, w, steps);
  o.require(v2 && starts_with(v2->feedback, kIncorrectOutput), "stage 2 incorrect-output message");
  o.require(verified, "stage 2 witnesses are real output disagreements");

  auto r3 = grade_file(a, "tm_stage3.lisp");
  o.require(r3.full_score() && r3.summary() == "student-tm is correct.", "stage 3 correct");

  Word in = testing::bits("10111010"), out = testing::bits("01000101");
  o.require(tm_output(ref, in, steps) == out, "reference check= value");
  o.require(tm_output(testing::load_as<Tm>("tm_stage3.lisp"), in, steps) == out,
            "corrected check= value");
  o.note << " witnesses " << (v2 ? print_word_list(v2->witnesses) : "-");
}

// 4 ------------------------------------------------------------------
void pda_oracle(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto words = testing::all_bit_words(kOracleLen);
  o.require(words.size() == kOracleWords, "8191 words");
  for (const char* f : {"pda_stage3_eps.lisp", "pda_stage3_accept.lisp"}) {
    auto m = testing::load_as<Pda>(f);
    std::size_t wrong = 0, accepted = 0;
    for (const auto& w : words) {
      bool want = is_0n1n(w) && w.size() / 2 <= kMaxN;
      bool got = accept_pda(m, w, kPdaDepth);
      accepted += got;
      wrong += got != want;
    }
    o.require(wrong == 0, f);
    o.require(accepted == kMaxN + 1, std::string(f) + " accept count");
    o.note << " " << f << ": " << accepted << " accepted, " << wrong << " wrong;";
  }
  double s = seconds_since(t0);
  o.require(s < kPdaOracleSeconds, "runtime");
  o.note << " " << s << " s";
}

// 5 ------------------------------------------------------------------
void dfa_decision_oracle(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  auto words = testing::all_bit_words(kOracleLen);
  int mismatches = 0, not_shortest = 0, differing = 0;
  for (int i = 0; i < kDfaPairs; ++i) {
    auto a = std::get<Dfa>(testing::machine(
        testing::random_dfa_text(rng, 1 + rng() % kMaxStates, "a")));
    auto b = std::get<Dfa>(testing::machine(
        testing::random_dfa_text(rng, 1 + rng() % kMaxStates, "b")));
    auto v = dfa_equiv_decide(a, b);
    const Word* first = nullptr;
    for (const auto& w : words)
      if (accept_dfa(a, w) != accept_dfa(b, w)) {
        first = &w;
        break;
      }
    if (!first) {
      mismatches += !v.equivalent();
      continue;
    }
    ++differing;
    if (v.outcome != EquivVerdict::Outcome::NotEquivalent || v.witnesses.size() != 1 ||
        accept_dfa(a, v.witnesses[0]) == accept_dfa(b, v.witnesses[0])) {
      ++mismatches;
      continue;
    }
    not_shortest += v.witnesses[0].size() != first->size();
  }
  o.require(mismatches == 0, "verdict mismatches");
  o.require(not_shortest == 0, "witness not shortest");
  auto v = dfa_equiv_decide(testing::load_as<Dfa>("dfa_stage3.lisp"),
                            testing::load_as<Dfa>("dfa_instructor.lisp"));
  bool three = v.witnesses.size() == 1 && v.witnesses[0].size() == kWitnessLen;
  o.require(three, "dialogue witness length 3");
  o.note << " " << kDfaPairs << " pairs, " << differing << " differing, " << mismatches
         << " mismatches, " << not_shortest << " non-shortest; dialogue witness "
         << (v.witnesses.empty() ? "-" : print_word(v.witnesses[0]));
}

// 6 ------------------------------------------------------------------
void property_suite(Outcome& o) {
  TestConfig cfg;
  cfg.num_tests = kPropertyTests;
  struct Case {
    const char* assignment;
    const char* key;
    const char* fixed;
    std::vector<const char*> broken;
  };
  const Case cases[] = {
      {"dfa_assignment.lisp", "STUDENT-DFA", "dfa_stage4.lisp",
       {"dfa_stage2.lisp", "dfa_stage3.lisp"}},
      {"pda_assignment.lisp", "STUDENT-PDA", "pda_stage3_eps.lisp", {"pda_stage2.lisp"}},
      {"tm_assignment.lisp", "STUDENT-TM", "tm_stage3.lisp", {"tm_stage2.lisp"}},
  };
  for (const auto& c : cases) {
    auto a = parse_assignment(testing::slurp(c.assignment));
    const auto& p = a.properties.front().spec;
    TestConfig run = a.cfg;
    run.num_tests = cfg.num_tests;
    MachineTable fixed{{c.key, testing::load(c.fixed)}};
    auto good = check_property(p, fixed, run);
    o.require(good.passed && good.words_tested >= kPropertyTests,
              p.name + " passes on " + c.fixed);
    // Each broken stage that builds is tried; the property must fail on at
    // least one of them with a counterexample.
    bool failed = false;
    o.note << " " << p.name << ":";
    for (const char* b : c.broken) {
      MachineTable t{{c.key, testing::load(b)}};
      auto r = check_property(p, t, run);
      o.note << " " << b << "="
             << (r.passed ? "holds"
                          : "fails on " + print_word(*r.counterexample) +
                                (r.reason.empty() ? "" : " (" + r.reason + ")"));
      failed = failed || (!r.passed && r.counterexample.has_value());
    }
    o.note << ";";
    o.require(failed, p.name + " fails on a broken machine");
  }
}

// 7 ------------------------------------------------------------------
void invariants(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  int bad_pda = 0, bad_tm = 0, bad_dfa = 0, bad_nils = 0, bad_print = 0;
  for (int i = 0; i < kInvariantCases; ++i) {
    auto m = testing::machine(testing::random_pda_text(rng));
    const auto& p = std::get<Pda>(m);
    Word w = testing::random_bits(rng, 4);
    std::size_t d1 = 1 + rng() % 10, d2 = d1 + rng() % 20;
    auto r1 = run_pda(p, w, d1), r2 = run_pda(p, w, d2);
    bad_pda += (r1.accepted && !r2.accepted) ||
               (!r1.accepted && r1.exhausted && (r2.accepted || !r2.exhausted));
  }
  for (int i = 0; i < kInvariantCases; ++i) {
    auto m = testing::machine(testing::random_tm_text(rng));
    const auto& t = std::get<Tm>(m);
    Word w = testing::random_bits(rng, 5);
    std::size_t k1 = 1 + rng() % 30, k2 = k1 + rng() % 50;
    auto a = run_tm(t, w, k1), b = run_tm(t, w, k2);
    if (a.status != TmStatus::OutOfFuel)
      bad_tm += b.status != a.status || b.steps != a.steps || b.left != a.left ||
                b.right != a.right;
  }
  for (int i = 0; i < kInvariantCases; ++i) {
    auto m = testing::machine(testing::random_dfa_text(rng, 1 + rng() % 6, "d"));
    const auto& d = std::get<Dfa>(m);
    Word u = testing::random_bits(rng, 8), v = testing::random_bits(rng, 8);
    auto lu = encode_word(d.alphabet(), u), lv = encode_word(d.alphabet(), v);
    auto luv = encode_word(d.alphabet(), concat(u, v));
    bad_dfa += run_dfa_from(d, d.start(), luv) !=
               run_dfa_from(d, run_dfa_from(d, d.start(), lu), lv);
  }
  const SExpr pool[] = {SExpr::nil(), SExpr::integer(0), SExpr::integer(1), SExpr::symbol("X")};
  for (int i = 0; i < kInvariantCases; ++i) {
    Word w(rng() % 10);
    for (auto& l : w) l = pool[rng() % 4];
    Word once = remove_final_nils(w);
    bad_nils += remove_final_nils(once) != once;
  }
  for (int i = 0; i < kInvariantCases; ++i) {
    SExpr e = testing::random_sexpr(rng, 5);
    auto back = parse_sexprs(print_sexpr(e));
    bad_print += back.size() != 1 || back[0] != e;
  }
  o.require(bad_pda == 0, "PDA bound monotonicity");
  o.require(bad_tm == 0, "TM halt monotonicity");
  o.require(bad_dfa == 0, "run_dfa compositionality");
  o.require(bad_nils == 0, "remove_final_nils idempotence");
  o.require(bad_print == 0, "parse . print identity");
  o.note << " " << kInvariantCases << " cases each; failures " << bad_pda << "/" << bad_tm << "/"
         << bad_dfa << "/" << bad_nils << "/" << bad_print;
}

// 8 ------------------------------------------------------------------
void report_determinism(Outcome& o) {
  const std::pair<const char*, std::vector<const char*>> runs[] = {
      {"dfa_assignment.lisp",
       {"dfa_stage1.lisp", "dfa_stage2.lisp", "dfa_stage3.lisp", "dfa_stage4.lisp"}},
      {"pda_assignment.lisp",
       {"pda_stage1.lisp", "pda_stage2.lisp", "pda_stage3_accept.lisp", "pda_stage3_eps.lisp"}},
      {"tm_assignment.lisp", {"tm_stage1.lisp", "tm_stage2.lisp", "tm_stage3.lisp"}},
  };
  int reports = 0;
  for (const auto& [assignment, submissions] : runs) {
    for (const char* s : submissions) {
      // Parse the assignment anew each time so nothing is shared.
      auto first = render_gradescope_json(
          grade_submission(parse_assignment(testing::slurp(assignment)), testing::slurp(s)));
      auto second = render_gradescope_json(
          grade_submission(parse_assignment(testing::slurp(assignment)), testing::slurp(s)));
      o.require(first == second, std::string(s) + " byte-identical");
      try {
        auto j = nlohmann::json::parse(first);
        std::int64_t sum = 0;
        for (const auto& t : j.at("tests")) sum += t.at("score").get<std::int64_t>();
        o.require(j.at("score").get<std::int64_t>() == sum, std::string(s) + " score sum");
      } catch (const nlohmann::json::exception& e) {
        o.require(false, std::string(s) + " JSON: " + e.what());
      }
      ++reports;
    }
  }
  o.note << " " << reports << " reports";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"1 DFA dialogue replay", dfa_dialogue},
      {"2 PDA dialogue replay", pda_dialogue},
      {"3 TM dialogue replay", tm_dialogue},
      {"4 PDA language oracle", pda_oracle},
      {"5 DFA decision oracle", dfa_decision_oracle},
      {"6 property suite", property_suite},
      {"7 interpreter invariants", invariants},
      {"8 report determinism", report_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << " [exception: " << e.what() << "]";
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ":" << o.note.str() << std::endl;
  }
  std::cout << (8 - failed) << "/8 criteria passed" << std::endl;
  return failed ? 1 : 0;
}

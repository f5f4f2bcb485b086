#include <doctest.h>

#include <random>
#include <set>

#include "autograde/equiv.hpp"
#include "support.hpp"

using namespace autograde;

namespace {

std::vector<SExpr> bits_alphabet() { return {SExpr::integer(0), SExpr::integer(1)}; }

// Shortest word (in enumeration order) on which the DFAs disagree, if any.
std::optional<Word> oracle_disagreement(const Dfa& a, const Dfa& b,
                                        const std::vector<Word>& words) {
  for (const auto& w : words)
    if (accept_dfa(a, w) != accept_dfa(b, w)) return w;
  return std::nullopt;
}

}  // namespace

TEST_CASE("gen_words: exhaustive prefix then seeded random words") {
  TestConfig cfg;
  cfg.num_tests = 100;
  cfg.exhaustive_len = 3;
  auto words = gen_words(bits_alphabet(), cfg);
  REQUIRE(words.size() == 100);
  auto all = testing::all_bit_words(3);
  REQUIRE(all.size() == 15);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(words[i] == all[i]);
  for (const auto& w : words) CHECK(w.size() <= cfg.max_word_len);
  CHECK(words == gen_words(bits_alphabet(), cfg));
  TestConfig other = cfg;
  other.seed = 1;
  CHECK(words != gen_words(bits_alphabet(), other));
  // Alphabet order does not matter.
  CHECK(words == gen_words(std::vector<SExpr>{SExpr::integer(1), SExpr::integer(0)}, cfg));
}

TEST_CASE("gen_words: prefix is emitted in full even past num_tests") {
  TestConfig cfg;
  cfg.num_tests = 3;
  cfg.exhaustive_len = 2;
  CHECK(gen_words(bits_alphabet(), cfg).size() == 7);
  cfg.exhaustive_len = 0;
  auto words = gen_words(bits_alphabet(), cfg);
  REQUIRE(words.size() == 3);
  CHECK(words[0].empty());
}

TEST_CASE("gen_words: argument checks") {
  TestConfig cfg;
  CHECK_THROWS_AS(gen_words(std::vector<SExpr>{}, cfg), EmptyAlphabet);
  cfg.exhaustive_len = 9;
  CHECK_THROWS_AS(gen_words(bits_alphabet(), cfg), std::invalid_argument);
  cfg = {};
  cfg.num_tests = 0;
  CHECK_THROWS_AS(gen_words(bits_alphabet(), cfg), std::invalid_argument);
}

TEST_CASE("property: random lengths cover the whole range") {
  TestConfig cfg;
  cfg.num_tests = 5000;
  cfg.exhaustive_len = 0;
  cfg.max_word_len = 6;
  std::set<std::size_t> lengths;
  std::size_t ones = 0, letters = 0;
  for (const auto& w : gen_words(bits_alphabet(), cfg)) {
    lengths.insert(w.size());
    for (const auto& l : w) {
      ++letters;
      ones += l == SExpr::integer(1);
    }
  }
  CHECK(lengths.size() == 7);
  double frac = static_cast<double>(ones) / static_cast<double>(letters);
  CHECK(frac > 0.45);
  CHECK(frac < 0.55);
}

TEST_CASE("alphabet_equal returns the least differing symbol") {
  std::vector<SExpr> a = {SExpr::integer(0), SExpr::integer(2)};
  std::vector<SExpr> b = {SExpr::integer(1), SExpr::integer(0)};
  auto d = alphabet_equal(a, b);
  REQUIRE(d);
  CHECK(*d == SExpr::integer(1));
  CHECK_FALSE(alphabet_equal(b, std::vector<SExpr>{SExpr::integer(0), SExpr::integer(1)}));
}

TEST_CASE("language testing on the DFA dialogue") {
  auto ref = testing::load("dfa_instructor.lisp");
  auto v2 = test_equiv_lang(testing::load("dfa_stage2.lisp"), ref, {});
  CHECK(v2.outcome == EquivVerdict::Outcome::AlphabetMismatch);
  CHECK(*v2.witness_symbol == SExpr::integer(1));

  auto v3 = test_equiv_lang(testing::load("dfa_stage3.lisp"), ref, {});
  REQUIRE(v3.outcome == EquivVerdict::Outcome::NotEquivalent);
  CHECK(v3.witnesses.size() == 3);
  CHECK(v3.witnesses[0] == testing::bits("111"));
  for (const auto& w : v3.witnesses)
    CHECK(disagree(testing::load("dfa_stage3.lisp"), ref, w, RunBounds{}));

  auto v4 = test_equiv_lang(testing::load("dfa_stage4.lisp"), ref, {});
  CHECK(v4.equivalent());
  CHECK(v4.words_tested == 1000);
}

TEST_CASE("language testing on the PDA dialogue") {
  auto ref = testing::load("pda_instructor.lisp");
  auto v = test_equiv_lang(testing::load("pda_stage2.lisp"), ref, {});
  REQUIRE(v.outcome == EquivVerdict::Outcome::NotEquivalent);
  CHECK(v.witnesses == std::vector<Word>{Word{}});
  CHECK(print_word_list(v.witnesses) == "(:e)");
  CHECK(test_equiv_lang(testing::load("pda_stage3_accept.lisp"), ref, {}).equivalent());
  CHECK(test_equiv_lang(testing::load("pda_stage3_eps.lisp"), ref, {}).equivalent());
  CHECK_THROWS_AS(test_equiv_lang(testing::load("dfa_instructor.lisp"), ref, {}), KindMismatch);
}

TEST_CASE("output testing on the TM dialogue") {
  auto ref = testing::load_as<Tm>("tm_instructor.lisp");
  auto v = test_equiv_tm_output(testing::load_as<Tm>("tm_stage2.lisp"), ref, {});
  REQUIRE(v.outcome == EquivVerdict::Outcome::NotEquivalent);
  CHECK(v.witnesses.size() == 3);
  CHECK(v.witnesses[0] == testing::bits("0"));
  CHECK(test_equiv_tm_output(testing::load_as<Tm>("tm_stage3.lisp"), ref, {}).equivalent());
  CHECK(test_equiv_tm_output(ref, ref, {}).equivalent());
}

TEST_CASE("decision procedure on the DFA dialogue") {
  auto ref = testing::load_as<Dfa>("dfa_instructor.lisp");
  auto v = dfa_equiv_decide(testing::load_as<Dfa>("dfa_stage3.lisp"), ref);
  REQUIRE(v.outcome == EquivVerdict::Outcome::NotEquivalent);
  REQUIRE(v.witnesses.size() == 1);
  CHECK(v.witnesses[0] == testing::bits("111"));
  CHECK(v.method == EquivVerdict::Method::Decision);
  CHECK(dfa_equiv_decide(testing::load_as<Dfa>("dfa_stage4.lisp"), ref).equivalent());
  CHECK(dfa_equiv_decide(ref, ref).equivalent());
  CHECK(dfa_equiv_decide(testing::load_as<Dfa>("dfa_stage2.lisp"), ref).outcome ==
        EquivVerdict::Outcome::AlphabetMismatch);
}

TEST_CASE("decision procedure: empty word witness and symbol alphabets") {
  auto a = testing::machine(
      "(gen-dfa :name a :states (s) :alphabet (x y) :start s :accept (s) "
      ":transition-fun (((s x) . s) ((s y) . s)))");
  auto b = testing::machine(
      "(gen-dfa :name b :states (s) :alphabet (y x) :start s :accept () "
      ":transition-fun (((s x) . s) ((s y) . s)))");
  auto v = dfa_equiv_decide(std::get<Dfa>(a), std::get<Dfa>(b));
  REQUIRE(v.outcome == EquivVerdict::Outcome::NotEquivalent);
  CHECK(v.witnesses[0].empty());
}

TEST_CASE("property: decision matches the exhaustive oracle and witnesses are shortest") {
  std::mt19937_64 rng(4242);
  auto words = testing::all_bit_words(10);
  int differing = 0;
  for (int i = 0; i < 1000; ++i) {
    auto a = std::get<Dfa>(testing::machine(testing::random_dfa_text(rng, 1 + rng() % 5, "a")));
    auto b = std::get<Dfa>(testing::machine(testing::random_dfa_text(rng, 1 + rng() % 5, "b")));
    auto v = dfa_equiv_decide(a, b);
    auto back = dfa_equiv_decide(b, a);
    auto oracle = oracle_disagreement(a, b, words);
    CHECK(v.outcome == back.outcome);
    if (oracle) {
      ++differing;
      REQUIRE(v.outcome == EquivVerdict::Outcome::NotEquivalent);
      REQUIRE(v.witnesses.size() == 1);
      CHECK(accept_dfa(a, v.witnesses[0]) != accept_dfa(b, v.witnesses[0]));
      CHECK(v.witnesses[0].size() == oracle->size());
      CHECK(back.witnesses[0].size() == oracle->size());
    } else {
      CHECK(v.equivalent());
    }
    // Testing can only find real differences.
    TestConfig cfg;
    cfg.num_tests = 50;
    cfg.exhaustive_len = 3;
    auto t = test_equiv_lang(Machine(a), Machine(b), cfg);
    if (!t.equivalent()) CHECK_FALSE(v.equivalent());
  }
  CHECK(differing > 300);
}

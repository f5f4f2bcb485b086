#include "autograde/equiv.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace autograde {

void TestConfig::validate() const {
  if (num_tests < 1) throw std::invalid_argument("num_tests must be positive");
  if (max_word_len < 1) throw std::invalid_argument("max_word_len must be positive");
  if (exhaustive_len > max_word_len)
    throw std::invalid_argument("exhaustive_len must not exceed max_word_len");
  if (max_reported < 1) throw std::invalid_argument("max_reported must be positive");
  bounds.validate();
}

namespace {

// Uniform draw in [0, n) that does not depend on the standard library's
// distribution implementations, so word streams are identical everywhere.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

std::vector<Word> gen_words(std::span<const SExpr> alphabet, const TestConfig& cfg) {
  cfg.validate();
  if (alphabet.empty()) throw EmptyAlphabet();
  std::vector<SExpr> letters(alphabet.begin(), alphabet.end());
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  const std::size_t k = letters.size();

  std::vector<Word> out;
  // Length-then-lexicographic enumeration via an odometer over letter indices.
  for (std::size_t len = 0; len <= cfg.exhaustive_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    for (;;) {
      Word w;
      w.reserve(len);
      for (auto d : digits) w.push_back(letters[d]);
      out.push_back(std::move(w));
      std::size_t pos = len;
      while (pos > 0 && ++digits[pos - 1] == k) digits[--pos] = 0;
      if (pos == 0) break;
    }
  }

  std::mt19937_64 rng(cfg.seed);
  while (out.size() < cfg.num_tests) {
    std::size_t len = uniform_below(rng, cfg.max_word_len + 1);
    Word w;
    w.reserve(len);
    for (std::size_t i = 0; i < len; ++i) w.push_back(letters[uniform_below(rng, k)]);
    out.push_back(std::move(w));
  }
  return out;
}

std::optional<SExpr> alphabet_equal(std::span<const SExpr> a, std::span<const SExpr> b) {
  std::set<SExpr> sa(a.begin(), a.end());
  std::set<SExpr> sb(b.begin(), b.end());
  std::vector<SExpr> diff;
  std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                std::back_inserter(diff));
  if (diff.empty()) return std::nullopt;
  return diff.front();
}

bool disagree(const Machine& a, const Machine& b, std::span<const SExpr> word,
              const RunBounds& bounds, bool compare_output) {
  if (compare_output) {
    const auto& ta = std::get<Tm>(a);
    const auto& tb = std::get<Tm>(b);
    return tm_output(ta, word, bounds.tm_steps) != tm_output(tb, word, bounds.tm_steps);
  }
  return accepts(a, word, bounds) != accepts(b, word, bounds);
}

namespace {

template <class Differs>
EquivVerdict differential(const Machine& student, const Machine& reference,
                          const TestConfig& cfg, bool compare_output, Differs differs) {
  EquivVerdict v;
  v.method = EquivVerdict::Method::Testing;
  if (auto sym = alphabet_equal(alphabet_of(student).items(), alphabet_of(reference).items())) {
    v.outcome = EquivVerdict::Outcome::AlphabetMismatch;
    v.witness_symbol = *sym;
    return v;
  }
  std::set<Word> reported;
  for (const auto& w : gen_words(alphabet_of(reference).items(), cfg)) {
    ++v.words_tested;
    if (!differs(w) || !reported.insert(w).second) continue;
    v.witnesses.push_back(w);
    if (v.witnesses.size() >= cfg.max_reported) break;
  }
  for (const auto& w : v.witnesses)
    if (!disagree(student, reference, w, cfg.bounds, compare_output))
      throw std::logic_error("witness " + print_word(w) + " does not reproduce");
  v.outcome = v.witnesses.empty() ? EquivVerdict::Outcome::Equivalent
                                  : EquivVerdict::Outcome::NotEquivalent;
  return v;
}

}  // namespace

EquivVerdict test_equiv_lang(const Machine& student, const Machine& reference,
                             const TestConfig& cfg) {
  if (kind_of(student) != kind_of(reference))
    throw KindMismatch(std::string("cannot compare a ") + to_string(kind_of(student)) +
                       " with a " + to_string(kind_of(reference)));
  cfg.validate();
  return differential(student, reference, cfg, false, [&](const Word& w) {
    return accepts(student, w, cfg.bounds) != accepts(reference, w, cfg.bounds);
  });
}

EquivVerdict test_equiv_tm_output(const Tm& student, const Tm& reference, const TestConfig& cfg) {
  cfg.validate();
  Machine s = student;
  Machine r = reference;
  return differential(s, r, cfg, true, [&](const Word& w) {
    return tm_output(student, w, cfg.bounds.tm_steps) !=
           tm_output(reference, w, cfg.bounds.tm_steps);
  });
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // False if already in the same set.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

}  // namespace

// Hopcroft-Karp style check: explore pairs (p, q) of the product breadth-first
// and merge p with q; a pair is only expanded when it merged two classes.
// Every pair is checked for agreement when it is created, and pairs are
// created in order of word length, so the first disagreement found is at the
// length of a shortest distinguishing word.
EquivVerdict dfa_equiv_decide(const Dfa& a, const Dfa& b) {
  EquivVerdict v;
  v.method = EquivVerdict::Method::Decision;
  if (auto sym = alphabet_equal(a.alphabet().items(), b.alphabet().items())) {
    v.outcome = EquivVerdict::Outcome::AlphabetMismatch;
    v.witness_symbol = *sym;
    return v;
  }

  const std::vector<SExpr> letters = a.alphabet().sorted();
  std::vector<std::size_t> in_a, in_b;
  for (const auto& l : letters) {
    in_a.push_back(*a.alphabet().index_of(l));
    in_b.push_back(*b.alphabet().index_of(l));
  }

  struct Node {
    std::size_t p, q;
    std::size_t parent;  // index into nodes, npos for the root
    std::size_t letter;
  };
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  const std::size_t offset = a.states().size();
  DisjointSets sets(a.states().size() + b.states().size());
  std::vector<Node> nodes;
  std::deque<std::size_t> queue;

  auto witness = [&](std::size_t idx) {
    Word w;
    for (; nodes[idx].parent != npos; idx = nodes[idx].parent)
      w.push_back(letters[nodes[idx].letter]);
    std::reverse(w.begin(), w.end());
    return w;
  };

  nodes.push_back({a.start(), b.start(), npos, 0});
  sets.unite(a.start(), offset + b.start());
  if (a.is_accepting(a.start()) != b.is_accepting(b.start())) {
    v.outcome = EquivVerdict::Outcome::NotEquivalent;
    v.witnesses.push_back({});
    return v;
  }
  queue.push_back(0);
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t l = 0; l < letters.size(); ++l) {
      std::size_t p = a.next(nodes[cur].p, in_a[l]);
      std::size_t q = b.next(nodes[cur].q, in_b[l]);
      if (!sets.unite(p, offset + q)) continue;
      nodes.push_back({p, q, cur, l});
      if (a.is_accepting(p) != b.is_accepting(q)) {
        v.outcome = EquivVerdict::Outcome::NotEquivalent;
        v.witnesses.push_back(witness(nodes.size() - 1));
        return v;
      }
      queue.push_back(nodes.size() - 1);
    }
  }
  v.outcome = EquivVerdict::Outcome::Equivalent;
  return v;
}

}  // namespace autograde

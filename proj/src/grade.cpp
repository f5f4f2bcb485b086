#include "autograde/grade.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "autograde/exec.hpp"

namespace autograde {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void bad(const std::string& what) { throw AssignmentError(what); }

std::int64_t nonnegative(const SExpr& v, std::string_view key) {
  if (!v.is_integer() || v.integer_value() < 0)
    bad(":" + lower(key) + " must be a nonnegative integer, got " + print_sexpr(v));
  return v.integer_value();
}

std::size_t positive(const SExpr& v, std::string_view key) {
  if (!v.is_integer() || v.integer_value() < 1)
    bad(":" + lower(key) + " must be a positive integer, got " + print_sexpr(v));
  return static_cast<std::size_t>(v.integer_value());
}

bool boolean(const SExpr& v, std::string_view key) {
  if (v.is_symbol("T")) return true;
  if (v.is_nil()) return false;
  bad(":" + lower(key) + " must be t or nil, got " + print_sexpr(v));
}

// Keyword/value pairs from items[from..].
std::map<std::string, SExpr> options(const std::vector<SExpr>& items, std::size_t from,
                                     std::string_view where) {
  std::map<std::string, SExpr> out;
  for (std::size_t i = from; i < items.size(); i += 2) {
    if (!items[i].is_keyword() || i + 1 >= items.size())
      bad("expected :keyword value pairs in " + std::string(where));
    if (!out.emplace(items[i].name(), items[i + 1]).second)
      bad(":" + lower(items[i].name()) + " given twice in " + std::string(where));
  }
  return out;
}

Word word_arg(const SExpr& e, const char* what) {
  Word w;
  if (!as_word(e, w)) bad(std::string("invalid ") + what + " word " + print_sexpr(e));
  return w;
}

void read_header(const SExpr& form, Assignment& a, bool& kind_seen, bool& exact_given) {
  static const std::set<std::string> kKeys = {
      "KIND",      "STUDENT-NAME",    "TESTS",        "MAX-WORD-LEN", "EXHAUSTIVE-LEN",
      "SEED",      "PDA-DEPTH",       "TM-STEPS",     "PDA-NODE-BUDGET", "MAX-REPORTED",
      "EXACT-DFA", "POINTS"};
  for (const auto& [key, v] : options(form.elements(), 1, "(assignment ...)")) {
    if (!kKeys.count(key)) bad("unknown assignment option :" + lower(key));
    if (key == "KIND") {
      if (v.is_symbol("DFA")) a.kind = MachineKind::Dfa;
      else if (v.is_symbol("PDA")) a.kind = MachineKind::Pda;
      else if (v.is_symbol("TM")) a.kind = MachineKind::Tm;
      else bad(":kind must be dfa, pda or tm");
      kind_seen = true;
    } else if (key == "STUDENT-NAME") {
      if (!v.is_symbol() || v.is_nil()) bad(":student-name must be a symbol");
      a.student_name = machine_key(v.name());
    } else if (key == "TESTS") {
      a.cfg.num_tests = positive(v, key);
    } else if (key == "MAX-WORD-LEN") {
      a.cfg.max_word_len = positive(v, key);
    } else if (key == "EXHAUSTIVE-LEN") {
      a.cfg.exhaustive_len = static_cast<std::size_t>(nonnegative(v, key));
    } else if (key == "SEED") {
      a.cfg.seed = static_cast<std::uint64_t>(nonnegative(v, key));
    } else if (key == "PDA-DEPTH") {
      a.cfg.bounds.pda_depth = positive(v, key);
    } else if (key == "TM-STEPS") {
      a.cfg.bounds.tm_steps = positive(v, key);
    } else if (key == "PDA-NODE-BUDGET") {
      a.cfg.bounds.pda_node_budget = positive(v, key);
    } else if (key == "MAX-REPORTED") {
      a.cfg.max_reported = positive(v, key);
    } else if (key == "EXACT-DFA") {
      a.use_dfa_decision = boolean(v, key);
      exact_given = true;
    } else if (key == "POINTS") {
      if (!v.is_list() && !v.is_nil()) bad(":points must be a list of :item n pairs");
      std::vector<SExpr> items = v.is_nil() ? std::vector<SExpr>{} : v.elements();
      for (const auto& [item, n] : options(items, 0, ":points")) {
        std::int64_t p = nonnegative(n, item);
        if (item == "VALIDITY") a.points.validity = p;
        else if (item == "ALPHABET") a.points.alphabet = p;
        else if (item == "EQUIVALENCE") a.points.equivalence = p;
        else if (item == "CHECK") a.points.check = p;
        else if (item == "PROPERTY") a.points.property = p;
        else bad("unknown :points item :" + lower(item));
      }
    }
  }
}

UnitCheck read_check(const SExpr& form, const Assignment& a, std::int64_t default_points) {
  const auto& items = form.elements();
  bool is_accept = items.front().is_symbol("CHECK-ACCEPT");
  const char* label = is_accept ? "check-accept" : "check-output";
  if (items.size() < 3) bad(std::string(label) + " needs a word and an expected value");
  UnitCheck c;
  c.kind = is_accept ? UnitCheck::Kind::Accept : UnitCheck::Kind::Output;
  c.points = default_points;
  c.word = word_arg(items[1], "check");
  if (is_accept) {
    c.expected_accept = boolean(items[2], "check-accept expected value");
  } else {
    if (a.kind != MachineKind::Tm) bad("check-output is only available for tm assignments");
    c.expected_output = word_arg(items[2], "expected output");
  }
  for (const auto& [key, v] : options(items, 3, label)) {
    if (key == "POINTS") {
      c.points = nonnegative(v, key);
    } else if (key == "SUBJECT") {
      if (v.is_symbol("STUDENT")) c.subject = UnitCheck::Subject::Student;
      else if (v.is_symbol("REFERENCE")) c.subject = UnitCheck::Subject::Reference;
      else bad(":subject must be student or reference");
    } else {
      bad("unknown option :" + lower(key) + " in " + label);
    }
  }
  const auto& sigma = alphabet_of(a.reference);
  for (const auto& l : c.word)
    if (!sigma.contains(l))
      bad(std::string(label) + " word " + print_word(c.word) + " uses " + print_sexpr(l) +
          ", which is not in the reference alphabet");
  return c;
}

struct CheckOutcome {
  bool passed;
  std::string detail;
};

CheckOutcome run_check(const UnitCheck& c, const Machine& m, const RunBounds& bounds) {
  try {
    if (c.kind == UnitCheck::Kind::Accept) {
      bool got = accepts(m, c.word, bounds);
      if (got == c.expected_accept) return {true, {}};
      return {false, "Expected " + std::string(c.expected_accept ? "t" : "nil") + " but got " +
                         (got ? "t" : "nil") + " on " + print_word(c.word) + "."};
    }
    Word got = tm_output(std::get<Tm>(m), c.word, bounds.tm_steps);
    if (got == c.expected_output) return {true, {}};
    return {false, "Expected output " + print_word(c.expected_output) + " but got " +
                       print_word(got) + " on " + print_word(c.word) + "."};
  } catch (const LetterNotInAlphabet& e) {
    return {false, std::string("Could not run on ") + print_word(c.word) + ": " + e.what() + "."};
  }
}

std::string check_name(const UnitCheck& c) {
  if (c.kind == UnitCheck::Kind::Accept)
    return "Check: accept " + print_word(c.word) + " = " + (c.expected_accept ? "t" : "nil");
  return "Check: output " + print_word(c.word) + " = " + print_word(c.expected_output);
}

MachineTable machine_table(const Assignment& a, const Machine& student) {
  MachineTable t;
  t.insert_or_assign(machine_key(name_of(a.reference)), a.reference);
  t.insert_or_assign(a.student_name, student);
  t.emplace(machine_key(name_of(student)), student);
  return t;
}

}  // namespace

Assignment parse_assignment(std::string_view text) {
  std::vector<SExpr> forms;
  try {
    forms = parse_sexprs(text);
  } catch (const ParseError& e) {
    bad(e.what());
  }

  Assignment a;
  bool header_seen = false, kind_seen = false, exact_given = false;
  std::optional<SExpr> reference_form;
  std::vector<const SExpr*> check_forms, property_forms;
  for (const auto& f : forms) {
    if (form_kind(f)) {
      if (reference_form) bad("an assignment holds exactly one reference gen-x form");
      reference_form = f;
      continue;
    }
    if (!f.is_list() || f.elements().empty() || !f.elements().front().is_symbol())
      bad("unexpected top-level form " + print_sexpr(f));
    const auto& head = f.elements().front();
    if (head.is_symbol("ASSIGNMENT")) {
      if (header_seen) bad("more than one (assignment ...) form");
      header_seen = true;
      read_header(f, a, kind_seen, exact_given);
    } else if (head.is_symbol("CHECK-ACCEPT") || head.is_symbol("CHECK-OUTPUT")) {
      check_forms.push_back(&f);
    } else if (head.is_symbol("PROPERTY")) {
      property_forms.push_back(&f);
    } else {
      bad("unexpected top-level form (" + lower(head.name()) + " ...)");
    }
  }
  if (!header_seen) bad("missing (assignment ...) form");
  if (!reference_form) bad("missing reference gen-x form");
  if (!kind_seen) a.kind = *form_kind(*reference_form);
  if (*form_kind(*reference_form) != a.kind)
    bad(std::string("reference is a ") + to_string(*form_kind(*reference_form)) +
        " but the assignment kind is " + to_string(a.kind));

  auto built = build_machine(*reference_form);
  if (!built.ok()) {
    std::string msg = "reference machine is invalid:";
    for (const auto& e : built.errors) msg += "\n  " + e.message;
    bad(msg);
  }
  a.reference = std::move(*built.value);
  if (a.student_name.empty()) a.student_name = "STUDENT-" + machine_key(to_string(a.kind));
  if (a.kind != MachineKind::Dfa || !exact_given) a.use_dfa_decision = a.kind == MachineKind::Dfa;
  try {
    a.cfg.validate();
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }

  for (const SExpr* f : check_forms) {
    UnitCheck c = read_check(*f, a, a.points.check);
    auto outcome = run_check(c, a.reference, a.cfg.bounds);
    if (!outcome.passed) bad("reference fails " + print_sexpr(*f) + ": " + outcome.detail);
    a.checks.push_back(std::move(c));
  }

  // Properties are checked for well-formedness with the reference standing in
  // for the student machine.
  const MachineTable table = machine_table(a, a.reference);
  std::set<std::string> property_names;
  for (const SExpr* f : property_forms) {
    GradedProperty gp;
    try {
      gp.spec = parse_property(*f);
    } catch (const PropertyError& e) {
      bad(e.what());
    }
    if (!property_names.insert(gp.spec.name).second)
      bad("property " + lower(gp.spec.name) + " is defined twice");
    gp.spec.alphabet = alphabet_of(a.reference).sorted();
    gp.points = a.points.property;
    if (auto it = gp.spec.options.find("POINTS"); it != gp.spec.options.end())
      gp.points = nonnegative(it->second, "points");
    try {
      TestConfig probe = a.cfg;
      probe.num_tests = 1;
      probe.exhaustive_len = 0;
      check_property(gp.spec, table, probe);
    } catch (const PropertyError& e) {
      bad("property " + lower(gp.spec.name) + ": " + e.what());
    } catch (const EmptyAlphabet& e) {
      bad("property " + lower(gp.spec.name) + ": " + e.what());
    }
    a.properties.push_back(std::move(gp));
  }
  return a;
}

std::string GradeReport::summary() const { return items.empty() ? "" : items.back().feedback; }

namespace {

struct Selection {
  std::optional<Machine> machine;
  std::vector<std::string> errors;
  std::vector<std::string> ignored;  // names of extra forms
};

Selection select_machine(const Assignment& a, std::string_view text) {
  Selection s;
  std::vector<SExpr> forms;
  try {
    forms = parse_sexprs(text);
  } catch (const ParseError& e) {
    s.errors.push_back(std::string("Could not read the submission: ") + e.what());
    return s;
  }
  auto loaded = load_forms(forms);

  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    if (loaded[i].kind == a.kind && loaded[i].name == a.student_name) {
      chosen = i;
      break;
    }
  }
  if (!chosen) {
    for (std::size_t i = 0; i < loaded.size(); ++i) {
      if (loaded[i].kind == a.kind) {
        chosen = i;
        break;
      }
    }
  }
  if (!chosen) {
    s.errors.push_back(std::string("No gen-") + to_string(a.kind) +
                       " form found in the submission.");
    return s;
  }

  for (std::size_t i = 0; i < loaded.size(); ++i) {
    if (i == *chosen) continue;
    for (const auto& e : loaded[i].result.errors)
      if (e.code == ValidationCode::DuplicateName) s.errors.push_back(e.message);
    s.ignored.push_back(loaded[i].name.empty() ? print_sexpr(forms[i]).substr(0, 40)
                                               : lower(loaded[i].name));
  }
  for (const auto& e : loaded[*chosen].result.errors) s.errors.push_back(e.message);
  if (s.errors.empty()) s.machine = std::move(loaded[*chosen].result.value);
  return s;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

GradeItem item(std::string name, std::int64_t max, bool passed, std::string feedback) {
  GradeItem it;
  it.name = std::move(name);
  it.max_score = max;
  it.passed = passed;
  it.score = passed ? max : 0;
  it.feedback = std::move(feedback);
  return it;
}

std::string misclassified(std::string_view head, const std::vector<Word>& witnesses) {
  return std::string(head) + "\n" + print_word_list(witnesses);
}

GradeItem equivalence_item(const Assignment& a, const Machine& student) {
  const std::int64_t pts = a.points.equivalence;
  const std::string name = "Equivalence";
  if (a.kind == MachineKind::Dfa && a.use_dfa_decision) {
    auto v = dfa_equiv_decide(std::get<Dfa>(student), std::get<Dfa>(a.reference));
    if (v.equivalent()) return item(name, pts, true, "Equivalent to the reference solution.");
    auto it = item(name, pts, false, misclassified(kMisclassified, v.witnesses));
    it.witnesses = v.witnesses;
    return it;
  }
  if (a.kind == MachineKind::Tm) {
    auto v = test_equiv_tm_output(std::get<Tm>(student), std::get<Tm>(a.reference), a.cfg);
    if (!v.equivalent()) {
      auto it = item(name, pts, false, misclassified(kIncorrectOutput, v.witnesses));
      it.witnesses = v.witnesses;
      return it;
    }
  }
  auto v = test_equiv_lang(student, a.reference, a.cfg);
  if (v.equivalent())
    return item(name, pts, true,
                "Agrees with the reference solution on all " + std::to_string(v.words_tested) +
                    " tested words.");
  auto it = item(name, pts, false, misclassified(kMisclassified, v.witnesses));
  it.witnesses = v.witnesses;
  return it;
}

}  // namespace

GradeReport grade_submission(const Assignment& a, std::string_view submission_text) {
  GradeReport r;
  Selection sel = select_machine(a, submission_text);
  const bool valid = sel.machine.has_value();
  const std::string kind = to_string(a.kind);

  r.items.push_back(item("Validity", a.points.validity, valid,
                         valid ? "The submission is a valid " + kind + "."
                               : join_lines(sel.errors)));
  if (!sel.ignored.empty()) {
    std::string names;
    for (const auto& n : sel.ignored) names += (names.empty() ? "" : ", ") + n;
    r.items.push_back(item("Warnings", 0, true, "Ignored extra forms: " + names + "."));
  }

  std::vector<GradeItem> graded;
  std::string student_label = lower(a.student_name);
  if (!valid) {
    const std::string skipped = "Not graded: the submission is not a valid " + kind + ".";
    graded.push_back(item("Alphabet", a.points.alphabet, false, skipped));
    graded.push_back(item("Equivalence", a.points.equivalence, false, skipped));
    for (const auto& c : a.checks)
      if (c.subject == UnitCheck::Subject::Student)
        graded.push_back(item(check_name(c), c.points, false, skipped));
    for (const auto& p : a.properties)
      graded.push_back(item("Property: " + lower(p.spec.name), p.points, false, skipped));
  } else {
    const Machine& student = *sel.machine;
    student_label = lower(name_of(student));
    auto sym = alphabet_equal(alphabet_of(student).items(), alphabet_of(a.reference).items());
    graded.push_back(item("Alphabet", a.points.alphabet, !sym,
                          sym ? std::string(kIncorrectAlphabet) : "The alphabet is correct."));
    if (sym)
      graded.push_back(item("Equivalence", a.points.equivalence, false,
                            "Not checked: the alphabet is incorrect."));
    else
      graded.push_back(equivalence_item(a, student));

    for (const auto& c : a.checks) {
      if (c.subject != UnitCheck::Subject::Student) continue;
      auto outcome = run_check(c, student, a.cfg.bounds);
      graded.push_back(item(check_name(c), c.points, outcome.passed,
                            outcome.passed ? "Passed." : outcome.detail));
    }

    const MachineTable table = machine_table(a, student);
    for (const auto& p : a.properties) {
      const std::string pname = lower(p.spec.name);
      try {
        auto res = check_property(p.spec, table, a.cfg);
        if (res.passed) {
          graded.push_back(item("Property: " + pname, p.points, true,
                                "Holds on all " + std::to_string(res.words_tested) +
                                    " tested words."));
        } else {
          std::string fb = "Property " + pname + " fails for " + lower(p.spec.var) + " = " +
                           print_word(*res.counterexample) + ".";
          if (!res.reason.empty()) fb += " (" + res.reason + ")";
          auto it = item("Property: " + pname, p.points, false, fb);
          it.witnesses.push_back(*res.counterexample);
          graded.push_back(std::move(it));
        }
      } catch (const PropertyError& e) {
        graded.push_back(item("Property: " + pname, p.points, false,
                              std::string("Property could not be evaluated: ") + e.what()));
      }
    }
  }

  bool all_passed = valid;
  for (auto& g : graded) {
    all_passed = all_passed && g.passed;
    r.items.push_back(std::move(g));
  }
  r.items.push_back(item("Summary", 0, all_passed,
                         student_label + (all_passed ? " is correct." : " is not correct.")));
  for (const auto& it : r.items) {
    r.score += it.score;
    r.max_score += it.max_score;
  }
  return r;
}

std::string render_gradescope_json(const GradeReport& r) {
  using nlohmann::json;
  std::string out = "{\"score\": " + std::to_string(r.score) + ", \"tests\": [";
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    const auto& it = r.items[i];
    if (i) out += ", ";
    out += "{\"name\": " + json(it.name).dump() + ", \"score\": " + std::to_string(it.score) +
           ", \"max_score\": " + std::to_string(it.max_score) +
           ", \"output\": " + json(it.feedback).dump() + "}";
  }
  out += "]}";
  return out;
}

}  // namespace autograde

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "autograde/equiv.hpp"
#include "autograde/exec.hpp"
#include "autograde/grade.hpp"
#include "autograde/model.hpp"
#include "autograde/property.hpp"
#include "autograde/sexpr.hpp"

namespace py = pybind11;
using namespace autograde;

namespace {

// Letters cross the boundary as int (integers) or str (anything else,
// printed form).
SExpr to_letter(const py::handle& h) {
  if (py::isinstance<py::bool_>(h)) throw py::type_error("letters must be int or str");
  if (py::isinstance<py::int_>(h)) return SExpr::integer(h.cast<std::int64_t>());
  if (py::isinstance<py::str>(h)) {
    auto forms = parse_sexprs(h.cast<std::string>());
    if (forms.size() != 1 || !forms[0].is_atom())
      throw py::value_error("not a single atom: " + h.cast<std::string>());
    return forms[0];
  }
  throw py::type_error("letters must be int or str");
}

Word to_word(const py::iterable& it) {
  Word w;
  for (auto h : it) w.push_back(to_letter(h));
  if (w.size() == 1 && w[0].is_epsilon()) w.clear();
  return w;
}

py::object from_letter(const SExpr& e) {
  if (e.is_integer()) return py::int_(e.integer_value());
  return py::str(print_sexpr(e));
}

py::list from_word(const Word& w) {
  py::list out;
  for (const auto& l : w) out.append(from_letter(l));
  return out;
}

py::list from_words(const std::vector<Word>& ws) {
  py::list out;
  for (const auto& w : ws) out.append(from_word(w));
  return out;
}

struct PyMachine {
  Machine m;

  std::string kind() const { return to_string(kind_of(m)); }
  std::string name() const { return name_of(m); }
  py::list alphabet() const {
    py::list out;
    for (const auto& l : alphabet_of(m).sorted()) out.append(from_letter(l));
    return out;
  }
};

// First buildable machine, or the one with the given name.
PyMachine load(const std::string& text, std::optional<std::string> name) {
  auto forms = parse_sexprs(text);
  auto loaded = load_forms(forms);
  std::string key;
  if (name) key = machine_key(*name);
  for (auto& f : loaded) {
    if (name ? f.name != key : !f.kind) continue;
    if (!f.result.ok()) throw py::value_error(f.result.errors.front().message);
    return PyMachine{std::move(*f.result.value)};
  }
  throw py::value_error(name ? "no machine named " + key : "no machine form found");
}

py::list validate(const std::string& text) {
  auto forms = parse_sexprs(text);
  py::list out;
  for (const auto& f : load_forms(forms)) {
    py::list errors;
    for (const auto& e : f.result.errors) errors.append(e.message);
    py::object kind = f.kind ? py::object(py::str(to_string(*f.kind))) : py::none();
    out.append(py::make_tuple(f.name, kind, errors));
  }
  return out;
}

TestConfig make_cfg(std::size_t tests, std::size_t max_len, std::size_t exhaustive_len,
                    std::uint64_t seed, std::size_t depth, std::size_t steps) {
  TestConfig cfg;
  cfg.num_tests = tests;
  cfg.max_word_len = max_len;
  cfg.exhaustive_len = exhaustive_len;
  cfg.seed = seed;
  cfg.bounds.pda_depth = depth;
  cfg.bounds.tm_steps = steps;
  cfg.validate();
  return cfg;
}

py::dict verdict_dict(const EquivVerdict& v) {
  py::dict d;
  const char* outcome = v.outcome == EquivVerdict::Outcome::Equivalent       ? "equivalent"
                        : v.outcome == EquivVerdict::Outcome::NotEquivalent ? "not-equivalent"
                                                                            : "alphabet-mismatch";
  d["outcome"] = outcome;
  d["method"] = v.method == EquivVerdict::Method::Decision ? "decision" : "testing";
  d["witnesses"] = from_words(v.witnesses);
  d["witness_symbol"] = v.witness_symbol ? from_letter(*v.witness_symbol) : py::none();
  d["words_tested"] = v.words_tested;
  return d;
}

}  // namespace

PYBIND11_MODULE(_autograde, mod) {
  mod.doc() = "Automata definitions, bounded execution, equivalence testing and grading.";

  py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);
  py::register_exception<LetterNotInAlphabet>(mod, "LetterNotInAlphabet", PyExc_ValueError);
  py::register_exception<AssignmentError>(mod, "AssignmentError", PyExc_ValueError);
  py::register_exception<KindMismatch>(mod, "KindMismatch", PyExc_TypeError);

  mod.def(
      "canonical",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& f : parse_sexprs(text)) out.push_back(print_sexpr(f));
        return out;
      },
      py::arg("text"), "Parse and reprint every top-level form.");

  mod.def("validate", &validate, py::arg("text"),
          "(name, kind or None, [error messages]) for each top-level form.");

  py::class_<PyMachine>(mod, "Machine")
      .def_property_readonly("kind", &PyMachine::kind)
      .def_property_readonly("name", &PyMachine::name)
      .def_property_readonly("alphabet", &PyMachine::alphabet)
      .def(
          "accepts",
          [](const PyMachine& self, const py::iterable& word, std::size_t depth,
             std::size_t steps) {
            RunBounds b;
            b.pda_depth = depth;
            b.tm_steps = steps;
            b.validate();
            return accepts(self.m, to_word(word), b);
          },
          py::arg("word"), py::arg("depth") = kDefaultPdaDepth,
          py::arg("steps") = kDefaultTmSteps)
      .def(
          "run_dfa",
          [](const PyMachine& self, const py::iterable& word) {
            const auto* d = std::get_if<Dfa>(&self.m);
            if (!d) throw KindMismatch("run_dfa needs a DFA");
            return from_letter(run_dfa(*d, to_word(word)));
          },
          py::arg("word"))
      .def(
          "run_tm",
          [](const PyMachine& self, const py::iterable& word, std::size_t steps) {
            const auto* t = std::get_if<Tm>(&self.m);
            if (!t) throw KindMismatch("run_tm needs a TM");
            auto c = run_tm(*t, to_word(word), steps);
            return py::make_tuple(to_string(c.status),
                                  from_word(remove_final_nils(left_of_head(c))), c.steps);
          },
          py::arg("word"), py::arg("steps") = kDefaultTmSteps)
      .def("__repr__", [](const PyMachine& self) {
        return "<Machine " + self.kind() + " " + self.name() + ">";
      });

  mod.def("load", &load, py::arg("text"), py::arg("name") = py::none(),
          "Build a machine from gen-dfa/gen-pda/gen-tm source.");

  mod.def(
      "equiv",
      [](const PyMachine& student, const PyMachine& reference, bool exact, bool output,
         std::size_t tests, std::size_t max_len, std::size_t exhaustive_len, std::uint64_t seed,
         std::size_t depth, std::size_t steps) {
        if (exact) {
          const auto* a = std::get_if<Dfa>(&student.m);
          const auto* b = std::get_if<Dfa>(&reference.m);
          if (!a || !b) throw KindMismatch("exact comparison needs two DFAs");
          return verdict_dict(dfa_equiv_decide(*a, *b));
        }
        auto cfg = make_cfg(tests, max_len, exhaustive_len, seed, depth, steps);
        if (output) {
          const auto* a = std::get_if<Tm>(&student.m);
          const auto* b = std::get_if<Tm>(&reference.m);
          if (!a || !b) throw KindMismatch("output comparison needs two TMs");
          return verdict_dict(test_equiv_tm_output(*a, *b, cfg));
        }
        return verdict_dict(test_equiv_lang(student.m, reference.m, cfg));
      },
      py::arg("student"), py::arg("reference"), py::kw_only(), py::arg("exact") = false,
      py::arg("output") = false, py::arg("tests") = 1000, py::arg("max_len") = 8,
      py::arg("exhaustive_len") = 4, py::arg("seed") = 0, py::arg("depth") = kDefaultPdaDepth,
      py::arg("steps") = kDefaultTmSteps);

  mod.def(
      "grade",
      [](const std::string& assignment, const std::string& submission,
         std::optional<std::uint64_t> seed) {
        auto a = parse_assignment(assignment);
        if (seed) a.cfg.seed = *seed;
        return render_gradescope_json(grade_submission(a, submission));
      },
      py::arg("assignment"), py::arg("submission"), py::arg("seed") = py::none(),
      "Grade a submission; returns the JSON report text.");
}

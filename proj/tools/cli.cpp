#include "cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "autograde/equiv.hpp"
#include "autograde/exec.hpp"
#include "autograde/grade.hpp"
#include "autograde/model.hpp"
#include "autograde/property.hpp"
#include "autograde/sexpr.hpp"

namespace autograde::cli {

namespace {

// Exit status carried out of a subcommand.
struct Exit {
  int code;
};

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << path << "\n";
    throw Exit{kExitIo};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    err << "error: failed while reading " << path << "\n";
    throw Exit{kExitIo};
  }
  return ss.str();
}

std::vector<SExpr> read_forms(const std::string& path, std::ostream& err) {
  std::string text = read_file(path, err);
  std::vector<SExpr> forms;
  try {
    forms = parse_sexprs(text);
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
    throw Exit{kExitFailure};
  }
  if (forms.empty()) {
    err << path << ": no forms found\n";
    throw Exit{kExitFailure};
  }
  return forms;
}

Word parse_word_arg(const std::string& text, std::ostream& err) {
  std::vector<SExpr> atoms;
  try {
    atoms = parse_sexprs(text);
  } catch (const ParseError& e) {
    err << "error: --word: " << e.what() << "\n";
    throw Exit{kExitUsage};
  }
  if (atoms.size() == 1 && atoms[0].is_epsilon()) return {};
  for (const auto& a : atoms) {
    if (!a.is_integer() && !a.is_symbol()) {
      err << "error: --word letters must be integers or symbols, got " << print_sexpr(a) << "\n";
      throw Exit{kExitUsage};
    }
  }
  return atoms;
}

std::string describe(const LoadedForm& f, const SExpr& form) {
  if (!f.name.empty()) return f.name;
  std::string s = print_sexpr(form);
  return s.size() > 40 ? s.substr(0, 40) + "..." : s;
}

void print_errors(std::ostream& err, const std::string& label,
                  const std::vector<ValidationError>& errors) {
  for (const auto& e : errors) err << label << ": " << e.message << "\n";
}

// The machine named `name`, or the only/first machine form when no name is
// given.
Machine pick_machine(const std::string& path, const std::optional<std::string>& name,
                     std::ostream& err) {
  auto forms = read_forms(path, err);
  auto loaded = load_forms(forms);
  std::optional<std::size_t> chosen;
  if (name) {
    std::string key = machine_key(*name);
    for (std::size_t i = 0; i < loaded.size() && !chosen; ++i)
      if (loaded[i].name == key) chosen = i;
    if (!chosen) {
      err << path << ": no machine named " << key << "\n";
      throw Exit{kExitFailure};
    }
  } else {
    for (std::size_t i = 0; i < loaded.size() && !chosen; ++i)
      if (loaded[i].kind) chosen = i;
    if (!chosen) {
      err << path << ": no gen-dfa, gen-pda or gen-tm form found\n";
      throw Exit{kExitFailure};
    }
  }
  auto& f = loaded[*chosen];
  if (!f.result.ok()) {
    print_errors(err, describe(f, forms[*chosen]), f.result.errors);
    throw Exit{kExitFailure};
  }
  return std::move(*f.result.value);
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  auto forms = read_forms(path, err);
  auto loaded = load_forms(forms);
  bool all_ok = true;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const auto& f = loaded[i];
    std::string label = describe(f, forms[i]);
    if (f.result.ok()) {
      out << label << ": OK (" << to_string(*f.kind) << ")\n";
    } else {
      all_ok = false;
      for (const auto& e : f.result.errors) out << label << ": " << e.message << "\n";
    }
  }
  return all_ok ? kExitOk : kExitFailure;
}

struct RunArgs {
  std::string path;
  std::optional<std::string> name;
  std::string word;
  std::size_t depth = kDefaultPdaDepth;
  std::size_t steps = kDefaultTmSteps;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  Word w = parse_word_arg(a.word, err);
  Machine m = pick_machine(a.path, a.name, err);
  try {
    switch (kind_of(m)) {
      case MachineKind::Dfa:
        out << print_sexpr(run_dfa(std::get<Dfa>(m), w)) << "\n";
        break;
      case MachineKind::Pda:
        out << (accept_pda(std::get<Pda>(m), w, a.depth) ? "t" : "nil") << "\n";
        break;
      case MachineKind::Tm: {
        auto c = run_tm(std::get<Tm>(m), w, a.steps);
        out << to_string(c.status) << "\n"
            << print_word(remove_final_nils(left_of_head(c))) << "\n";
        break;
      }
    }
  } catch (const LetterNotInAlphabet& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct EquivArgs {
  std::string student, reference;
  std::optional<std::string> student_name, reference_name;
  TestConfig cfg;
  bool exact_dfa = false;
  bool output = false;
};

int cmd_equiv(const EquivArgs& a, std::ostream& out, std::ostream& err) {
  Machine s = pick_machine(a.student, a.student_name, err);
  Machine r = pick_machine(a.reference, a.reference_name, err);
  if (kind_of(s) != kind_of(r)) {
    err << "error: cannot compare a " << to_string(kind_of(s)) << " with a "
        << to_string(kind_of(r)) << "\n";
    return kExitFailure;
  }
  if (a.exact_dfa && kind_of(s) != MachineKind::Dfa) {
    err << "error: --exact-dfa needs two DFAs\n";
    return kExitUsage;
  }
  if (a.output && kind_of(s) != MachineKind::Tm) {
    err << "error: --output needs two TMs\n";
    return kExitUsage;
  }
  EquivVerdict v;
  if (a.exact_dfa)
    v = dfa_equiv_decide(std::get<Dfa>(s), std::get<Dfa>(r));
  else if (a.output)
    v = test_equiv_tm_output(std::get<Tm>(s), std::get<Tm>(r), a.cfg);
  else
    v = test_equiv_lang(s, r, a.cfg);

  const char* method = v.method == EquivVerdict::Method::Decision ? "decision" : "testing";
  switch (v.outcome) {
    case EquivVerdict::Outcome::Equivalent:
      out << "equivalent (" << method;
      if (v.method == EquivVerdict::Method::Testing) out << ", " << v.words_tested << " words";
      out << ")\n";
      return kExitOk;
    case EquivVerdict::Outcome::AlphabetMismatch:
      out << "alphabet mismatch: " << print_sexpr(*v.witness_symbol) << "\n";
      return kExitFailure;
    case EquivVerdict::Outcome::NotEquivalent:
      out << "not equivalent (" << method << ")\n" << print_word_list(v.witnesses) << "\n";
      return kExitFailure;
  }
  return kExitFailure;
}

struct GradeArgs {
  std::string assignment, submission, out_path;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

int cmd_grade(const GradeArgs& a, std::ostream& out, std::ostream& err) {
  std::string assignment_text = read_file(a.assignment, err);
  std::string submission_text = read_file(a.submission, err);
  Assignment asg;
  try {
    asg = parse_assignment(assignment_text);
  } catch (const AssignmentError& e) {
    err << a.assignment << ": " << e.what() << "\n";
    return kExitFailure;
  }
  if (a.seed) asg.cfg.seed = *a.seed;
  GradeReport report = grade_submission(asg, submission_text);
  {
    std::ofstream f(a.out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "error: cannot write " << a.out_path << "\n";
      return kExitIo;
    }
    f << render_gradescope_json(report) << "\n";
    if (!f) {
      err << "error: failed while writing " << a.out_path << "\n";
      return kExitIo;
    }
  }
  for (std::size_t i = 0; i + 1 < report.items.size(); ++i) {
    const auto& it = report.items[i];
    if (!it.passed) out << it.name << ": " << it.feedback << "\n";
  }
  out << report.summary() << "\n";
  out << "score " << report.score << "/" << report.max_score << "\n";
  return a.strict && !report.full_score() ? kExitFailure : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Validate, run, compare and grade DFA, PDA and TM definitions.", "autograde"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check every gen-x form in a file");
  validate->add_option("file", validate_path, "Definition file")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a machine on one word");
  run_cmd->add_option("file", run_args.path, "Definition file")->required();
  run_cmd->add_option("--name", run_args.name, "Machine name (default: first machine)");
  run_cmd->add_option("--word", run_args.word, "Whitespace-separated letters; empty for e")
      ->required();
  run_cmd->add_option("--depth", run_args.depth, "PDA execution-tree depth")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--steps", run_args.steps, "TM step bound")->check(CLI::PositiveNumber);

  EquivArgs eq;
  auto* equiv = app.add_subcommand("equiv", "Compare a student machine with a reference");
  equiv->add_option("student", eq.student, "Student definition file")->required();
  equiv->add_option("reference", eq.reference, "Reference definition file")->required();
  equiv->add_option("--student-name", eq.student_name, "Machine to pick from the student file");
  equiv->add_option("--reference-name", eq.reference_name,
                    "Machine to pick from the reference file");
  equiv->add_option("--tests", eq.cfg.num_tests, "Number of test words")
      ->check(CLI::PositiveNumber);
  equiv->add_option("--max-len", eq.cfg.max_word_len, "Maximum random word length")
      ->check(CLI::PositiveNumber);
  equiv->add_option("--exhaustive-len", eq.cfg.exhaustive_len,
                    "Test every word up to this length first");
  equiv->add_option("--seed", eq.cfg.seed, "Random seed");
  equiv->add_option("--depth", eq.cfg.bounds.pda_depth, "PDA execution-tree depth")
      ->check(CLI::PositiveNumber);
  equiv->add_option("--steps", eq.cfg.bounds.tm_steps, "TM step bound")
      ->check(CLI::PositiveNumber);
  equiv->add_flag("--exact-dfa", eq.exact_dfa, "Use the complete DFA decision procedure");
  equiv->add_flag("--output", eq.output, "Compare TM outputs instead of languages");

  GradeArgs ga;
  auto* grade = app.add_subcommand("grade", "Grade a submission and write a JSON report");
  grade->add_option("--assignment", ga.assignment, "Assignment file")->required();
  grade->add_option("--submission", ga.submission, "Submission file")->required();
  grade->add_option("--out", ga.out_path, "Where to write the JSON report")->required();
  grade->add_option("--seed", ga.seed, "Override the assignment seed");
  grade->add_flag("--strict", ga.strict, "Exit 1 unless the score is full");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_path, out, err);
    if (run_cmd->parsed()) return cmd_run(run_args, out, err);
    if (equiv->parsed()) {
      try {
        eq.cfg.validate();
      } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      return cmd_equiv(eq, out, err);
    }
    if (grade->parsed()) return cmd_grade(ga, out, err);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}

}  // namespace autograde::cli

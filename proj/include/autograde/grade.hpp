#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "autograde/equiv.hpp"
#include "autograde/model.hpp"
#include "autograde/property.hpp"

namespace autograde {

/// A fixed expectation about one word.
struct UnitCheck {
  enum class Subject { Reference, Student };
  enum class Kind { Accept, Output };

  Subject subject = Subject::Student;
  Kind kind = Kind::Accept;
  Word word;
  bool expected_accept = false;  // Accept
  Word expected_output;          // Output
  std::int64_t points = 0;
};

struct PointSplit {
  std::int64_t validity = 0;
  std::int64_t alphabet = 0;
  std::int64_t equivalence = 100;
  std::int64_t check = 0;     // default for each check
  std::int64_t property = 0;  // default for each property
};

struct GradedProperty {
  PropertySpec spec;
  std::int64_t points = 0;
};

struct Assignment {
  MachineKind kind = MachineKind::Dfa;
  Machine reference;
  std::string student_name;  // canonical; the student's machine is bound to it
  TestConfig cfg;
  std::vector<UnitCheck> checks;
  std::vector<GradedProperty> properties;
  PointSplit points;
  bool use_dfa_decision = true;
};

class AssignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an assignment file:
///
///   (assignment :kind dfa [:student-name s] [:tests n] [:max-word-len n]
///               [:exhaustive-len n] [:seed n] [:pda-depth n] [:tm-steps n]
///               [:pda-node-budget n] [:max-reported n] [:exact-dfa t|nil]
///               [:points (:validity n :alphabet n :equivalence n
///                         :check n :property n)])
///   (gen-dfa ...)                                ; the reference, exactly one
///   (check-accept <word> t|nil [:points n] [:subject student|reference])
///   (check-output <word> <word> [:points n] [:subject student|reference])
///   (property <name> (w) [:points n] <formula>)
///
/// Every check must hold on the reference, and every property must be
/// well-formed; otherwise AssignmentError is thrown.
Assignment parse_assignment(std::string_view text);

struct GradeItem {
  std::string name;
  std::int64_t score = 0;
  std::int64_t max_score = 0;
  bool passed = false;
  std::string feedback;
  std::vector<Word> witnesses;
};

struct GradeReport {
  std::int64_t score = 0;
  std::int64_t max_score = 0;
  std::vector<GradeItem> items;

  /// Feedback of the final summary item, or empty if there are no items.
  std::string summary() const;
  bool full_score() const { return score == max_score; }
};

inline constexpr std::string_view kIncorrectAlphabet = "Incorrect alphabet provided.";
inline constexpr std::string_view kMisclassified =
    "Transition function error. The following words are misclassified:";
inline constexpr std::string_view kIncorrectOutput =
    "Incorrect output produced when running submitted TM on the following words :";

/// Never throws for a malformed submission; every problem becomes a failed
/// report item.
GradeReport grade_submission(const Assignment& a, std::string_view submission_text);

/// `{"score": s, "tests": [{"name": ..., "score": ..., "max_score": ...,
/// "output": ...}, ...]}` on one line.
std::string render_gradescope_json(const GradeReport& r);

}  // namespace autograde

#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kcopt/circuit.hpp"
#include "kcopt/weight.hpp"

namespace kcopt {

/// Conjunction of literals as an objective formula. The empty term is the
/// constant true; `falsum` marks the constant false (which a literal list
/// cannot express). Both constants count as literals for classification.
struct TermFormula {
  Term lits;           // normalized: sorted by var, one literal per var
  bool falsum = false; // when set, lits is empty

  friend bool operator==(const TermFormula&, const TermFormula&) = default;
};

struct WeightedItem {
  std::variant<TermFormula, std::shared_ptr<const NnfCircuit>> formula;
  Weight weight;

  bool is_term() const { return formula.index() == 0; }
  const TermFormula& term() const { return std::get<0>(formula); }
  const NnfCircuit& circuit() const { return *std::get<1>(formula); }
};

/// Multi-set of weighted formulas over variables 1..num_vars. Item order is
/// semantically irrelevant but fixed, so downstream witness selection is
/// deterministic.
class WeightedBase {
 public:
  WeightedBase() = default;
  explicit WeightedBase(int num_vars) : num_vars_(num_vars) {}

  void add_term(Term t, Weight w);   // normalizes; throws InconsistentTerm
  void add_falsum(Weight w);
  void add_circuit(std::shared_ptr<const NnfCircuit> c, Weight w);
  void add_item(WeightedItem item);  // validates variable ranges

  int num_vars() const { return num_vars_; }
  int size() const { return (int)items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<WeightedItem>& items() const { return items_; }
  const WeightedItem& item(int i) const { return items_.at(i); }

 private:
  std::vector<WeightedItem> items_;
  int num_vars_ = 0;
};

enum class Family : uint8_t { L, Q, P, G };

const char* family_name(Family f);

/// Tightest family under L < Q < P < G, plus the two restriction flags.
struct FamilyTag {
  Family family = Family::L;
  bool positive_literals = true;   // every occurring literal is positive
  bool nonnegative_weights = true; // every weight >= 0

  friend bool operator==(const FamilyTag&, const FamilyTag&) = default;
};

FamilyTag classify(const WeightedBase& b);

struct Aggregator {
  enum class Kind : uint8_t { Sum, Leximax, Owa };

  Kind kind = Kind::Sum;
  std::vector<Weight> owa_weights;  // Kind::Owa only

  static Aggregator sum() { return {Kind::Sum, {}}; }
  static Aggregator leximax() { return {Kind::Leximax, {}}; }
  /// Weights must sum to 1 exactly (vacuous for an empty vector, which is
  /// only meaningful with an empty base). Throws FormatError otherwise.
  static Aggregator owa(std::vector<Weight> weights);

  friend bool operator==(const Aggregator&, const Aggregator&) = default;
};

const char* aggregator_name(Aggregator::Kind k);

/// Totally ordered objective value: a single rational for Sum/OWA, a
/// descending vector of the n item values for leximax. Two scores compare
/// only if they have the same shape.
struct Score {
  enum class Kind : uint8_t { Sum, Vector };

  Kind kind = Kind::Sum;
  Weight sum;                  // Kind::Sum
  std::vector<Weight> values;  // Kind::Vector, sorted non-increasing

  static Score of_sum(Weight w);
  /// Sorts the values in non-increasing order.
  static Score of_vector(std::vector<Weight> values);
};

/// Lexicographic on Vector, numeric on Sum. Throws IncomparableScores when
/// the shapes (or vector lengths) differ.
std::strong_ordering compare_scores(const Score& a, const Score& b);

/// "4", "-7/2", or "(2, 1, 0)".
std::string format_score(const Score& s);

bool item_satisfied(const WeightedItem& item, const Interpretation& omega);

/// f(omega) under the aggregator: Sum adds the item values w_i * phi_i(omega),
/// Leximax returns them sorted non-increasingly, Owa dot-multiplies the
/// sorted values with its weight vector (whose length must equal the base
/// cardinality; throws OwaArityMismatch).
Score evaluate_base(const WeightedBase& b, const Aggregator& agg,
                    const Interpretation& omega);

/// Conditions every item by gamma: satisfied literals are dropped,
/// contradicted literals turn a term item into the constant false, circuit
/// items are conditioned as circuits. Same cardinality and num_vars.
WeightedBase condition_base(const WeightedBase& b,
                            const PartialInterpretation& gamma);

// --- file format ------------------------------------------------------

struct ParsedBase {
  WeightedBase base;
  Aggregator agg;
};

/// Reads the weighted-base format: header "wb <n> <numvars> <agg>" with
/// agg in {sum, leximax, owa}; for owa a line "owa p1 ... pn" whose entries
/// must sum to 1; then n item lines, each "<weight> t <lit> ... 0" (term;
/// empty list is the constant true) or "<weight> f <relative-path>" (a c2d
/// NNF file resolved against `dir`). Throws FormatError.
ParsedBase parse_base(std::istream& in, const std::filesystem::path& dir);

/// Inverse of parse_base. Circuit items are written to
/// dir/<stem>_item<i>.nnf and referenced by that relative path.
/// Constant-false items cannot be expressed and throw FormatError.
void serialize_base(const WeightedBase& b, const Aggregator& agg,
                    std::ostream& out, const std::filesystem::path& dir,
                    const std::string& stem);

}  // namespace kcopt

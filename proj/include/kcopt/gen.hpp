#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcopt/circuit.hpp"
#include "kcopt/objective.hpp"
#include "kcopt/obdd.hpp"

namespace kcopt {

/// Variable-to-name side table, 1-based like Var.
class NameTable {
 public:
  /// Returns the existing index for a known name, otherwise appends.
  Var intern(const std::string& name);
  std::optional<Var> find(const std::string& name) const;
  const std::string& name(Var v) const;
  int size() const { return (int)names_.size() - 1; }

 private:
  std::vector<std::string> names_{""};  // index 0 unused
};

/// One "<var index> <name>" line per variable.
void save_names(const NameTable& t, std::ostream& out);
NameTable load_names(std::istream& in);  // throws FormatError

// --- reduction-based instance generators --------------------------------

struct HittingSetLinear {
  NnfCircuit circuit;  // positive Krom CNF, duplicate clauses removed
  WeightedBase base;   // unit weight per element variable
  NameTable names;
};

/// Minimum-hitting-set instance over 2-element sets: the optimal Sum score
/// equals the smallest hitting set size. Elements map to variables in first
/// occurrence order. Throws BadSetSize unless every set has two distinct
/// elements.
HittingSetLinear gen_hitting_set_linear(
    const std::vector<std::pair<std::string, std::string>>& sets);

struct TermSatQuadratic {
  NnfCircuit circuit;  // the True leaf
  WeightedBase base;   // 3 unit-weight quadratic items per input term
};

/// Term-satisfaction instance: an interpretation satisfies at least k of the
/// input 2-literal terms iff the optimal Sum score is at most |S| - k.
TermSatQuadratic gen_term_sat_quadratic(const std::vector<Term>& terms,
                                        int num_vars = 0);

struct HittingSetQPlus {
  NnfCircuit circuit;  // the True leaf
  WeightedBase base;   // positive literals, weights in {2, -1}, a set
  NameTable names;
};

/// Hitting-set instance over positive quadratic items: C has a hitting set
/// of size at most k iff |E| + optimal Sum score <= k. Duplicate items are
/// emitted once. Throws BadSetSize.
HittingSetQPlus gen_hitting_set_qplus(
    const std::vector<std::pair<std::string, std::string>>& sets);

struct OwaReduction {
  WeightedBase base;  // 4n positive-weight literal items
  Aggregator agg;     // OWA vector (0, 1/n) repeated n times, then 2n zeros
};

/// Linearization of a nonnegative quadratic base into an OWA-aggregated
/// literal base with g(omega) = f(omega) + K*n*(n+1)/2 for every omega,
/// where K = max weight + 1. Throws FamilyMismatch unless every item is a
/// 2-literal term with nonnegative weight.
OwaReduction gen_owa_from_quadratic(const WeightedBase& b);

enum class PosNegFlavor : uint8_t {
  PositiveLiterals,   // {(psi+, -1), (~psi-, 1)}: all literals positive
  NonnegativeWeights, // {(~psi+, 1), (~psi-, 1)}: all weights nonnegative
};

struct PosNegCnf {
  NnfCircuit circuit;  // the True leaf
  WeightedBase base;   // two circuit items
  Score threshold;     // optimum hits this iff psi+ and psi- together are satisfiable
};

/// Positive/negative CNF satisfiability instance with n = 2.
/// Throws ClausePolarityViolation when a clause of psi_pos contains a
/// negative literal or a clause of psi_neg a positive one.
PosNegCnf gen_posneg_cnf(const std::vector<std::vector<Lit>>& psi_pos,
                         const std::vector<std::vector<Lit>>& psi_neg,
                         PosNegFlavor flavor, Aggregator::Kind agg,
                         int num_vars = 0);

struct NegLitElimination {
  WeightedBase base;        // only positive literals; fresh vars substitute ~x
  ObddManager manager;      // original vars interleaved with their fresh vars
  ObddId constraint;        // chain of (~x <-> n_x), linear in |X|
  std::vector<std::pair<Var, Var>> fresh_pairs;  // (original, fresh)
  NameTable names;
};

/// Replaces every negative literal ~x by a fresh positive variable n_x and
/// returns the linear-size OBDD chain of the biconditionals; the optimal
/// solutions of (constraint, base') projected onto the original variables
/// are those of (true, base).
NegLitElimination eliminate_negative_literals(const WeightedBase& b);

// --- running example -----------------------------------------------------

struct PackageDemo {
  NnfCircuit circuit;          // compiled package constraints, 9 variables
  NameTable names;             // A A1 A2 B B1 B2 C C1 C2
  PartialInterpretation gamma; // requirements: A and B1 installed
  WeightedBase minimal_change; // unit cost per installed package variable
  WeightedBase newest;         // reward -1 per version-2 variable
};

PackageDemo gen_package_demo();

}  // namespace kcopt

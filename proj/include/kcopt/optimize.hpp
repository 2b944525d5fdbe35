#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcopt/circuit.hpp"
#include "kcopt/objective.hpp"
#include "kcopt/obdd.hpp"

namespace kcopt {

/// Partial interpretation attached to a circuit node. For leaves and And
/// nodes its extensions are exactly the node's models; for Or nodes they
/// are the models of the selected child, which include at least one optimal
/// model of the Or node.
struct ModelGenerator {
  PartialInterpretation assignment;
  int node = -1;
};

struct OptResult {
  std::optional<Interpretation> witness;
  Score score;  // meaningful only when witness is set

  bool found() const { return witness.has_value(); }
};

/// Extends g to a full interpretation over 1..num_vars that minimizes a
/// linear base under Sum or Leximax. Contributions are grouped per variable
/// and the better value chosen per variable; unconstrained variables and
/// exact ties go to 0.
Interpretation complete_optimally(const PartialInterpretation& g,
                                  const WeightedBase& b, const Aggregator& agg,
                                  int num_vars);

/// True leaf -> {}, literal leaf -> one binding, False leaf -> nothing.
std::optional<ModelGenerator> leaf_generator(const NnfCircuit& c, int node);

/// Union of the children's generators (disjoint by decomposability); empty
/// when some child has none.
std::optional<ModelGenerator> and_generator(
    const NnfCircuit& c, int node,
    const std::vector<std::optional<ModelGenerator>>& child_gens);

/// Selects, among the children owning a generator, one whose optimal
/// completion scores lowest (ties to the lowest child index); empty when no
/// child has a generator.
std::optional<ModelGenerator> or_generator(
    const NnfCircuit& c, int node,
    const std::vector<std::optional<ModelGenerator>>& child_gens,
    const WeightedBase& b, const Aggregator& agg, int num_vars);

/// Optimal model of a decomposable circuit under a linear base, Sum or
/// Leximax: one bottom-up generator pass over the DAG, then an optimal
/// completion at the root. Throws NotDecomposable / FamilyMismatch.
OptResult opt_dnnf_linear(const NnfCircuit& phi, const WeightedBase& b,
                          const Aggregator& agg);

/// Optimal model of a flat Or of terms under a base with positive literals
/// and nonnegative weights: per consistent term, satisfy the term and set
/// everything else to 0, then keep the pairwise minimum.
/// Throws NotDnfShape / FamilyMismatch.
OptResult opt_dnf_monotone(const NnfCircuit& phi, const WeightedBase& b,
                           const Aggregator& agg);

struct FptOptions {
  int n_cap = 12;
  int jobs = 1;  // partitions the sign-pattern loop; never affects results
};

struct FptStats {
  uint64_t patterns = 0;         // outer loop count, always 2^n
  uint64_t candidate_terms = 0;  // consistent candidate terms examined
};

/// Fixed-parameter optimizer for all-term bases over a decomposable circuit:
/// enumerates the 2^n sign patterns over the items, distributes the negated
/// terms' clauses into candidate terms, and keeps the best pattern whose
/// candidate leaves phi consistent.
/// Throws FamilyMismatch / NExceedsCap / NotDecomposable.
OptResult opt_fpt_polynomial(const NnfCircuit& phi, const WeightedBase& b,
                             const Aggregator& agg,
                             const FptOptions& options = {},
                             FptStats* stats = nullptr);

/// Fixed-parameter optimizer for general objective formulas given as OBDDs
/// in the same manager as phi: each item gets a fresh variable constrained
/// to be equivalent to it, the conjunction is exported as a DNNF circuit and
/// optimized linearly over the fresh variables, and the witness is projected
/// back onto the original variables. Extends the manager with n fresh
/// variables. Throws OrderMismatch / NExceedsCap.
OptResult opt_obdd_linearize(ObddManager& m, ObddId phi,
                             const std::vector<std::pair<ObddId, Weight>>& items,
                             const Aggregator& agg, int n_cap = 12);

/// Ground truth: exhaustive minimum over all interpretations of
/// max(phi.num_vars, b.num_vars) <= 24 variables; any circuit, any family,
/// any aggregator. The witness is the lexicographically smallest optimum.
/// Throws TooManyVars.
OptResult oracle_enumerate(const NnfCircuit& phi, const WeightedBase& b,
                           const Aggregator& agg);

enum class Algorithm : uint8_t {
  DnnfLinear,
  DnfMonotone,
  FptPolynomial,
  ObddLinearize,
  Oracle,
};

const char* algorithm_name(Algorithm a);

struct DispatchOptions {
  int n_cap = 12;
  int jobs = 1;
  std::optional<Algorithm> force;  // bypasses routing
};

struct DispatchResult {
  OptResult result;
  Algorithm algorithm = Algorithm::Oracle;
};

/// Routes to the first applicable algorithm: dnnf-linear (decomposable +
/// linear), dnf-monotone (DNF shape + positive literals + nonnegative
/// weights), fpt-poly (all-term base, n <= n_cap, decomposable), then the
/// brute-force oracle (<= 24 variables). Refuses otherwise with
/// IntractableCombination naming the blocking hardness condition.
DispatchResult dispatch(const NnfCircuit& phi, const WeightedBase& b,
                        const Aggregator& agg,
                        const DispatchOptions& options = {});

/// Conditions the circuit and the base by gamma, dispatches, and re-attaches
/// gamma to the witness, so the result is the optimum over the models of phi
/// extending gamma, scored on the original base.
DispatchResult optimize_conditioned(const NnfCircuit& phi,
                                    const PartialInterpretation& gamma,
                                    const WeightedBase& b,
                                    const Aggregator& agg,
                                    const DispatchOptions& options = {});

/// Min-sum semiring sweep over a smooth decomposable circuit in which every
/// variable occurs: literal leaves carry the summed weights of the base
/// literals they satisfy, And adds, Or takes the minimum. Returns the
/// optimal Sum value of a linear base; constant-true items are added on top.
/// Independent cross-check for opt_dnnf_linear.
/// Throws NotSmooth / Inconsistent / NotDecomposable / FamilyMismatch.
Weight semiring_minsum(const NnfCircuit& phi, const WeightedBase& b);

}  // namespace kcopt

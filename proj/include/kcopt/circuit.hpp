#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "kcopt/errors.hpp"

namespace kcopt {

/// Propositional variable, 1-based. Variable 0 is never used.
using Var = int;

/// Set of variables, indexed by Var (bit 0 unused).
using VarSet = boost::dynamic_bitset<>;

struct Lit {
  Var var = 0;
  bool positive = true;

  Lit() = default;
  Lit(Var v, bool pos) : var(v), positive(pos) {}

  Lit complement() const { return Lit(var, !positive); }
  int to_dimacs() const { return positive ? var : -var; }
  /// Throws FormatError on code 0.
  static Lit from_dimacs(int code);

  friend bool operator==(const Lit&, const Lit&) = default;
  friend auto operator<=>(const Lit&, const Lit&) = default;
};

/// Conjunction of literals. Canonical form: sorted by variable, one literal
/// per variable (see normalize_term).
using Term = std::vector<Lit>;

/// Sorts by variable and drops duplicate literals; throws InconsistentTerm
/// if the term mentions both x and ~x.
Term normalize_term(Term t);

/// Total assignment over variables 1..num_vars.
class Interpretation {
 public:
  Interpretation() = default;
  explicit Interpretation(int num_vars) : values_(num_vars + 1, 0) {}

  int num_vars() const { return values_.empty() ? 0 : (int)values_.size() - 1; }
  bool value(Var v) const { return values_.at(v) != 0; }
  void set(Var v, bool b) { values_.at(v) = b ? 1 : 0; }
  bool satisfies(Lit l) const { return value(l.var) == l.positive; }

  friend bool operator==(const Interpretation&, const Interpretation&) = default;

 private:
  std::vector<uint8_t> values_;  // index 0 unused
};

/// Variable-index-lexicographic order with 0 < 1; total on equal num_vars.
bool lex_less(const Interpretation& a, const Interpretation& b);

/// Partial assignment; a variable is never bound to both values.
class PartialInterpretation {
 public:
  PartialInterpretation() = default;

  /// Throws InconsistentTerm on an inconsistent term.
  static PartialInterpretation from_term(const Term& t);

  /// Re-assigning the same value is a no-op; a conflicting value throws
  /// InconsistentTerm.
  void assign(Var v, bool b);
  std::optional<bool> value(Var v) const;
  bool contains(Var v) const { return entries_.count(v) != 0; }
  int size() const { return (int)entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<Var, bool>& entries() const { return entries_; }
  Term to_term() const;

  friend bool operator==(const PartialInterpretation&,
                         const PartialInterpretation&) = default;

 private:
  std::map<Var, bool> entries_;
};

enum class NodeKind : uint8_t { True, False, Lit, And, Or };

/// A 0-ary conjunction is stored as True and a 0-ary disjunction as False,
/// so And/Or nodes always have at least one child.
struct NnfNode {
  NodeKind kind = NodeKind::True;
  Lit lit;                    // Lit nodes only
  int or_hint = 0;            // decision hint of 'O' lines, kept verbatim
  std::vector<int> children;  // And/Or nodes only

  friend bool operator==(const NnfNode&, const NnfNode&) = default;
};

/// Immutable NNF circuit. Nodes are stored children-before-parents (so node
/// order is a topological order) and the root is always the last node,
/// matching the on-disk layout. All transformations build new circuits.
class NnfCircuit {
 public:
  /// Empty placeholder; every operation requires a circuit built through
  /// from_nodes, a builder, or a parser.
  NnfCircuit() = default;

  /// Validates the node list (child ids smaller than the node id, arity >= 1
  /// for And/Or, literal vars within 1..num_vars) and takes ownership.
  static NnfCircuit from_nodes(std::vector<NnfNode> nodes, int num_vars);

  const std::vector<NnfNode>& nodes() const { return nodes_; }
  const NnfNode& node(int id) const { return nodes_.at(id); }
  int size() const { return (int)nodes_.size(); }
  int root() const { return (int)nodes_.size() - 1; }
  int num_vars() const { return num_vars_; }
  /// Number of child edges, i.e. the size |phi| of the circuit.
  int edge_count() const;

  friend bool operator==(const NnfCircuit&, const NnfCircuit&) = default;

 private:
  std::vector<NnfNode> nodes_;
  int num_vars_ = 0;
};

/// Append-only circuit builder. Constant and literal leaves are shared;
/// finish() compacts to the nodes reachable from the chosen root.
class NnfBuilder {
 public:
  explicit NnfBuilder(int num_vars);

  int num_vars() const { return num_vars_; }
  const NnfNode& node(int id) const { return nodes_.at(id); }

  int constant(bool value);
  int literal(Lit l);
  /// Conjunction node; an empty child list yields the True leaf.
  int conj(std::vector<int> children);
  /// Disjunction node; an empty child list yields the False leaf.
  int disj(std::vector<int> children, int hint = 0);
  /// Conjunction with constant folding: True children dropped, a False child
  /// makes the result False, a single surviving child is returned as is.
  int conj_fold(std::vector<int> children);
  /// Dual of conj_fold.
  int disj_fold(std::vector<int> children, int hint = 0);
  /// And-of-literals; empty terms give True, single literals the leaf itself.
  int term(const Term& t);

  NnfCircuit finish(int root) const;

 private:
  int add(NnfNode n);

  std::vector<NnfNode> nodes_;
  int num_vars_ = 0;
  int true_id_ = -1;
  int false_id_ = -1;
  std::map<int, int> literal_ids_;  // dimacs code -> node id
};

// --- file format ------------------------------------------------------

/// Reads the c2d NNF format: header "nnf V E N", then V node lines in id
/// order ("L l", "A c i1 ... ic", "O j c i1 ... ic"); "A 0" is the True
/// leaf and "O j 0" the False leaf. Lines starting with 'c' are comments.
/// Throws FormatError on malformed input, forward references, variables out
/// of range, or an edge-count mismatch.
NnfCircuit parse_nnf(std::istream& in);
NnfCircuit parse_nnf(const std::string& text);

void serialize_nnf(const NnfCircuit& c, std::ostream& out);
std::string serialize_nnf(const NnfCircuit& c);

// --- queries and transformations --------------------------------------

/// Per-node variable sets, computed bottom-up for all nodes.
std::vector<VarSet> vars_of_all(const NnfCircuit& c);
/// Variables of the leaves reachable from `node`.
VarSet vars_of(const NnfCircuit& c, int node);
/// Convenience: the sorted variable list of vars_of(c, c.root()).
std::vector<Var> var_list(const NnfCircuit& c);

struct DecomposabilityReport {
  bool decomposable = true;
  int violating_and = -1;  // smallest And node id whose children share a var
};
DecomposabilityReport check_decomposable(const NnfCircuit& c);

/// Substitutes gamma's values into the literal leaves and propagates
/// constants (And with a False child becomes False, Or with a True child
/// becomes True, constant children are dropped otherwise). The variable
/// universe is unchanged: the result keeps num_vars, but none of gamma's
/// variables occurs in it.
NnfCircuit condition(const NnfCircuit& c, const PartialInterpretation& gamma);

/// Linear-time consistency for decomposable circuits.
/// Throws NotDecomposable on non-DNNF input instead of answering wrong.
bool consistent(const NnfCircuit& c);

/// Rewrites a decomposable circuit so that all children of every Or node
/// mention the same variables and every variable of `over` occurs, by
/// conjoining (x or ~x) gadgets for missing variables. Vars(c) must be a
/// subset of `over`. Model-equivalent over `over`.
NnfCircuit smooth(const NnfCircuit& c, const std::vector<Var>& over);

/// True when every Or node is variable-balanced and every variable
/// 1..c.num_vars() occurs in the circuit.
bool is_smooth_over_all_vars(const NnfCircuit& c);

bool evaluate(const NnfCircuit& c, const Interpretation& omega);

/// Deterministic model of a consistent decomposable circuit: And nodes take
/// all children, Or nodes the first consistent child. Variables outside the
/// chosen leaves stay unassigned. Throws Inconsistent / NotDecomposable.
PartialInterpretation extract_model(const NnfCircuit& c);

}  // namespace kcopt

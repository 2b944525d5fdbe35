#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kcopt/circuit.hpp"

namespace kcopt {

/// Index into the manager's node store; 0 and 1 are the terminals.
using ObddId = int;

struct ObddNode {
  Var var = 0;
  ObddId lo = 0;  // var = 0 branch
  ObddId hi = 0;  // var = 1 branch
};

enum class BoolOp : uint8_t { And, Or, Xor, Iff };

/// Reduced ordered BDD store with a unique table, one global variable order
/// and an apply cache. Single writer; a frozen manager can be read from any
/// number of threads. Ids from other managers are never valid here.
class ObddManager {
 public:
  static constexpr ObddId false_id = 0;
  static constexpr ObddId true_id = 1;

  /// Identity order 1..num_vars.
  explicit ObddManager(int num_vars);
  /// `order` must be a permutation of 1..num_vars.
  ObddManager(int num_vars, std::vector<Var> order);

  int num_vars() const { return (int)order_.size(); }
  const std::vector<Var>& order() const { return order_; }
  int position(Var v) const;

  /// Appends a fresh variable at the end of the order and returns it.
  Var add_var();

  std::size_t node_count() const { return nodes_.size(); }  // terminals included
  const ObddNode& node(ObddId id) const;
  bool is_terminal(ObddId id) const { return id == false_id || id == true_id; }

  /// Reduced, hash-consed node; returns lo when lo == hi.
  ObddId make(Var v, ObddId lo, ObddId hi);
  ObddId literal(Lit l);
  /// OBDD of the conjunction of t. Throws InconsistentTerm.
  ObddId build_term(const Term& t);
  /// Canonical reduced OBDD of (f op g); cached, at most |f|*|g| new nodes.
  ObddId apply(BoolOp op, ObddId f, ObddId g);
  /// OBDD of (fresh <-> f). `fresh` must not occur in f (FreshVarOccurs).
  ObddId biconditional_with_fresh(Var fresh, ObddId f);

  bool evaluate(ObddId f, const Interpretation& omega) const;
  VarSet support(ObddId f) const;

 private:
  ObddId checked(ObddId id) const;  // throws OrderMismatch on foreign ids

  std::vector<Var> order_;   // position -> var
  std::vector<int> pos_;     // var -> position
  std::vector<ObddNode> nodes_;
  std::unordered_map<uint64_t, ObddId> unique_;
  std::unordered_map<uint64_t, ObddId> cache_;
};

/// Structural export: each decision node on v becomes
/// Or(And(~v, lo'), And(v, hi')). The result is decomposable and has the
/// same models as f over the manager's variables.
NnfCircuit obdd_to_nnf(const ObddManager& m, ObddId f);

// --- file format ------------------------------------------------------

struct ParsedObdd {
  ObddManager manager;
  ObddId root;
};

/// Format: header "obdd <numvars> <numnodes>"; a line "order v1 ... vk";
/// numnodes node lines "<id> <var> <lo> <hi>" with ids starting at 2 in
/// increasing order and lo/hi referencing 0, 1 or earlier ids; a final line
/// "root <id>". Rejects order violations, lo == hi and duplicate triples
/// with FormatError.
ParsedObdd parse_obdd(std::istream& in);

/// Writes the nodes reachable from `root`, densely renumbered in id order.
void serialize_obdd(const ObddManager& m, ObddId root, std::ostream& out);
std::string serialize_obdd(const ObddManager& m, ObddId root);

}  // namespace kcopt

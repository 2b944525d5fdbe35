#include "kcopt/gen.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "kcopt/compile.hpp"

namespace kcopt {

Var NameTable::intern(const std::string& name) {
  for (size_t i = 1; i < names_.size(); ++i)
    if (names_[i] == name) return (Var)i;
  names_.push_back(name);
  return (Var)names_.size() - 1;
}

std::optional<Var> NameTable::find(const std::string& name) const {
  for (size_t i = 1; i < names_.size(); ++i)
    if (names_[i] == name) return (Var)i;
  return std::nullopt;
}

const std::string& NameTable::name(Var v) const {
  if (v < 1 || v >= (Var)names_.size()) throw Error("unknown variable index");
  return names_[v];
}

void save_names(const NameTable& t, std::ostream& out) {
  for (Var v = 1; v <= t.size(); ++v) out << v << ' ' << t.name(v) << '\n';
}

NameTable load_names(std::istream& in) {
  NameTable t;
  std::string line;
  int expected = 1;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    std::istringstream iss(line);
    int index;
    std::string name, extra;
    if (!(iss >> index >> name)) throw FormatError("malformed name line");
    if (iss >> extra) throw FormatError("trailing tokens on name line");
    if (index != expected) throw FormatError("name indices must be 1,2,...");
    if (t.find(name)) throw FormatError("duplicate name '" + name + "'");
    t.intern(name);
    ++expected;
  }
  return t;
}

// --- hitting set, linear ---------------------------------------------------

namespace {

struct ElementMap {
  NameTable names;
  std::vector<std::pair<Var, Var>> pairs;  // one per input set, in order
};

ElementMap map_elements(
    const std::vector<std::pair<std::string, std::string>>& sets) {
  ElementMap m;
  for (const auto& [a, b] : sets) {
    if (a == b) throw BadSetSize("sets must contain two distinct elements");
    Var va = m.names.intern(a);
    Var vb = m.names.intern(b);
    m.pairs.emplace_back(va, vb);
  }
  return m;
}

}  // namespace

HittingSetLinear gen_hitting_set_linear(
    const std::vector<std::pair<std::string, std::string>>& sets) {
  ElementMap m = map_elements(sets);
  int num_vars = m.names.size();

  // duplicate clauses removed: all clauses are positive and binary, so this
  // already is the subsumption-reduced (prime implicate) form
  std::vector<std::pair<Var, Var>> clauses;
  std::set<std::pair<Var, Var>> seen;
  for (auto [a, b] : m.pairs) {
    auto key = std::minmax(a, b);
    if (seen.insert(key).second) clauses.push_back(key);
  }

  NnfBuilder builder(num_vars);
  std::vector<int> conjuncts;
  for (auto [a, b] : clauses)
    conjuncts.push_back(
        builder.disj({builder.literal(Lit(a, true)), builder.literal(Lit(b, true))}));
  int root = conjuncts.empty() ? builder.constant(true)
                               : builder.conj(std::move(conjuncts));

  WeightedBase base(num_vars);
  for (Var v = 1; v <= num_vars; ++v) base.add_term({Lit(v, true)}, 1);
  return {builder.finish(root), std::move(base), std::move(m.names)};
}

// --- term satisfaction, quadratic -------------------------------------------

TermSatQuadratic gen_term_sat_quadratic(const std::vector<Term>& terms,
                                        int num_vars) {
  for (const Term& t : terms) {
    Term n = normalize_term(t);  // throws InconsistentTerm
    if (n.size() != 2)
      throw BadSetSize("every term must have exactly 2 literals on distinct variables");
    num_vars = std::max({num_vars, n[0].var, n[1].var});
  }
  WeightedBase base(num_vars);
  for (const Term& t : terms) {
    Term n = normalize_term(t);
    Lit l1 = n[0], l2 = n[1];
    base.add_term({l1.complement(), l2}, 1);
    base.add_term({l1, l2.complement()}, 1);
    base.add_term({l1.complement(), l2.complement()}, 1);
  }
  NnfBuilder builder(num_vars);
  return {builder.finish(builder.constant(true)), std::move(base)};
}

// --- hitting set, positive quadratic -----------------------------------------

HittingSetQPlus gen_hitting_set_qplus(
    const std::vector<std::pair<std::string, std::string>>& sets) {
  ElementMap m = map_elements(sets);
  int num_vars = m.names.size();

  WeightedBase base(num_vars);
  std::set<std::pair<Term, Weight>> emitted;  // multi-occurrent items dropped
  auto add_once = [&](Term t, Weight w) {
    if (emitted.emplace(t, w).second) base.add_term(std::move(t), std::move(w));
  };
  for (auto [a, b] : m.pairs) {
    auto [lo, hi] = std::minmax(a, b);
    add_once({Lit(lo, true), Lit(hi, true)}, 2);
    add_once({Lit(a, true)}, -1);
    add_once({Lit(b, true)}, -1);
  }
  NnfBuilder builder(num_vars);
  return {builder.finish(builder.constant(true)), std::move(base),
          std::move(m.names)};
}

// --- OWA linearization --------------------------------------------------------

OwaReduction gen_owa_from_quadratic(const WeightedBase& b) {
  int n = b.size();
  Weight max_weight = 0;
  for (const WeightedItem& item : b.items()) {
    if (!item.is_term() || item.term().lits.size() != 2)
      throw FamilyMismatch("every item must be a 2-literal term");
    if (item.weight < 0)
      throw FamilyMismatch("every weight must be nonnegative");
    max_weight = std::max(max_weight, item.weight);
  }
  Weight k = max_weight + 1;

  WeightedBase linear(b.num_vars());
  for (int i = 1; i <= n; ++i) {
    const TermFormula& t = b.item(i - 1).term();
    const Weight& w = b.item(i - 1).weight;
    Lit l1 = t.lits[0], l2 = t.lits[1];
    Weight high = n * (k * (n - i + 1) + w);
    Weight low = n * k * (n - i + 1);
    linear.add_term({l1}, high);
    linear.add_term({l2}, high);
    linear.add_term({l1.complement()}, low);
    linear.add_term({l2.complement()}, low);
  }

  std::vector<Weight> owa;
  owa.reserve(4 * n);
  for (int i = 0; i < n; ++i) {
    owa.push_back(0);
    owa.push_back(Weight(1, n));
  }
  for (int i = 0; i < 2 * n; ++i) owa.push_back(0);
  return {std::move(linear), Aggregator::owa(std::move(owa))};
}

// --- positive/negative CNF ------------------------------------------------------

namespace {

int cnf_circuit(NnfBuilder& builder, const std::vector<std::vector<Lit>>& clauses) {
  std::vector<int> conjuncts;
  for (const std::vector<Lit>& c : clauses) {
    std::vector<int> lits;
    for (const Lit& l : c) lits.push_back(builder.literal(l));
    conjuncts.push_back(builder.disj(std::move(lits)));
  }
  return builder.conj(std::move(conjuncts));  // empty -> true
}

// negation of a CNF: Or over clauses of the And of complemented literals
int negated_cnf_circuit(NnfBuilder& builder,
                        const std::vector<std::vector<Lit>>& clauses) {
  std::vector<int> disjuncts;
  for (const std::vector<Lit>& c : clauses) {
    std::vector<int> lits;
    for (const Lit& l : c) lits.push_back(builder.literal(l.complement()));
    disjuncts.push_back(lits.empty() ? builder.constant(true)
                                     : builder.conj(std::move(lits)));
  }
  return disjuncts.empty() ? builder.constant(false)
                           : builder.disj(std::move(disjuncts));
}

}  // namespace

PosNegCnf gen_posneg_cnf(const std::vector<std::vector<Lit>>& psi_pos,
                         const std::vector<std::vector<Lit>>& psi_neg,
                         PosNegFlavor flavor, Aggregator::Kind agg,
                         int num_vars) {
  for (const auto& c : psi_pos)
    for (const Lit& l : c) {
      if (!l.positive)
        throw ClausePolarityViolation("negative literal in a positive clause");
      num_vars = std::max(num_vars, l.var);
    }
  for (const auto& c : psi_neg)
    for (const Lit& l : c) {
      if (l.positive)
        throw ClausePolarityViolation("positive literal in a negative clause");
      num_vars = std::max(num_vars, l.var);
    }

  WeightedBase base(num_vars);
  Score threshold;
  {
    NnfBuilder pos_builder(num_vars);
    NnfBuilder neg_builder(num_vars);
    int neg_root = negated_cnf_circuit(neg_builder, psi_neg);
    auto not_psi_neg = std::make_shared<NnfCircuit>(neg_builder.finish(neg_root));
    if (flavor == PosNegFlavor::PositiveLiterals) {
      int pos_root = cnf_circuit(pos_builder, psi_pos);
      base.add_circuit(std::make_shared<NnfCircuit>(pos_builder.finish(pos_root)),
                       -1);
      base.add_circuit(std::move(not_psi_neg), 1);
      threshold = agg == Aggregator::Kind::Sum
                      ? Score::of_sum(-1)
                      : Score::of_vector({Weight(0), Weight(-1)});
    } else {
      int pos_root = negated_cnf_circuit(pos_builder, psi_pos);
      base.add_circuit(std::make_shared<NnfCircuit>(pos_builder.finish(pos_root)),
                       1);
      base.add_circuit(std::move(not_psi_neg), 1);
      threshold = agg == Aggregator::Kind::Sum
                      ? Score::of_sum(0)
                      : Score::of_vector({Weight(0), Weight(0)});
    }
  }
  NnfBuilder builder(num_vars);
  return {builder.finish(builder.constant(true)), std::move(base),
          std::move(threshold)};
}

// --- negative literal elimination -----------------------------------------------

namespace {

std::shared_ptr<const NnfCircuit> map_negative_leaves(
    const NnfCircuit& c, int out_vars, const std::map<Var, Var>& fresh_of) {
  NnfBuilder builder(out_vars);
  std::vector<int> remap(c.size(), -1);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    switch (n.kind) {
      case NodeKind::True: remap[id] = builder.constant(true); break;
      case NodeKind::False: remap[id] = builder.constant(false); break;
      case NodeKind::Lit:
        remap[id] = n.lit.positive
                        ? builder.literal(n.lit)
                        : builder.literal(Lit(fresh_of.at(n.lit.var), true));
        break;
      case NodeKind::And:
      case NodeKind::Or: {
        std::vector<int> children;
        for (int ch : n.children) children.push_back(remap[ch]);
        remap[id] = n.kind == NodeKind::And
                        ? builder.conj(std::move(children))
                        : builder.disj(std::move(children), n.or_hint);
        break;
      }
    }
  }
  return std::make_shared<NnfCircuit>(builder.finish(remap[c.root()]));
}

}  // namespace

NegLitElimination eliminate_negative_literals(const WeightedBase& b) {
  // X: variables with a negative occurrence, ascending
  std::set<Var> negative;
  for (const WeightedItem& item : b.items()) {
    if (item.is_term()) {
      for (const Lit& l : item.term().lits)
        if (!l.positive) negative.insert(l.var);
    } else {
      for (const NnfNode& n : item.circuit().nodes())
        if (n.kind == NodeKind::Lit && !n.lit.positive) negative.insert(n.lit.var);
    }
  }

  int original = b.num_vars();
  int total = original + (int)negative.size();
  std::map<Var, Var> fresh_of;
  std::vector<std::pair<Var, Var>> pairs;
  {
    Var next = original;
    for (Var v : negative) {
      fresh_of[v] = ++next;
      pairs.emplace_back(v, next);
    }
  }

  // each fresh variable sits right after its original, so the biconditional
  // chain stays linear in the OBDD
  std::vector<Var> order;
  order.reserve(total);
  for (Var v = 1; v <= original; ++v) {
    order.push_back(v);
    if (auto it = fresh_of.find(v); it != fresh_of.end())
      order.push_back(it->second);
  }
  ObddManager manager(total, std::move(order));
  ObddId constraint = ObddManager::true_id;
  for (auto [v, nv] : pairs) {
    // (~v <-> n_v): nothing but a decision on v selecting n_v's phase
    ObddId bic = manager.make(v, manager.literal(Lit(nv, true)),
                              manager.literal(Lit(nv, false)));
    constraint = manager.apply(BoolOp::And, constraint, bic);
  }

  WeightedBase out(total);
  for (const WeightedItem& item : b.items()) {
    if (item.is_term()) {
      const TermFormula& t = item.term();
      if (t.falsum) {
        out.add_falsum(item.weight);
        continue;
      }
      Term mapped;
      for (const Lit& l : t.lits)
        mapped.push_back(l.positive ? l : Lit(fresh_of.at(l.var), true));
      out.add_term(std::move(mapped), item.weight);
    } else {
      out.add_circuit(map_negative_leaves(item.circuit(), total, fresh_of),
                      item.weight);
    }
  }

  NameTable names;
  for (Var v = 1; v <= original; ++v) names.intern("v" + std::to_string(v));
  for (auto [v, nv] : pairs) {
    (void)nv;
    names.intern("n_v" + std::to_string(v));
  }
  return {std::move(out), std::move(manager), constraint, std::move(pairs),
          std::move(names)};
}

// --- package dependency demo -------------------------------------------------------

PackageDemo gen_package_demo() {
  PackageDemo demo;
  for (const char* name : {"A", "A1", "A2", "B", "B1", "B2", "C", "C1", "C2"})
    demo.names.intern(name);
  const Var A = 1, A1 = 2, A2 = 3, B = 4, B1 = 5, B2 = 6, C = 7, C1 = 8, C2 = 9;

  CnfFormula cnf;
  cnf.num_vars = 9;
  auto clause = [&](std::initializer_list<int> codes) {
    std::vector<Lit> c;
    for (int code : codes) c.push_back(Lit::from_dimacs(code));
    cnf.clauses.push_back(std::move(c));
  };
  // A <-> (A1 or A2), B <-> (B1 or B2), C <-> (C1 or C2)
  clause({-A, A1, A2}); clause({-A1, A}); clause({-A2, A});
  clause({-B, B1, B2}); clause({-B1, B}); clause({-B2, B});
  clause({-C, C1, C2}); clause({-C1, C}); clause({-C2, C});
  // A1 -> B, A2 -> B and C, not both versions of A
  clause({-A1, B});
  clause({-A2, B}); clause({-A2, C});
  clause({-A1, -A2});
  demo.circuit = compile_cnf_to_dnnf(cnf);

  demo.gamma.assign(A, true);
  demo.gamma.assign(B1, true);

  demo.minimal_change = WeightedBase(9);
  for (Var v = 1; v <= 9; ++v) demo.minimal_change.add_term({Lit(v, true)}, 1);

  demo.newest = WeightedBase(9);
  for (Var v : {A2, B2, C2}) demo.newest.add_term({Lit(v, true)}, -1);
  return demo;
}

}  // namespace kcopt

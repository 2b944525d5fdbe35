#include "kcopt/optimize.hpp"

#include <algorithm>
#include <functional>
#include <thread>

namespace kcopt {

namespace {

bool is_linear_aggregator(const Aggregator& agg) {
  return agg.kind == Aggregator::Kind::Sum ||
         agg.kind == Aggregator::Kind::Leximax;
}

void require_sum_or_leximax(const Aggregator& agg, const char* who) {
  if (!is_linear_aggregator(agg))
    throw Error(std::string(who) + " supports only the sum and leximax aggregators");
}

// Per-variable slice of a linear base: the weights of the positive and
// negative literal items on that variable.
struct VarContributions {
  std::vector<Weight> if_true;   // values w_i * phi_i when v = 1
  std::vector<Weight> if_false;  // values when v = 0
};

std::vector<VarContributions> group_by_var(const WeightedBase& b, int num_vars) {
  std::vector<VarContributions> by_var(num_vars + 1);
  for (const WeightedItem& item : b.items()) {
    if (!item.is_term()) throw FamilyMismatch("base is not linear");
    const TermFormula& t = item.term();
    if (t.falsum || t.lits.empty()) continue;  // constants bind no variable
    if (t.lits.size() != 1) throw FamilyMismatch("base is not linear");
    const Lit& l = t.lits.front();
    by_var[l.var].if_true.push_back(l.positive ? item.weight : Weight(0));
    by_var[l.var].if_false.push_back(l.positive ? Weight(0) : item.weight);
  }
  return by_var;
}

bool leximax_less(std::vector<Weight> a, std::vector<Weight> b) {
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

bool prefer_true(const VarContributions& c, const Aggregator& agg) {
  if (agg.kind == Aggregator::Kind::Sum) {
    Weight s1 = 0, s0 = 0;
    for (const Weight& w : c.if_true) s1 += w;
    for (const Weight& w : c.if_false) s0 += w;
    return s1 < s0;
  }
  return leximax_less(c.if_true, c.if_false);
}

}  // namespace

Interpretation complete_optimally(const PartialInterpretation& g,
                                  const WeightedBase& b, const Aggregator& agg,
                                  int num_vars) {
  require_sum_or_leximax(agg, "complete_optimally");
  std::vector<VarContributions> by_var = group_by_var(b, num_vars);
  Interpretation omega(num_vars);
  for (Var v = 1; v <= num_vars; ++v) {
    if (std::optional<bool> bound = g.value(v)) {
      omega.set(v, *bound);
    } else if (!by_var[v].if_true.empty() && prefer_true(by_var[v], agg)) {
      omega.set(v, true);
    }  // ties and unconstrained variables stay 0
  }
  return omega;
}

std::optional<ModelGenerator> leaf_generator(const NnfCircuit& c, int node) {
  const NnfNode& n = c.node(node);
  switch (n.kind) {
    case NodeKind::True:
      return ModelGenerator{{}, node};
    case NodeKind::False:
      return std::nullopt;
    case NodeKind::Lit: {
      PartialInterpretation g;
      g.assign(n.lit.var, n.lit.positive);
      return ModelGenerator{std::move(g), node};
    }
    default:
      throw Error("leaf_generator called on an internal node");
  }
}

std::optional<ModelGenerator> and_generator(
    const NnfCircuit& c, int node,
    const std::vector<std::optional<ModelGenerator>>& child_gens) {
  const NnfNode& n = c.node(node);
  if (n.kind != NodeKind::And) throw Error("and_generator called on a non-And node");
  PartialInterpretation merged;
  for (const auto& g : child_gens) {
    if (!g) return std::nullopt;
    for (auto [v, b] : g->assignment.entries()) merged.assign(v, b);
  }
  return ModelGenerator{std::move(merged), node};
}

std::optional<ModelGenerator> or_generator(
    const NnfCircuit& c, int node,
    const std::vector<std::optional<ModelGenerator>>& child_gens,
    const WeightedBase& b, const Aggregator& agg, int num_vars) {
  const NnfNode& n = c.node(node);
  if (n.kind != NodeKind::Or) throw Error("or_generator called on a non-Or node");
  std::optional<ModelGenerator> best;
  std::optional<Score> best_score;
  for (const auto& g : child_gens) {
    if (!g) continue;
    Interpretation omega = complete_optimally(g->assignment, b, agg, num_vars);
    Score s = evaluate_base(b, agg, omega);
    if (!best_score || compare_scores(s, *best_score) < 0) {
      best_score = std::move(s);
      best = ModelGenerator{g->assignment, node};
    }
  }
  return best;
}

OptResult opt_dnnf_linear(const NnfCircuit& phi, const WeightedBase& b,
                          const Aggregator& agg) {
  require_sum_or_leximax(agg, "opt_dnnf_linear");
  DecomposabilityReport rep = check_decomposable(phi);
  if (!rep.decomposable)
    throw NotDecomposable("circuit is not decomposable (And node " +
                          std::to_string(rep.violating_and) + ")");
  if (classify(b).family != Family::L)
    throw FamilyMismatch("opt_dnnf_linear requires a linear base");
  int num_vars = std::max(phi.num_vars(), b.num_vars());

  std::vector<std::optional<ModelGenerator>> gens(phi.size());
  std::vector<std::optional<ModelGenerator>> children;
  for (int id = 0; id < phi.size(); ++id) {
    const NnfNode& n = phi.node(id);
    if (n.kind == NodeKind::And || n.kind == NodeKind::Or) {
      children.clear();
      for (int ch : n.children) children.push_back(gens[ch]);
      gens[id] = n.kind == NodeKind::And
                     ? and_generator(phi, id, children)
                     : or_generator(phi, id, children, b, agg, num_vars);
    } else {
      gens[id] = leaf_generator(phi, id);
    }
  }
  if (!gens[phi.root()]) return {};
  Interpretation omega =
      complete_optimally(gens[phi.root()]->assignment, b, agg, num_vars);
  Score score = evaluate_base(b, agg, omega);
  return {std::move(omega), std::move(score)};
}

namespace {

// Terms of a flat DNF: the root is an Or whose children are literal leaves,
// True leaves or Ands of literal leaves (a bare term or constant root counts
// as a one-term DNF). Inconsistent terms come back as nullopt entries.
std::vector<std::optional<Term>> dnf_term_list(const NnfCircuit& c) {
  auto leaf_term = [&](int id) -> std::optional<Term> {
    const NnfNode& n = c.node(id);
    switch (n.kind) {
      case NodeKind::True:
        return Term{};
      case NodeKind::False:
        return std::nullopt;
      case NodeKind::Lit:
        return Term{n.lit};
      case NodeKind::And: {
        Term t;
        bool dead = false;
        for (int ch : n.children) {
          const NnfNode& leaf = c.node(ch);
          if (leaf.kind == NodeKind::Lit) t.push_back(leaf.lit);
          else if (leaf.kind == NodeKind::True) continue;
          else if (leaf.kind == NodeKind::False) dead = true;
          else throw NotDnfShape("term contains a nested gate");
        }
        if (dead) return std::nullopt;
        try {
          return normalize_term(std::move(t));
        } catch (const InconsistentTerm&) {
          return std::nullopt;
        }
      }
      case NodeKind::Or:
        throw NotDnfShape("nested Or under the DNF root");
    }
    throw NotDnfShape("unreachable");
  };

  std::vector<std::optional<Term>> terms;
  const NnfNode& root = c.node(c.root());
  if (root.kind == NodeKind::Or) {
    for (int ch : root.children) terms.push_back(leaf_term(ch));
  } else if (root.kind == NodeKind::False) {
    // empty DNF
  } else {
    terms.push_back(leaf_term(c.root()));
  }
  return terms;
}

}  // namespace

OptResult opt_dnf_monotone(const NnfCircuit& phi, const WeightedBase& b,
                           const Aggregator& agg) {
  require_sum_or_leximax(agg, "opt_dnf_monotone");
  FamilyTag tag = classify(b);
  if (!tag.positive_literals)
    throw FamilyMismatch("opt_dnf_monotone requires positive literals only");
  if (!tag.nonnegative_weights)
    throw FamilyMismatch("opt_dnf_monotone requires nonnegative weights");
  std::vector<std::optional<Term>> terms = dnf_term_list(phi);
  int num_vars = std::max(phi.num_vars(), b.num_vars());

  std::optional<Interpretation> best;
  std::optional<Score> best_score;
  for (const auto& t : terms) {
    if (!t) continue;  // inconsistent term
    Interpretation omega(num_vars);
    for (const Lit& l : *t) omega.set(l.var, l.positive);
    Score s = evaluate_base(b, agg, omega);
    if (!best_score || compare_scores(s, *best_score) < 0) {
      best_score = std::move(s);
      best = std::move(omega);
    }
  }
  if (!best) return {};
  return {std::move(best), std::move(*best_score)};
}

// --- fixed-parameter optimizer over term bases -----------------------------

namespace {

struct FptCandidate {
  Score score;
  uint64_t mask;
  Term term;
};

struct FptInstance {
  const NnfCircuit& phi;
  const WeightedBase& b;
  const Aggregator& agg;
  int num_vars;
};

Score pattern_score(const FptInstance& inst, uint64_t mask) {
  int n = inst.b.size();
  std::vector<Weight> values;
  values.reserve(n);
  for (int i = 0; i < n; ++i)
    values.push_back(mask >> i & 1 ? inst.b.item(i).weight : Weight(0));
  if (inst.agg.kind == Aggregator::Kind::Sum) {
    Weight total = 0;
    for (const Weight& v : values) total += v;
    return Score::of_sum(std::move(total));
  }
  return Score::of_vector(std::move(values));
}

// First candidate term of the pattern whose conditioning leaves phi
// consistent, in clause-distribution order. nullopt when the pattern is
// infeasible. `candidates` counts the consistent terms examined.
std::optional<Term> pattern_witness_term(const FptInstance& inst, uint64_t mask,
                                         uint64_t& candidates) {
  int n = inst.b.size();
  PartialInterpretation positive;
  std::vector<const Term*> clauses;  // literals to complement, one pick each
  for (int i = 0; i < n; ++i) {
    const TermFormula& t = inst.b.item(i).term();
    if (mask >> i & 1) {
      if (t.falsum) return std::nullopt;  // positive part contradictory
      for (const Lit& l : t.lits) {
        try {
          positive.assign(l.var, l.positive);
        } catch (const InconsistentTerm&) {
          return std::nullopt;
        }
      }
    } else {
      if (t.falsum) continue;           // negating false constrains nothing
      if (t.lits.empty()) return std::nullopt;  // negating true is impossible
      clauses.push_back(&t.lits);
    }
  }

  auto check = [&](const PartialInterpretation& term) -> std::optional<Term> {
    ++candidates;
    PartialInterpretation circuit_part;
    for (auto [v, val] : term.entries())
      if (v <= inst.phi.num_vars()) circuit_part.assign(v, val);
    NnfCircuit conditioned = condition(inst.phi, circuit_part);
    if (!consistent(conditioned)) return std::nullopt;
    return term.to_term();
  };

  // odometer over one complemented literal per clause, earlier clauses most
  // significant, literals left to right
  std::vector<size_t> pick(clauses.size(), 0);
  while (true) {
    PartialInterpretation term = positive;
    bool ok = true;
    for (size_t c = 0; c < clauses.size() && ok; ++c) {
      Lit chosen = (*clauses[c])[pick[c]].complement();
      try {
        term.assign(chosen.var, chosen.positive);
      } catch (const InconsistentTerm&) {
        ok = false;
      }
    }
    if (ok) {
      if (std::optional<Term> t = check(term)) return t;
    }
    // advance the odometer
    size_t c = clauses.size();
    while (c > 0) {
      --c;
      if (++pick[c] < clauses[c]->size()) break;
      pick[c] = 0;
      if (c == 0) return std::nullopt;
    }
    if (clauses.empty()) return std::nullopt;
  }
}

Interpretation fpt_witness(const FptInstance& inst, const Term& term) {
  PartialInterpretation circuit_part;
  for (const Lit& l : term)
    if (l.var <= inst.phi.num_vars()) circuit_part.assign(l.var, l.positive);
  NnfCircuit conditioned = condition(inst.phi, circuit_part);
  PartialInterpretation model = extract_model(conditioned);
  Interpretation omega(inst.num_vars);
  for (auto [v, b] : model.entries()) omega.set(v, b);
  for (const Lit& l : term) omega.set(l.var, l.positive);
  return omega;
}

}  // namespace

OptResult opt_fpt_polynomial(const NnfCircuit& phi, const WeightedBase& b,
                             const Aggregator& agg, const FptOptions& options,
                             FptStats* stats) {
  require_sum_or_leximax(agg, "opt_fpt_polynomial");
  for (const WeightedItem& item : b.items())
    if (!item.is_term())
      throw FamilyMismatch("opt_fpt_polynomial requires an all-term base");
  int n = b.size();
  if (n > options.n_cap)
    throw NExceedsCap("base cardinality " + std::to_string(n) +
                      " exceeds the cap " + std::to_string(options.n_cap));
  DecomposabilityReport rep = check_decomposable(phi);
  if (!rep.decomposable)
    throw NotDecomposable("opt_fpt_polynomial requires a decomposable circuit");

  FptInstance inst{phi, b, agg, std::max(phi.num_vars(), b.num_vars())};
  uint64_t pattern_count = uint64_t(1) << n;

  auto scan = [&](uint64_t begin, uint64_t end, uint64_t& candidates)
      -> std::optional<FptCandidate> {
    std::optional<FptCandidate> best;
    for (uint64_t mask = begin; mask < end; ++mask) {
      Score s = pattern_score(inst, mask);
      if (best && compare_scores(s, best->score) >= 0) continue;
      if (std::optional<Term> t = pattern_witness_term(inst, mask, candidates))
        best = FptCandidate{std::move(s), mask, std::move(*t)};
    }
    return best;
  };

  std::optional<FptCandidate> best;
  uint64_t candidates = 0;
  int jobs = std::max(1, options.jobs);
  if (jobs == 1 || pattern_count < 2 * (uint64_t)jobs) {
    best = scan(0, pattern_count, candidates);
  } else {
    std::vector<std::optional<FptCandidate>> partial(jobs);
    std::vector<uint64_t> counts(jobs, 0);
    std::vector<std::thread> workers;
    uint64_t chunk = (pattern_count + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      uint64_t begin = chunk * j;
      uint64_t end = std::min(pattern_count, begin + chunk);
      workers.emplace_back([&, j, begin, end] {
        partial[j] = scan(begin, end, counts[j]);
      });
    }
    for (auto& w : workers) w.join();
    for (int j = 0; j < jobs; ++j) {
      candidates += counts[j];
      if (!partial[j]) continue;
      // deterministic reduction: better score, then the smaller mask
      if (!best || compare_scores(partial[j]->score, best->score) < 0 ||
          (compare_scores(partial[j]->score, best->score) == 0 &&
           partial[j]->mask < best->mask))
        best = std::move(partial[j]);
    }
  }
  if (stats) {
    stats->patterns = pattern_count;
    stats->candidate_terms = candidates;
  }
  if (!best) return {};
  Interpretation omega = fpt_witness(inst, best->term);
  return {std::move(omega), std::move(best->score)};
}

OptResult opt_obdd_linearize(ObddManager& m, ObddId phi,
                             const std::vector<std::pair<ObddId, Weight>>& items,
                             const Aggregator& agg, int n_cap) {
  require_sum_or_leximax(agg, "opt_obdd_linearize");
  if ((int)items.size() > n_cap)
    throw NExceedsCap("item count " + std::to_string(items.size()) +
                      " exceeds the cap " + std::to_string(n_cap));
  int original_vars = m.num_vars();
  ObddId psi = phi;
  std::vector<Var> fresh;
  fresh.reserve(items.size());
  for (const auto& [f, w] : items) {
    (void)w;
    Var v = m.add_var();
    fresh.push_back(v);
    psi = m.apply(BoolOp::And, psi, m.biconditional_with_fresh(v, f));
  }
  if (psi == ObddManager::false_id) return {};

  NnfCircuit circuit = obdd_to_nnf(m, psi);
  WeightedBase linear(m.num_vars());
  for (size_t i = 0; i < items.size(); ++i)
    linear.add_term({Lit(fresh[i], true)}, items[i].second);

  OptResult extended = opt_dnnf_linear(circuit, linear, agg);
  if (!extended.found()) return {};  // cannot happen: psi is consistent

  Interpretation projected(original_vars);
  for (Var v = 1; v <= original_vars; ++v)
    projected.set(v, extended.witness->value(v));

  // the fresh variables track the items exactly, so the projected witness
  // re-evaluates to the reported score
  std::vector<Weight> values;
  for (const auto& [f, w] : items)
    values.push_back(m.evaluate(f, projected) ? w : Weight(0));
  Score check = agg.kind == Aggregator::Kind::Sum
                    ? Score::of_sum([&] {
                        Weight t = 0;
                        for (const Weight& v : values) t += v;
                        return t;
                      }())
                    : Score::of_vector(values);
  if (compare_scores(check, extended.score) != 0)
    throw Error("linearized score does not match the projected witness");
  return {std::move(projected), std::move(extended.score)};
}

OptResult oracle_enumerate(const NnfCircuit& phi, const WeightedBase& b,
                           const Aggregator& agg) {
  int num_vars = std::max(phi.num_vars(), b.num_vars());
  if (num_vars > 24)
    throw TooManyVars("enumeration over " + std::to_string(num_vars) +
                      " variables refused (cap 24)");
  std::optional<Interpretation> best;
  std::optional<Score> best_score;
  // ascending masks with variable 1 as the most significant bit visit
  // interpretations in lexicographic order, so the first optimum kept is
  // the lexicographically smallest one
  for (uint64_t mask = 0; mask < (uint64_t(1) << num_vars); ++mask) {
    Interpretation omega(num_vars);
    for (Var v = 1; v <= num_vars; ++v)
      omega.set(v, mask >> (num_vars - v) & 1);
    if (!evaluate(phi, omega)) continue;
    Score s = evaluate_base(b, agg, omega);
    if (!best_score || compare_scores(s, *best_score) < 0) {
      best_score = std::move(s);
      best = std::move(omega);
    }
  }
  if (!best) return {};
  return {std::move(best), std::move(*best_score)};
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::DnnfLinear: return "dnnf-linear";
    case Algorithm::DnfMonotone: return "dnf-monotone";
    case Algorithm::FptPolynomial: return "fpt-poly";
    case Algorithm::ObddLinearize: return "obdd-linearize";
    case Algorithm::Oracle: return "brute";
  }
  return "?";
}

namespace {

bool has_dnf_shape(const NnfCircuit& c) {
  try {
    dnf_term_list(c);
    return true;
  } catch (const NotDnfShape&) {
    return false;
  }
}

std::string refusal_reason(const NnfCircuit& phi, const FamilyTag& tag, int n,
                           const Aggregator& agg, bool decomposable,
                           const DispatchOptions& options) {
  int num_vars = phi.num_vars();
  std::string head = "no tractable algorithm applies (" +
                     std::to_string(num_vars) + " vars, family " +
                     family_name(tag.family) + ", n = " + std::to_string(n) +
                     ", " + aggregator_name(agg.kind) + "): ";
  if (agg.kind == Aggregator::Kind::Owa)
    return head +
           "OWA optimization is NP-hard even for nonnegative linear bases, so "
           "only exhaustive search up to 24 variables is offered";
  if (!decomposable)
    return head +
           "the constraint circuit is not decomposable, and deciding "
           "consistency of general NNF circuits is already NP-hard";
  if (tag.family == Family::G) {
    if (tag.positive_literals && tag.nonnegative_weights)
      return head +
             "general-formula bases are tractable only over flat DNF "
             "constraints, even with positive literals, nonnegative weights "
             "and two items";
    return head +
           "general-formula bases lacking positive literals or nonnegative "
           "weights are NP-hard for every compiled constraint language, "
           "already with two items";
  }
  if (n > options.n_cap)
    return head + "term bases are NP-hard with unbounded cardinality; the "
                  "fixed-parameter route is capped at n <= " +
           std::to_string(options.n_cap) + " (raise --n-cap)";
  return head + "no applicable route";
}

}  // namespace

DispatchResult dispatch(const NnfCircuit& phi, const WeightedBase& b,
                        const Aggregator& agg, const DispatchOptions& options) {
  if (options.force) {
    FptOptions fpt{options.n_cap, options.jobs};
    switch (*options.force) {
      case Algorithm::DnnfLinear:
        return {opt_dnnf_linear(phi, b, agg), Algorithm::DnnfLinear};
      case Algorithm::DnfMonotone:
        return {opt_dnf_monotone(phi, b, agg), Algorithm::DnfMonotone};
      case Algorithm::FptPolynomial:
        return {opt_fpt_polynomial(phi, b, agg, fpt), Algorithm::FptPolynomial};
      case Algorithm::ObddLinearize:
        throw Error("obdd-linearize needs OBDD inputs; use the obdd entry point");
      case Algorithm::Oracle:
        return {oracle_enumerate(phi, b, agg), Algorithm::Oracle};
    }
  }
  FamilyTag tag = classify(b);
  bool decomposable = check_decomposable(phi).decomposable;
  if (is_linear_aggregator(agg)) {
    if (tag.family == Family::L && decomposable)
      return {opt_dnnf_linear(phi, b, agg), Algorithm::DnnfLinear};
    if (tag.positive_literals && tag.nonnegative_weights && has_dnf_shape(phi))
      return {opt_dnf_monotone(phi, b, agg), Algorithm::DnfMonotone};
    if (tag.family != Family::G && b.size() <= options.n_cap && decomposable)
      return {opt_fpt_polynomial(phi, b, agg, {options.n_cap, options.jobs}),
              Algorithm::FptPolynomial};
  }
  if (std::max(phi.num_vars(), b.num_vars()) <= 24)
    return {oracle_enumerate(phi, b, agg), Algorithm::Oracle};
  throw IntractableCombination(
      refusal_reason(phi, tag, b.size(), agg, decomposable, options));
}

DispatchResult optimize_conditioned(const NnfCircuit& phi,
                                    const PartialInterpretation& gamma,
                                    const WeightedBase& b,
                                    const Aggregator& agg,
                                    const DispatchOptions& options) {
  NnfCircuit conditioned = condition(phi, gamma);
  WeightedBase conditioned_base = condition_base(b, gamma);
  DispatchResult r = dispatch(conditioned, conditioned_base, agg, options);
  if (!r.result.found()) return r;
  Interpretation omega = *r.result.witness;
  for (auto [v, value] : gamma.entries()) omega.set(v, value);
  Score score = evaluate_base(b, agg, omega);
  if (compare_scores(score, r.result.score) != 0)
    throw Error("conditioned score does not match the merged witness");
  r.result.witness = std::move(omega);
  r.result.score = std::move(score);
  return r;
}

Weight semiring_minsum(const NnfCircuit& phi, const WeightedBase& b) {
  if (classify(b).family != Family::L)
    throw FamilyMismatch("semiring_minsum requires a linear base");
  if (b.num_vars() > phi.num_vars())
    throw NotSmooth("every base variable must occur in the circuit");
  DecomposabilityReport rep = check_decomposable(phi);
  if (!rep.decomposable)
    throw NotDecomposable("semiring_minsum requires a decomposable circuit");
  if (!is_smooth_over_all_vars(phi))
    throw NotSmooth("circuit must be smooth with every variable occurring");

  // literal theta: summed weights of the base literals a leaf satisfies;
  // constant-true items contribute to every model on top
  std::map<int, Weight> theta;
  Weight constant = 0;
  for (const WeightedItem& item : b.items()) {
    const TermFormula& t = item.term();
    if (t.falsum) continue;
    if (t.lits.empty()) constant += item.weight;
    else theta[t.lits.front().to_dimacs()] += item.weight;
  }

  // min-sum sweep; nullopt plays +infinity
  std::vector<std::optional<Weight>> val(phi.size());
  for (int id = 0; id < phi.size(); ++id) {
    const NnfNode& n = phi.node(id);
    switch (n.kind) {
      case NodeKind::True:
        val[id] = Weight(0);
        break;
      case NodeKind::False:
        val[id] = std::nullopt;
        break;
      case NodeKind::Lit: {
        auto it = theta.find(n.lit.to_dimacs());
        val[id] = it == theta.end() ? Weight(0) : it->second;
        break;
      }
      case NodeKind::And: {
        Weight sum = 0;
        bool dead = false;
        for (int ch : n.children) {
          if (!val[ch]) { dead = true; break; }
          sum += *val[ch];
        }
        val[id] = dead ? std::optional<Weight>() : std::optional<Weight>(sum);
        break;
      }
      case NodeKind::Or: {
        std::optional<Weight> m;
        for (int ch : n.children)
          if (val[ch] && (!m || *val[ch] < *m)) m = val[ch];
        val[id] = m;
        break;
      }
    }
  }
  if (!val[phi.root()]) throw Inconsistent("circuit has no model");
  return *val[phi.root()] + constant;
}

}  // namespace kcopt

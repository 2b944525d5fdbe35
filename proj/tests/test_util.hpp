#pragma once

// Shared test helpers: an independent reference evaluator, model-set
// enumeration, deterministic random instance generators, and the
// optimizer-vs-oracle check. Kept free of any test framework so both the
// unit tests and the acceptance runner can use them.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kcopt/circuit.hpp"
#include "kcopt/compile.hpp"
#include "kcopt/objective.hpp"
#include "kcopt/obdd.hpp"
#include "kcopt/optimize.hpp"

namespace kcopt::testutil {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {  // inclusive bounds
  return lo + (int)(rng() % (uint32_t)(hi - lo + 1));
}

inline bool coin(Rng& rng) { return (rng() & 1) != 0; }

// --- reference evaluation --------------------------------------------------

// memoized recursion; written independently of kcopt::evaluate's sweep
inline bool eval_ref_node(const NnfCircuit& c, int id, const Interpretation& w,
                          std::vector<int8_t>& memo) {
  if (memo[id] != -1) return memo[id] != 0;
  const NnfNode& n = c.node(id);
  bool value = false;
  switch (n.kind) {
    case NodeKind::True: value = true; break;
    case NodeKind::False: value = false; break;
    case NodeKind::Lit: value = w.satisfies(n.lit); break;
    case NodeKind::And: {
      value = true;
      for (int ch : n.children)
        if (!eval_ref_node(c, ch, w, memo)) { value = false; break; }
      break;
    }
    case NodeKind::Or: {
      value = false;
      for (int ch : n.children)
        if (eval_ref_node(c, ch, w, memo)) { value = true; break; }
      break;
    }
  }
  memo[id] = value ? 1 : 0;
  return value;
}

inline bool eval_ref(const NnfCircuit& c, const Interpretation& w) {
  std::vector<int8_t> memo(c.size(), -1);
  return eval_ref_node(c, c.root(), w, memo);
}

// variable 1 is the most significant bit, so mask order is lexicographic
inline Interpretation from_lex_mask(int num_vars, uint64_t mask) {
  Interpretation w(num_vars);
  for (Var v = 1; v <= num_vars; ++v) w.set(v, (mask >> (num_vars - v)) & 1);
  return w;
}

inline uint64_t to_lex_mask(const Interpretation& w) {
  uint64_t mask = 0;
  for (Var v = 1; v <= w.num_vars(); ++v)
    mask = mask << 1 | (w.value(v) ? 1 : 0);
  return mask;
}

inline std::set<uint64_t> model_set(const NnfCircuit& c, int num_vars) {
  std::set<uint64_t> models;
  for (uint64_t mask = 0; mask < (uint64_t(1) << num_vars); ++mask)
    if (eval_ref(c, from_lex_mask(num_vars, mask))) models.insert(mask);
  return models;
}

// --- random instances --------------------------------------------------------

// decomposable by construction: And nodes partition their variable pool
inline int random_dnnf_node(Rng& rng, NnfBuilder& b, std::vector<Var> vars,
                            int depth, int& budget) {
  if (vars.empty()) return b.constant(pick(rng, 0, 9) > 0);
  if (depth <= 0 || budget <= 0 || vars.size() == 1) {
    if (pick(rng, 0, 11) == 0) return b.constant(coin(rng));
    return b.literal(Lit(vars[pick(rng, 0, (int)vars.size() - 1)], coin(rng)));
  }
  int kind = pick(rng, 0, 5);
  if (kind == 0) {
    return b.literal(Lit(vars[pick(rng, 0, (int)vars.size() - 1)], coin(rng)));
  }
  if (kind <= 2) {  // And over a partition of the pool
    std::shuffle(vars.begin(), vars.end(), rng);
    int parts = std::min<int>((int)vars.size(), pick(rng, 2, 3));
    std::vector<std::vector<Var>> split(parts);
    for (size_t i = 0; i < vars.size(); ++i) split[i % parts].push_back(vars[i]);
    std::vector<int> children;
    for (auto& part : split)
      children.push_back(random_dnnf_node(rng, b, std::move(part), depth - 1, budget));
    budget -= (int)children.size();
    return b.conj(std::move(children));
  }
  // Or over subsets of the pool
  int arity = pick(rng, 2, 3);
  std::vector<int> children;
  for (int i = 0; i < arity; ++i) {
    std::vector<Var> subset;
    for (Var v : vars)
      if (pick(rng, 0, 3) > 0) subset.push_back(v);
    if (subset.empty()) subset.push_back(vars[pick(rng, 0, (int)vars.size() - 1)]);
    children.push_back(random_dnnf_node(rng, b, std::move(subset), depth - 1, budget));
  }
  budget -= arity;
  return b.disj(std::move(children));
}

inline NnfCircuit random_dnnf(Rng& rng, int num_vars, int max_edges) {
  NnfBuilder b(num_vars);
  std::vector<Var> vars(num_vars);
  for (int i = 0; i < num_vars; ++i) vars[i] = i + 1;
  int budget = max_edges;
  return b.finish(random_dnnf_node(rng, b, std::move(vars), 5, budget));
}

// no decomposability requirement: children share the full variable pool
inline int random_nnf_node(Rng& rng, NnfBuilder& b, int num_vars, int depth) {
  if (depth <= 0 || num_vars == 0) {
    if (num_vars == 0 || pick(rng, 0, 9) == 0) return b.constant(coin(rng));
    return b.literal(Lit(pick(rng, 1, num_vars), coin(rng)));
  }
  int kind = pick(rng, 0, 3);
  if (kind == 0)
    return b.literal(Lit(pick(rng, 1, num_vars), coin(rng)));
  std::vector<int> children;
  int arity = pick(rng, 1, 3);
  for (int i = 0; i < arity; ++i)
    children.push_back(random_nnf_node(rng, b, num_vars, depth - 1));
  return kind == 1 ? b.conj(std::move(children)) : b.disj(std::move(children));
}

inline NnfCircuit random_nnf(Rng& rng, int num_vars, int depth = 4) {
  NnfBuilder b(num_vars);
  return b.finish(random_nnf_node(rng, b, num_vars, depth));
}

inline Term random_term(Rng& rng, int num_vars, int max_len) {
  std::vector<Var> vars(num_vars);
  for (int i = 0; i < num_vars; ++i) vars[i] = i + 1;
  std::shuffle(vars.begin(), vars.end(), rng);
  int len = pick(rng, 0, std::min(max_len, num_vars));
  Term t;
  for (int i = 0; i < len; ++i) t.emplace_back(vars[i], coin(rng));
  return normalize_term(t);
}

inline NnfCircuit random_dnf(Rng& rng, int num_vars, int max_terms) {
  int count = pick(rng, 0, max_terms);
  std::vector<Term> terms;
  for (int i = 0; i < count; ++i) {
    Term t = random_term(rng, num_vars, 4);
    if (t.empty() && coin(rng)) continue;  // keep some non-trivial instances
    terms.push_back(std::move(t));
  }
  return build_dnf(terms, num_vars);
}

// positive leaves only; not necessarily decomposable
inline int random_monotone_node(Rng& rng, NnfBuilder& b, int num_vars, int depth) {
  if (depth <= 0) return b.literal(Lit(pick(rng, 1, num_vars), true));
  int kind = pick(rng, 0, 2);
  if (kind == 0) return b.literal(Lit(pick(rng, 1, num_vars), true));
  std::vector<int> children;
  int arity = pick(rng, 2, 3);
  for (int i = 0; i < arity; ++i)
    children.push_back(random_monotone_node(rng, b, num_vars, depth - 1));
  return kind == 1 ? b.conj(std::move(children)) : b.disj(std::move(children));
}

inline NnfCircuit random_monotone_circuit(Rng& rng, int num_vars, int depth = 3) {
  NnfBuilder b(num_vars);
  return b.finish(random_monotone_node(rng, b, num_vars, depth));
}

// weights in {-3..3}, up to 2 literal items per variable
inline WeightedBase random_linear_base(Rng& rng, int num_vars) {
  WeightedBase base(num_vars);
  for (Var v = 1; v <= num_vars; ++v) {
    int items = pick(rng, 0, 2);
    for (int i = 0; i < items; ++i)
      base.add_term({Lit(v, coin(rng))}, pick(rng, -3, 3));
  }
  return base;
}

inline WeightedBase random_term_base(Rng& rng, int num_vars, int n,
                                     int max_len = 3, bool nonneg = false) {
  WeightedBase base(num_vars);
  for (int i = 0; i < n; ++i)
    base.add_term(random_term(rng, num_vars, max_len),
                  pick(rng, nonneg ? 0 : -3, 3));
  return base;
}

inline ObddId random_obdd(Rng& rng, ObddManager& m, int num_vars, int depth) {
  if (depth <= 0) {
    Term t;
    int len = pick(rng, 1, std::min(3, num_vars));
    std::vector<Var> vars(num_vars);
    for (int i = 0; i < num_vars; ++i) vars[i] = i + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    for (int i = 0; i < len; ++i) t.emplace_back(vars[i], coin(rng));
    return m.build_term(t);
  }
  BoolOp op = (BoolOp)pick(rng, 0, 3);
  ObddId f = random_obdd(rng, m, num_vars, depth - 1);
  ObddId g = random_obdd(rng, m, num_vars, depth - 1);
  return m.apply(op, f, g);
}

// --- oracle comparison ---------------------------------------------------------

// empty string when `got` matches the enumeration oracle on (c, b, agg)
inline std::string oracle_mismatch(const NnfCircuit& c, const WeightedBase& b,
                                   const Aggregator& agg, const OptResult& got) {
  OptResult want = oracle_enumerate(c, b, agg);
  if (want.found() != got.found())
    return want.found() ? "optimizer reported no solution, oracle found one"
                        : "optimizer reported a solution, oracle found none";
  if (!want.found()) return "";
  if (compare_scores(got.score, want.score) != 0)
    return "score " + format_score(got.score) + " differs from oracle " +
           format_score(want.score);
  if (got.witness->num_vars() < c.num_vars()) return "witness too short";
  if (!evaluate(c, *got.witness)) return "witness is not a model";
  if (compare_scores(evaluate_base(b, agg, *got.witness), got.score) != 0)
    return "witness does not re-evaluate to the reported score";
  return "";
}

// --- determinism digests ----------------------------------------------------------

inline uint64_t fnv1a(const std::string& data, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string render_result(const OptResult& r) {
  if (!r.found()) return "none";
  std::string out = format_score(r.score) + " @";
  for (Var v = 1; v <= r.witness->num_vars(); ++v)
    out += r.witness->value(v) ? '1' : '0';
  return out;
}

// --- shared fixtures -------------------------------------------------------------

// the CNF circuit over A1=1, A2=2, B=3, C=4:
// (~A1 | B) & (~A1 | ~A2) & (B | ~A2) & (~A2 | C)
inline NnfCircuit fig1a_circuit() {
  NnfBuilder b(4);
  int na1 = b.literal(Lit(1, false));
  int bb = b.literal(Lit(3, true));
  int na2 = b.literal(Lit(2, false));
  int cc = b.literal(Lit(4, true));
  int o1 = b.disj({na1, bb});
  int o2 = b.disj({na1, na2});
  int o3 = b.disj({bb, na2});
  int o4 = b.disj({na2, cc});
  return b.finish(b.conj({o1, o2, o3, o4}));
}

// equivalent DNF: (A1 & ~A2 & B) | (~A2 & ~A1) | (B & ~A1 & A2 & C)
inline NnfCircuit fig1b_circuit() {
  return build_dnf({{Lit(1, true), Lit(2, false), Lit(3, true)},
                    {Lit(2, false), Lit(1, false)},
                    {Lit(3, true), Lit(1, false), Lit(2, true), Lit(4, true)}},
                   4);
}

// the four-variable base of the leximax worked example:
// {(A2 & C1, 2), (B1 & ~C1, 1)} over A1=1, A2=2, B1=3, C1=4
inline WeightedBase leximax_example_base() {
  WeightedBase base(4);
  base.add_term({Lit(2, true), Lit(4, true)}, 2);
  base.add_term({Lit(3, true), Lit(4, false)}, 1);
  return base;
}

}  // namespace kcopt::testutil

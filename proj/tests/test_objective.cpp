#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace kcopt;
using namespace kcopt::testutil;

TEST_CASE("weight parsing and formatting") {
  CHECK(parse_weight("1.25") == Weight(5, 4));
  CHECK(parse_weight("7/2") == Weight(7, 2));
  CHECK(parse_weight("-3") == Weight(-3));
  CHECK(parse_weight("+0.5") == Weight(1, 2));
  CHECK(parse_weight("-2/4") == Weight(-1, 2));
  CHECK(format_weight(Weight(4)) == "4");
  CHECK(format_weight(Weight(-7, 2)) == "-7/2");
  CHECK_THROWS_AS(parse_weight(""), FormatError);
  CHECK_THROWS_AS(parse_weight("x"), FormatError);
  CHECK_THROWS_AS(parse_weight("1/0"), FormatError);
  CHECK_THROWS_AS(parse_weight("1.2.3"), FormatError);
}

TEST_CASE("the leximax worked example") {
  WeightedBase base = leximax_example_base();
  Interpretation w(4);   // A1=1, A2=0, B1=1, C1=0
  w.set(1, true);
  w.set(3, true);
  Interpretation w2(4);  // A1=0, A2=1, B1=1, C1=1
  w2.set(2, true);
  w2.set(3, true);
  w2.set(4, true);

  Score s = evaluate_base(base, Aggregator::leximax(), w);
  Score s2 = evaluate_base(base, Aggregator::leximax(), w2);
  CHECK(s.values == std::vector<Weight>{1, 0});
  CHECK(s2.values == std::vector<Weight>{2, 0});
  CHECK(compare_scores(s, s2) < 0);
}

TEST_CASE("classification") {
  WeightedBase lin(1);
  lin.add_term({Lit(1, true)}, 1);
  CHECK(classify(lin) == FamilyTag{Family::L, true, true});

  WeightedBase q = leximax_example_base();
  CHECK(classify(q) == FamilyTag{Family::Q, false, true});

  WeightedBase g(4);
  g.add_circuit(std::make_shared<NnfCircuit>(fig1b_circuit()), -1);
  FamilyTag tag = classify(g);
  CHECK(tag.family == Family::G);
  CHECK_FALSE(tag.positive_literals);  // fig 1b has negative leaves
  CHECK_FALSE(tag.nonnegative_weights);

  WeightedBase empty(0);
  CHECK(classify(empty) == FamilyTag{Family::L, true, true});

  // constants count as (positive) literals
  WeightedBase consts(1);
  consts.add_term({}, 2);
  consts.add_falsum(1);
  CHECK(classify(consts) == FamilyTag{Family::L, true, true});
}

TEST_CASE("classification monotonicity") {
  Rng rng(999);
  for (int i = 0; i < 50; ++i) {
    int nv = pick(rng, 2, 6);
    WeightedBase base = random_term_base(rng, nv, pick(rng, 0, 4), 2, true);
    base.add_term({Lit(1, false)}, 0);
    CHECK_FALSE(classify(base).positive_literals);
    base.add_term({Lit(2, true)}, -1);
    CHECK_FALSE(classify(base).nonnegative_weights);
  }
}

TEST_CASE("evaluate_base basics") {
  WeightedBase empty(0);
  CHECK(evaluate_base(empty, Aggregator::sum(), Interpretation(0)).sum == 0);
  Score lex = evaluate_base(empty, Aggregator::leximax(), Interpretation(0));
  CHECK(lex.values.empty());
  CHECK(compare_scores(lex, lex) == 0);

  WeightedBase b(2);
  b.add_term({Lit(1, true)}, 3);
  CHECK_THROWS_AS(evaluate_base(b, Aggregator::owa({}), Interpretation(2)),
                  OwaArityMismatch);
}

TEST_CASE("sum evaluation matches an independent re-evaluation") {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    int nv = pick(rng, 1, 8);
    WeightedBase base = random_term_base(rng, nv, pick(rng, 0, 5), 3);
    Interpretation w = from_lex_mask(nv, rng() % (uint64_t(1) << nv));
    Weight expected = 0;
    for (const WeightedItem& item : base.items()) {
      bool sat = !item.term().falsum;
      for (const Lit& l : item.term().lits)
        if (w.value(l.var) != l.positive) { sat = false; break; }
      if (sat) expected += item.weight;
    }
    CHECK(evaluate_base(base, Aggregator::sum(), w).sum == expected);
  }
}

TEST_CASE("removing an unsatisfied item never changes the sum score") {
  Rng rng(606);
  for (int i = 0; i < 80; ++i) {
    int nv = pick(rng, 1, 7);
    WeightedBase base = random_term_base(rng, nv, pick(rng, 1, 5), 3);
    Interpretation w = from_lex_mask(nv, rng() % (uint64_t(1) << nv));
    Score full = evaluate_base(base, Aggregator::sum(), w);
    WeightedBase pruned(nv);
    for (const WeightedItem& item : base.items())
      if (item_satisfied(item, w)) pruned.add_item(item);
    CHECK(evaluate_base(pruned, Aggregator::sum(), w).sum == full.sum);
  }
}

TEST_CASE("uniform OWA equals sum divided by n") {
  Rng rng(515);
  for (int i = 0; i < 60; ++i) {
    int nv = pick(rng, 1, 6);
    int n = pick(rng, 1, 5);
    WeightedBase base = random_term_base(rng, nv, n, 3);
    Aggregator owa = Aggregator::owa(std::vector<Weight>(n, Weight(1, n)));
    for (uint64_t mask = 0; mask < (uint64_t(1) << nv); ++mask) {
      Interpretation w = from_lex_mask(nv, mask);
      Weight sum = evaluate_base(base, Aggregator::sum(), w).sum;
      CHECK(evaluate_base(base, owa, w).sum == sum / n);
    }
  }
}

TEST_CASE("score comparison") {
  Score a = Score::of_vector({Weight(0), Weight(1)});
  Score b = Score::of_vector({Weight(2), Weight(0)});
  CHECK(a.values == std::vector<Weight>{1, 0});  // sorted descending
  CHECK(compare_scores(a, b) < 0);

  Score c = Score::of_vector({Weight(3), Weight(0)});
  Score d = Score::of_vector({Weight(2), Weight(2)});
  CHECK(compare_scores(c, d) > 0);
  CHECK(compare_scores(d, d) == 0);

  CHECK_THROWS_AS(compare_scores(Score::of_sum(1), a), IncomparableScores);
  CHECK_THROWS_AS(compare_scores(a, Score::of_vector({Weight(1)})),
                  IncomparableScores);
  CHECK(format_score(Score::of_sum(Weight(-7, 2))) == "-7/2");
  CHECK(format_score(a) == "(1, 0)");
}

// small version of the exhaustive acceptance check
TEST_CASE("leximax union compatibility") {
  std::vector<std::vector<Weight>> multisets{{}};
  for (int len = 1; len <= 3; ++len) {
    std::vector<std::vector<Weight>> next;
    for (const auto& m : multisets)
      if ((int)m.size() == len - 1)
        for (int v = -1; v <= 1; ++v) {
          if (!m.empty() && m.back() > v) continue;  // nondecreasing rep
          auto copy = m;
          copy.push_back(v);
          next.push_back(copy);
        }
    multisets.insert(multisets.end(), next.begin(), next.end());
  }
  auto leq = [](const std::vector<Weight>& u, const std::vector<Weight>& v) {
    return compare_scores(Score::of_vector(u), Score::of_vector(v)) <= 0;
  };
  for (const auto& u : multisets)
    for (const auto& u2 : multisets) {
      if (u.size() != u2.size()) continue;
      if (!leq(u, u2)) continue;
      for (const auto& w : multisets) {
        auto uw = u;
        uw.insert(uw.end(), w.begin(), w.end());
        auto u2w = u2;
        u2w.insert(u2w.end(), w.begin(), w.end());
        REQUIRE(leq(uw, u2w));
      }
    }
}

TEST_CASE("base file round trips") {
  std::istringstream tiny("wb 1 3 sum\n1 t 2 0\n");
  ParsedBase parsed = parse_base(tiny, ".");
  CHECK(parsed.base.size() == 1);
  CHECK(parsed.base.num_vars() == 3);
  CHECK(parsed.base.item(0).term().lits == Term{Lit(2, true)});
  CHECK(parsed.agg.kind == Aggregator::Kind::Sum);

  // the leximax example base round-trips byte for byte
  std::ostringstream out;
  serialize_base(leximax_example_base(), Aggregator::leximax(), out, ".", "x");
  std::istringstream in(out.str());
  ParsedBase back = parse_base(in, ".");
  std::ostringstream out2;
  serialize_base(back.base, back.agg, out2, ".", "x");
  CHECK(out.str() == out2.str());
  CHECK(out.str() == "wb 2 4 leximax\n2 t 2 4 0\n1 t 3 -4 0\n");
}

TEST_CASE("base files with circuit items") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "kcopt_wb_test";
  fs::create_directories(dir);

  WeightedBase base(4);
  base.add_circuit(std::make_shared<NnfCircuit>(fig1b_circuit()), Weight(7, 2));
  base.add_term({Lit(1, true), Lit(2, false), Lit(3, true)}, -1);
  std::ostringstream out;
  serialize_base(base, Aggregator::sum(), out, dir, "mix");

  std::istringstream in(out.str());
  ParsedBase back = parse_base(in, dir);
  REQUIRE(back.base.size() == 2);
  CHECK(back.base.item(0).circuit() == fig1b_circuit());
  CHECK(back.base.item(0).weight == Weight(7, 2));
  CHECK(back.base.item(1).term().lits ==
        Term{Lit(1, true), Lit(2, false), Lit(3, true)});
  fs::remove_all(dir);
}

TEST_CASE("base parse errors") {
  auto rejects = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_base(in, "."), FormatError);
  };
  rejects("wb 2 4 owa\n1 t 1 0\n1 t 2 0\n");           // missing owa line
  rejects("wb 2 4 owa\nowa 1/2\n1 t 1 0\n1 t 2 0\n");  // arity mismatch
  rejects("wb 2 4 owa\nowa 1/2 1/3\n1 t 1 0\n1 t 2 0\n");  // sum != 1
  rejects("wb 1 4 max\n1 t 1 0\n");                    // unknown aggregator
  rejects("wb 1 4 sum\n1 t 1\n");                      // unterminated term
  rejects("wb 1 4 sum\n1 t 5 0\n");                    // var out of range
  rejects("wb 1 4 sum\n1 t 1 -1 0\n");                 // complementary literals
  rejects("wb 2 4 sum\n1 t 1 0\n");                    // fewer items
  rejects("wb 1 4 sum\n1 t 1 0\n1 t 2 0\n");           // more items
  rejects("wb 1 4 sum\n1 f missing_file.nnf\n");       // unreadable formula
}

TEST_CASE("owa aggregator validation") {
  CHECK_THROWS_AS(Aggregator::owa({Weight(1, 2), Weight(1, 3)}), FormatError);
  Aggregator ok = Aggregator::owa({Weight(1, 2), Weight(1, 2)});
  CHECK(ok.owa_weights.size() == 2);
  CHECK(Aggregator::owa({}).owa_weights.empty());  // empty base degenerate
}

TEST_CASE("conditioning a base") {
  WeightedBase base(3);
  base.add_term({Lit(1, true), Lit(2, true)}, 2);
  base.add_term({Lit(1, true)}, 1);
  base.add_term({Lit(3, false)}, 5);
  base.add_circuit(std::make_shared<NnfCircuit>([] {
                     NnfBuilder b(2);
                     return b.finish(b.disj(
                         {b.literal(Lit(1, true)), b.literal(Lit(2, true))}));
                   }()),
                   7);
  PartialInterpretation gamma;
  gamma.assign(1, false);
  WeightedBase conditioned = condition_base(base, gamma);
  REQUIRE(conditioned.size() == 4);
  CHECK(conditioned.item(0).term().falsum);                 // (x1 & x2) | x1=0
  CHECK(conditioned.item(1).term().falsum);                 // x1 | x1=0
  CHECK(conditioned.item(2).term().lits == Term{Lit(3, false)});
  // the circuit item is now equivalent to x2 and no longer mentions x1
  const NnfCircuit& c = conditioned.item(3).circuit();
  CHECK_FALSE(vars_of(c, c.root()).test(1));
  CHECK(model_set(c, 2) == std::set<uint64_t>{1, 3});

  // conditioned evaluation equals original evaluation on extensions of gamma
  Rng rng(808);
  for (int i = 0; i < 20; ++i) {
    Interpretation w = from_lex_mask(3, rng() % 8);
    w.set(1, false);
    CHECK(evaluate_base(base, Aggregator::sum(), w).sum ==
          evaluate_base(conditioned, Aggregator::sum(), w).sum);
  }
}

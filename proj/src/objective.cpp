#include "kcopt/objective.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace kcopt {

void WeightedBase::add_term(Term t, Weight w) {
  Term n = normalize_term(std::move(t));
  add_item({TermFormula{std::move(n), false}, std::move(w)});
}

void WeightedBase::add_falsum(Weight w) {
  add_item({TermFormula{{}, true}, std::move(w)});
}

void WeightedBase::add_circuit(std::shared_ptr<const NnfCircuit> c, Weight w) {
  add_item({std::move(c), std::move(w)});
}

void WeightedBase::add_item(WeightedItem item) {
  if (item.is_term()) {
    const TermFormula& t = item.term();
    if (t.falsum && !t.lits.empty())
      throw Error("constant-false item must have no literals");
    for (const Lit& l : t.lits)
      if (l.var < 1 || l.var > num_vars_)
        throw Error("item literal out of range");
  } else {
    if (!std::get<1>(item.formula)) throw Error("null circuit item");
    if (item.circuit().num_vars() > num_vars_)
      throw Error("item circuit mentions variables beyond the base");
  }
  items_.push_back(std::move(item));
}

const char* family_name(Family f) {
  switch (f) {
    case Family::L: return "L";
    case Family::Q: return "Q";
    case Family::P: return "P";
    case Family::G: return "G";
  }
  return "?";
}

namespace {

bool circuit_all_positive(const NnfCircuit& c) {
  for (const NnfNode& n : c.nodes())
    if (n.kind == NodeKind::Lit && !n.lit.positive) return false;
  return true;
}

}  // namespace

FamilyTag classify(const WeightedBase& b) {
  FamilyTag tag;
  for (const WeightedItem& item : b.items()) {
    if (item.weight < 0) tag.nonnegative_weights = false;
    if (item.is_term()) {
      const TermFormula& t = item.term();
      Family f = t.lits.size() <= 1 ? Family::L
                 : t.lits.size() == 2 ? Family::Q
                                      : Family::P;
      tag.family = std::max(tag.family, f);
      for (const Lit& l : t.lits)
        if (!l.positive) tag.positive_literals = false;
    } else {
      tag.family = Family::G;
      if (!circuit_all_positive(item.circuit())) tag.positive_literals = false;
    }
  }
  return tag;
}

Aggregator Aggregator::owa(std::vector<Weight> weights) {
  Weight total = 0;
  for (const Weight& p : weights) total += p;
  if (!weights.empty() && total != 1)
    throw FormatError("owa weights must sum to 1");
  return {Kind::Owa, std::move(weights)};
}

const char* aggregator_name(Aggregator::Kind k) {
  switch (k) {
    case Aggregator::Kind::Sum: return "sum";
    case Aggregator::Kind::Leximax: return "leximax";
    case Aggregator::Kind::Owa: return "owa";
  }
  return "?";
}

Score Score::of_sum(Weight w) {
  Score s;
  s.kind = Kind::Sum;
  s.sum = std::move(w);
  return s;
}

Score Score::of_vector(std::vector<Weight> values) {
  Score s;
  s.kind = Kind::Vector;
  std::sort(values.begin(), values.end(), std::greater<>());
  s.values = std::move(values);
  return s;
}

std::strong_ordering compare_scores(const Score& a, const Score& b) {
  if (a.kind != b.kind)
    throw IncomparableScores("cannot compare a sum with a vector score");
  if (a.kind == Score::Kind::Sum) {
    if (a.sum < b.sum) return std::strong_ordering::less;
    if (b.sum < a.sum) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  if (a.values.size() != b.values.size())
    throw IncomparableScores("cannot compare score vectors of different length");
  for (size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] < b.values[i]) return std::strong_ordering::less;
    if (b.values[i] < a.values[i]) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string format_score(const Score& s) {
  if (s.kind == Score::Kind::Sum) return format_weight(s.sum);
  std::string out = "(";
  for (size_t i = 0; i < s.values.size(); ++i) {
    if (i) out += ", ";
    out += format_weight(s.values[i]);
  }
  out += ")";
  return out;
}

bool item_satisfied(const WeightedItem& item, const Interpretation& omega) {
  if (item.is_term()) {
    const TermFormula& t = item.term();
    if (t.falsum) return false;
    for (const Lit& l : t.lits)
      if (!omega.satisfies(l)) return false;
    return true;
  }
  return evaluate(item.circuit(), omega);
}

Score evaluate_base(const WeightedBase& b, const Aggregator& agg,
                    const Interpretation& omega) {
  if (omega.num_vars() < b.num_vars())
    throw Error("interpretation covers fewer variables than the base");
  std::vector<Weight> values;
  values.reserve(b.size());
  for (const WeightedItem& item : b.items())
    values.push_back(item_satisfied(item, omega) ? item.weight : Weight(0));

  switch (agg.kind) {
    case Aggregator::Kind::Sum: {
      Weight total = 0;
      for (const Weight& v : values) total += v;
      return Score::of_sum(std::move(total));
    }
    case Aggregator::Kind::Leximax:
      return Score::of_vector(std::move(values));
    case Aggregator::Kind::Owa: {
      if ((int)agg.owa_weights.size() != b.size())
        throw OwaArityMismatch("owa weight vector length differs from the base");
      std::sort(values.begin(), values.end(), std::greater<>());
      Weight total = 0;
      for (size_t i = 0; i < values.size(); ++i)
        total += agg.owa_weights[i] * values[i];
      return Score::of_sum(std::move(total));
    }
  }
  throw Error("unknown aggregator");
}

WeightedBase condition_base(const WeightedBase& b,
                            const PartialInterpretation& gamma) {
  WeightedBase out(b.num_vars());
  for (const WeightedItem& item : b.items()) {
    if (item.is_term()) {
      const TermFormula& t = item.term();
      if (t.falsum) {
        out.add_falsum(item.weight);
        continue;
      }
      Term kept;
      bool dead = false;
      for (const Lit& l : t.lits) {
        std::optional<bool> v = gamma.value(l.var);
        if (!v) kept.push_back(l);
        else if (*v != l.positive) { dead = true; break; }
      }
      if (dead) out.add_falsum(item.weight);
      else out.add_term(std::move(kept), item.weight);
    } else {
      const NnfCircuit& c = item.circuit();
      PartialInterpretation restricted;
      for (auto [v, val] : gamma.entries())
        if (v <= c.num_vars()) restricted.assign(v, val);
      out.add_circuit(std::make_shared<NnfCircuit>(condition(c, restricted)),
                      item.weight);
    }
  }
  return out;
}

// --- file format ----------------------------------------------------------

namespace {

bool wb_content_line(std::istream& in, std::string& out) {
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == 'c' &&
        (i + 1 == line.size() || line[i + 1] == ' ' || line[i + 1] == '\t' ||
         line[i + 1] == '\r'))
      continue;
    out = line;
    return true;
  }
  return false;
}

}  // namespace

ParsedBase parse_base(std::istream& in, const std::filesystem::path& dir) {
  std::string line;
  if (!wb_content_line(in, line)) throw FormatError("missing wb header");
  std::istringstream header(line);
  std::string tag, agg_name;
  int n = -1, num_vars = -1;
  if (!(header >> tag >> n >> num_vars >> agg_name) || tag != "wb")
    throw FormatError("header must be 'wb <n> <numvars> <agg>'");
  std::string extra;
  if (header >> extra) throw FormatError("trailing tokens on wb header");
  if (n < 0 || num_vars < 0) throw FormatError("negative count in wb header");

  Aggregator agg;
  if (agg_name == "sum") {
    agg = Aggregator::sum();
  } else if (agg_name == "leximax") {
    agg = Aggregator::leximax();
  } else if (agg_name == "owa") {
    if (!wb_content_line(in, line)) throw FormatError("missing owa weight line");
    std::istringstream iss(line);
    std::string word;
    if (!(iss >> word) || word != "owa")
      throw FormatError("owa base requires an 'owa p1 ... pn' line");
    std::vector<Weight> ps;
    while (iss >> word) ps.push_back(parse_weight(word));
    if ((int)ps.size() != n)
      throw FormatError("owa weight count differs from the base cardinality");
    agg = Aggregator::owa(std::move(ps));  // checks the sum
  } else {
    throw FormatError("unknown aggregator '" + agg_name + "'");
  }

  WeightedBase base(num_vars);
  for (int i = 0; i < n; ++i) {
    if (!wb_content_line(in, line)) throw FormatError("fewer items than declared");
    std::istringstream iss(line);
    std::string weight_text, kind;
    if (!(iss >> weight_text >> kind)) throw FormatError("malformed item line");
    Weight w = parse_weight(weight_text);
    if (kind == "t") {
      Term t;
      int code;
      bool terminated = false;
      while (iss >> code) {
        if (code == 0) { terminated = true; break; }
        Lit l = Lit::from_dimacs(code);
        if (l.var > num_vars) throw FormatError("item literal out of range");
        t.push_back(l);
      }
      if (!terminated) throw FormatError("term item line must end with 0");
      if (iss >> extra) throw FormatError("trailing tokens on item line");
      try {
        base.add_term(std::move(t), std::move(w));
      } catch (const InconsistentTerm&) {
        throw FormatError("term item contains complementary literals");
      }
    } else if (kind == "f") {
      std::string rel;
      if (!(iss >> rel)) throw FormatError("formula item without a path");
      if (iss >> extra) throw FormatError("trailing tokens on item line");
      std::ifstream f(dir / rel);
      if (!f) throw FormatError("cannot open formula file '" + rel + "'");
      NnfCircuit c = parse_nnf(f);
      if (c.num_vars() > num_vars)
        throw FormatError("formula file mentions variables beyond the base");
      base.add_circuit(std::make_shared<NnfCircuit>(std::move(c)), std::move(w));
    } else {
      throw FormatError("unknown item kind '" + kind + "'");
    }
  }
  if (wb_content_line(in, line)) throw FormatError("more items than declared");
  return {std::move(base), std::move(agg)};
}

void serialize_base(const WeightedBase& b, const Aggregator& agg,
                    std::ostream& out, const std::filesystem::path& dir,
                    const std::string& stem) {
  out << "wb " << b.size() << ' ' << b.num_vars() << ' '
      << aggregator_name(agg.kind) << '\n';
  if (agg.kind == Aggregator::Kind::Owa) {
    if ((int)agg.owa_weights.size() != b.size())
      throw FormatError("owa weight vector length differs from the base");
    out << "owa";
    for (const Weight& p : agg.owa_weights) out << ' ' << format_weight(p);
    out << '\n';
  }
  for (int i = 0; i < b.size(); ++i) {
    const WeightedItem& item = b.item(i);
    out << format_weight(item.weight) << ' ';
    if (item.is_term()) {
      if (item.term().falsum)
        throw FormatError("constant-false items have no file representation");
      out << 't';
      for (const Lit& l : item.term().lits) out << ' ' << l.to_dimacs();
      out << " 0\n";
    } else {
      std::string rel = stem + "_item" + std::to_string(i) + ".nnf";
      std::ofstream f(dir / rel);
      if (!f) throw FormatError("cannot write formula file '" + rel + "'");
      serialize_nnf(item.circuit(), f);
      out << "f " << rel << '\n';
    }
  }
}

}  // namespace kcopt

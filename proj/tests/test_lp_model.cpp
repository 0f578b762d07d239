#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "evq/lp_model.hpp"

using namespace evq;

namespace {

// Minimal reader for the LP subset the exporter writes.
struct LpRow {
  std::string name;
  std::vector<std::pair<double, std::string>> terms;
  std::string sense;
  double rhs = 0.0;
};

struct LpFile {
  std::vector<LpRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::set<std::string> generals, binaries;
  std::string objective;
};

LpFile parse_lp(const std::string& text) {
  LpFile f;
  std::istringstream in(text);
  std::string line, section, pending;
  static const std::regex name_re("[A-Za-z_][A-Za-z0-9_]*");
  auto flush_row = [&](const std::string& s) {
    std::istringstream is(s);
    LpRow r;
    is >> r.name;
    if (r.name.empty() || r.name.back() != ':') throw std::runtime_error("row without name: " + s);
    r.name.pop_back();
    std::string tok;
    double sign = 1.0, coef = 1.0;
    bool have_coef = false;
    while (is >> tok) {
      if (tok == "<=" || tok == ">=" || tok == "=") {
        r.sense = tok;
        if (!(is >> r.rhs)) throw std::runtime_error("missing rhs: " + s);
        std::string rest;
        if (is >> rest) throw std::runtime_error("trailing tokens: " + s);
        break;
      }
      if (tok == "+" || tok == "-") {
        sign = tok == "-" ? -1.0 : 1.0;
        continue;
      }
      const bool negative_number = tok[0] == '-' && tok.size() > 1 && std::isdigit(static_cast<unsigned char>(tok[1]));
      if (tok[0] == '-' && !negative_number) {
        sign = -1.0;
        tok = tok.substr(1);
      }
      if (negative_number || std::isdigit(static_cast<unsigned char>(tok[0]))) {
        coef = std::stod(tok);
        have_coef = true;
        continue;
      }
      if (!std::regex_match(tok, name_re)) throw std::runtime_error("bad variable '" + tok + "'");
      r.terms.emplace_back(sign * (have_coef ? coef : 1.0), tok);
      sign = 1.0, coef = 1.0, have_coef = false;
    }
    if (r.sense.empty()) throw std::runtime_error("row without sense: " + s);
    f.rows.push_back(std::move(r));
  };
  while (std::getline(in, line)) {
    if (line.size() > 100) throw std::runtime_error("line longer than 100 columns");
    if (line.rfind("\\", 0) == 0) continue;
    if (line == "Minimize" || line == "Subject To" || line == "Bounds" || line == "Generals" || line == "Binaries" ||
        line == "End") {
      if (!pending.empty()) flush_row(pending), pending.clear();
      section = line;
      continue;
    }
    if (section == "Minimize") {
      f.objective = line;
    } else if (section == "Subject To") {
      if (line.rfind("  ", 0) == 0) {
        pending += line;
      } else {
        if (!pending.empty()) flush_row(pending);
        pending = line;
      }
    } else if (section == "Bounds") {
      std::istringstream is(line);
      double lo, hi;
      std::string le1, var, le2;
      is >> lo >> le1 >> var >> le2 >> hi;
      if (le1 != "<=" || le2 != "<=") throw std::runtime_error("bad bound: " + line);
      f.bounds[var] = {lo, hi};
    } else if (section == "Generals" || section == "Binaries") {
      std::istringstream is(line);
      std::string v;
      while (is >> v) (section == "Generals" ? f.generals : f.binaries).insert(v);
    } else if (section == "End") {
      throw std::runtime_error("content after End");
    }
  }
  if (section != "End") throw std::runtime_error("missing End");
  return f;
}

bool satisfied(const LpRow& r, const std::map<std::string, double>& x, double tol = 1e-7) {
  double lhs = 0.0;
  for (const auto& [c, v] : r.terms) lhs += c * x.at(v);
  if (r.sense == "<=") return lhs <= r.rhs + tol;
  if (r.sense == ">=") return lhs >= r.rhs - tol;
  return std::abs(lhs - r.rhs) <= tol;
}

Graph path3() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

// Full UDRLT assignment for integer coordinates.
std::map<std::string, double> udrlt_point(const std::vector<std::array<int, 2>>& pos, int bits, int side) {
  std::map<std::string, double> x;
  const char* c[2] = {"x", "y"};
  const char* b[2] = {"bx", "by"};
  const char* s[2] = {"sx", "sy"};
  const char* w[2] = {"wx", "wy"};
  auto bit = [&](int i, int a, int k) { return (pos[static_cast<std::size_t>(i)][a] >> k) & 1; };
  const int n = static_cast<int>(pos.size());
  x["L"] = side;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 2; ++a) {
      x[std::string(c[a]) + "_" + std::to_string(i)] = pos[static_cast<std::size_t>(i)][a];
      for (int k = 0; k < bits; ++k) {
        x[std::string(b[a]) + "_" + std::to_string(i) + "_" + std::to_string(k)] = bit(i, a, k);
        for (int kp = k + 1; kp < bits; ++kp)
          x[std::string(s[a]) + "_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(kp)] =
              bit(i, a, k) * bit(i, a, kp);
      }
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < bits; ++k)
          for (int kp = 0; kp < bits; ++kp)
            x[std::string(w[a]) + "_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k) + "_" +
              std::to_string(kp)] = bit(i, a, k) * bit(j, a, kp);
    }
  return x;
}

}  // namespace

TEST(LpExport, UdrltParsesAndDeclaresEveryVariable) {
  const EmbedSpec spec{path3()};
  const auto m = export_model(spec, LpVariant::udrlt);
  const auto f = parse_lp(m.text);
  EXPECT_EQ(f.objective, " obj: L");
  EXPECT_EQ(static_cast<long long>(f.rows.size()), m.stats.constraints);
  EXPECT_EQ(static_cast<long long>(f.binaries.size()), m.stats.binaries);
  EXPECT_EQ(static_cast<long long>(f.generals.size()), m.stats.generals);
  for (const auto& r : f.rows)
    for (const auto& [c, v] : r.terms) EXPECT_TRUE(f.binaries.count(v) || f.generals.count(v)) << v;
  for (const auto& g : f.generals) EXPECT_TRUE(f.bounds.count(g)) << g;
}

TEST(LpExport, UdrltCounts) {
  const EmbedSpec spec{path3()};
  const auto s = export_model(spec, LpVariant::udrlt).stats;
  EXPECT_EQ(s.bits, 7);  // ceil(log2(101))
  EXPECT_EQ(s.expansion_binaries, 2 * 3 * 7);
  EXPECT_EQ(s.self_product_binaries, 2 * 3 * 21);
  EXPECT_EQ(s.product_binaries, 2 * 3 * 49);
  EXPECT_EQ(s.linearization_constraints, 3 * (s.self_product_binaries + s.product_binaries));
  EXPECT_EQ(s.constraints, 2 * 3 + 2 * 3 + s.linearization_constraints + 2 * 2 + 1);
}

TEST(LpExport, UdrltAcceptsAFeasibleLayoutAndRejectsABadOne) {
  const EmbedSpec spec{path3()};
  const auto m = export_model(spec, LpVariant::udrlt);
  const auto f = parse_lp(m.text);
  const auto good = udrlt_point({{{0, 0}, {10, 0}, {20, 3}}}, m.stats.bits, 21);
  for (const auto& r : f.rows) EXPECT_TRUE(satisfied(r, good)) << r.name;
  const auto bad = udrlt_point({{{0, 0}, {10, 0}, {14, 0}}}, m.stats.bits, 21);
  int failed = 0;
  for (const auto& r : f.rows) failed += satisfied(r, bad) ? 0 : 1;
  EXPECT_GT(failed, 0);
  // An inconsistent product value breaks a linearization row.
  auto broken = good;
  broken["wx_0_1_1_1"] = 1.0;
  bool caught = false;
  for (const auto& r : f.rows) caught |= !satisfied(r, broken);
  EXPECT_TRUE(caught);
}

TEST(LpExport, UdrphiStructureAndPhiCount) {
  const EmbedSpec spec{path3()};
  for (int phi : {4, 8, 12}) {
    const auto m = export_model(spec, LpVariant::udrphi, phi);
    const auto f = parse_lp(m.text);
    EXPECT_EQ(m.stats.disjuncts, 2 * phi);
    EXPECT_EQ(m.stats.box_inequalities, 8 * phi);
    EXPECT_EQ(m.stats.selector_binaries, 2 * phi + 4);
    EXPECT_EQ(static_cast<long long>(f.rows.size()), m.stats.constraints);
    EXPECT_TRUE(f.generals.empty());
    EXPECT_NE(m.text.find("not equivalent"), std::string::npos);
  }
  EXPECT_THROW(export_model(spec, LpVariant::udrphi, 3), DomainError);
}

TEST(LpExport, UdrphiAcceptsAnAxisAlignedLayout) {
  const EmbedSpec spec{path3()};
  const auto m = export_model(spec, LpVariant::udrphi, 8);
  const auto f = parse_lp(m.text);
  std::map<std::string, double> x{{"L", 20}, {"x_0", 0}, {"y_0", 0}, {"x_1", 10}, {"y_1", 0}, {"x_2", 20}, {"y_2", 0}};
  for (const auto& b : f.binaries) x[b] = 0.0;
  x["z_0_1_0"] = 1.0;  // angle 0 box
  x["z_1_2_0"] = 1.0;
  x["q_0_2_0"] = 1.0;  // x_2 - x_0 >= r + eps
  for (const auto& r : f.rows) EXPECT_TRUE(satisfied(r, x)) << r.name;
  x["x_2"] = 14;
  bool caught = false;
  for (const auto& r : f.rows) caught |= !satisfied(r, x);
  EXPECT_TRUE(caught);
}

TEST(LpExport, NumbersUseCompactFormatting) {
  EXPECT_EQ(detail::lp_num(225.0), "225");
  EXPECT_EQ(detail::lp_num(-3.0), "-3");
  EXPECT_EQ(detail::lp_num(225.000001), "225.000001");
  EXPECT_EQ(parse_lp_variant("udrphi"), LpVariant::udrphi);
  EXPECT_THROW(parse_lp_variant("bogus"), ConfigError);
}

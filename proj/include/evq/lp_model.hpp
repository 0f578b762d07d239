#pragma once

// Mixed-integer models of the unit-disk layout problem in CPLEX LP format.
//
// udrlt:  integer coordinates via binary expansion; every product of two
//         expansion bits is linearised with three inequalities.
// udrphi: continuous coordinates; each edge picks one of phi_count angular
//         boxes inside the ring, each non-edge separates along one axis.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "evq/embedding.hpp"
#include "evq/error.hpp"

namespace evq {

enum class LpVariant { udrlt, udrphi };

inline std::string_view to_string(LpVariant v) { return v == LpVariant::udrlt ? "udrlt" : "udrphi"; }

inline LpVariant parse_lp_variant(std::string_view s) {
  if (s == "udrlt") return LpVariant::udrlt;
  if (s == "udrphi") return LpVariant::udrphi;
  throw ConfigError("unknown model variant '" + std::string(s) + "'");
}

struct LpStats {
  int bits = 0;
  long long expansion_binaries = 0;
  long long product_binaries = 0;
  long long self_product_binaries = 0;
  long long selector_binaries = 0;
  long long binaries = 0;
  long long generals = 0;
  long long continuous = 0;
  long long constraints = 0;
  long long linearization_constraints = 0;
  long long disjuncts = 0;
  long long box_inequalities = 0;
};

struct LpModel {
  std::string text;
  LpStats stats;
};

namespace detail {

inline std::string lp_num(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Accumulates a linear expression and writes it wrapped at ~100 columns.
class LpWriter {
 public:
  void comment(const std::string& c) { os_ << "\\ " << c << '\n'; }
  void line(const std::string& s) { os_ << s << '\n'; }

  struct Term {
    double coef;
    std::string var;
  };

  void row(const std::string& name, const std::vector<Term>& terms, std::string_view sense, double rhs) {
    std::string cur = " " + name + ":";
    bool first = true;
    for (const auto& t : terms) {
      std::string piece;
      if (t.coef < 0) piece = first ? "-" : "- ";
      else if (!first) piece = "+ ";
      const double a = std::abs(t.coef);
      if (a != 1.0) piece += lp_num(a) + " ";
      piece += t.var;
      if (cur.size() + piece.size() + 1 > 100) {
        os_ << cur << '\n';
        cur = "  ";
      } else {
        cur += ' ';
      }
      cur += piece;
      first = false;
    }
    const std::string tail = std::string(sense) + " " + lp_num(rhs);
    if (cur.size() + tail.size() + 1 > 100) {
      os_ << cur << '\n';
      cur = "  " + tail;
    } else {
      cur += " " + tail;
    }
    os_ << cur << '\n';
    ++rows_;
  }

  void names(const std::vector<std::string>& vars) {
    std::string cur;
    for (const auto& v : vars) {
      if (cur.size() + v.size() + 1 > 100) {
        os_ << cur << '\n';
        cur.clear();
      }
      cur += ' ' + v;
    }
    if (!cur.empty()) os_ << cur << '\n';
  }

  long long rows() const { return rows_; }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  long long rows_ = 0;
};

inline std::string v2(const char* p, int a, int b) { return std::string(p) + "_" + std::to_string(a) + "_" + std::to_string(b); }
inline std::string v3(const char* p, int a, int b, int c) { return v2(p, a, b) + "_" + std::to_string(c); }
inline std::string v4(const char* p, int a, int b, int c, int d) { return v3(p, a, b, c) + "_" + std::to_string(d); }

inline void header(LpWriter& w, const EmbedSpec& spec, LpVariant variant) {
  w.comment("unit-disk layout model, variant " + std::string(to_string(variant)));
  w.comment("nodes " + std::to_string(spec.graph.size()) + ", edges " + std::to_string(spec.graph.edge_count()) +
            ", r " + lp_num(spec.r) + ", rho " + lp_num(spec.rho) + ", l_bar " + lp_num(spec.l_bar));
}

inline LpModel export_udrlt(const EmbedSpec& spec) {
  const int n = spec.graph.size();
  const int bits = static_cast<int>(std::ceil(std::log2(std::floor(spec.l_bar) + 1.0)));
  LpStats st;
  st.bits = bits;
  LpWriter w;
  header(w, spec, LpVariant::udrlt);
  w.comment("coordinates are integers in [0, " + lp_num(std::floor(spec.l_bar)) + "] with " + std::to_string(bits) +
            "-bit expansions");
  w.comment("sx/sy hold products of two bits of the same coordinate");
  w.line("Minimize");
  w.line(" obj: L");
  w.line("Subject To");

  const char* bname[2] = {"bx", "by"};
  const char* cname[2] = {"x", "y"};
  const char* sname[2] = {"sx", "sy"};
  const char* wname[2] = {"wx", "wy"};

  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) {
      std::vector<LpWriter::Term> t{{1.0, std::string(cname[c]) + "_" + std::to_string(i)}};
      for (int k = 0; k < bits; ++k) t.push_back({-std::ldexp(1.0, k), v2(bname[c], i, k)});
      w.row(std::string("expand_") + cname[c] + "_" + std::to_string(i), t, "=", 0.0);
    }
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c)
      w.row(std::string("side_") + cname[c] + "_" + std::to_string(i),
            {{1.0, std::string(cname[c]) + "_" + std::to_string(i)}, {-1.0, "L"}}, "<=", -1.0);

  auto linearize = [&](const std::string& prod, const std::string& a, const std::string& b, const std::string& tag) {
    w.row(tag + "_a", {{1.0, prod}, {-1.0, a}}, "<=", 0.0);
    w.row(tag + "_b", {{1.0, prod}, {-1.0, b}}, "<=", 0.0);
    w.row(tag + "_c", {{1.0, prod}, {-1.0, a}, {-1.0, b}}, ">=", -1.0);
    st.linearization_constraints += 3;
  };
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < bits; ++k)
        for (int kp = k + 1; kp < bits; ++kp) {
          linearize(v3(sname[c], i, k, kp), v2(bname[c], i, k), v2(bname[c], i, kp), "lin_" + v3(sname[c], i, k, kp));
          ++st.self_product_binaries;
        }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int c = 0; c < 2; ++c)
        for (int k = 0; k < bits; ++k)
          for (int kp = 0; kp < bits; ++kp) {
            linearize(v4(wname[c], i, j, k, kp), v2(bname[c], i, k), v2(bname[c], j, kp), "lin_" + v4(wname[c], i, j, k, kp));
            ++st.product_binaries;
          }

  // (c_j - c_i)^2 = c_i^2 + c_j^2 - 2 c_i c_j expanded over bits.
  auto dist2 = [&](int i, int j) {
    std::vector<LpWriter::Term> t;
    for (int c = 0; c < 2; ++c) {
      for (int node : {i, j}) {
        for (int k = 0; k < bits; ++k) t.push_back({std::ldexp(1.0, 2 * k), v2(bname[c], node, k)});
        for (int k = 0; k < bits; ++k)
          for (int kp = k + 1; kp < bits; ++kp) t.push_back({std::ldexp(1.0, k + kp + 1), v3(sname[c], node, k, kp)});
      }
      for (int k = 0; k < bits; ++k)
        for (int kp = 0; kp < bits; ++kp) t.push_back({-std::ldexp(1.0, k + kp + 1), v4(wname[c], i, j, k, kp)});
    }
    return t;
  };
  const double r2 = spec.r * spec.r;
  const double rho2 = spec.rho * spec.rho;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto t = dist2(i, j);
      if (spec.graph.has_edge(i, j)) {
        w.row("ring_lo_" + std::to_string(i) + "_" + std::to_string(j), t, ">=", rho2);
        w.row("ring_hi_" + std::to_string(i) + "_" + std::to_string(j), t, "<=", r2);
      } else {
        w.row("far_" + std::to_string(i) + "_" + std::to_string(j), t, ">=", r2 + kNonEdgeEpsilon);
      }
    }
  st.constraints = w.rows();

  w.line("Bounds");
  const std::string lb = lp_num(std::floor(spec.l_bar));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) w.line(" 0 <= " + std::string(cname[c]) + "_" + std::to_string(i) + " <= " + lb);
  w.line(" 0 <= L <= " + lb);

  std::vector<std::string> gens{"L"};
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) gens.push_back(std::string(cname[c]) + "_" + std::to_string(i));
  std::vector<std::string> bins;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < bits; ++k) bins.push_back(v2(bname[c], i, k));
  st.expansion_binaries = static_cast<long long>(bins.size());
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < bits; ++k)
        for (int kp = k + 1; kp < bits; ++kp) bins.push_back(v3(sname[c], i, k, kp));
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < bits; ++k)
          for (int kp = 0; kp < bits; ++kp) bins.push_back(v4(wname[c], i, j, k, kp));
  w.line("Generals");
  w.names(gens);
  w.line("Binaries");
  w.names(bins);
  w.line("End");
  st.generals = static_cast<long long>(gens.size());
  st.binaries = static_cast<long long>(bins.size());
  return {w.str(), st};
}

inline LpModel export_udrphi(const EmbedSpec& spec, int phi_count) {
  if (phi_count < 4) throw DomainError("udrphi needs phi_count >= 4");
  const int n = spec.graph.size();
  const double big_m = 2.0 * (spec.l_bar + spec.r);
  const double sep = spec.r + kNonEdgeEpsilon;
  LpStats st;
  LpWriter w;
  header(w, spec, LpVariant::udrphi);
  w.comment("edges: one of " + std::to_string(phi_count) + " angular boxes inside the ring, big-M " + lp_num(big_m));
  w.comment("warning: non-edges use |dx| > r or |dy| > r; this axis-aligned separation is not equivalent");
  w.comment("to Euclidean distance > r and rejects diagonal placements; check solutions with the verifier");
  w.line("Minimize");
  w.line(" obj: L");
  w.line("Subject To");
  auto var = [](const char* p, int i) { return std::string(p) + "_" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    w.row("side_x_" + std::to_string(i), {{1.0, var("x", i)}, {-1.0, "L"}}, "<=", 0.0);
    w.row("side_y_" + std::to_string(i), {{1.0, var("y", i)}, {-1.0, "L"}}, "<=", 0.0);
  }
  std::vector<std::string> bins;
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::string ij = std::to_string(i) + "_" + std::to_string(j);
      if (spec.graph.has_edge(i, j)) {
        std::vector<LpWriter::Term> pick;
        for (int m = 0; m < phi_count; ++m) {
          const double phi = two_pi * m / phi_count;
          const double c = std::cos(phi), s = std::sin(phi);
          const double xlo = std::min(spec.rho * c, spec.r * c), xhi = std::max(spec.rho * c, spec.r * c);
          const double ylo = std::min(spec.rho * s, spec.r * s), yhi = std::max(spec.rho * s, spec.r * s);
          const std::string z = "z_" + ij + "_" + std::to_string(m);
          const std::string tag = "phi_" + ij + "_" + std::to_string(m);
          w.row(tag + "_xlo", {{1.0, var("x", j)}, {-1.0, var("x", i)}, {-big_m, z}}, ">=", xlo - big_m);
          w.row(tag + "_xhi", {{1.0, var("x", j)}, {-1.0, var("x", i)}, {big_m, z}}, "<=", xhi + big_m);
          w.row(tag + "_ylo", {{1.0, var("y", j)}, {-1.0, var("y", i)}, {-big_m, z}}, ">=", ylo - big_m);
          w.row(tag + "_yhi", {{1.0, var("y", j)}, {-1.0, var("y", i)}, {big_m, z}}, "<=", yhi + big_m);
          st.box_inequalities += 4;
          ++st.disjuncts;
          pick.push_back({1.0, z});
          bins.push_back(z);
        }
        w.row("pick_" + ij, pick, "=", 1.0);
      } else {
        const char* axis[2] = {"x", "y"};
        std::vector<LpWriter::Term> any;
        for (int a = 0; a < 2; ++a)
          for (int sgn = 0; sgn < 2; ++sgn) {
            const std::string q = "q_" + ij + "_" + std::to_string(2 * a + sgn);
            const double s = sgn == 0 ? 1.0 : -1.0;
            w.row("sep_" + ij + "_" + std::to_string(2 * a + sgn),
                  {{s, var(axis[a], j)}, {-s, var(axis[a], i)}, {-big_m, q}}, ">=", sep - big_m);
            any.push_back({1.0, q});
            bins.push_back(q);
          }
        w.row("apart_" + ij, any, ">=", 1.0);
      }
    }
  st.constraints = w.rows();
  w.line("Bounds");
  const std::string lb = lp_num(spec.l_bar);
  for (int i = 0; i < n; ++i) {
    w.line(" 0 <= " + var("x", i) + " <= " + lb);
    w.line(" 0 <= " + var("y", i) + " <= " + lb);
  }
  w.line(" 0 <= L <= " + lb);
  w.line("Binaries");
  w.names(bins);
  w.line("End");
  st.selector_binaries = static_cast<long long>(bins.size());
  st.binaries = st.selector_binaries;
  st.continuous = 2LL * n + 1;
  return {w.str(), st};
}

}  // namespace detail

inline LpModel export_model(const EmbedSpec& spec, LpVariant variant, int phi_count = 8) {
  spec.validate();
  return variant == LpVariant::udrlt ? detail::export_udrlt(spec) : detail::export_udrphi(spec, phi_count);
}

}  // namespace evq

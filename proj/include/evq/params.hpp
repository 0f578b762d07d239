#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evq/error.hpp"

namespace evq {

/// Angles of a depth-p ansatz.
struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  int depth() const { return static_cast<int>(gammas.size()); }

  void validate() const {
    if (gammas.size() != betas.size()) throw DomainError("gammas and betas must have equal length");
    if (gammas.empty()) throw DomainError("QAOA depth must be at least 1");
  }

  /// Flat layout (gamma_1..gamma_p, beta_1..beta_p).
  std::vector<double> flat() const {
    std::vector<double> x(gammas);
    x.insert(x.end(), betas.begin(), betas.end());
    return x;
  }

  static QaoaParams from_flat(std::span<const double> x) {
    if (x.size() % 2 != 0) throw DomainError("flat parameter vector must have even length");
    const std::size_t p = x.size() / 2;
    return {std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)),
            std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(p), x.end())};
  }
};

/// Linear-interpolation warm start for depth p+1 from optimized depth-p angles,
/// applied to gammas and betas separately:
///   new_i = (i-1)/p * old_{i-1} + (p-i+1)/p * old_i,  i = 1..p+1,
/// with old_0 = old_{p+1} = 0.
inline std::vector<double> interp_extend(std::span<const double> old) {
  const std::size_t p = old.size();
  if (p == 0) throw DomainError("INTERP needs depth >= 1");
  auto at = [&](std::size_t i) { return (i == 0 || i > p) ? 0.0 : old[i - 1]; };
  std::vector<double> out(p + 1);
  const double dp = static_cast<double>(p);
  for (std::size_t i = 1; i <= p + 1; ++i)
    out[i - 1] = static_cast<double>(i - 1) / dp * at(i - 1) + static_cast<double>(p - i + 1) / dp * at(i);
  return out;
}

inline QaoaParams interp_init(const QaoaParams& params) {
  params.validate();
  return {interp_extend(params.gammas), interp_extend(params.betas)};
}

}  // namespace evq

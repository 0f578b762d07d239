#pragma once

// Dense statevector primitives for diagonal-phase / transverse-mixer ansaetze.
//
// Qubit q is bit q of the basis index. The mixer is exp(-i beta sum_q X_q),
// i.e. every qubit receives [[cos b, -i sin b], [-i sin b, cos b]].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evq/error.hpp"
#include "evq/rng.hpp"

namespace evq {

using Complex = std::complex<double>;

struct SimulatorLimits {
  int max_qubits = 24;
};

inline void check_qubits(int n, const SimulatorLimits& limits) {
  if (n < 1) throw DomainError("qubit count must be at least 1");
  if (n > limits.max_qubits)
    throw CapError(std::to_string(n) + " qubits exceed the simulator cap of " + std::to_string(limits.max_qubits));
}

class StateVector {
 public:
  StateVector() = default;
  StateVector(int n_qubits, std::vector<Complex> amps) : n_(n_qubits), amps_(std::move(amps)) {
    if (amps_.size() != dimension()) throw DomainError("amplitude count must be 2^n");
  }

  int qubits() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_; }

  std::span<Complex> amplitudes() noexcept { return amps_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  Complex& operator[](std::size_t z) { return amps_[z]; }
  const Complex& operator[](std::size_t z) const { return amps_[z]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  double probability(std::size_t z) const { return std::norm(amps_[z]); }

 private:
  int n_ = 0;
  std::vector<Complex> amps_;
};

/// Diagonal operator: values[z] = C(z).
struct DiagonalCost {
  int qubits = 0;
  std::vector<double> values;

  std::size_t dimension() const noexcept { return values.size(); }
  double min() const { return *std::min_element(values.begin(), values.end()); }
  double max() const { return *std::max_element(values.begin(), values.end()); }
};

inline StateVector init_uniform(int n, const SimulatorLimits& limits = {}) {
  check_qubits(n, limits);
  const std::size_t dim = std::size_t{1} << n;
  return StateVector(n, std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
}

inline StateVector basis_state(int n, std::uint64_t z, const SimulatorLimits& limits = {}) {
  check_qubits(n, limits);
  std::vector<Complex> amps(std::size_t{1} << n, Complex{});
  if (z >= amps.size()) throw DomainError("basis index out of range");
  amps[z] = 1.0;
  return StateVector(n, std::move(amps));
}

inline void check_dimensions(const StateVector& s, const DiagonalCost& c) {
  if (c.dimension() != s.dimension())
    throw DomainError("cost dimension " + std::to_string(c.dimension()) + " does not match state dimension " +
                      std::to_string(s.dimension()));
}

/// amp[z] <- amp[z] * exp(-i gamma C(z))
inline void apply_phase(StateVector& s, const DiagonalCost& cost, double gamma) {
  check_dimensions(s, cost);
  auto amps = s.amplitudes();
  for (std::size_t z = 0; z < amps.size(); ++z) {
    const double th = -gamma * cost.values[z];
    amps[z] *= Complex(std::cos(th), std::sin(th));
  }
}

inline void apply_mixer(StateVector& s, double beta) {
  const double c = std::cos(beta);
  const double sn = std::sin(beta);
  auto amps = s.amplitudes();
  const std::size_t dim = amps.size();
  for (int q = 0; q < s.qubits(); ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t z = base; z < base + stride; ++z) {
        const Complex a0 = amps[z];
        const Complex a1 = amps[z + stride];
        // a0' = c a0 - i s a1,  a1' = -i s a0 + c a1
        amps[z] = Complex(c * a0.real() + sn * a1.imag(), c * a0.imag() - sn * a1.real());
        amps[z + stride] = Complex(c * a1.real() + sn * a0.imag(), c * a1.imag() - sn * a0.real());
      }
    }
  }
}

inline double expectation(const StateVector& s, const DiagonalCost& cost) {
  check_dimensions(s, cost);
  double e = 0.0;
  auto amps = s.amplitudes();
  for (std::size_t z = 0; z < amps.size(); ++z) e += std::norm(amps[z]) * cost.values[z];
  return e;
}

/// Expectation of an arbitrary diagonal given as a plain value table.
inline double expectation(const StateVector& s, std::span<const double> diagonal) {
  if (diagonal.size() != s.dimension()) throw DomainError("diagonal dimension does not match state");
  double e = 0.0;
  auto amps = s.amplitudes();
  for (std::size_t z = 0; z < amps.size(); ++z) e += std::norm(amps[z]) * diagonal[z];
  return e;
}

/// i.i.d. measurement outcomes in the computational basis.
inline std::vector<std::uint64_t> sample(const StateVector& s, std::size_t shots, std::uint64_t seed) {
  if (shots < 1) throw DomainError("shots must be at least 1");
  auto amps = s.amplitudes();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t z = 0; z < amps.size(); ++z) {
    acc += std::norm(amps[z]);
    cdf[z] = acc;
  }
  Rng rng = make_rng(seed, {0x5a3b1e});
  std::vector<std::uint64_t> out;
  out.reserve(shots);
  for (std::size_t i = 0; i < shots; ++i) {
    const double u = uniform01(rng) * acc;
    // First index with cdf > u always has positive probability.
    std::size_t z = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (z >= cdf.size()) {
      z = cdf.size() - 1;
      while (z > 0 && std::norm(amps[z]) == 0.0) --z;
    }
    out.push_back(z);
  }
  return out;
}

inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension()) throw DomainError("state dimensions differ");
  Complex s{};
  for (std::size_t z = 0; z < a.dimension(); ++z) s += std::conj(a[z]) * b[z];
  return s;
}

/// Most significant qubit first.
inline std::string bitstring(std::uint64_t z, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q)
    if (z >> q & 1U) s[static_cast<std::size_t>(n - 1 - q)] = '1';
  return s;
}

}  // namespace evq

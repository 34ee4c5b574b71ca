#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

namespace lcr {

// Random source with explicit transforms on top of a fixed-width generator,
// so a seed reproduces the same stream independent of the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Box-Muller; uses two uniforms per draw, no cached spare.
  double normal(double mean, double sd) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Index in {0, ..., probs.size()-1} by inverse cdf.
  int categorical(const Eigen::VectorXd& probs) {
    const double u = uniform();
    double acc = 0.0;
    for (int k = 0; k + 1 < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) return k;
    }
    return static_cast<int>(probs.size()) - 1;
  }

  // Flat Dirichlet over k categories: normalized unit-rate exponentials.
  Eigen::VectorXd dirichlet_flat(int k) {
    Eigen::VectorXd g(k);
    for (int i = 0; i < k; ++i) g[i] = -std::log(1.0 - uniform());
    return g / g.sum();
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lcr

#pragma once

#include <cmath>
#include <cstdint>

#include "ida/types.hpp"

namespace ida {

// Counter-based pseudo-random stream (splitmix64 core). Every draw in the
// project flows through this so runs are reproducible across platforms;
// std:: distributions are implementation-defined and never used.
struct Rng {
  u64 state;

  static u64 mix(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    u64 z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  explicit Rng(u64 seed) : state(mix(seed ^ 0x6a09e667f3bcc908ULL)) {}
  Rng(u64 seed, u64 stream) : state(mix(mix(seed) ^ mix(stream * 0x2545f4914f6cdd1dULL + 1))) {}
  Rng(u64 seed, u64 s1, u64 s2) : Rng(mix(seed) ^ mix(s1 * 0x9e3779b97f4a7c15ULL + 3), s2) {}

  u64 next_u64() {
    state += 0x9e3779b97f4a7c15ULL;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  u64 uniform_int(u64 n) { return next_u64() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; returns one draw, caches the pair partner.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  template <typename S>
  void fill_normal(Mat<S>& m, double scale = 1.0) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<S>(normal() * scale);
  }

  template <typename S>
  void fill_uniform(Mat<S>& m, double lo, double hi) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<S>(uniform(lo, hi));
  }

 private:
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace ida

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "ppc/hpreal.hpp"

namespace oracle {

inline mpq_class to_mpq(const ppc::ExactReal& x) {
  mpq_class q(x.numerator());
  if (x.exponent() >= 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(x.exponent()));
    q *= scale;
  } else {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(-x.exponent()));
    q /= scale;
  }
  q.canonicalize();
  return q;
}

inline mpq_class frac(const mpq_class& q) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  mpq_class r = q - fl;
  r.canonicalize();
  return r;
}

/// Circle distance between a double and an exact rational in [0,1).
inline double circle_gap(double x, const mpq_class& exact) {
  mpq_class diff = mpq_class(x) - exact;
  if (diff < 0) diff = -diff;
  mpq_class other = 1 - diff;
  return std::min(diff.get_d(), other.get_d());
}

inline std::uint64_t naive_pairs(const std::vector<double>& v, double threshold) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (i != j && ppc::circle_distance(v[i], v[j]) <= threshold) ++count;
    }
  }
  return count;
}

}  // namespace oracle

#pragma once

// Test-only reference computations. These follow the defining formulas
// directly and share no code path with the library's closed forms.

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "pshift/family.hpp"
#include "pshift/pseudo_shift.hpp"

namespace oracle {

using pshift::Index;
using pshift::InducingMap;
using pshift::WeightRule;
using pshift::PseudoShift;
using pshift::SupportedVector;

/// T x by scanning every output slot j in [lo, hi]: coefficient w_{f(j)} x_{f(j)}.
inline SupportedVector dense_apply(const PseudoShift& T, const SupportedVector& x, Index lo,
                                   Index hi) {
  SupportedVector out;
  for (Index j = lo; j <= hi; ++j) {
    Index fj = T.map().forward(j);
    double xf = x[fj];
    if (xf != 0.0) out.set(j, T.weights().at(fj) * xf);
  }
  return out;
}

/// Window wide enough for translation maps with |step| <= max_step after `powers` steps.
inline SupportedVector repeated_apply(const PseudoShift& T, SupportedVector x, int powers,
                                      Index reach) {
  for (int k = 0; k < powers; ++k) {
    if (x.empty()) break;
    x = dense_apply(T, x, x.min_index() - reach, x.max_index() + reach);
  }
  return x;
}

/// prod_{v=1..n} w_{f^v(m)} in plain doubles.
inline double direct_forward_product(const PseudoShift& T, Index m, int n) {
  double prod = 1.0;
  Index idx = m;
  for (int v = 1; v <= n; ++v) {
    idx = T.map().forward(idx);
    prod *= T.weights().at(idx);
  }
  return prod;
}

/// Random parameters satisfying 2 p_s < p_t and 1 < |lambda_s| < |lambda_t|.
inline pshift::FamilyParams random_family(std::mt19937_64& rng, std::size_t N) {
  std::uniform_int_distribution<Index> first_step(1, 3);
  std::uniform_int_distribution<Index> extra(1, 3);
  std::uniform_real_distribution<double> first_lambda(1.2, 2.5);
  std::uniform_real_distribution<double> lambda_gap(0.3, 1.5);
  std::uniform_int_distribution<Index> cutoff(-4, 4);
  std::bernoulli_distribution negative(0.25);
  pshift::FamilyParams params;
  Index step = first_step(rng);
  double lambda = first_lambda(rng);
  for (std::size_t i = 0; i < N; ++i) {
    params.steps.push_back(step);
    params.lambdas.push_back(negative(rng) ? -lambda : lambda);
    params.cutoffs.push_back(cutoff(rng));
    step = 2 * step + extra(rng);
    lambda += lambda_gap(rng);
  }
  params.p = 2.0;
  return params;
}

inline PseudoShift translated(Index step, WeightRule w) {
  return {"T", InducingMap::translation(step), std::move(w)};
}

// Small random invertible pseudo-shifts, mixing map and weight kinds.
inline PseudoShift random_shift(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_int_distribution<Index> step(-3, 3);
  std::uniform_real_distribution<double> mag(0.3, 3.0);
  std::bernoulli_distribution neg(0.3);
  auto weight = [&] { return neg(rng) ? -mag(rng) : mag(rng); };
  Index r = 0;
  while (r == 0) r = step(rng);
  switch (kind(rng)) {
    case 0:
      return translated(r, WeightRule::two_level(weight(), step(rng)));
    case 1: {
      std::map<Index, double> entries;
      for (Index n = -5; n <= 5; ++n) entries[n] = weight();
      return translated(r, WeightRule::table(entries, weight()));
    }
    case 2:
      return translated(r, WeightRule::periodic({weight(), weight(), weight()}));
    case 3:
      return {"G", InducingMap::named("parity_shift"),
              WeightRule::two_level(weight(), step(rng))};
    default:
      return {"B", InducingMap::named("block_twist"), WeightRule::periodic({weight(), weight()})};
  }
}

inline SupportedVector random_vector(std::mt19937_64& rng, Index radius, int terms) {
  std::uniform_int_distribution<Index> idx(-radius, radius);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  SupportedVector v;
  for (int t = 0; t < terms; ++t) v.add(idx(rng), coef(rng));
  return v;
}

inline double relative_error(double a, double b) {
  if (a == b) return 0.0;
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

}  // namespace oracle

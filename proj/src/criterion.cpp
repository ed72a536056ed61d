#include "pshift/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "pshift/errors.hpp"

namespace pshift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Ratios beyond e^700 are only ever compared against small thresholds.
constexpr double kClampLog = 700.0;
constexpr double kVerifyRelTol = 1e-9;

double clamped(const ExtReal& r) {
  if (r.is_zero()) return 0.0;
  if (r.log_abs() > kClampLog) return r.sign() * kInf;
  return r.to_double();
}

double exp_clamped(double log_value) {
  if (log_value > kClampLog) return kInf;
  return std::exp(log_value);
}

void require_same_count(std::span<const PseudoShift> shifts, const TargetFamily& targets) {
  if (shifts.empty()) throw ParameterError("need at least one operator");
  if (shifts.size() != targets.size()) {
    throw ParameterError("operator count " + std::to_string(shifts.size()) +
                         " != target count " + std::to_string(targets.size()));
  }
}

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must be in [1, inf)");
}

// W^(i)_{m,n} memoised for a single n.
class ProductCache {
 public:
  ProductCache(std::span<const PseudoShift> shifts, std::int64_t n) : shifts_(shifts), n_(n) {}

  const ExtReal& operator()(std::size_t op, Index m) {
    auto key = std::make_pair(op, m);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, shifts_[op].forward_product(m, n_)).first;
    return it->second;
  }

 private:
  std::span<const PseudoShift> shifts_;
  std::int64_t n_;
  std::map<std::pair<std::size_t, Index>, ExtReal> cache_;
};

ExtReal ratio(ProductCache& W, const PairIndexSets& pair, const IndexHit& hit) {
  return W(pair.i, hit.m_i) / W(pair.ell, hit.m_ell);
}

double a_ratio(const TargetFamily& targets, const PairIndexSets& pair, const IndexHit& hit) {
  return targets.coefficient(pair.i, hit.m_i) / targets.coefficient(pair.ell, hit.m_ell);
}

struct BoundTerms {
  double log_inv_w_max = -kInf;
  std::vector<double> gap_max;
  std::vector<double> cross_log_max;
};

BoundTerms bound_terms(std::span<const PseudoShift> shifts, const TargetFamily& targets,
                       ProductCache& W, const std::vector<PairIndexSets>& sets) {
  const std::size_t N = shifts.size();
  BoundTerms t;
  t.gap_max.assign(N, 0.0);
  t.cross_log_max.assign(N, -kInf);
  for (std::size_t ell = 0; ell < N; ++ell) {
    for (Index m = -targets.M(); m <= targets.M(); ++m) {
      t.log_inv_w_max = std::max(t.log_inv_w_max, -W(ell, m).log_abs());
    }
  }
  for (const auto& pair : sets) {
    for (const auto& hit : pair.cross) {
      t.cross_log_max[pair.i] = std::max(t.cross_log_max[pair.i], ratio(W, pair, hit).log_abs());
    }
    if (pair.ell < pair.i) {
      for (const auto& hit : pair.overlap) {
        double gap = std::fabs(clamped(ratio(W, pair, hit)) - a_ratio(targets, pair, hit));
        t.gap_max[pair.i] = std::max(t.gap_max[pair.i], gap);
      }
    }
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// TargetFamily

TargetFamily::TargetFamily(Index M, std::vector<std::vector<double>> coefficients)
    : M_(M), coefficients_(std::move(coefficients)) {
  if (M < 0) throw ParameterError("target radius M must be >= 0");
  for (const auto& row : coefficients_) {
    if (row.size() != width()) {
      throw ParameterError("each target needs 2M+1 = " + std::to_string(width()) +
                           " coefficients, got " + std::to_string(row.size()));
    }
    for (double a : row) {
      if (!std::isfinite(a)) throw ParameterError("target coefficients must be finite");
    }
  }
}

TargetFamily TargetFamily::from_vectors(std::span<const SupportedVector> targets,
                                        std::optional<Index> M) {
  Index radius = 0;
  for (const auto& t : targets) radius = std::max(radius, t.radius());
  if (M && *M < radius) {
    throw ParameterError("target support exceeds [-M, M] with M = " + std::to_string(*M));
  }
  Index r = M.value_or(radius);
  std::vector<std::vector<double>> rows;
  for (const auto& t : targets) {
    std::vector<double> row;
    for (Index m = -r; m <= r; ++m) row.push_back(t[m]);
    rows.push_back(std::move(row));
  }
  return TargetFamily(r, std::move(rows));
}

TargetFamily TargetFamily::repeated(const SupportedVector& target, std::size_t count) {
  std::vector<SupportedVector> copies(count, target);
  return from_vectors(copies);
}

double TargetFamily::coefficient(std::size_t op, Index m) const {
  return coefficients_.at(op).at(static_cast<std::size_t>(m + M_));
}

SupportedVector TargetFamily::target(std::size_t op) const {
  SupportedVector v;
  for (Index m = -M_; m <= M_; ++m) v.set(m, coefficient(op, m));
  return v;
}

double TargetFamily::gamma(double p) const {
  double g = 0.0;
  for (std::size_t i = 0; i < size(); ++i) g = std::max(g, target(i).norm(p));
  return g;
}

bool TargetFamily::has_zero() const {
  return std::any_of(coefficients_.begin(), coefficients_.end(), [](const auto& row) {
    return std::find(row.begin(), row.end(), 0.0) != row.end();
  });
}

std::pair<TargetFamily, std::vector<TargetFamily::Perturbation>>
TargetFamily::with_zeros_perturbed() const {
  double max_abs = 0.0;
  for (const auto& row : coefficients_) {
    for (double a : row) max_abs = std::max(max_abs, std::fabs(a));
  }
  // The all-zero family has no scale to borrow from.
  const double delta = max_abs > 0.0 ? 1e-8 * max_abs : 1e-8;
  TargetFamily out = *this;
  std::vector<Perturbation> changes;
  for (std::size_t i = 0; i < out.coefficients_.size(); ++i) {
    for (Index m = -M_; m <= M_; ++m) {
      double& a = out.coefficients_[i][static_cast<std::size_t>(m + M_)];
      if (a == 0.0) {
        a = delta;
        changes.push_back({i, m, delta});
      }
    }
  }
  return {std::move(out), std::move(changes)};
}

// ---------------------------------------------------------------------------
// Index sets and ratios

std::vector<PairIndexSets> index_sets(std::span<const PseudoShift> shifts, Index M,
                                      std::int64_t n) {
  std::vector<PairIndexSets> out;
  for (std::size_t ell = 0; ell < shifts.size(); ++ell) {
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      if (i == ell) continue;
      PairIndexSets pair{ell, i, {}, {}};
      for (Index m = -M; m <= M; ++m) {
        Index j = shifts[ell].map().evaluate(m, n);
        Index m_i = shifts[i].map().evaluate(j, -n);
        IndexHit hit{j, m, m_i};
        (std::abs(m_i) <= M ? pair.overlap : pair.cross).push_back(hit);
      }
      out.push_back(std::move(pair));
    }
  }
  return out;
}

ExtReal weight_ratio(std::span<const PseudoShift> shifts, const PairIndexSets& pair,
                     const IndexHit& hit, std::int64_t n) {
  return shifts[pair.i].forward_product(hit.m_i, n) /
         shifts[pair.ell].forward_product(hit.m_ell, n);
}

ExtReal worst_cross_ratio(std::span<const PseudoShift> shifts, Index M, std::int64_t n,
                          std::size_t i, std::size_t ell) {
  ExtReal worst = ExtReal::zero();
  for (const auto& pair : index_sets(shifts, M, n)) {
    if (pair.i != i || pair.ell != ell) continue;
    for (const auto& hit : pair.cross) {
      ExtReal r = weight_ratio(shifts, pair, hit, n);
      if (worst.is_zero() || r.log_abs() > worst.log_abs()) worst = r;
    }
  }
  return worst.abs();
}

// ---------------------------------------------------------------------------
// Correction vector and its bounds

SupportedVector build_correction(std::span<const PseudoShift> shifts, const TargetFamily& targets,
                                 std::int64_t n) {
  require_same_count(shifts, targets);
  if (n < 1) throw ParameterError("correction time n must be >= 1");
  SupportedVector z;
  std::set<Index> claimed;
  for (std::size_t ell = 0; ell < shifts.size(); ++ell) {
    for (Index m = -targets.M(); m <= targets.M(); ++m) {
      Index j = shifts[ell].map().evaluate(m, n);
      if (!claimed.insert(j).second) continue;
      z.set(j, ExtReal(targets.coefficient(ell, m)) / shifts[ell].forward_product(m, n));
    }
  }
  return z;
}

LemmaBounds lemma_bounds(std::span<const PseudoShift> shifts, const TargetFamily& targets,
                         double p, std::int64_t n) {
  require_same_count(shifts, targets);
  require_exponent(p);
  if (n < 1) throw ParameterError("correction time n must be >= 1");
  if (targets.has_zero()) throw ParameterError("residual bounds need nonzero target coefficients");

  const double c = static_cast<double>(targets.width() * shifts.size()) * targets.gamma(p);
  const double log_c = std::log(c);
  ProductCache W(shifts, n);
  auto sets = index_sets(shifts, targets.M(), n);
  BoundTerms t = bound_terms(shifts, targets, W, sets);

  LemmaBounds out;
  out.z_bound = exp_clamped(log_c + t.log_inv_w_max);
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    double cross = t.cross_log_max[i] == -kInf ? 0.0 : exp_clamped(log_c + t.cross_log_max[i]);
    out.residual_bounds.push_back(c * t.gap_max[i] + cross);
  }
  return out;
}

double rounding_allowance(const TargetFamily& targets, double p) {
  return 1e-12 * static_cast<double>(targets.width() * targets.size()) * targets.gamma(p);
}

std::vector<double> correction_residuals(std::span<const PseudoShift> shifts,
                                         const TargetFamily& targets, const SupportedVector& z,
                                         double p, std::int64_t n) {
  require_same_count(shifts, targets);
  std::vector<double> out;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    out.push_back(distance(shifts[i].apply_power(z, n), targets.target(i), p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Witness search

WitnessResult find_witness(std::span<const PseudoShift> shifts, const TargetFamily& targets,
                           double p, double epsilon, std::int64_t K, std::int64_t n_max,
                           std::span<const SupportedVector> y_vectors,
                           const WitnessOptions& options) {
  require_same_count(shifts, targets);
  require_exponent(p);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be > 0");
  if (K < 1) throw ParameterError("K must be >= 1");
  if (n_max < K) throw ParameterError("n_max must be >= K");

  auto [used, perturbations] = targets.with_zeros_perturbed();
  const std::size_t N = shifts.size();
  const Index M = used.M();
  const double c = static_cast<double>(used.width() * N) * used.gamma(p);
  const double log_blow_up = std::log(c / epsilon);
  const double small = epsilon / (2.0 * c);
  const double log_small = std::log(small);

  NoWitness none;
  none.K = K;
  none.n_max = n_max;

  for (std::int64_t n = K; n <= n_max; ++n) {
    unsigned failed = 0;
    ProductCache W(shifts, n);

    for (std::size_t i = 0; i < N && !(failed & kBlowUp); ++i) {
      for (Index m = -M; m <= M; ++m) {
        if (!(W(i, m).log_abs() > log_blow_up)) {
          failed |= kBlowUp;
          break;
        }
      }
    }

    for (const auto& pair : index_sets(shifts, M, n)) {
      for (const auto& hit : pair.cross) {
        if (!(ratio(W, pair, hit).log_abs() < log_small)) failed |= kCross;
      }
      for (const auto& hit : pair.overlap) {
        double gap = std::fabs(clamped(ratio(W, pair, hit)) - a_ratio(used, pair, hit));
        if (!(gap < small)) failed |= kGap;
      }
    }

    std::vector<std::vector<double>> collapse;
    for (const auto& y : y_vectors) {
      auto& row = collapse.emplace_back();
      for (std::size_t i = 0; i < N; ++i) {
        row.push_back(shifts[i].apply_power(y, n).norm(p));
        if (!(row.back() < epsilon)) failed |= kCollapse;
      }
    }

    SupportedVector z;
    double z_norm = 0.0;
    if (failed == 0) {
      z = build_correction(shifts, used, n);
      z_norm = z.norm(p);
      if (options.log_z_norm_cap && !(z.log_norm(p) < *options.log_z_norm_cap)) {
        failed |= kZNormCap;
      }
    }

    if (failed != 0) {
      none.by_n.push_back({n, failed});
      if (failed & kBlowUp) ++none.blow_up;
      if (failed & kCross) ++none.cross;
      if (failed & kGap) ++none.gap;
      if (failed & kCollapse) ++none.collapse;
      if (failed & kZNormCap) ++none.z_norm_cap;
      continue;
    }

    WitnessCertificate cert;
    cert.n = n;
    cert.residuals = correction_residuals(shifts, used, z, p, n);
    cert.z = std::move(z);
    cert.z_norm = z_norm;
    cert.bounds = lemma_bounds(shifts, used, p, n);
    cert.epsilon = epsilon;
    cert.K = K;
    cert.M = M;
    cert.p = p;
    cert.targets = std::move(used);
    cert.perturbations = std::move(perturbations);
    cert.y_vectors.assign(y_vectors.begin(), y_vectors.end());
    cert.collapse_residuals = std::move(collapse);
    return cert;
  }
  return none;
}

VerificationReport verify_certificate(std::span<const PseudoShift> shifts,
                                      const WitnessCertificate& cert) {
  VerificationReport report;
  const std::size_t N = cert.targets.size();
  report.add("operator count", static_cast<double>(N), static_cast<double>(shifts.size()),
             N == shifts.size() && N > 0);
  if (!report.all_pass()) return report;
  report.add("n >= K", static_cast<double>(cert.n), static_cast<double>(cert.K),
             cert.n >= cert.K && cert.n >= 1);
  if (!report.all_pass()) return report;

  auto rebuilt = build_correction(shifts, cert.targets, cert.n);
  report.add("z matches construction", cert.z.norm(cert.p), rebuilt.norm(cert.p),
             approx_equal(cert.z, rebuilt, kVerifyRelTol));

  const double z_norm = cert.z.norm(cert.p);
  report.add("z norm", cert.z_norm, z_norm, close_rel(cert.z_norm, z_norm, kVerifyRelTol));

  auto residuals = correction_residuals(shifts, cert.targets, cert.z, cert.p, cert.n);
  auto bounds = lemma_bounds(shifts, cert.targets, cert.p, cert.n);
  report.add("z bound", cert.bounds.z_bound, bounds.z_bound,
             close_rel(cert.bounds.z_bound, bounds.z_bound, kVerifyRelTol));
  report.add("z norm <= z bound", z_norm, bounds.z_bound, z_norm <= bounds.z_bound * (1 + 1e-12));
  report.add("z norm < epsilon", z_norm, cert.epsilon, z_norm < cert.epsilon);

  const double slack = rounding_allowance(cert.targets, cert.p);
  for (std::size_t i = 0; i < N; ++i) {
    const std::string tag = "[" + std::to_string(i + 1) + "]";
    double claimed = i < cert.residuals.size() ? cert.residuals[i] : kInf;
    double claimed_bound =
        i < cert.bounds.residual_bounds.size() ? cert.bounds.residual_bounds[i] : kInf;
    report.add("residual" + tag, claimed, residuals[i],
               close_rel(claimed, residuals[i], kVerifyRelTol));
    report.add("residual bound" + tag, claimed_bound, bounds.residual_bounds[i],
               close_rel(claimed_bound, bounds.residual_bounds[i], kVerifyRelTol));
    report.add("residual <= bound" + tag, residuals[i], bounds.residual_bounds[i],
               residuals[i] <= bounds.residual_bounds[i] + slack);
    report.add("residual < epsilon" + tag, residuals[i], cert.epsilon,
               residuals[i] < cert.epsilon);
  }

  for (std::size_t y = 0; y < cert.y_vectors.size(); ++y) {
    for (std::size_t i = 0; i < N; ++i) {
      const std::string tag = "[y" + std::to_string(y + 1) + "," + std::to_string(i + 1) + "]";
      double norm = shifts[i].apply_power(cert.y_vectors[y], cert.n).norm(cert.p);
      double claimed = y < cert.collapse_residuals.size() && i < cert.collapse_residuals[y].size()
                           ? cert.collapse_residuals[y][i]
                           : kInf;
      report.add("collapse" + tag, claimed, norm, close_rel(claimed, norm, kVerifyRelTol));
      report.add("collapse < epsilon" + tag, norm, cert.epsilon, norm < cert.epsilon);
    }
  }
  return report;
}

}  // namespace pshift

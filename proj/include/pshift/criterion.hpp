#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pshift/pseudo_shift.hpp"
#include "pshift/report.hpp"
#include "pshift/ext_real.hpp"
#include "pshift/supported_vector.hpp"

namespace pshift {

/// Targets x_i = sum_{m=-M..M} a^(i)_m e_m, one per operator.
class TargetFamily {
 public:
  /// A zero coefficient that was replaced by a small nonzero value.
  struct Perturbation {
    std::size_t op;
    Index index;
    double value;
  };

  /// `coefficients[i]` holds a^(i)_{-M}, ..., a^(i)_M.
  TargetFamily(Index M, std::vector<std::vector<double>> coefficients);
  /// M defaults to the largest support radius among the vectors.
  static TargetFamily from_vectors(std::span<const SupportedVector> targets,
                                   std::optional<Index> M = std::nullopt);
  /// The same target for each of `count` operators.
  static TargetFamily repeated(const SupportedVector& target, std::size_t count);

  std::size_t size() const { return coefficients_.size(); }
  Index M() const { return M_; }
  /// Number of slots in [M] = {-M, ..., M}.
  std::size_t width() const { return static_cast<std::size_t>(2 * M_ + 1); }
  double coefficient(std::size_t op, Index m) const;
  const std::vector<std::vector<double>>& coefficients() const { return coefficients_; }

  SupportedVector target(std::size_t op) const;
  /// max_i ||x_i||_p
  double gamma(double p) const;

  bool has_zero() const;
  /// Zeros become delta = 1e-8 * max |a|; every replacement is reported.
  std::pair<TargetFamily, std::vector<Perturbation>> with_zeros_perturbed() const;

  friend bool operator==(const TargetFamily&, const TargetFamily&) = default;

 private:
  Index M_;
  std::vector<std::vector<double>> coefficients_;
};

/// j = f_ell^n(m_ell) for some m_ell in [M], together with m_i = f_i^-n(j).
struct IndexHit {
  Index j;
  Index m_ell;
  Index m_i;
};

/// For the ordered pair (ell, i): f_ell^n([M]) split by whether f_i^-n(j) lands in [M].
struct PairIndexSets {
  std::size_t ell;
  std::size_t i;
  std::vector<IndexHit> overlap;  // f_ell^n([M]) ∩ f_i^n([M])
  std::vector<IndexHit> cross;    // f_ell^n([M]) ∩ f_i^n(Z \ [M])
};

/// All ordered pairs ell != i. Uses only membership tests on f_i^-n(j).
std::vector<PairIndexSets> index_sets(std::span<const PseudoShift> shifts, Index M,
                                      std::int64_t n);

/// W^(i)_{m_i,n} / W^(ell)_{m_ell,n} for the hit of pair (ell, i).
ExtReal weight_ratio(std::span<const PseudoShift> shifts, const PairIndexSets& pair,
                     const IndexHit& hit, std::int64_t n);

/// max |W^(i)/W^(ell)| over the cross set of (ell, i); zero when the set is empty.
ExtReal worst_cross_ratio(std::span<const PseudoShift> shifts, Index M, std::int64_t n,
                          std::size_t i, std::size_t ell);

/// Correction vector z with T_i^n z ≈ x_i for every i.
///
/// Each index j of f_ell^n([M]) carries a^(ell)_m / W^(ell)_{m,n}, where ell is the
/// smallest operator index whose block reaches j; later blocks landing on an
/// already claimed index do not add to it.
SupportedVector build_correction(std::span<const PseudoShift> shifts, const TargetFamily& targets,
                                 std::int64_t n);

struct LemmaBounds {
  double z_bound = 0.0;                 // (2M+1) N Gamma max 1/|W^(ell)_{m,n}|
  std::vector<double> residual_bounds;  // one per operator
};

/// Upper bounds for ||z|| and ||T_i^n z - x_i||_p. Requires nonzero coefficients.
LemmaBounds lemma_bounds(std::span<const PseudoShift> shifts, const TargetFamily& targets,
                         double p, std::int64_t n);

/// Absolute slack for comparing a measured residual with its bound: the own-block
/// terms of T_i^n z cancel x_i only up to rounding, about 1e-16 |ln W| |a| each.
double rounding_allowance(const TargetFamily& targets, double p);

/// ||T_i^n z - x_i||_p for every operator.
std::vector<double> correction_residuals(std::span<const PseudoShift> shifts,
                                         const TargetFamily& targets, const SupportedVector& z,
                                         double p, std::int64_t n);

struct WitnessCertificate {
  std::int64_t n = 0;
  SupportedVector z;
  double z_norm = 0.0;
  std::vector<double> residuals;
  LemmaBounds bounds;
  double epsilon = 0.0;
  std::int64_t K = 1;
  Index M = 0;
  double p = 2.0;
  TargetFamily targets{0, {}};  // as used, i.e. after perturbation
  std::vector<TargetFamily::Perturbation> perturbations;
  std::vector<SupportedVector> y_vectors;
  std::vector<std::vector<double>> collapse_residuals;  // [y][operator]
};

enum Condition : unsigned {
  kBlowUp = 1u << 0,    // |W^(i)_{m,n}| > (2M+1)N Gamma / eps
  kCross = 1u << 1,     // cross ratios < eps / (2(2M+1)N Gamma)
  kGap = 1u << 2,       // |W-ratio - a-ratio| < eps / (2(2M+1)N Gamma) on overlaps
  kCollapse = 1u << 3,  // ||T_i^n y|| < eps
  kZNormCap = 1u << 4,  // ||z|| below the caller's cap
};

struct NoWitness {
  struct Failure {
    std::int64_t n;
    unsigned failed;  // Condition bits
  };
  std::int64_t K = 1;
  std::int64_t n_max = 0;
  std::size_t blow_up = 0;
  std::size_t cross = 0;
  std::size_t gap = 0;
  std::size_t collapse = 0;
  std::size_t z_norm_cap = 0;
  std::vector<Failure> by_n;
};

using WitnessResult = std::variant<WitnessCertificate, NoWitness>;

struct WitnessOptions {
  /// Extra requirement ||z||_p < exp(log_z_norm_cap), checked once the other conditions hold.
  std::optional<double> log_z_norm_cap;
};

/// Ascending scan of n = K..n_max for the first n meeting every condition; the
/// certificate carries the correction built at that n and its measured residuals.
WitnessResult find_witness(std::span<const PseudoShift> shifts, const TargetFamily& targets,
                           double p, double epsilon, std::int64_t K, std::int64_t n_max,
                           std::span<const SupportedVector> y_vectors = {},
                           const WitnessOptions& options = {});

/// Recomputes every claimed quantity from scratch (relative tolerance 1e-9).
VerificationReport verify_certificate(std::span<const PseudoShift> shifts,
                                      const WitnessCertificate& cert);

}  // namespace pshift

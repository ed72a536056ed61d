#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

#include "pshift/ext_real.hpp"

namespace pshift {

using Index = std::int64_t;

/// Finitely supported bilateral sequence x = sum_j x_j e_j.
///
/// Zero coefficients are never stored, so `size()` is the support size.
/// Coefficients are ExtReal so that corrections like 2^-100000 e_j stay exact.
class SupportedVector {
 public:
  using Storage = std::map<Index, ExtReal>;
  using const_iterator = Storage::const_iterator;

  SupportedVector() = default;
  SupportedVector(std::initializer_list<std::pair<Index, double>> entries);
  explicit SupportedVector(const std::vector<std::pair<Index, double>>& entries);

  /// c * e_index
  static SupportedVector basis(Index index, ExtReal c = 1.0);

  /// Coefficient as a double (saturating outside the double range).
  double operator[](Index j) const;
  ExtReal coefficient(Index j) const;
  void set(Index j, ExtReal value);
  void add(Index j, ExtReal value);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  Index min_index() const { return entries_.begin()->first; }
  Index max_index() const { return entries_.rbegin()->first; }
  /// max |j| over the support, 0 for the zero vector.
  Index radius() const;

  std::vector<Index> support() const;

  /// (sum |x_j|^p)^(1/p), p >= 1.
  double norm(double p) const { return norm_ext(p).to_double(); }
  ExtReal norm_ext(double p) const;
  /// ln ||x||_p, -inf for the zero vector.
  double log_norm(double p) const { return norm_ext(p).log_abs(); }
  double max_abs() const;

  SupportedVector& operator+=(const SupportedVector& rhs);
  SupportedVector& operator-=(const SupportedVector& rhs);
  SupportedVector& operator*=(ExtReal c);

  friend SupportedVector operator+(SupportedVector a, const SupportedVector& b) { return a += b; }
  friend SupportedVector operator-(SupportedVector a, const SupportedVector& b) { return a -= b; }
  friend SupportedVector operator*(ExtReal c, SupportedVector a) { return a *= c; }

  friend bool operator==(const SupportedVector&, const SupportedVector&) = default;

 private:
  Storage entries_;
};

/// Support-wise equality with per-coefficient relative tolerance.
bool approx_equal(const SupportedVector& a, const SupportedVector& b, double rel_tol = 1e-12,
                  double abs_tol = 1e-300);

/// ||a - b||_p without materialising the difference.
double distance(const SupportedVector& a, const SupportedVector& b, double p);
ExtReal distance_ext(const SupportedVector& a, const SupportedVector& b, double p);

}  // namespace pshift

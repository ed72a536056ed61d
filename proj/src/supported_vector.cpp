#include "pshift/supported_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pshift {

SupportedVector::SupportedVector(std::initializer_list<std::pair<Index, double>> entries) {
  for (const auto& [j, c] : entries) add(j, c);
}

SupportedVector::SupportedVector(const std::vector<std::pair<Index, double>>& entries) {
  for (const auto& [j, c] : entries) add(j, c);
}

SupportedVector SupportedVector::basis(Index index, ExtReal c) {
  SupportedVector v;
  v.set(index, c);
  return v;
}

double SupportedVector::operator[](Index j) const { return coefficient(j).to_double(); }

ExtReal SupportedVector::coefficient(Index j) const {
  auto it = entries_.find(j);
  return it == entries_.end() ? ExtReal{} : it->second;
}

void SupportedVector::set(Index j, ExtReal value) {
  if (value.is_zero()) {
    entries_.erase(j);
  } else {
    entries_[j] = value;
  }
}

void SupportedVector::add(Index j, ExtReal value) {
  if (value.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(j, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

Index SupportedVector::radius() const {
  if (entries_.empty()) return 0;
  return std::max(std::abs(min_index()), std::abs(max_index()));
}

std::vector<Index> SupportedVector::support() const {
  std::vector<Index> out;
  out.reserve(entries_.size());
  for (const auto& [j, c] : entries_) out.push_back(j);
  return out;
}

namespace {

// Scaled by the largest magnitude so that p-th powers never leave the double range.
ExtReal scaled_pnorm(const std::vector<ExtReal>& values, double p) {
  if (p < 1.0 || !std::isfinite(p)) throw std::invalid_argument("norm exponent must be in [1, inf)");
  ExtReal scale;
  for (const auto& v : values) {
    if (compare_abs(v, scale) > 0) scale = v.abs();
  }
  if (scale.is_zero() || !scale.is_finite()) return scale;
  double sum = 0.0;
  for (const auto& v : values) sum += std::pow((v.abs() / scale).to_double(), p);
  return scale * ExtReal(std::pow(sum, 1.0 / p));
}

}  // namespace

ExtReal SupportedVector::norm_ext(double p) const {
  std::vector<ExtReal> values;
  values.reserve(entries_.size());
  for (const auto& [j, c] : entries_) values.push_back(c);
  return scaled_pnorm(values, p);
}

double SupportedVector::max_abs() const {
  ExtReal m;
  for (const auto& [j, c] : entries_) {
    if (compare_abs(c, m) > 0) m = c.abs();
  }
  return m.to_double();
}

SupportedVector& SupportedVector::operator+=(const SupportedVector& rhs) {
  for (const auto& [j, c] : rhs.entries_) add(j, c);
  return *this;
}

SupportedVector& SupportedVector::operator-=(const SupportedVector& rhs) {
  for (const auto& [j, c] : rhs.entries_) add(j, -c);
  return *this;
}

SupportedVector& SupportedVector::operator*=(ExtReal c) {
  if (c.is_zero()) {
    entries_.clear();
    return *this;
  }
  for (auto& [j, v] : entries_) v *= c;
  return *this;
}

bool approx_equal(const SupportedVector& a, const SupportedVector& b, double rel_tol,
                  double abs_tol) {
  auto close = [&](const ExtReal& x, const ExtReal& y) {
    const ExtReal gap = (x - y).abs();
    if (compare_abs(gap, ExtReal(abs_tol)) <= 0) return true;
    const ExtReal big = compare_abs(x, y) >= 0 ? x.abs() : y.abs();
    return compare_abs(gap, big * ExtReal(rel_tol)) <= 0;
  };
  for (const auto& [j, c] : a) {
    if (!close(c, b.coefficient(j))) return false;
  }
  for (const auto& [j, c] : b) {
    if (!close(a.coefficient(j), c)) return false;
  }
  return true;
}

ExtReal distance_ext(const SupportedVector& a, const SupportedVector& b, double p) {
  std::vector<ExtReal> diff;
  diff.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      diff.push_back(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      diff.push_back(-ib->second);
      ++ib;
    } else {
      diff.push_back(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return scaled_pnorm(diff, p);
}

double distance(const SupportedVector& a, const SupportedVector& b, double p) {
  return distance_ext(a, b, p).to_double();
}

}  // namespace pshift

#include "pshift/construct.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pshift/errors.hpp"

namespace pshift {

namespace {

// Coefficient order 1, -1, 2, -2, ...
double ordered_value(std::size_t key) {
  double magnitude = static_cast<double>(key / 2 + 1);
  return key % 2 == 0 ? magnitude : -magnitude;
}

// Appends, in lexicographic order, every vector on [-r, r] whose entries come
// from {±1, ..., ±mag} with at least one entry of magnitude mag.
void emit_block(Index r, std::size_t mag, double grid, std::size_t count,
                std::vector<SupportedVector>& out) {
  const std::size_t width = static_cast<std::size_t>(2 * r + 1);
  const std::size_t keys = 2 * mag;
  std::vector<std::size_t> digits(width, 0);
  while (out.size() < count) {
    bool reaches = std::any_of(digits.begin(), digits.end(),
                               [&](std::size_t d) { return d / 2 + 1 == mag; });
    if (reaches) {
      SupportedVector v;
      for (std::size_t s = 0; s < width; ++s) {
        v.set(static_cast<Index>(s) - r, grid * ordered_value(digits[s]));
      }
      out.push_back(std::move(v));
    }
    std::size_t pos = width;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < keys) break;
      digits[pos] = 0;
      if (pos == 0) return;
    }
  }
}

double max_log_sup(std::span<const PseudoShift> shifts) {
  double s = 0.0;
  for (const auto& t : shifts) s = std::max(s, std::log(t.norm_bound()));
  return s;
}

}  // namespace

std::vector<SupportedVector> enumerate_targets(Index M_max, double grid, std::size_t count) {
  if (!(grid > 0.0) || !std::isfinite(grid)) throw ParameterError("grid must be > 0");
  if (M_max < 0) throw ParameterError("M_max must be >= 0");
  std::vector<SupportedVector> out;
  for (std::size_t h = 1; out.size() < count; ++h) {
    const Index r_max = std::min<Index>(static_cast<Index>(h) - 1, M_max);
    for (Index r = 0; r <= r_max && out.size() < count; ++r) {
      for (std::size_t mag = 1; mag <= h && out.size() < count; ++mag) {
        // Blocks with r < h-1 and mag < h were emitted at an earlier level.
        if (r != static_cast<Index>(h) - 1 && mag != h) continue;
        emit_block(r, mag, grid, count, out);
      }
    }
  }
  return out;
}

double log_z_budget(std::span<const PseudoShift> shifts, double epsilon_k,
                    std::span<const std::int64_t> earlier_times) {
  double growth = 0.0;
  const double log_sup = max_log_sup(shifts);
  for (auto n : earlier_times) growth = std::max(growth, static_cast<double>(n) * log_sup);
  return std::log(epsilon_k) - growth;
}

BuildResult build_dhc_vector(std::span<const PseudoShift> shifts,
                             std::span<const SupportedVector> targets, double epsilon0, double p,
                             std::int64_t n_max_per_step) {
  if (shifts.empty()) throw ParameterError("need at least one operator");
  if (!(epsilon0 > 0.0) || !std::isfinite(epsilon0)) throw ParameterError("epsilon0 must be > 0");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must be in [1, inf)");
  if (n_max_per_step < 1) throw ParameterError("n_max_per_step must be >= 1");

  ScheduleCertificate cert;
  cert.operators.assign(shifts.begin(), shifts.end());
  cert.p = p;
  cert.epsilon0 = epsilon0;
  if (targets.empty()) return cert;

  const std::size_t N = shifts.size();
  auto probe = find_witness(shifts, TargetFamily::repeated(SupportedVector::basis(0), N), p,
                            epsilon0, 1, n_max_per_step);
  if (auto* none = std::get_if<NoWitness>(&probe)) {
    return ScheduleFailure{1, std::move(*none), std::move(cert)};
  }

  std::vector<std::int64_t> times;
  for (std::size_t k = 1; k <= targets.size(); ++k) {
    const auto& target = targets[k - 1];
    const double eps_k = std::ldexp(epsilon0, -static_cast<int>(k));
    const std::int64_t K = times.empty() ? 1 : times.back() + 1;
    std::vector<SupportedVector> ys;
    if (!cert.x.empty()) ys.push_back(cert.x);
    WitnessOptions options;
    options.log_z_norm_cap = log_z_budget(shifts, eps_k, times);

    auto result = find_witness(shifts, TargetFamily::repeated(target, N), p, eps_k / 2.0, K,
                               K - 1 + n_max_per_step, ys, options);
    if (auto* none = std::get_if<NoWitness>(&result)) {
      return ScheduleFailure{k, std::move(*none), std::move(cert)};
    }
    auto& witness = std::get<WitnessCertificate>(result);
    cert.x += witness.z;

    ScheduleStep step;
    step.k = k;
    step.target = target;
    step.n = witness.n;
    step.epsilon = eps_k;
    step.z = std::move(witness.z);
    for (const auto& t : shifts) {
      step.residuals.push_back(distance(t.apply_power(cert.x, step.n), target, p));
    }
    times.push_back(step.n);
    cert.steps.push_back(std::move(step));
  }
  return cert;
}

VerificationReport verify_schedule(std::span<const PseudoShift> shifts,
                                   const ScheduleCertificate& cert) {
  VerificationReport report;
  report.add("operator count", static_cast<double>(cert.operators.size()),
             static_cast<double>(shifts.size()), !shifts.empty());
  if (shifts.empty()) return report;

  const double p = cert.p;
  SupportedVector sum;
  double z_norm_total = 0.0;
  std::set<Index> allowed;
  std::vector<std::int64_t> times;

  for (std::size_t s = 0; s < cert.steps.size(); ++s) {
    const auto& step = cert.steps[s];
    const std::string tag = "[" + std::to_string(step.k) + "]";
    const double expected_eps = std::ldexp(cert.epsilon0, -static_cast<int>(s + 1));
    report.add("epsilon schedule" + tag, step.epsilon, expected_eps,
               step.k == s + 1 && close_rel(step.epsilon, expected_eps, 1e-12));
    const double previous = times.empty() ? 0.0 : static_cast<double>(times.back());
    report.add("n increasing" + tag, static_cast<double>(step.n), previous,
               step.n >= 1 && static_cast<double>(step.n) > previous);

    const double z_norm = step.z.norm(p);
    const double budget = log_z_budget(shifts, step.epsilon, times);
    report.add("z budget" + tag, step.z.log_norm(p), budget, step.z.log_norm(p) < budget);

    for (const auto& t : shifts) {
      Index radius = step.target.radius();
      for (Index m = -radius; m <= radius; ++m) allowed.insert(t.map().evaluate(m, step.n));
    }
    sum += step.z;
    z_norm_total += z_norm;
    times.push_back(step.n);
  }

  report.add("x equals sum of corrections", cert.x.norm(p), sum.norm(p),
             approx_equal(cert.x, sum, 1e-9, 0.0));
  bool inside = std::all_of(cert.x.begin(), cert.x.end(),
                            [&](const auto& e) { return allowed.count(e.first) > 0; });
  report.add("support inclusion", static_cast<double>(cert.x.size()),
             static_cast<double>(allowed.size()), inside);
  const double x_norm = cert.x.norm(p);
  report.add("norm telescoping", x_norm, z_norm_total, x_norm <= z_norm_total * (1 + 1e-12));
  report.add("norm budget", z_norm_total, 2.0 * cert.epsilon0, z_norm_total <= 2.0 * cert.epsilon0);

  for (const auto& step : cert.steps) {
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      double visit = distance(shifts[i].apply_power(cert.x, step.n), step.target, p);
      report.add("visit[" + std::to_string(step.k) + "," + std::to_string(i + 1) + "]", visit,
                 2.0 * step.epsilon, visit <= 2.0 * step.epsilon);
    }
  }
  return report;
}

}  // namespace pshift

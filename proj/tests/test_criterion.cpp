#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "pshift/criterion.hpp"
#include "pshift/errors.hpp"
#include "pshift/family.hpp"

using namespace pshift;

namespace {

std::vector<PseudoShift> worked_pair() {
  return make_family({{1, 3}, {2.0, 3.0}, {0, 0}, 2.0});
}

std::vector<PseudoShift> identical_unit(std::size_t count) {
  return std::vector<PseudoShift>(
      count, PseudoShift("S", InducingMap::translation(1), WeightRule::constant(1.0)));
}

TargetFamily ones(std::size_t N, Index M) {
  return {M, std::vector<std::vector<double>>(N, std::vector<double>(2 * M + 1, 1.0))};
}

TargetFamily random_targets(std::mt19937_64& rng, std::size_t N, Index M) {
  std::uniform_real_distribution<double> mag(0.2, 3.0);
  std::bernoulli_distribution neg(0.4);
  std::vector<std::vector<double>> rows(N);
  for (auto& row : rows) {
    for (Index m = -M; m <= M; ++m) row.push_back(neg(rng) ? -mag(rng) : mag(rng));
  }
  return {M, rows};
}

// ||T_i^n z - x_i||_p by iterating apply n times.
double direct_residual(const PseudoShift& T, const SupportedVector& z, const SupportedVector& x,
                       std::int64_t n, double p) {
  SupportedVector y = z;
  for (std::int64_t k = 0; k < n; ++k) y = T.apply(y);
  return distance(y, x, p);
}

}  // namespace

TEST_CASE("target family") {
  TargetFamily t(1, {{1.0, 0.0, -2.0}, {3.0, 4.0, 5.0}});
  CHECK(t.size() == 2);
  CHECK(t.width() == 3);
  CHECK(t.coefficient(0, 1) == -2.0);
  CHECK(t.target(1) == SupportedVector{{-1, 3.0}, {0, 4.0}, {1, 5.0}});
  CHECK(t.has_zero());
  auto [perturbed, log] = t.with_zeros_perturbed();
  REQUIRE(log.size() == 1);
  CHECK(log[0].op == 0);
  CHECK(log[0].index == 0);
  CHECK(log[0].value == doctest::Approx(5e-8));
  CHECK_FALSE(perturbed.has_zero());
  CHECK(t.gamma(2) == doctest::Approx(std::sqrt(50.0)));

  std::vector<SupportedVector> vs{SupportedVector::basis(2, 1.0), SupportedVector::basis(0, 2.0)};
  auto fv = TargetFamily::from_vectors(vs);
  CHECK(fv.M() == 2);
  CHECK(fv.coefficient(0, 2) == 1.0);
  CHECK(fv.coefficient(1, 0) == 2.0);
  CHECK_THROWS_AS(TargetFamily::from_vectors(vs, 1), ParameterError);
  CHECK_THROWS_AS(TargetFamily(1, {{1.0}}), ParameterError);
  CHECK(TargetFamily::repeated(SupportedVector::basis(0), 3).size() == 3);
}

TEST_CASE("index sets are bounded and use membership tests") {
  auto shifts = worked_pair();
  auto sets = index_sets(shifts, 2, 1);
  REQUIRE(sets.size() == 2);
  for (const auto& s : sets) {
    CHECK(s.overlap.size() + s.cross.size() == 5);
    CHECK(s.overlap.size() <= 5);
  }
  // f_1([2]) = {-1..3}, f_2([2]) = {1..5}: overlap {1,2,3}.
  CHECK(sets[0].ell == 0);
  CHECK(sets[0].overlap.size() == 3);
  // Disjoint once n > 2M.
  for (std::int64_t n = 5; n <= 105; ++n) {
    for (const auto& s : index_sets(shifts, 2, n)) CHECK(s.overlap.empty());
  }
}

TEST_CASE("build_correction examples") {
  auto shifts = worked_pair();
  auto z = build_correction(shifts, ones(2, 0), 5);
  CHECK(z.size() == 2);
  CHECK(z[5] == doctest::Approx(1.0 / 32));
  CHECK(z[15] == doctest::Approx(1.0 / 243));

  // Colliding blocks: the first operator owns index 7.
  auto same = identical_unit(2);
  auto zz = build_correction(same, ones(2, 0), 7);
  CHECK(zz == SupportedVector::basis(7, 1.0));

  auto res = correction_residuals(shifts, ones(2, 0), z, 2.0, 5);
  CHECK(oracle::relative_error(res[0], 32.0 / 243) < 1e-12);
  CHECK(oracle::relative_error(res[1], 1.0 / 96) < 1e-12);
  CHECK(oracle::relative_error(direct_residual(shifts[0], z, SupportedVector::basis(0), 5, 2.0),
                               32.0 / 243) < 1e-12);
  CHECK(oracle::relative_error(direct_residual(shifts[1], z, SupportedVector::basis(0), 5, 2.0),
                               1.0 / 96) < 1e-12);
}

TEST_CASE("lemma_bounds examples") {
  auto shifts = worked_pair();
  auto b = lemma_bounds(shifts, ones(2, 0), 2.0, 5);
  CHECK(oracle::relative_error(b.residual_bounds[0], 64.0 / 243) < 1e-12);
  CHECK(oracle::relative_error(b.residual_bounds[1], 1.0 / 48) < 1e-12);
  CHECK(oracle::relative_error(b.z_bound, 1.0 / 16) < 1e-12);
  auto z = build_correction(shifts, ones(2, 0), 5);
  CHECK(z.norm(2) == doctest::Approx(0.03151979676026529).epsilon(1e-12));
  CHECK(z.norm(2) <= b.z_bound);

  // Identical unit shifts: no cross sets, zero overlap gap, zero residuals.
  auto same = identical_unit(2);
  auto sb = lemma_bounds(same, ones(2, 0), 2.0, 7);
  CHECK(sb.residual_bounds[0] == 0.0);
  CHECK(sb.residual_bounds[1] == 0.0);
  auto sz = build_correction(same, ones(2, 0), 7);
  auto sres = correction_residuals(same, ones(2, 0), sz, 2.0, 7);
  CHECK(sres[0] <= sb.residual_bounds[0]);
  CHECK(sres[1] <= sb.residual_bounds[1]);

  // Huge weights.
  std::vector<PseudoShift> big{
      PseudoShift("A", InducingMap::translation(1), WeightRule::two_level(10.0, 0)),
      PseudoShift("B", InducingMap::translation(3), WeightRule::two_level(100.0, 0))};
  auto hb = lemma_bounds(big, ones(2, 0), 2.0, 20);
  CHECK(hb.z_bound <= 2 * 1e-20 * (1 + 1e-12));
  auto hz = build_correction(big, ones(2, 0), 20);
  double expected = std::hypot(1e-20, 1e-40);
  CHECK(oracle::relative_error(hz.norm(2), expected) < 1e-10);

  TargetFamily with_zero(0, {{1.0}, {0.0}});
  CHECK_THROWS_AS(lemma_bounds(shifts, with_zero, 2.0, 5), ParameterError);
}

TEST_CASE("correction residuals stay within their bounds") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> pick_N(2, 3);
  std::uniform_int_distribution<Index> pick_M(0, 3);
  std::uniform_int_distribution<std::int64_t> pick_n(1, 40);
  std::uniform_real_distribution<double> pick_p(1.0, 4.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto params = oracle::random_family(rng, static_cast<std::size_t>(pick_N(rng)));
    params.p = pick_p(rng);
    auto shifts = make_family(params);
    Index M = pick_M(rng);
    auto targets = random_targets(rng, shifts.size(), M);
    std::int64_t n = pick_n(rng);
    auto z = build_correction(shifts, targets, n);
    auto b = lemma_bounds(shifts, targets, params.p, n);
    auto res = correction_residuals(shifts, targets, z, params.p, n);
    CHECK(z.norm(params.p) <= b.z_bound * (1 + 1e-12));
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      CHECK(res[i] <= b.residual_bounds[i] + rounding_allowance(targets, params.p));
      // Cross-check one residual with plain iteration at small n.
      if (n <= 12) {
        double direct = direct_residual(shifts[i], z, targets.target(i), n, params.p);
        CHECK(std::fabs(direct - res[i]) <= 1e-10 * std::max(1.0, direct));
      }
    }
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("find_witness on the worked family") {
  auto shifts = worked_pair();
  auto result = find_witness(shifts, ones(2, 0), 2.0, 0.01, 1, 200);
  REQUIRE(std::holds_alternative<WitnessCertificate>(result));
  const auto& cert = std::get<WitnessCertificate>(result);
  CHECK(cert.n <= 200);
  for (double r : cert.residuals) CHECK(r < 0.01);
  CHECK(cert.z_norm < 0.01);
  CHECK(verify_certificate(shifts, cert).all_pass());

  // Determinism.
  auto again = std::get<WitnessCertificate>(find_witness(shifts, ones(2, 0), 2.0, 0.01, 1, 200));
  CHECK(again.n == cert.n);
  CHECK(again.z == cert.z);
  CHECK(again.residuals == cert.residuals);
}

TEST_CASE("find_witness with a huge epsilon stops at the first blow-up") {
  auto shifts = worked_pair();
  auto result = find_witness(shifts, ones(2, 0), 2.0, 1e6, 1, 50);
  REQUIRE(std::holds_alternative<WitnessCertificate>(result));
  CHECK(std::get<WitnessCertificate>(result).n == 1);

  // At eps = 4: the blow-up threshold is 2*1/4 = 0.5 < |W| always, the first n
  // is then decided by the cross ratio (2/3)^n < 4 / (2*2) = 1.
  auto r4 = find_witness(shifts, ones(2, 0), 2.0, 4.0, 1, 50);
  REQUIRE(std::holds_alternative<WitnessCertificate>(r4));
}

TEST_CASE("duplicated operators never give a witness") {
  std::vector<PseudoShift> dup(
      2, PseudoShift("D", InducingMap::translation(1), WeightRule::two_level(2.0, 0)));
  TargetFamily t(0, {{1.0}, {2.0}});
  auto result = find_witness(dup, t, 2.0, 0.5, 1, 300);
  REQUIRE(std::holds_alternative<NoWitness>(result));
  const auto& none = std::get<NoWitness>(result);
  CHECK(none.gap == 300);
  CHECK(none.by_n.size() == 300);
  for (const auto& f : none.by_n) CHECK((f.failed & kGap) != 0);
}

TEST_CASE("monotone success in epsilon") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto params = oracle::random_family(rng, 2 + trial % 2);
    auto shifts = make_family(params);
    auto targets = random_targets(rng, shifts.size(), trial % 3);
    std::int64_t prev = -1;
    for (double eps : {0.01, 0.05, 0.2, 1.0, 5.0}) {
      auto r = find_witness(shifts, targets, 2.0, eps, 1, 400);
      if (prev >= 0) {
        REQUIRE(std::holds_alternative<WitnessCertificate>(r));
      }
      if (auto* c = std::get_if<WitnessCertificate>(&r)) {
        if (prev >= 0) CHECK(c->n <= prev);
        prev = c->n;
      }
    }
  }
}

TEST_CASE("degenerate N = 1") {
  std::vector<PseudoShift> one{
      PseudoShift("T", InducingMap::translation(1), WeightRule::two_level(2.0, 0))};
  auto t = ones(1, 1);
  auto r = find_witness(one, t, 2.0, 0.01, 1, 100);
  REQUIRE(std::holds_alternative<WitnessCertificate>(r));
  const auto& c = std::get<WitnessCertificate>(r);
  // Only blow-up matters: 3 * 1 * sqrt(3) / |W| < 0.01 with min |W| = 2^{n-2}, reached at m = -1.
  double c0 = 3 * std::sqrt(3.0);
  std::int64_t expected = 1;
  while (std::pow(2.0, static_cast<double>(expected - 2)) <= c0 / 0.01) ++expected;
  CHECK(c.n == expected);
  CHECK(index_sets(one, 1, 5).empty());

  // With a collapse vector the forward direction must also shrink.
  std::vector<SupportedVector> ys{SupportedVector::basis(0, 1.0)};
  auto ry = find_witness(one, t, 2.0, 0.01, 1, 100, ys);
  REQUIRE(std::holds_alternative<WitnessCertificate>(ry));
  const auto& cy = std::get<WitnessCertificate>(ry);
  CHECK(cy.collapse_residuals[0][0] < 0.01);
  CHECK(verify_certificate(one, cy).all_pass());
}

TEST_CASE("collapse condition can block every n") {
  // Unit weights never shrink y.
  auto same = identical_unit(1);
  std::vector<SupportedVector> ys{SupportedVector::basis(0, 1.0)};
  auto r = find_witness(same, ones(1, 0), 2.0, 0.5, 1, 20, ys);
  REQUIRE(std::holds_alternative<NoWitness>(r));
  CHECK(std::get<NoWitness>(r).collapse == 20);
}

TEST_CASE("zero coefficients are perturbed and recorded") {
  auto shifts = worked_pair();
  TargetFamily t(1, {{1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}});
  auto r = find_witness(shifts, t, 2.0, 0.1, 1, 200);
  REQUIRE(std::holds_alternative<WitnessCertificate>(r));
  const auto& c = std::get<WitnessCertificate>(r);
  REQUIRE(c.perturbations.size() == 1);
  CHECK(c.perturbations[0].value == doctest::Approx(1e-8));
  CHECK_FALSE(c.targets.has_zero());
  CHECK(verify_certificate(shifts, c).all_pass());
}

TEST_CASE("verify_certificate detects tampering") {
  auto shifts = worked_pair();
  auto cert = std::get<WitnessCertificate>(find_witness(shifts, ones(2, 1), 2.0, 0.01, 1, 300));
  CHECK(verify_certificate(shifts, cert).all_pass());

  auto doubled = cert;
  doubled.z *= 2.0;
  auto rep = verify_certificate(shifts, doubled);
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.failed("residual[1]"));

  auto earlier = cert;
  earlier.n -= 1;
  auto rep2 = verify_certificate(shifts, earlier);
  CHECK_FALSE(rep2.all_pass());
  CHECK((rep2.failed("residual[1]") || rep2.failed("residual[2]")));

  auto lied = cert;
  lied.residuals[1] *= 0.5;
  CHECK(verify_certificate(shifts, lied).failed("residual[2]"));

  CHECK_FALSE(verify_certificate(std::span(shifts).first(1), cert).all_pass());
}

TEST_CASE("find_witness argument checks") {
  auto shifts = worked_pair();
  CHECK_THROWS_AS(find_witness(shifts, ones(2, 0), 2.0, 0.0, 1, 10), ParameterError);
  CHECK_THROWS_AS(find_witness(shifts, ones(2, 0), 2.0, -1.0, 1, 10), ParameterError);
  CHECK_THROWS_AS(find_witness(shifts, ones(2, 0), 2.0, 0.1, 5, 4), ParameterError);
  CHECK_THROWS_AS(find_witness(shifts, ones(3, 0), 2.0, 0.1, 1, 10), ParameterError);
}

TEST_CASE("weight ratios saturate instead of overflowing") {
  std::vector<PseudoShift> steep{
      PseudoShift("A", InducingMap::translation(1), WeightRule::two_level(1e10, 0)),
      PseudoShift("B", InducingMap::translation(3), WeightRule::two_level(1e20, 0))};
  auto r = find_witness(steep, ones(2, 0), 2.0, 0.01, 1, 200);
  REQUIRE(std::holds_alternative<WitnessCertificate>(r));
  CHECK(verify_certificate(steep, std::get<WitnessCertificate>(r)).all_pass());
}

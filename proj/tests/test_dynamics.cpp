#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "pshift/construct.hpp"
#include "pshift/dynamics.hpp"
#include "pshift/errors.hpp"
#include "pshift/family.hpp"

using namespace pshift;

namespace {

std::vector<PseudoShift> worked_pair() {
  return make_family({{1, 3}, {2.0, 3.0}, {0, 0}, 2.0});
}

std::vector<std::int64_t> brute_force_windows(const std::vector<std::int64_t>& a,
                                              std::int64_t N, std::int64_t m_max) {
  std::vector<std::int64_t> counts;
  for (std::int64_t m = 0; m <= m_max; ++m) {
    counts.push_back(std::count_if(a.begin(), a.end(),
                                   [&](std::int64_t v) { return v >= m + 1 && v <= m + N; }));
  }
  return counts;
}

}  // namespace

TEST_CASE("orbit examples") {
  std::vector<PseudoShift> plain{
      PseudoShift("S", InducingMap::translation(1), WeightRule::constant(1.0))};
  auto o = orbit(plain, SupportedVector::basis(0), 3, FullMode{});
  REQUIRE(o.records.size() == 4);
  for (std::int64_t n = 0; n <= 3; ++n) {
    CHECK(o.records[n].n == n);
    REQUIRE(o.records[n].snapshots.size() == 1);
    CHECK(o.records[n].snapshots[0] == SupportedVector::basis(-n));
  }

  auto fam = worked_pair();
  std::vector<PseudoShift> first{fam[0]};
  auto t1 = orbit(first, SupportedVector::basis(0), 2, FullMode{});
  CHECK(t1.records[0].snapshots[0] == SupportedVector::basis(0));
  CHECK(t1.records[1].snapshots[0] == SupportedVector::basis(-1, 0.5));
  CHECK(t1.records[2].snapshots[0] == SupportedVector::basis(-2, 0.25));

  SupportedVector x{{-2, 0.5}, {4, -1.0}};
  auto single = orbit(fam, x, 0, FullMode{});
  REQUIRE(single.records.size() == 1);
  for (const auto& s : single.records[0].snapshots) CHECK(s == x);

  CHECK_THROWS_AS(orbit(fam, x, -1, FullMode{}), ParameterError);
}

TEST_CASE("stats mode records norms and distances") {
  auto fam = worked_pair();
  SupportedVector x{{0, 1.0}, {3, 2.0}};
  SupportedVector target = SupportedVector::basis(-1, 0.5);
  auto full = orbit(fam, x, 6, FullMode{});
  auto stats = orbit(fam, x, 6, StatsMode{target, 2.0});
  REQUIRE(stats.records.size() == 7);
  for (std::size_t n = 0; n < 7; ++n) {
    CHECK(stats.records[n].snapshots.empty());
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const auto& snap = full.records[n].snapshots[i];
      CHECK(stats.records[n].norms[i] == doctest::Approx(snap.norm(2.0)).epsilon(1e-15));
      CHECK(stats.records[n].distances[i] ==
            doctest::Approx(distance(snap, target, 2.0)).epsilon(1e-15));
    }
  }
}

TEST_CASE("full mode respects the support cap") {
  auto fam = worked_pair();
  SupportedVector x{{0, 1.0}, {1, 1.0}, {2, 1.0}};
  CHECK_THROWS_AS(orbit(fam, x, 10, FullMode{}, OrbitLimits{20}), OrbitMemoryError);
  CHECK_NOTHROW(orbit(fam, x, 2, FullMode{}, OrbitLimits{18}));
}

TEST_CASE("snapshots agree with apply_power and with repeated dense application") {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<Index> idx(-10, 10);
  std::normal_distribution<double> coef(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    auto fam = make_family(oracle::random_family(rng, 2 + trial % 2));
    SupportedVector x;
    for (int s = 0; s < 4; ++s) x.set(idx(rng), coef(rng));
    auto o = orbit(fam, x, 25, FullMode{});
    for (const auto& rec : o.records) {
      for (std::size_t i = 0; i < fam.size(); ++i) {
        auto closed = fam[i].apply_power(x, rec.n);
        CHECK(approx_equal(rec.snapshots[i], closed, 1e-10));
        if (rec.n > 0) {
          CHECK(approx_equal(rec.snapshots[i], fam[i].apply(o.records[rec.n - 1].snapshots[i]),
                             1e-15));
        }
      }
    }
    for (std::size_t i = 0; i < fam.size(); ++i) {
      Index reach = *fam[i].map().step();
      auto dense = oracle::repeated_apply(fam[i], x, 7, std::abs(reach));
      CHECK(approx_equal(o.records[7].snapshots[i], dense, 1e-12));
    }
  }
}

TEST_CASE("return_set examples") {
  auto fam = worked_pair();
  SupportedVector x{{0, 1.0}, {2, -0.5}};
  const std::int64_t n_max = 12;
  auto stats = orbit(fam, x, n_max, StatsMode{SupportedVector{}, 2.0});
  // Everything sits inside a ball larger than ||x|| (sup|w|)^n_max.
  double huge = x.norm(2.0) * std::pow(3.0, n_max) * 2.0;
  auto all = return_set(stats, SupportedVector{}, huge, 2.0);
  CHECK(all.size() == n_max + 1);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(return_set(stats, SupportedVector{}, 0.0, 2.0).empty());

  auto full = orbit(fam, x, n_max, FullMode{});
  for (double delta : {0.3, 1.0, 5.0, 40.0}) {
    CHECK(return_set(full, SupportedVector{}, delta, 2.0) ==
          return_set(stats, SupportedVector{}, delta, 2.0));
  }

  CHECK_THROWS_AS(return_set(stats, SupportedVector::basis(0), 1.0, 2.0), ModeMismatchError);
  CHECK_THROWS_AS(return_set(stats, SupportedVector{}, 1.0, 1.0), ModeMismatchError);
}

TEST_CASE("joint return sets of a scheduled vector contain the scheduled times") {
  auto fam = worked_pair();
  auto built = build_dhc_vector(fam, enumerate_targets(1, 1.0, 4), 0.1, 2.0, 100000);
  REQUIRE(std::holds_alternative<ScheduleCertificate>(built));
  const auto& cert = std::get<ScheduleCertificate>(built);
  const std::int64_t last = cert.steps.back().n;
  for (const auto& step : cert.steps) {
    auto o = orbit(fam, cert.x, last, StatsMode{step.target, 2.0});
    auto hits = return_set(o, step.target, 3.0 * step.epsilon, 2.0);
    CHECK(std::binary_search(hits.begin(), hits.end(), step.n));
  }
}

TEST_CASE("upper_banach_density examples") {
  std::vector<std::int64_t> evens;
  for (std::int64_t v = 0; v <= 10000; v += 2) evens.push_back(v);
  auto e = upper_banach_density(evens, 100, 5000);
  CHECK(e.value == 0.5);
  CHECK(e.window == 100);
  CHECK(e.m_max == 5000);
  CHECK(e.set_size == evens.size());
  CHECK(e.best_count == 50);

  std::vector<std::int64_t> squares;
  for (std::int64_t k = 0; k <= 100; ++k) squares.push_back(k * k);
  auto s = upper_banach_density(squares, 100, 9000);
  CHECK(s.value <= 0.11);
  CHECK(s.best_count == 10);

  auto none = upper_banach_density({}, 100, 5000);
  CHECK(none.value == 0.0);
  CHECK(none.set_size == 0);

  // Duplicates count once.
  std::vector<std::int64_t> dup{3, 3, 3, 4};
  CHECK(upper_banach_density(dup, 10, 0).best_count == 2);

  CHECK_THROWS_AS(upper_banach_density(evens, 0, 10), ParameterError);
  CHECK_THROWS_AS(upper_banach_density(evens, 10, -1), ParameterError);
  std::vector<std::int64_t> negative{-1, 2};
  CHECK_THROWS_AS(upper_banach_density(negative, 10, 10), ParameterError);
}

TEST_CASE("density matches brute force, stays in [0, 1] and grows with m_max") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::int64_t> val(0, 600);
    std::uniform_int_distribution<int> size(0, 120);
    std::uniform_int_distribution<std::int64_t> win(1, 80);
    std::vector<std::int64_t> a;
    for (int s = size(rng); s > 0; --s) a.push_back(val(rng));
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    const std::int64_t N = win(rng);
    auto counts = brute_force_windows(a, N, 700);
    double previous = 0.0;
    std::int64_t best = 0;
    for (std::int64_t m_max = 0; m_max <= 700; m_max += 7) {
      for (std::int64_t m = std::max<std::int64_t>(0, m_max - 6); m <= m_max; ++m) {
        best = std::max(best, counts[m]);
      }
      auto est = upper_banach_density(a, N, m_max);
      CHECK(est.best_count == best);
      CHECK(est.value >= 0.0);
      CHECK(est.value <= 1.0);
      CHECK(est.value >= previous);
      previous = est.value;
    }
  }
}

TEST_CASE("orbit_csv layout") {
  auto fam = worked_pair();
  auto o = orbit(fam, SupportedVector::basis(0), 0, StatsMode{SupportedVector{}, 2.0});
  CHECK(orbit_csv(o) == "n,norm_1,dist_1,norm_2,dist_2\n0,1,1,1,1\n");
  auto two = orbit(fam, SupportedVector::basis(0), 1, StatsMode{SupportedVector{}, 2.0});
  CHECK(orbit_csv(two) == "n,norm_1,dist_1,norm_2,dist_2\n0,1,1,1,1\n1,0.5,0.5,0.33333333333333331,0.33333333333333331\n");
  CHECK_THROWS_AS(orbit_csv(orbit(fam, SupportedVector::basis(0), 1, FullMode{})),
                  ModeMismatchError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "idealtk/density.hpp"
#include "idealtk/error.hpp"
#include "idealtk/truncated_set.hpp"
#include "test_support.hpp"

using namespace idealtk;

TEST_CASE("TruncatedSet validates its invariants") {
  CHECK_NOTHROW(TruncatedSet::empty(10));
  CHECK_THROWS_AS(TruncatedSet(10, {3, 2}), Error);       // not increasing
  CHECK_THROWS_AS(TruncatedSet(10, {2, 2}), Error);       // duplicate
  CHECK_THROWS_AS(TruncatedSet(10, {0}), Error);          // below range
  CHECK_THROWS_AS(TruncatedSet(10, {11}), Error);         // above horizon
  CHECK_THROWS_AS(TruncatedSet(0, {}), Error);            // no horizon

  const auto s = TruncatedSet(10, {2, 5, 7});
  CHECK(s.nth(1) == 2);
  CHECK(s.nth(3) == 7);
  CHECK_THROWS_AS(s.nth(0), Error);
  CHECK_THROWS_AS(s.nth(4), Error);
  CHECK(s.contains(5));
  CHECK_FALSE(s.contains(4));
  CHECK(s.count_leq(6) == 2);
}

TEST_CASE("set literals parse") {
  CHECK(parse_set("evens", 10).members().size() == 5);
  CHECK(parse_set("multiples:5", 20).members()[1] == 10);
  CHECK(parse_set("squares", 50).members().back() == 49);
  CHECK(parse_set("powers:2", 40).members().back() == 32);
  CHECK(parse_set("odds", 9).members().back() == 9);
  CHECK_THROWS_AS(parse_set("nope", 10), Error);
  CHECK_THROWS_AS(parse_set("lpf-level:3", 10), Error);  // needs a sieve

  const char* path = "test_set_literal.txt";
  {
    std::ofstream out(path);
    out << "7\n3\n7\n12\n";
  }
  const auto s = parse_set(std::string("file:") + path, 20);
  CHECK(s.members().size() == 3);  // deduplicated, sorted
  CHECK(s.members()[0] == 3);
  std::remove(path);
}

TEST_CASE("compose matches enumeration semantics") {
  const std::uint64_t n = 1000;
  // Identity enumeration: a_b = b.
  const auto all = TruncatedSet::all(n);
  const auto b = TruncatedSet(n, {1, 4, 9, 16});
  const auto r = compose(all, b);
  CHECK(r.dropped == 0);
  CHECK(std::equal(r.set.members().begin(), r.set.members().end(),
                   b.members().begin(), b.members().end()));

  // a_n = 2n with even b: multiples of 4.
  const auto evens = TruncatedSet::evens(n);
  const auto comp = compose(evens, evens);
  const auto expected = TruncatedSet::multiples(4, n);
  CHECK(std::equal(comp.set.members().begin(), comp.set.members().end(),
                   expected.members().begin(), expected.members().end()));

  CHECK_THROWS_AS(compose(TruncatedSet::empty(10), b), Error);
}

TEST_CASE("compose counts truncation loss") {
  const auto a = TruncatedSet(100, {10, 20, 30});  // |A| = 3
  const auto b = TruncatedSet(100, {1, 2, 3, 4, 50});
  const auto r = compose(a, b);
  CHECK(r.set.members().size() == 3);
  CHECK(r.dropped == 2);  // b = 4 and b = 50 exceed |A|
}

TEST_CASE("composition density is the product of densities") {
  // A = evens (1/2), B = multiples of 3 (1/3): A_B should have density 1/6.
  const std::uint64_t n = 100000;
  const auto a = TruncatedSet::evens(n);
  const auto b = TruncatedSet::multiples(3, n);
  const auto r = compose(a, b);
  // Independent brute-force oracle on a small prefix confirms the members.
  const auto small_a = TruncatedSet::evens(2000);
  const auto small_b = TruncatedSet::multiples(3, 2000);
  const auto oracle = testsupport::compose_oracle(
      {small_a.members().begin(), small_a.members().end()},
      {small_b.members().begin(), small_b.members().end()});
  const auto small_r = compose(small_a, small_b);
  REQUIRE(oracle.size() == small_r.set.members().size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    CHECK(oracle[i] == small_r.set.members()[i]);

  const auto est = upper_alpha_density(r.set, 0.0);
  CHECK(std::fabs(est.value - 1.0 / 6.0) <= 0.01);
}

TEST_CASE("scale is the exact image with drop accounting") {
  const std::uint64_t n = 1000000;
  const auto evens = TruncatedSet::evens(n);
  const auto r1 = scale(1, evens);
  CHECK(std::equal(r1.set.members().begin(), r1.set.members().end(),
                   evens.members().begin(), evens.members().end()));
  const auto r2 = scale(2, evens);
  const auto m4 = TruncatedSet::multiples(4, n);
  CHECK(std::equal(r2.set.members().begin(), r2.set.members().end(),
                   m4.members().begin(), m4.members().end()));
  CHECK(r2.dropped == evens.size() - m4.size());
  CHECK(std::fabs(upper_alpha_density(r2.set, 0.0).value - 0.25) <= 0.01);
  CHECK_THROWS_AS(scale(0, evens), Error);

  // Small-range check against the dumb oracle.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = testsupport::random_subset(rng, 500, 0.3);
    const auto r = scale(3, s);
    const auto oracle = testsupport::scale_oracle(
        3, {s.members().begin(), s.members().end()}, 500);
    REQUIRE(r.set.members().size() == oracle.size());
    CHECK(std::equal(r.set.members().begin(), r.set.members().end(),
                     oracle.begin(), oracle.end()));
  }
}

TEST_CASE("density is (-1)-homogeneous under scaling") {
  // d(kX) = d(X)/k for the full set, several alphas.
  const std::uint64_t n = 1000000;
  const auto all = TruncatedSet::all(n);
  for (double alpha : {-0.5, 0.0}) {
    const double base = upper_alpha_density(all, alpha).value;
    for (std::uint64_t k : {2, 3, 5}) {
      const auto ka = scale(k, all).set;
      const double scaled = upper_alpha_density(ka, alpha).value;
      CHECK(std::fabs(scaled - base / static_cast<double>(k)) <= 0.01);
    }
  }
  // Logarithmic weights converge slowly; widen the tolerance.
  const double base = upper_alpha_density(all, -1.0).value;
  for (std::uint64_t k : {2, 5}) {
    const auto ka = scale(k, all).set;
    const double scaled = upper_alpha_density(ka, -1.0).value;
    CHECK(std::fabs(scaled - base / static_cast<double>(k)) <= 0.05);
  }
}

TEST_CASE("dominates compares shared enumeration prefixes") {
  const auto evens = TruncatedSet::evens(100);
  const auto m3 = TruncatedSet::multiples(3, 100);
  CHECK(dominates(evens, evens).holds);
  CHECK(dominates(TruncatedSet::all(100), m3).holds);
  CHECK(dominates(evens, m3).holds);  // 2n <= 3n
  const auto viol = dominates(m3, evens);
  CHECK_FALSE(viol.holds);
  CHECK(*viol.first_violation == 1);  // 3 > 2 immediately
  CHECK_THROWS_AS(dominates(TruncatedSet::empty(10), evens), Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = testsupport::random_subset(rng, 300, 0.4);
    auto y = testsupport::random_subset(rng, 300, 0.4);
    if (x.is_empty() || y.is_empty()) continue;
    CHECK(dominates(x, y).holds ==
          testsupport::dominates_oracle(
              {x.members().begin(), x.members().end()},
              {y.members().begin(), y.members().end()}));
  }
}

TEST_CASE("upper alpha-density fixtures") {
  const std::uint64_t n = 1000000;
  const auto m5 = TruncatedSet::multiples(5, n);
  CHECK(std::fabs(upper_alpha_density(m5, 0.0).value - 0.2) <= 0.005);

  const auto all = TruncatedSet::all(n);
  for (double alpha : {-1.0, -0.5, 0.0, 1.0})
    CHECK(upper_alpha_density(all, alpha).value == 1.0);

  const auto squares = TruncatedSet::squares(n);
  CHECK(upper_alpha_density(squares, 0.0).value <= 0.001);
}

TEST_CASE("logarithmic density of the evens, against a direct oracle") {
  const std::uint64_t n = 10000000;
  const auto evens = TruncatedSet::evens(n);
  const auto est = upper_alpha_density(evens, -1.0);
  // Direct partial-sum oracle at the final checkpoint.
  double num = 0, den = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double w = 1.0 / static_cast<double>(i);
    den += w;
    if (i % 2 == 0) num += w;
  }
  CHECK(est.value == doctest::Approx(num / den).epsilon(1e-9));
  CHECK(std::fabs(est.value - 0.5) <= 0.05);
}

TEST_CASE("density rejects bad schedules") {
  const auto s = TruncatedSet::evens(100);
  std::vector<std::uint64_t> beyond{50, 200};
  CHECK_THROWS_AS(upper_alpha_density(s, 0.0, beyond), Error);
  std::vector<std::uint64_t> empty;
  CHECK_THROWS_AS(upper_alpha_density(s, 0.0, empty), Error);
  std::vector<std::uint64_t> unsorted{50, 20};
  CHECK_THROWS_AS(upper_alpha_density(s, 0.0, unsorted), Error);
}

TEST_CASE("default schedule shape") {
  const auto sched = default_schedule(1000000);
  CHECK(sched.back() == 1000000);
  CHECK(sched.front() >= 1000000 / 64);
  for (std::size_t i = 1; i < sched.size(); ++i)
    CHECK(sched[i] > sched[i - 1]);
}

TEST_CASE("summable tails flatten exactly when the mass converges") {
  const std::uint64_t n = 1 << 20;
  const auto cuts = default_cutpoints(n);
  const auto rec = WeightFunction::reciprocal();

  const auto pow2 = TruncatedSet::powers(2, n);
  const auto geometric = summable_tail(pow2, rec, cuts);
  CHECK(geometric.verdict == Verdict::In);
  // Geometric-series oracle: tail(c) = sum over powers of two above c.
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    double expect = 0;
    for (std::uint64_t v = 2; v <= n; v *= 2) {
      if (v > cuts[i]) expect += 1.0 / static_cast<double>(v);
      if (v > n / 2) break;
    }
    CHECK(geometric.tails[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  for (std::size_t i = 1; i < geometric.tails.size(); ++i)
    CHECK(geometric.tails[i] <= geometric.tails[i - 1]);

  const auto harmonic = summable_tail(TruncatedSet::all(n), rec, cuts);
  CHECK(harmonic.verdict == Verdict::Out);

  const auto none = summable_tail(TruncatedSet::empty(n), rec, cuts);
  CHECK(none.verdict == Verdict::In);
  for (double t : none.tails) CHECK(t == 0.0);
}

TEST_CASE("stretchability verdicts") {
  const std::uint64_t n = 1000000;
  std::vector<std::uint64_t> ks{3};
  const auto r = stretchability_check(TruncatedSet::all(n),
                                      IdealSpec::alpha_density(0.0), ks);
  CHECK(r.conclusive);
  CHECK(r.entries[0].holds);
  CHECK(std::fabs(r.entries[0].scaled_density - 1.0 / 3.0) <= 0.01);

  const auto degenerate = stretchability_check(
      TruncatedSet::squares(n), IdealSpec::alpha_density(0.0), ks);
  CHECK_FALSE(degenerate.conclusive);
  CHECK(degenerate.base_verdict == Verdict::In);
}

TEST_CASE("stretchability for the logarithmic ideal") {
  const std::uint64_t n = 10000000;
  std::vector<std::uint64_t> ks{2};
  const auto r = stretchability_check(TruncatedSet::evens(n),
                                      IdealSpec::alpha_density(-1.0), ks);
  CHECK(r.conclusive);
  CHECK(std::fabs(r.entries[0].scaled_density - 0.25) <= 0.05);
  CHECK(r.entries[0].holds);
}

TEST_CASE("density is monotone and subadditive on random pairs") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 15; ++trial) {
    const std::uint64_t n = 20000;
    const auto t = testsupport::random_subset(rng, n, 0.5);
    // S is a random subset of T.
    std::vector<std::uint64_t> sub;
    std::bernoulli_distribution keep(0.6);
    for (auto v : t.members())
      if (keep(rng)) sub.push_back(v);
    const auto s = TruncatedSet(n, std::move(sub));

    for (double alpha : {-1.0, -0.5, 0.0}) {
      const double ds = upper_alpha_density(s, alpha).value;
      const double dt = upper_alpha_density(t, alpha).value;
      CHECK(ds <= dt + 1e-12);
    }

    const auto u = testsupport::random_subset(rng, n, 0.3);
    std::vector<std::uint64_t> merged;
    std::set_union(t.members().begin(), t.members().end(),
                   u.members().begin(), u.members().end(),
                   std::back_inserter(merged));
    const auto tu = TruncatedSet(n, std::move(merged));
    const double d_union = upper_alpha_density(tu, 0.0).value;
    const double dt = upper_alpha_density(t, 0.0).value;
    const double du = upper_alpha_density(u, 0.0).value;
    CHECK(d_union <= dt + du + 1e-9);
  }
}

TEST_CASE("homogeneity on eventually-periodic sets") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    const auto p = testsupport::random_periodic(rng, 100000);
    const double base = upper_alpha_density(p.set, 0.0).value;
    CHECK(std::fabs(base - p.density) <= 0.01);
    for (std::uint64_t k : {2, 7, 10}) {
      const auto ka = scale(k, p.set).set;
      const double scaled = upper_alpha_density(ka, 0.0).value;
      CHECK(std::fabs(scaled - base / static_cast<double>(k)) <= 0.01);
    }
  }
}

TEST_CASE("composition of periodic sets keeps the density product") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const auto a = testsupport::random_periodic(rng, 100000);
    const auto b = testsupport::random_periodic(rng, 100000);
    const auto r = compose(a.set, b.set);
    const double got = upper_alpha_density(r.set, 0.0).value;
    CHECK(std::fabs(got - a.density * b.density) <= 0.015);
  }
}

TEST_CASE("alpha-density and weighted-density paths agree bit for bit") {
  std::mt19937_64 rng(7);
  const auto s = testsupport::random_subset(rng, 50000, 0.4);
  const auto schedule = default_schedule(50000);
  for (double alpha : {-1.0, -0.5, 0.0, 0.5}) {
    const auto via_alpha = upper_alpha_density(s, alpha, schedule);
    const auto via_weight =
        weighted_upper_density(s, WeightFunction::power(alpha), schedule);
    REQUIRE(via_alpha.trace.size() == via_weight.trace.size());
    for (std::size_t i = 0; i < via_alpha.trace.size(); ++i)
      CHECK(via_alpha.trace[i].ratio == via_weight.trace[i].ratio);
    CHECK(via_alpha.value == via_weight.value);
  }
}

TEST_CASE("weight functions") {
  CHECK(WeightFunction::constant_one()(123) == 1.0);
  CHECK(WeightFunction::reciprocal()(4) == 0.25);
  CHECK(WeightFunction::power(0.0)(9) == 1.0);
  CHECK(WeightFunction::power(0.0).is_constant_one());
  CHECK_THROWS_AS(WeightFunction::power(-1.5), Error);
  CHECK_THROWS_AS(WeightFunction::table({1.0, -2.0}), Error);
  const auto t = WeightFunction::table({3.0, 2.0, 1.0});
  CHECK(t(2) == 2.0);
  CHECK(t.non_increasing_from());
  CHECK_THROWS_AS(t(4), Error);
  CHECK(WeightFunction::parse("power:-0.5").alpha() == -0.5);
  CHECK_THROWS_AS(WeightFunction::parse("wat"), Error);
}

TEST_CASE("ideal spec parsing and the alpha/erdos-ulam identification") {
  const auto spec = IdealSpec::parse("alpha:0");
  CHECK(spec.family() == IdealFamily::AlphaDensity);
  CHECK(spec.weight().is_constant_one());
  CHECK(IdealSpec::parse("summable:reciprocal").family() ==
        IdealFamily::Summable);
  CHECK(IdealSpec::parse("erdos-ulam:power:-0.5").family() ==
        IdealFamily::ErdosUlam);
  CHECK_THROWS_AS(IdealSpec::parse("bogus:1"), Error);
}

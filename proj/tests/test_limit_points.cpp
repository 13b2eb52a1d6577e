#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "idealtk/error.hpp"
#include "idealtk/limit_points.hpp"
#include "test_support.hpp"

using namespace idealtk;

namespace {

const std::vector<double> kFineEps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

SequenceSource lpf_sequence(std::uint64_t n) {
  return SequenceSource::lpf(n, LpfTable::build(n));
}

LimitPointParams fine_params(double q = 0.02) {
  LimitPointParams p;
  p.q = q;
  p.eps_schedule = kFineEps;
  return p;
}

}  // namespace

TEST_CASE("neighborhood index sets are exact") {
  const std::uint64_t n = 100000;
  const auto x = lpf_sequence(n);

  // Values equal 1/2 exactly on the evens.
  const auto half = neighborhood_index_set(x, 0.5, 0.01);
  const auto evens = TruncatedSet::evens(n);
  REQUIRE(half.size() == evens.size());
  CHECK(std::equal(half.members().begin(), half.members().end(),
                   evens.members().begin(), evens.members().end()));

  CHECK(neighborhood_index_set(x, 0.5, 10.0).size() == n);
  CHECK_THROWS_AS(neighborhood_index_set(x, 0.5, 0.0), Error);
}

TEST_CASE("the near-zero neighborhood matches the rough-number count") {
  const std::uint64_t n = 1000000;
  const auto table = LpfTable::build(n);
  const auto x = SequenceSource::lpf(n, table);
  // x_n <= 0.06 exactly when lpf(n) >= 17.
  const auto s = neighborhood_index_set(x, 0.0, 0.06);
  std::uint64_t expect = 0;
  for (std::uint64_t v = 2; v <= n; ++v) expect += table.lpf(v) >= 17;
  CHECK(s.size() == expect);
  const double density =
      static_cast<double>(s.size()) / static_cast<double>(n);
  // Product over primes below 17 of (1 - 1/q).
  const double product =
      (1.0 / 2) * (2.0 / 3) * (4.0 / 5) * (6.0 / 7) * (10.0 / 11) * (12.0 / 13);
  CHECK(std::fabs(density - product) <= 0.005);
}

TEST_CASE("candidate grids cover atoms and snapped round values") {
  const std::uint64_t n = 100000;
  const auto x = lpf_sequence(n);
  LimitPointParams params;
  const auto grid = candidate_grid(x, params);
  REQUIRE(!grid.empty());
  CHECK(grid.front() == 0.0);  // snapped outward from min = 1/lpf_max
  const auto has = [&](double v) {
    for (double g : grid)
      if (std::fabs(g - v) <= 1e-9) return true;
    return false;
  };
  CHECK(has(0.5));
  CHECK(has(1.0 / 3));
  CHECK(has(0.2));
  CHECK(has(1.0 / 7));

  // A constant sequence collapses to one candidate.
  const auto c = SequenceSource::constant(2.0, 100);
  CHECK(candidate_grid(c, params) == std::vector<double>{2.0});
}

TEST_CASE("lpf limit and cluster structure at desk scale") {
  const std::uint64_t n = 200000;
  const auto x = lpf_sequence(n);
  const auto spec = IdealSpec::alpha_density(0.0);
  const auto report = estimate_limit_points(x, spec, fine_params());

  // Each 1/p with a fat level set is a limit point with score ~ c_p / 2.
  const auto* at_half = report.find(0.5);
  REQUIRE(at_half != nullptr);
  CHECK(at_half->lambda_member);
  CHECK(std::fabs(at_half->lambda_score - 0.25) <= 0.02);
  CHECK(at_half->gamma_member);
  CHECK(std::fabs(at_half->gamma_score - 0.5) <= 0.02);

  const auto* at_third = report.find(1.0 / 3);
  REQUIRE(at_third != nullptr);
  CHECK(at_third->lambda_member);
  CHECK(std::fabs(at_third->lambda_score - 1.0 / 12) <= 0.02);

  const auto* at_fifth = report.find(0.2);
  REQUIRE(at_fifth != nullptr);
  CHECK(at_fifth->lambda_member);

  // Zero clusters but is not a limit point: the neighborhood norms decay and
  // the finest neighborhood is empty.
  const auto* at_zero = report.find(0.0);
  REQUIRE(at_zero != nullptr);
  CHECK_FALSE(at_zero->lambda_member);
  CHECK(at_zero->lambda_score == 0.0);
  CHECK(at_zero->gamma_member);
  CHECK(at_zero->gamma_score > 0.05);
  CHECK(at_zero->levels.back().empty);

  // A value the sequence never approaches scores nothing.
  const auto* nowhere = report.find(0.4, 0.02);
  REQUIRE(nowhere != nullptr);
  CHECK(nowhere->lambda_score == 0.0);
  CHECK_FALSE(nowhere->lambda_member);
  CHECK_FALSE(nowhere->gamma_member);
}

TEST_CASE("only the level atoms carry limit scores") {
  // Upper semicontinuity proxy: no grid point away from the 1/p atoms and 0
  // picks up a score above q.
  const std::uint64_t n = 100000;
  const auto x = lpf_sequence(n);
  const auto table = LpfTable::build(n);
  const auto report =
      estimate_limit_points(x, IdealSpec::alpha_density(0.0), fine_params());
  for (const auto& cand : report.candidates) {
    if (!cand.lambda_member) continue;
    // Every member must be an exact level value 1/p.
    const double inv = 1.0 / cand.ell;
    const auto p = static_cast<std::uint64_t>(std::llround(inv));
    CHECK(std::fabs(inv - static_cast<double>(p)) <= 1e-6);
    CHECK(testsupport::lpf_trial_division(p) == p);
  }
}

TEST_CASE("convergent and constant sequences") {
  const std::uint64_t n = 100000;
  const auto conv = SequenceSource::convergent(0.0, n);
  const auto spec = IdealSpec::alpha_density(0.0);
  const auto report = estimate_limit_points(conv, spec, fine_params(0.1));
  const auto lambda = report.lambda_points();
  REQUIRE(lambda.size() == 1);
  CHECK(std::fabs(lambda[0]) <= 1e-6);
  const auto gamma = report.gamma_points();
  REQUIRE(gamma.size() == 1);
  CHECK(std::fabs(gamma[0]) <= 1e-6);

  const auto c = SequenceSource::constant(1.5, n);
  const auto creport = estimate_limit_points(c, spec, fine_params(0.1));
  const auto clambda = creport.lambda_points();
  REQUIRE(clambda.size() == 1);
  CHECK(clambda[0] == 1.5);
  CHECK(creport.candidates.front().lambda_score == 0.5);  // norm of N
}

TEST_CASE("a larger threshold keeps only the evens level") {
  const std::uint64_t n = 200000;
  const auto x = lpf_sequence(n);
  const auto report =
      estimate_limit_points(x, IdealSpec::alpha_density(0.0), fine_params(0.2));
  const auto lambda = report.lambda_points();
  REQUIRE(lambda.size() == 1);
  CHECK(lambda[0] == 0.5);
}

TEST_CASE("threshold monotonicity") {
  const std::uint64_t n = 100000;
  const auto x = lpf_sequence(n);
  const auto report =
      estimate_limit_points(x, IdealSpec::alpha_density(0.0), fine_params());
  const auto loose = report.lambda_points_at(0.02);
  const auto tight = report.lambda_points_at(0.2);
  for (double p : tight)
    CHECK(std::find(loose.begin(), loose.end(), p) != loose.end());
}

TEST_CASE("lambda members cluster at matching thresholds") {
  const std::uint64_t n = 100000;
  const auto spec = IdealSpec::alpha_density(0.0);
  const auto battery = {
      lpf_sequence(n),
      SequenceSource::convergent(0.0, n),
      SequenceSource::alternating(0.0, 1.0, n),
  };
  for (const auto& x : battery) {
    const auto report = estimate_limit_points(x, spec, fine_params());
    for (const auto& cand : report.candidates) {
      if (!cand.lambda_member) continue;
      CHECK(cand.gamma_score >= cand.lambda_score - 0.02);
    }
  }
}

TEST_CASE("summable ideal scores") {
  const std::uint64_t n = 200000;
  const auto x = lpf_sequence(n);
  const auto spec = IdealSpec::summable(WeightFunction::reciprocal());
  const auto report = estimate_limit_points(x, spec, fine_params());
  // Harmonic tail mass of the evens level over (n/2, n] is log(2)/2.
  const auto* at_half = report.find(0.5);
  REQUIRE(at_half != nullptr);
  CHECK(std::fabs(at_half->lambda_score - std::log(2.0) / 2) <= 0.02);
  CHECK(at_half->lambda_member);
  const auto* at_zero = report.find(0.0);
  REQUIRE(at_zero != nullptr);
  CHECK_FALSE(at_zero->lambda_member);
}

TEST_CASE("estimator parameter validation") {
  const auto x = SequenceSource::constant(0.0, 100);
  const auto spec = IdealSpec::alpha_density(0.0);
  LimitPointParams params;
  params.q = 0.0;
  CHECK_THROWS_AS(estimate_limit_points(x, spec, params), Error);
  params = LimitPointParams{};
  params.eps_schedule = {};
  CHECK_THROWS_AS(estimate_limit_points(x, spec, params), Error);
  params = LimitPointParams{};
  params.eps_schedule = {1e-2, 1e-1};
  CHECK_THROWS_AS(estimate_limit_points(x, spec, params), Error);
}

// --- Diagonal construction ---------------------------------------------------

TEST_CASE("diagonal construction on the constant-pair fixture") {
  const std::uint64_t n = 1 << 18;
  const auto x = lpf_sequence(n);
  const auto blocks = doubling_blocks(n);
  const auto evens = TruncatedSet::evens(n);

  // Enough stages for the cuts to march past the tail-half blocks.
  std::vector<DiagonalInput> pairs(20, DiagonalInput{0.5, evens});
  DiagonalParams params;
  params.q = 0.2;
  const auto r = diagonal_construct(x, pairs, IdealSpec::alpha_density(0.0),
                                    params, &blocks);
  CHECK(r.complete);
  CHECK(r.mass_ok);
  CHECK(r.norm_value >= 0.18);
  CHECK(r.convergence_ok);
  REQUIRE(r.segments.size() == pairs.size());
  std::uint64_t prev = 0;
  for (const auto& seg : r.segments) {
    CHECK(seg.theta > prev);
    CHECK(seg.mass >= seg.required);
    CHECK(seg.max_deviation == 0.0);  // x is exactly 1/2 on the evens
    prev = seg.theta;
  }
  // The result is the evens cut to (0, theta_last].
  CHECK(r.set.members().back() <= r.segments.back().theta);
  for (std::uint64_t v : r.set.members()) CHECK(v % 2 == 0);
}

TEST_CASE("diagonal construction fails once the level norms decay") {
  const std::uint64_t n = 1 << 20;
  const auto table = LpfTable::build(n);
  const auto x = SequenceSource::lpf(n, table);
  const auto blocks = doubling_blocks(n);

  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<DiagonalInput> pairs;
  for (std::uint64_t p : primes) {
    std::vector<std::uint64_t> members;
    for (std::uint64_t v = 2; v <= n; ++v)
      if (table.lpf(v) == p) members.push_back(v);
    pairs.push_back({1.0 / static_cast<double>(p),
                     TruncatedSet(n, std::move(members))});
  }
  DiagonalParams params;
  params.q = 0.2;
  const auto r = diagonal_construct(x, pairs, IdealSpec::alpha_density(0.0),
                                    params, &blocks);
  CHECK_FALSE(r.complete);
  // Stages 1..5 have requirements <= 0, and stage 6 still squeaks through on
  // a single early member (13 alone fills 1/16 of its block, and small
  // finite sets near the front do carry submeasure mass). Stage 7 wants
  // 0.2 - 1/7 ~ 0.057, while the 17-level's block ratios cap near 0.01.
  CHECK(r.failed_stage == 7);
  CHECK(r.segments.size() == 6);
}

TEST_CASE("diagonal construction in unit-mass mode") {
  const std::uint64_t n = 1000000;
  const auto x = lpf_sequence(n);
  const auto evens = TruncatedSet::evens(n);
  std::vector<DiagonalInput> pairs(6, DiagonalInput{0.5, evens});
  DiagonalParams params;
  params.criterion = MassCriterion::UnitSummable;
  const auto spec = IdealSpec::summable(WeightFunction::reciprocal());
  const auto r = diagonal_construct(x, pairs, spec, params);
  CHECK(r.complete);
  CHECK(r.mass_ok);
  REQUIRE(r.segments.size() == 6);
  for (const auto& seg : r.segments) {
    CHECK(seg.mass >= 1.0);
    // Harmonic oracle over the segment.
    double mass = 0;
    for (std::uint64_t v = seg.theta_prev + 2 - seg.theta_prev % 2;
         v <= seg.theta; v += 2)
      mass += 1.0 / static_cast<double>(v);
    CHECK(seg.mass == doctest::Approx(mass).epsilon(1e-9));
  }
  CHECK(r.convergence_ok);
}

TEST_CASE("diagonal construction flags horizon exhaustion") {
  const std::uint64_t n = 2000;
  const auto x = lpf_sequence(n);
  const auto evens = TruncatedSet::evens(n);
  std::vector<DiagonalInput> pairs(12, DiagonalInput{0.5, evens});
  DiagonalParams params;
  params.criterion = MassCriterion::UnitSummable;
  const auto spec = IdealSpec::summable(WeightFunction::reciprocal());
  const auto r = diagonal_construct(x, pairs, spec, params);
  CHECK_FALSE(r.complete);
  CHECK(r.failed_stage >= 1);
  CHECK(r.segments.size() == r.failed_stage - 1);
}

TEST_CASE("diagonal construction rejects non-Cauchy inputs") {
  const std::uint64_t n = 1 << 14;
  const auto x = lpf_sequence(n);
  const auto blocks = doubling_blocks(n);
  const auto evens = TruncatedSet::evens(n);
  std::vector<DiagonalInput> pairs;
  for (int m = 0; m < 8; ++m)
    pairs.push_back({m % 2 == 0 ? 0.0 : 1.0, evens});
  DiagonalParams params;
  CHECK_THROWS_WITH_AS(diagonal_construct(x, pairs,
                                          IdealSpec::alpha_density(0.0),
                                          params, &blocks),
                       doctest::Contains("Cauchy"), Error);
}

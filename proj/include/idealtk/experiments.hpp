#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "idealtk/ideal_spec.hpp"
#include "idealtk/limit_points.hpp"
#include "idealtk/sequences.hpp"

namespace idealtk {

// Hausdorff distance between finite point sets on the line. Conventions:
// d(empty, empty) = 0, d(empty, nonempty) = +inf.
double hausdorff_distance(std::span<const double> a, std::span<const double> b);

bool sets_agree(std::span<const double> a, std::span<const double> b,
                double delta);

struct MetricParams {
  double delta = 0.01;       // point-matching tolerance
  double score_scale = 0.4;  // threshold rescaling for subsequence scores
};

struct SampleRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double normality_deviation = 0;
  double selected_density = 0;   // |selected| / N
  bool verdict = false;          // agreement (or lambda == gamma) verdict
  bool estimator_ok = true;      // false when the per-sample estimate threw
  bool containment_ok = true;    // subsequence points stayed inside the
                                 // original set (the inclusion direction)
  std::size_t lambda_count = 0;  // size of the sample's lambda point set
  std::size_t gamma_count = 0;   // zero-one experiment only
};

struct ExperimentResult {
  std::size_t sample_count = 0;
  std::vector<SampleRecord> samples;     // ordered by index
  double agreement_fraction = 0;         // (# verdict true) / M, exact
  std::size_t containment_violations = 0;
  // Base-sequence verdict for the zero-one experiment: whether the original
  // x has lambda == gamma at matching thresholds.
  bool base_lambda_equals_gamma = false;
  std::vector<double> base_lambda_points;
  std::vector<double> base_gamma_points;
};

struct ExperimentParams {
  std::size_t samples = 100;       // M
  std::uint64_t base_seed = 1;     // sample i uses seed base_seed + i
  unsigned threads = 1;
  MetricParams metric;
  LimitPointParams limit_params;
};

// Monte Carlo stand-in for the almost-sure statement that random
// subsequences keep the same limit points. Per sample: the limit-point sets
// of x|omega are compared against those of x with hysteresis bands: every
// original point scoring >= q must be matched (within delta) by a
// subsequence candidate scoring >= scale*q, and every subsequence point
// scoring >= q/scale must be matched by an original candidate scoring
// >= scale*q. The bands keep borderline candidates from flickering across a
// single threshold under sampling noise.
ExperimentResult lambda_agreement_experiment(const SequenceSource& x,
                                             const IdealSpec& spec,
                                             const ExperimentParams& params);

// Monte Carlo stand-in for the zero-one law: per sample, checks whether the
// subsequence's limit-point set equals its cluster-point set (symmetric
// Hausdorff at matching thresholds). The fraction should sit near 0 or 1,
// and near 1 exactly when x itself has lambda == gamma.
ExperimentResult zero_one_experiment(const SequenceSource& x,
                                     const IdealSpec& spec,
                                     const ExperimentParams& params);

}  // namespace idealtk

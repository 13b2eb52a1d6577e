#pragma once

#include <cstdint>
#include <vector>

#include "idealtk/blocks.hpp"
#include "idealtk/ideal_spec.hpp"
#include "idealtk/sequences.hpp"
#include "idealtk/truncated_set.hpp"

namespace idealtk {

// {n <= N : |x_n - ell| <= eps}, exact.
TruncatedSet neighborhood_index_set(const SequenceSource& x, double ell,
                                    double eps);

struct LimitPointParams {
  double q = 0.02;              // limit-point threshold on the norm score
  double gamma_threshold = 0;   // 0 = auto: q * spec.gamma_threshold_factor()
  std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4};
  std::size_t grid_points = 21;            // uniform candidate grid size
  double multiplicity_floor_frac = 5e-4;   // observed-value candidate floor
  std::uint64_t censor_depth = 16;         // min member > N/depth => censored
  double block_slack = 0.05;               // block construction (non-constant f)
  std::vector<double> explicit_grid;       // when nonempty, used verbatim
};

// One eps level of a candidate's refinement.
struct EpsLevel {
  double eps = 0;
  double lambda_value = 0;   // norm-type score of the neighborhood set
  double gamma_value = 0;    // spec measure of the neighborhood set
  std::uint64_t count = 0;
  std::uint64_t min_member = 0;  // 0 when empty
  bool empty = true;
  // Nonempty but with no member before N/censor_depth: the horizon sees too
  // little of the set's tail to trust the estimate. Censored levels are
  // skipped by the limit score and stop the cluster refinement.
  bool censored = false;
};

struct CandidateReport {
  double ell = 0;
  double lambda_score = 0;      // inf of lambda_value over conclusive levels
  bool lambda_member = false;   // lambda_score >= q
  bool lambda_unresolved = false;  // every level was censored
  // True when the finest level contributed to the score. When false, the
  // refinement stopped behind censored levels and the score is only a
  // coarse-scale upper bound.
  bool fine_resolved = false;
  double gamma_score = 0;       // gamma_value at the finest level examined
  double gamma_eps = 0;
  bool gamma_member = false;
  std::vector<EpsLevel> levels;
};

struct LimitPointReport {
  std::vector<CandidateReport> candidates;  // sorted by ell
  double q = 0;
  double gamma_threshold = 0;

  std::vector<double> lambda_points() const;
  std::vector<double> gamma_points() const;
  // Points whose lambda score clears the given threshold (for rescaled
  // comparisons). With resolved_only, candidates whose refinement never
  // reached the finest scale are skipped: their scores are upper bounds,
  // not evidence.
  std::vector<double> lambda_points_at(double threshold,
                                       bool resolved_only = false) const;
  const CandidateReport* find(double ell, double tol = 1e-9) const;
};

// Candidate generator: distinct observed values with multiplicity above the
// floor, plus a uniform grid over the value range with endpoints snapped
// outward to multiples of the grid step (so e.g. 0 enters the grid when the
// values approach it). Sorted, deduplicated.
std::vector<double> candidate_grid(const SequenceSource& x,
                                   const LimitPointParams& params);

// Scores every candidate on both sides at once:
//   limit side: score = inf over the eps schedule of the norm of the
//     eps-neighborhood index set (empty sets are conclusive and score 0;
//     censored sets are skipped);
//   cluster side: score = spec measure at the finest eps the horizon
//     resolves (refinement stops at the first censored level).
// Blocks may be supplied to reuse a construction; otherwise they are built
// from the spec weight (density families only).
LimitPointReport estimate_limit_points(const SequenceSource& x,
                                       const IdealSpec& spec,
                                       const LimitPointParams& params = {},
                                       const BlockSequence* blocks = nullptr);

// --- Diagonal construction ---------------------------------------------------

enum class MassCriterion { Norm, UnitSummable };

struct DiagonalInput {
  double ell;        // ell_m
  TruncatedSet set;  // A_m
};

struct DiagonalSegment {
  std::size_t stage = 0;          // m, 1-based
  double ell = 0;
  std::uint64_t theta_prev = 0;   // segment is (theta_prev, theta]
  std::uint64_t theta = 0;
  double mass = 0;                // achieved segment mass
  double required = 0;            // max(0, q - 1/m) or 1
  std::size_t member_count = 0;
  double max_deviation = 0;       // max |x_n - ell_limit| over the segment
  double envelope = 0;            // 1/m + |ell_m - ell_limit|
};

struct DiagonalResult {
  TruncatedSet set;               // union of completed segments
  std::vector<DiagonalSegment> segments;
  bool complete = false;
  std::size_t failed_stage = 0;   // 0 when complete
  double ell_limit = 0;           // last ell_m
  double norm_value = 0;          // norm of the result (norm mode)
  bool mass_ok = false;           // (a): norm >= q - slack, or all masses >= 1
  bool convergence_ok = false;    // (b): segment tails inside their envelopes
};

struct DiagonalParams {
  double q = 0.2;
  MassCriterion criterion = MassCriterion::Norm;
  double slack = 0.02;
  double cauchy_tol = 0.25;  // tail spread allowed in (ell_m)
};

// Stitches A = union_m A_m cut to (theta_{m-1}, theta_m], choosing each
// theta_m as the smallest integer past theta_{m-1} and past
// max(A_{m+1} \ B_{m+1}) whose segment meets the stage's mass criterion.
// B_m is the 1/m-neighborhood index set of ell_m inside A_m. Norm mode
// requires blocks; summable mode takes the mass weight from the spec.
DiagonalResult diagonal_construct(const SequenceSource& x,
                                  const std::vector<DiagonalInput>& pairs,
                                  const IdealSpec& spec,
                                  const DiagonalParams& params,
                                  const BlockSequence* blocks = nullptr);

}  // namespace idealtk

#pragma once
#include <functional>
#include <string>
#include <vector>

#include "gaplab/linalg.hpp"
#include "gaplab/models.hpp"
#include "gaplab/rng.hpp"

namespace gaplab::detect {

// A sampler that produces one statistic value per call (one fresh observation).
using StatSampler = std::function<double(Rng&)>;

struct SeparationCutoffs {
    double strong = 0.1;
    double weak = 10.0;
};

struct SeparationReport {
    double mean_p = 0.0, mean_q = 0.0;
    double var_p = 0.0, var_q = 0.0;
    double ratio = 0.0;  // sqrt(max var) / |mean gap|
    std::string classification;  // "strong" | "weak" | "none"
    std::string confidence_note;  // Monte Carlo resolution of the gap
    std::size_t mc_budget = 0;
};

SeparationReport separation_ratio(const StatSampler& p_sampler, const StatSampler& q_sampler,
                                  std::size_t mc_budget, Rng& rng,
                                  SeparationCutoffs cutoffs = {});

struct TestOutcome {
    double type_i_error = 0.0;   // Q classified as P
    double type_ii_error = 0.0;  // P classified as Q
    double threshold = 0.0;
};

// Decide "P" when the statistic exceeds the threshold; errors estimated on
// fresh sample sets.
TestOutcome threshold_test(const StatSampler& p_sampler, const StatSampler& q_sampler,
                           double threshold, std::size_t mc_budget, Rng& rng);

double midpoint_threshold(const StatSampler& p_sampler, const StatSampler& q_sampler,
                          std::size_t calibration_budget, Rng& rng);

using OverlapSampler = std::function<double(Rng&)>;

struct LogEstimate {
    double log_value = 0.0;
    double stderr_log = 0.0;  // delta-method standard error of log_value
    std::size_t mc_budget = 0;
};

// log E exp((n lambda^2 / 2) s^2) over overlap samples s, in log space.
LogEstimate lr_second_moment(const OverlapSampler& overlaps, double lambda, std::size_t n,
                             std::size_t mc_budget, Rng& rng);

// Exact evaluation for the normalized Rademacher prior (s = (n - 2k)/n with
// k ~ Binomial(n, 1/2)).
double lr_second_moment_rademacher_exact_log(double lambda, std::size_t n);

double subgaussian_tail_bound(double sigma2, double a);
double empirical_tail(const StatSampler& sampler, double a, std::size_t mc_budget, Rng& rng);

bool spectral_test(const SymMatrix& y, double threshold);

// Squared normalized inner product between the hidden spike and the top
// eigenvector of the observation.
double bbp_overlap(const models::ModelInstance& instance);

// Exact sum over all triangles of (Y_ij - q)(Y_ik - q)(Y_jk - q).
double signed_triangle_stat(const Graph& g, double q);
// O(n^3) matrix-product formulation; must agree with the exact sum.
double signed_triangle_stat_trace(const Graph& g, double q);

struct TriangleMoments {
    double mean = 0.0;           // (1/6) M s^3 k^3
    double variance_bound = 0.0;
};

TriangleMoments triangle_moment_formulas(std::size_t n, double k, double q, double s, int m);

}  // namespace gaplab::detect

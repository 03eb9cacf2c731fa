#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/rng.hpp"

namespace gaplab::lowdeg {

// Stream of i.i.d. overlap samples s = <u, v> for independent prior draws.
using OverlapSampler = std::function<double(Rng&)>;

// sum_{d=0}^{D} x^d / d! with the stable term recurrence.
double truncated_exp(double x, int degree);

struct McEstimate {
    double value = 0.0;
    double stderr_mean = 0.0;
    std::size_t mc_budget = 0;
};

// LD(D, lambda) = E exp^{<=D}(lambda^2 <u,v>).
McEstimate ld_value(const OverlapSampler& overlaps, double lambda, int degree,
                    std::size_t mc_budget, Rng& rng);

struct DeltaEstimate {
    double delta = 0.0;
    std::size_t rank = 0;        // order statistic used
    std::size_t mc_budget = 0;
    // The sup over exact tail probabilities is replaced by the
    // ceil(m e^{-D})-th largest |s|; biased at finite m.
    std::string estimator_note;
};

// delta(D): empirical e^{-D} overlap quantile. Requires mc_budget >= 10 e^D.
DeltaEstimate overlap_quantile_delta(const OverlapSampler& overlaps, double deviations,
                                     std::size_t mc_budget, Rng& rng);

struct FpEstimate {
    double value = 0.0;
    double stderr_mean = 0.0;
    DeltaEstimate delta;
    std::size_t mc_budget = 0;
};

// FP(D, lambda) = E[ 1_{|s| <= delta(D)} exp(lambda^2 s) ] on a fresh sample,
// with delta estimated from the same sample set.
FpEstimate fp_value(const OverlapSampler& overlaps, double lambda, double deviations,
                    std::size_t mc_budget, Rng& rng);

// D-tilde of the LD <= FP + e^{-D} sandwich: D (2 + log(1 + lambda^2 M)).
double fp_sandwich_degree(int degree, double lambda, double overlap_bound_m);

// Exact LD / delta / FP for an overlap law with finite support.
struct DiscreteOverlapLaw {
    std::vector<double> values;
    std::vector<double> probs;
};

// Overlap law of u, v uniform on {+-1/sqrt(n)}^n (binomial).
DiscreteOverlapLaw rademacher_overlap_law(std::size_t n);

double ld_value_exact(const DiscreteOverlapLaw& law, double lambda, int degree);
double overlap_quantile_delta_exact(const DiscreteOverlapLaw& law, double deviations);
double fp_value_exact(const DiscreteOverlapLaw& law, double lambda, double deviations);
double fp_value_exact_log(const DiscreteOverlapLaw& law, double lambda, double deviations);

// Low-overlap likelihood mass of the boolean mixture with u, v uniform on
// {+-1}^n: the kernel prod_i (1 + u_i v_i) vanishes unless u = v, so the
// value is exactly 0 whenever delta < n.
double boolean_disjoint_lo(std::size_t n, double delta);

// --- Fourier LDLR for small binary models ------------------------------------

// N-coordinate binary model: under the null, Y_i takes b_i w.p. p_i and
// a_i otherwise, with a_i b_i = -1 so E Y_i = 0 and E Y_i^2 = 1. The planted
// prior is a finite mixture of mean vectors X with X_i = E[Y_i | X].
struct BinaryModel {
    std::vector<double> null_prob_b;           // p_i
    std::vector<std::vector<double>> planted_means;  // atoms of the prior on X
    std::vector<double> planted_probs;

    std::size_t coords() const { return null_prob_b.size(); }
    double a(std::size_t i) const;
    double b(std::size_t i) const;
};

// ||L^{<=D}||^2 = sum_{|S| <= D} (E_P chi_S(Y))^2 by subset enumeration.
double fourier_ldlr_binary(const BinaryModel& model, int degree);

// E_Q[chi_S chi_T] over all subsets with |S|,|T| <= degree; returns the largest
// deviation from the identity (exact enumeration, N <= 20).
double fourier_orthonormality_residual(const BinaryModel& model, int degree);

// Coefficient table c_S = E_P chi_S(Y) for |S| <= degree, as (subset mask, value).
std::vector<std::pair<std::uint64_t, double>> fourier_coefficients(const BinaryModel& model,
                                                                   int degree);

// The SBM with self-loops recast as a binary model (small n).
BinaryModel sbm_as_binary_model(std::size_t n, int k, double d, double eta);

// --- SBM low-degree bound -----------------------------------------------------

// MC estimate of sum_{d<=D} (1/d!) E[((eta^2/2) p/(1-p) <U U^T, U' U'^T>)^d]
// over independent uniform label draws, p = d_avg/n.
McEstimate sbm_ldlr_bound(std::size_t n, int k, double d_avg, double eta, int degree,
                          std::size_t mc_budget, Rng& rng);

// Exact evaluation for k = 2: <U U^T, U' U'^T> = (sum_i s_i t_i)^2 for spin
// labels, so the bound is a binomial sum.
double sbm_ldlr_bound_two_communities_exact(std::size_t n, double d_avg, double eta, int degree);

// --- separation consistency ----------------------------------------------------

struct SeparationCandidate {
    std::string name;
    double separation_ratio = 0.0;  // empirical fluctuation / gap
};

struct SeparationImplicationReport {
    double adv_value = 0.0;
    bool adv_bounded = false;  // Adv close to 1 (no strong separation possible)
    struct Entry {
        std::string name;
        double ratio;
        bool strongly_separates;
        bool consistent;
    };
    std::vector<Entry> entries;
};

// Degree-D advantage O(1) forbids strong separation by degree-D statistics:
// flags any candidate that strongly separates while the advantage is ~1.
SeparationImplicationReport separation_implication_check(
    double adv_value, const std::vector<SeparationCandidate>& candidates,
    double strong_cutoff = 0.1, double adv_tolerance = 0.5);

}  // namespace gaplab::lowdeg

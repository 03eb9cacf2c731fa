#pragma once
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/multigraph.hpp"

namespace gaplab::lowdeg {

// Exact joint moments of (x, X) for a small declared model, indexed by
// multigraphs over the observation coordinates.
struct MomentOracle {
    std::function<double(const Multigraph&)> moment_x;        // E[x X^alpha]
    std::function<double(const Multigraph&)> moment_planted;  // E_P[X^alpha]
};

// Closed forms for the planted submatrix model: E X^g = lambda^{|g|} rho^{|V(g)|},
// E x X^g = lambda^{|g|} rho^{|V(g) u {0}|} with x = v_0.
MomentOracle planted_submatrix_oracle(double lambda, double rho);

// Enumeration over v in {0,1}^n; exact cross-check of the closed forms.
MomentOracle planted_submatrix_enumeration_oracle(std::size_t n, double lambda, double rho);

class KappaTable {
public:
    explicit KappaTable(MomentOracle oracle) : oracle_(std::move(oracle)) {}
    // kappa_alpha = E[x X^alpha] - sum_{beta < alpha} kappa_beta C(alpha,beta) E[X^{alpha-beta}]
    double kappa(const Multigraph& alpha);

private:
    MomentOracle oracle_;
    std::map<std::string, double> memo_;
};

// |kappa_alpha| <= (|alpha|+1)^{|alpha|} lambda^{|alpha|} rho^{|V(alpha)|}
double kappa_magnitude_bound(const Multigraph& alpha, double lambda, double rho);

struct CorrBoundLedger {
    double bound = 0.0;    // upper bound on Corr^2_{<=D}
    double mmse_ld = 0.0;  // E[x^2] - bound (lower bound certificate: MMSE >= rho - bound)
    struct Term {
        int h;
        double log_value;
    };
    std::vector<Term> terms;
};

// rho^2 sum_{h=0}^{D} [D^2 (D+1)^2 lambda^2]^h sum_{d=h}^{D} [D (D+1)^2 lambda^2 rho^2 n]^{d-h},
// evaluated in log space with tiny terms truncated.
CorrBoundLedger corr_ld_bound(double lambda, double rho, double n, int degree);

// Exact Corr^2_{<=D} for a small planted submatrix instance by least squares
// over the degree-D Hermite subspace under the planted measure. Returns
// nothing when the Gram matrix is too ill-conditioned to trust.
struct ExactCorrResult {
    double corr_sq = 0.0;
    double condition = 0.0;
};
std::optional<ExactCorrResult> exact_corr_small_instance(std::size_t n, double lambda, double rho,
                                                         int degree,
                                                         double max_condition = 1e10);

// --- testing between two planted models ----------------------------------------

struct PairMomentOracle {
    std::function<double(const MultiIndex&)> moment_p;  // E_P[X^alpha]
    std::function<double(const MultiIndex&)> moment_q;  // E_Q[X^alpha]
};

// Finite-atom signal prior over N coordinates.
struct DiscreteSignalPrior {
    std::vector<std::vector<double>> atoms;
    std::vector<double> probs;
};
PairMomentOracle discrete_pair_oracle(const DiscreteSignalPrior& p, const DiscreteSignalPrior& q);

// Binary-to-Gaussian signal normalization (X - tau0) / sqrt(tau0 (tau1 - tau0)).
DiscreteSignalPrior shift_normalize_binary(DiscreteSignalPrior prior, double tau0, double tau1);

class RAlphaTable {
public:
    explicit RAlphaTable(PairMomentOracle oracle) : oracle_(std::move(oracle)) {}
    // r_alpha = E_P[X^alpha] - sum_{beta < alpha} r_beta C(alpha,beta) E_Q[X^{alpha-beta}]
    double r(const MultiIndex& alpha);

private:
    PairMomentOracle oracle_;
    std::map<std::string, double> memo_;
};

// Adv_{<=D} bound for the binary observation model:
// sqrt( sum_{alpha in {0,1}^N, |alpha| <= D} r_alpha^2 / (tau0 (1 - tau1))^{|alpha|} ).
double adv_bound_binary(RAlphaTable& table, std::size_t coords, int degree, double tau0,
                        double tau1);

// Adv_{<=D} bound for the additive Gaussian model:
// sqrt( sum_{alpha in N^N, |alpha| <= D} r_alpha^2 / alpha! ).
double adv_bound_gaussian(RAlphaTable& table, std::size_t coords, int degree);

// Community-counting priors (labels in [M] w.p. k/(nM), star otherwise):
// Gaussian version X_ij = lambda M 1[sigma_i = sigma_j != star], i <= j.
DiscreteSignalPrior community_gaussian_prior(std::size_t n, double k, double lambda, int m);
// Binary version X_ij = q + s M 1[sigma_i = sigma_j != star] on off-diagonal pairs.
DiscreteSignalPrior community_binary_prior(std::size_t n, double k, double q, double s, int m);

}  // namespace gaplab::lowdeg

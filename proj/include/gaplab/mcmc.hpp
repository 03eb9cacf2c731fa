#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/freeenergy.hpp"
#include "gaplab/linalg.hpp"
#include "gaplab/lowdeg.hpp"
#include "gaplab/rng.hpp"

namespace gaplab::mcmc {

// State space of k'-sparse 0/1 vectors with Hamming-2 (swap) neighbors.
struct SparseSlice {
    std::size_t n = 0;
    std::size_t k = 0;  // k'
    std::size_t degree() const { return k * (n - k); }  // d-regular swap graph
    std::size_t state_count() const;                    // C(n, k')
    // enumerate supports in lexicographic order
    void for_each_state(const std::function<void(const std::vector<std::uint32_t>&)>& fn) const;
};

using EnergyFn = std::function<double(const std::vector<std::uint32_t>&)>;

// Exact Gibbs table over the slice: probs proportional to exp(-beta H).
freeenergy::GibbsTable gibbs_exact(const SparseSlice& space, const EnergyFn& energy, double beta,
                                   std::size_t max_states = 1000000);

struct ChainState {
    std::vector<std::uint32_t> support;  // sorted
    double energy = 0.0;
    std::size_t steps = 0;
};

// One Metropolis proposal on the swap graph; acceptance uses only the energy
// difference exp(-beta (H' - H)).
void metropolis_step(ChainState& state, const SparseSlice& space, const EnergyFn& energy,
                     double beta, Rng& rng);

// max |pi(x) P(x,y) - pi(y) P(y,x)| for an explicit transition matrix.
double detailed_balance_residual(const std::vector<std::vector<double>>& transition,
                                 const std::vector<double>& stationary);

// Explicit Metropolis matrix on the slice for a given energy and beta.
std::vector<std::vector<double>> metropolis_matrix(const SparseSlice& space,
                                                   const EnergyFn& energy, double beta);

// --- free-energy wells ----------------------------------------------------------

struct WellReport {
    double depth = 0.0;        // D = log mu(A) - log mu(B)
    double log_mass_a = 0.0;
    double log_mass_b = 0.0;
    bool a_empty = false;
    bool b_empty = false;
    bool no_well = false;      // depth <= 0
};

// A = {0 <= <v,x> < l}, B = {l <= <v,x> <= 2l} on the slice; exact enumeration.
WellReport well_depth(const SymMatrix& y, const SparseIndicator& signal, double beta,
                      std::size_t level, std::size_t k_prime);

struct HittingTimeCurve {
    std::vector<std::size_t> times;       // checkpoints t
    std::vector<double> empirical;        // Pr{tau <= t}
    std::vector<double> bound;            // t exp(-D)
    double depth = 0.0;
    std::size_t replicas = 0;
};

// Chains start from mu_beta(.|A) (exact conditional of the table); tau is the
// first entry into B.
HittingTimeCurve hitting_time_experiment(const SymMatrix& y, const SparseIndicator& signal,
                                         double beta, std::size_t level, std::size_t k_prime,
                                         std::size_t t_max, std::size_t replicas,
                                         const std::vector<std::size_t>& checkpoints, Rng& rng);

// Greedy ascent of f = -H; ties broken toward the lowest neighbor index.
struct HillClimbResult {
    std::vector<std::uint32_t> optimum;
    double energy = 0.0;
    std::size_t steps = 0;
    std::vector<double> trajectory;  // energies visited, strictly decreasing
};
HillClimbResult hill_climb(const SparseSlice& space, const EnergyFn& energy,
                           std::vector<std::uint32_t> start);

// --- Franz-Parisi barrier on the scaled hypercube -------------------------------

struct BarrierExperiment {
    std::size_t dim = 0;        // N; states are {+-1/sqrt(N)}^N
    double lambda = 0.0;
    double beta = 0.0;
    double epsilon = 0.25;
    double deviations = 4.0;    // D
};

struct BarrierReport {
    double delta = 0.0;             // delta(D), exact binomial quantile
    double fp_log = 0.0;            // log FP(D + log 2, lambda-tilde)
    double lambda_tilde_sq = 0.0;
    double bound = 0.0;             // 2 (2 FP)^{1-2 eps} e^{-eps D}
    double violation_rate = 0.0;    // fraction of draws with ratio > bound
    double violation_allowance = 0.0;  // e^{-eps D} + 3 sigma
    std::size_t draws = 0;
    std::size_t b_empty_draws = 0;
};

// nu_beta(B)/nu_beta(A) over fresh Z draws versus the Franz-Parisi bound.
BarrierReport fp_barrier_pipeline(const BarrierExperiment& exp, std::size_t draws, Rng& rng);

// Gibbs measure at the Bayesian temperature beta = lambda equals the posterior;
// returns the max abs probability difference on an enumerated hypercube.
double bayesian_temperature_residual(std::size_t dim, double lambda, Rng& rng);

// --- local-chain hitting bound ---------------------------------------------------

// Finite transitive-symmetric state space on the unit sphere with a Delta-local
// chain: m points on a circle, single-step rotations.
struct LocalChainExperiment {
    std::size_t states = 1024;  // m (even)
    double lambda = 0.0;
    double beta = 1.0;
    double epsilon = 0.25;
    double deviations = 4.0;  // D
    std::size_t t_max = 100000;
};

struct LocalChainReport {
    double delta = 0.0;
    double step_size = 0.0;   // Delta of the chain
    double bound = 0.0;       // tau lower bound
    bool vacuous = false;     // bound < 1: check skipped
    double below_bound_rate = 0.0;
    double allowance = 0.0;   // e^{-eps D / 2} + 3 sigma
    std::size_t replicas = 0;
};

// Throws unless the chain is Delta-local with Delta <= eps * delta.
LocalChainReport local_chain_hitting_bound(const LocalChainExperiment& exp, std::size_t replicas,
                                           Rng& rng);

}  // namespace gaplab::mcmc

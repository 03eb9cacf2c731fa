#pragma once
#include <functional>
#include <string>
#include <vector>

#include "gaplab/rng.hpp"

namespace gaplab::freeenergy {

// Scalar Gaussian channel Y = sqrt(gamma) X + Z with X ~ P0, Z ~ N(0,1).
// P0 is one of: Rademacher, standard Gaussian, or the mean-zero unit-variance
// two-point prior with atom probabilities (p, 1-p).
class ScalarChannel {
public:
    static ScalarChannel rademacher();
    static ScalarChannel gaussian();
    static ScalarChannel two_point(double p);

    bool is_gaussian() const { return gaussian_; }
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& atom_probs() const { return probs_; }
    double second_moment() const;
    double mean() const;

    // psi(gamma) = E log int dP0(x) exp(sqrt(gamma) Z x + gamma x X - gamma x^2 / 2)
    double psi(double gamma) const;
    // psi'(gamma) = E[posterior_mean(Y)^2] / 2, evaluated by quadrature of the
    // analytic integrand (no finite differences)
    double psi_prime(double gamma) const;
    double mmse(double gamma) const;
    double posterior_mean(double y, double gamma) const;

    // MC estimate of psi(gamma) (oracle for the quadrature path)
    double psi_mc(double gamma, std::size_t mc_budget, Rng& rng) const;

    int quadrature_order() const { return quad_order_; }

private:
    ScalarChannel() = default;
    bool gaussian_ = false;
    std::vector<double> atoms_, probs_;
    int quad_order_ = 60;
};

// |d/dlambda psi - (E X^2 - MMSE)/2| with a central finite difference
// (one-sided at lambda = 0).
double immse_residual(const ScalarChannel& channel, double lambda, double h);

// Exhaustive Gibbs table over an enumerated state space.
struct GibbsTable {
    std::vector<double> log_weights;  // -beta H per state, or the Hamiltonian itself
    double log_partition = 0.0;
    std::vector<double> probs;

    static GibbsTable from_log_weights(std::vector<double> lw);
    double normalization_residual() const;  // |sum probs - 1|
};

// --- Nishimori checks on a small spiked Wigner model ---------------------------

struct NishimoriReport {
    // |E<x . X> - E||<x>||^2|; identically zero here because the +-x gauge
    // symmetry of the Rademacher posterior kills both sides draw by draw
    double discrepancy = 0.0;
    double stderr_disc = 0.0;
    // gauge-invariant replica form: E<(x1 . x2)^2> - E<(x1 . X)^2>
    double quad_discrepancy = 0.0;
    double quad_stderr = 0.0;
    // two-replica double enumeration vs the factorized second-moment route
    double factorization_residual = 0.0;
    std::size_t mc_budget = 0;
};

// Rademacher prior, posterior enumerated exactly per draw (n <= 12); the outer
// expectation over Y is Monte Carlo.
NishimoriReport nishimori_check(std::size_t n, double lambda, std::size_t mc_budget, Rng& rng);

// --- needle in a haystack -------------------------------------------------------

struct NeedleResult {
    double free_energy = 0.0;  // F_n(lambda)
    double stderr_mean = 0.0;
    std::size_t mc_budget = 0;
};

// F_n(lambda) = (1/n) E log[ 2^-n sum_sigma exp(sqrt(lambda n) Y_sigma - lambda n / 2) ],
// the 2^n-state model with X = e_{sigma_0}. Exact inner sum, MC over draws.
NeedleResult needle_free_energy(std::size_t n, double lambda, std::size_t mc_budget, Rng& rng);

// Finite-difference MMSE_n from the free energy: 1 - 2 dF_n/dlambda.
double needle_mmse(std::size_t n, double lambda, double h, std::size_t mc_budget, Rng& rng);

// --- replica-symmetric potential -----------------------------------------------

// F(lambda, q) = psi(lambda q) - lambda q^2 / 4
struct RsPotential {
    const ScalarChannel* channel;
    double lambda;
    double value(double q) const;
};

struct FixedPointResult {
    double q_star = 0.0;
    double potential = 0.0;          // F(lambda, q*)
    std::vector<double> fixed_points;  // all distinct converged points
    bool tie = false;                // multiple maximizers within tolerance
    bool converged = true;
};

// Damped iteration q <- (1-g) q + g 2 psi'(lambda q) from multiple starts on
// [0, E X^2]; returns the fixed point maximizing the potential.
FixedPointResult rs_fixed_point(const ScalarChannel& channel, double lambda, double tol = 1e-10,
                                double damping = 0.5, int starts = 16, int max_iter = 10000);

struct MmseCurvePoint {
    double lambda = 0.0;
    double q_star = 0.0;
    double mmse_limit = 0.0;  // (E X^2)^2 - q*^2
};

struct MmseCurve {
    std::vector<MmseCurvePoint> points;
    double dmse = 0.0;      // (E X^2)^2 - (E X)^4
    double lambda_c = 0.0;  // first grid crossing q* > (E X)^2, refined by bisection
    bool transition_found = false;
};

MmseCurve mmse_limit_curve(const ScalarChannel& channel, const std::vector<double>& lambda_grid,
                           double bisection_tol = 1e-4);

}  // namespace gaplab::freeenergy

#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gaplab/linalg.hpp"
#include "gaplab/rng.hpp"

namespace gaplab::ogp {

// --- number partitioning -----------------------------------------------------------

struct LandscapeScan {
    double energy_cut = 0.0;                 // 2^{-eps n}
    std::vector<std::uint64_t> solutions;    // sign masks with first spin fixed to +1
    std::vector<double> energies;
    // pairwise |<s,t>|/n values over solutions (sign classes)
    std::vector<double> overlaps;
    // pairs with overlap in [rho, (n-2)/n] for the query rho
    std::size_t forbidden_pairs(double rho, std::size_t n) const;
};

// Exhaustive enumeration over sign classes (sigma_1 = +1) with Gray-code
// updates of <sigma, X>.
LandscapeScan npp_exhaustive_scan(const std::vector<double>& x, double epsilon);

struct FirstMomentCertificate {
    double exponent = 0.0;  // (1/n) log2 E[N] upper bound
    bool certified = false; // exponent < 0
};

// 1 + h(ceil(n(1-rho)/2)/n) - 2 eps + log2(n)/(2n) + c/n with c = log2(2/pi).
FirstMomentCertificate npp_first_moment_exponent(std::size_t n, double epsilon, double rho);

// Smallest rho on a grid with a negative exponent; nullopt if none.
std::optional<double> npp_certified_rho(std::size_t n, double epsilon, double grid_step = 0.01);

struct GibbsPartitionRatio {
    double log_pi_i1 = 0.0;
    double log_pi_i2 = 0.0;
    double log_pi_i3 = 0.0;
    bool i2_empty = false;
    bool holds = false;  // min(pi(I1), pi(I3)) >= pi(I2)
};

// I1 = {-rho <= <s,s*>/n <= rho}, I2 = {rho <= <s,s*>/n <= (n-2)/n}, I3 = {s*};
// pi_beta over all 2^n spin states.
GibbsPartitionRatio npp_gibbs_partition_ratio(const std::vector<double>& x, double beta,
                                              double rho);

// --- ensemble interpolation ---------------------------------------------------------

// Y_tau = cos(tau) Y + sin(tau) Y'; endpoints returned bit-exactly.
Tensor interpolate(const Tensor& y, const Tensor& y_prime, double tau);

std::vector<double> path_energies(const std::vector<double>& x, const Tensor& y,
                                  const Tensor& y_prime, const std::vector<double>& tau_grid);

// --- low-degree polynomial stability --------------------------------------------------

// Random polynomial map R^d -> R^k in the normalized Hermite basis.
struct HermitePolynomial {
    std::size_t dim = 0;       // d
    std::size_t out_dim = 0;   // k
    int degree = 0;
    // per output component: list of (multi-index over dim, coefficient)
    std::vector<std::vector<std::pair<std::vector<int>, double>>> terms;

    std::vector<double> eval(const std::vector<double>& x) const;
    void scale(double factor);
};

HermitePolynomial random_hermite_polynomial(std::size_t dim, std::size_t out_dim, int degree,
                                            std::size_t n_terms, Rng& rng);
HermitePolynomial linear_isometry(std::size_t dim);

struct StabilityReport {
    double mean_discrepancy = 0.0;   // E ||f(X) - f(Y)||^2 after normalization
    double mean_bound = 0.0;         // 2 (1 - rho^D)
    double mean_stderr = 0.0;
    double tail_threshold = 0.0;     // 2 t (1 - rho^D) at t = (6e)^D
    double tail_empirical = 0.0;
    double tail_bound = 0.0;         // exp(-(D/3e) t^{1/D})
    double tail_stderr = 0.0;
    double normalization = 0.0;      // empirical E ||f||^2 before normalization
};

// Correlated pair Y = rho X + sqrt(1-rho^2) X'; empirical normalization pass
// makes E ||f||^2 = 1.
StabilityReport poly_stability_check(const HermitePolynomial& f, double rho,
                                     std::size_t mc_budget, Rng& rng);

// sqrt(n) f / ||f||; empty when f = 0.
std::optional<std::vector<double>> round_to_sphere(const std::vector<double>& f_value);

struct HypercontractivityReport {
    struct Point {
        double q;
        double moment;     // E ||f||^{2q}
        double bound;      // [3(q-1)]^{qD} (E ||f||^2)^q
        double stderr_mean;
        bool holds;
    };
    std::vector<Point> points;
    bool all_hold = true;
};

HypercontractivityReport hypercontractive_tail_check(const HermitePolynomial& f, int degree,
                                                     const std::vector<double>& q_grid,
                                                     std::size_t mc_budget, Rng& rng);

// --- ensemble-OGP event harness -------------------------------------------------------

struct EogpEventParams {
    double mu = 0.0;       // success level
    double nu1 = 0.0;      // low-overlap band edge
    double nu2 = 0.0;      // high-overlap band edge
    double gamma = 0.0;    // norm floor for the rounding
    std::size_t path_points = 8;  // L
};

struct EogpEventReport {
    bool event_realized_ogp = false;  // endpoint separation + no overlap in (nu1, nu2)
    bool event_success = false;       // f succeeds along the whole path
    bool event_stability = false;     // consecutive outputs close
    bool co_occurred = false;         // all three at once (must never happen)
};

// Instantiates the three mutually-inconsistent events on a shared draw of
// (Y, Y') for a degree-D polynomial optimizer of the order-p objective.
EogpEventReport eogp_event_harness(const HermitePolynomial& f, std::size_t n, std::size_t p,
                                   const EogpEventParams& params, Rng& rng);

}  // namespace gaplab::ogp

#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/linalg.hpp"
#include "gaplab/rng.hpp"

namespace gaplab::models {

// The two GOE conventions used across the problem families. Internally the
// normalized scale is canonical; unit_entry is its sqrt(n) multiple.
enum class GoeScale {
    unit_entry,  // off-diagonal N(0,1), diagonal N(0,2)
    normalized,  // off-diagonal N(0,1/n), diagonal N(0,2/n)
};

struct PriorSpec {
    enum class Kind {
        rademacher_normalized,  // x_i = +-1/sqrt(n)
        gaussian_scalar,        // x_i ~ N(0, 1/n)
        sparse_bernoulli,       // x_i ~ Bernoulli(rho), 0/1 entries
        bounded_row,            // rows of U in R^k from a finite mean-zero pi with ||Cov||=1
        community_labels,       // labels in [m] w.p. k/(n m), star otherwise
    };
    Kind kind = Kind::rademacher_normalized;
    double rho = 0.0;  // sparse_bernoulli
    int k = 0;         // bounded_row dimension / community count
    // bounded_row: atoms and probabilities of pi
    std::vector<std::vector<double>> atoms;
    std::vector<double> atom_probs;
};

PriorSpec rademacher_normalized_prior();
PriorSpec gaussian_scalar_prior();
PriorSpec sparse_bernoulli_prior(double rho);

// Enforces the per-kind invariants (bounded-row priors must be mean zero with
// unit covariance norm; Bernoulli rates in (0,1)); throws on violation.
void validate_prior(const PriorSpec& prior);

struct ModelParams {
    std::map<std::string, double> values;
    double get(const std::string& key) const;
    double get_or(const std::string& key, double fallback) const;
};

// A sampled observation together with its hidden truth and provenance.
// Observations are regenerable bit-exactly from (kind, params, seed, stream).
struct ModelInstance {
    std::string kind;
    ModelParams params;
    RngStream provenance;

    std::optional<SymMatrix> matrix;
    std::optional<Matrix> asym_matrix;
    std::optional<Tensor> tensor;
    std::optional<Graph> graph;

    std::vector<double> signal;   // spike / planted vector, model dependent
    std::vector<int> labels;      // community labels, -1 = star
};

// --- generators -------------------------------------------------------------

SymMatrix sample_goe(std::size_t n, GoeScale scale, Rng& rng);

// Y = lambda x x^T + W/sqrt(n) with W unit-entry GOE (equivalently a
// normalized-GOE noise term). symmetric=false gives the adjusted-SNR
// asymmetric variant Y = (lambda/sqrt(2)) x x^T + W_iid/sqrt(n).
ModelInstance sample_spiked_wigner(std::size_t n, double lambda, const PriorSpec& prior,
                                   bool symmetric, Rng& rng);

ModelInstance sample_sbm(std::size_t n, int k, double d, double eta, bool planted, Rng& rng);

ModelInstance sample_binary_community(std::size_t n, std::size_t k, double q, double s, int m,
                                      Rng& rng);

// Y = lambda v v^T + W, W unit-entry GOE; reduced_diagonal swaps the N(0,2)
// diagonal for N(0,1).
ModelInstance sample_planted_submatrix(std::size_t n, double lambda, double rho, Rng& rng,
                                       bool reduced_diagonal = false);

// Y = (lambda/k) x x^T + W, W normalized GOE, x uniform k-sparse 0/1.
ModelInstance sample_sparse_pca(std::size_t n, std::size_t k, double lambda, Rng& rng);

ModelInstance sample_pspin(std::size_t n, std::size_t p, Rng& rng);

// H_n(x; Y) = <Y, x^{otimes p}> / n^{(p+1)/2} for x on the sphere ||x|| = sqrt(n).
double pspin_energy(const std::vector<double>& x, const Tensor& y);

std::vector<double> sample_npp(std::size_t n, Rng& rng);
double npp_energy(const SpinVector& sigma, const std::vector<double>& x);
double npp_overlap(const SpinVector& sigma, const SpinVector& tau);

// W' = (c/n) x x^T + W with W normalized GOE, x uniform over {-1,+1}^n.
ModelInstance sample_quiet_planted_sk(std::size_t n, double c, Rng& rng);

// --- instance records -------------------------------------------------------

// Self-describing record {kind, params, seed, stream}; observations are
// regenerated, never stored.
std::string instance_record(const ModelInstance& inst);
ModelInstance regenerate(const std::string& record);

// Debug CSV of a dense observation.
std::string observation_csv(const ModelInstance& inst);

}  // namespace gaplab::models

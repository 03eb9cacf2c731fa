#pragma once
#include <string>
#include <vector>

#include "gaplab/linalg.hpp"
#include "gaplab/rng.hpp"

namespace gaplab::skcert {

struct BruteForceResult {
    double value = 0.0;  // (1/n) max_x x^T W x
    SpinVector argmax;   // up to global sign (first spin +1)
};

// Gray-code enumeration over sign classes, O(n) per flip.
BruteForceResult sk_bruteforce(const SymMatrix& w);

struct CertificateReport {
    std::string method;  // "abssum" | "spectral"
    double value = 0.0;  // certified upper bound on SK(W)
};

CertificateReport abssum_cert(const SymMatrix& w);
CertificateReport spectral_cert(const SymMatrix& w);

struct SearchResult {
    SpinVector x;        // sign(v_max)
    double value = 0.0;  // (1/n) x^T W x
};

SearchResult sign_rounding_search(const SymMatrix& w);

// 2 sqrt(2/pi)
double slepian_bound_constant();
// MC estimate of E max_v 2 <v, g> over v in {+-1/sqrt(n)}^n, g ~ N(0, I/n)
double slepian_mc_check(std::size_t n, std::size_t draws, Rng& rng);

struct QuietPlantingPoint {
    double c = 0.0;
    double mean_planted_value = 0.0;  // mean (1/n) x^T W' x (an SK lower bound)
    double auc = 0.0;                 // spectral score AUC between null and planted
};

std::vector<QuietPlantingPoint> quiet_planting_experiment(std::size_t n,
                                                          const std::vector<double>& c_grid,
                                                          std::size_t draws_per_class, Rng& rng);

// Semidefinite certificate sup_{X >= 0, X_ii = 1} Tr(WX): interface recorded,
// solver intentionally absent.
struct SdpCertificate {
    static constexpr const char* definition =
        "SDP(W) = sup { Tr(W X) : X PSD, X_ii = 1 for all i }";
};
CertificateReport sdp_cert(const SymMatrix& w);  // throws: not implemented

}  // namespace gaplab::skcert

#include "gaplab/skcert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "gaplab/models.hpp"
#include "gaplab/spectral.hpp"
#include "gaplab/stats.hpp"

namespace gaplab::skcert {

BruteForceResult sk_bruteforce(const SymMatrix& w) {
    const std::size_t n = w.n();
    if (n > 22) throw std::invalid_argument("sk_bruteforce: n must be <= 22");

    // x starts at all +1; s = W x maintained; flipping spin j:
    // x^T W x -> x^T W x - 4 x_j s_j + 4 W_jj, then s_i -= 2 x_j W_ij.
    std::vector<double> x(n, 1.0), s(n);
    w.matvec(x, s);
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) quad += x[i] * s[i];

    double best = quad;
    std::uint64_t best_gray = 0, gray = 0;
    const std::size_t classes = n == 1 ? 1 : (std::size_t(1) << (n - 1));
    for (std::size_t step = 0; step + 1 < classes; ++step) {
        const auto j = static_cast<std::size_t>(std::countr_zero(step + 1)) + 1;  // spin 0 fixed
        quad += -4.0 * x[j] * s[j] + 4.0 * w(j, j);
        const double two_xj = 2.0 * x[j];
        for (std::size_t i = 0; i < n; ++i) s[i] -= two_xj * w(i, j);
        x[j] = -x[j];
        gray ^= std::uint64_t(1) << j;
        if (quad > best) {
            best = quad;
            best_gray = gray;
        }
    }

    BruteForceResult r;
    r.argmax.s.resize(n);
    std::vector<double> xd(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.argmax.s[i] = static_cast<std::int8_t>((best_gray >> i) & 1 ? -1 : 1);
        xd[i] = r.argmax.s[i];
    }
    // recompute exactly: the incremental quad accumulates rounding over 2^{n-1} flips
    r.value = w.quad_form(xd) / static_cast<double>(n);
    return r;
}

CertificateReport abssum_cert(const SymMatrix& w) {
    double total = 0.0;
    for (double v : w.data()) total += std::abs(v);
    return {"abssum", total};
}

CertificateReport spectral_cert(const SymMatrix& w) {
    return {"spectral", spectral::top_eigenpair_checked(w).value};
}

SearchResult sign_rounding_search(const SymMatrix& w) {
    const auto top = spectral::top_eigenpair_checked(w);
    SearchResult r;
    r.x.s.resize(w.n());
    std::vector<double> xd(w.n());
    for (std::size_t i = 0; i < w.n(); ++i) {
        r.x.s[i] = static_cast<std::int8_t>(top.vector[i] >= 0.0 ? 1 : -1);
        xd[i] = r.x.s[i];
    }
    r.value = w.quad_form(xd) / static_cast<double>(w.n());
    return r;
}

double slepian_bound_constant() { return 2.0 * std::sqrt(2.0 / M_PI); }

double slepian_mc_check(std::size_t n, std::size_t draws, Rng& rng) {
    // max_v <v, g> over v in {+-1/sqrt(n)}^n is sum |g_i| / sqrt(n)
    RunningStat stat;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t d = 0; d < draws; ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::abs(rng.normal()) * scale;  // g_i ~ N(0,1/n)
        stat.add(2.0 * s * scale);
    }
    return stat.mean();
}

std::vector<QuietPlantingPoint> quiet_planting_experiment(std::size_t n,
                                                          const std::vector<double>& c_grid,
                                                          std::size_t draws_per_class, Rng& rng) {
    std::vector<QuietPlantingPoint> out;
    for (double c : c_grid) {
        QuietPlantingPoint pt;
        pt.c = c;
        std::vector<double> null_scores(draws_per_class), planted_scores(draws_per_class);
        RunningStat planted_value;
        for (std::size_t d = 0; d < draws_per_class; ++d) {
            const auto w = models::sample_goe(n, models::GoeScale::normalized, rng);
            null_scores[d] = spectral::top_eigenpair_checked(w, 1e-8).value;
        }
        for (std::size_t d = 0; d < draws_per_class; ++d) {
            const auto inst = models::sample_quiet_planted_sk(n, c, rng);
            planted_scores[d] = spectral::top_eigenpair_checked(*inst.matrix, 1e-8).value;
            planted_value.add(inst.matrix->quad_form(inst.signal) / static_cast<double>(n));
        }
        pt.mean_planted_value = planted_value.mean();
        // Mann-Whitney AUC of the spectral score
        std::sort(null_scores.begin(), null_scores.end());
        double wins = 0.0;
        for (double s : planted_scores) {
            const auto lo = std::lower_bound(null_scores.begin(), null_scores.end(), s);
            const auto hi = std::upper_bound(null_scores.begin(), null_scores.end(), s);
            wins += static_cast<double>(lo - null_scores.begin()) +
                    0.5 * static_cast<double>(hi - lo);
        }
        pt.auc = wins / (static_cast<double>(draws_per_class) * static_cast<double>(draws_per_class));
        out.push_back(pt);
    }
    return out;
}

CertificateReport sdp_cert(const SymMatrix&) {
    throw std::runtime_error(std::string("sdp_cert: not implemented; ") +
                             SdpCertificate::definition);
}

}  // namespace gaplab::skcert

#include "gaplab/ogp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaplab/hermite.hpp"
#include "gaplab/models.hpp"
#include "gaplab/stats.hpp"

namespace gaplab::ogp {

std::size_t LandscapeScan::forbidden_pairs(double rho, std::size_t n) const {
    const double hi = (static_cast<double>(n) - 2.0) / static_cast<double>(n);
    std::size_t count = 0;
    for (double o : overlaps)
        if (o >= rho && o <= hi) ++count;
    return count;
}

LandscapeScan npp_exhaustive_scan(const std::vector<double>& x, double epsilon) {
    const std::size_t n = x.size();
    if (n < 2 || n > 26) throw std::invalid_argument("npp_exhaustive_scan: need 2 <= n <= 26");
    LandscapeScan scan;
    scan.energy_cut = std::exp2(-epsilon * static_cast<double>(n));
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    // sigma_1 fixed to +1 (H(sigma) = H(-sigma)); Gray code over the rest.
    // Stored masks are in spin space: bit i set means spin i is -1, bit 0 clear.
    const std::size_t classes = std::size_t(1) << (n - 1);
    double dot = 0.0;
    for (double xi : x) dot += xi;  // all +1
    std::uint64_t gray = 0;
    for (std::size_t step = 0;; ++step) {
        if (std::abs(dot) / sqrt_n <= scan.energy_cut) {
            scan.solutions.push_back(gray);
            scan.energies.push_back(std::abs(dot) / sqrt_n);
        }
        if (step + 1 == classes) break;
        const auto flip = static_cast<std::size_t>(std::countr_zero(step + 1)) + 1;
        const std::uint64_t bit = std::uint64_t(1) << flip;
        gray ^= bit;
        dot += (gray & bit) ? -2.0 * x[flip] : 2.0 * x[flip];
    }
    if (scan.solutions.size() > 4000)
        throw std::runtime_error("npp_exhaustive_scan: memory cap exceeded for the overlap multiset");
    // pairwise overlaps over sign classes: |<s, t>| / n = |n - 2 d_H| / n
    for (std::size_t a = 0; a < scan.solutions.size(); ++a)
        for (std::size_t b = a + 1; b < scan.solutions.size(); ++b) {
            const auto dh = static_cast<double>(
                std::popcount(scan.solutions[a] ^ scan.solutions[b]));
            scan.overlaps.push_back(std::abs(static_cast<double>(n) - 2.0 * dh) /
                                    static_cast<double>(n));
        }
    return scan;
}

FirstMomentCertificate npp_first_moment_exponent(std::size_t n, double epsilon, double rho) {
    if (epsilon <= 0.5 || epsilon > 1.0)
        throw std::invalid_argument("npp_first_moment_exponent: eps must be in (1/2, 1]");
    const double hi = (static_cast<double>(n) - 2.0) / static_cast<double>(n);
    if (rho <= 0.0 || rho > hi)
        throw std::invalid_argument("npp_first_moment_exponent: rho out of (0, (n-2)/n]");
    const double nd = static_cast<double>(n);
    const double m = std::ceil(nd * (1.0 - rho) / 2.0 - 1e-9);
    FirstMomentCertificate cert;
    cert.exponent = 1.0 + binary_entropy(m / nd) - 2.0 * epsilon +
                    std::log2(nd) / (2.0 * nd) + std::log2(2.0 / M_PI) / nd;
    cert.certified = cert.exponent < 0.0;
    return cert;
}

std::optional<double> npp_certified_rho(std::size_t n, double epsilon, double grid_step) {
    const double hi = (static_cast<double>(n) - 2.0) / static_cast<double>(n);
    const auto steps = static_cast<std::size_t>(std::floor(hi / grid_step + 1e-9));
    for (std::size_t i = 1; i <= steps; ++i) {
        const double rho = std::min(static_cast<double>(i) * grid_step, hi);
        if (npp_first_moment_exponent(n, epsilon, rho).certified) return rho;
    }
    // the band endpoint itself is a valid grid point
    if (npp_first_moment_exponent(n, epsilon, hi).certified) return hi;
    return std::nullopt;
}

GibbsPartitionRatio npp_gibbs_partition_ratio(const std::vector<double>& x, double beta,
                                              double rho) {
    const std::size_t n = x.size();
    if (n > 24) throw std::invalid_argument("npp_gibbs_partition_ratio: n must be <= 24");
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    // locate sigma* by full Gray-code scan over sign classes
    const std::size_t classes = std::size_t(1) << (n - 1);
    double dot = 0.0;
    for (double xi : x) dot += xi;
    double best = std::abs(dot);
    std::uint64_t best_mask = 0, gray = 0;
    double running = dot;
    for (std::size_t step = 0; step + 1 < classes; ++step) {
        const auto flip = static_cast<std::size_t>(std::countr_zero(step + 1));
        const std::uint64_t bit = std::uint64_t(1) << flip;
        gray ^= bit;
        running += (gray & bit) ? -2.0 * x[flip + 1] : 2.0 * x[flip + 1];
        if (std::abs(running) < best) {
            best = std::abs(running);
            best_mask = gray;
        }
    }

    // pi_beta over all 2^n states; overlap with sigma* from Hamming distance
    const std::size_t states = std::size_t(1) << n;
    LogSumExp mass1, mass2, mass3, partition;
    bool i2_any = false;
    const std::uint64_t star_full = best_mask << 1;  // sigma_1 = +1 encoded as bit 0 clear
    gray = 0;
    running = dot;
    // full enumeration, signs encoded directly (bit set = spin -1)
    for (std::size_t mask = 0;; ++mask) {
        const double h = std::abs(running) / sqrt_n;
        const double lw = -beta * h;
        partition.add(lw);
        const auto dh = static_cast<double>(std::popcount(gray ^ star_full));
        const double overlap =
            (static_cast<double>(n) - 2.0 * dh) / static_cast<double>(n);
        const double hi = (static_cast<double>(n) - 2.0) / static_cast<double>(n);
        if (overlap >= -rho && overlap <= rho) mass1.add(lw);
        if (overlap >= rho && overlap <= hi) { mass2.add(lw); i2_any = true; }
        if (gray == star_full) mass3.add(lw);
        if (mask + 1 == states) break;
        const auto flip = static_cast<std::size_t>(std::countr_zero(mask + 1));
        const std::uint64_t bit = std::uint64_t(1) << flip;
        gray ^= bit;
        running += (gray & bit) ? -2.0 * x[flip] : 2.0 * x[flip];
    }

    GibbsPartitionRatio r;
    r.i2_empty = !i2_any;
    const double log_z = partition.value();
    r.log_pi_i1 = mass1.value() - log_z;
    r.log_pi_i2 = i2_any ? mass2.value() - log_z : -std::numeric_limits<double>::infinity();
    r.log_pi_i3 = mass3.value() - log_z;
    r.holds = r.i2_empty || std::min(r.log_pi_i1, r.log_pi_i3) >= r.log_pi_i2;
    return r;
}

Tensor interpolate(const Tensor& y, const Tensor& y_prime, double tau) {
    if (y.order() != y_prime.order() || y.n() != y_prime.n())
        throw std::invalid_argument("interpolate: shape mismatch");
    if (tau == 0.0) return y;
    if (tau == M_PI_2) return y_prime;
    const double c = std::cos(tau), s = std::sin(tau);
    Tensor out(y.order(), y.n());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = c * y[i] + s * y_prime[i];
    return out;
}

std::vector<double> path_energies(const std::vector<double>& x, const Tensor& y,
                                  const Tensor& y_prime, const std::vector<double>& tau_grid) {
    std::vector<double> out;
    out.reserve(tau_grid.size());
    for (double tau : tau_grid)
        out.push_back(models::pspin_energy(x, interpolate(y, y_prime, tau)));
    return out;
}

// --- Hermite polynomials ------------------------------------------------------------

std::vector<double> HermitePolynomial::eval(const std::vector<double>& x) const {
    // univariate normalized Hermite table per coordinate
    std::vector<std::vector<double>> table(dim);
    std::vector<double> buf;
    for (std::size_t i = 0; i < dim; ++i) {
        hermite::hermite_he_normalized(x[i], degree, buf);
        table[i] = buf;
    }
    std::vector<double> out(out_dim, 0.0);
    for (std::size_t c = 0; c < out_dim; ++c)
        for (const auto& [alpha, coeff] : terms[c]) {
            double prod = coeff;
            for (std::size_t i = 0; i < dim; ++i)
                if (alpha[i] > 0) prod *= table[i][static_cast<std::size_t>(alpha[i])];
            out[c] += prod;
        }
    return out;
}

void HermitePolynomial::scale(double factor) {
    for (auto& component : terms)
        for (auto& [alpha, coeff] : component) coeff *= factor;
}

HermitePolynomial random_hermite_polynomial(std::size_t dim, std::size_t out_dim, int degree,
                                            std::size_t n_terms, Rng& rng) {
    HermitePolynomial f;
    f.dim = dim;
    f.out_dim = out_dim;
    f.degree = degree;
    f.terms.resize(out_dim);
    for (std::size_t c = 0; c < out_dim; ++c)
        for (std::size_t t = 0; t < n_terms; ++t) {
            // random multi-index with 1 <= |alpha| <= degree
            std::vector<int> alpha(dim, 0);
            const auto total = 1 + rng.uniform_int(static_cast<std::uint64_t>(degree));
            for (std::uint64_t u = 0; u < total; ++u) ++alpha[rng.uniform_int(dim)];
            f.terms[c].emplace_back(std::move(alpha), rng.normal());
        }
    // normalize exactly via Hermite orthonormality after merging duplicates
    double norm2 = 0.0;
    for (auto& component : f.terms) {
        std::sort(component.begin(), component.end());
        std::vector<std::pair<std::vector<int>, double>> merged;
        for (auto& [alpha, coeff] : component) {
            if (!merged.empty() && merged.back().first == alpha) merged.back().second += coeff;
            else merged.emplace_back(alpha, coeff);
        }
        component = std::move(merged);
        for (const auto& [alpha, coeff] : component) norm2 += coeff * coeff;
    }
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& component : f.terms)
            for (auto& [alpha, coeff] : component) coeff *= inv;
    }
    return f;
}

HermitePolynomial linear_isometry(std::size_t dim) {
    HermitePolynomial f;
    f.dim = dim;
    f.out_dim = dim;
    f.degree = 1;
    f.terms.resize(dim);
    const double c = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<int> alpha(dim, 0);
        alpha[i] = 1;
        f.terms[i].emplace_back(std::move(alpha), c);
    }
    return f;
}

StabilityReport poly_stability_check(const HermitePolynomial& f, double rho,
                                     std::size_t mc_budget, Rng& rng) {
    if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("poly_stability_check: rho in [0,1]");
    // empirical normalization pass
    RunningStat norm_stat;
    const std::size_t norm_budget = std::max<std::size_t>(mc_budget / 2, 200);
    std::vector<double> x(f.dim), xp(f.dim), y(f.dim);
    for (std::size_t i = 0; i < norm_budget; ++i) {
        for (auto& v : x) v = rng.normal();
        const auto fx = f.eval(x);
        double s = 0.0;
        for (double v : fx) s += v * v;
        norm_stat.add(s);
    }
    StabilityReport rep;
    rep.normalization = norm_stat.mean();
    if (rep.normalization <= 0.0)
        throw std::runtime_error("poly_stability_check: zero polynomial, normalization failed");
    HermitePolynomial g = f;
    g.scale(1.0 / std::sqrt(rep.normalization));

    const double d = g.degree;
    rep.mean_bound = 2.0 * (1.0 - std::pow(rho, d));
    const double t0 = std::pow(6.0 * std::exp(1.0), d);
    rep.tail_threshold = 2.0 * t0 * (1.0 - std::pow(rho, d));
    rep.tail_bound = std::exp(-(d / (3.0 * std::exp(1.0))) * std::pow(t0, 1.0 / d));

    RunningStat disc;
    std::size_t tail_hits = 0;
    const double mix = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < mc_budget; ++i) {
        for (std::size_t j = 0; j < f.dim; ++j) {
            x[j] = rng.normal();
            xp[j] = rng.normal();
            y[j] = rho * x[j] + mix * xp[j];
        }
        const auto fx = g.eval(x);
        const auto fy = g.eval(y);
        double s = 0.0;
        for (std::size_t c = 0; c < fx.size(); ++c) s += sq(fx[c] - fy[c]);
        disc.add(s);
        if (s >= rep.tail_threshold) ++tail_hits;
    }
    rep.mean_discrepancy = disc.mean();
    // the normalization factor is itself estimated; propagate its error
    const double norm_rel = norm_stat.stderr_mean() / rep.normalization;
    rep.mean_stderr = std::hypot(disc.stderr_mean(), rep.mean_discrepancy * norm_rel);
    rep.tail_empirical = static_cast<double>(tail_hits) / static_cast<double>(mc_budget);
    rep.tail_stderr = std::sqrt(rep.tail_empirical * (1.0 - rep.tail_empirical) /
                                static_cast<double>(mc_budget));
    return rep;
}

std::optional<std::vector<double>> round_to_sphere(const std::vector<double>& f_value) {
    double norm2 = 0.0;
    for (double v : f_value) norm2 += v * v;
    if (norm2 == 0.0) return std::nullopt;
    const double target = std::sqrt(static_cast<double>(f_value.size()));
    std::vector<double> out(f_value.size());
    const double scale = target / std::sqrt(norm2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * f_value[i];
    return out;
}

HypercontractivityReport hypercontractive_tail_check(const HermitePolynomial& f, int degree,
                                                     const std::vector<double>& q_grid,
                                                     std::size_t mc_budget, Rng& rng) {
    HypercontractivityReport rep;
    std::vector<double> x(f.dim);
    std::vector<double> norms2;
    norms2.reserve(mc_budget);
    RunningStat base;
    for (std::size_t i = 0; i < mc_budget; ++i) {
        for (auto& v : x) v = rng.normal();
        const auto fx = f.eval(x);
        double s = 0.0;
        for (double v : fx) s += v * v;
        norms2.push_back(s);
        base.add(s);
    }
    for (double q : q_grid) {
        if (q < 2.0 || q > 6.0)
            throw std::invalid_argument("hypercontractive_tail_check: q must be in [2,6]");
        RunningStat mom;
        for (double s : norms2) mom.add(std::pow(s, q));
        HypercontractivityReport::Point pt;
        pt.q = q;
        pt.moment = mom.mean();
        pt.stderr_mean = mom.stderr_mean();
        pt.bound = std::pow(3.0 * (q - 1.0), q * degree) * std::pow(base.mean(), q);
        pt.holds = pt.moment <= pt.bound + 3.0 * pt.stderr_mean;
        rep.points.push_back(pt);
        rep.all_hold = rep.all_hold && pt.holds;
    }
    return rep;
}

EogpEventReport eogp_event_harness(const HermitePolynomial& f, std::size_t n, std::size_t p,
                                   const EogpEventParams& params, Rng& rng) {
    if (f.out_dim != n) throw std::invalid_argument("eogp_event_harness: f must map into R^n");
    auto y = models::sample_pspin(n, p, rng);
    auto y_prime = models::sample_pspin(n, p, rng);
    const std::size_t levels = params.path_points;

    std::vector<std::vector<double>> raw(levels + 1);
    std::vector<std::optional<std::vector<double>>> rounded(levels + 1);
    std::vector<double> objective(levels + 1, 0.0);
    std::vector<bool> success(levels + 1, false);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    std::vector<double> flat(y.tensor->size());
    for (std::size_t l = 0; l <= levels; ++l) {
        const double tau = M_PI_2 * static_cast<double>(l) / static_cast<double>(levels);
        const Tensor yt = interpolate(*y.tensor, *y_prime.tensor, tau);
        for (std::size_t i = 0; i < yt.size(); ++i) flat[i] = yt[i];
        raw[l] = f.eval(flat);
        rounded[l] = round_to_sphere(raw[l]);
        double norm = 0.0;
        for (double v : raw[l]) norm += v * v;
        norm = std::sqrt(norm);
        if (rounded[l]) objective[l] = models::pspin_energy(*rounded[l], yt);
        success[l] = rounded[l] && objective[l] >= params.mu && norm >= params.gamma * sqrt_n;
    }

    EogpEventReport rep;
    rep.event_success = std::all_of(success.begin(), success.end(), [](bool b) { return b; });

    // realized overlap structure along the path, relative to the tau = 0 output
    bool band_clear = true;
    double endpoint_overlap = 1.0;
    if (rounded.front() && rounded.back()) {
        for (std::size_t l = 0; l <= levels; ++l) {
            if (!rounded[l] || !success[l]) continue;
            double o = 0.0;
            for (std::size_t i = 0; i < n; ++i) o += (*rounded[0])[i] * (*rounded[l])[i];
            o = std::abs(o) / static_cast<double>(n);
            if (l == levels) endpoint_overlap = o;
            if (o > params.nu1 && o < params.nu2) band_clear = false;
        }
    }
    rep.event_realized_ogp = band_clear && endpoint_overlap <= params.nu1;

    bool stable = true;
    const double cap = sq(params.gamma) * sq(params.nu2 - params.nu1) * static_cast<double>(n);
    for (std::size_t l = 0; l < levels; ++l) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) d2 += sq(raw[l][i] - raw[l + 1][i]);
        if (d2 >= cap) stable = false;
    }
    rep.event_stability = stable;
    rep.co_occurred = rep.event_realized_ogp && rep.event_success && rep.event_stability;
    return rep;
}

}  // namespace gaplab::ogp

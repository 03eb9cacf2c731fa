#include "gaplab/detect.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaplab/spectral.hpp"
#include "gaplab/stats.hpp"

namespace gaplab::detect {

SeparationReport separation_ratio(const StatSampler& p_sampler, const StatSampler& q_sampler,
                                  std::size_t mc_budget, Rng& rng, SeparationCutoffs cutoffs) {
    if (mc_budget < 100) throw std::invalid_argument("separation_ratio: mc_budget must be >= 100");
    RunningStat sp, sq;
    for (std::size_t i = 0; i < mc_budget; ++i) sp.add(p_sampler(rng));
    for (std::size_t i = 0; i < mc_budget; ++i) sq.add(q_sampler(rng));
    SeparationReport r;
    r.mean_p = sp.mean();
    r.mean_q = sq.mean();
    r.var_p = sp.variance();
    r.var_q = sq.variance();
    r.mc_budget = mc_budget;
    const double gap = std::abs(r.mean_p - r.mean_q);
    const double fluct = std::sqrt(std::max(r.var_p, r.var_q));
    r.ratio = gap > 0.0 ? fluct / gap : std::numeric_limits<double>::infinity();
    if (gap == 0.0) r.classification = "none";
    else if (r.ratio < cutoffs.strong) r.classification = "strong";
    else if (r.ratio < cutoffs.weak) r.classification = "weak";
    else r.classification = "none";
    const double gap_se = std::sqrt(r.var_p / static_cast<double>(mc_budget) +
                                    r.var_q / static_cast<double>(mc_budget));
    r.confidence_note = gap > 3.0 * gap_se
                            ? "mean gap resolved beyond 3 sigma at this budget"
                            : "mean gap within Monte Carlo error; classification unreliable";
    return r;
}

TestOutcome threshold_test(const StatSampler& p_sampler, const StatSampler& q_sampler,
                           double threshold, std::size_t mc_budget, Rng& rng) {
    if (!std::isfinite(threshold)) throw std::invalid_argument("threshold_test: threshold not finite");
    TestOutcome out;
    out.threshold = threshold;
    std::size_t fp = 0, fn = 0;
    for (std::size_t i = 0; i < mc_budget; ++i)
        if (q_sampler(rng) > threshold) ++fp;
    for (std::size_t i = 0; i < mc_budget; ++i)
        if (p_sampler(rng) <= threshold) ++fn;
    out.type_i_error = static_cast<double>(fp) / static_cast<double>(mc_budget);
    out.type_ii_error = static_cast<double>(fn) / static_cast<double>(mc_budget);
    return out;
}

double midpoint_threshold(const StatSampler& p_sampler, const StatSampler& q_sampler,
                          std::size_t calibration_budget, Rng& rng) {
    RunningStat sp, sq;
    for (std::size_t i = 0; i < calibration_budget; ++i) sp.add(p_sampler(rng));
    for (std::size_t i = 0; i < calibration_budget; ++i) sq.add(q_sampler(rng));
    return 0.5 * (sp.mean() + sq.mean());
}

LogEstimate lr_second_moment(const OverlapSampler& overlaps, double lambda, std::size_t n,
                             std::size_t mc_budget, Rng& rng) {
    if (lambda < 0.0) throw std::invalid_argument("lr_second_moment: lambda must be >= 0");
    const double c = 0.5 * static_cast<double>(n) * lambda * lambda;
    LogSumExp lse;
    // second accumulator for exp(2x) to get a delta-method stderr of the mean
    LogSumExp lse2;
    for (std::size_t i = 0; i < mc_budget; ++i) {
        const double s = overlaps(rng);
        const double t = c * s * s;
        lse.add(t);
        lse2.add(2.0 * t);
    }
    LogEstimate est;
    est.mc_budget = mc_budget;
    const double m = static_cast<double>(mc_budget);
    est.log_value = lse.log_mean();
    // var(mean) = (E X^2 - (E X)^2)/m in log space
    const double log_ex2 = lse2.log_mean();
    const double log_mean2 = 2.0 * est.log_value;
    double var_ratio = std::exp(log_ex2 - log_mean2) - 1.0;
    if (var_ratio < 0.0) var_ratio = 0.0;
    est.stderr_log = std::sqrt(var_ratio / m);
    return est;
}

double lr_second_moment_rademacher_exact_log(double lambda, std::size_t n) {
    // s = (n - 2k)/n, k ~ Binomial(n, 1/2)
    const double c = 0.5 * static_cast<double>(n) * lambda * lambda;
    std::vector<double> terms;
    terms.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = (static_cast<double>(n) - 2.0 * static_cast<double>(k)) /
                         static_cast<double>(n);
        const double log_binom = std::lgamma(static_cast<double>(n) + 1.0) -
                                 std::lgamma(static_cast<double>(k) + 1.0) -
                                 std::lgamma(static_cast<double>(n - k) + 1.0);
        terms.push_back(log_binom - static_cast<double>(n) * std::log(2.0) + c * s * s);
    }
    return logsumexp(terms);
}

double subgaussian_tail_bound(double sigma2, double a) {
    if (sigma2 <= 0.0) throw std::invalid_argument("subgaussian_tail_bound: sigma2 must be > 0");
    if (a < 0.0) throw std::invalid_argument("subgaussian_tail_bound: a must be >= 0");
    return 2.0 * std::exp(-a * a / (2.0 * sigma2));
}

double empirical_tail(const StatSampler& sampler, double a, std::size_t mc_budget, Rng& rng) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < mc_budget; ++i)
        if (std::abs(sampler(rng)) >= a) ++hits;
    return static_cast<double>(hits) / static_cast<double>(mc_budget);
}

bool spectral_test(const SymMatrix& y, double threshold) {
    return spectral::top_eigenpair_checked(y).value > threshold;
}

double bbp_overlap(const models::ModelInstance& instance) {
    if (!instance.matrix) throw std::invalid_argument("bbp_overlap: instance has no symmetric observation");
    if (instance.signal.empty()) throw std::invalid_argument("bbp_overlap: instance has no signal");
    const auto top = spectral::top_eigenpair_checked(*instance.matrix);
    double dot = 0.0, nx = 0.0;
    for (std::size_t i = 0; i < instance.signal.size(); ++i) {
        dot += instance.signal[i] * top.vector[i];
        nx += instance.signal[i] * instance.signal[i];
    }
    return dot * dot / nx;  // top.vector is unit norm
}

double signed_triangle_stat(const Graph& g, double q) {
    if (g.n < 3) throw std::invalid_argument("signed_triangle_stat: n must be >= 3");
    if (q < 0.0 || q >= 1.0) throw std::invalid_argument("signed_triangle_stat: q must be in [0,1)");
    const auto a = g.dense_adjacency();
    const std::size_t n = g.n;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double rij = a[i * n + j] - q;
            for (std::size_t k = j + 1; k < n; ++k)
                total += rij * (a[i * n + k] - q) * (a[j * n + k] - q);
        }
    return total;
}

double signed_triangle_stat_trace(const Graph& g, double q) {
    if (g.n < 3) throw std::invalid_argument("signed_triangle_stat: n must be >= 3");
    const auto a = g.dense_adjacency();
    const std::size_t n = g.n;
    // R = A - q off-diagonal, zero diagonal; hollow symmetric, so
    // sum over triangles = tr(R^3)/6.
    std::vector<double> r(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) r[i * n + j] = a[i * n + j] - q;
    std::vector<double> r2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double rik = r[i * n + k];
            if (rik == 0.0) continue;
            const double* rowk = r.data() + k * n;
            double* rowi = r2.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) rowi[j] += rik * rowk[j];
        }
    double tr3 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr3 += r2[i * n + j] * r[j * n + i];
    return tr3 / 6.0;
}

TriangleMoments triangle_moment_formulas(std::size_t n, double k, double q, double s, int m) {
    TriangleMoments t;
    t.mean = (1.0 / 6.0) * m * s * s * s * k * k * k;
    const double md = m;
    const double nd = static_cast<double>(n);
    t.variance_bound = md * md * std::pow(k, 5) * std::pow(s, 6) +
                       md * std::pow(k, 4) * std::pow(s, 4) * q +
                       md * md * std::pow(k, 4) * std::pow(s, 5) +
                       std::pow(nd, 3) * std::pow(q, 3) / 3.0 +
                       nd * k * k * s * q * q +
                       std::pow(k, 3) * q * q * s +
                       std::pow(k, 3) * q * s * s +
                       md * std::pow(k, 3) * std::pow(s, 3) / 3.0;
    return t;
}

}  // namespace gaplab::detect

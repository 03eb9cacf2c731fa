#include "gaplab/lowdeg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaplab/stats.hpp"

namespace gaplab::lowdeg {

double truncated_exp(double x, int degree) {
    if (degree < 0) throw std::invalid_argument("truncated_exp: degree must be >= 0");
    double term = 1.0, sum = 1.0;
    for (int d = 0; d < degree; ++d) {
        term *= x / (d + 1);
        sum += term;
    }
    return sum;
}

McEstimate ld_value(const OverlapSampler& overlaps, double lambda, int degree,
                    std::size_t mc_budget, Rng& rng) {
    RunningStat stat;
    const double l2 = lambda * lambda;
    for (std::size_t i = 0; i < mc_budget; ++i)
        stat.add(truncated_exp(l2 * overlaps(rng), degree));
    return {stat.mean(), stat.stderr_mean(), mc_budget};
}

namespace {

DeltaEstimate delta_from_samples(std::vector<double>& abs_s, double deviations) {
    const std::size_t m = abs_s.size();
    const double need = 10.0 * std::exp(deviations);
    if (static_cast<double>(m) < need)
        throw std::invalid_argument(
            "overlap_quantile_delta: unresolvable tail, need mc_budget >= 10 e^D");
    const auto rank = static_cast<std::size_t>(
        std::ceil(static_cast<double>(m) * std::exp(-deviations)));
    // rank-th largest |s|
    std::nth_element(abs_s.begin(), abs_s.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                     abs_s.end(), std::greater<double>());
    DeltaEstimate d;
    d.delta = abs_s[rank - 1];
    d.rank = rank;
    d.mc_budget = m;
    d.estimator_note =
        "delta estimated as the ceil(m e^-D)-th largest |s| of the sample; "
        "the sup over exact tail probabilities is not attainable empirically";
    return d;
}

}  // namespace

DeltaEstimate overlap_quantile_delta(const OverlapSampler& overlaps, double deviations,
                                     std::size_t mc_budget, Rng& rng) {
    std::vector<double> abs_s(mc_budget);
    for (auto& v : abs_s) v = std::abs(overlaps(rng));
    return delta_from_samples(abs_s, deviations);
}

FpEstimate fp_value(const OverlapSampler& overlaps, double lambda, double deviations,
                    std::size_t mc_budget, Rng& rng) {
    std::vector<double> s(mc_budget);
    for (auto& v : s) v = overlaps(rng);
    std::vector<double> abs_s(mc_budget);
    for (std::size_t i = 0; i < mc_budget; ++i) abs_s[i] = std::abs(s[i]);
    FpEstimate fp;
    fp.delta = delta_from_samples(abs_s, deviations);
    fp.mc_budget = mc_budget;

    // log-safe mean of 1_{|s| <= delta} exp(lambda^2 s)
    const double l2 = lambda * lambda;
    LogSumExp lse, lse2;
    std::size_t kept = 0;
    for (double v : s) {
        if (std::abs(v) > fp.delta.delta) continue;
        lse.add(l2 * v);
        lse2.add(2.0 * l2 * v);
        ++kept;
    }
    const double m = static_cast<double>(mc_budget);
    if (kept == 0) return fp;
    const double log_sum = lse.value();
    fp.value = std::exp(log_sum - std::log(m));
    const double ex2 = std::exp(lse2.value() - std::log(m));
    double var = ex2 - fp.value * fp.value;
    if (var < 0.0) var = 0.0;
    fp.stderr_mean = std::sqrt(var / m);
    return fp;
}

double fp_sandwich_degree(int degree, double lambda, double overlap_bound_m) {
    return degree * (2.0 + std::log(1.0 + lambda * lambda * overlap_bound_m));
}

DiscreteOverlapLaw rademacher_overlap_law(std::size_t n) {
    DiscreteOverlapLaw law;
    law.values.reserve(n + 1);
    law.probs.reserve(n + 1);
    const double log2n = static_cast<double>(n) * std::log(2.0);
    for (std::size_t k = 0; k <= n; ++k) {
        const double log_binom = std::lgamma(static_cast<double>(n) + 1.0) -
                                 std::lgamma(static_cast<double>(k) + 1.0) -
                                 std::lgamma(static_cast<double>(n - k) + 1.0);
        law.values.push_back((static_cast<double>(n) - 2.0 * static_cast<double>(k)) /
                             static_cast<double>(n));
        law.probs.push_back(std::exp(log_binom - log2n));
    }
    return law;
}

double ld_value_exact(const DiscreteOverlapLaw& law, double lambda, int degree) {
    double sum = 0.0;
    const double l2 = lambda * lambda;
    for (std::size_t i = 0; i < law.values.size(); ++i)
        sum += law.probs[i] * truncated_exp(l2 * law.values[i], degree);
    return sum;
}

double overlap_quantile_delta_exact(const DiscreteOverlapLaw& law, double deviations) {
    // delta = sup{eps >= 0 : P(|s| >= eps) >= e^-D}; the tail is a left-continuous
    // step function, so the sup is attained at a support point (or 0).
    std::vector<std::pair<double, double>> abs_points;  // (|value|, prob)
    for (std::size_t i = 0; i < law.values.size(); ++i)
        abs_points.emplace_back(std::abs(law.values[i]), law.probs[i]);
    std::sort(abs_points.begin(), abs_points.end(), std::greater<>());
    const double target = std::exp(-deviations);
    double tail = 0.0;
    for (const auto& [v, p] : abs_points) {
        tail += p;
        if (tail >= target) return v;
    }
    return 0.0;
}

double fp_value_exact_log(const DiscreteOverlapLaw& law, double lambda, double deviations) {
    const double delta = overlap_quantile_delta_exact(law, deviations);
    const double l2 = lambda * lambda;
    std::vector<double> terms;
    for (std::size_t i = 0; i < law.values.size(); ++i)
        if (std::abs(law.values[i]) <= delta && law.probs[i] > 0.0)
            terms.push_back(std::log(law.probs[i]) + l2 * law.values[i]);
    return logsumexp(terms);
}

double fp_value_exact(const DiscreteOverlapLaw& law, double lambda, double deviations) {
    return std::exp(fp_value_exact_log(law, lambda, deviations));
}

double boolean_disjoint_lo(std::size_t n, double delta) {
    // u, v uniform on {+-1}^n; <L_u, L_v> = prod_i (1 + u_i v_i) = 2^n 1[u = v].
    // Sum over the law of the disagreement count h; only h = 0 contributes and
    // its kernel cancels the pair probability exactly.
    double total = 0.0;
    for (std::size_t h = 0; h <= n; ++h) {
        const double overlap = static_cast<double>(n) - 2.0 * static_cast<double>(h);
        if (std::abs(overlap) > delta) continue;
        if (h == 0) total += 1.0;  // C(n,0) 2^-n * 2^n
    }
    return total;
}

// --- binary models -------------------------------------------------------------

double BinaryModel::a(std::size_t i) const {
    const double p = null_prob_b[i];
    return -std::sqrt(p / (1.0 - p));
}

double BinaryModel::b(std::size_t i) const {
    const double p = null_prob_b[i];
    return std::sqrt((1.0 - p) / p);
}

namespace {

void for_each_subset_up_to(std::size_t coords, int degree,
                           const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> subset;
    fn(subset);  // empty character
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
        if (remaining == 0) return;
        for (std::size_t i = start; i < coords; ++i) {
            subset.push_back(static_cast<int>(i));
            fn(subset);
            rec(i + 1, remaining - 1);
            subset.pop_back();
        }
    };
    rec(0, degree);
}

double planted_char_mean(const BinaryModel& model, const std::vector<int>& subset) {
    // E_P chi_S(Y) = E_X prod_{i in S} X_i  (conditionally independent Y with mean X)
    double total = 0.0;
    for (std::size_t atom = 0; atom < model.planted_means.size(); ++atom) {
        double prod = model.planted_probs[atom];
        for (int i : subset) prod *= model.planted_means[atom][static_cast<std::size_t>(i)];
        total += prod;
    }
    return total;
}

}  // namespace

double fourier_ldlr_binary(const BinaryModel& model, int degree) {
    const std::size_t n = model.coords();
    if (n > 28 || degree > 4)
        throw std::invalid_argument("fourier_ldlr_binary: enumeration budget exceeded");
    double total = 0.0;
    for_each_subset_up_to(n, degree, [&](const std::vector<int>& s) {
        const double c = planted_char_mean(model, s);
        total += c * c;
    });
    return total;
}

std::vector<std::pair<std::uint64_t, double>> fourier_coefficients(const BinaryModel& model,
                                                                   int degree) {
    std::vector<std::pair<std::uint64_t, double>> out;
    for_each_subset_up_to(model.coords(), degree, [&](const std::vector<int>& s) {
        std::uint64_t mask = 0;
        for (int i : s) mask |= std::uint64_t(1) << i;
        out.emplace_back(mask, planted_char_mean(model, s));
    });
    return out;
}

double fourier_orthonormality_residual(const BinaryModel& model, int degree) {
    const std::size_t n = model.coords();
    if (n > 20) throw std::invalid_argument("fourier_orthonormality_residual: N too large");
    std::vector<std::vector<int>> subsets;
    for_each_subset_up_to(n, degree, [&](const std::vector<int>& s) { subsets.push_back(s); });

    // expectations over the 2^N null assignments
    const std::size_t count = std::size_t(1) << n;
    double worst = 0.0;
    std::vector<double> y(n);
    for (std::size_t si = 0; si < subsets.size(); ++si)
        for (std::size_t ti = si; ti < subsets.size(); ++ti) {
            double mean = 0.0;
            for (std::size_t mask = 0; mask < count; ++mask) {
                double w = 1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const bool hi = (mask >> i) & 1;
                    y[i] = hi ? model.b(i) : model.a(i);
                    w *= hi ? model.null_prob_b[i] : 1.0 - model.null_prob_b[i];
                }
                double prod = w;
                for (int i : subsets[si]) prod *= y[static_cast<std::size_t>(i)];
                for (int i : subsets[ti]) prod *= y[static_cast<std::size_t>(i)];
                mean += prod;
            }
            const double expected = subsets[si] == subsets[ti] ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(mean - expected));
        }
    return worst;
}

BinaryModel sbm_as_binary_model(std::size_t n, int k, double d, double eta) {
    if (n > 7) throw std::invalid_argument("sbm_as_binary_model: prior enumeration needs n <= 7");
    const double p = d / static_cast<double>(n);
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("sbm_as_binary_model: need 0 < d/n < 1");
    BinaryModel model;
    const std::size_t coords = n * (n + 1) / 2;
    model.null_prob_b.assign(coords, p);

    const double scale = std::sqrt(p / (1.0 - p));
    const double diag_delta = eta * (k - 1) / std::sqrt(2.0);

    // enumerate label assignments in [k]^n
    std::size_t assignments = 1;
    for (std::size_t i = 0; i < n; ++i) assignments *= static_cast<std::size_t>(k);
    const double prob = 1.0 / static_cast<double>(assignments);
    std::vector<int> labels(n);
    for (std::size_t a = 0; a < assignments; ++a) {
        std::size_t rem = a;
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(rem % static_cast<std::size_t>(k));
            rem /= static_cast<std::size_t>(k);
        }
        std::vector<double> x(coords);
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double delta = i == j ? diag_delta
                                   : (labels[i] == labels[j] ? eta * (k - 1) : -eta);
                x[c++] = delta * scale;
            }
        model.planted_means.push_back(std::move(x));
        model.planted_probs.push_back(prob);
    }
    return model;
}

McEstimate sbm_ldlr_bound(std::size_t n, int k, double d_avg, double eta, int degree,
                          std::size_t mc_budget, Rng& rng) {
    if (k < 2) throw std::invalid_argument("sbm_ldlr_bound: k must be >= 2");
    const double p = d_avg / static_cast<double>(n);
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("sbm_ldlr_bound: need 0 < d/n < 1");
    const double coeff = 0.5 * eta * eta * p / (1.0 - p);

    std::vector<std::uint32_t> labels_u(n), labels_v(n);
    std::vector<double> joint(static_cast<std::size_t>(k) * k);
    std::vector<double> rows_u(k), rows_v(k);
    RunningStat stat;
    for (std::size_t rep = 0; rep < mc_budget; ++rep) {
        std::fill(joint.begin(), joint.end(), 0.0);
        std::fill(rows_u.begin(), rows_u.end(), 0.0);
        std::fill(rows_v.begin(), rows_v.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            labels_u[i] = static_cast<std::uint32_t>(rng.uniform_int(static_cast<std::uint64_t>(k)));
            labels_v[i] = static_cast<std::uint32_t>(rng.uniform_int(static_cast<std::uint64_t>(k)));
            joint[labels_u[i] * static_cast<std::size_t>(k) + labels_v[i]] += 1.0;
            rows_u[labels_u[i]] += 1.0;
            rows_v[labels_v[i]] += 1.0;
        }
        // <U U^T, U' U'^T> = k^2 sum C_ab^2 - k sum R_a^2 - k sum S_b^2 + n^2
        double sum_joint = 0.0, sum_u = 0.0, sum_v = 0.0;
        for (double c : joint) sum_joint += c * c;
        for (double c : rows_u) sum_u += c * c;
        for (double c : rows_v) sum_v += c * c;
        const double inner = static_cast<double>(k) * k * sum_joint -
                             static_cast<double>(k) * (sum_u + sum_v) +
                             static_cast<double>(n) * static_cast<double>(n);
        stat.add(truncated_exp(coeff * inner, degree));
    }
    return {stat.mean(), stat.stderr_mean(), mc_budget};
}

double sbm_ldlr_bound_two_communities_exact(std::size_t n, double d_avg, double eta, int degree) {
    const double p = d_avg / static_cast<double>(n);
    if (p <= 0.0 || p >= 1.0)
        throw std::invalid_argument("sbm_ldlr_bound_two_communities_exact: need 0 < d/n < 1");
    const double coeff = 0.5 * eta * eta * p / (1.0 - p);
    // m = sum_i s_i t_i is a Rademacher sum: m = n - 2j, j ~ Binomial(n, 1/2)
    const double log2n = static_cast<double>(n) * std::log(2.0);
    double total = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double log_binom = std::lgamma(static_cast<double>(n) + 1.0) -
                                 std::lgamma(static_cast<double>(j) + 1.0) -
                                 std::lgamma(static_cast<double>(n - j) + 1.0);
        const double m = static_cast<double>(n) - 2.0 * static_cast<double>(j);
        total += std::exp(log_binom - log2n) * truncated_exp(coeff * m * m, degree);
    }
    return total;
}

SeparationImplicationReport separation_implication_check(
    double adv_value, const std::vector<SeparationCandidate>& candidates, double strong_cutoff,
    double adv_tolerance) {
    SeparationImplicationReport report;
    report.adv_value = adv_value;
    report.adv_bounded = std::abs(adv_value - 1.0) <= adv_tolerance;
    for (const auto& c : candidates) {
        SeparationImplicationReport::Entry e;
        e.name = c.name;
        e.ratio = c.separation_ratio;
        e.strongly_separates = c.separation_ratio < strong_cutoff;
        e.consistent = !(report.adv_bounded && e.strongly_separates);
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace gaplab::lowdeg

#include "gaplab/cumulants.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "gaplab/hermite.hpp"
#include "gaplab/stats.hpp"

namespace gaplab::lowdeg {

MomentOracle planted_submatrix_oracle(double lambda, double rho) {
    MomentOracle o;
    o.moment_planted = [lambda, rho](const Multigraph& g) {
        return std::pow(lambda, g.total_edges()) *
               std::pow(rho, static_cast<double>(g.vertex_set().size()));
    };
    o.moment_x = [lambda, rho](const Multigraph& g) {
        auto vs = g.vertex_set();
        const bool has_root = std::binary_search(vs.begin(), vs.end(), 0);
        const double vertices = static_cast<double>(vs.size()) + (has_root ? 0.0 : 1.0);
        return std::pow(lambda, g.total_edges()) * std::pow(rho, vertices);
    };
    return o;
}

MomentOracle planted_submatrix_enumeration_oracle(std::size_t n, double lambda, double rho) {
    if (n > 16) throw std::invalid_argument("enumeration oracle: n too large");
    auto eval = [n, lambda, rho](const Multigraph& g, bool with_x) {
        double total = 0.0;
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            double prob = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                prob *= ((mask >> i) & 1) ? rho : 1.0 - rho;
            double value = with_x ? (mask & 1 ? 1.0 : 0.0) : 1.0;
            for (const auto& [code, mult] : g.index().entries()) {
                auto [i, j] = Multigraph::code_pair(code);
                const double vi = (mask >> i) & 1 ? 1.0 : 0.0;
                const double vj = (mask >> j) & 1 ? 1.0 : 0.0;
                value *= std::pow(lambda * vi * vj, mult);
            }
            total += prob * value;
        }
        return total;
    };
    MomentOracle o;
    o.moment_planted = [eval](const Multigraph& g) { return eval(g, false); };
    o.moment_x = [eval](const Multigraph& g) { return eval(g, true); };
    return o;
}

double KappaTable::kappa(const Multigraph& alpha) {
    const std::string key = alpha.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double value = oracle_.moment_x(alpha);
    const std::string alpha_key = key;
    alpha.for_each_sub([&](const Multigraph& beta) {
        if (beta.key() == alpha_key) return;
        value -= kappa(beta) * alpha.choose(beta) * oracle_.moment_planted(alpha.minus(beta));
    });
    memo_[key] = value;
    return value;
}

double kappa_magnitude_bound(const Multigraph& alpha, double lambda, double rho) {
    const double edges = alpha.total_edges();
    return std::pow(edges + 1.0, edges) * std::pow(std::abs(lambda), edges) *
           std::pow(rho, static_cast<double>(alpha.vertex_set().size()));
}

CorrBoundLedger corr_ld_bound(double lambda, double rho, double n, int degree) {
    if (degree < 1) throw std::invalid_argument("corr_ld_bound: degree must be >= 1");
    const double d = degree;
    const double log_a =
        lambda == 0.0 ? -std::numeric_limits<double>::infinity()
                      : 2.0 * std::log(d) + 2.0 * std::log(d + 1.0) + 2.0 * std::log(std::abs(lambda));
    const double log_b = lambda == 0.0 || rho == 0.0
                             ? -std::numeric_limits<double>::infinity()
                             : std::log(d) + 2.0 * std::log(d + 1.0) +
                                   2.0 * std::log(std::abs(lambda)) + 2.0 * std::log(rho) +
                                   std::log(n);
    CorrBoundLedger ledger;
    std::vector<double> log_terms;
    for (int h = 0; h <= degree; ++h) {
        std::vector<double> inner;
        for (int dd = h; dd <= degree; ++dd) {
            const double t = static_cast<double>(dd - h) * log_b;
            inner.push_back(dd == h ? 0.0 : t);  // (d-h)=0 contributes exactly 1
        }
        const double log_inner = logsumexp(inner);
        const double h_part = h == 0 ? 0.0 : static_cast<double>(h) * log_a;  // avoid 0 * -inf
        const double log_term = 2.0 * std::log(rho) + h_part + log_inner;
        ledger.terms.push_back({h, log_term});
        log_terms.push_back(log_term);
    }
    // drop terms below 1e-30 of the lead before summing
    const double lead = *std::max_element(log_terms.begin(), log_terms.end());
    std::vector<double> kept;
    for (double t : log_terms)
        if (t > lead + std::log(1e-30)) kept.push_back(t);
    ledger.bound = std::exp(logsumexp(kept));
    ledger.mmse_ld = rho - ledger.bound;  // E[x^2] = rho for the Bernoulli coordinate
    return ledger;
}

namespace {

// multi-indices over `coords` slots with |alpha| <= degree, as dense vectors
std::vector<std::vector<int>> dense_multi_indices(std::size_t coords, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(coords, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t slot, int remaining) {
        if (slot == coords) {
            out.push_back(current);
            return;
        }
        for (int m = 0; m <= remaining; ++m) {
            current[slot] = m;
            rec(slot + 1, remaining - m);
        }
        current[slot] = 0;
    };
    rec(0, degree);
    return out;
}

}  // namespace

std::optional<ExactCorrResult> exact_corr_small_instance(std::size_t n, double lambda, double rho,
                                                         int degree, double max_condition) {
    if (n > 4) throw std::invalid_argument("exact_corr_small_instance: n too large");
    const std::size_t coords = n * (n + 1) / 2;
    const auto alphas = dense_multi_indices(coords, degree);
    const auto basis = static_cast<Eigen::Index>(alphas.size());

    // planted configurations v in {0,1}^n
    std::vector<std::vector<double>> shifts;  // per config: t_e = lambda v_i v_j
    std::vector<double> probs;
    std::vector<double> x_of_config;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) prob *= ((mask >> i) & 1) ? rho : 1.0 - rho;
        std::vector<double> t(coords);
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                t[c++] = lambda * (((mask >> i) & 1) ? 1.0 : 0.0) * (((mask >> j) & 1) ? 1.0 : 0.0);
        shifts.push_back(std::move(t));
        probs.push_back(prob);
        x_of_config.push_back(mask & 1 ? 1.0 : 0.0);
    }

    std::vector<double> fact(static_cast<std::size_t>(degree) + 1, 1.0);
    for (int i = 1; i <= degree; ++i)
        fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i) - 1] * i;

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(basis, basis);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(basis);
    for (std::size_t cfg = 0; cfg < shifts.size(); ++cfg) {
        const auto& t = shifts[cfg];
        for (Eigen::Index a = 0; a < basis; ++a) {
            const auto& al = alphas[static_cast<std::size_t>(a)];
            // E_Z[h_alpha(t + Z)] = prod_e t_e^{a_e} / sqrt(a_e!)
            double ca = 1.0;
            for (std::size_t e = 0; e < coords; ++e)
                ca *= std::pow(t[e], al[e]) / std::sqrt(fact[static_cast<std::size_t>(al[e])]);
            c(a) += probs[cfg] * x_of_config[cfg] * ca;
            for (Eigen::Index b = a; b < basis; ++b) {
                const auto& bl = alphas[static_cast<std::size_t>(b)];
                double g = 1.0;
                for (std::size_t e = 0; e < coords; ++e) {
                    if (al[e] == 0 && bl[e] == 0) continue;
                    g *= hermite::shifted_he_product_mean(al[e], bl[e], t[e]) /
                         std::sqrt(fact[static_cast<std::size_t>(al[e])] *
                                   fact[static_cast<std::size_t>(bl[e])]);
                }
                gram(a, b) += probs[cfg] * g;
            }
        }
    }
    for (Eigen::Index a = 0; a < basis; ++a)
        for (Eigen::Index b = 0; b < a; ++b) gram(a, b) = gram(b, a);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) return std::nullopt;
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(basis - 1);
    if (lo <= 0.0 || hi / lo > max_condition) return std::nullopt;

    const Eigen::VectorXd w = es.eigenvectors() *
                              (es.eigenvectors().transpose() * c).cwiseQuotient(es.eigenvalues());
    ExactCorrResult r;
    r.corr_sq = c.dot(w);
    r.condition = hi / lo;
    return r;
}

// --- planted-vs-planted --------------------------------------------------------

PairMomentOracle discrete_pair_oracle(const DiscreteSignalPrior& p, const DiscreteSignalPrior& q) {
    auto moment = [](const DiscreteSignalPrior& prior, const MultiIndex& alpha) {
        double total = 0.0;
        for (std::size_t a = 0; a < prior.atoms.size(); ++a) {
            double prod = prior.probs[a];
            for (const auto& [coord, mult] : alpha.entries())
                prod *= std::pow(prior.atoms[a][static_cast<std::size_t>(coord)], mult);
            total += prod;
        }
        return total;
    };
    PairMomentOracle o;
    o.moment_p = [moment, p](const MultiIndex& alpha) { return moment(p, alpha); };
    o.moment_q = [moment, q](const MultiIndex& alpha) { return moment(q, alpha); };
    return o;
}

DiscreteSignalPrior shift_normalize_binary(DiscreteSignalPrior prior, double tau0, double tau1) {
    if (tau0 <= 0.0 || tau1 <= tau0)
        throw std::invalid_argument("shift_normalize_binary: need 0 < tau0 < tau1");
    const double scale = 1.0 / std::sqrt(tau0 * (tau1 - tau0));
    for (auto& atom : prior.atoms)
        for (auto& v : atom) v = (v - tau0) * scale;
    return prior;
}

double RAlphaTable::r(const MultiIndex& alpha) {
    const std::string key = alpha.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double value = oracle_.moment_p(alpha);
    alpha.for_each_sub([&](const MultiIndex& beta) {
        if (beta.key() == key) return;
        value -= r(beta) * alpha.choose(beta) * oracle_.moment_q(alpha.minus(beta));
    });
    memo_[key] = value;
    return value;
}

namespace {

void for_each_binary_index(std::size_t coords, int degree,
                           const std::function<void(const MultiIndex&)>& fn) {
    std::vector<std::pair<int, int>> entries;
    fn(MultiIndex{});
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
        if (remaining == 0) return;
        for (std::size_t i = start; i < coords; ++i) {
            entries.emplace_back(static_cast<int>(i), 1);
            fn(MultiIndex(entries));
            rec(i + 1, remaining - 1);
            entries.pop_back();
        }
    };
    rec(0, degree);
}

void for_each_multi_index(std::size_t coords, int degree,
                          const std::function<void(const MultiIndex&)>& fn) {
    std::vector<std::pair<int, int>> entries;
    fn(MultiIndex{});
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
        if (remaining == 0) return;
        for (std::size_t i = start; i < coords; ++i)
            for (int m = 1; m <= remaining; ++m) {
                entries.emplace_back(static_cast<int>(i), m);
                fn(MultiIndex(entries));
                rec(i + 1, remaining - m);
                entries.pop_back();
            }
    };
    rec(0, degree);
}

}  // namespace

double adv_bound_binary(RAlphaTable& table, std::size_t coords, int degree, double tau0,
                        double tau1) {
    if (tau0 <= 0.0 || tau1 >= 1.0 || tau0 > tau1)
        throw std::invalid_argument("adv_bound_binary: need 0 < tau0 <= tau1 < 1");
    const double base = tau0 * (1.0 - tau1);
    double total = 0.0;
    for_each_binary_index(coords, degree, [&](const MultiIndex& alpha) {
        const double r = table.r(alpha);
        total += r * r / std::pow(base, alpha.total());
    });
    return std::sqrt(total);
}

double adv_bound_gaussian(RAlphaTable& table, std::size_t coords, int degree) {
    double total = 0.0;
    for_each_multi_index(coords, degree, [&](const MultiIndex& alpha) {
        const double r = table.r(alpha);
        double fact = 1.0;
        for (const auto& [coord, mult] : alpha.entries())
            for (int i = 2; i <= mult; ++i) fact *= i;
        total += r * r / fact;
    });
    return std::sqrt(total);
}

namespace {

DiscreteSignalPrior community_prior(std::size_t n, double k, int m, bool gaussian, double lambda,
                                    double q, double s) {
    if (n > 6) throw std::invalid_argument("community prior: enumeration needs n <= 6");
    const double slot = k / (static_cast<double>(n) * m);
    const double star = 1.0 - k / static_cast<double>(n);
    if (slot < 0.0 || star < 0.0) throw std::invalid_argument("community prior: invalid k");

    DiscreteSignalPrior prior;
    std::size_t assignments = 1;
    for (std::size_t i = 0; i < n; ++i) assignments *= static_cast<std::size_t>(m) + 1;
    std::vector<int> labels(n);
    for (std::size_t a = 0; a < assignments; ++a) {
        std::size_t rem = a;
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int l = static_cast<int>(rem % (static_cast<std::size_t>(m) + 1));
            rem /= static_cast<std::size_t>(m) + 1;
            labels[i] = l - 1;  // -1 = star
            prob *= labels[i] < 0 ? star : slot;
        }
        if (prob == 0.0) continue;
        std::vector<double> x;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = gaussian ? i : i + 1; j < n; ++j) {
                const bool same = labels[i] >= 0 && labels[i] == labels[j];
                x.push_back(gaussian ? (same ? lambda * m : 0.0) : (same ? q + s * m : q));
            }
        prior.atoms.push_back(std::move(x));
        prior.probs.push_back(prob);
    }
    return prior;
}

}  // namespace

DiscreteSignalPrior community_gaussian_prior(std::size_t n, double k, double lambda, int m) {
    return community_prior(n, k, m, true, lambda, 0.0, 0.0);
}

DiscreteSignalPrior community_binary_prior(std::size_t n, double k, double q, double s, int m) {
    return community_prior(n, k, m, false, 0.0, q, s);
}

}  // namespace gaplab::lowdeg

#include "gaplab/freeenergy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaplab/hermite.hpp"
#include "gaplab/stats.hpp"

namespace gaplab::freeenergy {

namespace {
const hermite::GaussianQuadrature& quad60() {
    static const auto q = hermite::gauss_hermite(60);
    return q;
}
}  // namespace

ScalarChannel ScalarChannel::rademacher() {
    ScalarChannel c;
    c.atoms_ = {1.0, -1.0};
    c.probs_ = {0.5, 0.5};
    return c;
}

ScalarChannel ScalarChannel::gaussian() {
    ScalarChannel c;
    c.gaussian_ = true;
    return c;
}

ScalarChannel ScalarChannel::two_point(double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("two_point: p must be in (0,1)");
    ScalarChannel c;
    c.atoms_ = {std::sqrt((1.0 - p) / p), -std::sqrt(p / (1.0 - p))};
    c.probs_ = {p, 1.0 - p};
    return c;
}

double ScalarChannel::second_moment() const {
    if (gaussian_) return 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) s += probs_[i] * atoms_[i] * atoms_[i];
    return s;
}

double ScalarChannel::mean() const {
    if (gaussian_) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) s += probs_[i] * atoms_[i];
    return s;
}

double ScalarChannel::psi(double gamma) const {
    if (gamma < 0.0) throw std::invalid_argument("psi: gamma must be >= 0");
    if (gamma == 0.0) return 0.0;
    if (gaussian_) return 0.5 * (gamma - std::log1p(gamma));

    // E_{X,Z} log sum_x p(x) exp(sqrt(g) Z x + g x X - g x^2 / 2)
    const auto& q = quad60();
    const double sg = std::sqrt(gamma);
    double total = 0.0;
    for (std::size_t xi = 0; xi < atoms_.size(); ++xi) {
        const double truth = atoms_[xi];
        for (std::size_t zi = 0; zi < q.nodes.size(); ++zi) {
            const double z = q.nodes[zi];
            std::vector<double> terms;
            terms.reserve(atoms_.size());
            for (std::size_t a = 0; a < atoms_.size(); ++a) {
                const double x = atoms_[a];
                terms.push_back(std::log(probs_[a]) + sg * z * x + gamma * x * truth -
                                0.5 * gamma * x * x);
            }
            total += probs_[xi] * q.weights[zi] * logsumexp(terms);
        }
    }
    return total;
}

double ScalarChannel::posterior_mean(double y, double gamma) const {
    if (gaussian_) return std::sqrt(gamma) / (1.0 + gamma) * y;
    double num = 0.0, den = 0.0;
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> logw(atoms_.size());
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        const double x = atoms_[a];
        logw[a] = std::log(probs_[a]) + std::sqrt(gamma) * x * y - 0.5 * gamma * x * x;
        m = std::max(m, logw[a]);
    }
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        const double w = std::exp(logw[a] - m);
        num += w * atoms_[a];
        den += w;
    }
    return num / den;
}

double ScalarChannel::psi_prime(double gamma) const {
    // psi'(gamma) = (1/2) E[ E[X|Y]^2 ]  (Gaussian integration by parts + the
    // Bayes-optimal replica identity), smooth at gamma = 0
    if (gamma < 0.0) throw std::invalid_argument("psi_prime: gamma must be >= 0");
    if (gaussian_) return 0.5 * gamma / (1.0 + gamma);
    if (gamma == 0.0) return 0.5 * mean() * mean();
    const auto& q = quad60();
    const double sg = std::sqrt(gamma);
    double total = 0.0;
    for (std::size_t xi = 0; xi < atoms_.size(); ++xi)
        for (std::size_t zi = 0; zi < q.nodes.size(); ++zi) {
            const double y = sg * atoms_[xi] + q.nodes[zi];
            total += probs_[xi] * q.weights[zi] * sq(posterior_mean(y, gamma));
        }
    return 0.5 * total;
}

double ScalarChannel::mmse(double gamma) const {
    return second_moment() - 2.0 * psi_prime(gamma);
}

double ScalarChannel::psi_mc(double gamma, std::size_t mc_budget, Rng& rng) const {
    RunningStat stat;
    for (std::size_t i = 0; i < mc_budget; ++i) {
        const double z = rng.normal();
        if (gaussian_) {
            // closed-form inner integral for the Gaussian prior
            const double truth = rng.normal();
            const double a = std::sqrt(gamma) * z + gamma * truth;
            stat.add(a * a / (2.0 * (1.0 + gamma)) - 0.5 * std::log1p(gamma));
        } else {
            double u = rng.u01(), truth = atoms_.back();
            for (std::size_t a = 0; a < atoms_.size(); ++a) {
                if (u < probs_[a]) { truth = atoms_[a]; break; }
                u -= probs_[a];
            }
            std::vector<double> terms(atoms_.size());
            for (std::size_t a = 0; a < atoms_.size(); ++a)
                terms[a] = std::log(probs_[a]) + std::sqrt(gamma) * z * atoms_[a] +
                           gamma * atoms_[a] * truth - 0.5 * gamma * sq(atoms_[a]);
            stat.add(logsumexp(terms));
        }
    }
    return stat.mean();
}

double immse_residual(const ScalarChannel& channel, double lambda, double h) {
    if (h < 1e-4 || h > 1e-2) throw std::invalid_argument("immse_residual: h out of [1e-4, 1e-2]");
    double deriv;
    if (lambda < h) {
        // second-order one-sided stencil at the boundary
        deriv = (-3.0 * channel.psi(lambda) + 4.0 * channel.psi(lambda + h) -
                 channel.psi(lambda + 2.0 * h)) /
                (2.0 * h);
    } else {
        deriv = (channel.psi(lambda + h) - channel.psi(lambda - h)) / (2.0 * h);
    }
    const double rhs = 0.5 * (channel.second_moment() - channel.mmse(lambda));
    return std::abs(deriv - rhs);
}

GibbsTable GibbsTable::from_log_weights(std::vector<double> lw) {
    GibbsTable t;
    t.log_weights = std::move(lw);
    t.log_partition = logsumexp(t.log_weights);
    t.probs.resize(t.log_weights.size());
    for (std::size_t i = 0; i < t.probs.size(); ++i)
        t.probs[i] = std::exp(t.log_weights[i] - t.log_partition);
    return t;
}

double GibbsTable::normalization_residual() const {
    KahanSum s;
    for (double p : probs) s.add(p);
    return std::abs(s.value() - 1.0);
}

NishimoriReport nishimori_check(std::size_t n, double lambda, std::size_t mc_budget, Rng& rng) {
    if (n > 12) throw std::invalid_argument("nishimori_check: n must be <= 12");
    const std::size_t states = std::size_t(1) << n;
    NishimoriReport rep;
    rep.mc_budget = mc_budget;
    RunningStat diff_stat, quad_stat, factor_stat;

    std::vector<int8_t> spins(n);
    std::vector<double> logw(states);
    std::vector<double> mag(n);
    std::vector<double> second(n * n);
    for (std::size_t draw = 0; draw < mc_budget; ++draw) {
        // truth and noise: Y_ij = sqrt(lambda/(2n)) X_i X_j + Z_ij over ordered pairs
        std::vector<int8_t> truth(n);
        for (auto& t : truth) t = static_cast<int8_t>(rng.rademacher());
        std::vector<double> z(n * n);
        for (auto& v : z) v = rng.normal();

        // H(x) = sum_ij sqrt(lambda/n) x_i x_j Z_ij + (lambda/n)(X.x)^2 + const
        const double c1 = std::sqrt(lambda / static_cast<double>(n));
        const double c2 = lambda / static_cast<double>(n);
        for (std::size_t mask = 0; mask < states; ++mask) {
            for (std::size_t i = 0; i < n; ++i)
                spins[i] = static_cast<int8_t>(((mask >> i) & 1) ? 1 : -1);
            double zq = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) zq += spins[i] * spins[j] * z[i * n + j];
            double xdot = 0.0;
            for (std::size_t i = 0; i < n; ++i) xdot += spins[i] * truth[i];
            logw[mask] = c1 * zq + c2 * xdot * xdot;
        }
        const auto table = GibbsTable::from_log_weights(logw);

        // posterior first and second moments
        std::fill(mag.begin(), mag.end(), 0.0);
        std::fill(second.begin(), second.end(), 0.0);
        double xdot_mean = 0.0;
        for (std::size_t mask = 0; mask < states; ++mask) {
            const double p = table.probs[mask];
            double xdot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const int s = ((mask >> i) & 1) ? 1 : -1;
                mag[i] += p * s;
                xdot += s * truth[i];
                for (std::size_t j = 0; j < n; ++j) {
                    const int t = ((mask >> j) & 1) ? 1 : -1;
                    second[i * n + j] += p * s * t;
                }
            }
            xdot_mean += p * xdot;
        }
        double mag2 = 0.0;
        for (double m : mag) mag2 += m * m;
        diff_stat.add(xdot_mean - mag2);  // both sides vanish by the +-x symmetry

        // gauge-invariant replica identity: <(x1.x2)^2> = sum_ij M_ij^2 against
        // <(x1.X)^2> = sum_ij M_ij X_i X_j
        double overlap_sq = 0.0, truth_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double m = second[i * n + j];
                overlap_sq += m * m;
                truth_sq += m * truth[i] * truth[j];
            }
        quad_stat.add(overlap_sq - truth_sq);

        // double enumeration of <(x1.x2)^2> validates the factorization
        if (draw < 16 && n <= 10) {
            double direct = 0.0;
            for (std::size_t m1 = 0; m1 < states; ++m1) {
                if (table.probs[m1] == 0.0) continue;
                for (std::size_t m2 = 0; m2 < states; ++m2) {
                    int dotp = 0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const int s1 = ((m1 >> i) & 1) ? 1 : -1;
                        const int s2 = ((m2 >> i) & 1) ? 1 : -1;
                        dotp += s1 * s2;
                    }
                    direct += table.probs[m1] * table.probs[m2] *
                              static_cast<double>(dotp) * static_cast<double>(dotp);
                }
            }
            factor_stat.add(std::abs(direct - overlap_sq));
        }
    }
    rep.discrepancy = std::abs(diff_stat.mean());
    rep.stderr_disc = diff_stat.stderr_mean();
    rep.quad_discrepancy = std::abs(quad_stat.mean());
    rep.quad_stderr = quad_stat.stderr_mean();
    rep.factorization_residual = factor_stat.count() > 0 ? factor_stat.mean() : 0.0;
    return rep;
}

NeedleResult needle_free_energy(std::size_t n, double lambda, std::size_t mc_budget, Rng& rng) {
    if (n > 24) throw std::invalid_argument("needle_free_energy: n must be <= 24");
    const std::size_t states = std::size_t(1) << n;
    const double kappa = std::sqrt(lambda * static_cast<double>(n));
    const double shift = 0.5 * lambda * static_cast<double>(n);
    const double log_prior = -static_cast<double>(n) * std::log(2.0);

    RunningStat stat;
    for (std::size_t draw = 0; draw < mc_budget; ++draw) {
        // sigma_0 = 0 by symmetry; only Y_{sigma_0} carries signal
        LogSumExp lse;
        lse.add(shift + kappa * rng.normal());  // sigma = sigma_0 term
        for (std::size_t s = 1; s < states; ++s) lse.add(kappa * rng.normal() - shift);
        stat.add((lse.value() + log_prior) / static_cast<double>(n));
    }
    return {stat.mean(), stat.stderr_mean(), mc_budget};
}

double needle_mmse(std::size_t n, double lambda, double h, std::size_t mc_budget, Rng& rng) {
    // common random numbers on both sides of the difference
    Rng plus = rng, minus = rng;
    const double f_plus = needle_free_energy(n, lambda + h, mc_budget, plus).free_energy;
    const double f_minus = lambda > h
                               ? needle_free_energy(n, lambda - h, mc_budget, minus).free_energy
                               : needle_free_energy(n, 0.0, mc_budget, minus).free_energy;
    const double denom = lambda > h ? 2.0 * h : lambda + h;
    const double deriv = (f_plus - f_minus) / denom;
    return 1.0 - 2.0 * deriv;  // E||X||^2 = 1
}

double RsPotential::value(double q) const {
    return channel->psi(lambda * q) - 0.25 * lambda * q * q;
}

FixedPointResult rs_fixed_point(const ScalarChannel& channel, double lambda, double tol,
                                double damping, int starts, int max_iter) {
    if (lambda <= 0.0) throw std::invalid_argument("rs_fixed_point: lambda must be > 0");
    const double qmax = channel.second_moment();
    const RsPotential pot{&channel, lambda};

    FixedPointResult result;
    std::vector<double> converged;
    for (int s = 0; s < starts; ++s) {
        double q = qmax * (static_cast<double>(s) + 0.5) / static_cast<double>(starts);
        bool ok = false;
        for (int it = 0; it < max_iter; ++it) {
            const double next = (1.0 - damping) * q + damping * 2.0 * channel.psi_prime(lambda * q);
            if (std::abs(next - q) < tol) { q = next; ok = true; break; }
            q = next;
        }
        if (!ok) { result.converged = false; continue; }
        // polish with a few undamped steps
        for (int it = 0; it < 50; ++it) q = 2.0 * channel.psi_prime(lambda * q);
        converged.push_back(q);
    }
    if (converged.empty()) {
        result.converged = false;
        return result;
    }
    // cluster at tolerance 1e-8
    std::sort(converged.begin(), converged.end());
    for (double q : converged)
        if (result.fixed_points.empty() || q - result.fixed_points.back() > 1e-8)
            result.fixed_points.push_back(q);

    double best = -std::numeric_limits<double>::infinity();
    for (double q : result.fixed_points) {
        const double f = pot.value(q);
        if (f > best + 1e-12) {
            best = f;
            result.q_star = q;
        } else if (std::abs(f - best) <= 1e-12 && std::abs(q - result.q_star) > 1e-8) {
            result.tie = true;
        }
    }
    result.potential = best;
    return result;
}

MmseCurve mmse_limit_curve(const ScalarChannel& channel, const std::vector<double>& lambda_grid,
                           double bisection_tol) {
    MmseCurve curve;
    const double ex2 = channel.second_moment();
    const double ex = channel.mean();
    curve.dmse = sq(ex2) - sq(sq(ex));
    const double crossing_level = sq(ex);  // q* > (E X)^2 marks the transition

    double prev_lambda = 0.0;
    bool prev_below = true;
    for (double lambda : lambda_grid) {
        const auto fp = rs_fixed_point(channel, lambda);
        MmseCurvePoint pt;
        pt.lambda = lambda;
        pt.q_star = fp.q_star;
        pt.mmse_limit = sq(ex2) - sq(fp.q_star);
        curve.points.push_back(pt);
        const bool below = fp.q_star <= crossing_level + 1e-12;
        if (!curve.transition_found && prev_below && !below && prev_lambda > 0.0) {
            // refine the first crossing by bisection
            double lo = prev_lambda, hi = lambda;
            while (hi - lo > bisection_tol) {
                const double mid = 0.5 * (lo + hi);
                if (rs_fixed_point(channel, mid).q_star <= crossing_level + 1e-12) lo = mid;
                else hi = mid;
            }
            curve.lambda_c = 0.5 * (lo + hi);
            curve.transition_found = true;
        }
        prev_lambda = lambda;
        prev_below = below;
    }
    return curve;
}

}  // namespace gaplab::freeenergy

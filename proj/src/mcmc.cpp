#include "gaplab/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "gaplab/stats.hpp"

namespace gaplab::mcmc {

std::size_t SparseSlice::state_count() const {
    if (k > n) throw std::invalid_argument("SparseSlice: k' > n");
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (c > 9e15) throw std::invalid_argument("SparseSlice: state space too large");
    return static_cast<std::size_t>(std::llround(c));
}

void SparseSlice::for_each_state(
    const std::function<void(const std::vector<std::uint32_t>&)>& fn) const {
    std::vector<std::uint32_t> support(k);
    for (std::size_t i = 0; i < k; ++i) support[i] = static_cast<std::uint32_t>(i);
    if (k == 0) { fn(support); return; }
    while (true) {
        fn(support);
        // next combination
        std::size_t i = k;
        while (i-- > 0) {
            if (support[i] < n - k + i) {
                ++support[i];
                for (std::size_t j = i + 1; j < k; ++j) support[j] = support[j - 1] + 1;
                break;
            }
            if (i == 0) return;
        }
    }
}

freeenergy::GibbsTable gibbs_exact(const SparseSlice& space, const EnergyFn& energy, double beta,
                                   std::size_t max_states) {
    if (space.state_count() > max_states) throw std::invalid_argument("gibbs_exact: space too large");
    std::vector<double> lw;
    lw.reserve(space.state_count());
    space.for_each_state([&](const std::vector<std::uint32_t>& s) { lw.push_back(-beta * energy(s)); });
    return freeenergy::GibbsTable::from_log_weights(std::move(lw));
}

namespace {

// r-th non-support index of a sorted support
std::uint32_t nth_outside(const std::vector<std::uint32_t>& sorted_support, std::uint32_t r) {
    std::uint32_t candidate = r;
    for (std::uint32_t s : sorted_support) {
        if (s <= candidate) ++candidate;
        else break;
    }
    return candidate;
}

}  // namespace

void metropolis_step(ChainState& state, const SparseSlice& space, const EnergyFn& energy,
                     double beta, Rng& rng) {
    const std::size_t k = space.k;
    const std::size_t n = space.n;
    const auto pick_in = rng.uniform_int(k);
    const auto pick_out = static_cast<std::uint32_t>(rng.uniform_int(n - k));
    std::vector<std::uint32_t> sorted = state.support;
    std::sort(sorted.begin(), sorted.end());
    const std::uint32_t out_index = nth_outside(sorted, pick_out);

    std::vector<std::uint32_t> proposal = state.support;
    proposal[pick_in] = out_index;
    std::vector<std::uint32_t> proposal_sorted = proposal;
    std::sort(proposal_sorted.begin(), proposal_sorted.end());

    const double delta = energy(proposal_sorted) - state.energy;
    // acceptance from the energy difference only
    if (delta <= 0.0 || rng.u01() < std::exp(-beta * delta)) {
        state.support = std::move(proposal_sorted);
        state.energy += delta;
    }
    ++state.steps;
}

double detailed_balance_residual(const std::vector<std::vector<double>>& transition,
                                 const std::vector<double>& stationary) {
    const std::size_t m = transition.size();
    double worst = 0.0;
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = x + 1; y < m; ++y)
            worst = std::max(worst, std::abs(stationary[x] * transition[x][y] -
                                             stationary[y] * transition[y][x]));
    return worst;
}

std::vector<std::vector<double>> metropolis_matrix(const SparseSlice& space,
                                                   const EnergyFn& energy, double beta) {
    if (space.state_count() > 1000) throw std::invalid_argument("metropolis_matrix: space too large");
    std::vector<std::vector<std::uint32_t>> states;
    std::vector<double> energies;
    std::unordered_map<std::uint64_t, std::size_t> index;
    auto mask_of = [](const std::vector<std::uint32_t>& s) {
        std::uint64_t m = 0;
        for (auto i : s) m |= std::uint64_t(1) << i;
        return m;
    };
    space.for_each_state([&](const std::vector<std::uint32_t>& s) {
        index[mask_of(s)] = states.size();
        states.push_back(s);
        energies.push_back(energy(s));
    });

    const std::size_t m = states.size();
    const double prop = 1.0 / static_cast<double>(space.degree());
    std::vector<std::vector<double>> p(m, std::vector<double>(m, 0.0));
    for (std::size_t x = 0; x < m; ++x) {
        double stay = 1.0;
        for (std::size_t a = 0; a < space.k; ++a)
            for (std::uint32_t b = 0; b < space.n; ++b) {
                const std::uint64_t bit = std::uint64_t(1) << b;
                const std::uint64_t mask = mask_of(states[x]);
                if (mask & bit) continue;
                std::vector<std::uint32_t> neighbor = states[x];
                neighbor[a] = b;
                std::sort(neighbor.begin(), neighbor.end());
                const std::size_t y = index.at(mask_of(neighbor));
                const double accept = std::min(1.0, std::exp(-beta * (energies[y] - energies[x])));
                p[x][y] += prop * accept;
                stay -= prop * accept;
            }
        p[x][x] = stay;
    }
    return p;
}

namespace {

double slice_energy(const SymMatrix& y, const std::vector<std::uint32_t>& support) {
    double q = 0.0;
    for (auto i : support)
        for (auto j : support) q += y(i, j);
    return -q;
}

struct SliceMasks {
    std::vector<double> log_weights;
    std::vector<std::vector<std::uint32_t>> states;
    std::vector<std::size_t> corr;  // |support ^ signal|
};

SliceMasks enumerate_slice(const SymMatrix& y, const SparseIndicator& signal, double beta,
                           std::size_t k_prime) {
    SparseSlice space{y.n(), k_prime};
    if (space.state_count() > 1000000)
        throw std::invalid_argument("well_depth: state space above the enumeration cap");
    SliceMasks out;
    space.for_each_state([&](const std::vector<std::uint32_t>& s) {
        out.states.push_back(s);
        out.log_weights.push_back(-beta * slice_energy(y, s));
        std::size_t c = 0;
        for (auto i : s)
            if (signal.contains(i)) ++c;
        out.corr.push_back(c);
    });
    return out;
}

}  // namespace

WellReport well_depth(const SymMatrix& y, const SparseIndicator& signal, double beta,
                      std::size_t level, std::size_t k_prime) {
    if (level < 1) throw std::invalid_argument("well_depth: level must be >= 1");
    const auto slice = enumerate_slice(y, signal, beta, k_prime);
    std::vector<double> in_a, in_b;
    for (std::size_t i = 0; i < slice.states.size(); ++i) {
        const std::size_t c = slice.corr[i];
        if (c < level) in_a.push_back(slice.log_weights[i]);
        else if (c <= 2 * level) in_b.push_back(slice.log_weights[i]);
    }
    WellReport rep;
    rep.a_empty = in_a.empty();
    rep.b_empty = in_b.empty();
    if (rep.a_empty || rep.b_empty) return rep;
    rep.log_mass_a = logsumexp(in_a);
    rep.log_mass_b = logsumexp(in_b);
    rep.depth = rep.log_mass_a - rep.log_mass_b;
    rep.no_well = rep.depth <= 0.0;
    return rep;
}

HittingTimeCurve hitting_time_experiment(const SymMatrix& y, const SparseIndicator& signal,
                                         double beta, std::size_t level, std::size_t k_prime,
                                         std::size_t t_max, std::size_t replicas,
                                         const std::vector<std::size_t>& checkpoints, Rng& rng) {
    const auto slice = enumerate_slice(y, signal, beta, k_prime);
    const auto table = freeenergy::GibbsTable::from_log_weights(slice.log_weights);
    const auto rep_well = well_depth(y, signal, beta, level, k_prime);
    if (rep_well.a_empty || rep_well.b_empty)
        throw std::invalid_argument("hitting_time_experiment: A or B empty");

    // conditional law mu_beta(.|A)
    std::vector<std::size_t> a_states;
    std::vector<double> a_cdf;
    double a_mass = 0.0;
    for (std::size_t i = 0; i < slice.states.size(); ++i)
        if (slice.corr[i] < level) {
            a_states.push_back(i);
            a_mass += table.probs[i];
            a_cdf.push_back(a_mass);
        }
    if (a_mass < 1e-6)
        throw std::runtime_error("hitting_time_experiment: mu(A) < 1e-6, conditional sampling failed");

    const std::size_t n = y.n();
    std::vector<std::size_t> tau(replicas, t_max + 1);
    std::vector<double> rowsum(n);
    for (std::size_t r = 0; r < replicas; ++r) {
        // draw X0 ~ mu(.|A)
        const double u = rng.u01() * a_mass;
        const std::size_t pick =
            a_states[static_cast<std::size_t>(std::lower_bound(a_cdf.begin(), a_cdf.end(), u) -
                                              a_cdf.begin())];
        std::vector<std::uint32_t> support = slice.states[pick];
        std::vector<bool> in_support(n, false);
        for (auto i : support) in_support[i] = true;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (auto j : support) s += y(i, j);
            rowsum[i] = s;
        }
        std::size_t corr = slice.corr[pick];

        for (std::size_t t = 1; t <= t_max; ++t) {
            const std::size_t pick_in = rng.uniform_int(k_prime);
            const std::uint32_t a = support[pick_in];
            std::uint32_t b;
            do {
                b = static_cast<std::uint32_t>(rng.uniform_int(n));
            } while (in_support[b]);
            // Delta H for swapping a -> b with H = -sum_{i,j in S} Y_ij
            const double delta =
                2.0 * rowsum[a] - y(a, a) - 2.0 * rowsum[b] + 2.0 * y(a, b) - y(b, b);
            if (delta <= 0.0 || rng.u01() < std::exp(-beta * delta)) {
                support[pick_in] = b;
                in_support[a] = false;
                in_support[b] = true;
                for (std::size_t i = 0; i < n; ++i) rowsum[i] += y(i, b) - y(i, a);
                corr += (signal.contains(b) ? 1 : 0) - (signal.contains(a) ? 1 : 0);
            }
            if (corr >= level && corr <= 2 * level) {
                tau[r] = t;
                break;
            }
        }
    }

    HittingTimeCurve curve;
    curve.depth = rep_well.depth;
    curve.replicas = replicas;
    curve.times = checkpoints;
    for (std::size_t t : checkpoints) {
        std::size_t hits = 0;
        for (std::size_t ta : tau)
            if (ta <= t) ++hits;
        curve.empirical.push_back(static_cast<double>(hits) / static_cast<double>(replicas));
        curve.bound.push_back(static_cast<double>(t) * std::exp(-rep_well.depth));
    }
    return curve;
}

HillClimbResult hill_climb(const SparseSlice& space, const EnergyFn& energy,
                           std::vector<std::uint32_t> start) {
    std::sort(start.begin(), start.end());
    HillClimbResult res;
    res.optimum = std::move(start);
    res.energy = energy(res.optimum);
    res.trajectory.push_back(res.energy);
    const std::size_t n = space.n;
    while (true) {
        double best = res.energy;
        std::vector<std::uint32_t> best_state;
        std::vector<bool> in_support(n, false);
        for (auto i : res.optimum) in_support[i] = true;
        // deterministic neighbor order: support slot ascending, then new index ascending
        for (std::size_t slot = 0; slot < space.k; ++slot) {
            for (std::uint32_t b = 0; b < n; ++b) {
                if (in_support[b]) continue;
                std::vector<std::uint32_t> neighbor = res.optimum;
                neighbor[slot] = b;
                std::sort(neighbor.begin(), neighbor.end());
                const double e = energy(neighbor);
                if (e < best) {  // strict improvement; first best wins on ties
                    best = e;
                    best_state = std::move(neighbor);
                }
            }
        }
        if (best_state.empty()) break;
        res.optimum = std::move(best_state);
        res.energy = best;
        res.trajectory.push_back(best);
        ++res.steps;
    }
    return res;
}

// --- Franz-Parisi barrier ---------------------------------------------------------

BarrierReport fp_barrier_pipeline(const BarrierExperiment& exp, std::size_t draws, Rng& rng) {
    const std::size_t dim = exp.dim;
    if (dim > 20) throw std::invalid_argument("fp_barrier_pipeline: state space too large");
    const auto law = lowdeg::rademacher_overlap_law(dim);

    BarrierReport rep;
    rep.draws = draws;
    rep.delta = lowdeg::overlap_quantile_delta_exact(law, exp.deviations);
    rep.lambda_tilde_sq = exp.beta * exp.lambda * (2.0 + exp.epsilon) / (1.0 - 2.0 * exp.epsilon);
    const double dev_shift = exp.deviations + std::log(2.0);
    // FP(D + log 2, lambda-tilde) with the kernel exp(lambda-tilde^2 s), in log space
    {
        const double delta_t = lowdeg::overlap_quantile_delta_exact(law, dev_shift);
        std::vector<double> terms;
        for (std::size_t i = 0; i < law.values.size(); ++i)
            if (std::abs(law.values[i]) <= delta_t && law.probs[i] > 0.0)
                terms.push_back(std::log(law.probs[i]) + rep.lambda_tilde_sq * law.values[i]);
        rep.fp_log = logsumexp(terms);
    }
    const double log_bound = std::log(2.0) +
                             (1.0 - 2.0 * exp.epsilon) * (std::log(2.0) + rep.fp_log) -
                             exp.epsilon * exp.deviations;
    rep.bound = std::exp(log_bound);

    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    const std::size_t states = std::size_t(1) << dim;
    std::vector<double> z(dim);
    std::size_t violations = 0;
    for (std::size_t d = 0; d < draws; ++d) {
        for (auto& v : z) v = rng.normal();
        // Y = lambda u + Z with u = all +1/sqrt(N)
        LogSumExp mass_a, mass_b;
        bool b_nonempty = false;
        for (std::size_t mask = 0; mask < states; ++mask) {
            double dot = 0.0;
            int pop = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                const bool neg = (mask >> i) & 1;
                const double vi = neg ? -scale : scale;
                dot += vi * (exp.lambda * scale + z[i]);
                pop += neg ? 1 : 0;
            }
            const double overlap =
                (static_cast<double>(dim) - 2.0 * pop) / static_cast<double>(dim);
            const double lw = exp.beta * dot;  // H = -<v, Y>
            if (std::abs(overlap) <= rep.delta) mass_a.add(lw);
            else if (overlap > rep.delta && overlap <= (1.0 + exp.epsilon) * rep.delta) {
                mass_b.add(lw);
                b_nonempty = true;
            }
        }
        if (!b_nonempty) { ++rep.b_empty_draws; continue; }
        const double log_ratio = mass_b.value() - mass_a.value();
        if (log_ratio > log_bound) ++violations;
    }
    rep.violation_rate = static_cast<double>(violations) / static_cast<double>(draws);
    const double p = std::exp(-exp.epsilon * exp.deviations);
    rep.violation_allowance =
        p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
    return rep;
}

double bayesian_temperature_residual(std::size_t dim, double lambda, Rng& rng) {
    if (dim > 16) throw std::invalid_argument("bayesian_temperature_residual: dim too large");
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) y[i] = lambda * scale + rng.normal();

    const std::size_t states = std::size_t(1) << dim;
    std::vector<double> lw_gibbs(states), lw_posterior(states);
    for (std::size_t mask = 0; mask < states; ++mask) {
        double dot = 0.0, dist2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double vi = ((mask >> i) & 1) ? -scale : scale;
            dot += vi * y[i];
            dist2 += sq(y[i] - lambda * vi);
        }
        lw_gibbs[mask] = lambda * dot;        // nu_lambda, H = -<v,Y>, beta = lambda
        lw_posterior[mask] = -0.5 * dist2;    // exact posterior for uniform prior on S
    }
    const auto gibbs = freeenergy::GibbsTable::from_log_weights(std::move(lw_gibbs));
    const auto post = freeenergy::GibbsTable::from_log_weights(std::move(lw_posterior));
    double worst = 0.0;
    for (std::size_t i = 0; i < states; ++i)
        worst = std::max(worst, std::abs(gibbs.probs[i] - post.probs[i]));
    return worst;
}

LocalChainReport local_chain_hitting_bound(const LocalChainExperiment& exp, std::size_t replicas,
                                           Rng& rng) {
    const std::size_t m = exp.states;
    if (m < 8 || m % 2 != 0) throw std::invalid_argument("local_chain_hitting_bound: bad state count");
    if (m > 200000) throw std::invalid_argument("local_chain_hitting_bound: state space too large");

    // overlap law of two uniform circle points: cos(2 pi d / m), d uniform
    lowdeg::DiscreteOverlapLaw law;
    law.values.reserve(m);
    law.probs.assign(m, 1.0 / static_cast<double>(m));
    for (std::size_t d = 0; d < m; ++d)
        law.values.push_back(std::cos(2.0 * M_PI * static_cast<double>(d) / static_cast<double>(m)));

    LocalChainReport rep;
    rep.replicas = replicas;
    rep.delta = lowdeg::overlap_quantile_delta_exact(law, exp.deviations);
    rep.step_size = 2.0 * std::sin(M_PI / static_cast<double>(m));
    if (rep.step_size > exp.epsilon * rep.delta)
        throw std::invalid_argument(
            "local_chain_hitting_bound: chain is not Delta-local with Delta <= eps * delta");

    const double lambda_tilde_sq =
        exp.beta * exp.lambda * (2.0 + exp.epsilon) / (1.0 - 2.0 * exp.epsilon);
    lowdeg::DiscreteOverlapLaw law2 = law;
    const double dev_shift = exp.deviations + std::log(2.0);
    const double delta_t = lowdeg::overlap_quantile_delta_exact(law2, dev_shift);
    std::vector<double> terms;
    for (std::size_t i = 0; i < law.values.size(); ++i)
        if (std::abs(law.values[i]) <= delta_t)
            terms.push_back(std::log(law.probs[i]) + lambda_tilde_sq * law.values[i]);
    const double fp_log = logsumexp(terms);
    const double log_bound = 0.5 * exp.epsilon * exp.deviations - std::log(2.0) -
                             (1.0 - 2.0 * exp.epsilon) * (std::log(2.0) + fp_log);
    rep.bound = std::exp(log_bound);
    if (rep.bound < 1.0) {
        rep.vacuous = true;  // every hitting time satisfies tau >= bound
        return rep;
    }

    // chain: Metropolis over single-step rotations, stationary nu_beta
    std::vector<double> angles_cos(m), angles_sin(m);
    for (std::size_t j = 0; j < m; ++j) {
        angles_cos[j] = std::cos(2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m));
        angles_sin[j] = std::sin(2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m));
    }
    std::size_t below = 0;
    const auto t_stop = static_cast<std::size_t>(
        std::min(static_cast<double>(exp.t_max), std::ceil(rep.bound)));
    std::vector<double> lw(m);
    for (std::size_t r = 0; r < replicas; ++r) {
        const double y0 = exp.lambda + rng.normal();  // u = (1, 0)
        const double y1 = rng.normal();
        std::vector<double> a_probs;
        std::vector<std::size_t> a_idx;
        for (std::size_t j = 0; j < m; ++j) {
            lw[j] = exp.beta * (angles_cos[j] * y0 + angles_sin[j] * y1);
            if (std::abs(angles_cos[j]) <= rep.delta) a_idx.push_back(j);
        }
        const double lw_max = *std::max_element(lw.begin(), lw.end());
        double a_mass = 0.0;
        for (std::size_t j : a_idx) {
            a_mass += std::exp(lw[j] - lw_max);
            a_probs.push_back(a_mass);
        }
        const double u = rng.u01() * a_mass;
        std::size_t pos = a_idx[static_cast<std::size_t>(
            std::lower_bound(a_probs.begin(), a_probs.end(), u) - a_probs.begin())];

        std::size_t tau = t_stop + 1;
        for (std::size_t t = 1; t <= t_stop; ++t) {
            const std::size_t next = rng.bernoulli(0.5) ? (pos + 1) % m : (pos + m - 1) % m;
            const double delta_lw = lw[next] - lw[pos];
            if (delta_lw >= 0.0 || rng.u01() < std::exp(delta_lw)) pos = next;
            if (angles_cos[pos] > rep.delta) { tau = t; break; }
        }
        if (static_cast<double>(tau) < rep.bound) ++below;
    }
    rep.below_bound_rate = static_cast<double>(below) / static_cast<double>(replicas);
    const double p = std::exp(-0.5 * exp.epsilon * exp.deviations);
    rep.allowance = p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(replicas));
    return rep;
}

}  // namespace gaplab::mcmc

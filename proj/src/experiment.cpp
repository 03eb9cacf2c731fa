#include "gaplab/experiment.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "gaplab/stats.hpp"

#include "gaplab/cumulants.hpp"
#include "gaplab/detect.hpp"
#include "gaplab/freeenergy.hpp"
#include "gaplab/io.hpp"
#include "gaplab/lowdeg.hpp"
#include "gaplab/mcmc.hpp"
#include "gaplab/models.hpp"
#include "gaplab/ogp.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/skcert.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab::experiment {

namespace {

double num(const json& params, const std::string& key) {
    if (!params.contains(key)) throw ConfigError("missing parameter: " + key);
    return params.at(key).get<double>();
}

double num_or(const json& params, const std::string& key, double fallback) {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
}

std::size_t index_of(const json& params, const std::string& key) {
    const double v = num(params, key);
    if (v < 0.0) throw ConfigError("parameter must be non-negative: " + key);
    return static_cast<std::size_t>(v);
}

std::vector<double> grid(const json& params, const std::string& key) {
    if (!params.contains(key)) throw ConfigError("missing parameter: " + key);
    const auto& g = params.at(key);
    if (!g.is_array()) throw ConfigError("parameter must be an array: " + key);
    std::vector<double> out;
    for (const auto& v : g) out.push_back(v.get<double>());
    if (out.empty()) throw ConfigError("empty grid: " + key);
    return out;
}

struct RunContext {
    std::uint64_t seed = 0;
    int threads = 1;
    json params;
};

using Runner = std::function<Result(const RunContext&)>;

// --- runners, one per operation family -----------------------------------------

Result run_goe_edge(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto draws = index_of(ctx.params, "draws");
    auto values = map_replicas<double>(ctx.seed, 0, draws, ctx.threads,
                                       [&](std::size_t, Rng& rng) {
                                           auto w = models::sample_goe(
                                               n, models::GoeScale::normalized, rng);
                                           return spectral::top_eigenpair_checked(w, 1e-8).value;
                                       });
    io::CsvWriter csv({"draw", "lambda_max"});
    RunningStat stat;
    for (std::size_t i = 0; i < values.size(); ++i) {
        csv.add_row({static_cast<double>(i), values[i]});
        stat.add(values[i]);
    }
    Result r;
    r.csv = csv.str();
    r.summary["mean_lambda_max"] = stat.mean();
    r.summary["stderr"] = stat.stderr_mean();
    return r;
}

Result run_separation(const RunContext& ctx) {
    const double mu = num(ctx.params, "mu");
    const auto budget = index_of(ctx.params, "mc_budget");
    Rng rng(ctx.seed, 0);
    auto rep = detect::separation_ratio([mu](Rng& r) { return mu + r.normal(); },
                                        [](Rng& r) { return r.normal(); }, budget, rng);
    io::CsvWriter csv({"mu", "mean_p", "mean_q", "var_p", "var_q", "ratio"});
    csv.add_row({mu, rep.mean_p, rep.mean_q, rep.var_p, rep.var_q, rep.ratio});
    Result r;
    r.csv = csv.str();
    r.summary["classification"] = rep.classification;
    r.summary["ratio"] = rep.ratio;
    return r;
}

Result run_lr_second_moment(const RunContext& ctx) {
    const double lambda = num(ctx.params, "lambda");
    const auto budget = index_of(ctx.params, "mc_budget");
    const auto ns = grid(ctx.params, "n_grid");
    io::CsvWriter csv({"n", "log_estimate", "stderr_log", "exact_log"});
    Rng rng(ctx.seed, 0);
    for (double nd : ns) {
        const auto n = static_cast<std::size_t>(nd);
        const double scale = 1.0 / static_cast<double>(n);
        auto overlaps = [n, scale](Rng& r) {
            long s = 0;
            for (std::size_t i = 0; i < n; ++i) s += r.rademacher();
            return static_cast<double>(s) * scale;
        };
        const auto est = detect::lr_second_moment(overlaps, lambda, n, budget, rng);
        csv.add_row({nd, est.log_value, est.stderr_log,
                     detect::lr_second_moment_rademacher_exact_log(lambda, n)});
    }
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_subgaussian_tail(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");  // sum of n Rademachers, proxy n
    const auto budget = index_of(ctx.params, "mc_budget");
    const auto as = grid(ctx.params, "a_grid");
    Rng rng(ctx.seed, 0);
    auto sampler = [n](Rng& r) {
        long s = 0;
        for (std::size_t i = 0; i < n; ++i) s += r.rademacher();
        return static_cast<double>(s);
    };
    io::CsvWriter csv({"a", "bound", "empirical"});
    bool all_below = true;
    for (double a : as) {
        const double bound = detect::subgaussian_tail_bound(static_cast<double>(n), a);
        const double emp = detect::empirical_tail(sampler, a, budget, rng);
        const double sigma = std::sqrt(std::max(emp, 1.0 / budget) / budget);
        all_below = all_below && emp <= bound + 3.0 * sigma;
        csv.add_row({a, bound, emp});
    }
    Result r;
    r.csv = csv.str();
    r.summary["all_below_bound"] = all_below;
    return r;
}

Result run_spiked_bbp(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto draws = index_of(ctx.params, "draws");
    const auto lambdas = grid(ctx.params, "lambda_grid");
    io::CsvWriter csv({"lambda", "mean_overlap", "stderr"});
    Result r;
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        const double lambda = lambdas[li];
        // effective spike sqrt(lambda) against unit-edge-2 noise
        const double theta = std::sqrt(lambda);
        auto vals = map_replicas<double>(
            ctx.seed, li * draws, draws, ctx.threads, [&](std::size_t, Rng& rng) {
                auto inst = models::sample_spiked_wigner(
                    n, theta, models::rademacher_normalized_prior(), true, rng);
                return detect::bbp_overlap(inst);
            });
        RunningStat stat;
        for (double v : vals) stat.add(v);
        csv.add_row({lambda, stat.mean(), stat.stderr_mean()});
    }
    r.csv = csv.str();
    return r;
}

Result run_sbm_ldlr(const RunContext& ctx) {
    const auto k = static_cast<int>(num(ctx.params, "k"));
    const double d = num(ctx.params, "d");
    const double eta = num(ctx.params, "eta");
    const auto degree = static_cast<int>(num(ctx.params, "degree"));
    const auto budget = index_of(ctx.params, "mc_budget");
    const auto ns = grid(ctx.params, "n_grid");
    io::CsvWriter csv({"n", "degree", "d", "eta", "bound", "stderr"});
    Rng rng(ctx.seed, 0);
    for (double nd : ns) {
        const auto est = lowdeg::sbm_ldlr_bound(static_cast<std::size_t>(nd), k, d, eta, degree,
                                                budget, rng);
        csv.add_row({nd, static_cast<double>(degree), d, eta, est.value, est.stderr_mean});
    }
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_triangle_stat(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto k = index_of(ctx.params, "k");
    const double q = num(ctx.params, "q");
    const double s = num(ctx.params, "s");
    const auto m = static_cast<int>(num(ctx.params, "M"));
    const auto draws = index_of(ctx.params, "draws");
    auto vals = map_replicas<double>(ctx.seed, 0, draws, ctx.threads,
                                     [&](std::size_t, Rng& rng) {
                                         auto inst = models::sample_binary_community(
                                             n, k, q, s, m, rng);
                                         return detect::signed_triangle_stat_trace(*inst.graph, q);
                                     });
    io::CsvWriter csv({"draw", "stat"});
    RunningStat stat;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        csv.add_row({static_cast<double>(i), vals[i]});
        stat.add(vals[i]);
    }
    const auto formulas = detect::triangle_moment_formulas(n, static_cast<double>(k), q, s, m);
    Result r;
    r.csv = csv.str();
    r.summary["mean"] = stat.mean();
    r.summary["variance"] = stat.variance();
    r.summary["analytic_mean"] = formulas.mean;
    r.summary["variance_bound"] = formulas.variance_bound;
    return r;
}

Result run_cumulants_kappa(const RunContext& ctx) {
    const double lambda = num(ctx.params, "lambda");
    const double rho = num(ctx.params, "rho");
    const auto n = static_cast<int>(num(ctx.params, "n"));
    const auto max_edges = static_cast<int>(num(ctx.params, "max_edges"));
    if (n > 5 || max_edges > 5) throw ConfigError("cumulants_kappa: n <= 5 and max_edges <= 5");
    lowdeg::KappaTable table(lowdeg::planted_submatrix_oracle(lambda, rho));
    io::CsvWriter csv({"alpha", "edges", "kappa", "magnitude_bound"});
    for (const auto& g : lowdeg::enumerate_multigraphs(n, max_edges)) {
        std::string name = g.key();
        if (name.empty()) name = "empty";
        csv.add_row_raw({name, io::format_double(g.total_edges()),
                         io::format_double(table.kappa(g)),
                         io::format_double(lowdeg::kappa_magnitude_bound(g, lambda, rho))});
    }
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_corr_mmse_bound(const RunContext& ctx) {
    const double lambda = num(ctx.params, "lambda");
    const double rho = num(ctx.params, "rho");
    const double n = num(ctx.params, "n");
    const auto degree = static_cast<int>(num(ctx.params, "degree"));
    const auto ledger = lowdeg::corr_ld_bound(lambda, rho, n, degree);
    io::CsvWriter csv({"h", "log_term"});
    for (const auto& t : ledger.terms) csv.add_row({static_cast<double>(t.h), t.log_value});
    Result r;
    r.csv = csv.str();
    r.summary["bound"] = ledger.bound;
    r.summary["mmse_ld"] = ledger.mmse_ld;
    return r;
}

Result run_adv_two_planted(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const double k = num(ctx.params, "k");
    const double lambda = num(ctx.params, "lambda");
    const auto m = static_cast<int>(num(ctx.params, "M"));
    const auto m_prime = static_cast<int>(num(ctx.params, "M_prime"));
    const auto degree = static_cast<int>(num(ctx.params, "degree"));
    const auto prior_p = lowdeg::community_gaussian_prior(n, k, lambda, m);
    const auto prior_q = lowdeg::community_gaussian_prior(n, k, lambda, m_prime);
    lowdeg::RAlphaTable table(lowdeg::discrete_pair_oracle(prior_p, prior_q));
    const std::size_t coords = n * (n + 1) / 2;
    const double adv = lowdeg::adv_bound_gaussian(table, coords, degree);
    Result r;
    io::CsvWriter csv({"coords", "degree", "adv_bound"});
    csv.add_row({static_cast<double>(coords), static_cast<double>(degree), adv});
    r.csv = csv.str();
    r.summary["adv_bound"] = adv;
    return r;
}

Result run_scalar_channel(const RunContext& ctx) {
    const std::string prior = ctx.params.value("prior", "gaussian");
    freeenergy::ScalarChannel channel =
        prior == "gaussian"     ? freeenergy::ScalarChannel::gaussian()
        : prior == "rademacher" ? freeenergy::ScalarChannel::rademacher()
                                : freeenergy::ScalarChannel::two_point(num(ctx.params, "p"));
    const auto lambdas = grid(ctx.params, "lambda_grid");
    io::CsvWriter csv({"lambda", "psi", "mmse", "immse_residual"});
    for (double l : lambdas)
        csv.add_row({l, channel.psi(l), channel.mmse(l), freeenergy::immse_residual(channel, l, 1e-3)});
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_needle(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto budget = index_of(ctx.params, "mc_budget");
    const auto lambdas = grid(ctx.params, "lambda_grid");
    io::CsvWriter csv({"lambda", "free_energy", "stderr"});
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        // draw-parallel with per-replica streams, deterministic reduction
        auto vals = map_replicas<double>(
            ctx.seed, li * budget, budget, ctx.threads, [&](std::size_t, Rng& rng) {
                return freeenergy::needle_free_energy(n, lambdas[li], 1, rng).free_energy;
            });
        RunningStat stat;
        for (double v : vals) stat.add(v);
        csv.add_row({lambdas[li], stat.mean(), stat.stderr_mean()});
    }
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_rs_fixed_point(const RunContext& ctx) {
    const std::string prior = ctx.params.value("prior", "gaussian");
    freeenergy::ScalarChannel channel =
        prior == "gaussian"     ? freeenergy::ScalarChannel::gaussian()
        : prior == "rademacher" ? freeenergy::ScalarChannel::rademacher()
                                : freeenergy::ScalarChannel::two_point(num(ctx.params, "p"));
    const auto lambdas = grid(ctx.params, "lambda_grid");
    const auto curve = freeenergy::mmse_limit_curve(channel, lambdas);
    io::CsvWriter csv({"lambda", "q_star", "mmse_limit"});
    json diag = json::array();
    for (const auto& pt : curve.points) {
        csv.add_row({pt.lambda, pt.q_star, pt.mmse_limit});
        const auto fp = freeenergy::rs_fixed_point(channel, pt.lambda);
        json d;
        d["lambda"] = pt.lambda;
        d["fixed_points"] = fp.fixed_points;
        d["tie"] = fp.tie;
        diag.push_back(d);
    }
    Result r;
    r.csv = csv.str();
    r.summary["dmse"] = curve.dmse;
    r.summary["lambda_c"] = curve.lambda_c;
    r.summary["transition_found"] = curve.transition_found;
    r.summary["diagnostics"] = diag;
    return r;
}

Result run_ld_fp_sweep(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto budget = index_of(ctx.params, "mc_budget");
    const auto lambdas = grid(ctx.params, "lambda_grid");
    const auto degrees = grid(ctx.params, "degree_grid");
    io::CsvWriter csv({"n", "degree", "lambda", "ld", "ld_stderr", "fp", "fp_stderr", "delta"});
    Rng rng(ctx.seed, 0);
    auto overlaps = [n](Rng& r) {
        long s = 0;
        for (std::size_t i = 0; i < n; ++i) s += r.rademacher();
        return static_cast<double>(s) / static_cast<double>(n);
    };
    for (double dd : degrees)
        for (double lambda : lambdas) {
            const int degree = static_cast<int>(dd);
            const auto ld = lowdeg::ld_value(overlaps, lambda, degree, budget, rng);
            const auto fp = lowdeg::fp_value(overlaps, lambda, static_cast<double>(degree),
                                             budget, rng);
            csv.add_row({static_cast<double>(n), dd, lambda, ld.value, ld.stderr_mean, fp.value,
                         fp.stderr_mean, fp.delta.delta});
        }
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_mcmc_well(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto k = index_of(ctx.params, "k");
    const auto k_prime = index_of(ctx.params, "k_prime");
    const double lambda = num(ctx.params, "lambda");
    const auto betas = grid(ctx.params, "beta_grid");
    const auto levels = grid(ctx.params, "level_grid");
    const auto draws = index_of(ctx.params, "draws");
    io::CsvWriter csv({"draw", "beta", "level", "depth", "a_empty", "b_empty"});
    for (std::size_t d = 0; d < draws; ++d) {
        Rng rng(ctx.seed, d);
        const auto inst = models::sample_sparse_pca(n, k, lambda, rng);
        SparseIndicator signal;
        signal.n = n;
        for (std::size_t i = 0; i < n; ++i)
            if (inst.signal[i] != 0.0) signal.support.push_back(static_cast<std::uint32_t>(i));
        for (double beta : betas)
            for (double level : levels) {
                const auto rep = mcmc::well_depth(*inst.matrix, signal, beta,
                                                  static_cast<std::size_t>(level), k_prime);
                csv.add_row({static_cast<double>(d), beta, level, rep.depth,
                             rep.a_empty ? 1.0 : 0.0, rep.b_empty ? 1.0 : 0.0});
            }
    }
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_hitting_time(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto k = index_of(ctx.params, "k");
    const auto k_prime = index_of(ctx.params, "k_prime");
    const double lambda = num(ctx.params, "lambda");
    const double beta = num(ctx.params, "beta");
    const auto level = index_of(ctx.params, "level");
    const auto t_max = index_of(ctx.params, "t_max");
    const auto replicas = index_of(ctx.params, "replicas");
    Rng rng(ctx.seed, 0);
    const auto inst = models::sample_sparse_pca(n, k, lambda, rng);
    SparseIndicator signal;
    signal.n = n;
    for (std::size_t i = 0; i < n; ++i)
        if (inst.signal[i] != 0.0) signal.support.push_back(static_cast<std::uint32_t>(i));
    std::vector<std::size_t> checkpoints;
    for (std::size_t t = 1; t <= t_max; t *= 10) checkpoints.push_back(t);
    if (checkpoints.back() != t_max) checkpoints.push_back(t_max);
    const auto curve = mcmc::hitting_time_experiment(*inst.matrix, signal, beta, level, k_prime,
                                                     t_max, replicas, checkpoints, rng);
    io::CsvWriter csv({"t", "empirical", "bound"});
    for (std::size_t i = 0; i < curve.times.size(); ++i)
        csv.add_row({static_cast<double>(curve.times[i]), curve.empirical[i], curve.bound[i]});
    Result r;
    r.csv = csv.str();
    r.summary["depth"] = curve.depth;
    return r;
}

Result run_fp_barrier(const RunContext& ctx) {
    mcmc::BarrierExperiment exp;
    exp.dim = index_of(ctx.params, "dim");
    exp.lambda = num(ctx.params, "lambda");
    exp.beta = num(ctx.params, "beta");
    exp.epsilon = num_or(ctx.params, "epsilon", 0.25);
    exp.deviations = num_or(ctx.params, "deviations", 4.0);
    const auto draws = index_of(ctx.params, "draws");
    Rng rng(ctx.seed, 0);
    const auto rep = mcmc::fp_barrier_pipeline(exp, draws, rng);
    io::CsvWriter csv({"dim", "lambda", "beta", "delta", "bound", "violation_rate", "allowance"});
    csv.add_row({static_cast<double>(exp.dim), exp.lambda, exp.beta, rep.delta, rep.bound,
                 rep.violation_rate, rep.violation_allowance});
    Result r;
    r.csv = csv.str();
    r.summary["fp_log"] = rep.fp_log;
    r.summary["violation_rate"] = rep.violation_rate;
    r.summary["allowance"] = rep.violation_allowance;
    return r;
}

Result run_npp_ogp(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const double epsilon = num(ctx.params, "epsilon");
    const auto draws = index_of(ctx.params, "draws");
    const auto rho = ogp::npp_certified_rho(n, epsilon);
    if (!rho) throw std::runtime_error("npp_ogp: no certified rho at these parameters");
    auto counts = map_replicas<std::array<double, 3>>(
        ctx.seed, 0, draws, ctx.threads, [&](std::size_t, Rng& rng) {
            const auto x = models::sample_npp(n, rng);
            const auto scan = ogp::npp_exhaustive_scan(x, epsilon);
            double min_energy = std::numeric_limits<double>::infinity();
            for (double e : scan.energies) min_energy = std::min(min_energy, e);
            return std::array<double, 3>{static_cast<double>(scan.solutions.size()),
                                         static_cast<double>(scan.forbidden_pairs(*rho, n)),
                                         min_energy};
        });
    io::CsvWriter csv({"draw", "solutions", "forbidden_pairs", "min_energy"});
    std::size_t draws_with_pair = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        csv.add_row({static_cast<double>(i), counts[i][0], counts[i][1], counts[i][2]});
        if (counts[i][1] > 0) ++draws_with_pair;
    }
    Result r;
    r.csv = csv.str();
    r.summary["certified_rho"] = *rho;
    r.summary["exponent"] = ogp::npp_first_moment_exponent(n, epsilon, *rho).exponent;
    r.summary["fraction_with_forbidden_pair"] =
        static_cast<double>(draws_with_pair) / static_cast<double>(draws);
    return r;
}

Result run_npp_certificates(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto epsilons = grid(ctx.params, "epsilon_grid");
    const auto rhos = grid(ctx.params, "rho_grid");
    io::CsvWriter csv({"epsilon", "rho", "exponent", "certified"});
    for (double eps : epsilons)
        for (double rho : rhos) {
            const auto cert = ogp::npp_first_moment_exponent(n, eps, rho);
            csv.add_row({eps, rho, cert.exponent, cert.certified ? 1.0 : 0.0});
        }
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_nishimori(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const double lambda = num(ctx.params, "lambda");
    const auto draws = index_of(ctx.params, "draws");
    Rng rng(ctx.seed, 0);
    const auto rep = freeenergy::nishimori_check(n, lambda, draws, rng);
    io::CsvWriter csv({"n", "lambda", "quad_discrepancy", "quad_stderr", "factorization_residual"});
    csv.add_row({static_cast<double>(n), lambda, rep.quad_discrepancy, rep.quad_stderr,
                 rep.factorization_residual});
    Result r;
    r.csv = csv.str();
    r.summary["within_3_sigma"] = rep.quad_discrepancy <= 3.0 * rep.quad_stderr;
    return r;
}

Result run_pspin_stability(const RunContext& ctx) {
    const auto dim = index_of(ctx.params, "dim");
    const auto out_dim = index_of(ctx.params, "out_dim");
    const auto degree = static_cast<int>(num(ctx.params, "degree"));
    const double rho = num(ctx.params, "rho");
    const auto n_polys = index_of(ctx.params, "n_polys");
    const auto budget = index_of(ctx.params, "mc_budget");
    io::CsvWriter csv(
        {"poly", "mean_discrepancy", "mean_bound", "tail_empirical", "tail_bound"});
    bool all_hold = true;
    for (std::size_t i = 0; i < n_polys; ++i) {
        Rng rng(ctx.seed, i);
        const auto f = ogp::random_hermite_polynomial(dim, out_dim, degree, 40, rng);
        const auto rep = ogp::poly_stability_check(f, rho, budget, rng);
        csv.add_row({static_cast<double>(i), rep.mean_discrepancy, rep.mean_bound,
                     rep.tail_empirical, rep.tail_bound});
        all_hold = all_hold && rep.mean_discrepancy <= rep.mean_bound + 3.0 * rep.mean_stderr &&
                   rep.tail_empirical <= rep.tail_bound + 3.0 * rep.tail_stderr;
    }
    Result r;
    r.csv = csv.str();
    r.summary["all_hold"] = all_hold;
    return r;
}

Result run_sk_cert(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto draws = index_of(ctx.params, "draws");
    struct Row {
        double brute, abssum, spectral, signround;
    };
    const bool brute_ok = n <= 22;
    auto rows = map_replicas<Row>(ctx.seed, 0, draws, ctx.threads, [&](std::size_t, Rng& rng) {
        const auto w = models::sample_goe(n, models::GoeScale::normalized, rng);
        Row row{};
        row.brute = brute_ok ? skcert::sk_bruteforce(w).value : 0.0;
        row.abssum = skcert::abssum_cert(w).value;
        row.spectral = skcert::spectral_cert(w).value;
        row.signround = skcert::sign_rounding_search(w).value;
        return row;
    });
    RunningStat brute, abssum, spectral, signround;
    for (const auto& row : rows) {
        if (brute_ok) brute.add(row.brute);
        abssum.add(row.abssum);
        spectral.add(row.spectral);
        signround.add(row.signround);
    }
    io::CsvWriter csv({"n", "method", "mean", "stderr"});
    const double nd = static_cast<double>(n);
    if (brute_ok) csv.add_row_raw({io::format_double(nd), "brute", io::format_double(brute.mean()),
                                   io::format_double(brute.stderr_mean())});
    csv.add_row_raw({io::format_double(nd), "abssum", io::format_double(abssum.mean()),
                     io::format_double(abssum.stderr_mean())});
    csv.add_row_raw({io::format_double(nd), "spectral", io::format_double(spectral.mean()),
                     io::format_double(spectral.stderr_mean())});
    csv.add_row_raw({io::format_double(nd), "signround", io::format_double(signround.mean()),
                     io::format_double(signround.stderr_mean())});
    Result r;
    r.csv = csv.str();
    r.summary["slepian_constant"] = skcert::slepian_bound_constant();
    r.summary["mean_spectral"] = spectral.mean();
    r.summary["mean_signround"] = signround.mean();
    if (brute_ok) r.summary["mean_brute"] = brute.mean();
    return r;
}

Result run_quiet_planting(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto draws = index_of(ctx.params, "draws");
    const auto cs = grid(ctx.params, "c_grid");
    Rng rng(ctx.seed, 0);
    const auto points = skcert::quiet_planting_experiment(n, cs, draws, rng);
    io::CsvWriter csv({"c", "auc", "mean_planted_value"});
    for (const auto& pt : points) csv.add_row({pt.c, pt.auc, pt.mean_planted_value});
    Result r;
    r.csv = csv.str();
    return r;
}

Result run_pspin_energy(const RunContext& ctx) {
    const auto n = index_of(ctx.params, "n");
    const auto p = index_of(ctx.params, "p");
    const auto draws = index_of(ctx.params, "draws");
    io::CsvWriter csv({"draw", "energy_at_ones"});
    std::vector<double> x(n, 1.0);  // on the sphere ||x|| = sqrt(n)
    for (std::size_t d = 0; d < draws; ++d) {
        Rng rng(ctx.seed, d);
        const auto inst = models::sample_pspin(n, p, rng);
        csv.add_row({static_cast<double>(d), models::pspin_energy(x, *inst.tensor)});
    }
    Result r;
    r.csv = csv.str();
    return r;
}

struct KindEntry {
    KindInfo info;
    Runner runner;
};

const std::vector<KindEntry>& registry() {
    static const std::vector<KindEntry> entries = {
        {{"goe_edge", "GOE top-eigenvalue statistics", {"n", "draws"}}, run_goe_edge},
        {{"separation", "mean-shift separation ratio on the univariate Gaussian pair",
          {"mu", "mc_budget"}},
         run_separation},
        {{"lr_second_moment", "likelihood-ratio second moment of the spiked Wigner model",
          {"lambda", "n_grid", "mc_budget"}},
         run_lr_second_moment},
        {{"subgaussian_tail", "sub-Gaussian tail bound vs empirical tails",
          {"n", "a_grid", "mc_budget"}},
         run_subgaussian_tail},
        {{"spiked_bbp", "spectral outlier and eigenvector overlap of the spiked model",
          {"n", "draws", "lambda_grid"}},
         run_spiked_bbp},
        {{"sbm_ldlr", "low-degree bound for block-model detection",
          {"n_grid", "k", "d", "eta", "degree", "mc_budget"}},
         run_sbm_ldlr},
        {{"triangle_stat", "signed triangle statistic for community counting",
          {"n", "k", "q", "s", "M", "draws"}},
         run_triangle_stat},
        {{"cumulants_kappa", "cumulant recursion table for the planted submatrix model",
          {"lambda", "rho", "n", "max_edges"}},
         run_cumulants_kappa},
        {{"corr_mmse_bound", "low-degree correlation bound and MMSE certificate",
          {"lambda", "rho", "n", "degree"}},
         run_corr_mmse_bound},
        {{"adv_two_planted", "degree-D advantage bound between two planted models",
          {"n", "k", "lambda", "M", "M_prime", "degree"}},
         run_adv_two_planted},
        {{"scalar_channel", "scalar-channel free energy, MMSE and the I-MMSE relation",
          {"lambda_grid"}},
         run_scalar_channel},
        {{"needle", "needle-in-a-haystack free energy", {"n", "lambda_grid", "mc_budget"}},
         run_needle},
        {{"rs_fixed_point", "replica-symmetric fixed point and limiting MMSE curve",
          {"lambda_grid"}},
         run_rs_fixed_point},
        {{"ld_fp_sweep", "truncated-exponential LD and Franz-Parisi sweeps",
          {"n", "lambda_grid", "degree_grid", "mc_budget"}},
         run_ld_fp_sweep},
        {{"mcmc_well", "free-energy well depth on the sparse slice",
          {"n", "k", "k_prime", "lambda", "beta_grid", "level_grid", "draws"}},
         run_mcmc_well},
        {{"hitting_time", "Metropolis hitting times against the well-depth bound",
          {"n", "k", "k_prime", "lambda", "beta", "level", "t_max", "replicas"}},
         run_hitting_time},
        {{"fp_barrier", "Franz-Parisi free-energy barrier on the scaled hypercube",
          {"dim", "lambda", "beta", "draws"}},
         run_fp_barrier},
        {{"npp_ogp", "number-partitioning overlap-gap certificates",
          {"n", "epsilon", "draws"}},
         run_npp_ogp},
        {{"npp_certificates", "first-moment exponent table over (epsilon, rho)",
          {"n", "epsilon_grid", "rho_grid"}},
         run_npp_certificates},
        {{"nishimori", "ground-truth replica identity on the enumerated posterior",
          {"n", "lambda", "draws"}},
         run_nishimori},
        {{"pspin_stability", "low-degree polynomial stability on correlated tensors",
          {"dim", "out_dim", "degree", "rho", "n_polys", "mc_budget"}},
         run_pspin_stability},
        {{"pspin_energy", "tensor objective evaluation", {"n", "p", "draws"}}, run_pspin_energy},
        {{"sk_cert", "certificates and search for the hypercube quadratic maximum",
          {"n", "draws"}},
         run_sk_cert},
        {{"quiet_planting", "quiet-planting detectability versus planting strength",
          {"n", "c_grid", "draws"}},
         run_quiet_planting},
    };
    return entries;
}

const KindEntry& find_kind(const std::string& kind) {
    for (const auto& e : registry())
        if (e.info.kind == kind) return e;
    throw ConfigError("unknown experiment kind: " + kind);
}

}  // namespace

std::vector<KindInfo> list_experiments() {
    std::vector<KindInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
}

void validate_config(const json& config) {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    if (!config.contains("kind")) throw ConfigError("missing field: kind");
    if (!config.contains("seed")) throw ConfigError("missing field: seed");
    if (!config.at("seed").is_number()) throw ConfigError("seed must be a number");
    const auto& entry = find_kind(config.at("kind").get<std::string>());
    const json params = config.value("params", json::object());
    for (const auto& key : entry.info.required_params)
        if (!params.contains(key))
            throw ConfigError("missing parameter for " + entry.info.kind + ": " + key);
}

Result run_experiment(const json& config, int threads) {
    validate_config(config);
    const auto t0 = std::chrono::steady_clock::now();
    RunContext ctx;
    ctx.seed = config.at("seed").get<std::uint64_t>();
    ctx.threads = threads;
    ctx.params = config.value("params", json::object());
    Result r = find_kind(config.at("kind").get<std::string>()).runner(ctx);
    const auto t1 = std::chrono::steady_clock::now();
    r.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

    json header;
    header["kind"] = config.at("kind");
    header["seed"] = ctx.seed;
    header["config_hash"] = io::fnv1a64(config.dump());
    header.update(r.summary);
    r.summary = std::move(header);
    return r;
}

int run_experiment_file(const std::string& config_path,
                        std::optional<std::uint64_t> seed_override, int threads,
                        std::string* message) {
    try {
        json config = json::parse(io::read_file(config_path));
        if (seed_override) config["seed"] = *seed_override;
        const Result r = run_experiment(config, threads);
        const std::string stem = config.value("output", std::string("experiment"));
        if (const auto dir = std::filesystem::path(stem).parent_path(); !dir.empty())
            std::filesystem::create_directories(dir);
        io::write_file(stem + ".csv", r.csv);
        io::write_file(stem + ".json", r.summary.dump(2) + "\n");
        if (message)
            *message = "wrote " + stem + ".csv and " + stem + ".json (" +
                       io::format_double(r.wall_seconds) + " s)";
        return 0;
    } catch (const ConfigError& e) {
        if (message) *message = std::string("config error: ") + e.what();
        return 2;
    } catch (const json::exception& e) {
        if (message) *message = std::string("config error: ") + e.what();
        return 2;
    } catch (const std::invalid_argument& e) {
        if (message) *message = std::string("config error: ") + e.what();
        return 2;
    } catch (const std::exception& e) {
        if (message) *message = std::string("numeric failure: ") + e.what();
        return 3;
    }
}

}  // namespace gaplab::experiment

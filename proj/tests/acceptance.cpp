// Acceptance suite: one checked criterion per line, pinned tolerances.
// Usage: acceptance [--criterion N] [--configs DIR]
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gaplab/cumulants.hpp"
#include "gaplab/detect.hpp"
#include "gaplab/experiment.hpp"
#include "gaplab/freeenergy.hpp"
#include "gaplab/io.hpp"
#include "gaplab/lowdeg.hpp"
#include "gaplab/mcmc.hpp"
#include "gaplab/models.hpp"
#include "gaplab/ogp.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/skcert.hpp"
#include "gaplab/spectral.hpp"
#include "gaplab/stats.hpp"

using namespace gaplab;

namespace {

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

std::string g_configs_dir = "configs";

bool c01_goe_edge(std::string& note) {
    const std::size_t n = 2000, draws = 20;
    auto values = map_replicas<double>(1001, 0, draws, 1, [&](std::size_t, Rng& rng) {
        auto w = models::sample_goe(n, models::GoeScale::normalized, rng);
        return spectral::top_eigenpair_checked(w, 1e-8).value;
    });
    RunningStat stat;
    for (double v : values) stat.add(v);
    note = "mean lambda_max " + io::format_double(stat.mean()) + " target [1.85, 2.05]";
    return stat.mean() >= 1.85 && stat.mean() <= 2.05;
}

bool c02_bbp_overlap(std::string& note) {
    const std::size_t n = 2000, draws = 6;
    auto run_point = [&](double paper_lambda, std::uint64_t stream0) {
        auto vals = map_replicas<double>(1002, stream0, draws, 1, [&](std::size_t, Rng& rng) {
            auto inst = models::sample_spiked_wigner(n, std::sqrt(paper_lambda),
                                                     models::rademacher_normalized_prior(), true,
                                                     rng);
            return detect::bbp_overlap(inst);
        });
        RunningStat s;
        for (double v : vals) s.add(v);
        return s.mean();
    };
    const double above = run_point(2.0, 0);
    const double below = run_point(0.5, 100);
    note = "overlap(snr 2) = " + io::format_double(above) + " target 0.5 +- 0.05; overlap(snr 0.5) = " +
           io::format_double(below) + " target < 0.05";
    return std::abs(above - 0.5) <= 0.05 && below < 0.05;
}

bool c03_scalar_channel(std::string& note) {
    auto gauss = freeenergy::ScalarChannel::gaussian();
    auto rad = freeenergy::ScalarChannel::rademacher();
    bool ok = true;
    double worst_residual = 0.0;
    for (double l : {0.5, 1.0, 2.0, 5.0}) {
        ok = ok && std::abs(gauss.mmse(l) - 1.0 / (1.0 + l)) < 1e-10;
        ok = ok && rad.mmse(l) <= 1.0 / (1.0 + l) + 1e-9;
    }
    for (double l : {0.0, 0.5, 1.0, 2.0}) {
        worst_residual = std::max(worst_residual, freeenergy::immse_residual(gauss, l, 1e-3));
        worst_residual = std::max(worst_residual, freeenergy::immse_residual(rad, l, 1e-3));
    }
    ok = ok && worst_residual < 1e-4;
    note = "max I-MMSE residual " + io::format_double(worst_residual) + " target < 1e-4";
    return ok;
}

bool c04_needle(std::string& note) {
    const std::size_t n = 20, draws = 2000;
    auto run_point = [&](double lambda, std::uint64_t stream0) {
        auto vals = map_replicas<double>(1004, stream0, draws, 1, [&](std::size_t, Rng& rng) {
            return freeenergy::needle_free_energy(n, lambda, 1, rng).free_energy;
        });
        RunningStat s;
        for (double v : vals) s.add(v);
        return s.mean();
    };
    const double low = run_point(0.7, 0);
    const double high = run_point(2.0, draws);
    const double target = 1.0 - std::log(2.0);
    note = "F(0.7) = " + io::format_double(low) + " target < 0.05; |F(2.0) - " +
           io::format_double(target) + "| = " + io::format_double(std::abs(high - target)) +
           " target < 0.08";
    return low < 0.05 && std::abs(high - target) < 0.08;
}

bool c05_rs_fixed_point(std::string& note) {
    auto gauss = freeenergy::ScalarChannel::gaussian();
    bool ok = true;
    double worst = 0.0;
    for (double l : {0.5, 0.9, 1.1, 2.0, 5.0}) {
        const double q = freeenergy::rs_fixed_point(gauss, l).q_star;
        worst = std::max(worst, std::abs(q - std::max(0.0, 1.0 - 1.0 / l)));
    }
    ok = ok && worst < 1e-6;
    const auto curve = freeenergy::mmse_limit_curve(gauss, {2.0});
    ok = ok && std::abs(curve.points[0].mmse_limit - 0.75) < 1e-6;
    note = "max |q* - closed form| " + io::format_double(worst) + " target < 1e-6; mmse(2) = " +
           io::format_double(curve.points[0].mmse_limit) + " target 0.75";
    return ok;
}

bool c06_ks_trend(std::string& note) {
    const int degree = 8;
    // two communities: the bound is a binomial sum, so the trends are exact.
    // d eta^2 = 0.8 via d = 20 (the p/(1-p) excess decays with n);
    // d eta^2 = 1.3 via d = 1.3, eta = 1 (vertex-collision deficit dominates).
    std::vector<double> below, above;
    for (std::size_t n : {200, 400, 800}) {
        below.push_back(lowdeg::sbm_ldlr_bound_two_communities_exact(n, 20.0, 0.2, degree));
        above.push_back(lowdeg::sbm_ldlr_bound_two_communities_exact(n, 1.3, 1.0, degree));
    }
    bool ok = true;
    for (double v : below) ok = ok && v < 10.0;
    for (std::size_t i = 1; i < below.size(); ++i) ok = ok && below[i] <= below[i - 1] + 1e-12;
    for (std::size_t i = 1; i < above.size(); ++i) ok = ok && above[i] > above[i - 1];
    // the sampled estimator agrees with the exact route
    Rng rng(1006, 0);
    const auto mc = lowdeg::sbm_ldlr_bound(200, 2, 20.0, 0.2, degree, 60000, rng);
    ok = ok && std::abs(mc.value - below[0]) <= 4.0 * mc.stderr_mean;
    note = "snr 0.8: " + io::format_double(below[0]) + " -> " + io::format_double(below[2]) +
           " (bounded, non-increasing); snr 1.3: " + io::format_double(above[0]) + " -> " +
           io::format_double(above[2]) + " (increasing); mc check " + io::format_double(mc.value) +
           " +- " + io::format_double(mc.stderr_mean);
    return ok;
}

bool c07_cumulants(std::string& note) {
    const double lambda = 0.7, rho = 0.3;
    lowdeg::KappaTable closed(lowdeg::planted_submatrix_oracle(lambda, rho));
    lowdeg::KappaTable enumerated(lowdeg::planted_submatrix_enumeration_oracle(5, lambda, rho));
    double worst = 0.0;
    std::size_t graphs = 0;
    bool ok = true;
    for (const auto& g : lowdeg::enumerate_multigraphs(5, 4)) {
        ++graphs;
        const double a = closed.kappa(g);
        worst = std::max(worst, std::abs(a - enumerated.kappa(g)));
        if (g.empty()) ok = ok && std::abs(a - rho) < 1e-12;
        else if (g.has_component_avoiding(0)) ok = ok && std::abs(a) < 1e-12;
        else ok = ok && std::abs(a) <= lowdeg::kappa_magnitude_bound(g, lambda, rho) + 1e-12;
    }
    ok = ok && worst < 1e-12;
    note = io::format_double(static_cast<double>(graphs)) +
           " multigraphs checked, max recursion-vs-enumeration gap " + io::format_double(worst);
    return ok;
}

bool c08_triangles(std::string& note) {
    const std::size_t n = 300, k = 150;
    const double q = 0.2, s = 0.05;
    const int m = 2;
    const std::size_t draws = 200;
    auto vals = map_replicas<double>(1008, 0, draws, 1, [&](std::size_t, Rng& rng) {
        auto inst = models::sample_binary_community(n, k, q, s, m, rng);
        return detect::signed_triangle_stat_trace(*inst.graph, q);
    });
    RunningStat all;
    for (double v : vals) all.add(v);
    const auto formulas = detect::triangle_moment_formulas(n, static_cast<double>(k), q, s, m);
    // variance in 20 replications of 10 draws
    std::size_t within = 0;
    for (std::size_t rep = 0; rep < 20; ++rep) {
        RunningStat batch;
        for (std::size_t i = 0; i < 10; ++i) batch.add(vals[rep * 10 + i]);
        if (batch.variance() <= formulas.variance_bound) ++within;
    }
    const bool mean_ok = std::abs(all.mean() - formulas.mean) <= 0.05 * formulas.mean;
    const bool var_ok = within >= 19;  // >= 95% of replications
    note = "mean " + io::format_double(all.mean()) + " target " + io::format_double(formulas.mean) +
           " +-5%; variance within bound in " + std::to_string(within) + "/20 replications";
    return mean_ok && var_ok;
}

bool c09_stationarity(std::string& note) {
    Rng rng(1009, 0);
    auto inst = models::sample_sparse_pca(10, 2, 3.0, rng);
    mcmc::SparseSlice space{10, 2};
    auto energy = [&](const std::vector<std::uint32_t>& v) {
        double quad = 0.0;
        for (auto i : v)
            for (auto j : v) quad += (*inst.matrix)(i, j);
        return -quad;
    };
    const double beta = 2.0;
    auto table = mcmc::gibbs_exact(space, energy, beta);
    std::vector<std::vector<std::uint32_t>> states;
    space.for_each_state([&](const std::vector<std::uint32_t>& v) { states.push_back(v); });
    auto index_of = [&](const std::vector<std::uint32_t>& v) {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == v) return i;
        return states.size();
    };
    mcmc::ChainState chain;
    chain.support = {0, 1};
    chain.energy = energy(chain.support);
    std::vector<double> occupation(states.size(), 0.0);
    const std::size_t steps = 1000000;
    for (std::size_t t = 0; t < steps; ++t) {
        mcmc::metropolis_step(chain, space, energy, beta, rng);
        ++occupation[index_of(chain.support)];
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i)
        tv += std::abs(occupation[i] / static_cast<double>(steps) - table.probs[i]);
    tv /= 2.0;

    // explicit-matrix detailed balance
    Rng rng2(1019, 0);
    auto small = models::sample_sparse_pca(6, 2, 1.5, rng2);
    mcmc::SparseSlice tiny{6, 2};
    auto small_energy = [&](const std::vector<std::uint32_t>& v) {
        double quad = 0.0;
        for (auto i : v)
            for (auto j : v) quad += (*small.matrix)(i, j);
        return -quad;
    };
    const auto matrix = mcmc::metropolis_matrix(tiny, small_energy, 1.7);
    const auto pi = mcmc::gibbs_exact(tiny, small_energy, 1.7);
    const double residual = mcmc::detailed_balance_residual(matrix, pi.probs);
    note = "TV distance " + io::format_double(tv) + " target < 0.02; balance residual " +
           io::format_double(residual) + " target < 1e-12";
    return tv < 0.02 && residual < 1e-12;
}

bool c10_hitting_time(std::string& note) {
    const std::size_t n = 16, k = 4, k_prime = 4;
    const std::size_t t_max = 100000, replicas = 200;
    const std::vector<std::size_t> checkpoints = {1, 10, 100, 1000, 10000, 100000};
    Rng rng(1010, 0);
    // beta above ~2n concentrates the measure on single noise-optimal states and
    // mu(A) can fall under the rejection-sampling floor; sweep the well-posed range
    auto inst = models::sample_sparse_pca(n, k, 0.5, rng);
    SparseIndicator sig;
    sig.n = n;
    for (std::size_t i = 0; i < n; ++i)
        if (inst.signal[i] != 0.0) sig.support.push_back(static_cast<std::uint32_t>(i));
    bool ok = true;
    std::size_t cells = 0;
    double worst_excess = -1e9;
    for (double beta : {0.0, 2.0, 4.0}) {
        for (std::size_t level : {1, 2}) {
            auto curve = mcmc::hitting_time_experiment(*inst.matrix, sig, beta, level, k_prime,
                                                       t_max, replicas, checkpoints, rng);
            ++cells;
            for (std::size_t i = 0; i < curve.times.size(); ++i) {
                const double sigma = std::sqrt(
                    std::max(curve.empirical[i] * (1.0 - curve.empirical[i]), 0.005) /
                    static_cast<double>(replicas));
                const double excess = curve.empirical[i] - curve.bound[i] - 3.0 * sigma;
                worst_excess = std::max(worst_excess, excess);
                ok = ok && excess <= 0.0;
            }
        }
    }
    note = std::to_string(cells) + " sweep cells, worst (empirical - bound - 3 sigma) = " +
           io::format_double(worst_excess) + " target <= 0";
    return ok;
}

bool c11_fp_ld_sandwich(std::string& note) {
    const std::size_t n = 50;
    const auto law = lowdeg::rademacher_overlap_law(n);
    bool ok = true;
    double worst = -1e9;
    for (int degree : {3, 5}) {
        for (double lambda : {0.3, 0.6, 1.0}) {
            const double ld = lowdeg::ld_value_exact(law, lambda, degree);
            const double dt = lowdeg::fp_sandwich_degree(degree, lambda, 1.0);
            const double fp = lowdeg::fp_value_exact(law, lambda, dt);
            const double excess = ld - fp - std::exp(-static_cast<double>(degree));
            worst = std::max(worst, excess);
            ok = ok && excess <= 1e-12;
        }
    }
    const double lo = lowdeg::boolean_disjoint_lo(10, 5.0);
    ok = ok && lo == 0.0;
    note = "worst LD - FP(D~) - e^-D = " + io::format_double(worst) +
           " target <= 0; boolean LO(delta) = " + io::format_double(lo) + " target 0";
    return ok;
}

bool c12_npp_ogp(std::string& note) {
    const std::size_t n = 20;
    // the (eps = 1, rho = 0.99) arithmetic needs rho <= (n-2)/n, i.e. n >= 200
    const auto cert = ogp::npp_first_moment_exponent(200, 1.0, 0.99);
    const auto rho = ogp::npp_certified_rho(n, 0.75);
    if (!rho) {
        note = "no certified rho at eps = 0.75";
        return false;
    }
    auto hits = map_replicas<int>(1012, 0, 100, 1, [&](std::size_t, Rng& rng) {
        const auto x = models::sample_npp(n, rng);
        return ogp::npp_exhaustive_scan(x, 0.75).forbidden_pairs(*rho, n) > 0 ? 1 : 0;
    });
    int bad = 0;
    for (int h : hits) bad += h;
    note = "exponent(1, 0.99) = " + io::format_double(cert.exponent) +
           " target < 0; forbidden-pair draws " + std::to_string(bad) + "/100 target <= 5 at rho = " +
           io::format_double(*rho);
    return cert.exponent < 0.0 && bad <= 5;
}

bool c13_stability(std::string& note) {
    int mean_ok = 0, tail_ok = 0;
    const int corpus = 200;
    const double rho = 0.85;
    for (int i = 0; i < corpus; ++i) {
        Rng rng(1013, static_cast<std::uint64_t>(i));
        const auto dims = 5 + rng.uniform_int(6);
        const int degree = 1 + static_cast<int>(rng.uniform_int(4));
        auto f = ogp::random_hermite_polynomial(dims, 1 + rng.uniform_int(3), degree, 30, rng);
        auto rep = ogp::poly_stability_check(f, rho, 2500, rng);
        if (rep.mean_discrepancy <= rep.mean_bound + 3.0 * rep.mean_stderr) ++mean_ok;
        if (rep.tail_empirical <= rep.tail_bound + 3.0 * rep.tail_stderr) ++tail_ok;
    }
    note = "mean bound " + std::to_string(mean_ok) + "/200, tail bound " + std::to_string(tail_ok) +
           "/200, target 200/200 each";
    return mean_ok == corpus && tail_ok == corpus;
}

bool c14_sk_sandwich(std::string& note) {
    bool exact_ok = true;
    auto check_exact = [&](std::size_t n, std::size_t draws, std::uint64_t seed) {
        for (std::size_t d = 0; d < draws; ++d) {
            Rng rng(seed, d);
            auto w = models::sample_goe(n, models::GoeScale::normalized, rng);
            const double brute = skcert::sk_bruteforce(w).value;
            exact_ok = exact_ok && skcert::sign_rounding_search(w).value <= brute;
            exact_ok = exact_ok && brute <= skcert::spectral_cert(w).value;
            exact_ok = exact_ok && brute <= skcert::abssum_cert(w).value;
        }
    };
    check_exact(16, 40, 1014);
    check_exact(20, 5, 1024);

    const std::size_t n = 2000, draws = 20;
    auto rows = map_replicas<std::array<double, 2>>(
        1034, 0, draws, 1, [&](std::size_t, Rng& rng) {
            auto w = models::sample_goe(n, models::GoeScale::normalized, rng);
            return std::array<double, 2>{skcert::sign_rounding_search(w).value,
                                         spectral::top_eigenpair_checked(w, 1e-8).value};
        });
    RunningStat sign, spec;
    for (const auto& r : rows) {
        sign.add(r[0]);
        spec.add(r[1]);
    }
    const double four_over_pi = 4.0 / M_PI;
    const double slepian = skcert::slepian_bound_constant();
    const bool mean_ok = std::abs(sign.mean() - four_over_pi) <= 0.05;
    const bool order_ok = 1.5264 < slepian && slepian < spec.mean();
    note = "exact sandwich on 45 draws; mean signround " + io::format_double(sign.mean()) +
           " target 4/pi +- 0.05; ordering 1.5264 < " + io::format_double(slepian) + " < " +
           io::format_double(spec.mean());
    return exact_ok && mean_ok && order_ok;
}

bool c15_quiet_planting(std::string& note) {
    Rng rng(1015, 0);
    const auto points = skcert::quiet_planting_experiment(1000, {0.0, 0.5, 1.5}, 200, rng);
    const double auc0 = points[0].auc, auc_half = points[1].auc, auc_high = points[2].auc;
    note = "AUC(0) = " + io::format_double(auc0) + " target 0.5 +- 0.05; AUC(0.5) = " +
           io::format_double(auc_half) + " target < 0.6; AUC(1.5) = " + io::format_double(auc_high) +
           " target > 0.95";
    return std::abs(auc0 - 0.5) <= 0.05 && auc_half < 0.6 && auc_high > 0.95;
}

bool c16_reproducibility(std::string& note) {
    namespace fs = std::filesystem;
    const fs::path configs(g_configs_dir);
    if (!fs::exists(configs)) {
        note = "configs directory not found: " + configs.string();
        return false;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(configs))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        note = "no configs found";
        return false;
    }
    const auto tmp = fs::temp_directory_path() / "gaplab_acceptance_repro";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    bool ok = true;
    std::size_t checked = 0;
    for (const auto& file : files) {
        auto config = experiment::json::parse(io::read_file(file.string()));
        const std::string stem_a = (tmp / (file.stem().string() + "_a")).string();
        const std::string stem_b = (tmp / (file.stem().string() + "_b")).string();
        auto run_to = [&](const std::string& stem) {
            experiment::json local = config;
            local["output"] = stem;
            const auto tmp_config = tmp / (file.stem().string() + "_config.json");
            io::write_file(tmp_config.string(), local.dump(2));
            std::string msg;
            return experiment::run_experiment_file(tmp_config.string(), std::nullopt, 1, &msg);
        };
        if (run_to(stem_a) != 0 || run_to(stem_b) != 0) {
            ok = false;
            break;
        }
        ok = ok && io::read_file(stem_a + ".csv") == io::read_file(stem_b + ".csv");
        // the summary embeds the config hash, which differs with the output path;
        // compare the data-bearing fields by reserializing without it
        auto ja = experiment::json::parse(io::read_file(stem_a + ".json"));
        auto jb = experiment::json::parse(io::read_file(stem_b + ".json"));
        ja.erase("config_hash");
        jb.erase("config_hash");
        ok = ok && ja.dump() == jb.dump();
        ++checked;
        if (!ok) {
            note = "mismatch for " + file.filename().string();
            fs::remove_all(tmp);
            return false;
        }
    }
    fs::remove_all(tmp);
    note = std::to_string(checked) + " configs re-run byte-identically";
    return ok && checked >= 15;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--configs") == 0 && i + 1 < argc) g_configs_dir = argv[++i];
    }
    if (const char* env = std::getenv("GAPLAB_CONFIGS")) g_configs_dir = env;

    const std::vector<Criterion> criteria = {
        {1, "goe-edge", 120, c01_goe_edge},
        {2, "bbp-overlap", 300, c02_bbp_overlap},
        {3, "scalar-channel", 120, c03_scalar_channel},
        {4, "needle-free-energy", 600, c04_needle},
        {5, "rs-fixed-point", 120, c05_rs_fixed_point},
        {6, "ks-threshold-trend", 600, c06_ks_trend},
        {7, "cumulant-engine", 120, c07_cumulants},
        {8, "triangle-statistic", 300, c08_triangles},
        {9, "mcmc-stationarity", 300, c09_stationarity},
        {10, "hitting-time-bound", 600, c10_hitting_time},
        {11, "fp-ld-sandwich", 120, c11_fp_ld_sandwich},
        {12, "npp-ogp", 1200, c12_npp_ogp},
        {13, "polynomial-stability", 600, c13_stability},
        {14, "sk-sandwich", 600, c14_sk_sandwich},
        {15, "quiet-planting", 900, c15_quiet_planting},
        {16, "reproducibility", 600, c16_reproducibility},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_seconds) {
            pass = false;
            detail += " [over the " + io::format_double(c.budget_seconds) + " s budget]";
        }
        std::printf("%s c%02d %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

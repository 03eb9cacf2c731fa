#include "gaplab/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gaplab/stats.hpp"

namespace gaplab::models {

using json = nlohmann::ordered_json;

double ModelParams::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("ModelParams: missing key " + key);
    return it->second;
}

double ModelParams::get_or(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

PriorSpec rademacher_normalized_prior() {
    PriorSpec p;
    p.kind = PriorSpec::Kind::rademacher_normalized;
    return p;
}

PriorSpec gaussian_scalar_prior() {
    PriorSpec p;
    p.kind = PriorSpec::Kind::gaussian_scalar;
    return p;
}

PriorSpec sparse_bernoulli_prior(double rho) {
    if (rho <= 0.0 || rho >= 1.0)
        throw std::invalid_argument("sparse_bernoulli: rho must be in (0,1)");
    PriorSpec p;
    p.kind = PriorSpec::Kind::sparse_bernoulli;
    p.rho = rho;
    return p;
}

void validate_prior(const PriorSpec& prior) {
    switch (prior.kind) {
        case PriorSpec::Kind::sparse_bernoulli:
            if (prior.rho <= 0.0 || prior.rho >= 1.0)
                throw std::invalid_argument("PriorSpec: sparse-Bernoulli rho must be in (0,1)");
            return;
        case PriorSpec::Kind::bounded_row: {
            if (prior.atoms.empty() || prior.atoms.size() != prior.atom_probs.size())
                throw std::invalid_argument("PriorSpec: bounded-row prior needs atoms with probabilities");
            const std::size_t k = prior.atoms.front().size();
            std::vector<double> mean(k, 0.0);
            for (std::size_t a = 0; a < prior.atoms.size(); ++a)
                for (std::size_t i = 0; i < k; ++i)
                    mean[i] += prior.atom_probs[a] * prior.atoms[a][i];
            for (double m : mean)
                if (std::abs(m) > 1e-10)
                    throw std::invalid_argument("PriorSpec: bounded-row prior must be mean zero");
            // spectral norm of the covariance via a few symmetric power steps
            std::vector<double> cov(k * k, 0.0);
            for (std::size_t a = 0; a < prior.atoms.size(); ++a)
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        cov[i * k + j] += prior.atom_probs[a] * prior.atoms[a][i] * prior.atoms[a][j];
            std::vector<double> v(k, 1.0 / std::sqrt(static_cast<double>(k))), w(k);
            double norm = 0.0;
            for (int it = 0; it < 200; ++it) {
                for (std::size_t i = 0; i < k; ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < k; ++j) s += cov[i * k + j] * v[j];
                    w[i] = s;
                }
                norm = 0.0;
                for (double x : w) norm += x * x;
                norm = std::sqrt(norm);
                if (norm == 0.0) break;
                for (std::size_t i = 0; i < k; ++i) v[i] = w[i] / norm;
            }
            if (std::abs(norm - 1.0) > 1e-8)
                throw std::invalid_argument("PriorSpec: bounded-row covariance norm must be 1");
            return;
        }
        default:
            return;
    }
}

SymMatrix sample_goe(std::size_t n, GoeScale scale, Rng& rng) {
    if (n == 0) throw std::invalid_argument("sample_goe: n must be >= 1");
    const double off = scale == GoeScale::unit_entry ? 1.0 : 1.0 / std::sqrt(static_cast<double>(n));
    const double diag = off * std::sqrt(2.0);
    SymMatrix w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w.set(i, i, diag * rng.normal());
        for (std::size_t j = i + 1; j < n; ++j) w.set(i, j, off * rng.normal());
    }
    return w;
}

namespace {

std::vector<double> draw_spike(std::size_t n, const PriorSpec& prior, Rng& rng) {
    std::vector<double> x(n);
    switch (prior.kind) {
        case PriorSpec::Kind::rademacher_normalized: {
            const double s = 1.0 / std::sqrt(static_cast<double>(n));
            for (auto& xi : x) xi = rng.rademacher() * s;
            return x;
        }
        case PriorSpec::Kind::gaussian_scalar: {
            const double s = 1.0 / std::sqrt(static_cast<double>(n));
            for (auto& xi : x) xi = s * rng.normal();
            return x;
        }
        case PriorSpec::Kind::sparse_bernoulli: {
            for (auto& xi : x) xi = rng.bernoulli(prior.rho) ? 1.0 : 0.0;
            return x;
        }
        default:
            throw std::invalid_argument("sample_spiked_wigner: unsupported prior kind");
    }
}

}  // namespace

ModelInstance sample_spiked_wigner(std::size_t n, double lambda, const PriorSpec& prior,
                                   bool symmetric, Rng& rng) {
    if (lambda < 0.0) throw std::invalid_argument("sample_spiked_wigner: lambda must be >= 0");
    ModelInstance inst;
    inst.kind = symmetric ? "spiked_wigner" : "spiked_wigner_asym";
    inst.params.values = {{"n", static_cast<double>(n)}, {"lambda", lambda},
                          {"prior", static_cast<double>(static_cast<int>(prior.kind))},
                          {"rho", prior.rho}};
    inst.signal = draw_spike(n, prior, rng);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    if (symmetric) {
        SymMatrix y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y.set(i, i, lambda * inst.signal[i] * inst.signal[i] +
                            inv_sqrt_n * std::sqrt(2.0) * rng.normal());
            for (std::size_t j = i + 1; j < n; ++j)
                y.set(i, j, lambda * inst.signal[i] * inst.signal[j] + inv_sqrt_n * rng.normal());
        }
        inst.matrix = std::move(y);
    } else {
        Matrix y(n, n);
        const double snr = lambda / std::sqrt(2.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                y(i, j) = snr * inst.signal[i] * inst.signal[j] + inv_sqrt_n * rng.normal();
        inst.asym_matrix = std::move(y);
    }
    return inst;
}

ModelInstance sample_sbm(std::size_t n, int k, double d, double eta, bool planted, Rng& rng) {
    if (k < 2) throw std::invalid_argument("sample_sbm: k must be >= 2");
    if (d <= 0.0) throw std::invalid_argument("sample_sbm: d must be > 0");
    if (eta < -1.0 / (k - 1) || eta > 1.0)
        throw std::invalid_argument("sample_sbm: eta out of [-1/(k-1), 1]");
    const double p_in = (1.0 + (k - 1) * eta) * d / static_cast<double>(n);
    const double p_out = (1.0 - eta) * d / static_cast<double>(n);
    if (p_in > 1.0 || p_out > 1.0) throw std::invalid_argument("sample_sbm: edge probability > 1");

    ModelInstance inst;
    inst.kind = planted ? "sbm_planted" : "sbm_null";
    inst.params.values = {{"n", static_cast<double>(n)}, {"k", static_cast<double>(k)},
                          {"d", d}, {"eta", eta}, {"planted", planted ? 1.0 : 0.0}};
    Graph g;
    g.n = n;
    if (planted) {
        inst.labels.resize(n);
        for (auto& l : inst.labels) l = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
        g.labels = inst.labels;
    }
    const double p_null = d / static_cast<double>(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double p = !planted ? p_null
                            : (inst.labels[i] == inst.labels[j] ? p_in : p_out);
            if (rng.bernoulli(p)) g.add_edge(i, j);
        }
    inst.graph = std::move(g);
    return inst;
}

ModelInstance sample_binary_community(std::size_t n, std::size_t k, double q, double s, int m,
                                      Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_binary_community: k must be <= n");
    if (m < 1) throw std::invalid_argument("sample_binary_community: M must be >= 1");
    const double p_in = q + s * m;
    if (q < 0.0 || q > 1.0 || p_in < 0.0 || p_in > 1.0)
        throw std::invalid_argument("sample_binary_community: invalid probabilities");
    const double slot = static_cast<double>(k) / (static_cast<double>(n) * m);

    ModelInstance inst;
    inst.kind = "binary_community";
    inst.params.values = {{"n", static_cast<double>(n)}, {"k", static_cast<double>(k)},
                          {"q", q}, {"s", s}, {"M", static_cast<double>(m)}};
    inst.labels.resize(n);
    for (auto& l : inst.labels) {
        const double u = rng.u01();
        l = u < slot * m ? static_cast<int>(u / slot) : -1;  // -1 is the star label
    }
    Graph g;
    g.n = n;
    g.labels = inst.labels;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const bool same = inst.labels[i] >= 0 && inst.labels[i] == inst.labels[j];
            if (rng.bernoulli(same ? p_in : q)) g.add_edge(i, j);
        }
    inst.graph = std::move(g);
    return inst;
}

ModelInstance sample_planted_submatrix(std::size_t n, double lambda, double rho, Rng& rng,
                                       bool reduced_diagonal) {
    if (rho <= 0.0 || rho >= 1.0)
        throw std::invalid_argument("sample_planted_submatrix: rho must be in (0,1)");
    if (lambda < 0.0) throw std::invalid_argument("sample_planted_submatrix: lambda must be >= 0");
    ModelInstance inst;
    inst.kind = "planted_submatrix";
    inst.params.values = {{"n", static_cast<double>(n)}, {"lambda", lambda}, {"rho", rho},
                          {"reduced_diagonal", reduced_diagonal ? 1.0 : 0.0}};
    inst.signal.resize(n);
    for (auto& v : inst.signal) v = rng.bernoulli(rho) ? 1.0 : 0.0;
    SymMatrix y(n);
    const double diag_sd = reduced_diagonal ? 1.0 : std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        y.set(i, i, lambda * inst.signal[i] + diag_sd * rng.normal());
        for (std::size_t j = i + 1; j < n; ++j)
            y.set(i, j, lambda * inst.signal[i] * inst.signal[j] + rng.normal());
    }
    inst.matrix = std::move(y);
    return inst;
}

ModelInstance sample_sparse_pca(std::size_t n, std::size_t k, double lambda, Rng& rng) {
    if (k < 1 || k > n) throw std::invalid_argument("sample_sparse_pca: need 1 <= k <= n");
    if (lambda <= 0.0) throw std::invalid_argument("sample_sparse_pca: lambda must be > 0");
    ModelInstance inst;
    inst.kind = "sparse_pca";
    inst.params.values = {{"n", static_cast<double>(n)}, {"k", static_cast<double>(k)},
                          {"lambda", lambda}};
    // uniform k-subset by partial Fisher-Yates
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + rng.uniform_int(n - i)]);
    inst.signal.assign(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) inst.signal[idx[i]] = 1.0;

    SymMatrix y = sample_goe(n, GoeScale::normalized, rng);
    const double snr = lambda / static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i) {
        if (inst.signal[i] == 0.0) continue;
        for (std::size_t j = i; j < n; ++j)
            if (inst.signal[j] != 0.0) y.set(i, j, y(i, j) + snr);
    }
    inst.matrix = std::move(y);
    return inst;
}

ModelInstance sample_pspin(std::size_t n, std::size_t p, Rng& rng) {
    ModelInstance inst;
    inst.kind = "pspin";
    inst.params.values = {{"n", static_cast<double>(n)}, {"p", static_cast<double>(p)}};
    Tensor y(p, n);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.normal();
    inst.tensor = std::move(y);
    return inst;
}

double pspin_energy(const std::vector<double>& x, const Tensor& y) {
    const std::size_t n = y.n();
    const std::size_t p = y.order();
    if (x.size() != n) throw std::invalid_argument("pspin_energy: dimension mismatch");
    double nrm2 = 0.0;
    for (double xi : x) nrm2 += xi * xi;
    const double target = std::sqrt(static_cast<double>(n));
    if (std::abs(std::sqrt(nrm2) - target) > 1e-8)
        throw std::invalid_argument("pspin_energy: x must satisfy ||x||_2 = sqrt(n)");

    KahanSum sum;
    for (std::size_t flat = 0; flat < y.size(); ++flat) {
        double prod = y[flat];
        std::size_t rem = flat;
        for (std::size_t a = p; a-- > 0;) {
            prod *= x[rem % n];
            rem /= n;
        }
        sum.add(prod);
    }
    return sum.value() / std::pow(static_cast<double>(n), (static_cast<double>(p) + 1.0) / 2.0);
}

std::vector<double> sample_npp(std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("sample_npp: n must be >= 1");
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    return x;
}

double npp_energy(const SpinVector& sigma, const std::vector<double>& x) {
    if (sigma.n() != x.size()) throw std::invalid_argument("npp_energy: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += sigma[i] * x[i];
    return std::abs(s) / std::sqrt(static_cast<double>(x.size()));
}

double npp_overlap(const SpinVector& sigma, const SpinVector& tau) {
    if (sigma.n() != tau.n()) throw std::invalid_argument("npp_overlap: length mismatch");
    return std::abs(static_cast<double>(spin_dot(sigma, tau))) / static_cast<double>(sigma.n());
}

ModelInstance sample_quiet_planted_sk(std::size_t n, double c, Rng& rng) {
    if (c < 0.0) throw std::invalid_argument("sample_quiet_planted_sk: c must be >= 0");
    ModelInstance inst;
    inst.kind = "quiet_planted_sk";
    inst.params.values = {{"n", static_cast<double>(n)}, {"c", c}};
    inst.signal.resize(n);
    for (auto& xi : inst.signal) xi = rng.rademacher();
    SymMatrix w = sample_goe(n, GoeScale::normalized, rng);
    const double snr = c / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            w.set(i, j, w(i, j) + snr * inst.signal[i] * inst.signal[j]);
    inst.matrix = std::move(w);
    return inst;
}

// --- records -----------------------------------------------------------------

std::string instance_record(const ModelInstance& inst) {
    json rec;
    rec["kind"] = inst.kind;
    rec["params"] = json::object();
    for (const auto& [k, v] : inst.params.values) rec["params"][k] = v;
    rec["seed"] = inst.provenance.seed;
    rec["stream"] = inst.provenance.stream;
    return rec.dump();
}

ModelInstance regenerate(const std::string& record) {
    const json rec = json::parse(record);
    const std::string kind = rec.at("kind").get<std::string>();
    ModelParams params;
    for (auto it = rec.at("params").begin(); it != rec.at("params").end(); ++it)
        params.values[it.key()] = it.value().get<double>();
    RngStream prov{rec.at("seed").get<std::uint64_t>(), rec.at("stream").get<std::uint64_t>()};
    Rng rng(prov);

    const auto n = static_cast<std::size_t>(params.get("n"));
    ModelInstance inst;
    if (kind == "spiked_wigner" || kind == "spiked_wigner_asym") {
        PriorSpec prior;
        prior.kind = static_cast<PriorSpec::Kind>(static_cast<int>(params.get("prior")));
        prior.rho = params.get_or("rho", 0.0);
        inst = sample_spiked_wigner(n, params.get("lambda"), prior, kind == "spiked_wigner", rng);
    } else if (kind == "sbm_planted" || kind == "sbm_null") {
        inst = sample_sbm(n, static_cast<int>(params.get("k")), params.get("d"),
                          params.get("eta"), kind == "sbm_planted", rng);
    } else if (kind == "binary_community") {
        inst = sample_binary_community(n, static_cast<std::size_t>(params.get("k")),
                                       params.get("q"), params.get("s"),
                                       static_cast<int>(params.get("M")), rng);
    } else if (kind == "planted_submatrix") {
        inst = sample_planted_submatrix(n, params.get("lambda"), params.get("rho"), rng,
                                        params.get_or("reduced_diagonal", 0.0) != 0.0);
    } else if (kind == "sparse_pca") {
        inst = sample_sparse_pca(n, static_cast<std::size_t>(params.get("k")),
                                 params.get("lambda"), rng);
    } else if (kind == "pspin") {
        inst = sample_pspin(n, static_cast<std::size_t>(params.get("p")), rng);
    } else if (kind == "quiet_planted_sk") {
        inst = sample_quiet_planted_sk(n, params.get("c"), rng);
    } else {
        throw std::invalid_argument("regenerate: unknown model kind " + kind);
    }
    inst.provenance = prov;
    return inst;
}

std::string observation_csv(const ModelInstance& inst) {
    std::ostringstream out;
    char buf[40];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    if (inst.matrix) {
        const auto& m = *inst.matrix;
        for (std::size_t i = 0; i < m.n(); ++i) {
            for (std::size_t j = 0; j < m.n(); ++j) {
                if (j) out << ',';
                out << fmt(m(i, j));
            }
            out << '\n';
        }
    } else if (inst.graph) {
        out << "i,j\n";
        for (auto [i, j] : inst.graph->edges) out << i << ',' << j << '\n';
    } else if (inst.tensor) {
        out << "flat_index,value\n";
        for (std::size_t i = 0; i < inst.tensor->size(); ++i)
            out << i << ',' << fmt((*inst.tensor)[i]) << '\n';
    }
    return out.str();
}

}  // namespace gaplab::models

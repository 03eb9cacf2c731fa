#include "gaplab/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "gaplab/rng.hpp"

namespace gaplab::spectral {

namespace {

Eigen::MatrixXd to_eigen(const SymMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.n());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(i, j);
    return m;
}

TopEigenPair dense_top(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a));
    if (es.info() != Eigen::Success) return {};
    const auto n = static_cast<Eigen::Index>(a.n());
    TopEigenPair r;
    r.value = es.eigenvalues()(n - 1);
    r.vector.resize(a.n());
    for (Eigen::Index i = 0; i < n; ++i) r.vector[i] = es.eigenvectors()(i, n - 1);
    r.converged = true;
    return r;
}

}  // namespace

TopEigenPair top_eigenpair(const SymMatrix& a, double tol, int max_iter) {
    const std::size_t n = a.n();
    if (n <= 128) return dense_top(a);

    if (max_iter == 0) max_iter = static_cast<int>(std::min<std::size_t>(n, 400));
    const int m_max = max_iter;

    // Deterministic pseudo-random start vector.
    Rng rng(0x1A2C3057u, 0);
    std::vector<double> v(n);
    double nrm = 0.0;
    for (auto& x : v) { x = rng.normal(); nrm += x * x; }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;

    std::vector<std::vector<double>> basis;
    basis.reserve(m_max);
    std::vector<double> alpha, beta;  // T diagonal / off-diagonal
    std::vector<double> w(n);

    TopEigenPair result;
    for (int k = 0; k < m_max; ++k) {
        basis.push_back(v);
        a.matvec(v, w);
        double al = 0.0;
        for (std::size_t i = 0; i < n; ++i) al += w[i] * v[i];
        alpha.push_back(al);

        // w <- w - alpha v - beta v_prev, then full reorthogonalization (two passes)
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                double c = 0.0;
                for (std::size_t i = 0; i < n; ++i) c += w[i] * b[i];
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
            }
        }
        double bt = 0.0;
        for (std::size_t i = 0; i < n; ++i) bt += w[i] * w[i];
        bt = std::sqrt(bt);

        // Ritz values of the k+1 x k+1 tridiagonal T
        const int m = k + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
        for (int i = 0; i + 1 < m; ++i)
            t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const double theta = es.eigenvalues()(m - 1);
        const double s_last = es.eigenvectors()(m - 1, m - 1);
        const double resid = std::abs(bt * s_last);

        result.iterations = m;
        if (resid <= tol * std::max(1.0, std::abs(theta)) || bt < 1e-14 ||
            static_cast<std::size_t>(m) == n || k == m_max - 1) {
            result.value = theta;
            result.vector.assign(n, 0.0);
            for (int i = 0; i < m; ++i) {
                const double c = es.eigenvectors()(i, m - 1);
                const auto& b = basis[static_cast<std::size_t>(i)];
                for (std::size_t j = 0; j < n; ++j) result.vector[j] += c * b[j];
            }
            double vn = 0.0;
            for (double x : result.vector) vn += x * x;
            vn = std::sqrt(vn);
            for (auto& x : result.vector) x /= vn;
            result.converged =
                resid <= tol * std::max(1.0, std::abs(theta)) || bt < 1e-14 ||
                static_cast<std::size_t>(m) == n;
            return result;
        }

        beta.push_back(bt);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / bt;
    }
    return result;
}

TopEigenPair top_eigenpair_checked(const SymMatrix& a, double tol) {
    TopEigenPair r = top_eigenpair(a, tol);
    if (!r.converged) throw std::runtime_error("top_eigenpair: eigensolver did not converge");
    return r;
}

std::vector<double> dense_eigenvalues(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dense_eigenvalues: eigensolver failed");
    std::vector<double> out(a.n());
    for (std::size_t i = 0; i < a.n(); ++i) out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

}  // namespace gaplab::spectral

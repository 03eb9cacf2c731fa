#include "gaplab/hermite.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace gaplab::hermite {

GaussianQuadrature gauss_hermite(int order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    // Physicists' rule: J_{k,k+1} = sqrt((k+1)/2); nodes t_i, weights w_i with
    // sum w_i = sqrt(pi). For Z ~ N(0,1): z_i = sqrt(2) t_i, weight w_i/sqrt(pi).
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(order, order);
    for (int k = 0; k + 1 < order; ++k)
        j(k, k + 1) = j(k + 1, k) = std::sqrt((k + 1) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigensolver failed");
    GaussianQuadrature q;
    q.nodes.resize(static_cast<std::size_t>(order));
    q.weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        q.nodes[static_cast<std::size_t>(i)] = std::sqrt(2.0) * es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        q.weights[static_cast<std::size_t>(i)] = v0 * v0;  // already normalized: sum = 1
    }
    return q;
}

void hermite_he(double x, int deg, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(deg) + 1);
    out[0] = 1.0;
    if (deg == 0) return;
    out[1] = x;
    for (int k = 1; k < deg; ++k)
        out[static_cast<std::size_t>(k) + 1] =
            x * out[static_cast<std::size_t>(k)] - k * out[static_cast<std::size_t>(k) - 1];
}

void hermite_he_normalized(double x, int deg, std::vector<double>& out) {
    hermite_he(x, deg, out);
    double fact = 1.0;
    for (int k = 2; k <= deg; ++k) {
        fact *= k;
        out[static_cast<std::size_t>(k)] /= std::sqrt(fact);
    }
}

double shifted_he_product_mean(int a, int b, double t) {
    // He_n(t+z) = sum_k C(n,k) He_k(z) t^{n-k}; E He_j He_k = j! [j==k]
    double total = 0.0;
    const int jmax = std::min(a, b);
    for (int j = 0; j <= jmax; ++j) {
        double term = 1.0;
        for (int i = 0; i < j; ++i) {
            term *= static_cast<double>(a - i) / (j - i);      // C(a,j) built up
        }
        double cb = 1.0;
        for (int i = 0; i < j; ++i) cb *= static_cast<double>(b - i) / (j - i);
        double jf = 1.0;
        for (int i = 2; i <= j; ++i) jf *= i;
        total += term * cb * jf * std::pow(t, a + b - 2 * j);
    }
    return total;
}

}  // namespace gaplab::hermite

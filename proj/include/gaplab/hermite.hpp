#pragma once
#include <cstddef>
#include <vector>

namespace gaplab::hermite {

// Quadrature rule for E[f(Z)], Z ~ N(0,1): sum_i weight[i] * f(node[i]).
struct GaussianQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Golub-Welsch on the Hermite Jacobi matrix, rescaled to the N(0,1) measure.
GaussianQuadrature gauss_hermite(int order);

// Probabilists' Hermite He_0..He_deg at x (He_{k+1} = x He_k - k He_{k-1}).
void hermite_he(double x, int deg, std::vector<double>& out);

// Normalized: he_k = He_k / sqrt(k!), orthonormal under N(0,1).
void hermite_he_normalized(double x, int deg, std::vector<double>& out);

// E_Z[He_a(t+Z) He_b(t+Z)] = sum_j C(a,j) C(b,j) j! t^{a+b-2j} for Z ~ N(0,1).
double shifted_he_product_mean(int a, int b, double t);

}  // namespace gaplab::hermite

#pragma once
#include <vector>

#include "gaplab/linalg.hpp"

namespace gaplab::spectral {

struct TopEigenPair {
    double value = 0.0;
    std::vector<double> vector;
    int iterations = 0;
    bool converged = false;
};

// Largest algebraic eigenvalue and its eigenvector.
// Dense Householder reduction for small n, Lanczos with full
// reorthogonalization above; both deterministic for a given input.
TopEigenPair top_eigenpair(const SymMatrix& a, double tol = 1e-10, int max_iter = 0);

// Same, but throws on non-convergence.
TopEigenPair top_eigenpair_checked(const SymMatrix& a, double tol = 1e-10);

// All eigenvalues (ascending), dense solver. Intended for n <= ~500.
std::vector<double> dense_eigenvalues(const SymMatrix& a);

}  // namespace gaplab::spectral

#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gaplab {

// Dense symmetric matrix, full storage, upper triangle authoritative:
// set() writes both (i,j) and (j,i).
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
        if (n == 0) throw std::invalid_argument("SymMatrix: n must be >= 1");
    }
    std::size_t n() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        a_[i * n_ + j] = v;
        a_[j * n_ + i] = v;
    }
    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    // y = A x
    void matvec(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double* row = a_.data() + i * n_;
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    }

    double quad_form(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double* row = a_.data() + i * n_;
            double r = 0.0;
            for (std::size_t j = 0; j < n_; ++j) r += row[j] * x[j];
            s += x[i] * r;
        }
        return s;
    }

    double max_asymmetry() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                m = std::max(m, std::abs(a_[i * n_ + j] - a_[j * n_ + i]));
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// Plain dense rectangular matrix (used by asymmetric model variants).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, 0.0) {}
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<double> a_;
};

// Dense order-p tensor with side length n (n^p entries, row-major).
class Tensor {
public:
    Tensor() = default;
    Tensor(std::size_t order, std::size_t n) : p_(order), n_(n) {
        if (order < 2) throw std::invalid_argument("Tensor: order must be >= 2");
        std::size_t count = 1;
        for (std::size_t i = 0; i < order; ++i) {
            if (count > (std::size_t(1) << 40) / n) throw std::invalid_argument("Tensor: too large");
            count *= n;
        }
        a_.assign(count, 0.0);
    }
    std::size_t order() const { return p_; }
    std::size_t n() const { return n_; }
    std::size_t size() const { return a_.size(); }
    double operator[](std::size_t flat) const { return a_[flat]; }
    double& operator[](std::size_t flat) { return a_[flat]; }
    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

private:
    std::size_t p_ = 0, n_ = 0;
    std::vector<double> a_;
};

// Simple undirected graph as an edge list; labels[i] == -1 means unassigned
// (the "star" label of partially labelled community models).
struct Graph {
    std::size_t n = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // i < j, or i == j if self-loops allowed
    bool allow_self_loops = false;
    std::vector<int> labels;  // empty if the model carries no labels

    void add_edge(std::uint32_t i, std::uint32_t j) {
        if (i > j) std::swap(i, j);
        if (i == j && !allow_self_loops) throw std::invalid_argument("Graph: self-loop");
        edges.emplace_back(i, j);
    }
    std::vector<std::uint8_t> dense_adjacency() const {
        std::vector<std::uint8_t> a(n * n, 0);
        for (auto [i, j] : edges) {
            a[i * n + j] = 1;
            a[j * n + i] = 1;
        }
        return a;
    }
    double mean_degree() const {
        return n == 0 ? 0.0 : 2.0 * static_cast<double>(edges.size()) / static_cast<double>(n);
    }
};

// Vector over {-1,+1}.
struct SpinVector {
    std::vector<std::int8_t> s;
    std::size_t n() const { return s.size(); }
    int operator[](std::size_t i) const { return s[i]; }
    void flip(std::size_t i) { s[i] = static_cast<std::int8_t>(-s[i]); }
};

inline double dot(const SpinVector& a, const std::vector<double>& x) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.n(); ++i) r += a[i] * x[i];
    return r;
}

inline long spin_dot(const SpinVector& a, const SpinVector& b) {
    long r = 0;
    for (std::size_t i = 0; i < a.n(); ++i) r += a[i] * b[i];
    return r;
}

// k-sparse 0/1 vector: sorted support.
struct SparseIndicator {
    std::size_t n = 0;
    std::vector<std::uint32_t> support;  // sorted, unique
    std::size_t sparsity() const { return support.size(); }
    bool contains(std::uint32_t i) const {
        return std::binary_search(support.begin(), support.end(), i);
    }
};

inline long sparse_dot(const SparseIndicator& a, const SparseIndicator& b) {
    long r = 0;
    std::size_t i = 0, j = 0;
    while (i < a.support.size() && j < b.support.size()) {
        if (a.support[i] < b.support[j]) ++i;
        else if (a.support[i] > b.support[j]) ++j;
        else { ++r; ++i; ++j; }
    }
    return r;
}

}  // namespace gaplab

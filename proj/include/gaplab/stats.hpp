#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gaplab {

// Welford accumulator.
class RunningStat {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
    double stderr_mean() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    void merge(const RunningStat& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) { *this = o; return; }
        const double d = o.mean_ - mean_;
        const double nt = static_cast<double>(n_ + o.n_);
        m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / nt;
        mean_ += d * static_cast<double>(o.n_) / nt;
        n_ += o.n_;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

inline double logsumexp(const std::vector<double>& xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// Streaming log-sum-exp: log(sum exp(x_i)) without storing terms.
class LogSumExp {
public:
    void add(double x) {
        if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
        ++n_;
    }
    std::size_t count() const { return n_; }
    double value() const {
        return n_ == 0 ? -std::numeric_limits<double>::infinity() : max_ + std::log(sum_);
    }
    // log of the average exp(x_i)
    double log_mean() const { return value() - std::log(static_cast<double>(n_)); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    std::size_t n_ = 0;
};

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean_of: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// binary entropy in bits, h(0)=h(1)=0
inline double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

inline double sq(double x) { return x * x; }

// Kahan compensated accumulator.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace gaplab

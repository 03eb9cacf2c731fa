#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gaplab::lowdeg {

// Sparse multi-index over integer coordinates: sorted (coordinate, multiplicity)
// pairs with multiplicity >= 1. Shared by the cumulant recursions; a multigraph
// is a multi-index whose coordinates encode vertex pairs.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<std::pair<int, int>> entries);

    const std::vector<std::pair<int, int>>& entries() const { return e_; }
    int total() const;  // |alpha|
    bool empty() const { return e_.empty(); }
    int multiplicity(int coord) const;
    std::string key() const;

    // entrywise beta <= alpha
    bool contains(const MultiIndex& beta) const;
    MultiIndex minus(const MultiIndex& beta) const;
    // product of binomial coefficients C(alpha_i, beta_i)
    double choose(const MultiIndex& beta) const;

    // Enumerate every beta with 0 <= beta <= alpha (including 0 and alpha).
    // Throws if the lattice has more than max_count elements.
    void for_each_sub(const std::function<void(const MultiIndex&)>& fn,
                      std::size_t max_count = 1000000) const;

private:
    std::vector<std::pair<int, int>> e_;
};

// Multigraph on vertex set {0, 1, ...}: coordinates are unordered pairs
// (i <= j), self-loops allowed.
class Multigraph {
public:
    Multigraph() = default;
    // edges as (i, j, multiplicity)
    static Multigraph from_edges(const std::vector<std::array<int, 3>>& edges);
    static int pair_code(int i, int j);
    static std::pair<int, int> code_pair(int code);

    const MultiIndex& index() const { return idx_; }
    int total_edges() const { return idx_.total(); }
    std::vector<int> vertex_set() const;  // V(alpha): vertices with >= 1 incident edge
    // true if some non-empty connected component avoids the given vertex
    bool has_component_avoiding(int vertex) const;
    std::string key() const { return idx_.key(); }

    void for_each_sub(const std::function<void(const Multigraph&)>& fn,
                      std::size_t max_count = 1000000) const;
    double choose(const Multigraph& beta) const { return idx_.choose(beta.idx_); }
    Multigraph minus(const Multigraph& beta) const;
    bool empty() const { return idx_.empty(); }

private:
    explicit Multigraph(MultiIndex idx) : idx_(std::move(idx)) {}
    MultiIndex idx_;
};

// All multigraphs on vertex set [n] with 1 <= |alpha| <= max_edges,
// plus the empty multigraph.
std::vector<Multigraph> enumerate_multigraphs(int n, int max_edges);

}  // namespace gaplab::lowdeg

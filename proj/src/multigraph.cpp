#include "gaplab/multigraph.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace gaplab::lowdeg {

MultiIndex::MultiIndex(std::vector<std::pair<int, int>> entries) : e_(std::move(entries)) {
    std::sort(e_.begin(), e_.end());
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (e_[i].second < 1) throw std::invalid_argument("MultiIndex: multiplicity must be >= 1");
        if (i > 0 && e_[i].first == e_[i - 1].first)
            throw std::invalid_argument("MultiIndex: duplicate coordinate");
    }
}

int MultiIndex::total() const {
    int t = 0;
    for (const auto& [c, m] : e_) t += m;
    return t;
}

int MultiIndex::multiplicity(int coord) const {
    auto it = std::lower_bound(e_.begin(), e_.end(), std::make_pair(coord, 0));
    return (it != e_.end() && it->first == coord) ? it->second : 0;
}

std::string MultiIndex::key() const {
    std::string k;
    for (const auto& [c, m] : e_) {
        k += std::to_string(c);
        k += ':';
        k += std::to_string(m);
        k += ';';
    }
    return k;
}

bool MultiIndex::contains(const MultiIndex& beta) const {
    for (const auto& [c, m] : beta.e_)
        if (multiplicity(c) < m) return false;
    return true;
}

MultiIndex MultiIndex::minus(const MultiIndex& beta) const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [c, m] : e_) {
        const int r = m - beta.multiplicity(c);
        if (r < 0) throw std::invalid_argument("MultiIndex::minus: beta not <= alpha");
        if (r > 0) out.emplace_back(c, r);
    }
    return MultiIndex(std::move(out));
}

double MultiIndex::choose(const MultiIndex& beta) const {
    double prod = 1.0;
    for (const auto& [c, m] : e_) {
        const int b = beta.multiplicity(c);
        // C(m, b)
        double binom = 1.0;
        for (int i = 0; i < b; ++i) binom = binom * (m - i) / (i + 1);
        prod *= binom;
    }
    return prod;
}

void MultiIndex::for_each_sub(const std::function<void(const MultiIndex&)>& fn,
                              std::size_t max_count) const {
    std::size_t count = 1;
    for (const auto& [c, m] : e_) {
        count *= static_cast<std::size_t>(m) + 1;
        if (count > max_count) throw std::invalid_argument("MultiIndex: sub-index lattice too large");
    }
    std::vector<int> mult(e_.size(), 0);
    while (true) {
        std::vector<std::pair<int, int>> entries;
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (mult[i] > 0) entries.emplace_back(e_[i].first, mult[i]);
        fn(MultiIndex(std::move(entries)));
        // odometer increment
        std::size_t pos = 0;
        while (pos < e_.size() && mult[pos] == e_[pos].second) mult[pos++] = 0;
        if (pos == e_.size()) break;
        ++mult[pos];
    }
}

namespace {
constexpr int kPairBase = 32768;
}

int Multigraph::pair_code(int i, int j) {
    if (i > j) std::swap(i, j);
    if (j >= kPairBase) throw std::invalid_argument("Multigraph: vertex index too large");
    return i * kPairBase + j;
}

std::pair<int, int> Multigraph::code_pair(int code) {
    return {code / kPairBase, code % kPairBase};
}

Multigraph Multigraph::from_edges(const std::vector<std::array<int, 3>>& edges) {
    std::vector<std::pair<int, int>> entries;
    entries.reserve(edges.size());
    for (const auto& e : edges) entries.emplace_back(pair_code(e[0], e[1]), e[2]);
    return Multigraph(MultiIndex(std::move(entries)));
}

std::vector<int> Multigraph::vertex_set() const {
    std::vector<int> vs;
    for (const auto& [c, m] : idx_.entries()) {
        auto [i, j] = code_pair(c);
        vs.push_back(i);
        vs.push_back(j);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

bool Multigraph::has_component_avoiding(int vertex) const {
    const auto vs = vertex_set();
    if (vs.empty()) return false;
    // union-find over incident vertices
    std::vector<int> parent(vs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto id = [&](int v) {
        return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
    };
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const auto& [c, m] : idx_.entries()) {
        auto [i, j] = code_pair(c);
        parent[find(id(i))] = find(id(j));
    }
    const bool root_present = std::binary_search(vs.begin(), vs.end(), vertex);
    const int root = root_present ? find(id(vertex)) : -1;
    for (std::size_t k = 0; k < vs.size(); ++k)
        if (find(static_cast<int>(k)) != root) return true;
    return false;
}

void Multigraph::for_each_sub(const std::function<void(const Multigraph&)>& fn,
                              std::size_t max_count) const {
    idx_.for_each_sub([&](const MultiIndex& sub) { fn(Multigraph(sub)); }, max_count);
}

Multigraph Multigraph::minus(const Multigraph& beta) const {
    return Multigraph(idx_.minus(beta.idx_));
}

std::vector<Multigraph> enumerate_multigraphs(int n, int max_edges) {
    std::vector<std::pair<int, int>> slots;  // all pairs i <= j
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) slots.emplace_back(i, j);

    std::vector<Multigraph> out;
    std::vector<std::array<int, 3>> current;
    // choose multiplicities over slots with total in [0, max_edges]
    std::function<void(std::size_t, int)> recurse = [&](std::size_t slot, int remaining) {
        if (slot == slots.size()) {
            out.push_back(Multigraph::from_edges(current));
            return;
        }
        // leave zero on this slot
        recurse(slot + 1, remaining);
        for (int m = 1; m <= remaining; ++m) {
            current.push_back({slots[slot].first, slots[slot].second, m});
            recurse(slot + 1, remaining - m);
            current.pop_back();
        }
    };
    recurse(0, max_edges);
    return out;
}

}  // namespace gaplab::lowdeg

#ifndef SUBCRIT_DISJOINT_SET_HPP
#define SUBCRIT_DISJOINT_SET_HPP

#include <cstdint>
#include <numeric>
#include <vector>

namespace subcrit {

/// Union-find with union by size and path halving.
class DisjointSet {
public:
    explicit DisjointSet(std::int64_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::int64_t{0});
    }

    std::int64_t find(std::int64_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns true when the edge merged two components.
    bool unite(std::int64_t a, std::int64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    std::int64_t component_size(std::int64_t x) { return size_[find(x)]; }
    std::int64_t count() const { return static_cast<std::int64_t>(parent_.size()); }

private:
    std::vector<std::int64_t> parent_;
    std::vector<std::int64_t> size_;
};

} // namespace subcrit

#endif

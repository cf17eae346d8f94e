#include "subcrit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "subcrit/disjoint_set.hpp"

namespace subcrit {

std::vector<std::int32_t> sample_types(const TypeSpace& space, std::int64_t n,
                                       TypeAssignMode mode, Rng& rng) {
    const Eigen::Index n_types = space.size();
    std::vector<std::int32_t> types(static_cast<std::size_t>(n));

    if (mode == TypeAssignMode::iid) {
        std::vector<double> cum(n_types);
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n_types; ++k) {
            acc += space.weights[k];
            cum[k] = acc;
        }
        cum.back() = 1.0;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::int64_t i = 0; i < n; ++i) {
            const double u = unif(rng);
            const auto it = std::upper_bound(cum.begin(), cum.end(), u);
            types[i] = static_cast<std::int32_t>(it - cum.begin());
        }
        return types;
    }

    // quota: floor(n mu(k)) per atom, then largest-remainder completion.
    std::vector<std::int64_t> count(n_types);
    std::vector<std::pair<double, Eigen::Index>> remainder(n_types);
    std::int64_t assigned = 0;
    for (Eigen::Index k = 0; k < n_types; ++k) {
        const double exact = static_cast<double>(n) * space.weights[k];
        count[k] = static_cast<std::int64_t>(std::floor(exact));
        remainder[k] = {exact - std::floor(exact), k};
        assigned += count[k];
    }
    std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::int64_t extra = 0; extra < n - assigned; ++extra)
        ++count[remainder[static_cast<std::size_t>(extra) % remainder.size()].second];

    std::size_t pos = 0;
    for (Eigen::Index k = 0; k < n_types; ++k)
        for (std::int64_t i = 0; i < count[k]; ++i) types[pos++] = static_cast<std::int32_t>(k);

    // Fisher-Yates shuffle so vertex labels carry no type ordering.
    for (std::int64_t i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<std::int64_t> pick(0, i);
        std::swap(types[i], types[pick(rng)]);
    }
    return types;
}

namespace {

// Number of unordered pairs inside / across classes.
std::int64_t pair_count(std::int64_t nk, std::int64_t nl, bool same) {
    return same ? nk * (nk - 1) / 2 : nk * nl;
}

// Decode a triangular pair code in [0, m(m-1)/2) to (i, j) with i < j < m.
// Row i holds entries j in (i, m), starting at offset i*m - i*(i+1)/2.
std::pair<std::int64_t, std::int64_t> decode_same(std::int64_t code, std::int64_t m) {
    auto row_start = [m](std::int64_t i) { return i * m - i * (i + 1) / 2; };
    const double md = static_cast<double>(m) - 0.5;
    std::int64_t i = static_cast<std::int64_t>(
        std::floor(md - std::sqrt(std::max(0.0, md * md - 2.0 * static_cast<double>(code)))));
    i = std::clamp<std::int64_t>(i, 0, m - 2);
    while (i + 1 <= m - 2 && row_start(i + 1) <= code) ++i;
    while (i > 0 && row_start(i) > code) --i;
    return {i, i + 1 + (code - row_start(i))};
}

// Floyd's algorithm: k distinct codes uniform over [0, pool), insertion order
// preserved for deterministic edge emission.
std::vector<std::int64_t> sample_distinct(std::int64_t pool, std::int64_t k, Rng& rng) {
    std::vector<std::int64_t> picked;
    picked.reserve(static_cast<std::size_t>(k));
    std::unordered_set<std::int64_t> seen;
    seen.reserve(static_cast<std::size_t>(k) * 2);
    for (std::int64_t t = pool - k; t < pool; ++t) {
        std::uniform_int_distribution<std::int64_t> pick(0, t);
        const std::int64_t r = pick(rng);
        if (seen.insert(r).second)
            picked.push_back(r);
        else {
            seen.insert(t);
            picked.push_back(t);
        }
    }
    return picked;
}

void push_edge(TypedGraph& g, std::int32_t u, std::int32_t v) {
    if (u > v) std::swap(u, v);
    g.edges.emplace_back(u, v);
}

} // namespace

TypedGraph sample_graph(const TypeSpace& space, double c,
                        std::vector<std::int32_t> types, EdgeSampleMethod method,
                        Rng& rng) {
    TypedGraph g;
    g.n = static_cast<std::int64_t>(types.size());
    g.type_of = std::move(types);
    const double n = static_cast<double>(g.n);
    const Eigen::Index n_types = space.size();

    if (method == EdgeSampleMethod::naive) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::int64_t i = 0; i < g.n; ++i) {
            for (std::int64_t j = i + 1; j < g.n; ++j) {
                const double p = std::min(
                    c * space.activities[g.type_of[i]] * space.activities[g.type_of[j]] / n,
                    1.0);
                if (unif(rng) < p)
                    push_edge(g, static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
            }
        }
        return g;
    }

    std::vector<std::vector<std::int32_t>> members(static_cast<std::size_t>(n_types));
    for (std::int64_t i = 0; i < g.n; ++i)
        members[static_cast<std::size_t>(g.type_of[i])].push_back(
            static_cast<std::int32_t>(i));

    for (Eigen::Index k = 0; k < n_types; ++k) {
        for (Eigen::Index l = k; l < n_types; ++l) {
            const bool same = k == l;
            const auto& ck = members[static_cast<std::size_t>(k)];
            const auto& cl = members[static_cast<std::size_t>(l)];
            const std::int64_t pairs = pair_count(static_cast<std::int64_t>(ck.size()),
                                                  static_cast<std::int64_t>(cl.size()), same);
            if (pairs == 0) continue;

            const double p =
                std::min(c * space.activities[k] * space.activities[l] / n, 1.0);
            std::int64_t edge_count;
            if (p >= 1.0)
                edge_count = pairs; // clamp regime: every pair present
            else if (p <= 0.0)
                continue;
            else
                edge_count = std::binomial_distribution<std::int64_t>(pairs, p)(rng);
            if (edge_count == 0) continue;

            for (std::int64_t code : sample_distinct(pairs, edge_count, rng)) {
                if (same) {
                    const auto [i, j] = decode_same(code, static_cast<std::int64_t>(ck.size()));
                    push_edge(g, ck[static_cast<std::size_t>(i)], ck[static_cast<std::size_t>(j)]);
                } else {
                    const std::int64_t i = code / static_cast<std::int64_t>(cl.size());
                    const std::int64_t j = code % static_cast<std::int64_t>(cl.size());
                    push_edge(g, ck[static_cast<std::size_t>(i)], cl[static_cast<std::size_t>(j)]);
                }
            }
        }
    }
    return g;
}

ComponentStats components(const TypedGraph& graph, const TypeSpace& space) {
    DisjointSet dsu(graph.n);
    for (const auto& [u, v] : graph.edges) dsu.unite(u, v);

    std::vector<std::int64_t> size_of(static_cast<std::size_t>(graph.n), 0);
    std::vector<double> act_of(static_cast<std::size_t>(graph.n), 0.0);
    for (std::int64_t i = 0; i < graph.n; ++i) {
        const std::int64_t r = dsu.find(i);
        ++size_of[static_cast<std::size_t>(r)];
        act_of[static_cast<std::size_t>(r)] += space.activities[graph.type_of[i]];
    }

    ComponentStats stats;
    for (std::int64_t i = 0; i < graph.n; ++i) {
        if (size_of[static_cast<std::size_t>(i)] == 0) continue;
        stats.sizes.push_back(size_of[static_cast<std::size_t>(i)]);
        stats.activities.push_back(act_of[static_cast<std::size_t>(i)]);
    }
    stats.component_count = static_cast<std::int64_t>(stats.sizes.size());
    stats.c1 = *std::max_element(stats.sizes.begin(), stats.sizes.end());
    stats.max_activity = *std::max_element(stats.activities.begin(), stats.activities.end());
    std::sort(stats.sizes.begin(), stats.sizes.end());
    std::sort(stats.activities.begin(), stats.activities.end());
    return stats;
}

void write_edge_list(std::ostream& os, const TypedGraph& graph) {
    os << graph.n << ' ' << graph.edges.size() << '\n';
    for (const auto& [u, v] : graph.edges) os << u << ' ' << v << '\n';
}

} // namespace subcrit

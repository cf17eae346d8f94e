#include "subcrit/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "subcrit/disjoint_set.hpp"
#include "subcrit/theory.hpp"

namespace subcrit {

namespace {

void check_lattice(const LatticeSpec& lattice) {
    if (lattice.d < 1 || lattice.d > 3)
        throw OutOfRange("lattice dimension must be 1, 2 or 3, got " +
                         std::to_string(lattice.d));
    if (lattice.N < 0) throw OutOfRange("box radius must be nonnegative");
    if (!(lattice.p >= 0.0) || !(lattice.p < 1.0))
        throw OutOfRange("bond probability must lie in [0, 1), got " +
                         std::to_string(lattice.p));
}

} // namespace

ClusterSet sample_clusters(const LatticeSpec& lattice, Rng& rng) {
    check_lattice(lattice);
    const std::int64_t side = lattice.side();
    const std::int64_t box = lattice.box_size();

    DisjointSet dsu(box);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Bonds in fixed axis-major order: +1 step along each axis, free boundary.
    std::int64_t stride = 1;
    for (int axis = 0; axis < lattice.d; ++axis) {
        for (std::int64_t site = 0; site < box; ++site) {
            const std::int64_t coord = (site / stride) % side;
            if (coord + 1 >= side) continue;
            if (unif(rng) < lattice.p) dsu.unite(site, site + stride);
        }
        stride *= side;
    }

    ClusterSet out;
    out.cluster_of.resize(static_cast<std::size_t>(box));
    std::vector<std::int32_t> id_of_root(static_cast<std::size_t>(box), -1);
    for (std::int64_t site = 0; site < box; ++site) {
        const std::int64_t root = dsu.find(site);
        if (id_of_root[static_cast<std::size_t>(root)] < 0) {
            id_of_root[static_cast<std::size_t>(root)] =
                static_cast<std::int32_t>(out.k_n++);
            out.sizes.push_back(0);
        }
        const std::int32_t id = id_of_root[static_cast<std::size_t>(root)];
        out.cluster_of[static_cast<std::size_t>(site)] = id;
        ++out.sizes[static_cast<std::size_t>(id)];
    }
    return out;
}

double OneDClusterLaw::size_pmf(std::int64_t k) const {
    if (k < 1) return 0.0;
    return static_cast<double>(k) * std::pow(p, static_cast<double>(k - 1)) *
           (1.0 - p) * (1.0 - p);
}

double OneDClusterLaw::macro_pmf(std::int64_t k) const {
    if (k < 1) return 0.0;
    return std::pow(p, static_cast<double>(k - 1)) * (1.0 - p);
}

OneDClusterLaw one_d_cluster_law(double p) {
    if (!(p >= 0.0) || !(p < 1.0))
        throw OutOfRange("one_d_cluster_law requires 0 <= p < 1, got " +
                         std::to_string(p));
    OneDClusterLaw law;
    law.p = p;
    law.mean_size = (1.0 + p) / (1.0 - p);
    law.mean_inverse_size = 1.0 - p;
    return law;
}

MacroLaw empirical_macro_law(const ClusterSet& clusters) {
    if (clusters.k_n == 0) throw OutOfRange("empty cluster set");
    MacroLaw law;
    std::map<std::int64_t, std::int64_t> count;
    std::int64_t box = 0;
    for (std::int64_t s : clusters.sizes) {
        ++count[s];
        box += s;
    }
    double c_mean = 0.0;
    for (const auto& [k, n_k] : count) {
        law.mu_hat[k] = static_cast<double>(n_k) / static_cast<double>(clusters.k_n);
        c_mean += static_cast<double>(k) * static_cast<double>(k) *
                  static_cast<double>(n_k);
    }
    law.inv_c_mean = static_cast<double>(clusters.k_n) / static_cast<double>(box);
    law.c_mean = c_mean / static_cast<double>(box);
    return law;
}

HybridSample add_long_edges(const LatticeSpec& lattice, const ClusterSet& clusters,
                            double c, Rng& rng) {
    const std::int64_t box = lattice.box_size();
    const std::int64_t total_pairs = box * (box - 1) / 2;
    const double p_long = std::min(c / static_cast<double>(box), 1.0);

    std::int64_t n_edges = 0;
    if (p_long >= 1.0)
        n_edges = total_pairs;
    else if (p_long > 0.0 && total_pairs > 0)
        n_edges = std::binomial_distribution<std::int64_t>(total_pairs, p_long)(rng);

    // Distinct site pairs by rejection; n_edges << total_pairs in any sane run.
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    pairs.reserve(static_cast<std::size_t>(n_edges));
    std::unordered_set<std::int64_t> seen;
    seen.reserve(static_cast<std::size_t>(n_edges) * 2);
    std::uniform_int_distribution<std::int64_t> site(0, box - 1);
    while (static_cast<std::int64_t>(pairs.size()) < n_edges) {
        std::int64_t u = site(rng);
        std::int64_t v = site(rng);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (!seen.insert(u * box + v).second) continue;
        pairs.emplace_back(u, v);
    }

    HybridSample out;
    out.long_edge_count = n_edges;

    // Route 1: site-level union-find seeded with the short-range partition
    // (every site chained to the first site of its cluster).
    DisjointSet site_dsu(box);
    {
        std::vector<std::int64_t> first_site(static_cast<std::size_t>(clusters.k_n), -1);
        for (std::int64_t s = 0; s < box; ++s) {
            const std::int32_t id = clusters.cluster_of[static_cast<std::size_t>(s)];
            if (first_site[static_cast<std::size_t>(id)] < 0)
                first_site[static_cast<std::size_t>(id)] = s;
            else
                site_dsu.unite(first_site[static_cast<std::size_t>(id)], s);
        }
    }
    for (const auto& [u, v] : pairs) site_dsu.unite(u, v);
    std::int64_t best = 0;
    for (std::int64_t s = 0; s < box; ++s)
        if (site_dsu.find(s) == s) best = std::max(best, site_dsu.component_size(s));
    out.c1_combined = best;

    // Route 2: macro-vertex union-find over cluster ids, same edge realization.
    DisjointSet macro_dsu(clusters.k_n);
    for (const auto& [u, v] : pairs)
        macro_dsu.unite(clusters.cluster_of[static_cast<std::size_t>(u)],
                        clusters.cluster_of[static_cast<std::size_t>(v)]);
    std::vector<std::int64_t> macro_sites(static_cast<std::size_t>(clusters.k_n), 0);
    for (std::int64_t id = 0; id < clusters.k_n; ++id)
        macro_sites[static_cast<std::size_t>(macro_dsu.find(id))] +=
            clusters.sizes[static_cast<std::size_t>(id)];
    out.c1_macro_activity = *std::max_element(macro_sites.begin(), macro_sites.end());

    return out;
}

HybridSample sample_hybrid(const LatticeSpec& lattice, double c, Rng& rng) {
    const ClusterSet clusters = sample_clusters(lattice, rng);
    return add_long_edges(lattice, clusters, c, rng);
}

namespace {

double gamma_from_space(const TypeSpace& macro_space, double c, double inv_c_mean,
                        double c_mean) {
    if (c >= 1.0 / c_mean) return 1.0;
    return alpha_of_c(macro_space, c * inv_c_mean);
}

} // namespace

double gamma_constant(const MacroLaw& law, double c) {
    std::vector<TypeAtom> atoms;
    atoms.reserve(law.mu_hat.size());
    for (const auto& [k, freq] : law.mu_hat)
        atoms.push_back({static_cast<double>(k), freq, static_cast<double>(k)});
    return gamma_from_space(build_space(atoms), c, law.inv_c_mean, law.c_mean);
}

double gamma_constant(const OneDClusterLaw& law, double c, double tail_tol) {
    if (law.p == 0.0)
        return gamma_from_space(homogeneous_space(), c, 1.0, 1.0);
    FamilySpec family;
    family.kind = FamilyKind::geometric;
    family.param = 1.0 - law.p; // macro law is geometric with success 1-p
    family.psi = PsiKind::identity;
    return gamma_from_space(truncate_family(family, tail_tol), c, law.mean_inverse_size,
                            law.mean_size);
}

} // namespace subcrit

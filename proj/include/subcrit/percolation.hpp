#ifndef SUBCRIT_PERCOLATION_HPP
#define SUBCRIT_PERCOLATION_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "subcrit/rng.hpp"
#include "subcrit/type_space.hpp"

namespace subcrit {

/// Box {-N,...,N}^d with nearest-neighbour bonds open with probability p
/// (free boundary, no wrap). The caller asserts p below the percolation
/// threshold of the dimension; this is not checked.
struct LatticeSpec {
    int d = 1;      // dimension, 1..3
    std::int64_t N = 0; // box radius
    double p = 0.0; // bond probability

    std::int64_t side() const { return 2 * N + 1; }
    std::int64_t box_size() const {
        std::int64_t s = 1;
        for (int a = 0; a < d; ++a) s *= side();
        return s;
    }
};

/// Open-cluster partition of the box.
struct ClusterSet {
    std::vector<std::int32_t> cluster_of; // site -> cluster id, ids 0..k_n-1
    std::vector<std::int64_t> sizes;      // cluster id -> site count
    std::int64_t k_n = 0;                 // number of clusters
};

ClusterSet sample_clusters(const LatticeSpec& lattice, Rng& rng);

/// Exact one-dimensional subcritical cluster law:
/// P(|C|=k) = k p^{k-1} (1-p)^2, E|C| = (1+p)/(1-p), E(1/|C|) = 1-p,
/// and the macro-vertex law mu(k) = p^{k-1}(1-p).
struct OneDClusterLaw {
    double p;
    double mean_size;         // E|C|
    double mean_inverse_size; // E(1/|C|)

    double size_pmf(std::int64_t k) const;
    double macro_pmf(std::int64_t k) const;
};

OneDClusterLaw one_d_cluster_law(double p);

/// Empirical macro-vertex law: cluster-size frequencies among clusters, plus
/// the K_N / |B(N)| estimator of E(1/|C|) and the site-weighted estimator of
/// E|C|.
struct MacroLaw {
    std::map<std::int64_t, double> mu_hat; // size -> frequency among clusters
    double inv_c_mean = 0.0;               // k_n / box_size
    double c_mean = 0.0;                   // sum k^2 #clusters(k) / box_size
};

MacroLaw empirical_macro_law(const ClusterSet& clusters);

/// One realization of the short+long-range graph, with the largest component
/// measured two ways on the same randomness: directly on sites, and as the
/// largest macro-component activity. The two must coincide samplewise.
struct HybridSample {
    std::int64_t c1_combined = 0;
    std::int64_t c1_macro_activity = 0;
    std::int64_t long_edge_count = 0;
};

/// Long-range edges: Binomial(box(box-1)/2, c/box) distinct site pairs,
/// merged into the given short-range cluster partition.
HybridSample add_long_edges(const LatticeSpec& lattice, const ClusterSet& clusters,
                            double c, Rng& rng);

/// Samples clusters and long edges from one stream.
HybridSample sample_hybrid(const LatticeSpec& lattice, double c, Rng& rng);

/// Decay constant of the hybrid lattice model: alpha evaluated at
/// c * E(1/|C|) on the macro type space with psi(x) = x; 1 when c >= 1/E|C|.
double gamma_constant(const MacroLaw& law, double c);
double gamma_constant(const OneDClusterLaw& law, double c, double tail_tol = 1e-12);

} // namespace subcrit

#endif

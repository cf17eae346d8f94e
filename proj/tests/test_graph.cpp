#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "subcrit/graph.hpp"

using namespace subcrit;

TEST_CASE("sample_types: degenerate and quota modes") {
    const TypeSpace hom = homogeneous_space();
    Rng rng = make_rng(3, 1);
    const auto all = sample_types(hom, 50, TypeAssignMode::iid, rng);
    for (auto t : all) CHECK(t == 0);

    const TypeSpace two = two_type_space();
    Rng rng2 = make_rng(3, 2);
    const auto quota = sample_types(two, 10, TypeAssignMode::quota, rng2);
    std::int64_t ones = 0;
    for (auto t : quota) ones += t;
    CHECK(ones == 5);

    // Largest-remainder completion on an odd count.
    Rng rng3 = make_rng(3, 3);
    const auto quota11 = sample_types(two, 11, TypeAssignMode::quota, rng3);
    std::int64_t ones11 = 0;
    for (auto t : quota11) ones11 += t;
    CHECK((ones11 == 5 || ones11 == 6));
}

TEST_CASE("sample_types: iid frequencies match the law") {
    const TypeSpace two = two_type_space();
    const std::int64_t n = 100000;
    Rng rng = make_rng(11, 0);
    const auto types = sample_types(two, n, TypeAssignMode::iid, rng);
    std::int64_t zeros = 0;
    for (auto t : types) zeros += t == 0 ? 1 : 0;
    const double freq = static_cast<double>(zeros) / static_cast<double>(n);
    CHECK(std::abs(freq - 0.5) <= 4.0 * std::sqrt(0.25 / static_cast<double>(n)));
}

TEST_CASE("sample_graph: degenerate c = 0 and the min{.,1} clamp") {
    const TypeSpace two = two_type_space();
    Rng rng = make_rng(5, 0);
    auto types = sample_types(two, 100, TypeAssignMode::iid, rng);
    const TypedGraph empty =
        sample_graph(two, 0.0, std::move(types), EdgeSampleMethod::grouped, rng);
    CHECK(empty.edges.empty());
    CHECK(components(empty, two).c1 == 1);

    // n = 2 with c psi psi >= n: the single edge is present surely.
    const TypeSpace b2 = homogeneous_space(2.0);
    for (EdgeSampleMethod method : {EdgeSampleMethod::grouped, EdgeSampleMethod::naive}) {
        Rng r = make_rng(5, 1);
        const TypedGraph g = sample_graph(b2, 1.0, {0, 0}, method, r);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0] == std::pair<std::int32_t, std::int32_t>{0, 1});
    }
}

TEST_CASE("sample_graph: no self-loops or duplicates, valid type indices") {
    const TypeSpace two = two_type_space();
    for (EdgeSampleMethod method : {EdgeSampleMethod::grouped, EdgeSampleMethod::naive}) {
        Rng rng = make_rng(17, method == EdgeSampleMethod::grouped ? 0 : 1);
        auto types = sample_types(two, 300, TypeAssignMode::iid, rng);
        const TypedGraph g = sample_graph(two, 1.5, std::move(types), method, rng);
        std::map<std::pair<std::int32_t, std::int32_t>, int> seen;
        for (const auto& e : g.edges) {
            CHECK(e.first < e.second);
            CHECK(e.second < g.n);
            CHECK(++seen[e] == 1);
        }
        for (auto t : g.type_of) CHECK((t == 0 || t == 1));
    }
}

TEST_CASE("sample_graph: edge count near the binomial mean") {
    const TypeSpace hom = homogeneous_space();
    const std::int64_t n = 10000;
    const double c = 0.5;
    Rng rng = make_rng(23, 0);
    auto types = sample_types(hom, n, TypeAssignMode::iid, rng);
    const TypedGraph g =
        sample_graph(hom, c, std::move(types), EdgeSampleMethod::grouped, rng);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double p = c / static_cast<double>(n);
    const double mean = pairs * p;
    const double sd = std::sqrt(mean * (1.0 - p));
    CHECK(std::abs(static_cast<double>(g.edges.size()) - mean) <= 4.0 * sd);
}

TEST_CASE("sample_graph: determinism is byte-for-byte") {
    const TypeSpace two = two_type_space();
    auto make = [&] {
        Rng rng = make_rng(77, 5);
        auto types = sample_types(two, 500, TypeAssignMode::iid, rng);
        return sample_graph(two, 0.3, std::move(types), EdgeSampleMethod::grouped, rng);
    };
    const TypedGraph a = make();
    const TypedGraph b = make();
    CHECK(a.type_of == b.type_of);
    CHECK(a.edges == b.edges);
}

TEST_CASE("grouped and naive samplers agree in distribution") {
    const TypeSpace two = two_type_space();
    const std::int64_t n = 128;
    const double c = 0.4;
    const int samples = 10000;

    // Per-class-pair edge counts and pooled degree histograms.
    std::vector<std::vector<double>> counts_g(3), counts_n(3);
    std::vector<double> degrees_g, degrees_n;
    auto class_pair_index = [](std::int32_t a, std::int32_t b) {
        return a == 0 && b == 0 ? 0 : (a == 1 && b == 1 ? 2 : 1);
    };

    for (int s = 0; s < samples; ++s) {
        for (bool naive : {false, true}) {
            Rng rng = make_rng(naive ? 1000 : 2000, s);
            auto types = sample_types(two, n, TypeAssignMode::quota, rng);
            const TypedGraph g = sample_graph(
                two, c, std::move(types),
                naive ? EdgeSampleMethod::naive : EdgeSampleMethod::grouped, rng);
            double per_pair[3] = {0, 0, 0};
            std::vector<int> degree(static_cast<std::size_t>(n), 0);
            for (const auto& [u, v] : g.edges) {
                ++per_pair[class_pair_index(g.type_of[u], g.type_of[v])];
                ++degree[static_cast<std::size_t>(u)];
                ++degree[static_cast<std::size_t>(v)];
            }
            auto& counts = naive ? counts_n : counts_g;
            for (int cp = 0; cp < 3; ++cp) counts[cp].push_back(per_pair[cp]);
            auto& degs = naive ? degrees_n : degrees_g;
            for (int dgr : degree) degs.push_back(dgr);
        }
    }

    for (int cp = 0; cp < 3; ++cp) {
        const auto a = oracles::mean_se(counts_g[cp]);
        const auto b = oracles::mean_se(counts_n[cp]);
        const double se = std::sqrt(a.se * a.se + b.se * b.se);
        CHECK(std::abs(a.mean - b.mean) <= 4.0 * se);
    }

    // Two-sample chi-square over the degree histogram, tails binned at 8+.
    const int bins = 9;
    std::vector<double> hg(bins, 0), hn(bins, 0);
    for (double dgr : degrees_g) hg[static_cast<int>(std::min(dgr, 8.0))] += 1;
    for (double dgr : degrees_n) hn[static_cast<int>(std::min(dgr, 8.0))] += 1;
    double chi2 = 0.0;
    int dof = 0;
    for (int bin = 0; bin < bins; ++bin) {
        const double tot = hg[bin] + hn[bin];
        if (tot < 10) continue;
        // Equal sample sizes: X^2 = sum (o1 - o2)^2 / (o1 + o2).
        chi2 += (hg[bin] - hn[bin]) * (hg[bin] - hn[bin]) / tot;
        ++dof;
    }
    --dof;
    CHECK(chi2 <= oracles::chi_square_quantile(dof, 3.0902)); // alpha = 1e-3
}

TEST_CASE("components: fixed structures") {
    const TypeSpace two = two_type_space();
    TypedGraph path;
    path.n = 5;
    path.type_of = {0, 1, 0, 1, 0};
    path.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    const ComponentStats st = components(path, two);
    CHECK(st.component_count == 1);
    CHECK(st.c1 == 5);
    CHECK(st.max_activity == 7.0); // 1+2+1+2+1

    TypedGraph empty;
    empty.n = 4;
    empty.type_of = {0, 1, 1, 0};
    const ComponentStats se = components(empty, two);
    CHECK(se.component_count == 4);
    CHECK(se.c1 == 1);
    CHECK(se.max_activity == 2.0);
}

TEST_CASE("components: disjoint-set equals breadth-first on random graphs") {
    const TypeSpace two = two_type_space();
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng = make_rng(31337, trial);
        const std::int64_t n = 4 + static_cast<std::int64_t>(trial % 61);
        auto types = sample_types(two, n, TypeAssignMode::iid, rng);
        const TypedGraph g = sample_graph(two, 1.2, std::move(types),
                                          EdgeSampleMethod::grouped, rng);
        const ComponentStats a = components(g, two);
        const ComponentStats b = oracles::bfs_components(g, two);
        CHECK(a.component_count == b.component_count);
        CHECK(a.sizes == b.sizes);
        CHECK(a.activities == b.activities);
        CHECK(a.c1 == b.c1);
        CHECK(a.max_activity == b.max_activity);
    }
}

TEST_CASE("components: partition invariants") {
    const TypeSpace two = two_type_space();
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng = make_rng(4242, trial);
        const std::int64_t n = 200;
        auto types = sample_types(two, n, TypeAssignMode::iid, rng);
        double total_activity = 0.0;
        for (auto t : types) total_activity += two.activities[t];
        const TypedGraph g =
            sample_graph(two, 0.8, std::move(types), EdgeSampleMethod::grouped, rng);
        const ComponentStats st = components(g, two);
        std::int64_t size_sum = 0;
        double act_sum = 0.0;
        for (auto s : st.sizes) size_sum += s;
        for (auto a : st.activities) act_sum += a;
        CHECK(size_sum == n);
        CHECK(act_sum == total_activity); // integer-valued activities: exact
        CHECK(st.c1 == st.sizes.back());
        CHECK(st.max_activity == st.activities.back());
    }
}

TEST_CASE("write_edge_list: header and lines") {
    TypedGraph g;
    g.n = 3;
    g.type_of = {0, 0, 0};
    g.edges = {{0, 2}, {1, 2}};
    std::ostringstream os;
    write_edge_list(os, g);
    CHECK(os.str() == "3 2\n0 2\n1 2\n");
}

#include "subcrit/branching.hpp"

#include <algorithm>

#include "subcrit/parallel.hpp"

namespace subcrit {

std::vector<long> sample_offspring(const TypeSpace& space, double c,
                                   Eigen::Index parent, Rng& rng) {
    std::vector<long> counts(static_cast<std::size_t>(space.size()), 0);
    for (Eigen::Index y = 0; y < space.size(); ++y) {
        const double intensity =
            c * space.activities[parent] * space.activities[y] * space.weights[y];
        if (intensity > 0.0)
            counts[static_cast<std::size_t>(y)] =
                std::poisson_distribution<long>(intensity)(rng);
    }
    return counts;
}

ProgenyOutcome sample_progeny(const TypeSpace& space, double c, double root_label,
                              long cap, Rng& rng) {
    const Eigen::Index root = space.find_label(root_label);
    if (root < 0) throw UnknownRootLabel(root_label);
    const Eigen::Index n_types = space.size();

    ProgenyOutcome out;
    out.progeny = 1;
    out.total_activity = space.activities[root];
    out.generations = 0;
    out.censored = false;

    // Particles of the current generation, bucketed by type.
    std::vector<long> current(n_types, 0), next(n_types, 0);
    current[root] = 1;

    while (true) {
        bool any_child = false;
        std::fill(next.begin(), next.end(), 0L);
        for (Eigen::Index x = 0; x < n_types && !out.censored; ++x) {
            for (long rep = 0; rep < current[x] && !out.censored; ++rep) {
                const std::vector<long> offspring = sample_offspring(space, c, x, rng);
                for (Eigen::Index y = 0; y < n_types; ++y) {
                    long k = offspring[static_cast<std::size_t>(y)];
                    if (k == 0) continue;
                    any_child = true;
                    if (out.progeny + k >= cap) {
                        k = cap - out.progeny;
                        out.censored = true;
                    }
                    next[y] += k;
                    out.progeny += k;
                    out.total_activity += static_cast<double>(k) * space.activities[y];
                    if (out.censored) break;
                }
            }
        }
        if (!any_child || out.censored) break;
        ++out.generations;
        current.swap(next);
    }
    return out;
}

double mean_progeny(const TypeSpace& space, double c, double root_label) {
    const Eigen::Index root = space.find_label(root_label);
    if (root < 0) throw UnknownRootLabel(root_label);
    const Moments m = moments(space);
    const double c_cr = 1.0 / m.m2;
    if (!(c < c_cr)) throw NotSubcritical(c, c_cr);
    return 1.0 + c * space.activities[root] * m.m1 / (1.0 - c * m.m2);
}

double mean_activity(const TypeSpace& space, double c, double root_label) {
    const Eigen::Index root = space.find_label(root_label);
    if (root < 0) throw UnknownRootLabel(root_label);
    const Moments m = moments(space);
    const double c_cr = 1.0 / m.m2;
    if (!(c < c_cr)) throw NotSubcritical(c, c_cr);
    return space.activities[root] / (1.0 - c * m.m2);
}

std::vector<TailPoint> empirical_tail(const TypeSpace& space, double c,
                                      double root_label, long reps,
                                      std::span<const long> thresholds,
                                      std::uint64_t seed) {
    std::vector<long> progeny(static_cast<std::size_t>(reps));
    parallel_for(reps, 0, [&](std::int64_t rep) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(rep));
        progeny[static_cast<std::size_t>(rep)] =
            sample_progeny(space, c, root_label, kDefaultProgenyCap, rng).progeny;
    });
    std::vector<long> exceed(thresholds.size(), 0);
    for (long p : progeny)
        for (std::size_t t = 0; t < thresholds.size(); ++t)
            if (p > thresholds[t]) ++exceed[t];

    std::vector<TailPoint> out;
    out.reserve(thresholds.size());
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
        const double p = static_cast<double>(exceed[t]) / static_cast<double>(reps);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
        out.push_back({thresholds[t], p, se});
    }
    return out;
}

} // namespace subcrit

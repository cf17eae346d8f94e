#ifndef SUBCRIT_BRANCHING_HPP
#define SUBCRIT_BRANCHING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "subcrit/rng.hpp"
#include "subcrit/type_space.hpp"

namespace subcrit {

/// One branching-tree realization: total progeny (root included), total
/// activity, and the generation depth reached.
struct ProgenyOutcome {
    long progeny;
    double total_activity;
    long generations;
    bool censored; // progeny cap reached; never silently truncated
};

inline constexpr long kDefaultProgenyCap = 1000000;

/// One generation: per-type offspring counts of a single particle of atom
/// index `parent`, drawn as independent Poisson(c psi(x) psi(y) mu(y)).
std::vector<long> sample_offspring(const TypeSpace& space, double c,
                                   Eigen::Index parent, Rng& rng);

/// Multi-type Poisson branching tree started from a particle of type
/// root_label: a type-x particle bears Poisson(c psi(x) psi(y) mu(y))
/// children of each type y, independently. Breadth-first expansion.
ProgenyOutcome sample_progeny(const TypeSpace& space, double c, double root_label,
                              long cap, Rng& rng);

/// Closed-form mean total progeny 1 + c psi(x) m1 / (1 - c m2), the unique
/// solution of the linear first-moment recursion. Requires c < c_critical.
double mean_progeny(const TypeSpace& space, double c, double root_label);

/// Closed-form mean total activity psi(x) / (1 - c m2). Requires c < c_critical.
double mean_activity(const TypeSpace& space, double c, double root_label);

struct TailPoint {
    long threshold;
    double p_hat;   // Monte Carlo estimate of P(progeny > threshold)
    double std_err; // binomial standard error
};

/// Monte Carlo tail of the total progeny over `reps` independent replicas
/// with streams derived from (seed, replica index).
std::vector<TailPoint> empirical_tail(const TypeSpace& space, double c,
                                      double root_label, long reps,
                                      std::span<const long> thresholds,
                                      std::uint64_t seed);

} // namespace subcrit

#endif

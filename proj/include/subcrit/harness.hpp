#ifndef SUBCRIT_HARNESS_HPP
#define SUBCRIT_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subcrit/graph.hpp"
#include "subcrit/percolation.hpp"
#include "subcrit/type_space.hpp"

namespace subcrit {

enum class ExperimentTarget { component_size, component_activity, percolation_hybrid };

/// Fully determines one convergence experiment; identical configs (including
/// master_seed) give byte-identical output regardless of worker count.
struct ExperimentConfig {
    TypeSpace space; // graph targets only
    double c = 0.0;
    std::vector<std::int64_t> n_grid; // graph sizes; box radii N for percolation
    std::vector<std::int64_t> reps_per_n; // one entry per n, or a single broadcast value
    std::uint64_t master_seed = 0;
    ExperimentTarget target = ExperimentTarget::component_size;
    TypeAssignMode type_mode = TypeAssignMode::iid;
    EdgeSampleMethod method = EdgeSampleMethod::grouped;
    // percolation target only
    int d = 1;
    double p = 0.0;
    // worker cap; 0 = hardware concurrency
    int parallel = 0;
};

struct SummaryRow {
    std::int64_t n = 0; // graph size, or |B(N)| for percolation
    std::int64_t reps = 0;
    double mean_statistic = 0.0; // mean of C1/log n (or activity / hybrid analogue)
    double std_error = 0.0;
    double predicted = 0.0; // 1/log r, 1/log alpha or 1/log gamma; +inf sentinel at 1
    double ratio = 0.0;     // mean/predicted; NaN when predicted is the sentinel
};

/// Statistic C1 / log n against 1/log r(c).
std::vector<SummaryRow> run_component_experiment(const ExperimentConfig& cfg);

/// Statistic max component activity / log n against 1/log alpha(c).
std::vector<SummaryRow> run_activity_experiment(const ExperimentConfig& cfg);

/// Statistic C1 / log |B(N)| for the short+long-range lattice graph against
/// 1/log gamma(p,c); n_grid entries are box radii N. d = 1 uses the exact
/// macro law; d >= 2 estimates it from a pilot lattice at the largest N.
std::vector<SummaryRow> run_percolation_experiment(const ExperimentConfig& cfg);

struct ExperimentReport {
    bool monotone = false; // ratios nondecreasing along the grid
    double final_ratio = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    bool band_pass = false;
    bool pass = false; // monotone && band_pass
};

ExperimentReport summarize(const std::vector<SummaryRow>& rows, double band_lo,
                           double band_hi);

std::string target_name(ExperimentTarget target);

/// CSV schema: target,n,reps,mean,stderr,predicted,ratio,seed.
void write_summary_csv(std::ostream& os, ExperimentTarget target,
                       const std::vector<SummaryRow>& rows, std::uint64_t seed);

void write_report_json(std::ostream& os, ExperimentTarget target,
                       const std::vector<SummaryRow>& rows,
                       const ExperimentReport& report, std::uint64_t seed);

} // namespace subcrit

#endif

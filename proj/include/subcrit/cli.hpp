#ifndef SUBCRIT_CLI_HPP
#define SUBCRIT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subcrit/type_space.hpp"

namespace subcrit {

/// Fully-resolved command line; every run is a pure function of this record.
struct CliConfig {
    std::string cmd; // theory | simulate | branching | percolation | scan

    // model block: explicit atom table or built-in family descriptor
    std::string atoms;   // "(label,weight,activity);(...)"
    std::string family;  // homogeneous | two-type | geometric
    double param = 0.0;  // geometric success probability
    std::string psi = "identity"; // identity | constant
    double psi_value = 1.0;
    double tail_tol = 1e-12;

    double c = 0.0;
    std::vector<std::int64_t> n_grid;
    std::vector<std::int64_t> reps{1};
    std::uint64_t seed = 1;

    // percolation
    int d = 1;
    std::vector<std::int64_t> n_radius; // box radii N
    double p = 0.0;

    // scan grid
    std::vector<double> c_list;

    // simulate
    std::string target = "size"; // size | activity
    std::string mode = "iid";    // iid | quota
    std::string method = "grouped"; // grouped | naive
    std::string dump_edges;      // optional edge-list dump path

    // branching
    double root = 1.0;
    std::int64_t cap = 1000000;
    bool aggregate = false;
    std::vector<std::int64_t> thresholds;

    std::vector<double> band; // optional {lo, hi}; failing it exits 1

    std::string format = "table"; // csv | json | table
    std::string output;           // file path; empty = stdout
    int parallel = 0;

    bool operator==(const CliConfig&) const = default;
};

/// Raised when --help is requested; carries the full help text.
struct HelpRequested {
    std::string text;
};

/// Parses argv-style tokens (without the program name). Flags override
/// config-file values; unknown keys are rejected with the offending name.
/// Throws CLI::ParseError (usage) or subcrit::Error (validation).
CliConfig parse_config(const std::vector<std::string>& args);

/// Builds the type space named by the model block.
TypeSpace space_from_config(const CliConfig& cfg);

/// Echo of the resolved config, one "key = value" line per field relevant to
/// the subcommand; re-parsing the echo reproduces the config.
std::string echo_config(const CliConfig& cfg);

/// Routes to the theory/harness/branching/percolation modules and writes the
/// declared format. Returns 0 on success, 1 on band failure.
int dispatch(const CliConfig& cfg, std::ostream& out);

/// As above, writing to cfg.output (or stdout). Maps usage and module errors
/// to exit code 2.
int run_cli(const std::vector<std::string>& args);

} // namespace subcrit

#endif

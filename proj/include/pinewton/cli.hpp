#ifndef PINEWTON_CLI_HPP
#define PINEWTON_CLI_HPP

#include <string>
#include <vector>

#include "pinewton/solver.hpp"

// Command-line front end.  Modes:
//   solve     minimize and write report.json (+ u_field.csv on request)
//   baseline  charge frozen to zero, plus the free-vs-baseline energy gap
//   verify    run the identity suite, write verify.json
//   sweep     solve per mass in --sweep-masses, write sweep.csv
// Exit codes: 0 success, 1 invalid configuration, 2 solve failed to
// converge, 3 verify suite failure.

namespace pinewton::cli {

enum class RunMode { SOLVE, BASELINE, VERIFY, SWEEP };

struct RunConfig {
    RunMode mode = RunMode::SOLVE;
    SolverConfig solver;
    double half_width_L = 12.0;
    int points_per_axis_N = 256;
    bool mass_given = false;
    std::vector<double> sweep_masses;
    std::string output_dir = ".";
    bool emit_fields = false;
};

// Parses a key = value config file (# comments allowed) into a RunConfig
// with the documented defaults; the mode still comes from argv.  Throws
// std::invalid_argument naming the offending key.
RunConfig load_config(const std::string& path);

int run(int argc, const char* const* argv);

}  // namespace pinewton::cli

#endif

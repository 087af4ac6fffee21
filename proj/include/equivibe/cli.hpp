#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "equivibe/model.hpp"

namespace equivibe {

// Everything a command needs. Defaults reproduce the n = 6 example ring.
struct RunConfig {
    PotentialParams params;
    int l_max = 6;
    std::string omega_mode = "reduced";
    std::string eigenvalues;            // optional "tag=mu,..." override of the computed spectrum
    std::vector<std::string> crossings; // invariants: empty = every l = 1 crossing
    std::vector<std::string> modes;     // simulate: empty = every l = 1 crossing
    double eps_rel = 0.05;              // shooting amplitude as a fraction of r0
    double dt = 1e-3;
    int periods = 1;                    // simulate: periods integrated from the found orbit
    int sample_every = 10;              // simulate: CSV/SVG thinning
    std::string wave = "standing";      // standing | rotating
    std::string out_dir;                // artifacts; empty = no files
    std::string format = "json";        // critical-set: json | table
    bool with_orbits = false;           // atlas: shoot every l = 1 crossing

    void validate() const;
};

// Exit codes.
enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kConsistencyError = 4 };

// argv excludes the program name. JSON goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Worker count for atlas fan-out: EQUIVIBE_THREADS if set, else hardware.
int thread_budget();

} // namespace equivibe

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ncpot/error.hpp"
#include "ncpot/linalg.hpp"
#include "ncpot/simulator.hpp"
#include "ncpot/wigner.hpp"

namespace ncpot::cli {

enum ExitCode : int { kOk = 0, kInvalid = 2, kIo = 3, kIncomplete = 4, kNonConvergence = 5 };

int exit_code_for(ErrorCode code);

struct RunConfig {
    std::uint64_t seed = 1;
    linalg::Tolerances tolerances;
    simulator::DetectorModel detector;
    wigner::GridSpec grid;
    std::string output_dir = ".";
    std::size_t fit_restarts = 20;
    std::size_t fit_evaluations = 2000;
    std::size_t sweep_steps = 101;

    /// Sets one `key = value` entry; throws ParseError for unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    /// Every key with its current value, in a fixed order.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Defaults overridden by the file named in NCPOT_CONFIG, if set.
RunConfig load_config();

/// Runs one invocation; `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncpot::cli

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncpot/analysis.hpp"
#include "ncpot/linalg.hpp"
#include "ncpot/reconstruction.hpp"
#include "ncpot/simulator.hpp"
#include "ncpot/wigner.hpp"

// File formats. Matrix entries and other doubles are written with the
// shortest representation that reads back to the same value, so every format
// here round-trips byte for byte.
namespace ncpot::io {

std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: truncate, write, check the stream. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

/// {"dim": d, "re": [[...]], "im": [[...]]}
std::string density_matrix_to_json(const DensityMatrix& rho);
/// Accepts extra top-level keys; validates the state. Throws ParseError plus the DensityMatrix errors.
DensityMatrix density_matrix_from_json(std::string_view text, const linalg::Tolerances& tol = {});

/// JSON array: a header object followed by one object per record.
std::string schedule_to_json(const simulator::Schedule& s);
simulator::Schedule schedule_from_json(std::string_view text);

/// Reconstructed qutrit state with a "metadata" object appended.
struct ReconstructionFile {
    DensityMatrix state;
    reconstruction::BlockEstimate blocks;
    reconstruction::Metadata meta;
    /// Fidelity of the reconstruction to the ideal-splitter output of the source in the counts header.
    double fidelity_to_ideal = 0.0;
};
std::string reconstruction_to_json(const ReconstructionFile& r);
ReconstructionFile reconstruction_from_json(std::string_view text);

/// Fit results and reconstruction metadata are reported to 9 significant digits.
std::string fit_to_json(const analysis::FitResult& fit);
analysis::FitResult fit_from_json(std::string_view text);

/// `key = value` lines; `#` starts a comment. Throws ParseError on malformed lines.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

/// "%.9g" rendering used for every human-facing number.
std::string format_number(double v);
/// The double nearest to format_number(v).
double round_to_9(double v);

}  // namespace ncpot::io

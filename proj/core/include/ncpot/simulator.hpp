#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncpot/linalg.hpp"
#include "ncpot/states.hpp"

namespace ncpot::simulator {

/// Waveplate and shutter configuration of one measurement. Angles in degrees.
///
/// The analyzer in each output port is QWP, then HWP, then a PBS whose
/// reflected (V) output feeds detector A (port 3) or C (port 4); the
/// transmitted H outputs of both ports meet on a fibre beam splitter in front
/// of detector B, the port-4 arm passing a shutter and a piezo phase shifter.
struct OpticalSetting {
    double hwp1 = 0.0;
    double hwp2 = 45.0;
    double hwp3 = 0.0;
    double hwp4 = 0.0;
    double qwp3 = 0.0;
    double qwp4 = 0.0;
    double theta_H = 22.5;
    double theta_V = 22.5;
    bool shutter_open = false;
    double piezo_phase = 0.0;  // radians

    void validate() const;
    bool operator==(const OpticalSetting&) const = default;
};

enum class DetectorPair { AB, AC, BC };

/// Which part of the schedule a record belongs to. MC and MD are the
/// visibility sweeps for the <00|rho|01> and <00|rho|10> coherences.
enum class Block { MA, MB, MC, MD, CalAB, CalAC };

std::string_view to_string(DetectorPair p);
std::string_view to_string(Block b);
DetectorPair detector_pair_from(std::string_view s);
Block block_from(std::string_view s);

struct CountsRecord {
    OpticalSetting setting;
    DetectorPair detector_pair = DetectorPair::AB;
    double duration_s = 0.0;
    std::uint64_t counts = 0;
    Block block = Block::MA;
    /// Tomography label such as "VH" (port-3 projection, port-4 projection); empty otherwise.
    std::string projection;

    void validate() const;
    bool operator==(const CountsRecord&) const = default;
};

struct DetectorModel {
    double efficiency_A = 0.30;
    double efficiency_B = 0.25;
    double efficiency_C = 0.35;
    double pair_rate_hz = 1e3;
    double dark_coincidence_hz = 1.0;

    void validate() const;
    double pair_efficiency(DetectorPair p) const;
    bool operator==(const DetectorModel&) const = default;
};

inline constexpr int kScheduleVersion = 1;
inline constexpr double kLongRecordSeconds = 50.0;
inline constexpr double kSweepSampleSeconds = 5.0;
inline constexpr std::size_t kSweepSamples = 50;

struct ScheduleHeader {
    int schedule_version = kScheduleVersion;
    std::uint64_t seed = 0;
    DetectorModel detector;
    QubitState source;
    BeamSplitter splitter = BeamSplitter::balanced();
};

struct Schedule {
    ScheduleHeader header;
    std::vector<CountsRecord> records;
};

/// Printed half-wave-plate matrix [[cos 2θ, sin 2θ], [sin 2θ, -cos 2θ]].
ComplexMatrix hwp_matrix(double theta_deg);
/// Quarter-wave plate with fast axis at θ (global phase dropped).
ComplexMatrix qwp_matrix(double theta_deg);

/// PBS mode matrix on (H1, V1, H2, V2): H is transmitted, V crosses to the
/// other output with a sign flip. A photon entering in mode k leaves with the
/// amplitudes of column k.
ComplexMatrix pbs_matrix();
std::array<Complex, 4> pbs_transform(const std::array<Complex, 4>& modes);

/// Output-port modes of the beam splitter stage.
enum class Mode { H3 = 0, V3 = 1, H4 = 2, V4 = 3 };

/// Two-photon amplitudes over photon 1 in {H3, V3, H4, V4} and photon 2 in
/// {V3, V4}. Photon-1 and photon-2 labels in the same mode stand for the
/// normalised two-photon Fock state of that mode.
struct TwoPhotonAmplitudes {
    std::array<Complex, 8> amp{};

    static std::size_t index(Mode photon1, Mode photon2);
    Complex operator()(Mode photon1, Mode photon2) const { return amp[index(photon1, photon2)]; }
    double norm() const;
};

struct WeightedBranch {
    double weight = 0.0;
    TwoPhotonAmplitudes state;
};

/// Output for the pure input sqrt(1-p)|0> + sqrt(p) e^{-i arg x}|1>:
/// (β/√2)(r|H>4 - t|H>3)(|V>3 - |V>4) + (α/√2)(|V>3|V>3 - |V>4|V>4).
TwoPhotonAmplitudes propagate(const QubitState& s, const BeamSplitter& bs);

/// Mixed input and output decoherence as a mixture of pure branches: a phase
/// flip of the input photon (probability (1 - |x|/sqrt(p(1-p)))/2) and
/// independent phase flips of the H3 and H4 arms (probability (1 - Q)/2 each).
std::vector<WeightedBranch> propagate_branches(const QubitState& s, const BeamSplitter& bs);

/// Qutrit readout of the branch mixture: |0> = V-V bunching (sign flipped),
/// |1> = H photon in port 4, |2> = H photon in port 3.
DensityMatrix output_state(const std::vector<WeightedBranch>& branches);

/// Coincidence probability of `pair` per emitted pair for a branch mixture,
/// before detector efficiencies.
double coincidence_probability(const std::vector<WeightedBranch>& branches, const OpticalSetting& setting,
                               DetectorPair pair);

/// Analyzer angles (hwp, qwp) that route polarisation `label` (H, V, D, A, R, L) to the PBS V output.
std::pair<double, double> analyzer_angles(char label);

/// Polarisation the analyzer sends to the detector: (HWP QWP)^dagger |V>.
std::array<Complex, 2> analyzer_projection(double hwp_deg, double qwp_deg);

/// The noise-free schedule (counts left at zero) with the settings and
/// durations of every record, in emission order.
std::vector<CountsRecord> schedule_template(const QubitState& s, const BeamSplitter& bs);

/// Expected counts of a record under the model (mean of the Poisson draw).
double expected_counts(const std::vector<WeightedBranch>& branches, const CountsRecord& r, const DetectorModel& det);

/// Full Monte-Carlo schedule. Deterministic in `seed`.
Schedule simulate_schedule(const QubitState& s, const BeamSplitter& bs, const DetectorModel& det, std::uint64_t seed);

}  // namespace ncpot::simulator

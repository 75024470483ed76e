#pragma once

#include <cstddef>
#include <span>

#include "ncpot/linalg.hpp"
#include "ncpot/simulator.hpp"

namespace ncpot::reconstruction {

using simulator::CountsRecord;

/// Block form of the qutrit output state:
///   [[m_a, M_C, M_D], [M_C*, M_B], [M_D*, M_B]]
/// with coherence magnitudes m_c = |<00|rho|01>| and m_d = |<00|rho|10>|.
struct BlockEstimate {
    double m_a = 0.0;
    ComplexMatrix m_b{2};
    double m_c = 0.0;
    double m_d = 0.0;
};

struct Calibration {
    /// AB:AC detection-efficiency ratio, FBS loss included.
    double ratio = 1.0;
    /// Set when the calibration records were absent or empty and the ratio fell back to 1.
    bool defaulted = false;
};

struct Tomography {
    /// Maximum-likelihood two-photon polarisation state, basis (port 3, port 4) = HH, HV, VH, VV.
    ComplexMatrix rho_b{4};
    /// Trace-one central block in the qutrit basis (|01>, |10>).
    ComplexMatrix block{2};
    /// ×2-corrected rates of the V3H4 and H3V4 projections (counts per second, AC units).
    double rate_01 = 0.0;
    double rate_10 = 0.0;
    std::size_t iterations = 0;
    double log_likelihood = 0.0;
};

struct RepairReport {
    bool clamped_c = false;
    bool clamped_d = false;
    /// Factor applied to both coherences when the determinant was negative (1 otherwise).
    double scale = 1.0;
};

struct Metadata {
    Calibration calibration;
    std::size_t ml_iterations = 0;
    double log_likelihood = 0.0;
    double visibility_c = 0.0;
    double visibility_d = 0.0;
    /// Sum of the corrected M_A and M_B diagonal rates used for normalisation.
    double normalization = 0.0;
    RepairReport repair;
};

struct Reconstruction {
    DensityMatrix qutrit;
    DensityMatrix two_qubit;
    /// Normalised block estimate before the repair.
    BlockEstimate blocks;
    Metadata meta;
};

inline constexpr double kMlStep = 0.5;
inline constexpr double kMlTolerance = 1e-10;
inline constexpr std::size_t kMlMaxIterations = 10'000;

Calibration efficiency_ratio(std::span<const CountsRecord> records);

/// ×4-corrected M_A rate in AC-pair units. Throws MissingRecord.
double estimate_m_a(std::span<const CountsRecord> records, const Calibration& cal);
double estimate_m_a(std::span<const CountsRecord> records);

/// Diluted R·rho·R iteration over the tomography records (projectors from
/// the recorded waveplate angles). Throws MissingRecord, InsufficientCounts,
/// NonConvergence.
Tomography ml_tomography_m_b(std::span<const CountsRecord> records);

/// (I_max - I_min) / (I_max + I_min) over the sweep rates. Throws EmptySweep for < 2 records.
double visibility(std::span<const CountsRecord> sweep);

/// |b| = v (a + c) / 2.
double visibility_to_coherence(std::span<const CountsRecord> sweep, double a, double c);

/// Clamps and rescales the coherences until every principal minor is
/// nonnegative; m_a and m_b are copied through untouched. Throws IrreparableBlock.
DensityMatrix physicality_repair(const BlockEstimate& b, RepairReport* report = nullptr);

/// Full pipeline. Independent of record order.
Reconstruction reconstruct(std::span<const CountsRecord> records);

}  // namespace ncpot::reconstruction

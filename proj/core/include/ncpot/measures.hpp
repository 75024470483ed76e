#pragma once

#include <array>
#include <optional>

#include "ncpot/linalg.hpp"
#include "ncpot/states.hpp"

namespace ncpot::measures {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// rho = 1/4 (I⊗I + u·σ⊗I + I⊗v·σ + Σ_{m,n} T_mn σ_n⊗σ_m).
///
/// Note the index placement: the row index m of T belongs to the second
/// party's Pauli operator, i.e. T_mn = Tr[rho (σ_n ⊗ σ_m)].
struct BlochDecomposition {
    Vec3 u{};
    Vec3 v{};
    Mat3 t{};

    /// R = T^T T.
    Mat3 correlation_gram() const;
    /// Rebuilds the 4x4 operator from (u, v, T).
    ComplexMatrix reconstruct() const;
};

struct MeasureTriple {
    double c = 0.0;  // concurrence
    double s = 0.0;  // three-setting steering
    double b = 0.0;  // Bell nonlocality
};

BlochDecomposition bloch_decompose(const DensityMatrix& rho);

/// Wootters concurrence. The λ_i are the square roots of the spectrum of
/// rho (σ2⊗σ2) rho* (σ2⊗σ2), taken in descending order.
double concurrence(const DensityMatrix& rho);

/// max(0, (sqrt(Tr R) - 1) / (sqrt(3) - 1)), clamped to [0, 1].
double steering(const DensityMatrix& rho);

/// max(0, (sqrt(Tr R - min eig R) - 1) / (sqrt(2) - 1)), clamped to [0, 1].
double bell(const DensityMatrix& rho);

/// Threshold above which a measure counts as nonzero when checking the
/// B > 0 ⇒ S > 0 ⇒ C > 0 set inclusion.
inline constexpr double kHierarchyTolerance = 1e-9;

/// All three measures; throws HierarchyViolation if the set inclusion fails.
MeasureTriple measure_triple(const DensityMatrix& rho);

/// Potentials of a single qubit: the measures of its beam-splitter output.
/// Uses the balanced lossless splitter when `bs` is empty.
MeasureTriple potentials(const QubitState& s, const std::optional<BeamSplitter>& bs = std::nullopt);

}  // namespace ncpot::measures

#pragma once

#include <span>

#include "ncpot/linalg.hpp"

namespace ncpot {

/// Vacuum / one-photon superposition qubit: single-photon probability `p`
/// and coherence `x`. Valid when |x|^2 <= p (1 - p).
struct QubitState {
    double p = 0.0;
    Complex x = 0.0;

    /// Validating factory; throws NonPhysical.
    static QubitState make(double p, Complex x);
    void validate() const;
    /// The phase-gauged representative (p, |x|).
    QubitState canonical() const { return {p, std::abs(x)}; }
    /// Largest admissible |x| for this p.
    double max_coherence() const;
};

/// Beam splitter with real reflection `r` and transmission `t` amplitudes
/// (r^2 + t^2 = 1) and output decoherence `q` (0 = fully coherent).
struct BeamSplitter {
    double r = 0.0;
    double t = 0.0;
    double q = 0.0;

    static BeamSplitter balanced();
    static BeamSplitter make(double r, double t, double q);
    /// t is derived as sqrt(1 - r^2).
    static BeamSplitter from_reflection(double r, double q);
    void validate() const;
    /// Q = sqrt(1 - q), the coherence factor applied to each output arm.
    double coherence_factor() const;
};

namespace states {

/// [[1-p, x], [x*, p]] in the {|vac>, |1>} basis.
DensityMatrix vops_state(const QubitState& s);

/// Output of mixing `s` with the vacuum on a balanced lossless beam splitter.
/// Basis |00>, |01>, |10>, |11>; the |11> row and column are exactly zero.
DensityMatrix mix_on_ideal_bs(const QubitState& s);

/// Output of mixing `s` with the vacuum on an imperfect beam splitter.
///
/// Upper triangle: (0,1) = -Q r x, (0,2) = Q t x, (1,2) = -p Q^2 r t with
/// diagonal (1-p, p r^2, p t^2, 0); the lower triangle is its conjugate.
/// Equals mix_on_ideal_bs() at r = t = 1/sqrt(2), q = 0.
DensityMatrix mix_on_imperfect_bs(const QubitState& s, const BeamSplitter& bs);

/// w |singlet><singlet| + (1 - w) I/4. Throws OutOfRange unless 0 <= w <= 1.
DensityMatrix werner_state(double w);

/// beta a + (1 - beta) b. Throws DimMismatch / OutOfRange.
DensityMatrix interpolate(const DensityMatrix& a, const DensityMatrix& b, double beta);

DensityMatrix singlet();
DensityMatrix maximally_mixed(std::size_t dim);
/// |k><k| in dimension `dim`.
DensityMatrix basis_state(std::size_t dim, std::size_t k);
/// |psi><psi| for a (not necessarily normalised) amplitude vector.
DensityMatrix pure_state(std::span<const Complex> amplitudes);

/// Pads a 3x3 qutrit matrix (|00>, |01>, |10>) with a zero |11> row and column.
DensityMatrix embed_two_qubit(const DensityMatrix& qutrit);

}  // namespace states
}  // namespace ncpot

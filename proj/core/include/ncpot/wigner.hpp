#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ncpot/linalg.hpp"

namespace ncpot::wigner {

inline constexpr std::size_t kMaxGridPoints = 1'000'000;

/// Rectangular grid over Re(alpha) x Im(alpha), endpoints included.
struct GridSpec {
    double re_min = -3.0;
    double re_max = 3.0;
    std::size_t re_points = 121;
    double im_min = -3.0;
    double im_max = 3.0;
    std::size_t im_points = 121;

    void validate() const;
};

struct PhaseSpaceGrid {
    std::vector<double> alpha_re;
    std::vector<double> alpha_im;
    /// values[i_re * alpha_im.size() + i_im] = W(alpha_re[i_re] + i alpha_im[i_im]).
    std::vector<double> values;
    /// Largest |Im W| discarded while evaluating (zero up to rounding for Hermitian input).
    double max_imag_residual = 0.0;

    double at(std::size_t i_re, std::size_t i_im) const { return values[i_re * alpha_im.size() + i_im]; }
    double min() const;
    double max() const;
};

/// Relabels |00>, |01>, |10> as |0>, |1>, |2>. Throws ElevenPopulated if the
/// |11> population exceeds 1e-6; the 3x3 block is renormalised to unit trace.
DensityMatrix qutrit_encode(const DensityMatrix& two_qubit);

/// <m| D(beta) |n> for the bosonic displacement operator (Fock basis, exact).
Complex displacement_element(std::size_t m, std::size_t n, Complex beta);

/// W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^dagger] with P the photon-number
/// parity; `rho` is read in the Fock basis |0>, |1>, ..., |d-1> (d <= 3).
Complex wigner_value(const DensityMatrix& rho, Complex alpha);

PhaseSpaceGrid wigner_function(const DensityMatrix& rho, const GridSpec& grid = {});

/// Trapezoid-rule integral of W over the grid (1 for a normalised state on a wide enough grid).
double integrate(const PhaseSpaceGrid& g);

/// Trapezoid-rule integral of max(0, -W).
double wigner_negativity(const PhaseSpaceGrid& g);

/// CSV with header `alpha_re,alpha_im,w`, one row per grid point, 9 significant digits.
void write_csv(std::ostream& out, const PhaseSpaceGrid& g);

}  // namespace ncpot::wigner

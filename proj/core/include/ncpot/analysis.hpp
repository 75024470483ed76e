#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "ncpot/linalg.hpp"
#include "ncpot/measures.hpp"
#include "ncpot/states.hpp"

namespace ncpot::analysis {

/// rho_qr(p, x, r, q): the imperfect-splitter output with t = sqrt(1 - r^2).
DensityMatrix rho_qr(double p, double x, double r, double q);

struct FitOptions {
    std::uint64_t seed = 1;
    std::size_t restarts = 20;
    std::size_t max_evaluations = 2000;  // per restart
};

struct FitResult {
    double p = 0.0;
    double x = 0.0;
    double r = 0.0;
    double q = 0.0;
    double bures = 0.0;
    double fidelity_in = 0.0;
    double fidelity_out = 0.0;
    std::uint64_t seed = 0;
    std::size_t evaluations = 0;  // summed over restarts

    QubitState input() const { return {p, x}; }
    BeamSplitter splitter() const { return BeamSplitter::from_reflection(r, q); }
    DensityMatrix state() const { return rho_qr(p, x, r, q); }
};

/// Multi-start Nelder-Mead minimisation of the Bures distance to `target`
/// over (p, x >= 0, r, q). fidelity_in/out are left at zero; see fidelities().
FitResult fit_rho_qr(const DensityMatrix& target, const FitOptions& opts = {});

/// (F(sigma_fit, sigma_intended), F(target, ideal-splitter output of the intended input)).
/// The intended input is taken in its phase gauge (p, |x|), matching the fit.
std::pair<double, double> fidelities(const FitResult& fit, const QubitState& intended, const DensityMatrix& target);

struct SweepCurve {
    std::vector<double> beta;
    std::vector<double> c;
    std::vector<double> s;
    std::vector<double> b;

    std::size_t size() const { return beta.size(); }
};

inline constexpr std::size_t kDefaultSweepSteps = 101;

/// Measures of beta a + (1 - beta) b at beta = k / (n_steps - 1).
SweepCurve sweep_interpolation(const DensityMatrix& a, const DensityMatrix& b, std::size_t n_steps = kDefaultSweepSteps);

enum class ExtremumKind { Minimum, Maximum };

struct Extremum {
    double beta = 0.0;
    ExtremumKind kind = ExtremumKind::Minimum;
};

struct CurveExtrema {
    std::vector<Extremum> c;
    std::vector<Extremum> s;
    std::vector<Extremum> b;
};

/// First differences below this magnitude count as flat.
inline constexpr double kFlatStep = 1e-12;

/// Interior extrema from sign changes of the first differences. A flat
/// stretch at the turning point is reported at its smallest beta.
std::vector<Extremum> locate_extrema(std::span<const double> beta, std::span<const double> values);
CurveExtrema locate_extrema(const SweepCurve& curve);

/// Grid steps [beta_k, beta_{k+1}] on which `rising` increases and `falling`
/// decreases, each by more than `tol`.
std::vector<std::pair<double, double>> opposite_trend_steps(std::span<const double> beta, std::span<const double> rising,
                                                            std::span<const double> falling, double tol = 1e-9);

/// CSV with header `beta,c,s,b`, 9 significant digits.
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);

}  // namespace ncpot::analysis

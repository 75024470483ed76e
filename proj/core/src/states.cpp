#include "ncpot/states.hpp"

#include <cmath>
#include <string>

#include "ncpot/error.hpp"

namespace ncpot {

namespace {

constexpr double kCoherenceSlack = 1e-12;
constexpr double kNormSlack = 1e-9;

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

QubitState QubitState::make(double p, Complex x) {
    QubitState s{p, x};
    s.validate();
    return s;
}

double QubitState::max_coherence() const { return std::sqrt(std::max(0.0, p * (1.0 - p))); }

void QubitState::validate() const {
    if (!in_unit_interval(p)) {
        fail(ErrorCode::NonPhysical, "single-photon probability p=" + std::to_string(p) + " outside [0,1]");
    }
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()) || std::norm(x) > p * (1.0 - p) + kCoherenceSlack) {
        fail(ErrorCode::NonPhysical, "coherence |x|^2 <= p(1-p) violated (|x|=" + std::to_string(std::abs(x)) +
                                         ", p=" + std::to_string(p) + ")");
    }
}

BeamSplitter BeamSplitter::balanced() {
    const double h = std::sqrt(0.5);
    return {h, h, 0.0};
}

BeamSplitter BeamSplitter::make(double r, double t, double q) {
    BeamSplitter bs{r, t, q};
    bs.validate();
    return bs;
}

BeamSplitter BeamSplitter::from_reflection(double r, double q) {
    if (!in_unit_interval(r)) fail(ErrorCode::NonPhysical, "reflection r=" + std::to_string(r) + " outside [0,1]");
    return make(r, std::sqrt(std::max(0.0, 1.0 - r * r)), q);
}

void BeamSplitter::validate() const {
    if (!in_unit_interval(r) || !in_unit_interval(t)) {
        fail(ErrorCode::NonPhysical, "beam splitter r, t must lie in [0,1]");
    }
    if (!in_unit_interval(q)) fail(ErrorCode::NonPhysical, "decoherence q=" + std::to_string(q) + " outside [0,1]");
    if (std::abs(r * r + t * t - 1.0) > kNormSlack) {
        fail(ErrorCode::NonPhysical, "r^2 + t^2 = " + std::to_string(r * r + t * t) + ", expected 1");
    }
}

double BeamSplitter::coherence_factor() const { return std::sqrt(1.0 - q); }

namespace states {

DensityMatrix vops_state(const QubitState& s) {
    s.validate();
    return DensityMatrix::from_trusted(ComplexMatrix(2, {1.0 - s.p, s.x, std::conj(s.x), s.p}));
}

DensityMatrix mix_on_ideal_bs(const QubitState& s) {
    s.validate();
    const double h = 1.0 / std::sqrt(2.0);
    const Complex x = s.x, xc = std::conj(s.x);
    const double p = s.p;
    // clang-format off
    return DensityMatrix::from_trusted(ComplexMatrix(4, {
        1.0 - p, -h * x,   h * x,    0.0,
        -h * xc, 0.5 * p,  -0.5 * p, 0.0,
        h * xc,  -0.5 * p, 0.5 * p,  0.0,
        0.0,     0.0,      0.0,      0.0,
    }));
    // clang-format on
}

DensityMatrix mix_on_imperfect_bs(const QubitState& s, const BeamSplitter& bs) {
    s.validate();
    bs.validate();
    const double Q = bs.coherence_factor();
    const double p = s.p;
    ComplexMatrix m(4);
    m(0, 0) = 1.0 - p;
    m(1, 1) = p * bs.r * bs.r;
    m(2, 2) = p * bs.t * bs.t;
    m(0, 1) = -Q * bs.r * s.x;
    m(0, 2) = Q * bs.t * s.x;
    m(1, 2) = -p * Q * Q * bs.r * bs.t;
    m(1, 0) = std::conj(m(0, 1));
    m(2, 0) = std::conj(m(0, 2));
    m(2, 1) = std::conj(m(1, 2));
    return DensityMatrix::from_trusted(std::move(m));
}

DensityMatrix singlet() {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex amps[] = {0.0, h, -h, 0.0};
    return pure_state(amps);
}

DensityMatrix maximally_mixed(std::size_t dim) {
    return DensityMatrix::from_trusted(ComplexMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

DensityMatrix basis_state(std::size_t dim, std::size_t k) {
    if (k >= dim) fail(ErrorCode::OutOfRange, "basis index " + std::to_string(k) + " >= dim");
    ComplexMatrix m(dim);
    m(k, k) = 1.0;
    return DensityMatrix::from_trusted(std::move(m));
}

DensityMatrix pure_state(std::span<const Complex> amplitudes) {
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (!(norm2 > 0.0)) fail(ErrorCode::InvalidState, "zero amplitude vector");
    ComplexMatrix m(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        for (std::size_t j = 0; j < amplitudes.size(); ++j)
            m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
    return DensityMatrix::from_trusted(std::move(m));
}

DensityMatrix werner_state(double w) {
    if (!in_unit_interval(w)) fail(ErrorCode::OutOfRange, "Werner weight w=" + std::to_string(w) + " outside [0,1]");
    ComplexMatrix m = singlet().matrix() * w;
    m += ComplexMatrix::identity(4) * ((1.0 - w) / 4.0);
    return DensityMatrix::from_trusted(std::move(m));
}

DensityMatrix interpolate(const DensityMatrix& a, const DensityMatrix& b, double beta) {
    if (a.dim() != b.dim()) fail(ErrorCode::DimMismatch, "interpolating states of different dimension");
    if (!in_unit_interval(beta)) fail(ErrorCode::OutOfRange, "beta=" + std::to_string(beta) + " outside [0,1]");
    ComplexMatrix m(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = beta * a(i, j) + (1.0 - beta) * b(i, j);
    return DensityMatrix::from_trusted(std::move(m));
}

DensityMatrix embed_two_qubit(const DensityMatrix& qutrit) {
    if (qutrit.dim() != 3) fail(ErrorCode::DimMismatch, "expected a 3x3 qutrit density matrix");
    ComplexMatrix m(4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = qutrit(i, j);
    return DensityMatrix::from_trusted(std::move(m));
}

}  // namespace states
}  // namespace ncpot

#include "ncpot/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "ncpot/error.hpp"
#include "parallel.hpp"

namespace ncpot::wigner {

namespace {

constexpr double kEncodeTolerance = 1e-6;
constexpr std::size_t kMaxFockDim = 3;

// Generalised Laguerre L_n^{(k)}(x) by the three-term recurrence.
double laguerre(std::size_t n, double k, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + k - x;
    for (std::size_t j = 1; j < n; ++j) {
        const double jd = static_cast<double>(j);
        const double next = ((2.0 * jd + 1.0 + k - x) * cur - (jd + k) * prev) / (jd + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double factorial_ratio(std::size_t small, std::size_t large) {
    // small! / large!
    double r = 1.0;
    for (std::size_t j = small + 1; j <= large; ++j) r /= static_cast<double>(j);
    return r;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
    std::vector<double> w(nodes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double h = 0.5 * (nodes[i + 1] - nodes[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

template <typename F>
double trapezoid(const PhaseSpaceGrid& g, F&& integrand) {
    const auto wr = trapezoid_weights(g.alpha_re);
    const auto wi = trapezoid_weights(g.alpha_im);
    double sum = 0.0;
    for (std::size_t i = 0; i < wr.size(); ++i)
        for (std::size_t j = 0; j < wi.size(); ++j) sum += wr[i] * wi[j] * integrand(g.at(i, j));
    return sum;
}

}  // namespace

void GridSpec::validate() const {
    for (double v : {re_min, re_max, im_min, im_max}) {
        if (!std::isfinite(v)) fail(ErrorCode::OutOfRange, "grid bounds must be finite");
    }
    if (re_points < 2 || im_points < 2) fail(ErrorCode::OutOfRange, "grid needs at least 2 points per axis");
    if (!(re_max > re_min) || !(im_max > im_min)) fail(ErrorCode::OutOfRange, "grid bounds must satisfy min < max");
    if (re_points > kMaxGridPoints / im_points) {
        fail(ErrorCode::GridTooLarge, std::to_string(re_points) + "x" + std::to_string(im_points) +
                                          " exceeds " + std::to_string(kMaxGridPoints) + " points");
    }
}

double PhaseSpaceGrid::min() const { return *std::min_element(values.begin(), values.end()); }
double PhaseSpaceGrid::max() const { return *std::max_element(values.begin(), values.end()); }

DensityMatrix qutrit_encode(const DensityMatrix& two_qubit) {
    if (two_qubit.dim() != 4) {
        fail(ErrorCode::InvalidState, "qutrit encoding needs a 4x4 state, got dim " + std::to_string(two_qubit.dim()));
    }
    const double eleven = two_qubit(3, 3).real();
    if (eleven > kEncodeTolerance) {
        fail(ErrorCode::ElevenPopulated, "|11> population " + std::to_string(eleven) + " exceeds 1e-6");
    }
    ComplexMatrix block(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) block(i, j) = two_qubit(i, j);
    const double tr = block.trace().real();
    if (tr <= 0.0) fail(ErrorCode::InvalidState, "qutrit block has zero trace");
    return DensityMatrix::from_trusted(block * (1.0 / tr));
}

Complex displacement_element(std::size_t m, std::size_t n, Complex beta) {
    const double x = std::norm(beta);
    const double gauss = std::exp(-0.5 * x);
    if (m >= n) {
        const std::size_t k = m - n;
        return std::sqrt(factorial_ratio(n, m)) * std::pow(beta, static_cast<int>(k)) * gauss *
               laguerre(n, static_cast<double>(k), x);
    }
    const std::size_t k = n - m;
    return std::sqrt(factorial_ratio(m, n)) * std::pow(-std::conj(beta), static_cast<int>(k)) * gauss *
           laguerre(m, static_cast<double>(k), x);
}

Complex wigner_value(const DensityMatrix& rho, Complex alpha) {
    const std::size_t d = rho.dim();
    if (d > kMaxFockDim) {
        fail(ErrorCode::InvalidState, "Wigner evaluation takes Fock dimension <= 3 (qutrit-encode two-qubit states)");
    }
    // D(α) Π D(α)† = D(2α) Π, so W = (2/π) Σ_mn ρ_mn (-1)^m <n|D(2α)|m>.
    const Complex beta = 2.0 * alpha;
    Complex sum = 0.0;
    for (std::size_t m = 0; m < d; ++m) {
        const double parity = (m % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t n = 0; n < d; ++n) sum += rho(m, n) * parity * displacement_element(n, m, beta);
    }
    return sum * (2.0 / std::numbers::pi);
}

PhaseSpaceGrid wigner_function(const DensityMatrix& rho, const GridSpec& grid) {
    grid.validate();
    if (rho.dim() > kMaxFockDim) {
        fail(ErrorCode::InvalidState, "Wigner evaluation takes Fock dimension <= 3 (qutrit-encode two-qubit states)");
    }
    PhaseSpaceGrid g;
    g.alpha_re = linspace(grid.re_min, grid.re_max, grid.re_points);
    g.alpha_im = linspace(grid.im_min, grid.im_max, grid.im_points);
    g.values.assign(grid.re_points * grid.im_points, 0.0);
    std::vector<double> residual(grid.re_points, 0.0);

    detail::parallel_for(grid.re_points, [&](std::size_t i) {
        for (std::size_t j = 0; j < grid.im_points; ++j) {
            const Complex w = wigner_value(rho, {g.alpha_re[i], g.alpha_im[j]});
            g.values[i * grid.im_points + j] = w.real();
            residual[i] = std::max(residual[i], std::abs(w.imag()));
        }
    });
    g.max_imag_residual = *std::max_element(residual.begin(), residual.end());
    return g;
}

double integrate(const PhaseSpaceGrid& g) {
    return trapezoid(g, [](double w) { return w; });
}

double wigner_negativity(const PhaseSpaceGrid& g) {
    return trapezoid(g, [](double w) { return std::max(0.0, -w); });
}

void write_csv(std::ostream& out, const PhaseSpaceGrid& g) {
    out << "alpha_re,alpha_im,w\n";
    char line[96];
    for (std::size_t i = 0; i < g.alpha_re.size(); ++i)
        for (std::size_t j = 0; j < g.alpha_im.size(); ++j) {
            std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g\n", g.alpha_re[i], g.alpha_im[j], g.at(i, j));
            out << line;
        }
}

}  // namespace ncpot::wigner

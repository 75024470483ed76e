#include "ncpot/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "ncpot/error.hpp"
#include "parallel.hpp"

namespace ncpot::analysis {

namespace {

constexpr std::size_t kParams = 4;
using Point = std::array<double, kParams>;

struct Params {
    double p, x, r, q;
};

// Box transform: every real u maps inside the valid region, x in [0, sqrt(p(1-p))].
Params decode(const Point& u) {
    const auto sq = [](double v) { return std::sin(v) * std::sin(v); };
    const double p = sq(u[0]);
    return {p, std::sqrt(p * (1.0 - p)) * sq(u[1]), sq(u[2]), sq(u[3])};
}

Point encode(double p_frac, double x_frac, double r, double q) {
    const auto inv = [](double v) { return std::asin(std::sqrt(std::clamp(v, 0.0, 1.0))); };
    return {inv(p_frac), inv(x_frac), inv(r), inv(q)};
}

struct Minimum {
    Point u{};
    double f = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
};

// Nelder-Mead with standard coefficients. When the simplex collapses before
// the budget is spent it is rebuilt around the best vertex with a smaller
// step, which guards against premature convergence on a degenerate simplex.
template <typename F>
Minimum nelder_mead(F&& f, Point start, std::size_t budget) {
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
    Minimum best;
    best.u = start;
    double step = 0.3;
    std::size_t evals = 0;
    const auto eval = [&](const Point& u) {
        ++evals;
        return f(u);
    };

    while (evals < budget) {
        std::array<Point, kParams + 1> simplex;
        std::array<double, kParams + 1> val;
        simplex[0] = best.u;
        val[0] = eval(best.u);
        for (std::size_t i = 0; i < kParams; ++i) {
            simplex[i + 1] = best.u;
            simplex[i + 1][i] += step;
            val[i + 1] = eval(simplex[i + 1]);
        }
        const double start_f = *std::min_element(val.begin(), val.end());

        while (evals < budget) {
            std::array<std::size_t, kParams + 1> order;
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
            const std::size_t lo = order.front(), hi = order.back(), second = order[kParams - 1];

            double size = 0.0;
            for (std::size_t i = 0; i <= kParams; ++i)
                for (std::size_t k = 0; k < kParams; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[lo][k]));
            if (val[hi] - val[lo] <= 1e-16 * (1.0 + std::abs(val[lo])) && size < 1e-9) break;

            Point centroid{};
            for (std::size_t i = 0; i <= kParams; ++i)
                if (i != hi)
                    for (std::size_t k = 0; k < kParams; ++k) centroid[k] += simplex[i][k] / kParams;
            const auto along = [&](double t) {
                Point p;
                for (std::size_t k = 0; k < kParams; ++k) p[k] = centroid[k] + t * (simplex[hi][k] - centroid[k]);
                return p;
            };

            const Point xr = along(-kReflect);
            const double fr = eval(xr);
            if (fr < val[lo]) {
                const Point xe = along(-kExpand);
                const double fe = eval(xe);
                if (fe < fr) {
                    simplex[hi] = xe, val[hi] = fe;
                } else {
                    simplex[hi] = xr, val[hi] = fr;
                }
            } else if (fr < val[second]) {
                simplex[hi] = xr, val[hi] = fr;
            } else {
                const bool outside = fr < val[hi];
                const Point xc = along(outside ? -kContract : kContract);
                const double fc = eval(xc);
                if (fc < (outside ? fr : val[hi])) {
                    simplex[hi] = xc, val[hi] = fc;
                } else {
                    for (std::size_t i = 0; i <= kParams; ++i) {
                        if (i == lo) continue;
                        for (std::size_t k = 0; k < kParams; ++k)
                            simplex[i][k] = simplex[lo][k] + kShrink * (simplex[i][k] - simplex[lo][k]);
                        val[i] = eval(simplex[i]);
                    }
                }
            }
        }

        const std::size_t lo = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
        const bool improved = val[lo] < best.f;
        if (improved) {
            best.f = val[lo];
            best.u = simplex[lo];
        }
        // Stop once a rebuilt simplex no longer finds anything better.
        if (!(val[lo] < start_f) && !improved) break;
        step *= 0.1;
        if (step < 1e-8) break;
    }
    best.evaluations = evals;
    return best;
}

}  // namespace

DensityMatrix rho_qr(double p, double x, double r, double q) {
    return states::mix_on_imperfect_bs(QubitState::make(p, x), BeamSplitter::from_reflection(r, q));
}

FitResult fit_rho_qr(const DensityMatrix& target, const FitOptions& opts) {
    if (target.dim() != 4) fail(ErrorCode::InvalidState, "fit target must be a 4x4 two-qubit state");
    if (opts.restarts == 0 || opts.max_evaluations == 0) fail(ErrorCode::OutOfRange, "fit needs restarts and evaluations");

    const ComplexMatrix root = linalg::psd_sqrt(target.matrix());
    // 1 - sqrt(F) is monotone in the Bures distance and keeps resolution near the optimum.
    const auto objective = [&](const Point& u) {
        const Params v = decode(u);
        const DensityMatrix m = states::mix_on_imperfect_bs(QubitState{v.p, v.x}, BeamSplitter::from_reflection(v.r, v.q));
        return 1.0 - std::sqrt(linalg::fidelity_with_sqrt(root, m.matrix()));
    };

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> starts(opts.restarts);
    for (auto& s : starts) {
        const double a = unit(rng), b = unit(rng), c = unit(rng), d = unit(rng);
        s = encode(a, b, c, d);
    }

    std::vector<Minimum> results(opts.restarts);
    detail::parallel_for(opts.restarts, [&](std::size_t i) { results[i] = nelder_mead(objective, starts[i], opts.max_evaluations); });

    // Fixed reduction order: the first restart wins ties.
    std::size_t best = 0;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        evaluations += results[i].evaluations;
        if (results[i].f < results[best].f) best = i;
    }

    const Params v = decode(results[best].u);
    FitResult out;
    out.p = v.p;
    out.x = v.x;
    out.r = v.r;
    out.q = v.q;
    out.bures = std::sqrt(2.0 * std::max(0.0, results[best].f));
    out.seed = opts.seed;
    out.evaluations = evaluations;
    return out;
}

std::pair<double, double> fidelities(const FitResult& fit, const QubitState& intended, const DensityMatrix& target) {
    const QubitState intent = intended.canonical();
    intent.validate();
    const double f_in = linalg::fidelity(states::vops_state(fit.input()), states::vops_state(intent));
    const double f_out = linalg::fidelity(target, states::mix_on_ideal_bs(intent));
    return {f_in, f_out};
}

SweepCurve sweep_interpolation(const DensityMatrix& a, const DensityMatrix& b, std::size_t n_steps) {
    if (n_steps < 2) fail(ErrorCode::OutOfRange, "interpolation needs at least 2 steps");
    if (a.dim() != 4 || b.dim() != 4) fail(ErrorCode::InvalidState, "interpolation endpoints must be 4x4 states");
    SweepCurve curve;
    curve.beta.resize(n_steps);
    curve.c.resize(n_steps);
    curve.s.resize(n_steps);
    curve.b.resize(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) curve.beta[k] = static_cast<double>(k) / static_cast<double>(n_steps - 1);
    detail::parallel_for(n_steps, [&](std::size_t k) {
        const measures::MeasureTriple m = measures::measure_triple(states::interpolate(a, b, curve.beta[k]));
        curve.c[k] = m.c;
        curve.s[k] = m.s;
        curve.b[k] = m.b;
    });
    return curve;
}

std::vector<Extremum> locate_extrema(std::span<const double> beta, std::span<const double> values) {
    if (beta.size() != values.size()) fail(ErrorCode::DimMismatch, "beta and value lists differ in length");
    if (values.size() < 5) fail(ErrorCode::CurveTooShort, "extremum search needs at least 5 points");
    std::vector<Extremum> out;
    int prev_sign = 0;
    std::size_t candidate = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double d = values[i + 1] - values[i];
        const int sign = std::abs(d) <= kFlatStep ? 0 : (d > 0.0 ? 1 : -1);
        if (sign == 0) continue;
        if (prev_sign != 0 && sign != prev_sign) {
            out.push_back({beta[candidate], prev_sign < 0 ? ExtremumKind::Minimum : ExtremumKind::Maximum});
        }
        prev_sign = sign;
        candidate = i + 1;
    }
    return out;
}

CurveExtrema locate_extrema(const SweepCurve& curve) {
    return {locate_extrema(curve.beta, curve.c), locate_extrema(curve.beta, curve.s), locate_extrema(curve.beta, curve.b)};
}

std::vector<std::pair<double, double>> opposite_trend_steps(std::span<const double> beta, std::span<const double> rising,
                                                            std::span<const double> falling, double tol) {
    if (beta.size() != rising.size() || beta.size() != falling.size()) {
        fail(ErrorCode::DimMismatch, "curves differ in length");
    }
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k + 1 < beta.size(); ++k) {
        if (rising[k + 1] - rising[k] > tol && falling[k + 1] - falling[k] < -tol) out.emplace_back(beta[k], beta[k + 1]);
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
    out << "beta,c,s,b\n";
    char line[128];
    for (std::size_t k = 0; k < curve.size(); ++k) {
        std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g,%.9g\n", curve.beta[k], curve.c[k], curve.s[k], curve.b[k]);
        out << line;
    }
}

}  // namespace ncpot::analysis

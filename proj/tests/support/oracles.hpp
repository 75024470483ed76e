#pragma once

// Independent reference implementations used only by the tests. Everything
// here goes through Eigen so that a bug in the library's own linear algebra
// cannot hide behind an identical bug in the check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ncpot/linalg.hpp"
#include "ncpot/states.hpp"

namespace oracle {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat to_eigen(const ncpot::ComplexMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.dim());
    Mat out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return out;
}

inline Mat to_eigen(const ncpot::DensityMatrix& rho) { return to_eigen(rho.matrix()); }

inline ncpot::ComplexMatrix from_eigen(const Mat& m) {
    const auto n = static_cast<std::size_t>(m.rows());
    ncpot::ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

inline std::vector<double> eigenvalues(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

inline double min_eigenvalue(const Mat& h) { return eigenvalues(h).front(); }

inline Mat sqrtm_psd(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    // Eigenvalues below the numerical rank are round-off; their square roots
    // (~1e-8 for 1e-16) would otherwise leak into the fidelity.
    const double floor = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::VectorXd ev = es.eigenvalues().unaryExpr([floor](double v) { return v < floor ? 0.0 : v; }).cwiseSqrt();
    return es.eigenvectors() * ev.cast<Cd>().asDiagonal() * es.eigenvectors().adjoint();
}

inline double fidelity(const Mat& a, const Mat& b) {
    const Mat sa = sqrtm_psd(a);
    const Mat inner = sa * b * sa;
    const auto ev = eigenvalues(0.5 * (inner + inner.adjoint()));
    const double floor = 1e-12 * std::max(1.0, *std::max_element(ev.begin(), ev.end()));
    double tr = 0.0;
    for (double v : ev) tr += v < floor ? 0.0 : std::sqrt(v);
    return tr * tr;
}

inline Mat pauli(int k) {
    Mat m(2, 2);
    switch (k) {
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Cd(0, -1), Cd(0, 1), 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: m.setIdentity(); break;
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Wootters concurrence from the non-Hermitian product rho (sy sy) rho* (sy sy).
inline double concurrence(const Mat& rho) {
    const Mat yy = kron(pauli(2), pauli(2));
    const Mat prod = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Mat> es(prod, false);
    std::vector<double> l;
    for (Eigen::Index i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    std::sort(l.rbegin(), l.rend());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// T_mn = Tr[rho (s_n x s_m)], R = T^T T.
inline Eigen::Matrix3d correlation_gram(const Mat& rho) {
    Eigen::Matrix3d t;
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) t(m, n) = (rho * kron(pauli(n + 1), pauli(m + 1))).trace().real();
    return t.transpose() * t;
}

inline double steering(const Mat& rho) {
    const double tr = correlation_gram(rho).trace();
    return std::clamp((std::sqrt(tr) - 1.0) / (std::sqrt(3.0) - 1.0), 0.0, 1.0);
}

inline double bell(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(correlation_gram(rho));
    const auto& ev = es.eigenvalues();  // ascending
    return std::clamp((std::sqrt(ev(1) + ev(2)) - 1.0) / (std::sqrt(2.0) - 1.0), 0.0, 1.0);
}

inline double ppt_min_eigenvalue(const Mat& rho) {
    Mat pt(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) pt(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
    return min_eigenvalue(pt);
}

// Seeded generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    Cd complex_normal() { return {normal(), normal()}; }

    ncpot::QubitState qubit() {
        const double p = uniform();
        const double xmax = std::sqrt(p * (1.0 - p));
        return {p, std::polar(xmax * std::sqrt(uniform()), uniform(0.0, 2.0 * M_PI))};
    }

    ncpot::BeamSplitter splitter() {
        const double r = uniform();
        return {r, std::sqrt(1.0 - r * r), uniform()};
    }

    Mat hermitian(int n) {
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = complex_normal();
        return 0.5 * (g + g.adjoint());
    }

    // Ginibre-distributed mixed state of rank `rank` (full rank by default).
    Mat density(int n, int rank = 0) {
        if (rank <= 0) rank = n;
        Mat g(n, rank);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < rank; ++j) g(i, j) = complex_normal();
        Mat rho = g * g.adjoint();
        return rho / rho.trace();
    }

    // Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal divided out.
    Mat unitary(int n) {
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = complex_normal();
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = qr.householderQ();
        const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
        return q;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline ncpot::DensityMatrix density(const Mat& m) { return ncpot::DensityMatrix::from_trusted(from_eigen(m)); }

}  // namespace oracle

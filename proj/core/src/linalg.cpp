#include "ncpot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ncpot/error.hpp"

namespace ncpot::linalg {

namespace {

void check_dim(std::size_t dim) {
    if (dim == 0 || dim > kMaxDim) {
        fail(ErrorCode::DimOverflow,
             "matrix dimension " + std::to_string(dim) + " outside 1.." + std::to_string(kMaxDim));
    }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        fail(ErrorCode::DimMismatch,
             "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()) + " differ");
    }
}

constexpr double kJacobiOffDiagonalStop = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
// Eigenvalues below this fraction of the largest one are rounding noise of the
// Jacobi solver; their square roots (~1e-8) would otherwise leak into results.
constexpr double kSpectralNoiseFloor = 1e-14;

double noise_floor(const std::vector<double>& ascending) {
    return kSpectralNoiseFloor * std::max(1e-300, std::abs(ascending.back()));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries)
    : ComplexMatrix(dim, std::vector<Complex>(entries)) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    check_dim(dim);
    if (data_.size() != dim * dim) {
        fail(ErrorCode::DimMismatch, "expected " + std::to_string(dim * dim) + " entries, got " +
                                         std::to_string(data_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
    return sum;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    require_same_dim(*this, other);
    double worst = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
    return worst;
}

double ComplexMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& z : data_) sum += std::norm(z);
    return std::sqrt(sum);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) z *= scale;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    require_same_dim(lhs, rhs);
    const std::size_t n = lhs.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.dim() * b.dim();
    if (n > kMaxDim) {
        fail(ErrorCode::DimOverflow, "Kronecker product dimension " + std::to_string(n) + " exceeds " +
                                         std::to_string(kMaxDim));
    }
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            for (std::size_t k = 0; k < b.dim(); ++k)
                for (std::size_t l = 0; l < b.dim(); ++l)
                    out(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
    return out;
}

ComplexMatrix pauli(int index) {
    const Complex i{0.0, 1.0};
    switch (index) {
        case 0: return ComplexMatrix::identity(2);
        case 1: return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
        case 2: return ComplexMatrix(2, {0.0, -i, i, 0.0});
        case 3: return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
        default: fail(ErrorCode::OutOfRange, "Pauli index must be 0..3");
    }
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& m, double hermitian_tol) {
    if (m.empty()) fail(ErrorCode::DimMismatch, "eigen-decomposition of an empty matrix");
    const double defect = m.hermiticity_defect();
    if (!(defect <= hermitian_tol)) {
        fail(ErrorCode::NonHermitian, "max |M - M^dagger| = " + std::to_string(defect));
    }
    const std::size_t n = m.dim();
    ComplexMatrix a = (m + m.adjoint()) * 0.5;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double stop = kJacobiOffDiagonalStop * std::max(1.0, a.frobenius_norm());

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (p != q) off += std::norm(a(p, q));
        if (std::sqrt(off) < stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                // Rotate the phase of a_pq away, then apply a real Jacobi rotation.
                const Complex phase = std::conj(apq / mag);
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

                for (std::size_t r = 0; r < n; ++r) {
                    const Complex arp = a(r, p), arq = a(r, q);
                    a(r, p) = arp * jpp + arq * jqp;
                    a(r, q) = arp * jpq + arq * jqq;
                    const Complex vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp * jpp + vrq * jqp;
                    v(r, q) = vrp * jpq + vrq * jqq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex apr = a(p, r), aqr = a(q, r);
                    a(p, r) = std::conj(jpp) * apr + std::conj(jqp) * aqr;
                    a(q, r) = std::conj(jpq) * apr + std::conj(jqq) * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenSystem out;
    out.values.reserve(n);
    out.vectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values.push_back(a(order[k], order[k]).real());
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double hermitian_tol) {
    return hermitian_eigensystem(m, hermitian_tol).values;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    const EigenSystem es = hermitian_eigensystem(m, 1e-8);
    const double floor = noise_floor(es.values);
    const std::size_t n = m.dim();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (es.values[k] <= floor) continue;
        const double root = std::sqrt(es.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vi = es.vectors(i, k) * root;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(es.vectors(j, k));
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& two_qubit, bool keep_first) {
    if (two_qubit.dim() != 4) fail(ErrorCode::DimMismatch, "partial trace expects a 4x4 operator");
    ComplexMatrix out(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                out(i, j) += keep_first ? two_qubit(2 * i + k, 2 * j + k) : two_qubit(2 * k + i, 2 * k + j);
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& two_qubit) {
    if (two_qubit.dim() != 4) fail(ErrorCode::DimMismatch, "partial transpose expects a 4x4 operator");
    ComplexMatrix out(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = two_qubit(2 * i + l, 2 * j + k);
    return out;
}

DensityMatrix DensityMatrix::from(ComplexMatrix m, const Tolerances& tol) {
    if (m.empty()) fail(ErrorCode::InvalidState, "density matrix is empty");
    const double defect = m.hermiticity_defect();
    if (!(defect <= tol.hermitian)) {
        fail(ErrorCode::NonHermitian, "density matrix not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const Complex tr = m.trace();
    if (!(std::abs(tr.real() - 1.0) <= tol.trace) || !(std::abs(tr.imag()) <= tol.trace_imag)) {
        fail(ErrorCode::InvalidState, "density matrix trace is (" + std::to_string(tr.real()) + ", " +
                                          std::to_string(tr.imag()) + "), expected 1");
    }
    ComplexMatrix h = (m + m.adjoint()) * 0.5;
    const double min_eig = hermitian_eigenvalues(h, tol.hermitian).front();
    if (min_eig < -tol.psd) {
        fail(ErrorCode::NonPhysical, "density matrix not positive semidefinite (min eigenvalue " +
                                         std::to_string(min_eig) + ")");
    }
    return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_trusted(ComplexMatrix m) {
    if (m.empty()) fail(ErrorCode::InvalidState, "density matrix is empty");
    return DensityMatrix((m + m.adjoint()) * 0.5);
}

double fidelity_with_sqrt(const ComplexMatrix& sqrt_a, const ComplexMatrix& b) {
    require_same_dim(sqrt_a, b);
    ComplexMatrix inner = sqrt_a * b * sqrt_a;
    inner = (inner + inner.adjoint()) * 0.5;
    const std::vector<double> eig = hermitian_eigenvalues(inner, 1e-8);
    const double floor = noise_floor(eig);
    double root_sum = 0.0;
    for (double lambda : eig)
        if (lambda > floor) root_sum += std::sqrt(lambda);
    return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_dim(a.matrix(), b.matrix());
    return fidelity_with_sqrt(psd_sqrt(a.matrix()), b.matrix());
}

double bures_from_fidelity(double f) {
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::sqrt(std::clamp(f, 0.0, 1.0)))));
}

double bures_distance(const DensityMatrix& a, const DensityMatrix& b) {
    return bures_from_fidelity(fidelity(a, b));
}

}  // namespace ncpot::linalg

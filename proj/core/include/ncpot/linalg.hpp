#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ncpot {

using Complex = std::complex<double>;

namespace linalg {

// Largest dimension any matrix in the toolkit may take (two-qubit Kronecker
// products of 4x4 operators are the biggest case we allow).
inline constexpr std::size_t kMaxDim = 16;

/// Dense row-major square complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    /// Row-major entries; the list length must be dim*dim.
    ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix transpose() const;
    Complex trace() const;

    /// Largest entry-wise modulus of (this - other).
    double max_abs_diff(const ComplexMatrix& other) const;
    /// Largest entry-wise modulus of (this - this^dagger).
    double hermiticity_defect() const;
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
    friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Pauli matrices sigma_1, sigma_2, sigma_3 (index 1..3); index 0 is the identity.
ComplexMatrix pauli(int index);

/// Tolerances used when validating density matrices.
struct Tolerances {
    double hermitian = 1e-10;
    double trace = 1e-9;
    double trace_imag = 1e-12;
    double psd = 1e-9;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

/// Cyclic complex Jacobi. Throws NonHermitian when |M - M^dagger| exceeds `hermitian_tol`.
EigenSystem hermitian_eigensystem(const ComplexMatrix& m, double hermitian_tol = 1e-10);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double hermitian_tol = 1e-10);

/// Principal square root of a Hermitian PSD matrix; negative eigenvalues are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Trace over one qubit of a 4x4 two-qubit operator. `keep_first` keeps qubit A.
ComplexMatrix partial_trace(const ComplexMatrix& two_qubit, bool keep_first);
/// Transpose on the second qubit of a 4x4 two-qubit operator.
ComplexMatrix partial_transpose(const ComplexMatrix& two_qubit);

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
public:
    /// Validates every invariant; throws NonHermitian, InvalidState or NonPhysical.
    static DensityMatrix from(ComplexMatrix m, const Tolerances& tol = {});
    /// For constructors that are physical by construction. Only symmetrises
    /// rounding noise (M + M^dagger)/2; no spectrum check is performed.
    static DensityMatrix from_trusted(ComplexMatrix m);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return m_.dim(); }
    const Complex& operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

    friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// Same as fidelity() with sqrt(a) supplied by the caller (hot loops that fix one argument).
double fidelity_with_sqrt(const ComplexMatrix& sqrt_a, const ComplexMatrix& b);
/// sqrt(2 (1 - sqrt(F))).
double bures_from_fidelity(double f);
double bures_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace linalg

using linalg::ComplexMatrix;
using linalg::DensityMatrix;

}  // namespace ncpot

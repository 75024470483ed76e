#include "ncpot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncpot/error.hpp"

namespace ncpot::measures {

namespace {

void require_two_qubit(const DensityMatrix& rho) {
    if (rho.dim() != 4) {
        fail(ErrorCode::InvalidState, "two-qubit measure needs a 4x4 state, got dim " + std::to_string(rho.dim()));
    }
}

// Tr[rho P] without forming the product.
double expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j) sum += rho(i, j) * op(j, i);
    return sum.real();
}

struct PauliProducts {
    // products[a][b] = σ_a ⊗ σ_b with σ_0 = I.
    ComplexMatrix products[4][4];

    PauliProducts() {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) products[a][b] = linalg::kron(linalg::pauli(a), linalg::pauli(b));
    }
};

const PauliProducts& pauli_products() {
    static const PauliProducts table;
    return table;
}

ComplexMatrix to_matrix(const Mat3& m) {
    ComplexMatrix out(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out(i, j) = m[i][j];
    return out;
}

double finish(double raw) {
    // max(0, ·) reports boundary states (raw in [-1e-12, 0]) as exactly zero.
    return std::clamp(raw, 0.0, 1.0);
}

}  // namespace

Mat3 BlochDecomposition::correlation_gram() const {
    Mat3 r{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) r[i][j] += t[k][i] * t[k][j];
    return r;
}

ComplexMatrix BlochDecomposition::reconstruct() const {
    const auto& pp = pauli_products();
    ComplexMatrix out = pp.products[0][0];
    for (std::size_t n = 0; n < 3; ++n) {
        out += pp.products[n + 1][0] * u[n];
        out += pp.products[0][n + 1] * v[n];
    }
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t n = 0; n < 3; ++n) out += pp.products[n + 1][m + 1] * t[m][n];
    return out * 0.25;
}

BlochDecomposition bloch_decompose(const DensityMatrix& rho) {
    require_two_qubit(rho);
    const auto& pp = pauli_products();
    BlochDecomposition d;
    for (std::size_t n = 0; n < 3; ++n) {
        d.u[n] = expectation(rho.matrix(), pp.products[n + 1][0]);
        d.v[n] = expectation(rho.matrix(), pp.products[0][n + 1]);
    }
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t n = 0; n < 3; ++n) d.t[m][n] = expectation(rho.matrix(), pp.products[n + 1][m + 1]);
    return d;
}

double concurrence(const DensityMatrix& rho) {
    require_two_qubit(rho);
    // λ_i are the singular values of A = sqrt(rho) (σ2⊗σ2) sqrt(rho)*; reading
    // them off the Hermitian dilation [[0, A], [A^dagger, 0]] avoids taking
    // square roots of rounding noise.
    const ComplexMatrix root = linalg::psd_sqrt(rho.matrix());
    const ComplexMatrix a = root * pauli_products().products[2][2] * root.conjugate();
    ComplexMatrix dilation(8);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            dilation(i, j + 4) = a(i, j);
            dilation(j + 4, i) = std::conj(a(i, j));
        }
    const std::vector<double> eig = linalg::hermitian_eigenvalues(dilation, 1e-8);
    // Top four eigenvalues of the dilation are the singular values, descending from eig[7].
    return finish(eig[7] - eig[6] - eig[5] - eig[4]);
}

double steering(const DensityMatrix& rho) {
    const BlochDecomposition d = bloch_decompose(rho);
    double trace_r = 0.0;
    for (const auto& row : d.t)
        for (double v : row) trace_r += v * v;
    return finish((std::sqrt(trace_r) - 1.0) / (std::sqrt(3.0) - 1.0));
}

double bell(const DensityMatrix& rho) {
    const BlochDecomposition d = bloch_decompose(rho);
    const std::vector<double> eig = linalg::hermitian_eigenvalues(to_matrix(d.correlation_gram()));
    // Tr R - min eig R = sum of the two largest eigenvalues.
    const double top_two = std::max(0.0, eig[1] + eig[2]);
    return finish((std::sqrt(top_two) - 1.0) / (std::sqrt(2.0) - 1.0));
}

MeasureTriple measure_triple(const DensityMatrix& rho) {
    MeasureTriple m{concurrence(rho), steering(rho), bell(rho)};
    if (m.s > kHierarchyTolerance && m.c <= 0.0) {
        fail(ErrorCode::HierarchyViolation, "steering " + std::to_string(m.s) + " on a state with zero concurrence");
    }
    if (m.b > kHierarchyTolerance && m.s <= 0.0) {
        fail(ErrorCode::HierarchyViolation, "Bell nonlocality " + std::to_string(m.b) + " without steering");
    }
    return m;
}

MeasureTriple potentials(const QubitState& s, const std::optional<BeamSplitter>& bs) {
    return measure_triple(bs ? states::mix_on_imperfect_bs(s, *bs) : states::mix_on_ideal_bs(s));
}

}  // namespace ncpot::measures

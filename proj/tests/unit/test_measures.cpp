#include <gtest/gtest.h>

#include "error_code.hpp"
#include "ncpot/analysis.hpp"
#include "ncpot/measures.hpp"
#include "oracles.hpp"

using namespace ncpot;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

double werner_c(double w) { return std::max(0.0, (3.0 * w - 1.0) / 2.0); }
double werner_s(double w) { return std::max(0.0, (kSqrt3 * w - 1.0) / (kSqrt3 - 1.0)); }
double werner_b(double w) { return std::max(0.0, (kSqrt2 * w - 1.0) / (kSqrt2 - 1.0)); }

}  // namespace

TEST(Bloch, Examples) {
    const auto mixed = measures::bloch_decompose(states::maximally_mixed(4));
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(mixed.u[i], 0.0, 1e-15);
        EXPECT_NEAR(mixed.v[i], 0.0, 1e-15);
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(mixed.t[i][j], 0.0, 1e-15);
    }

    const auto singlet = measures::bloch_decompose(states::singlet());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(singlet.t[i][j], i == j ? -1.0 : 0.0, 1e-15);

    const auto zz = measures::bloch_decompose(states::basis_state(4, 0));
    EXPECT_NEAR(zz.u[2], 1.0, 1e-15);
    EXPECT_NEAR(zz.v[2], 1.0, 1e-15);
    EXPECT_NEAR(zz.t[2][2], 1.0, 1e-15);
    EXPECT_NEAR(zz.t[0][0], 0.0, 1e-15);
}

TEST(Bloch, RoundTripAndBounds) {
    oracle::Gen gen(31);
    for (int i = 0; i < 300; ++i) {
        const auto rho = oracle::density(gen.density(4));
        const auto d = measures::bloch_decompose(rho);
        EXPECT_LT(d.reconstruct().max_abs_diff(rho.matrix()), 1e-14);
        double nu = 0.0, nv = 0.0;
        for (int k = 0; k < 3; ++k) {
            nu += d.u[k] * d.u[k];
            nv += d.v[k] * d.v[k];
            for (int j = 0; j < 3; ++j) EXPECT_LE(std::abs(d.t[k][j]), 1.0 + 1e-9);
        }
        EXPECT_LE(std::sqrt(nu), 1.0 + 1e-9);
        EXPECT_LE(std::sqrt(nv), 1.0 + 1e-9);
    }
}

TEST(Bloch, IndexPlacement) {
    // rho = (I + sx (x) sz) / 4 has T_mn = Tr[rho (s_n (x) s_m)] nonzero at m = z, n = x.
    const auto op = (linalg::ComplexMatrix::identity(4) + linalg::kron(linalg::pauli(1), linalg::pauli(3))) * 0.25;
    const auto d = measures::bloch_decompose(DensityMatrix::from(op));
    EXPECT_NEAR(d.t[2][0], 1.0, 1e-15);
    EXPECT_NEAR(d.t[0][2], 0.0, 1e-15);
}

TEST(Measures, Singlet) {
    const auto m = measures::measure_triple(states::singlet());
    EXPECT_NEAR(m.c, 1.0, 1e-12);
    EXPECT_NEAR(m.s, 1.0, 1e-12);
    EXPECT_NEAR(m.b, 1.0, 1e-12);
}

TEST(Measures, ProductAndMixed) {
    for (const auto& rho : {states::basis_state(4, 0), states::maximally_mixed(4)}) {
        const auto m = measures::measure_triple(rho);
        EXPECT_NEAR(m.c, 0.0, 1e-12);
        EXPECT_NEAR(m.s, 0.0, 1e-12);
        EXPECT_NEAR(m.b, 0.0, 1e-12);
    }
}

TEST(Measures, WernerClosedForms) {
    for (int i = 0; i <= 100; ++i) {
        const double w = i / 100.0;
        const auto m = measures::measure_triple(states::werner_state(w));
        EXPECT_NEAR(m.c, werner_c(w), 1e-9) << w;
        EXPECT_NEAR(m.s, werner_s(w), 1e-9) << w;
        EXPECT_NEAR(m.b, werner_b(w), 1e-9) << w;
    }
    const auto m = measures::measure_triple(states::werner_state(0.8));
    EXPECT_NEAR(m.c, 0.70, 1e-12);
    EXPECT_NEAR(m.s, 0.526795, 1e-6);
    EXPECT_NEAR(m.b, 0.317157, 1e-6);
}

TEST(Measures, PureStatePotential) {
    for (int k = 1; k <= 9; ++k) {
        const double p = k / 10.0;
        const auto rho = states::mix_on_ideal_bs({p, std::sqrt(p * (1.0 - p))});
        // Pure-state concurrence 2|ad - bc| of the amplitude vector.
        const double a = std::sqrt(rho(0, 0).real());
        const Complex b = rho(1, 0) / a, c = rho(2, 0) / a, d = rho(3, 0) / a;
        EXPECT_NEAR(measures::concurrence(rho), 2.0 * std::abs(a * d - b * c), 1e-9);
        EXPECT_NEAR(measures::concurrence(rho), p, 1e-9);
    }
}

TEST(Measures, AgreeWithOracles) {
    oracle::Gen gen(32);
    for (int i = 0; i < 500; ++i) {
        const oracle::Mat m = gen.density(4, 1 + i % 4);
        const auto rho = oracle::density(m);
        EXPECT_NEAR(measures::concurrence(rho), oracle::concurrence(m), 1e-7);
        EXPECT_NEAR(measures::steering(rho), oracle::steering(m), 1e-9);
        EXPECT_NEAR(measures::bell(rho), oracle::bell(m), 1e-9);
    }
}

TEST(Measures, ConcurrenceZeroIffPpt) {
    oracle::Gen gen(33);
    for (int i = 0; i < 500; ++i) {
        const oracle::Mat m = gen.density(4);
        const double c = measures::concurrence(oracle::density(m));
        const double ppt = oracle::ppt_min_eigenvalue(m);
        if (ppt > 1e-9) EXPECT_LT(c, 1e-9);
        if (ppt < -1e-6) EXPECT_GT(c, 0.0);
    }
}

TEST(Measures, HierarchyOnRandomStates) {
    oracle::Gen gen(34);
    for (int i = 0; i < 2000; ++i) {
        const auto rho = oracle::density(gen.density(4, 1 + i % 4));
        measures::MeasureTriple m;
        ASSERT_NO_THROW(m = measures::measure_triple(rho));
        EXPECT_GE(m.c, 0.0);
        EXPECT_LE(m.c, 1.0);
        if (m.b > measures::kHierarchyTolerance) EXPECT_GT(m.s, 0.0);
        if (m.s > measures::kHierarchyTolerance) EXPECT_GT(m.c, 0.0);
    }
}

TEST(Measures, HierarchyOnFamily) {
    oracle::Gen gen(35);
    for (int i = 0; i < 2000; ++i) {
        const auto s = gen.qubit().canonical();
        const auto bs = gen.splitter();
        const auto m = measures::measure_triple(analysis::rho_qr(s.p, s.x.real(), bs.r, bs.q));
        EXPECT_GE(m.c + 1e-9, m.s);
        EXPECT_GE(m.s + 1e-9, m.b);
    }
}

TEST(Measures, RejectsWrongDimension) {
    EXPECT_EQ(code_of([] { measures::concurrence(states::maximally_mixed(3)); }), ErrorCode::InvalidState);
}

TEST(Potentials, Examples) {
    const auto one = measures::potentials({1.0, 0.0});
    EXPECT_NEAR(one.c, 1.0, 1e-12);
    EXPECT_NEAR(one.s, 1.0, 1e-12);
    EXPECT_NEAR(one.b, 1.0, 1e-12);

    const auto vac = measures::potentials({0.0, 0.0});
    EXPECT_EQ(vac.c, 0.0);
    EXPECT_EQ(vac.s, 0.0);
    EXPECT_EQ(vac.b, 0.0);

    const auto half = measures::potentials({0.5, 0.5});
    const oracle::Mat m = oracle::to_eigen(states::mix_on_ideal_bs({0.5, 0.5}));
    EXPECT_NEAR(half.c, 0.5, 1e-9);
    EXPECT_NEAR(half.s, oracle::steering(m), 1e-9);
    EXPECT_NEAR(half.b, oracle::bell(m), 1e-9);
}

TEST(Potentials, PhaseInvariant) {
    oracle::Gen gen(36);
    for (int i = 0; i < 200; ++i) {
        const auto s = gen.qubit();
        const auto a = measures::potentials(s);
        const auto b = measures::potentials(s.canonical());
        EXPECT_NEAR(a.c, b.c, 1e-9);
        EXPECT_NEAR(a.s, b.s, 1e-9);
        EXPECT_NEAR(a.b, b.b, 1e-9);
    }
}

TEST(Potentials, ImperfectSplitterConcurrence) {
    // Output concurrence of the imperfect splitter is 2 p Q^2 r t whatever x is.
    oracle::Gen gen(37);
    for (int i = 0; i < 200; ++i) {
        const auto s = gen.qubit();
        const auto bs = gen.splitter();
        const double q2 = 1.0 - bs.q;
        EXPECT_NEAR(measures::potentials(s, bs).c, 2.0 * s.p * q2 * bs.r * bs.t, 1e-9);
    }
}

TEST(Measures, LocalUnitaryInvariance) {
    oracle::Gen gen(38);
    for (int i = 0; i < 1000; ++i) {
        const oracle::Mat m = gen.density(4, 1 + i % 4);
        const oracle::Mat u = oracle::kron(gen.unitary(2), gen.unitary(2));
        const auto a = measures::measure_triple(oracle::density(m));
        const auto b = measures::measure_triple(oracle::density(u * m * u.adjoint()));
        ASSERT_NEAR(a.c, b.c, 1e-8);
        ASSERT_NEAR(a.s, b.s, 1e-8);
        ASSERT_NEAR(a.b, b.b, 1e-8);
    }
}

TEST(Measures, UnitRangeOnRandomStates) {
    oracle::Gen gen(39);
    for (int i = 0; i < 100000; ++i) {
        const auto m = measures::measure_triple(oracle::density(gen.density(4, 1 + i % 4)));
        for (double v : {m.c, m.s, m.b}) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
        }
    }
}

TEST(Measures, PureStateConcurrence) {
    oracle::Gen gen(40);
    for (int i = 0; i < 500; ++i) {
        Eigen::VectorXcd psi(4);
        for (int k = 0; k < 4; ++k) psi(k) = gen.complex_normal();
        psi.normalize();
        const oracle::Mat rho = psi * psi.adjoint();
        EXPECT_NEAR(measures::concurrence(oracle::density(rho)), 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2)), 1e-9);
    }
}

#include "ncpot/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "ncpot/error.hpp"
#include "ncpot/states.hpp"

namespace ncpot::reconstruction {

using simulator::Block;

namespace {

constexpr double kBlockTolerance = 1e-9;

// Tomography basis indices (port 3 ⊗ port 4).
constexpr std::size_t kHV = 1;
constexpr std::size_t kVH = 2;

struct Pooled {
    double counts = 0.0;
    double seconds = 0.0;
    std::size_t records = 0;

    double rate() const { return seconds > 0.0 ? counts / seconds : 0.0; }
};

Pooled pool(std::span<const CountsRecord> records, Block block, std::string_view projection = {}) {
    Pooled p;
    for (const auto& r : records) {
        if (r.block != block) continue;
        if (!projection.empty() && r.projection != projection) continue;
        p.counts += static_cast<double>(r.counts);
        p.seconds += r.duration_s;
        ++p.records;
    }
    return p;
}

std::vector<CountsRecord> select(std::span<const CountsRecord> records, Block block) {
    std::vector<CountsRecord> out;
    for (const auto& r : records)
        if (r.block == block) out.push_back(r);
    return out;
}

// A total order on records, so that every floating-point reduction below sees
// the same sequence however the input was shuffled.
std::vector<CountsRecord> canonical_order(std::span<const CountsRecord> records) {
    std::vector<CountsRecord> sorted(records.begin(), records.end());
    const auto key = [](const CountsRecord& r) {
        const auto& s = r.setting;
        return std::tuple(static_cast<int>(r.block), r.projection, static_cast<int>(r.detector_pair), s.hwp3, s.qwp3,
                          s.hwp4, s.qwp4, s.shutter_open, s.piezo_phase, s.hwp1, s.hwp2, s.theta_H, s.theta_V,
                          r.duration_s, r.counts);
    };
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return sorted;
}

ComplexMatrix projector(const CountsRecord& r) {
    const auto a3 = simulator::analyzer_projection(r.setting.hwp3, r.setting.qwp3);
    const auto a4 = simulator::analyzer_projection(r.setting.hwp4, r.setting.qwp4);
    Complex v[4];
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) v[2 * i + j] = a3[i] * a4[j];
    ComplexMatrix pr(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) pr(i, j) = v[i] * std::conj(v[j]);
    return pr;
}

double expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j) s += rho(i, j) * op(j, i);
    return s.real();
}

void require(const Pooled& p, std::string_view what) {
    if (p.records == 0) fail(ErrorCode::MissingRecord, "no " + std::string(what) + " record");
}

}  // namespace

Calibration efficiency_ratio(std::span<const CountsRecord> records) {
    const Pooled ab = pool(records, Block::CalAB);
    const Pooled ac = pool(records, Block::CalAC);
    if (ab.records == 0 || ac.records == 0 || ab.counts <= 0.0 || ac.counts <= 0.0) return {1.0, true};
    return {ab.rate() / ac.rate(), false};
}

double estimate_m_a(std::span<const CountsRecord> records, const Calibration& cal) {
    const Pooled ma = pool(records, Block::MA);
    require(ma, "M_A");
    return 4.0 * ma.rate() / cal.ratio;
}

double estimate_m_a(std::span<const CountsRecord> records) {
    return estimate_m_a(records, efficiency_ratio(records));
}

Tomography ml_tomography_m_b(std::span<const CountsRecord> records) {
    const std::vector<CountsRecord> tomo = select(records, Block::MB);
    if (tomo.empty()) fail(ErrorCode::MissingRecord, "no M_B tomography records");
    const Pooled vh = pool(records, Block::MB, "VH");
    const Pooled hv = pool(records, Block::MB, "HV");
    require(vh, "M_B VH projection");
    require(hv, "M_B HV projection");

    std::vector<ComplexMatrix> proj;
    std::vector<double> freq;
    double total = 0.0;
    for (const auto& r : tomo) {
        proj.push_back(projector(r));
        freq.push_back(static_cast<double>(r.counts) / r.duration_s);
        total += freq.back();
    }
    if (total <= 0.0) fail(ErrorCode::InsufficientCounts, "all M_B tomography records are empty");
    for (double& f : freq) f /= total;

    const ComplexMatrix id = ComplexMatrix::identity(4);
    ComplexMatrix rho = id * 0.25;
    const auto log_likelihood = [&](const ComplexMatrix& m, std::vector<double>& probs) {
        double ll = 0.0;
        for (std::size_t k = 0; k < proj.size(); ++k) {
            probs[k] = std::max(expectation(m, proj[k]), 1e-300);
            if (freq[k] > 0.0) ll += freq[k] * std::log(probs[k]);
        }
        return ll;
    };

    std::vector<double> probs(proj.size());
    double ll = log_likelihood(rho, probs);
    Tomography out;
    for (std::size_t it = 1;; ++it) {
        if (it > kMlMaxIterations) {
            fail(ErrorCode::NonConvergence, "M_B maximum-likelihood iteration did not converge in " +
                                                std::to_string(kMlMaxIterations) + " steps");
        }
        // Projectors sum to 9·I, so R -> I at the fixed point.
        ComplexMatrix r(4);
        for (std::size_t k = 0; k < proj.size(); ++k)
            if (freq[k] > 0.0) r += proj[k] * (freq[k] / probs[k]);
        const ComplexMatrix step = id + r * kMlStep;
        ComplexMatrix next = step * rho * step;
        next *= 1.0 / next.trace().real();
        next = DensityMatrix::from_trusted(next).matrix();
        const double next_ll = log_likelihood(next, probs);
        rho = std::move(next);
        const double change = std::abs(next_ll - ll);
        ll = next_ll;
        if (change < kMlTolerance) {
            out.iterations = it;
            break;
        }
    }

    out.rho_b = rho;
    out.log_likelihood = ll;
    // |01> reads the V3H4 amplitude, |10> the H3V4 amplitude with a sign flip.
    const double d01 = rho(kVH, kVH).real();
    const double d10 = rho(kHV, kHV).real();
    const double tr = d01 + d10;
    if (tr <= 0.0) fail(ErrorCode::InsufficientCounts, "tomography places no weight on the single-photon block");
    out.block = ComplexMatrix(2, {d01 / tr, -rho(kVH, kHV) / tr, -rho(kHV, kVH) / tr, d10 / tr});
    out.rate_01 = 2.0 * vh.rate();
    out.rate_10 = 2.0 * hv.rate();
    return out;
}

double visibility(std::span<const CountsRecord> sweep) {
    if (sweep.size() < 2) fail(ErrorCode::EmptySweep, "visibility needs at least 2 sweep records");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : sweep) {
        const double rate = static_cast<double>(r.counts) / r.duration_s;
        lo = std::min(lo, rate);
        hi = std::max(hi, rate);
    }
    return hi + lo > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
}

double visibility_to_coherence(std::span<const CountsRecord> sweep, double a, double c) {
    return visibility(sweep) * (a + c) / 2.0;
}

DensityMatrix physicality_repair(const BlockEstimate& b, RepairReport* report) {
    if (b.m_b.dim() != 2) fail(ErrorCode::DimMismatch, "M_B must be 2x2");
    const double a = b.m_a;
    const double d2 = b.m_b(0, 0).real();
    const double d3 = b.m_b(1, 1).real();
    const Complex z = b.m_b(0, 1);
    const double za = std::abs(z);
    if (a < -kBlockTolerance || d2 < -kBlockTolerance || d3 < -kBlockTolerance) {
        fail(ErrorCode::IrreparableBlock, "negative population in the fixed blocks");
    }
    if (b.m_b.hermiticity_defect() > kBlockTolerance) fail(ErrorCode::IrreparableBlock, "M_B is not Hermitian");
    if (d2 * d3 - za * za < -kBlockTolerance) fail(ErrorCode::IrreparableBlock, "M_B is not positive semidefinite");

    RepairReport rep;
    const double pa = std::max(a, 0.0);
    double c12 = std::abs(b.m_c);
    double c13 = std::abs(b.m_d);
    const double bound12 = std::sqrt(pa * std::max(d2, 0.0));
    const double bound13 = std::sqrt(pa * std::max(d3, 0.0));
    if (c12 > bound12) {
        c12 = bound12;
        rep.clamped_c = true;
    }
    if (c13 > bound13) {
        c13 = bound13;
        rep.clamped_d = true;
    }

    // Determinant with every off-diagonal taken real nonnegative; the phase
    // choice below is unitarily equivalent to that gauge.
    const double fixed = a * (d2 * d3 - za * za);
    const double coupling = 2.0 * c12 * za * c13 - d2 * c13 * c13 - d3 * c12 * c12;
    if (fixed + coupling < 0.0 && coupling < 0.0) {
        rep.scale = std::sqrt(std::clamp(-fixed / coupling, 0.0, 1.0));
        c12 *= rep.scale;
        c13 *= rep.scale;
    }

    const Complex phase13 = za > 0.0 ? -z / za : Complex(1.0);
    ComplexMatrix rho(3);
    rho(0, 0) = a;
    rho(0, 1) = -c12;
    rho(0, 2) = c13 * phase13;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) rho(i + 1, j + 1) = b.m_b(i, j);
    rho(1, 0) = std::conj(rho(0, 1));
    rho(2, 0) = std::conj(rho(0, 2));
    if (report) *report = rep;
    return DensityMatrix::from_trusted(rho);
}

Reconstruction reconstruct(std::span<const CountsRecord> input) {
    const std::vector<CountsRecord> records = canonical_order(input);
    for (Block blk : {Block::MA, Block::MB, Block::MC, Block::MD}) {
        if (pool(records, blk).records == 0) {
            fail(ErrorCode::MissingRecord, "counts contain no " + std::string(simulator::to_string(blk)) + " records");
        }
    }

    Metadata meta;
    meta.calibration = efficiency_ratio(records);
    const double w11 = estimate_m_a(records, meta.calibration);
    const Tomography tomo = ml_tomography_m_b(records);
    meta.ml_iterations = tomo.iterations;
    meta.log_likelihood = tomo.log_likelihood;

    meta.normalization = w11 + tomo.rate_01 + tomo.rate_10;
    if (!(meta.normalization > 0.0)) fail(ErrorCode::InsufficientCounts, "no counts in M_A or the M_B diagonal");

    BlockEstimate blocks;
    blocks.m_a = w11 / meta.normalization;
    blocks.m_b = tomo.block * ((tomo.rate_01 + tomo.rate_10) / meta.normalization);

    const auto mc = select(records, Block::MC);
    const auto md = select(records, Block::MD);
    meta.visibility_c = visibility(mc);
    meta.visibility_d = visibility(md);
    blocks.m_c = meta.visibility_c * (blocks.m_a + blocks.m_b(0, 0).real()) / 2.0;
    blocks.m_d = meta.visibility_d * (blocks.m_a + blocks.m_b(1, 1).real()) / 2.0;

    DensityMatrix qutrit = physicality_repair(blocks, &meta.repair);
    DensityMatrix two_qubit = states::embed_two_qubit(qutrit);
    return {std::move(qutrit), std::move(two_qubit), std::move(blocks), meta};
}

}  // namespace ncpot::reconstruction

#include "ncpot/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "ncpot/error.hpp"

namespace ncpot::simulator {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr char kProjections[] = {'H', 'V', 'D', 'A', 'R', 'L'};

// Detection modes after the analyzers: detectors A, B, C plus the unmonitored
// FBS output and the blocked shutter arm.
enum Out : std::size_t { kA = 0, kB = 1, kFbsLost = 2, kC = 3, kShutterLost = 4, kOutModes = 5 };

std::size_t out_index(DetectorPair p, bool first) {
    switch (p) {
        case DetectorPair::AB: return first ? kA : kB;
        case DetectorPair::AC: return first ? kA : kC;
        case DetectorPair::BC: return first ? kB : kC;
    }
    return 0;
}

// 5x4 map from (H3, V3, H4, V4) creation operators to detection modes.
ComplexMatrix mode_map(const OpticalSetting& s) {
    const ComplexMatrix j3 = hwp_matrix(s.hwp3) * qwp_matrix(s.qwp3);
    const ComplexMatrix j4 = hwp_matrix(s.hwp4) * qwp_matrix(s.qwp4);
    const Complex piezo = std::polar(1.0, s.piezo_phase);
    ComplexMatrix u(kOutModes);  // only the first four columns are used
    for (std::size_t col = 0; col < 2; ++col) {
        // Port 3: V reflected to A (PBS sign), H into FBS input 1.
        const std::size_t in3 = col;
        u(kA, in3) = -j3(1, col);
        u(kB, in3) = j3(0, col) * kInvSqrt2;
        u(kFbsLost, in3) = j3(0, col) * kInvSqrt2;
        // Port 4: V reflected to C, H through shutter and piezo into FBS input 2.
        const std::size_t in4 = col + 2;
        u(kC, in4) = -j4(1, col);
        if (s.shutter_open) {
            u(kB, in4) = piezo * j4(0, col) * kInvSqrt2;
            u(kFbsLost, in4) = -piezo * j4(0, col) * kInvSqrt2;
        } else {
            u(kShutterLost, in4) = j4(0, col);
        }
    }
    return u;
}

// Symmetric C with |psi> = Σ_kl C_kl a†_k a†_l |0>.
ComplexMatrix boson_amplitudes(const TwoPhotonAmplitudes& psi) {
    ComplexMatrix c(kOutModes);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const std::size_t k = i;
            const std::size_t l = 2 * j + 1;  // V3 -> 1, V4 -> 3
            const Complex a = psi.amp[2 * i + j];
            if (k == l) {
                c(k, k) += a * kInvSqrt2;
            } else {
                c(k, l) += 0.5 * a;
                c(l, k) += 0.5 * a;
            }
        }
    return c;
}

double pair_probability(const TwoPhotonAmplitudes& psi, const ComplexMatrix& u, DetectorPair pair) {
    const std::size_t k = out_index(pair, true);
    const std::size_t l = out_index(pair, false);
    const ComplexMatrix c = boson_amplitudes(psi);
    // C' = U C U^T, only entry (k, l) needed.
    Complex amp = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) amp += u(k, a) * c(a, b) * u(l, b);
    return 4.0 * std::norm(amp);
}

std::vector<WeightedBranch> reference_state(Mode photon1, Mode photon2) {
    WeightedBranch b{1.0, {}};
    b.state.amp[TwoPhotonAmplitudes::index(photon1, photon2)] = 1.0;
    return {b};
}

std::vector<WeightedBranch> branches_for(const std::vector<WeightedBranch>& source, const CountsRecord& r) {
    if (r.block == Block::CalAB) return reference_state(Mode::H3, Mode::V3);
    if (r.block == Block::CalAC) return reference_state(Mode::V3, Mode::V4);
    return source;
}

void check_angle(double deg, const char* name) {
    if (!std::isfinite(deg) || deg < -90.0 || deg > 90.0) {
        fail(ErrorCode::OutOfRange, std::string(name) + " angle " + std::to_string(deg) + " outside [-90, 90] degrees");
    }
}

}  // namespace

void OpticalSetting::validate() const {
    check_angle(hwp1, "hwp1");
    check_angle(hwp2, "hwp2");
    check_angle(hwp3, "hwp3");
    check_angle(hwp4, "hwp4");
    check_angle(qwp3, "qwp3");
    check_angle(qwp4, "qwp4");
    check_angle(theta_H, "theta_H");
    check_angle(theta_V, "theta_V");
    if (!std::isfinite(piezo_phase)) fail(ErrorCode::OutOfRange, "piezo phase must be finite");
}

std::string_view to_string(DetectorPair p) {
    switch (p) {
        case DetectorPair::AB: return "AB";
        case DetectorPair::AC: return "AC";
        case DetectorPair::BC: return "BC";
    }
    return "?";
}

std::string_view to_string(Block b) {
    switch (b) {
        case Block::MA: return "M_A";
        case Block::MB: return "M_B";
        case Block::MC: return "M_C";
        case Block::MD: return "M_D";
        case Block::CalAB: return "CAL_AB";
        case Block::CalAC: return "CAL_AC";
    }
    return "?";
}

DetectorPair detector_pair_from(std::string_view s) {
    for (auto p : {DetectorPair::AB, DetectorPair::AC, DetectorPair::BC})
        if (to_string(p) == s) return p;
    fail(ErrorCode::ParseError, "unknown detector pair '" + std::string(s) + "'");
}

Block block_from(std::string_view s) {
    for (auto b : {Block::MA, Block::MB, Block::MC, Block::MD, Block::CalAB, Block::CalAC})
        if (to_string(b) == s) return b;
    fail(ErrorCode::ParseError, "unknown block '" + std::string(s) + "'");
}

void CountsRecord::validate() const {
    setting.validate();
    if (!std::isfinite(duration_s) || duration_s <= 0.0) {
        fail(ErrorCode::OutOfRange, "record duration must be positive");
    }
}

void DetectorModel::validate() const {
    for (double e : {efficiency_A, efficiency_B, efficiency_C}) {
        if (!(e > 0.0 && e <= 1.0)) fail(ErrorCode::OutOfRange, "detector efficiency " + std::to_string(e) + " outside (0, 1]");
    }
    if (!std::isfinite(pair_rate_hz) || pair_rate_hz < 0.0) fail(ErrorCode::OutOfRange, "pair rate must be >= 0");
    if (!std::isfinite(dark_coincidence_hz) || dark_coincidence_hz < 0.0) {
        fail(ErrorCode::OutOfRange, "dark coincidence rate must be >= 0");
    }
}

double DetectorModel::pair_efficiency(DetectorPair p) const {
    switch (p) {
        case DetectorPair::AB: return efficiency_A * efficiency_B;
        case DetectorPair::AC: return efficiency_A * efficiency_C;
        case DetectorPair::BC: return efficiency_B * efficiency_C;
    }
    return 0.0;
}

ComplexMatrix hwp_matrix(double theta_deg) {
    const double c = std::cos(2.0 * theta_deg * kDeg);
    const double s = std::sin(2.0 * theta_deg * kDeg);
    return ComplexMatrix(2, {c, s, s, -c});
}

ComplexMatrix qwp_matrix(double theta_deg) {
    const double c = std::cos(theta_deg * kDeg);
    const double s = std::sin(theta_deg * kDeg);
    const Complex i(0.0, 1.0);
    const Complex off = (1.0 - i) * s * c;
    return ComplexMatrix(2, {c * c + i * s * s, off, off, s * s + i * c * c});
}

ComplexMatrix pbs_matrix() {
    // The printed third row reads (1, 0, 1, 0); a unitary PBS needs (0, 0, 1, 0).
    return ComplexMatrix(4, {1, 0, 0, 0,
                             0, 0, 0, 1,
                             0, 0, 1, 0,
                             0, -1, 0, 0});
}

std::array<Complex, 4> pbs_transform(const std::array<Complex, 4>& modes) {
    const ComplexMatrix m = pbs_matrix();
    std::array<Complex, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[i] += m(i, j) * modes[j];
    return out;
}

std::size_t TwoPhotonAmplitudes::index(Mode photon1, Mode photon2) {
    if (photon2 != Mode::V3 && photon2 != Mode::V4) {
        fail(ErrorCode::OutOfRange, "second photon is always vertically polarised (V3 or V4)");
    }
    return 2 * static_cast<std::size_t>(photon1) + (photon2 == Mode::V4 ? 1 : 0);
}

double TwoPhotonAmplitudes::norm() const {
    double n = 0.0;
    for (const auto& a : amp) n += std::norm(a);
    return std::sqrt(n);
}

namespace {

TwoPhotonAmplitudes branch_amplitudes(Complex alpha, Complex beta, double r, double t, double s3, double s4) {
    TwoPhotonAmplitudes psi;
    const auto set = [&](Mode a, Mode b, Complex v) { psi.amp[TwoPhotonAmplitudes::index(a, b)] = v * kInvSqrt2; };
    set(Mode::H4, Mode::V3, beta * s4 * r);
    set(Mode::H4, Mode::V4, -beta * s4 * r);
    set(Mode::H3, Mode::V3, -beta * s3 * t);
    set(Mode::H3, Mode::V4, beta * s3 * t);
    set(Mode::V3, Mode::V3, alpha);
    set(Mode::V4, Mode::V4, -alpha);
    return psi;
}

}  // namespace

TwoPhotonAmplitudes propagate(const QubitState& s, const BeamSplitter& bs) {
    s.validate();
    bs.validate();
    const Complex alpha = std::sqrt(1.0 - s.p);
    const Complex beta = std::polar(std::sqrt(s.p), -std::arg(s.x));
    return branch_amplitudes(alpha, beta, bs.r, bs.t, 1.0, 1.0);
}

std::vector<WeightedBranch> propagate_branches(const QubitState& s, const BeamSplitter& bs) {
    const TwoPhotonAmplitudes base = propagate(s, bs);
    const double max_x = s.max_coherence();
    const double flip_in = max_x > 0.0 ? 0.5 * (1.0 - std::min(1.0, std::abs(s.x) / max_x)) : 0.0;
    const double flip_out = 0.5 * (1.0 - bs.coherence_factor());
    const Complex alpha = std::sqrt(1.0 - s.p);
    const Complex beta = std::polar(std::sqrt(s.p), -std::arg(s.x));

    std::vector<WeightedBranch> out;
    out.reserve(8);
    for (int in = 0; in < 2; ++in)
        for (int f3 = 0; f3 < 2; ++f3)
            for (int f4 = 0; f4 < 2; ++f4) {
                const double w = (in ? flip_in : 1.0 - flip_in) * (f3 ? flip_out : 1.0 - flip_out) *
                                 (f4 ? flip_out : 1.0 - flip_out);
                if (w == 0.0) continue;
                out.push_back({w, in == 0 && f3 == 0 && f4 == 0
                                      ? base
                                      : branch_amplitudes(alpha, in ? -beta : beta, bs.r, bs.t, f3 ? -1.0 : 1.0,
                                                          f4 ? -1.0 : 1.0)});
            }
    return out;
}

DensityMatrix output_state(const std::vector<WeightedBranch>& branches) {
    const double root2 = std::sqrt(2.0);
    ComplexMatrix rho(3);
    for (const auto& b : branches) {
        const Complex v[3] = {-root2 * b.state(Mode::V3, Mode::V3), root2 * b.state(Mode::H4, Mode::V3),
                              root2 * b.state(Mode::H3, Mode::V3)};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) rho(i, j) += b.weight * v[i] * std::conj(v[j]);
    }
    return DensityMatrix::from_trusted(rho);
}

double coincidence_probability(const std::vector<WeightedBranch>& branches, const OpticalSetting& setting,
                               DetectorPair pair) {
    const ComplexMatrix u = mode_map(setting);
    double p = 0.0;
    for (const auto& b : branches) p += b.weight * pair_probability(b.state, u, pair);
    return p;
}

std::pair<double, double> analyzer_angles(char label) {
    switch (label) {
        case 'H': return {-45.0, 0.0};
        case 'V': return {0.0, 0.0};
        case 'D': return {-22.5, -45.0};
        case 'A': return {22.5, -45.0};
        case 'R': return {22.5, 0.0};
        case 'L': return {-22.5, 0.0};
        default: break;
    }
    fail(ErrorCode::OutOfRange, std::string("unknown polarisation label '") + label + "'");
}

std::array<Complex, 2> analyzer_projection(double hwp_deg, double qwp_deg) {
    const ComplexMatrix u = hwp_matrix(hwp_deg) * qwp_matrix(qwp_deg);
    return {std::conj(u(1, 0)), std::conj(u(1, 1))};
}

std::vector<CountsRecord> schedule_template(const QubitState& s, const BeamSplitter& bs) {
    OpticalSetting base;
    base.hwp1 = std::asin(std::sqrt(std::clamp(s.p, 0.0, 1.0))) / 2.0 / kDeg;
    base.theta_H = std::acos(std::clamp(bs.r, -1.0, 1.0)) / 2.0 / kDeg;

    std::vector<CountsRecord> out;
    const auto add = [&](OpticalSetting st, DetectorPair pair, double seconds, Block block, std::string label = {}) {
        out.push_back({st, pair, seconds, 0, block, std::move(label)});
    };

    add(base, DetectorPair::AB, kLongRecordSeconds, Block::CalAB);
    add(base, DetectorPair::AC, kLongRecordSeconds, Block::CalAC);

    OpticalSetting ma = base;
    ma.hwp3 = 22.5;
    add(ma, DetectorPair::AB, kLongRecordSeconds, Block::MA);

    for (char a3 : kProjections)
        for (char a4 : kProjections) {
            OpticalSetting st = base;
            std::tie(st.hwp3, st.qwp3) = analyzer_angles(a3);
            std::tie(st.hwp4, st.qwp4) = analyzer_angles(a4);
            add(st, DetectorPair::AC, kLongRecordSeconds, Block::MB, std::string{a3, a4});
        }

    OpticalSetting mc = base;
    mc.hwp3 = 22.5;
    mc.shutter_open = true;
    for (std::size_t k = 0; k < kSweepSamples; ++k) add(mc, DetectorPair::AB, kSweepSampleSeconds, Block::MC);

    OpticalSetting md = base;
    md.hwp4 = 22.5;
    md.shutter_open = true;
    for (std::size_t k = 0; k < kSweepSamples; ++k) add(md, DetectorPair::BC, kSweepSampleSeconds, Block::MD);
    return out;
}

double expected_counts(const std::vector<WeightedBranch>& branches, const CountsRecord& r, const DetectorModel& det) {
    const double p = coincidence_probability(branches_for(branches, r), r.setting, r.detector_pair);
    return det.pair_rate_hz * r.duration_s * det.pair_efficiency(r.detector_pair) * p +
           det.dark_coincidence_hz * r.duration_s;
}

Schedule simulate_schedule(const QubitState& s, const BeamSplitter& bs, const DetectorModel& det, std::uint64_t seed) {
    det.validate();
    const auto branches = propagate_branches(s, bs);
    Schedule out;
    out.header.seed = seed;
    out.header.detector = det;
    out.header.source = s;
    out.header.splitter = bs;
    out.records = schedule_template(s, bs);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (auto& r : out.records) {
        if (r.block == Block::MC || r.block == Block::MD) r.setting.piezo_phase = phase(rng);
        const double mean = expected_counts(branches, r, det);
        if (mean > 0.0) {
            std::poisson_distribution<std::uint64_t> draw(mean);
            r.counts = draw(rng);
        }
    }
    return out;
}

}  // namespace ncpot::simulator

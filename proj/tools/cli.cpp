#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ncpot/analysis.hpp"
#include "ncpot/io.hpp"
#include "ncpot/measures.hpp"
#include "ncpot/reconstruction.hpp"
#include "ncpot/states.hpp"

namespace ncpot::cli {

namespace {

using io::format_number;

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) fail(ErrorCode::ParseError, "config '" + key + "': '" + v + "' is not a number");
    return d;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    unsigned long long n = 0;
    try {
        n = std::stoull(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty() || v.front() == '-') {
        fail(ErrorCode::ParseError, "config '" + key + "': '" + v + "' is not a nonnegative integer");
    }
    return n;
}

std::string resolve(const RunConfig& cfg, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.is_absolute() || cfg.output_dir.empty() || cfg.output_dir == ".") return path;
    return (std::filesystem::path(cfg.output_dir) / p).string();
}

// Optional splitter flags: r alone fixes t = sqrt(1 - r^2) and vice versa.
struct SplitterFlags {
    std::optional<double> r, t, q;

    std::optional<BeamSplitter> get() const {
        if (!r && !t && !q) return std::nullopt;
        const double rr = r ? *r : (t ? std::sqrt(std::max(0.0, 1.0 - *t * *t)) : std::sqrt(0.5));
        const double tt = t ? *t : std::sqrt(std::max(0.0, 1.0 - rr * rr));
        return BeamSplitter::make(rr, tt, q.value_or(0.0));
    }
};

struct StateFlags {
    double p = 0.0;
    double x = 0.0;
    double x_im = 0.0;

    QubitState get() const { return QubitState::make(p, {x, x_im}); }
};

void add_state_flags(CLI::App* cmd, StateFlags& s, bool required) {
    auto* p = cmd->add_option("--p", s.p, "single-photon probability");
    if (required) p->required();
    cmd->add_option("--x", s.x, "coherence (real part)");
    cmd->add_option("--x-im", s.x_im, "coherence (imaginary part)");
}

void add_splitter_flags(CLI::App* cmd, SplitterFlags& b) {
    cmd->add_option("--r", b.r, "reflection amplitude");
    cmd->add_option("--t", b.t, "transmission amplitude");
    cmd->add_option("--q", b.q, "output decoherence");
}

DensityMatrix read_state(const RunConfig& cfg, const std::string& path) {
    return io::density_matrix_from_json(io::read_file(path), cfg.tolerances);
}

DensityMatrix as_two_qubit(const DensityMatrix& rho) {
    if (rho.dim() == 3) return states::embed_two_qubit(rho);
    if (rho.dim() != 4) fail(ErrorCode::DimMismatch, "expected a 3x3 qutrit or 4x4 two-qubit state");
    return rho;
}

wigner::GridSpec parse_grid(const std::string& spec, wigner::GridSpec base) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 6) {
        fail(ErrorCode::ParseError, "--grid takes 'min,max,n' or 're_min,re_max,n_re,im_min,im_max,n_im'");
    }
    base.re_min = parse_double("grid", parts[0]);
    base.re_max = parse_double("grid", parts[1]);
    base.re_points = parse_unsigned("grid", parts[2]);
    const std::size_t off = parts.size() == 6 ? 3 : 0;
    base.im_min = parse_double("grid", parts[off]);
    base.im_max = parse_double("grid", parts[off + 1]);
    base.im_points = parse_unsigned("grid", parts[off + 2]);
    return base;
}

std::string kind_name(analysis::ExtremumKind k) { return k == analysis::ExtremumKind::Minimum ? "minimum" : "maximum"; }

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return kIo;
        case ErrorCode::MissingRecord:
        case ErrorCode::EmptySweep:
        case ErrorCode::InsufficientCounts:
        case ErrorCode::IrreparableBlock: return kIncomplete;
        case ErrorCode::NonConvergence: return kNonConvergence;
        default: return kInvalid;
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "seed") seed = parse_unsigned(key, value);
    else if (key == "output_dir") output_dir = value;
    else if (key == "tolerance.hermitian") tolerances.hermitian = parse_double(key, value);
    else if (key == "tolerance.trace") tolerances.trace = parse_double(key, value);
    else if (key == "tolerance.psd") tolerances.psd = parse_double(key, value);
    else if (key == "detector.efficiency_A") detector.efficiency_A = parse_double(key, value);
    else if (key == "detector.efficiency_B") detector.efficiency_B = parse_double(key, value);
    else if (key == "detector.efficiency_C") detector.efficiency_C = parse_double(key, value);
    else if (key == "detector.pair_rate_hz") detector.pair_rate_hz = parse_double(key, value);
    else if (key == "detector.dark_coincidence_hz") detector.dark_coincidence_hz = parse_double(key, value);
    else if (key == "grid.re_min") grid.re_min = parse_double(key, value);
    else if (key == "grid.re_max") grid.re_max = parse_double(key, value);
    else if (key == "grid.re_points") grid.re_points = parse_unsigned(key, value);
    else if (key == "grid.im_min") grid.im_min = parse_double(key, value);
    else if (key == "grid.im_max") grid.im_max = parse_double(key, value);
    else if (key == "grid.im_points") grid.im_points = parse_unsigned(key, value);
    else if (key == "fit.restarts") fit_restarts = parse_unsigned(key, value);
    else if (key == "fit.max_evaluations") fit_evaluations = parse_unsigned(key, value);
    else if (key == "sweep.steps") sweep_steps = parse_unsigned(key, value);
    else fail(ErrorCode::ParseError, "unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
    return {
        {"seed", std::to_string(seed)},
        {"output_dir", output_dir},
        {"tolerance.hermitian", format_number(tolerances.hermitian)},
        {"tolerance.trace", format_number(tolerances.trace)},
        {"tolerance.psd", format_number(tolerances.psd)},
        {"detector.efficiency_A", format_number(detector.efficiency_A)},
        {"detector.efficiency_B", format_number(detector.efficiency_B)},
        {"detector.efficiency_C", format_number(detector.efficiency_C)},
        {"detector.pair_rate_hz", format_number(detector.pair_rate_hz)},
        {"detector.dark_coincidence_hz", format_number(detector.dark_coincidence_hz)},
        {"grid.re_min", format_number(grid.re_min)},
        {"grid.re_max", format_number(grid.re_max)},
        {"grid.re_points", std::to_string(grid.re_points)},
        {"grid.im_min", format_number(grid.im_min)},
        {"grid.im_max", format_number(grid.im_max)},
        {"grid.im_points", std::to_string(grid.im_points)},
        {"fit.restarts", std::to_string(fit_restarts)},
        {"fit.max_evaluations", std::to_string(fit_evaluations)},
        {"sweep.steps", std::to_string(sweep_steps)},
    };
}

RunConfig load_config() {
    RunConfig cfg;
    if (const char* path = std::getenv("NCPOT_CONFIG"); path && *path) {
        for (const auto& [k, v] : io::parse_key_values(io::read_file(path))) cfg.set(k, v);
    }
    return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonclassicality potentials: measures, simulation, reconstruction, fitting, Wigner grids", "ncpot"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;

    StateFlags pot_state;
    SplitterFlags pot_bs;
    auto* potentials = app.add_subcommand("potentials", "entanglement, steering and Bell potentials of a qubit");
    add_state_flags(potentials, pot_state, true);
    add_splitter_flags(potentials, pot_bs);

    StateFlags sim_state;
    SplitterFlags sim_bs;
    std::optional<double> sim_pairs;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo counts for the full measurement schedule");
    add_state_flags(simulate, sim_state, true);
    add_splitter_flags(simulate, sim_bs);
    simulate->add_option("--pairs", sim_pairs, "pairs emitted per 50 s record (sets the pair rate)");
    simulate->add_option("--seed", seed_flag, "RNG seed");
    simulate->add_option("--out", sim_out, "counts file")->required();

    std::string rec_counts, rec_out;
    auto* reconstruct = app.add_subcommand("reconstruct", "estimate the output state from a counts file");
    reconstruct->add_option("--counts", rec_counts, "counts file")->required();
    reconstruct->add_option("--out", rec_out, "density-matrix file")->required();

    std::string fit_state, fit_out;
    double intent_p = 0.0, intent_x = 0.0, intent_x_im = 0.0;
    auto* fit = app.add_subcommand("fit", "closest imperfect-splitter state by Bures distance");
    fit->add_option("--state", fit_state, "density-matrix file (3x3 or 4x4)")->required();
    fit->add_option("--intent-p", intent_p, "intended p")->required();
    fit->add_option("--intent-x", intent_x, "intended x (real part)")->required();
    fit->add_option("--intent-x-im", intent_x_im, "intended x (imaginary part)");
    fit->add_option("--seed", seed_flag, "restart seed");
    fit->add_option("--out", fit_out, "also write the result here");

    std::string ia, ib, interp_out;
    std::optional<std::size_t> steps;
    auto* interpolate = app.add_subcommand("interpolate", "measure curves along beta a + (1 - beta) b");
    interpolate->add_option("--a", ia, "density-matrix file")->required();
    interpolate->add_option("--b", ib, "density-matrix file")->required();
    interpolate->add_option("--steps", steps, "number of beta points");
    interpolate->add_option("--out", interp_out, "sweep CSV")->required();

    std::string w_state, w_grid, w_out;
    StateFlags w_qubit;
    auto* wigner_cmd = app.add_subcommand("wigner", "Wigner function on a phase-space grid");
    wigner_cmd->add_option("--state", w_state, "density-matrix file (dim <= 3, or 4x4 two-qubit)");
    add_state_flags(wigner_cmd, w_qubit, false);
    wigner_cmd->add_option("--grid", w_grid, "min,max,n or re_min,re_max,n_re,im_min,im_max,n_im");
    wigner_cmd->add_option("--out", w_out, "grid CSV")->required();

    auto* show_config = app.add_subcommand("show-config", "print the effective configuration");

    std::vector<std::string> argv_store{"ncpot"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        RunConfig cfg = load_config();
        if (seed_flag) cfg.seed = *seed_flag;

        if (*potentials) {
            const auto m = measures::potentials(pot_state.get(), pot_bs.get());
            out << "{\"c\":" << format_number(m.c) << ",\"s\":" << format_number(m.s) << ",\"b\":" << format_number(m.b)
                << "}\n";
        } else if (*simulate) {
            simulator::DetectorModel det = cfg.detector;
            if (sim_pairs) det.pair_rate_hz = *sim_pairs / simulator::kLongRecordSeconds;
            const auto bs = sim_bs.get().value_or(BeamSplitter::balanced());
            const auto schedule = simulator::simulate_schedule(sim_state.get(), bs, det, cfg.seed);
            const std::string path = resolve(cfg, sim_out);
            io::write_file(path, io::schedule_to_json(schedule));
            out << "wrote " << schedule.records.size() << " records to " << path << "\n";
        } else if (*reconstruct) {
            const auto schedule = io::schedule_from_json(io::read_file(rec_counts));
            const auto r = reconstruction::reconstruct(schedule.records);
            const QubitState source = schedule.header.source.canonical();
            const double f = linalg::fidelity(r.two_qubit, states::mix_on_ideal_bs(source));
            const std::string path = resolve(cfg, rec_out);
            io::write_file(path, io::reconstruction_to_json({r.qutrit, r.blocks, r.meta, f}));
            out << "{\"fidelity_to_ideal\":" << format_number(f) << ",\"ml_iterations\":" << r.meta.ml_iterations
                << ",\"efficiency_ratio_defaulted\":" << (r.meta.calibration.defaulted ? "true" : "false") << "}\n";
            if (r.meta.calibration.defaulted) err << "warning: calibration records missing, efficiency ratio set to 1\n";
        } else if (*fit) {
            const DensityMatrix target = as_two_qubit(read_state(cfg, fit_state));
            analysis::FitOptions opts;
            opts.seed = cfg.seed;
            opts.restarts = cfg.fit_restarts;
            opts.max_evaluations = cfg.fit_evaluations;
            auto result = analysis::fit_rho_qr(target, opts);
            std::tie(result.fidelity_in, result.fidelity_out) =
                analysis::fidelities(result, QubitState::make(intent_p, {intent_x, intent_x_im}), target);
            const std::string text = io::fit_to_json(result);
            if (!fit_out.empty()) io::write_file(resolve(cfg, fit_out), text);
            out << text;
        } else if (*interpolate) {
            const DensityMatrix a = as_two_qubit(read_state(cfg, ia));
            const DensityMatrix b = as_two_qubit(read_state(cfg, ib));
            const auto curve = analysis::sweep_interpolation(a, b, steps.value_or(cfg.sweep_steps));
            std::ostringstream csv;
            analysis::write_sweep_csv(csv, curve);
            io::write_file(resolve(cfg, interp_out), csv.str());
            out << "measure,beta,kind\n";
            if (curve.size() >= 5) {
                const auto ex = analysis::locate_extrema(curve);
                const std::pair<const char*, const std::vector<analysis::Extremum>*> rows[] = {
                    {"c", &ex.c}, {"s", &ex.s}, {"b", &ex.b}};
                for (const auto& [name, list] : rows)
                    for (const auto& e : *list) out << name << "," << format_number(e.beta) << "," << kind_name(e.kind) << "\n";
            }
        } else if (*wigner_cmd) {
            if (w_state.empty() == (wigner_cmd->count("--p") == 0)) {
                fail(ErrorCode::OutOfRange, "wigner needs exactly one of --state or --p/--x");
            }
            DensityMatrix rho = w_state.empty() ? states::vops_state(w_qubit.get()) : read_state(cfg, w_state);
            if (rho.dim() == 4) rho = wigner::qutrit_encode(rho);
            const auto spec = w_grid.empty() ? cfg.grid : parse_grid(w_grid, cfg.grid);
            const auto g = wigner::wigner_function(rho, spec);
            std::ostringstream csv;
            wigner::write_csv(csv, g);
            io::write_file(resolve(cfg, w_out), csv.str());
            out << "{\"min\":" << format_number(g.min()) << ",\"max\":" << format_number(g.max())
                << ",\"integral\":" << format_number(wigner::integrate(g))
                << ",\"negativity\":" << format_number(wigner::wigner_negativity(g)) << "}\n";
        } else if (*show_config) {
            for (const auto& [k, v] : cfg.entries()) out << k << " = " << v << "\n";
        }
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    return kOk;
}

}  // namespace ncpot::cli

#include "ncpot/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ncpot/error.hpp"

namespace ncpot::io {

namespace {

using json = nlohmann::ordered_json;

json parse(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
    }
}

// Runs `body`, turning any nlohmann type or key error into ParseError.
template <typename F>
auto guarded(std::string_view what, F&& body) {
    try {
        return body();
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, std::string(what) + ": " + e.what());
    }
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) fail(ErrorCode::ParseError, std::string("field '") + key + "' is not a number");
    return v.get<double>();
}

json matrix_fields(const DensityMatrix& rho) {
    json re = json::array();
    json im = json::array();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        json rr = json::array();
        json ri = json::array();
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            rr.push_back(rho(i, j).real());
            ri.push_back(rho(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    json out = json::object();
    out["dim"] = rho.dim();
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

DensityMatrix matrix_from(const json& j, const linalg::Tolerances& tol = {}) {
    const json& dim_field = field(j, "dim");
    if (!dim_field.is_number_unsigned()) fail(ErrorCode::ParseError, "'dim' must be a positive integer");
    const std::size_t dim = dim_field.get<std::size_t>();
    if (dim == 0 || dim > linalg::kMaxDim) fail(ErrorCode::DimOverflow, "dim " + std::to_string(dim) + " outside 1..16");
    const json& re = field(j, "re");
    const json& im = field(j, "im");
    const auto check_rows = [&](const json& m, const char* name) {
        if (!m.is_array() || m.size() != dim) fail(ErrorCode::DimMismatch, std::string("'") + name + "' must have dim rows");
        for (const auto& row : m) {
            if (!row.is_array() || row.size() != dim) fail(ErrorCode::DimMismatch, std::string("'") + name + "' row length differs from dim");
            for (const auto& v : row)
                if (!v.is_number()) fail(ErrorCode::ParseError, std::string("'") + name + "' holds a non-number");
        }
    };
    check_rows(re, "re");
    check_rows(im, "im");
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) m(i, k) = {re[i][k].get<double>(), im[i][k].get<double>()};
    return DensityMatrix::from(std::move(m), tol);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json setting_to_json(const simulator::OpticalSetting& s) {
    json j = json::object();
    j["hwp1"] = s.hwp1;
    j["hwp2"] = s.hwp2;
    j["hwp3"] = s.hwp3;
    j["hwp4"] = s.hwp4;
    j["qwp3"] = s.qwp3;
    j["qwp4"] = s.qwp4;
    j["theta_H"] = s.theta_H;
    j["theta_V"] = s.theta_V;
    j["shutter_open"] = s.shutter_open;
    j["piezo_phase"] = s.piezo_phase;
    return j;
}

simulator::OpticalSetting setting_from(const json& j) {
    simulator::OpticalSetting s;
    s.hwp1 = number(j, "hwp1");
    s.hwp2 = number(j, "hwp2");
    s.hwp3 = number(j, "hwp3");
    s.hwp4 = number(j, "hwp4");
    s.qwp3 = number(j, "qwp3");
    s.qwp4 = number(j, "qwp4");
    s.theta_H = number(j, "theta_H");
    s.theta_V = number(j, "theta_V");
    const json& shutter = field(j, "shutter_open");
    if (!shutter.is_boolean()) fail(ErrorCode::ParseError, "'shutter_open' must be a boolean");
    s.shutter_open = shutter.get<bool>();
    s.piezo_phase = number(j, "piezo_phase");
    return s;
}

json metadata_to_json(const reconstruction::Metadata& m, const reconstruction::BlockEstimate& b, double fidelity) {
    json j = json::object();
    j["efficiency_ratio"] = round_to_9(m.calibration.ratio);
    j["efficiency_ratio_defaulted"] = m.calibration.defaulted;
    j["ml_iterations"] = m.ml_iterations;
    j["log_likelihood"] = round_to_9(m.log_likelihood);
    j["visibility_c"] = round_to_9(m.visibility_c);
    j["visibility_d"] = round_to_9(m.visibility_d);
    j["normalization"] = round_to_9(m.normalization);
    j["m_a"] = round_to_9(b.m_a);
    j["m_c_estimate"] = round_to_9(b.m_c);
    j["m_d_estimate"] = round_to_9(b.m_d);
    j["clamped_c"] = m.repair.clamped_c;
    j["clamped_d"] = m.repair.clamped_d;
    j["repair_scale"] = round_to_9(m.repair.scale);
    j["fidelity_to_ideal"] = round_to_9(fidelity);
    return j;
}

bool boolean(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_boolean()) fail(ErrorCode::ParseError, std::string("field '") + key + "' is not a boolean");
    return v.get<bool>();
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorCode::IoError, "error while reading '" + path.string() + "'");
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) fail(ErrorCode::IoError, "error while writing '" + path.string() + "'");
}

std::string density_matrix_to_json(const DensityMatrix& rho) { return dump(matrix_fields(rho)); }

DensityMatrix density_matrix_from_json(std::string_view text, const linalg::Tolerances& tol) {
    const json j = parse(text);
    return guarded("density matrix", [&] { return matrix_from(j, tol); });
}

std::string schedule_to_json(const simulator::Schedule& s) {
    json arr = json::array();
    json header = json::object();
    header["schedule_version"] = s.header.schedule_version;
    header["seed"] = s.header.seed;
    const auto& d = s.header.detector;
    header["detector"] = {{"efficiency_A", d.efficiency_A},
                          {"efficiency_B", d.efficiency_B},
                          {"efficiency_C", d.efficiency_C},
                          {"pair_rate_hz", d.pair_rate_hz},
                          {"dark_coincidence_hz", d.dark_coincidence_hz}};
    header["source"] = {{"p", s.header.source.p},
                        {"x_re", s.header.source.x.real()},
                        {"x_im", s.header.source.x.imag()},
                        {"r", s.header.splitter.r},
                        {"t", s.header.splitter.t},
                        {"q", s.header.splitter.q}};
    arr.push_back({{"header", std::move(header)}});
    for (const auto& r : s.records) {
        json rec = json::object();
        rec["block"] = simulator::to_string(r.block);
        rec["projection"] = r.projection;
        rec["setting"] = setting_to_json(r.setting);
        rec["detector_pair"] = simulator::to_string(r.detector_pair);
        rec["duration_s"] = r.duration_s;
        rec["counts"] = r.counts;
        arr.push_back(std::move(rec));
    }
    return dump(arr);
}

simulator::Schedule schedule_from_json(std::string_view text) {
    const json j = parse(text);
    return guarded("counts file", [&] {
        if (!j.is_array() || j.empty()) fail(ErrorCode::ParseError, "counts file must be a non-empty JSON array");
        simulator::Schedule s;
        const json& h = field(j.front(), "header");
        const json& version = field(h, "schedule_version");
        if (!version.is_number_integer() || version.get<int>() != simulator::kScheduleVersion) {
            fail(ErrorCode::ParseError, "unsupported schedule_version");
        }
        const json& seed = field(h, "seed");
        if (!seed.is_number_unsigned()) fail(ErrorCode::ParseError, "'seed' must be a nonnegative integer");
        s.header.seed = seed.get<std::uint64_t>();
        const json& d = field(h, "detector");
        s.header.detector = {number(d, "efficiency_A"), number(d, "efficiency_B"), number(d, "efficiency_C"),
                             number(d, "pair_rate_hz"), number(d, "dark_coincidence_hz")};
        const json& src = field(h, "source");
        s.header.source = {number(src, "p"), {number(src, "x_re"), number(src, "x_im")}};
        s.header.splitter = {number(src, "r"), number(src, "t"), number(src, "q")};

        for (std::size_t i = 1; i < j.size(); ++i) {
            const json& rec = j[i];
            simulator::CountsRecord r;
            r.block = simulator::block_from(field(rec, "block").get<std::string>());
            r.projection = field(rec, "projection").get<std::string>();
            r.setting = setting_from(field(rec, "setting"));
            r.detector_pair = simulator::detector_pair_from(field(rec, "detector_pair").get<std::string>());
            r.duration_s = number(rec, "duration_s");
            const json& counts = field(rec, "counts");
            if (!counts.is_number_unsigned()) fail(ErrorCode::ParseError, "'counts' must be a nonnegative integer");
            r.counts = counts.get<std::uint64_t>();
            r.validate();
            s.records.push_back(std::move(r));
        }
        return s;
    });
}

std::string reconstruction_to_json(const ReconstructionFile& r) {
    json j = matrix_fields(r.state);
    j["metadata"] = metadata_to_json(r.meta, r.blocks, r.fidelity_to_ideal);
    return dump(j);
}

ReconstructionFile reconstruction_from_json(std::string_view text) {
    const json j = parse(text);
    return guarded("reconstruction file", [&] {
        const json& m = field(j, "metadata");
        reconstruction::Metadata meta;
        meta.calibration = {number(m, "efficiency_ratio"), boolean(m, "efficiency_ratio_defaulted")};
        meta.ml_iterations = field(m, "ml_iterations").get<std::size_t>();
        meta.log_likelihood = number(m, "log_likelihood");
        meta.visibility_c = number(m, "visibility_c");
        meta.visibility_d = number(m, "visibility_d");
        meta.normalization = number(m, "normalization");
        meta.repair = {boolean(m, "clamped_c"), boolean(m, "clamped_d"), number(m, "repair_scale")};
        DensityMatrix state = matrix_from(j);
        reconstruction::BlockEstimate blocks;
        blocks.m_a = number(m, "m_a");
        blocks.m_c = number(m, "m_c_estimate");
        blocks.m_d = number(m, "m_d_estimate");
        if (state.dim() == 3) {
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t k = 0; k < 2; ++k) blocks.m_b(i, k) = state(i + 1, k + 1);
        }
        return ReconstructionFile{std::move(state), std::move(blocks), meta, number(m, "fidelity_to_ideal")};
    });
}

std::string fit_to_json(const analysis::FitResult& f) {
    json j = json::object();
    j["p"] = round_to_9(f.p);
    j["x"] = round_to_9(f.x);
    j["r"] = round_to_9(f.r);
    j["q"] = round_to_9(f.q);
    j["bures"] = round_to_9(f.bures);
    j["fidelity_in"] = round_to_9(f.fidelity_in);
    j["fidelity_out"] = round_to_9(f.fidelity_out);
    j["seed"] = f.seed;
    j["evaluations"] = f.evaluations;
    return dump(j);
}

analysis::FitResult fit_from_json(std::string_view text) {
    const json j = parse(text);
    return guarded("fit result", [&] {
        analysis::FitResult f;
        f.p = number(j, "p");
        f.x = number(j, "x");
        f.r = number(j, "r");
        f.q = number(j, "q");
        f.bures = number(j, "bures");
        f.fidelity_in = number(j, "fidelity_in");
        f.fidelity_out = number(j, "fidelity_out");
        f.seed = field(j, "seed").get<std::uint64_t>();
        f.evaluations = field(j, "evaluations").get<std::size_t>();
        return f;
    });
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto trim = [](std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) return std::string_view{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorCode::ParseError, "config line " + std::to_string(line_no) + " is not 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) fail(ErrorCode::ParseError, "config line " + std::to_string(line_no) + " has an empty key");
        out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round_to_9(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

}  // namespace ncpot::io

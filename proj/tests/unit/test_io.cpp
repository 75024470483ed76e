#include <gtest/gtest.h>

#include <filesystem>

#include "error_code.hpp"
#include "ncpot/io.hpp"
#include "oracles.hpp"

using namespace ncpot;

TEST(DensityMatrixJson, RoundTripIsLossless) {
    oracle::Gen gen(81);
    for (int n = 1; n <= 4; ++n) {
        const auto rho = oracle::density(gen.density(n));
        const std::string text = io::density_matrix_to_json(rho);
        const auto back = io::density_matrix_from_json(text);
        EXPECT_EQ(back, rho);
        EXPECT_EQ(io::density_matrix_to_json(back), text);
    }
}

TEST(DensityMatrixJson, Errors) {
    EXPECT_EQ(code_of([] { io::density_matrix_from_json("{"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::density_matrix_from_json(R"({"dim":2,"re":[[1,0]],"im":[[0,0],[0,0]]})"); }),
              ErrorCode::DimMismatch);
    EXPECT_EQ(code_of([] { io::density_matrix_from_json(R"({"dim":17,"re":[],"im":[]})"); }), ErrorCode::DimOverflow);
    EXPECT_EQ(code_of([] { io::density_matrix_from_json(R"({"dim":1,"re":[[2]],"im":[[0]]})"); }),
              ErrorCode::InvalidState);
    EXPECT_EQ(code_of([] { io::density_matrix_from_json(R"({"dim":1,"re":[["a"]],"im":[[0]]})"); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::density_matrix_from_json(R"({"dim":1,"im":[[0]]})"); }), ErrorCode::ParseError);
    EXPECT_NO_THROW(io::density_matrix_from_json(R"({"dim":1,"re":[[1]],"im":[[0]],"note":"x"})"));
}

TEST(ScheduleJson, RoundTrip) {
    const auto s = simulator::simulate_schedule({0.3, {0.2, -0.1}}, BeamSplitter::make(0.6, 0.8, 0.05),
                                                simulator::DetectorModel{}, 12345678901234ull);
    const std::string text = io::schedule_to_json(s);
    const auto back = io::schedule_from_json(text);
    EXPECT_EQ(back.records, s.records);
    EXPECT_EQ(back.header.seed, s.header.seed);
    EXPECT_EQ(back.header.detector, s.header.detector);
    EXPECT_EQ(back.header.source.x, s.header.source.x);
    EXPECT_EQ(io::schedule_to_json(back), text);
}

TEST(ScheduleJson, Errors) {
    EXPECT_EQ(code_of([] { io::schedule_from_json("[]"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::schedule_from_json(R"([{"header":{"schedule_version":9}}])"); }), ErrorCode::ParseError);
    auto s = simulator::simulate_schedule({0.3, 0.2}, BeamSplitter::balanced(), simulator::DetectorModel{}, 1);
    std::string text = io::schedule_to_json(s);
    text.replace(text.find("\"M_B\""), 5, "\"M_Z\"");
    EXPECT_EQ(code_of([&] { io::schedule_from_json(text); }), ErrorCode::ParseError);
}

TEST(ReconstructionJson, RoundTrip) {
    const auto s = simulator::simulate_schedule({0.7, 0.2}, BeamSplitter::balanced(), simulator::DetectorModel{}, 3);
    const auto r = reconstruction::reconstruct(s.records);
    const std::string text = io::reconstruction_to_json({r.qutrit, r.blocks, r.meta, 0.98});
    const auto back = io::reconstruction_from_json(text);
    EXPECT_EQ(back.state, r.qutrit);
    EXPECT_EQ(io::reconstruction_to_json(back), text);
    // The metadata does not stop the file from being read as a plain density matrix.
    EXPECT_EQ(io::density_matrix_from_json(text), r.qutrit);
}

TEST(FitJson, RoundTrip) {
    analysis::FitResult f{0.123456789123, 0.2, 0.7, 0.01, 0.004, 0.99, 0.98, 42, 1000};
    const std::string text = io::fit_to_json(f);
    EXPECT_NE(text.find("0.123456789"), std::string::npos);
    EXPECT_EQ(text.find("0.123456789123"), std::string::npos);
    EXPECT_EQ(io::fit_to_json(io::fit_from_json(text)), text);
}

TEST(KeyValues, Parse) {
    const auto kv = io::parse_key_values("# comment\nseed = 4\n\n  grid.re_min=-2  \n");
    ASSERT_EQ(kv.size(), 2u);
    EXPECT_EQ(kv[0].first, "seed");
    EXPECT_EQ(kv[0].second, "4");
    EXPECT_EQ(kv[1].second, "-2");
    EXPECT_EQ(code_of([] { io::parse_key_values("novalue\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::parse_key_values(" = 3\n"); }), ErrorCode::ParseError);
}

TEST(Numbers, NineDigits) {
    EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(io::format_number(1.0), "1");
    EXPECT_EQ(io::round_to_9(1.0 / 3.0), 0.333333333);
}

TEST(Files, IoErrors) {
    EXPECT_EQ(code_of([] { io::read_file("/nonexistent/dir/file.json"); }), ErrorCode::IoError);
    EXPECT_EQ(code_of([] { io::write_file("/nonexistent/dir/file.json", "x"); }), ErrorCode::IoError);
    const auto path = std::filesystem::temp_directory_path() / "ncpot_io_test.txt";
    io::write_file(path, "hello\n");
    EXPECT_EQ(io::read_file(path), "hello\n");
    std::filesystem::remove(path);
}

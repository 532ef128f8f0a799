#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "blocksplit/bounds.hpp"
#include "blocksplit/cli.hpp"
#include "blocksplit/errors.hpp"
#include "blocksplit/verify.hpp"

using namespace blocksplit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "blocksplit_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("parse_range") {
    CHECK(parse_range("1:5") == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(parse_range("240:1200:240") == std::vector<int>{240, 480, 720, 960, 1200});
    CHECK(parse_range("3:3") == std::vector<int>{3});
    CHECK(parse_range("1:10:4") == std::vector<int>{1, 5, 9});
    CHECK_THROWS_AS(parse_range("5"), ParameterError);
    CHECK_THROWS_AS(parse_range("5:1"), ParameterError);
    CHECK_THROWS_AS(parse_range("0:4"), ParameterError);
    CHECK_THROWS_AS(parse_range("1:4:0"), ParameterError);
    CHECK_THROWS_AS(parse_range("a:4"), ParameterError);
    CHECK_THROWS_AS(parse_range("1:2:3:4"), ParameterError);
}

TEST_CASE("format_number uses ten significant digits") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(7.0 / 9.0) == "0.7777777778");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.6939596862123) == "0.6939596862");
}

TEST_CASE("simulate csv schema and determinism") {
    SweepSpec spec;
    spec.strategy = StrategyKind::deferred_even;
    spec.block_size = 240;
    spec.r_values = {80, 240};
    spec.total_insertions = 20000;
    spec.runs = 3;
    const auto path = scratch("sim.csv");
    const auto csv = cmd_simulate(spec, path.string());
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "hammer_h,mean_fullness,min_fullness,max_fullness");
    CHECK(lines[1].rfind("80,", 0) == 0);
    CHECK(lines[2].rfind("240,", 0) == 0);
    CHECK(read_text_file(path.string()) == csv);

    spec.threads = 1;
    CHECK(cmd_simulate(spec, "-") == csv);
    spec.threads = 3;
    CHECK(cmd_simulate(spec, "") == csv);

    const auto rows = parse_simulate_csv(csv);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].hammer_h == 240);
    CHECK(rows[1].mean_fullness > 0.98);
    CHECK(rows[0].min_fullness <= rows[0].mean_fullness);
    CHECK(rows[0].mean_fullness <= rows[0].max_fullness);
}

TEST_CASE("simulate into an unwritable path") {
    SweepSpec spec;
    spec.r_values = {10};
    spec.total_insertions = 1000;
    spec.runs = 1;
    CHECK_THROWS_AS(cmd_simulate(spec, "/nonexistent-dir/out.csv"), IoError);
}

TEST_CASE("analyze cells") {
    const auto yao = lines_of(cmd_analyze(239, {1, 90}, "-"));
    REQUIRE(yao.size() == 3);
    CHECK(yao[0] == "r,predicted_fullness,table_bound,deferred_closed_form");
    const double h = (harmonic(240) - harmonic(120)) * 240.0 / 239.0;
    CHECK(yao[1].rfind("1," + format_number(h) + ",", 0) == 0);
    const auto row90 = yao[2];
    const auto first = row90.find(',');
    const auto second = row90.find(',', first + 1);
    CHECK(std::stod(row90.substr(first + 1, second - first - 1)) >= 7.0 / 12.0);

    const auto even_b = lines_of(cmd_analyze(240, {80, 81}, "-"));
    CHECK(even_b[1] == "80,,0.5833333333,0.7777777778");
    CHECK(even_b[2] == "81,,0.5833333333,");
    CHECK_THROWS_AS(cmd_analyze(240, {}, "-"), ParameterError);
}

TEST_CASE("simulate csv parse errors name the line") {
    const auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_simulate_csv(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("") == 1);
    CHECK(line_of("r,mean\n1,2\n") == 1);
    CHECK(line_of("hammer_h,mean_fullness,min_fullness,max_fullness\n") == 2);
    CHECK(line_of("hammer_h,mean_fullness,min_fullness,max_fullness\n1,0.5,0.4,0.6\n2,0.5,0.4\n") == 3);
    CHECK(line_of("hammer_h,mean_fullness,min_fullness,max_fullness\n1,0.5,x,0.6\n") == 2);
    CHECK(line_of("hammer_h,mean_fullness,min_fullness,max_fullness\n1,0.5,0.4,0.6\n") == 0);
}

TEST_CASE("plot writes nothing when an input is bad") {
    const auto good = scratch("good.csv");
    const auto empty = scratch("empty.csv");
    const auto out = scratch("plot.svg");
    write_text_file(good.string(), "hammer_h,mean_fullness,min_fullness,max_fullness\n120,0.7,0.6,0.8\n");
    write_text_file(empty.string(), "");
    fs::remove(out);
    CHECK_THROWS_AS(cmd_plot({good.string(), empty.string()}, 240, Overlay::none, out.string()),
                    ParseError);
    CHECK_FALSE(fs::exists(out));
    CHECK_THROWS_AS(cmd_plot({scratch("missing.csv").string()}, 240, Overlay::none, out.string()),
                    IoError);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("plot svg content") {
    const auto path = scratch("series.csv");
    write_text_file(path.string(),
                    "hammer_h,mean_fullness,min_fullness,max_fullness\n"
                    "60,0.70,0.65,0.75\n120,0.55,0.50,0.60\n240,0.99,0.98,1\n");
    const auto out = scratch("series.svg");
    const auto svg = cmd_plot({path.string()}, 240, Overlay::lemma61, out.string());
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("series.csv") != std::string::npos);
    CHECK(svg.find("#e06666") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(read_text_file(out.string()) == svg);

    const auto plain = render_svg({PlotSeries{"x", parse_simulate_csv(read_text_file(path.string()))}},
                                  240, Overlay::none);
    CHECK(plain.find("#e06666") == std::string::npos);
    CHECK(parse_overlay("table1") == Overlay::table1);
    CHECK_THROWS_AS(parse_overlay("blue"), ParameterError);
}

TEST_CASE("unreadable and unwritable files") {
    CHECK_THROWS_AS(read_text_file("/nonexistent-dir/in.csv"), IoError);
    CHECK_THROWS_AS(write_text_file("/nonexistent-dir/out.csv", "x"), IoError);
}

TEST_CASE("verify reports a corrupted matrix") {
    VerifyOptions clean;
    const auto ok = run_criterion(1, clean);
    CHECK(ok.passed);
    CHECK(format_check(ok).rfind("PASS criterion  1 ", 0) == 0);

    VerifyOptions bad;
    bad.mutate = [](TransitionMatrix& a) {
        if (a.dim() > 2) a.at(1, 2) += 1;
    };
    const auto one = run_criterion(1, bad);
    CHECK_FALSE(one.passed);
    CHECK(format_check(one).rfind("FAIL criterion  1 ", 0) == 0);
    CHECK_FALSE(run_criterion(2, bad).passed);

    std::ostringstream report;
    CHECK(cmd_verify(VerifyLevel::quick, report, bad) == 1);
    CHECK(report.str().find("FAIL criterion  1") != std::string::npos);
    CHECK_THROWS_AS(run_criterion(15), ParameterError);
}

TEST_CASE("quick verify passes") {
    std::ostringstream report;
    CHECK(cmd_verify(VerifyLevel::quick, report) == 0);
    CHECK(report.str().find("FAIL") == std::string::npos);
}

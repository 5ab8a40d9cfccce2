#include "polariton/io/config.hpp"
#include "polariton/io/csv.hpp"
#include "polariton/io/report.hpp"
#include "polariton/io/svg.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace polariton;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("polariton_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

io::RunConfig config_from(const std::string &text, fs::path base = {})
{
    io::RunConfig cfg;
    cfg.doc = io::json::parse(text, nullptr, true, true);
    cfg.task = cfg.doc.value("task", std::string());
    cfg.base_dir = std::move(base);
    return cfg;
}

} // namespace

TEST_CASE("doubles are written with round-trip precision", "[io]")
{
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(1e15) == "1000000000000000");
    CHECK(std::stod(io::format_double(constants::eps0)) == constants::eps0);
}

TEST_CASE("csv layout and round trip", "[io]")
{
    io::CsvTable t;
    t.comments = {"units: SI"};
    t.columns = {"omega_rad_s", "m", "label"};
    t.add_row({1.5, 2, "x"});
    CHECK(io::to_csv(t) == "# units: SI\nomega_rad_s,m,label\n1.5,2,x\n");
    CHECK(testing::error_code_of([&] { t.add_row({1.0}); }) == Errc::invalid_argument);

    const fs::path dir = scratch("csv");
    io::CsvTable n;
    n.comments = {"grid"};
    n.columns = {"a", "b"};
    n.add_row({1.0 / 3.0, -2e-300});
    n.add_row({4.0, 5.0});
    io::write_csv(dir / "sub" / "n.csv", n);
    const auto rows = io::read_numeric_csv(dir / "sub" / "n.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == 1.0 / 3.0);
    CHECK(rows[0][1] == -2e-300);

    std::ofstream(dir / "bad.csv") << "a,b\n1,2\n3,x\n";
    CHECK(testing::error_code_of([&] { (void)io::read_numeric_csv(dir / "bad.csv"); }) == Errc::config_error);
}

TEST_CASE("model parsing", "[io][config]")
{
    const auto cfg = config_from(R"({
        // comments are allowed
        "models": {"glass": {"type": "sellmeier", "terms": [{"B": 1.0, "lambda2_m2": 1e-14}],
                             "window_rad_s": [1e14, 5e15]},
                   "bigger": {"type": "ref", "name": "glass", "scale": 1.1}},
        "medium": "bigger"
    })");
    const auto m = io::parse_medium(cfg);
    CHECK_THAT(m.index(2e15), WithinRel(1.1 * 1.41823906412898691, 1e-14));

    auto code = [](const std::string &text) {
        return testing::error_code_of([&] { (void)io::parse_medium(config_from(text)); });
    };
    CHECK(code(R"({"medium": {"type": "constant", "n": 1.5}})") == std::nullopt);
    CHECK(code(R"({"medium": {"type": "nonsense"}})") == Errc::config_error);
    CHECK(code(R"({"medium": {"type": "constant"}})") == Errc::config_error);
    CHECK(code(R"({"medium": {"type": "constant", "n": -1}})") == Errc::config_error);
    CHECK(code(R"({"medium": {"type": "sellmeier", "terms": [{"B": 1, "lambda2_m2": 1e-14}]}})") == Errc::config_error);
    CHECK(code(R"({"medium": "missing"})") == Errc::config_error);
    CHECK(code(R"({"models": {"a": {"type": "ref", "name": "b"}, "b": "a"}, "medium": "a"})") == Errc::config_error);
    CHECK(code(R"({})") == Errc::config_error);
    CHECK(code(R"({"medium": {"type": "tabulated", "samples": [[1e14, 1.5], [2e14, 1.5], [3e14, 1.5], [4e14, 1.5]]}})") ==
          std::nullopt);
}

TEST_CASE("geometry parsing", "[io][config]")
{
    const auto p = io::parse_profile(config_from(R"({
        "geometry": {"type": "profile", "width_m": 10e-6, "points": 1001,
                     "background": {"type": "constant", "n": 1.45},
                     "regions": [{"x_min_m": -1e-6, "x_max_m": 1e-6, "model": {"type": "constant", "n": 1.5}}]}
    })"));
    CHECK(p.grid().nx == 999);
    CHECK(p.max_index(1e15) == 1.5);

    const auto s = io::parse_slab(config_from(R"({"medium": {"type": "constant", "n": 1.5},
                                                  "geometry": {"type": "slab", "thickness_m": 5e-6}})"));
    CHECK(s.thickness == 5e-6);
    CHECK(testing::error_code_of([] {
              (void)io::parse_slab(config_from(R"({"medium": {"type": "constant", "n": 1.5},
                                                   "geometry": {"type": "slab", "thickness_m": -5e-6}})"));
          }) == Errc::config_error);

    // Raster: a single column of index values at the reference frequency, shaped by the Sellmeier model.
    const fs::path dir = scratch("raster");
    {
        std::ofstream f(dir / "n.csv");
        f << "# index values\n";
        for (int i = 0; i < 100; ++i)
            f << (i >= 40 && i < 60 ? 1.5 : 1.45) << "\n";
    }
    const auto r = io::parse_profile(config_from(R"({
        "geometry": {"type": "raster", "file": "n.csv", "spacing_m": 5e-8, "reference_omega_rad_s": 2e15,
                     "shape": {"type": "sellmeier", "terms": [{"B": 1.0, "lambda2_m2": 1e-14}],
                               "window_rad_s": [1e14, 5e15]}}
    })", dir));
    CHECK(r.grid().nx == 100);
    CHECK(r.models().size() == 2);
    CHECK_THAT(r.max_index(2e15), WithinRel(1.5, 1e-14));
    CHECK_FALSE(r.is_dispersionless());
}

TEST_CASE("frequency grid, spectrum and band parsing", "[io][config]")
{
    const auto g = io::parse_frequency_grid(io::json::parse(R"({"start_rad_s": 1e14, "stop_rad_s": 2e14, "count": 11})"), "g");
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 1e14);
    CHECK(g.back() == 2e14);
    CHECK_THAT(g[5], WithinRel(1.5e14, 1e-15));
    CHECK(io::parse_frequency_grid(io::json::parse(R"({"values_rad_s": [3, 4]})"), "g").size() == 2);
    CHECK(testing::error_code_of([] {
              (void)io::parse_frequency_grid(io::json::parse(R"({"start_rad_s": 2, "stop_rad_s": 1, "count": 3})"), "g");
          }) == Errc::config_error);

    const auto s = io::parse_spectrum(config_from(
        R"({"spectrum": {"type": "gaussian", "center_rad_s": 2e15, "width_rad_s": 1e14, "peak_J_s_m3": 3.0, "count": 11}})"));
    REQUIRE(s.samples.size() == 11);
    CHECK(s.samples[5].first == 2e15);
    CHECK(s.samples[5].second == 3.0);
    CHECK_THAT(s.samples.front().first, WithinRel(1.5e15, 1e-15));

    const auto b = io::parse_bands(io::json::parse(R"({"bands": [{"label": 1, "center_rad_s": 1e15, "range_rad_s": [9e14, 1.1e15]}]})"));
    REQUIRE(b.size() == 1);
    CHECK(b[0].contains(1.05e15));
    CHECK(testing::error_code_of([] {
              (void)io::parse_bands(io::json::parse(R"({"bands": [{"label": 1, "center_rad_s": 2e15, "range_rad_s": [9e14, 1.1e15]}]})"));
          }) == Errc::config_error);
}

TEST_CASE("config files", "[io][config]")
{
    const fs::path dir = scratch("load");
    std::ofstream(dir / "a.json") << "{\"task\": \"energy\", // trailing comment\n \"x\": 1}";
    const auto cfg = io::load_config(dir / "a.json");
    CHECK(cfg.task == "energy");
    CHECK(cfg.base_dir == dir);
    std::ofstream(dir / "bad.json") << "{\"task\": ";
    CHECK(testing::error_code_of([&] { (void)io::load_config(dir / "bad.json"); }) == Errc::config_error);
    CHECK(testing::error_code_of([&] { (void)io::load_config(dir / "none.json"); }) == Errc::config_error);
}

TEST_CASE("svg writer and report text", "[io]")
{
    const std::string svg = io::svg_line_plot({{"m = 0", {{0.0, 0.0}, {1.0, 2.0}}, true}, {"m = 1", {{0.5, 0.1}}, false}},
                                              "omega", "beta");
    CHECK_THAT(svg, ContainsSubstring("<svg"));
    CHECK_THAT(svg, ContainsSubstring("stroke-dasharray"));
    CHECK_THAT(svg, ContainsSubstring("<title>m = 1</title>"));

    io::Report r("demo");
    r.bound("residual_small", 1e-12, 1e-10);
    r.require("ordered", false, 3.0);
    r.info("note");
    CHECK_FALSE(r.all_pass());
    CHECK(r.failures() == std::vector<std::string>{"ordered"});
    const std::string text = r.text("done");
    CHECK_THAT(text, ContainsSubstring("PASS  residual_small  measured 1.000e-12  tolerance 1.0e-10"));
    CHECK_THAT(text, ContainsSubstring("FAIL  ordered"));
    CHECK_THAT(text, ContainsSubstring("result: done"));
}

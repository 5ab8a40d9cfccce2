#include "polariton/app.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polariton;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

const fs::path configs = fs::path(POLARITON_SOURCE_DIR) / "configs";

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("polariton_test_app_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

io::RunConfig inline_config(const std::string &text)
{
    io::RunConfig cfg;
    cfg.doc = io::json::parse(text, nullptr, true, true);
    cfg.task = cfg.doc.value("task", std::string());
    return cfg;
}

int run_quiet(const io::RunConfig &cfg, const fs::path &out)
{
    std::ostringstream log;
    return app::run(cfg, out, log);
}

} // namespace

TEST_CASE("every shipped config runs green", "[app]")
{
    const std::map<std::string, std::vector<std::string>> artifacts{
        {"slab_curves.json", {"fig1.csv", "fig1.svg"}},
        {"flux_check.json", {"flux.csv"}},
        {"dispersion_vacuum.json", {"dispersion.csv"}},
        {"dispersion_sellmeier.json", {"dispersion.csv"}},
        {"energy_sellmeier.json", {"energy.csv", "energy_summary.csv"}},
        {"fd_modes_slab.json", {"fd_modes.csv", "fd_eigenvalues.csv"}},
        {"quantize_slab.json", {"normalized_modes.csv", "normalized_modes.json", "magnetic_modes.csv", "coefficients.csv"}},
        {"projector_demo.json", {"projector.csv", "overlaps.csv"}},
        {"continuum_check.json", {"continuum.csv"}}};
    for (const auto &[file, outputs] : artifacts) {
        INFO(file);
        const auto cfg = io::load_config(configs / file);
        CHECK(app::validate(cfg).empty());
        const fs::path out = scratch(fs::path(file).stem().string());
        CHECK(run_quiet(cfg, out) == app::exit_ok);
        CHECK(fs::exists(out / "report.txt"));
        CHECK_THAT(slurp(out / "report.txt"), ContainsSubstring("result: PASS"));
        for (const auto &a : outputs)
            CHECK(fs::exists(out / a));
    }
}

TEST_CASE("artifacts are byte-identical across runs", "[app]")
{
    const auto cfg = io::load_config(configs / "slab_curves.json");
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(run_quiet(cfg, a) == 0);
    REQUIRE(run_quiet(cfg, b) == 0);
    CHECK(slurp(a / "fig1.csv") == slurp(b / "fig1.csv"));
    CHECK(slurp(a / "fig1.svg") == slurp(b / "fig1.svg"));
}

TEST_CASE("figure curves come out in the expected layout", "[app]")
{
    const fs::path out = scratch("fig1");
    REQUIRE(run_quiet(io::load_config(configs / "slab_curves.json"), out) == 0);
    const auto rows = io::read_numeric_csv(out / "fig1.csv");
    std::map<int, std::size_t> per_m;
    for (const auto &r : rows)
        ++per_m[static_cast<int>(r[2])];
    CHECK(per_m.size() == 5);
    CHECK(per_m[0] == 1000);
    CHECK(per_m[0] > per_m[1]);
    CHECK(per_m[3] > per_m[4]);
}

TEST_CASE("vacuum dispersion report shows unit ratio", "[app]")
{
    const fs::path out = scratch("vac");
    REQUIRE(run_quiet(io::load_config(configs / "dispersion_vacuum.json"), out) == 0);
    const std::string report = slurp(out / "report.txt");
    CHECK_THAT(report, ContainsSubstring("R range: [1, 1]"));
    CHECK_THAT(report, ContainsSubstring("PASS  dispersionless_v_g_equals_v_p"));
    const auto rows = io::read_numeric_csv(out / "dispersion.csv");
    for (const auto &r : rows) {
        CHECK(r[5] == 1.0);
        CHECK(r[6] == constants::c);
        CHECK(r[7] == constants::c);
    }
}

TEST_CASE("validation diagnostics", "[app]")
{
    // Spectrum outside the window: the offending range is named.
    auto d = app::validate(inline_config(R"({"task": "energy",
        "medium": {"type": "sellmeier", "terms": [{"B": 1, "lambda2_m2": 1e-14}], "window_rad_s": [1e14, 5e15]},
        "spectrum": {"type": "gaussian", "center_rad_s": 4.75e15, "width_rad_s": 1e14, "peak_J_s_m3": 1, "count": 11}})"));
    REQUIRE(d.size() == 1);
    CHECK(d[0].where == "spectrum");
    CHECK_THAT(d[0].message, ContainsSubstring("[5.05e+15, 5.25e+15] rad/s"));

    // Non-positive slab thickness.
    d = app::validate(inline_config(R"({"task": "slab-curves", "medium": {"type": "constant", "n": 1.5},
        "geometry": {"type": "slab", "thickness_m": 0}, "frequency_grid": {"values_rad_s": [1e15]}})"));
    REQUIRE(d.size() == 1);
    CHECK_THAT(d[0].message, ContainsSubstring("D > 0"));

    // Curl tasks need lambda/50 resolution.
    d = app::validate(inline_config(R"({"task": "quantize", "medium": {"type": "constant", "n": 1.5},
        "geometry": {"type": "slab", "thickness_m": 5e-6, "points": 101}, "omega_rad_s": 1e15, "magnetic": true})"));
    REQUIRE(d.size() == 1);
    CHECK_THAT(d[0].message, ContainsSubstring("lambda/50"));

    d = app::validate(inline_config(R"({"task": "teleport"})"));
    REQUIRE(d.size() == 1);
    CHECK(d[0].where == "task");

    CHECK(app::validate(io::load_config(configs / "flux_check.json")).empty());
}

TEST_CASE("exit codes", "[app]")
{
    const fs::path bad = scratch("bad");
    CHECK(run_quiet(inline_config(R"({"task": "energy", "medium": {"type": "constant", "n": 1.5}})"), bad) ==
          app::exit_config_error);
    CHECK_THAT(slurp(bad / "report.txt"), ContainsSubstring("result: ConfigError"));

    // Nothing is guided far below the fundamental cutoff: a numerical failure naming the cause.
    const fs::path num = scratch("num");
    CHECK(run_quiet(inline_config(R"({"task": "fd-modes", "medium": {"type": "constant", "n": 1.5},
        "geometry": {"type": "slab", "thickness_m": 5e-6, "points": 501}, "omega_rad_s": 1e13})"), num) ==
          app::exit_numerical_failure);
    CHECK_THAT(slurp(num / "report.txt"), ContainsSubstring("NoGuidedModes"));

    // A failing invariant is named in the result line.
    const fs::path inv = scratch("inv");
    CHECK(run_quiet(inline_config(R"({"task": "slab-curves", "medium": {"type": "constant", "n": 1.5},
        "geometry": {"type": "slab", "thickness_m": 5e-6}, "modes": {"m_max": 2, "merge_ratio_min": 0.999},
        "frequency_grid": {"start_rad_s": 1e12, "stop_rad_s": 1e15, "count": 100}})"), inv) ==
          app::exit_numerical_failure);
    CHECK_THAT(slurp(inv / "report.txt"), ContainsSubstring("failed: beta_over_bulk_at_top_frequency_exceeds_0.999"));
}

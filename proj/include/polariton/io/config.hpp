#pragma once

// JSON run configurations. Every physical quantity carries an SI unit suffix in its key
// (..._rad_s, ..._m, ..._m2, ..._m3). Parsing failures throw Error(Errc::config_error).

#include "polariton/dispersion.hpp"
#include "polariton/energy.hpp"
#include "polariton/error.hpp"
#include "polariton/io/csv.hpp"
#include "polariton/profile.hpp"
#include "polariton/quantization.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace polariton::io {

using json = nlohmann::json;

inline const std::vector<std::string> &task_names()
{
    static const std::vector<std::string> names{"dispersion",     "energy",         "slab-curves",
                                                "fd-modes",       "quantize",       "flux-check",
                                                "projector-demo", "continuum-check"};
    return names;
}

struct RunConfig
{
    std::string task;
    json doc;
    std::filesystem::path base_dir;  // relative file references resolve against the config's directory
};

[[noreturn]] inline void config_fail(const std::string &where, const std::string &what)
{
    fail(Errc::config_error, where + ": " + what);
}

inline const json &require(const json &j, const char *key, const std::string &where)
{
    if (!j.is_object() || !j.contains(key))
        config_fail(where, std::string("missing key '") + key + "'");
    return j.at(key);
}

inline double get_number(const json &j, const char *key, const std::string &where)
{
    const json &v = require(j, key, where);
    if (!v.is_number())
        config_fail(where, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

inline double get_number_or(const json &j, const char *key, double fallback, const std::string &where)
{
    return (j.is_object() && j.contains(key)) ? get_number(j, key, where) : fallback;
}

inline long get_integer(const json &j, const char *key, const std::string &where)
{
    const json &v = require(j, key, where);
    if (!v.is_number_integer())
        config_fail(where, std::string("'") + key + "' must be an integer");
    return v.get<long>();
}

inline long get_integer_or(const json &j, const char *key, long fallback, const std::string &where)
{
    return (j.is_object() && j.contains(key)) ? get_integer(j, key, where) : fallback;
}

inline std::string get_string(const json &j, const char *key, const std::string &where)
{
    const json &v = require(j, key, where);
    if (!v.is_string())
        config_fail(where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

inline FrequencyWindow parse_window(const json &j, const std::string &where)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        config_fail(where, "'window_rad_s' must be [lo, hi]");
    return {j[0].get<double>(), j[1].get<double>()};
}

using NamedModels = std::map<std::string, DispersionModel>;

inline DispersionModel parse_model(const json &j, const NamedModels &named, const std::string &where);

inline DispersionModel parse_model_object(const json &j, const NamedModels &named, const std::string &where)
{
    const std::string type = get_string(j, "type", where);
    FrequencyWindow window;
    if (j.contains("window_rad_s"))
        window = parse_window(j.at("window_rad_s"), where);

    DispersionModel model;
    if (type == "constant") {
        model = DispersionModel::constant(get_number(j, "n", where), window);
    } else if (type == "sellmeier") {
        const json &terms = require(j, "terms", where);
        if (!terms.is_array() || terms.empty())
            config_fail(where, "'terms' must be a non-empty array");
        std::vector<SellmeierTerm> t;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string w = where + ".terms[" + std::to_string(i) + "]";
            t.push_back({get_number(terms[i], "B", w), get_number(terms[i], "lambda2_m2", w)});
        }
        if (!j.contains("window_rad_s"))
            config_fail(where, "Sellmeier models need 'window_rad_s'");
        model = DispersionModel::sellmeier(std::move(t), window);
    } else if (type == "tabulated") {
        const json &samples = require(j, "samples", where);
        if (!samples.is_array())
            config_fail(where, "'samples' must be an array of [omega_rad_s, n]");
        std::vector<std::pair<double, double>> s;
        for (const auto &p : samples) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                config_fail(where, "each sample must be [omega_rad_s, n]");
            s.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        model = DispersionModel::tabulated(std::move(s));
    } else if (type == "linear") {
        if (!j.contains("window_rad_s"))
            config_fail(where, "linear models need 'window_rad_s'");
        model = DispersionModel::linear(get_number(j, "n0", where), get_number(j, "omega0_rad_s", where),
                                        get_number(j, "slope_s_rad", where), window);
    } else if (type == "ref") {
        model = parse_model(require(j, "name", where), named, where);
    } else {
        config_fail(where, "unknown model type '" + type + "'");
    }
    if (j.contains("scale"))
        model = model.scaled(get_number(j, "scale", where));
    return model;
}

// A model is either an inline object or the name of an entry in the config's "models" table.
inline DispersionModel parse_model(const json &j, const NamedModels &named, const std::string &where)
{
    if (j.is_string()) {
        const auto it = named.find(j.get<std::string>());
        if (it == named.end())
            config_fail(where, "unknown model reference '" + j.get<std::string>() + "'");
        return it->second;
    }
    if (!j.is_object())
        config_fail(where, "model must be an object or a model name");
    try {
        return parse_model_object(j, named, where);
    } catch (const Error &e) {
        if (e.code() == Errc::config_error)
            throw;
        config_fail(where, e.what());
    }
}

inline NamedModels parse_named_models(const json &doc)
{
    NamedModels named;
    if (!doc.contains("models"))
        return named;
    const json &m = doc.at("models");
    if (!m.is_object())
        config_fail("models", "must be an object of name -> model");
    // Entries may reference each other in any order; resolve depth-first and reject cycles.
    std::set<std::string> visiting;
    std::function<void(const std::string &)> resolve = [&](const std::string &key) {
        if (named.count(key) || !m.contains(key))
            return;
        if (!visiting.insert(key).second)
            config_fail("models." + key, "model references form a cycle");
        const json &entry = m.at(key);
        const json *ref = entry.is_string() ? &entry : nullptr;
        if (entry.is_object() && entry.value("type", "") == "ref" && entry.contains("name"))
            ref = &entry.at("name");
        if (ref && ref->is_string())
            resolve(ref->get<std::string>());
        named.emplace(key, parse_model(entry, named, "models." + key));
        visiting.erase(key);
    };
    for (auto it = m.begin(); it != m.end(); ++it)
        resolve(it.key());
    return named;
}

inline DispersionModel parse_medium(const RunConfig &cfg)
{
    return parse_model(require(cfg.doc, "medium", "config"), parse_named_models(cfg.doc), "medium");
}

inline std::filesystem::path resolve(const RunConfig &cfg, const std::string &file)
{
    const std::filesystem::path p(file);
    return p.is_absolute() ? p : cfg.base_dir / p;
}

// Step-index profile description, or a CSV raster of index values at a reference frequency whose
// dispersion follows a shape model scaled to each raster value.
inline IndexProfile parse_profile(const RunConfig &cfg)
{
    const std::string where = "geometry";
    const json &g = require(cfg.doc, "geometry", "config");
    const std::string type = get_string(g, "type", where);
    const NamedModels named = parse_named_models(cfg.doc);

    try {
        if (type == "profile") {
            const double wx = get_number(g, "width_m", where);
            const auto px = static_cast<std::size_t>(get_integer(g, "points", where));
            const DispersionModel bg = parse_model(require(g, "background", where), named, where + ".background");
            const json regions = g.value("regions", json::array());
            if (g.contains("width_y_m")) {
                const double wy = get_number(g, "width_y_m", where);
                const auto py = static_cast<std::size_t>(get_integer(g, "points_y", where));
                std::vector<Region2D> r;
                for (std::size_t i = 0; i < regions.size(); ++i) {
                    const std::string w = where + ".regions[" + std::to_string(i) + "]";
                    r.push_back({get_number(regions[i], "x_min_m", w), get_number(regions[i], "x_max_m", w),
                                 get_number(regions[i], "y_min_m", w), get_number(regions[i], "y_max_m", w),
                                 parse_model(require(regions[i], "model", w), named, w + ".model")});
                }
                return IndexProfile::layered_2d(wx, wy, px, py, bg, r);
            }
            std::vector<Region1D> r;
            for (std::size_t i = 0; i < regions.size(); ++i) {
                const std::string w = where + ".regions[" + std::to_string(i) + "]";
                r.push_back({get_number(regions[i], "x_min_m", w), get_number(regions[i], "x_max_m", w),
                             parse_model(require(regions[i], "model", w), named, w + ".model")});
            }
            return IndexProfile::layered_1d(wx, px, bg, r);
        }
        if (type == "slab") {
            // Uniform guide between infinite barriers, sampled for the finite-difference solver.
            const double d = get_number(g, "thickness_m", where);
            const auto points = static_cast<std::size_t>(get_integer_or(g, "points", 2001, where));
            return IndexProfile::uniform_1d(d, points, parse_medium(cfg));
        }
        if (type == "raster") {
            const auto rows = read_numeric_csv(resolve(cfg, get_string(g, "file", where)));
            const double h = get_number(g, "spacing_m", where);
            const double omega_ref = get_number(g, "reference_omega_rad_s", where);
            const DispersionModel shape = parse_model(require(g, "shape", where), named, where + ".shape");
            const double n_shape = shape.index(omega_ref);
            if (rows.empty() || rows.front().empty())
                config_fail(where, "raster file is empty");
            const std::size_t ncols = rows.front().size();
            for (const auto &r : rows)
                if (r.size() != ncols)
                    config_fail(where, "raster rows must have equal length");
            // A single row or column is a 1D profile.
            const bool one_d = rows.size() == 1 || ncols == 1;
            TransverseGrid grid;
            grid.h = h;
            grid.nx = one_d ? rows.size() * ncols : ncols;
            grid.ny = one_d ? 1 : rows.size();
            grid.x0 = -0.5 * static_cast<double>(grid.nx + 1) * h + h;
            grid.y0 = one_d ? 0.0 : -0.5 * static_cast<double>(grid.ny + 1) * h + h;
            std::vector<DispersionModel> models;
            std::map<double, std::uint32_t> by_value;
            std::vector<std::uint32_t> map(grid.size());
            for (std::size_t j = 0; j < rows.size(); ++j) {
                for (std::size_t i = 0; i < ncols; ++i) {
                    const double n = rows[j][i];
                    auto it = by_value.find(n);
                    if (it == by_value.end()) {
                        models.push_back(shape.scaled(n / n_shape));
                        it = by_value.emplace(n, static_cast<std::uint32_t>(models.size() - 1)).first;
                    }
                    map[one_d ? j * ncols + i : grid.index(i, j)] = it->second;
                }
            }
            return IndexProfile(grid, std::move(models), std::move(map));
        }
    } catch (const Error &e) {
        if (e.code() == Errc::config_error)
            throw;
        config_fail(where, e.what());
    }
    config_fail(where, "geometry type must be 'profile', 'slab' or 'raster' for this task");
}

inline SlabGuide parse_slab(const RunConfig &cfg)
{
    const json &g = require(cfg.doc, "geometry", "config");
    if (get_string(g, "type", "geometry") != "slab")
        config_fail("geometry", "this task needs a slab geometry");
    const double d = get_number(g, "thickness_m", "geometry");
    if (!(d > 0.0))
        config_fail("geometry", "'thickness_m' must be positive");
    return SlabGuide(d, parse_medium(cfg));
}

// {"start_rad_s", "stop_rad_s", "count"} (uniform, endpoints included) or {"values_rad_s": [...]}.
inline std::vector<double> parse_frequency_grid(const json &j, const std::string &where)
{
    if (j.contains("values_rad_s")) {
        const json &v = j.at("values_rad_s");
        if (!v.is_array() || v.empty())
            config_fail(where, "'values_rad_s' must be a non-empty array");
        std::vector<double> out;
        for (const auto &x : v) {
            if (!x.is_number())
                config_fail(where, "'values_rad_s' entries must be numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }
    const double a = get_number(j, "start_rad_s", where);
    const double b = get_number(j, "stop_rad_s", where);
    const long n = get_integer(j, "count", where);
    if (n < 2 || !(b > a))
        config_fail(where, "need count >= 2 and stop_rad_s > start_rad_s");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

// Gaussian {"center_rad_s", "width_rad_s", "peak_J_s_m3", "count", "span_widths"} or {"file": "..."}.
inline SpectralDensity parse_spectrum(const RunConfig &cfg)
{
    const std::string where = "spectrum";
    const json &s = require(cfg.doc, "spectrum", "config");
    if (s.contains("file"))
        return read_spectrum_csv(resolve(cfg, get_string(s, "file", where)));
    const std::string type = get_string(s, "type", where);
    if (type != "gaussian")
        config_fail(where, "spectrum type must be 'gaussian' or a 'file' reference");
    const double w0 = get_number(s, "center_rad_s", where);
    const double sigma = get_number(s, "width_rad_s", where);
    const double peak = get_number(s, "peak_J_s_m3", where);
    const long n = get_integer_or(s, "count", 401, where);
    const double span = get_number_or(s, "span_widths", 5.0, where);
    if (!(sigma > 0.0) || n < 2 || !(span > 0.0))
        config_fail(where, "need width_rad_s > 0, count >= 2, span_widths > 0");
    SpectralDensity spec;
    for (long i = 0; i < n; ++i) {
        const double t = -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(n - 1);
        const double omega = w0 + t * sigma;
        spec.samples.emplace_back(omega, peak * std::exp(-0.5 * t * t));
    }
    return spec;
}

inline std::vector<BandSpec> parse_bands(const json &doc)
{
    std::vector<BandSpec> bands;
    if (!doc.contains("bands"))
        return bands;
    const json &b = doc.at("bands");
    if (!b.is_array())
        config_fail("bands", "must be an array");
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::string w = "bands[" + std::to_string(i) + "]";
        const json &r = require(b[i], "range_rad_s", w);
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
            config_fail(w, "'range_rad_s' must be [lo, hi]");
        bands.push_back({static_cast<int>(get_integer(b[i], "label", w)), get_number(b[i], "center_rad_s", w),
                         r[0].get<double>(), r[1].get<double>()});
    }
    try {
        validate_bands(bands);
    } catch (const Error &e) {
        config_fail("bands", e.what());
    }
    return bands;
}

inline RunConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        fail(Errc::config_error, "cannot open config " + path.string());
    RunConfig cfg;
    try {
        cfg.doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error &e) {
        fail(Errc::config_error, path.string() + ": " + e.what());
    }
    if (!cfg.doc.is_object())
        fail(Errc::config_error, path.string() + ": top level must be an object");
    cfg.base_dir = path.parent_path();
    if (cfg.doc.contains("task") && cfg.doc.at("task").is_string())
        cfg.task = cfg.doc.at("task").get<std::string>();
    return cfg;
}

} // namespace polariton::io

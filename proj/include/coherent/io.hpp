#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "coherent/dynamics.hpp"
#include "coherent/errors.hpp"
#include "coherent/fock.hpp"
#include "coherent/grid.hpp"
#include "coherent/operators.hpp"
#include "coherent/phase_space.hpp"

namespace coherent::io {

using json = nlohmann::json;

/// 17 significant digits, shortest exponent form; round-trips every double.
inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "NaN";
    }
    if (std::isinf(v)) {
        return v > 0 ? "Infinity" : "-Infinity";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (res.ec != std::errc()) {
        throw IoError("failed to format floating-point value");
    }
    return {buf, res.ptr};
}

namespace detail {

inline void write_json_value(const json& value, std::string& out, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (value.type()) {
    case json::value_t::object: {
        if (value.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        // object_t is an ordered std::map, so keys come out sorted.
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad;
            out += json(it.key()).dump();
            out += ": ";
            write_json_value(it.value(), out, indent, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case json::value_t::array: {
        if (value.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < value.size(); ++k) {
            if (k > 0) {
                out += ",\n";
            }
            out += pad;
            write_json_value(value[k], out, indent, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    case json::value_t::number_float: {
        const double v = value.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
        } else {
            out += format_double(v);
        }
        return;
    }
    default:
        out += value.dump();
        return;
    }
}

} // namespace detail

/// Deterministic JSON text: sorted keys, two-space indent, floats at 17
/// significant digits, trailing newline. Non-finite floats become null.
inline std::string canonical_json(const json& value)
{
    std::string out;
    detail::write_json_value(value, out, 2, 0);
    out += "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    file << content;
    file.flush();
    if (!file) {
        throw IoError("failed writing '" + path + "'");
    }
}

inline void write_wavefunction_csv(std::ostream& os, const WaveFunction& f)
{
    os << "x,re,im\n";
    const Grid& g = *f.grid();
    for (std::size_t j = 0; j < f.size(); ++j) {
        os << format_double(g.x(j)) << ',' << format_double(f[j].real()) << ','
           << format_double(f[j].imag()) << '\n';
    }
}

inline void write_fock_csv(std::ostream& os, const FockVector& v)
{
    os << "n,re,im\n";
    for (std::size_t n = 0; n < v.dim(); ++n) {
        os << n << ',' << format_double(v[n].real()) << ',' << format_double(v[n].imag()) << '\n';
    }
}

inline json fock_json(const FockVector& v)
{
    json rows = json::array();
    for (std::size_t n = 0; n < v.dim(); ++n) {
        rows.push_back({{"n", n}, {"re", v[n].real()}, {"im", v[n].imag()}});
    }
    return rows;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows)
{
    os << "t,mean_x,mean_p,delta_x,delta_p,eigen_residual\n";
    for (const auto& r : rows) {
        os << format_double(r.t) << ',' << format_double(r.mean_x) << ','
           << format_double(r.mean_p) << ',' << format_double(r.delta_x) << ','
           << format_double(r.delta_p) << ',' << format_double(r.eigen_residual) << '\n';
    }
}

inline json trace_json(const std::vector<TraceRow>& rows)
{
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"t", r.t},
                       {"mean_x", r.mean_x},
                       {"mean_p", r.mean_p},
                       {"delta_x", r.delta_x},
                       {"delta_p", r.delta_p},
                       {"eigen_residual", r.eigen_residual}});
    }
    return out;
}

inline json grid_json(const Grid& g)
{
    return {{"n_points", g.size()}, {"x_min", g.x_min()}, {"x_max", g.x_max()}, {"dx", g.dx()}};
}

/// Flat object: the seven moment fields plus grid metadata.
inline json moments_json(const MomentReport& m, const Grid& g)
{
    json out = grid_json(g);
    out["mean_x"] = m.mean_x;
    out["mean_p"] = m.mean_p;
    out["mean_x2"] = m.mean_x2;
    out["mean_p2"] = m.mean_p2;
    out["delta_x"] = m.delta_x;
    out["delta_p"] = m.delta_p;
    out["sym_covariance"] = m.sym_covariance;
    return out;
}

inline void write_husimi_csv(std::ostream& os, const HusimiMap& map)
{
    os << "x,p,rho_h\n";
    const auto& lat = map.lattice;
    for (std::size_t i = 0; i < lat.n_x(); ++i) {
        for (std::size_t j = 0; j < lat.n_p(); ++j) {
            os << format_double(lat.x_axis()[i]) << ',' << format_double(lat.p_axis()[j]) << ','
               << format_double(map(i, j)) << '\n';
        }
    }
}

inline json husimi_json(const HusimiMap& map)
{
    json rows = json::array();
    const auto& lat = map.lattice;
    for (std::size_t i = 0; i < lat.n_x(); ++i) {
        for (std::size_t j = 0; j < lat.n_p(); ++j) {
            rows.push_back({{"x", lat.x_axis()[i]}, {"p", lat.p_axis()[j]}, {"rho_h", map(i, j)}});
        }
    }
    return rows;
}

/// Mass tolerance used by the sidecar normalization check.
inline constexpr double husimi_mass_tolerance = 1e-4;

inline json husimi_sidecar_json(const HusimiMap& map)
{
    const auto& lat = map.lattice;
    const auto& c = lat.constants();
    const double mass = husimi_mass(map);
    const double expected = 2.0 * c.hbar;
    const double deviation = std::abs(mass - expected);
    return {
        {"lattice",
         {{"n_x", lat.n_x()},
          {"n_p", lat.n_p()},
          {"x_min", lat.x_axis().front()},
          {"x_max", lat.x_axis().back()},
          {"p_min", lat.p_axis().front()},
          {"p_max", lat.p_axis().back()},
          {"dx", lat.dx()},
          {"dp", lat.dp()},
          {"alpha_cell_measure", lat.cell_measure()},
          {"order", "row-major in x"}}},
        {"constants", {{"hbar", c.hbar}, {"mass", c.mass}, {"lambda", c.lambda}}},
        {"normalization",
         {{"mass", mass},
          {"expected", expected},
          {"deviation", deviation},
          {"tolerance", husimi_mass_tolerance},
          {"pass", deviation <= husimi_mass_tolerance}}},
        {"boundary_warning", map.boundary_warning},
    };
}

} // namespace coherent::io

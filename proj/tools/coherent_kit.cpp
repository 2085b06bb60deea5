// coherent_kit: build coherent and number states on a periodic grid, evolve
// them, map them to phase space and verify the ladder-operator identities.
//
// Exit status: 0 ok, 1 verification failure, 2 usage or configuration error,
// 3 I/O error.

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coherent.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verification = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

enum class Format { csv, json };

struct Options {
    std::size_t n_points = 1024;
    double x_min = -20.0;
    double x_max = 20.0;
    double hbar = 1.0;
    double mass = 1.0;
    double lambda = 1.0;
    double x0 = 0.0;
    double p0 = 0.0;
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    std::size_t n = 0;
    double t = 1.0;
    std::size_t steps = 16;
    std::size_t dim = 32;
    std::string out;
    Format format = Format::csv;
};

struct Flags {
    CLI::Option* x0 = nullptr;
    CLI::Option* p0 = nullptr;
    CLI::Option* alpha_re = nullptr;
    CLI::Option* alpha_im = nullptr;
    CLI::Option* n = nullptr;
};

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--n-points", o.n_points, "grid points (power of two >= 8)")->capture_default_str();
    cmd->add_option("--x-min", o.x_min, "left edge of the periodic domain")->capture_default_str();
    cmd->add_option("--x-max", o.x_max, "right edge of the periodic domain")->capture_default_str();
    cmd->add_option("--hbar", o.hbar, "reduced Planck constant")->capture_default_str();
    cmd->add_option("--mass", o.mass, "particle mass")->capture_default_str();
    cmd->add_option("--lambda", o.lambda, "ladder-operator length scale")->capture_default_str();
    cmd->add_option("--out", o.out, "output path prefix");
    cmd->add_option("--format", o.format, "data format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}},
            CLI::ignore_case));
}

void add_label(CLI::App* cmd, Options& o, Flags& f)
{
    f.x0 = cmd->add_option("--x0", o.x0, "position centroid");
    f.p0 = cmd->add_option("--p0", o.p0, "momentum centroid");
    f.alpha_re = cmd->add_option("--alpha-re", o.alpha_re, "real part of alpha");
    f.alpha_im = cmd->add_option("--alpha-im", o.alpha_im, "imaginary part of alpha");
}

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) {
        throw coherent::ConfigurationError(std::string(name) + " must be finite");
    }
}

coherent::PhysicalConstants constants_of(const Options& o)
{
    coherent::PhysicalConstants c{o.hbar, o.mass, o.lambda};
    c.validate();
    return c;
}

coherent::GridPtr grid_of(const Options& o)
{
    require_finite(o.x_min, "--x-min");
    require_finite(o.x_max, "--x-max");
    return coherent::make_grid(o.n_points, o.x_min, o.x_max);
}

bool set(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

coherent::CoherentLabel label_of(const Options& o, const Flags& f,
                                 const coherent::PhysicalConstants& c)
{
    const bool by_alpha = set(f.alpha_re) || set(f.alpha_im);
    const bool by_moments = set(f.x0) || set(f.p0);
    if (by_alpha && by_moments) {
        throw coherent::UsageError("give the state either as --alpha-re/--alpha-im or as --x0/--p0");
    }
    for (auto [v, name] : {std::pair{o.x0, "--x0"}, {o.p0, "--p0"}, {o.alpha_re, "--alpha-re"},
                           {o.alpha_im, "--alpha-im"}}) {
        require_finite(v, name);
    }
    if (by_alpha) {
        return {coherent::cplx(o.alpha_re, o.alpha_im)};
    }
    return coherent::CoherentLabel::from_moments(o.x0, o.p0, c);
}

// A number state when --n is given, otherwise a coherent state.
coherent::WaveFunction state_of(const Options& o, const Flags& f, const coherent::GridPtr& grid,
                                const coherent::PhysicalConstants& c)
{
    if (set(f.n)) {
        if (set(f.x0) || set(f.p0) || set(f.alpha_re) || set(f.alpha_im)) {
            throw coherent::UsageError("--n selects a number state; drop the coherent-state label");
        }
        return coherent::number_state(grid, o.n, c);
    }
    return coherent::coherent_closed_form(grid, label_of(o, f, c), c);
}

std::string data_path(const Options& o)
{
    return o.out + (o.format == Format::json ? ".json" : ".csv");
}

void write_state(const Options& o, const coherent::WaveFunction& psi,
                 const coherent::PhysicalConstants& c)
{
    namespace io = coherent::io;
    const auto& g = *psi.grid();
    if (o.format == Format::json) {
        io::json samples = io::json::array();
        for (std::size_t j = 0; j < psi.size(); ++j) {
            samples.push_back({{"x", g.x(j)}, {"re", psi[j].real()}, {"im", psi[j].imag()}});
        }
        io::write_text_file(data_path(o),
                            io::canonical_json({{"grid", io::grid_json(g)}, {"samples", samples}}));
    } else {
        std::ostringstream os;
        io::write_wavefunction_csv(os, psi);
        io::write_text_file(data_path(o), os.str());
    }
    io::write_text_file(o.out + ".moments.json",
                        io::canonical_json(io::moments_json(coherent::moments(psi, c), g)));
    std::cout << "wrote " << data_path(o) << " and " << o.out << ".moments.json\n";
}

int run_coherent(const Options& o, const Flags& f)
{
    auto c = constants_of(o);
    auto grid = grid_of(o);
    write_state(o, coherent::coherent_closed_form(grid, label_of(o, f, c), c), c);
    return exit_ok;
}

int run_number(const Options& o)
{
    auto c = constants_of(o);
    auto grid = grid_of(o);
    write_state(o, coherent::number_state(grid, o.n, c), c);
    return exit_ok;
}

int run_evolve(const Options& o, const Flags& f)
{
    namespace io = coherent::io;
    auto c = constants_of(o);
    auto grid = grid_of(o);
    require_finite(o.t, "--t");
    auto psi = coherent::coherent_closed_form(grid, label_of(o, f, c), c);
    auto rows = coherent::evolution_trace(psi, o.t, o.steps, c);
    if (o.format == Format::json) {
        io::write_text_file(data_path(o), io::canonical_json(io::trace_json(rows)));
    } else {
        std::ostringstream os;
        io::write_trace_csv(os, rows);
        io::write_text_file(data_path(o), os.str());
    }
    std::cout << "wrote " << data_path(o) << '\n';
    return exit_ok;
}

int run_husimi(const Options& o, const Flags& f)
{
    namespace io = coherent::io;
    auto c = constants_of(o);
    auto grid = grid_of(o);
    auto psi = state_of(o, f, grid, c);
    auto map = coherent::husimi(psi, coherent::default_lattice_for(psi, c));
    if (o.format == Format::json) {
        io::write_text_file(data_path(o), io::canonical_json(io::husimi_json(map)));
    } else {
        std::ostringstream os;
        io::write_husimi_csv(os, map);
        io::write_text_file(data_path(o), os.str());
    }
    auto sidecar = io::husimi_sidecar_json(map);
    io::write_text_file(o.out + ".sidecar.json", io::canonical_json(sidecar));
    std::cout << "wrote " << data_path(o) << " and " << o.out << ".sidecar.json\n";
    if (map.boundary_warning) {
        std::cerr << "warning: Husimi map is not negligible on the lattice border\n";
    }
    return sidecar["normalization"]["pass"].get<bool>() ? exit_ok : exit_verification;
}

int run_expand(const Options& o, const Flags& f)
{
    namespace io = coherent::io;
    auto c = constants_of(o);
    auto grid = grid_of(o);
    if (o.dim == 0 || o.dim > coherent::max_number_state + 1) {
        throw coherent::ConfigurationError("--dim must be in [1, "
                                           + std::to_string(coherent::max_number_state + 1) + "]");
    }
    auto coeffs = coherent::fock_expansion(state_of(o, f, grid, c), o.dim, c);
    if (o.format == Format::json) {
        io::write_text_file(data_path(o), io::canonical_json(io::fock_json(coeffs)));
    } else {
        std::ostringstream os;
        io::write_fock_csv(os, coeffs);
        io::write_text_file(data_path(o), os.str());
    }
    std::cout << "wrote " << data_path(o) << '\n';
    return exit_ok;
}

int run_verify(const Options& o)
{
    coherent::VerifyConfig cfg;
    cfg.grid = grid_of(o);
    cfg.constants = constants_of(o);
    auto report = coherent::run_verification(cfg);
    const std::string path = o.out + ".json";
    coherent::emit_report(report, path);
    for (const auto& r : report.records()) {
        std::printf("%-4s %-36s %.3e (tol %.1e)\n", r.pass ? "ok" : "FAIL", r.check_id.c_str(),
                    r.measured_residual, r.tolerance);
    }
    std::printf("%zu/%zu checks passed; report in %s\n", report.passed(), report.records().size(),
                path.c_str());
    return report.all_pass() ? exit_ok : exit_verification;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coherent states of a free particle on a periodic grid"};
    app.require_subcommand(1, 1);

    Options o;
    Flags coherent_flags, evolve_flags, husimi_flags, expand_flags;

    auto* coherent_cmd = app.add_subcommand("coherent", "coherent state samples and moments");
    add_common(coherent_cmd, o);
    add_label(coherent_cmd, o, coherent_flags);

    auto* number_cmd = app.add_subcommand("number", "number state samples and moments");
    add_common(number_cmd, o);
    number_cmd->add_option("--n", o.n, "number-state index")->capture_default_str();

    auto* evolve_cmd = app.add_subcommand("evolve", "free evolution trace of a coherent state");
    add_common(evolve_cmd, o);
    add_label(evolve_cmd, o, evolve_flags);
    evolve_cmd->add_option("--t", o.t, "final time")->capture_default_str();
    evolve_cmd->add_option("--steps", o.steps, "trace intervals in [0, t]")->capture_default_str();

    auto* husimi_cmd = app.add_subcommand("husimi", "Husimi map of a coherent or number state");
    add_common(husimi_cmd, o);
    add_label(husimi_cmd, o, husimi_flags);
    husimi_flags.n = husimi_cmd->add_option("--n", o.n, "use number state n instead");

    auto* expand_cmd = app.add_subcommand("expand", "number-basis coefficients of a state");
    add_common(expand_cmd, o);
    add_label(expand_cmd, o, expand_flags);
    expand_flags.n = expand_cmd->add_option("--n", o.n, "expand number state n instead");
    expand_cmd->add_option("--dim", o.dim, "coefficients to compute")->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "run every identity check and write a report");
    add_common(verify_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        auto* cmd = app.get_subcommands().front();
        if (o.out.empty()) {
            o.out = cmd->get_name();
        }
        if (cmd == coherent_cmd) {
            return run_coherent(o, coherent_flags);
        }
        if (cmd == number_cmd) {
            return run_number(o);
        }
        if (cmd == evolve_cmd) {
            return run_evolve(o, evolve_flags);
        }
        if (cmd == husimi_cmd) {
            return run_husimi(o, husimi_flags);
        }
        if (cmd == expand_cmd) {
            return run_expand(o, expand_flags);
        }
        return run_verify(o);
    } catch (const coherent::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const coherent::ConfigurationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const coherent::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
}

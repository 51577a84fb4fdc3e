#include "nhssh/cli.hpp"

#include "nhssh/analytic.hpp"
#include "nhssh/dynamics.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/io.hpp"
#include "nhssh/spectral.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace nhssh::cli {

using nlohmann::json;

std::vector<double> RangeSpec::values() const {
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out.push_back(start + (stop - start) * i / (count - 1));
    }
    return out;
}

namespace {

struct Staging {
    int n = 25;
    double k = 0.5;
    double c = 1.0;
    std::string defect = "none";
    int m = 1;
    double strength = 0.0;
    std::string out_path;
    std::string format = "csv";
    std::string config_path;
    int jobs = 0;
    std::string range;
    double z_max = 30.0;
    int steps = 600;
    int site = 1;
    std::string figure;
};

struct SubOptions {
    CLI::App* app = nullptr;
    Command command = Command::Spectrum;
    CLI::Option* n = nullptr;
    CLI::Option* k = nullptr;
    CLI::Option* c = nullptr;
    CLI::Option* defect = nullptr;
    CLI::Option* m = nullptr;
    CLI::Option* strength = nullptr;
    CLI::Option* range = nullptr;
    CLI::Option* z_max = nullptr;
    CLI::Option* steps = nullptr;
    CLI::Option* site = nullptr;
    CLI::Option* figure = nullptr;
};

void add_shared_flags(SubOptions& sub, Staging& s) {
    CLI::App* a = sub.app;
    sub.n = a->add_option("--n", s.n, "Number of lattice sites (odd, >= 3)");
    sub.k = a->add_option("--k", s.k, "Weak (intra-cell) coupling, 0 < k < c");
    sub.c = a->add_option("--c", s.c, "Strong (dimer) coupling");
    sub.defect = a->add_option("--defect", s.defect,
                               "Defect variant: none | asym | pt")
                     ->check(CLI::IsMember({"none", "asym", "pt"}));
    sub.m = a->add_option("--m", s.m, "Defect dimer index (sites 2m, 2m+1)");
    sub.strength = a->add_option("--strength", s.strength,
                                 "Defect strength (g for asym, gamma for pt)");
    a->add_option("--out", s.out_path, "Output file path");
    a->add_option("--format", s.format, "Output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    a->add_option("--config", s.config_path,
                  "JSON file with the lattice spec; explicit flags win");
    a->add_option("--jobs", s.jobs, "Worker threads for sweep points (0 = all cores)");
}

RangeSpec parse_range(const std::string& text) {
    const auto bad = [&text](const std::string& why) {
        return UsageError("--range: " + why + " (got \"" + text +
                          "\", expected start:stop:count)");
    };
    std::vector<std::string> parts;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ':')) parts.push_back(token);
    if (parts.size() != 3) throw bad("expected three ':'-separated fields");

    RangeSpec range;
    try {
        std::size_t pos = 0;
        range.start = std::stod(parts[0], &pos);
        if (pos != parts[0].size()) throw bad("start is not a number");
        range.stop = std::stod(parts[1], &pos);
        if (pos != parts[1].size()) throw bad("stop is not a number");
        range.count = std::stoi(parts[2], &pos);
        if (pos != parts[2].size()) throw bad("count is not an integer");
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw bad("fields must be number:number:integer");
    }
    if (range.count < 1) throw bad("count must be >= 1");
    if (range.count > 1 && !(range.stop > range.start)) {
        throw bad("stop must exceed start when count > 1");
    }
    return range;
}

DefectVariant parse_variant(const std::string& name) {
    if (name == "asym") return DefectVariant::AsymmetricCoupling;
    if (name == "pt") return DefectVariant::PTDimer;
    return DefectVariant::None;
}

LatticeSpec load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("--config: cannot open \"" + path + "\"");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("--config: invalid JSON in \"" + path + "\": " + e.what());
    }
    try {
        return lattice_spec_from_json(j);
    } catch (const InvalidSpecError& e) {
        throw UsageError(std::string("--config: ") + e.what());
    }
}

std::string defect_summary(const LatticeSpec& spec) {
    if (spec.defect.variant == DefectVariant::None) return "none";
    std::ostringstream os;
    os << to_string(spec.defect.variant) << "(m=" << spec.defect.m
       << ",strength=" << format_double(spec.defect.strength) << ")";
    return os.str();
}

} // namespace

const std::vector<std::string>& known_figures() {
    static const std::vector<std::string> ids = {"2a", "2b", "2c", "2d", "2e", "2f",
                                                 "3a", "3b", "3c", "3d", "3e", "3f",
                                                 "4a", "4b", "4c", "4d"};
    return ids;
}

RunConfig parse_args(const std::vector<std::string>& args) {
    Staging s;
    CLI::App app{"Non-Hermitian SSH defect-lattice simulator"};
    app.require_subcommand(1);

    std::vector<SubOptions> subs(6);
    const struct {
        Command command;
        const char* name;
        const char* desc;
    } defs[] = {
        {Command::Spectrum, "spectrum", "Eigenvalues, residuals of the lattice Hamiltonian"},
        {Command::Mode, "mode", "Per-site profile of the topological zero mode"},
        {Command::Sweep, "sweep", "Re-solve over a defect-strength range"},
        {Command::Ep, "ep", "Locate the exceptional point inside a strength bracket"},
        {Command::Propagate, "propagate", "Evolve a delta excitation along the lattice"},
        {Command::Reproduce, "reproduce", "One-command reproduction of a published figure"},
    };
    for (int i = 0; i < 6; ++i) {
        subs[i].command = defs[i].command;
        subs[i].app = app.add_subcommand(defs[i].name, defs[i].desc);
        add_shared_flags(subs[i], s);
    }
    const auto by_command = [&subs](Command c) -> SubOptions& {
        return *std::find_if(subs.begin(), subs.end(),
                             [c](const SubOptions& o) { return o.command == c; });
    };
    by_command(Command::Sweep).range =
        by_command(Command::Sweep)
            .app->add_option("--range", s.range, "Strength grid start:stop:count");
    by_command(Command::Ep).range =
        by_command(Command::Ep)
            .app->add_option("--range", s.range, "Bracket start:stop:count (count = scan points)");
    for (Command c : {Command::Propagate, Command::Reproduce}) {
        SubOptions& sub = by_command(c);
        sub.z_max = sub.app->add_option("--z-max", s.z_max, "Propagation length (units of 1/c)");
        sub.steps = sub.app->add_option("--steps", s.steps, "Number of z-grid intervals");
        sub.site = sub.app->add_option("--site", s.site, "Excitation site (1-based)");
    }
    by_command(Command::Reproduce).figure =
        by_command(Command::Reproduce)
            .app->add_option("--figure", s.figure, "Figure id, e.g. 2a, 3e, 4d");

    std::vector<const char*> argv;
    argv.push_back("nhssh");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto seen = app.get_subcommands();
        throw HelpRequested(seen.empty() ? app.help() : seen.front()->help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    const SubOptions& sub = *std::find_if(subs.begin(), subs.end(), [&](const SubOptions& o) {
        return o.app->parsed();
    });

    RunConfig config;
    config.command = sub.command;

    // Start from the config file (if any); explicit flags override.
    if (!s.config_path.empty()) {
        config.lattice = load_config_file(s.config_path);
    } else {
        config.lattice = LatticeSpec{s.n, s.k, s.c,
                                     DefectSpec{parse_variant(s.defect), s.m, s.strength}};
    }
    const auto track = [&config](const CLI::Option* opt, const char* name) {
        if (opt != nullptr && opt->count() > 0) config.provided.insert(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (track(sub.n, "--n")) config.lattice.n_sites = s.n;
    if (track(sub.k, "--k")) config.lattice.k = s.k;
    if (track(sub.c, "--c")) config.lattice.c = s.c;
    if (track(sub.defect, "--defect")) config.lattice.defect.variant = parse_variant(s.defect);
    if (track(sub.m, "--m")) config.lattice.defect.m = s.m;
    if (track(sub.strength, "--strength")) config.lattice.defect.strength = s.strength;
    track(sub.z_max, "--z-max");
    track(sub.steps, "--steps");
    track(sub.site, "--site");

    config.format = s.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    config.output_path = s.out_path;
    config.jobs = s.jobs;
    config.z_max = s.z_max;
    config.steps = s.steps;
    config.site = s.site;
    config.figure = s.figure;

    if (config.output_path.empty()) {
        throw UsageError("--out is required");
    }

    if (config.command == Command::Reproduce) {
        if (config.figure.empty()) {
            throw UsageError("--figure is required for reproduce");
        }
        const auto& ids = known_figures();
        if (std::find(ids.begin(), ids.end(), config.figure) == ids.end()) {
            std::string msg = "--figure: unknown id \"" + config.figure + "\" (expected one of";
            for (const auto& id : ids) msg += " " + id;
            throw UsageError(msg + ")");
        }
        return config;   // figure recipes validate their own spec
    }

    // Range-driven commands.
    if (config.command == Command::Sweep || config.command == Command::Ep) {
        if (s.range.empty()) {
            throw UsageError("--range is required for this command");
        }
        config.range = parse_range(s.range);
        if (config.lattice.defect.variant == DefectVariant::None) {
            throw UsageError("--defect: sweep/ep need a defect variant (asym or pt)");
        }
        if (config.command == Command::Ep && config.range->count < 2) {
            throw UsageError("--range: ep bracket needs count >= 2");
        }
    }
    if (config.command == Command::Propagate) {
        if (config.steps < 1) throw UsageError("--steps must be >= 1");
        if (!(config.z_max > 0.0)) throw UsageError("--z-max must be positive");
        if (config.site < 1 || config.site > config.lattice.n_sites) {
            throw UsageError("--site out of range 1..n");
        }
    }

    const auto violations = validate_spec(config.lattice);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) {
            if (!msg.empty()) msg += "; ";
            msg += v;
        }
        throw UsageError(msg);
    }
    return config;
}

RunConfig figure_config(const std::string& id, const RunConfig& base) {
    RunConfig out = base;
    out.figure = id;

    // Common frame used throughout: 25 sites, k = 0.5, couplings in units of c.
    LatticeSpec lattice;
    lattice.n_sites = 25;
    lattice.k = 0.5;
    lattice.c = 1.0;

    const auto mode_figure = [&](DefectVariant variant, int m, double strength) {
        out.command = Command::Mode;
        lattice.defect = {variant, m, strength};
    };
    const auto sweep_figure = [&](DefectVariant variant, int m) {
        out.command = Command::Sweep;
        lattice.defect = {variant, m, 0.0};
        out.range = RangeSpec{0.0, 1.5, 151};
    };
    const auto propagate_figure = [&](DefectVariant variant, int m, double strength,
                                      int site) {
        out.command = Command::Propagate;
        lattice.defect = {variant, m, strength};
        out.site = site;
        out.z_max = 30.0;
        out.steps = 600;
        out.grid_output = true;
    };

    if (id == "2a" || id == "2b") sweep_figure(DefectVariant::AsymmetricCoupling, 5);
    else if (id == "2c") mode_figure(DefectVariant::AsymmetricCoupling, 5, 0.0);
    else if (id == "2d") mode_figure(DefectVariant::AsymmetricCoupling, 5, 0.5);
    else if (id == "2e") mode_figure(DefectVariant::AsymmetricCoupling, 5, 1.0);
    else if (id == "2f") mode_figure(DefectVariant::AsymmetricCoupling, 5, 1.5);
    else if (id == "3a" || id == "3b") sweep_figure(DefectVariant::PTDimer, 5);
    else if (id == "3c") mode_figure(DefectVariant::PTDimer, 5, 0.0);
    else if (id == "3d") mode_figure(DefectVariant::PTDimer, 5, 0.2);
    else if (id == "3e") mode_figure(DefectVariant::PTDimer, 5, 1.0);
    else if (id == "3f") mode_figure(DefectVariant::PTDimer, 5, 1.1);
    else if (id == "4a") propagate_figure(DefectVariant::None, 12, 0.0, 1);
    else if (id == "4b") propagate_figure(DefectVariant::None, 12, 0.0, 25);
    else if (id == "4c") propagate_figure(DefectVariant::PTDimer, 12, 0.5, 25);
    else if (id == "4d") propagate_figure(DefectVariant::PTDimer, 12, 1.0, 25);
    else throw UsageError("--figure: unknown id \"" + id + "\"");

    // Explicit flags override the documented figure parameters.
    const auto kept = [&base](const char* flag) { return base.provided.count(flag) > 0; };
    if (kept("--n")) lattice.n_sites = base.lattice.n_sites;
    if (kept("--k")) lattice.k = base.lattice.k;
    if (kept("--c")) lattice.c = base.lattice.c;
    if (kept("--defect")) lattice.defect.variant = base.lattice.defect.variant;
    if (kept("--m")) lattice.defect.m = base.lattice.defect.m;
    if (kept("--strength")) lattice.defect.strength = base.lattice.defect.strength;
    if (kept("--z-max")) out.z_max = base.z_max;
    if (kept("--steps")) out.steps = base.steps;
    if (kept("--site")) out.site = base.site;
    out.lattice = lattice;

    const auto violations = validate_spec(out.lattice);
    if (!violations.empty()) {
        std::string msg = "figure " + id + " with overrides: ";
        for (const auto& v : violations) msg += v + "; ";
        throw UsageError(msg);
    }
    if (out.command == Command::Propagate) {
        if (out.steps < 1) throw UsageError("--steps must be >= 1");
        if (!(out.z_max > 0.0)) throw UsageError("--z-max must be positive");
        if (out.site < 1 || out.site > out.lattice.n_sites) {
            throw UsageError("--site out of range 1..n");
        }
    }
    return out;
}

namespace {

int run_spectrum(const RunConfig& config, std::ostream& out) {
    const auto& spec = config.lattice;
    const Hamiltonian h = build_hamiltonian(spec);
    const double tol = spec.defect.variant == DefectVariant::None
                           ? kDefaultResidualTolerance
                           : residual_tolerance_for_strength(spec.defect.strength, spec.c);
    const Spectrum s = eigendecompose(h, tol);

    std::string key = "min|E|=" + format_double(s.eigenvalues.cwiseAbs().minCoeff());
    try {
        const auto cls = classify_modes(spec, s);
        const auto e = s.eigenvalues(cls.zero_mode_index);
        key = "zero_mode_E=" + format_double(e.real()) + (e.imag() < 0 ? "-" : "+") +
              format_double(std::abs(e.imag())) + "i";
    } catch (const ClassificationError&) {
        // keep min|E| summary; spectra without a clear zero mode are still valid output
    }

    write_file_atomic(config.output_path, [&](std::ostream& file) {
        if (config.format == OutputFormat::Json) {
            file << spectrum_to_json(s).dump(2) << '\n';
        } else {
            write_spectrum_csv(file, s);
        }
    });
    out << "spectrum n=" << spec.n_sites << " defect=" << defect_summary(spec) << " " << key
        << " -> " << config.output_path << '\n';
    return 0;
}

int run_mode(const RunConfig& config, std::ostream& out) {
    const auto& spec = config.lattice;
    const Hamiltonian h = build_hamiltonian(spec);
    const double tol = spec.defect.variant == DefectVariant::None
                           ? kDefaultResidualTolerance
                           : residual_tolerance_for_strength(spec.defect.strength, spec.c);
    const Spectrum s = eigendecompose(h, tol);
    const auto cls = classify_modes(spec, s);
    const ModeProfile profile = zero_mode_profile(spec, s);
    const auto e = s.eigenvalues(cls.zero_mode_index);

    write_file_atomic(config.output_path, [&](std::ostream& file) {
        if (config.format == OutputFormat::Json) {
            file << profile_to_json(profile).dump(2) << '\n';
        } else {
            write_profile_csv(file, profile);
        }
    });
    out << "mode n=" << spec.n_sites << " defect=" << defect_summary(spec)
        << " zero_mode_E=" << format_double(e.real())
        << (e.imag() < 0 ? "-" : "+") << format_double(std::abs(e.imag())) << "i"
        << " argmax_site=" << profile.argmax_site() << " -> " << config.output_path << '\n';
    return 0;
}

int run_sweep(const RunConfig& config, std::ostream& out) {
    const auto strengths = config.range->values();
    const SweepTable table = sweep_defect_strength(config.lattice, strengths, config.jobs);

    write_file_atomic(config.output_path, [&](std::ostream& file) {
        if (config.format == OutputFormat::Json) {
            file << sweep_to_json(table).dump(2) << '\n';
        } else {
            write_sweep_csv(file, table);
        }
    });
    const auto& last = table.rows.back();
    out << "sweep n=" << config.lattice.n_sites << " defect="
        << to_string(config.lattice.defect.variant) << "(m=" << config.lattice.defect.m << ")"
        << " points=" << table.rows.size()
        << " zero_mode_E(last)=" << format_double(last.zero_mode_energy.real())
        << (last.zero_mode_energy.imag() < 0 ? "-" : "+")
        << format_double(std::abs(last.zero_mode_energy.imag())) << "i"
        << " -> " << config.output_path << '\n';
    return 0;
}

int run_ep(const RunConfig& config, std::ostream& out) {
    const auto& range = *config.range;
    const EPReport report = locate_exceptional_point(config.lattice, range.start, range.stop,
                                                     1e-9, range.count);

    write_file_atomic(config.output_path, [&](std::ostream& file) {
        if (config.format == OutputFormat::Json) {
            file << ep_report_to_json(report).dump(2) << '\n';
        } else {
            file << "parameter_value,min_eigenvalue_gap,max_eigenvector_overlap\n"
                 << format_double(report.parameter_value) << ','
                 << format_double(report.min_eigenvalue_gap) << ','
                 << format_double(report.max_eigenvector_overlap) << '\n';
        }
    });
    out << "ep n=" << config.lattice.n_sites << " defect="
        << to_string(config.lattice.defect.variant) << "(m=" << config.lattice.defect.m << ")"
        << " location=" << format_double(report.parameter_value)
        << " overlap=" << format_double(report.max_eigenvector_overlap) << " -> "
        << config.output_path << '\n';
    return 0;
}

int run_propagate(const RunConfig& config, std::ostream& out) {
    const auto& spec = config.lattice;
    const Hamiltonian h = build_hamiltonian(spec);
    const ComplexVector psi0 = delta_excitation(spec.n_sites, config.site);
    const EvolutionRecord record = propagate(h, psi0, config.z_max, config.steps);
    const double score = localization_score(record, config.site);

    write_file_atomic(config.output_path, [&](std::ostream& file) {
        if (config.format == OutputFormat::Json) {
            file << evolution_to_json(record).dump(2) << '\n';
        } else if (config.grid_output) {
            write_evolution_grid(file, record);
        } else {
            write_evolution_csv(file, record);
        }
    });
    out << "propagate n=" << spec.n_sites << " defect=" << defect_summary(spec)
        << " site=" << config.site << " z_max=" << format_double(config.z_max)
        << " localization_score=" << format_double(score) << " -> " << config.output_path
        << '\n';
    return 0;
}

} // namespace

int run(const RunConfig& config, std::ostream& out) {
    switch (config.command) {
        case Command::Spectrum: return run_spectrum(config, out);
        case Command::Mode: return run_mode(config, out);
        case Command::Sweep: return run_sweep(config, out);
        case Command::Ep: return run_ep(config, out);
        case Command::Propagate: return run_propagate(config, out);
        case Command::Reproduce: {
            RunConfig resolved = figure_config(config.figure, config);
            return run(resolved, out);
        }
    }
    throw Error("run: unknown command");
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig config = parse_args(args);
        return run(config, out);
    } catch (const HelpRequested& h) {
        out << h.what();
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace nhssh::cli

#include "nhssh/io.hpp"

#include "nhssh/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <system_error>

namespace nhssh {

using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "index,re_E,im_E,residual\n";
    for (int i = 0; i < spectrum.dim(); ++i) {
        out << (i + 1) << ',' << format_double(spectrum.eigenvalues(i).real()) << ','
            << format_double(spectrum.eigenvalues(i).imag()) << ','
            << format_double(spectrum.residuals(i)) << '\n';
    }
}

void write_profile_csv(std::ostream& out, const ModeProfile& profile) {
    out << "site,re_psi,im_psi,intensity\n";
    for (int site = 1; site <= profile.n_sites(); ++site) {
        const auto a = profile.amplitude(site);
        out << site << ',' << format_double(a.real()) << ',' << format_double(a.imag())
            << ',' << format_double(profile.intensity(site)) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << "param,mode_index,re_E,im_E,site1_intensity,defect_site_intensity\n";
    for (const auto& row : table.rows) {
        for (int i = 0; i < row.eigenvalues.size(); ++i) {
            out << format_double(row.strength) << ',' << (i + 1) << ','
                << format_double(row.eigenvalues(i).real()) << ','
                << format_double(row.eigenvalues(i).imag()) << ','
                << format_double(row.site1_intensity_per_mode(i)) << ','
                << format_double(row.defect_site_intensity_per_mode(i)) << '\n';
        }
    }
}

void write_evolution_csv(std::ostream& out, const EvolutionRecord& record) {
    out << "z,site,norm_intensity\n";
    for (int t = 0; t < record.num_points(); ++t) {
        for (int site = 1; site <= record.n_sites(); ++site) {
            out << format_double(record.z_grid(t)) << ',' << site << ','
                << format_double(record.normalized_intensities(t, site - 1)) << '\n';
        }
    }
}

void write_evolution_grid(std::ostream& out, const EvolutionRecord& record) {
    out << "# zsteps=" << record.num_points() << " nsites=" << record.n_sites() << '\n';
    for (int t = 0; t < record.num_points(); ++t) {
        for (int site = 1; site <= record.n_sites(); ++site) {
            if (site > 1) out << ' ';
            out << format_double(record.normalized_intensities(t, site - 1));
        }
        out << '\n';
    }
}

json lattice_spec_to_json(const LatticeSpec& spec) {
    return json{{"n_sites", spec.n_sites},
                {"k", spec.k},
                {"c", spec.c},
                {"defect",
                 {{"variant", to_string(spec.defect.variant)},
                  {"m", spec.defect.m},
                  {"strength", spec.defect.strength}}}};
}

namespace {

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const std::string& where) {
    for (const char* key : keys) {
        if (!j.contains(key)) {
            throw InvalidSpecError("lattice_spec_from_json: missing key \"" + std::string(key) +
                                   "\" in " + where);
        }
    }
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : keys) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw InvalidSpecError("lattice_spec_from_json: unknown key \"" + item.key() +
                                   "\" in " + where);
        }
    }
}

} // namespace

LatticeSpec lattice_spec_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidSpecError("lattice_spec_from_json: expected a JSON object");
    }
    require_keys(j, {"n_sites", "k", "c", "defect"}, "lattice spec");
    const json& d = j.at("defect");
    if (!d.is_object()) {
        throw InvalidSpecError("lattice_spec_from_json: \"defect\" must be an object");
    }
    require_keys(d, {"variant", "m", "strength"}, "defect spec");

    LatticeSpec spec;
    try {
        spec.n_sites = j.at("n_sites").get<int>();
        spec.k = j.at("k").get<double>();
        spec.c = j.at("c").get<double>();
        spec.defect.m = d.at("m").get<int>();
        spec.defect.strength = d.at("strength").get<double>();
        const auto variant = d.at("variant").get<std::string>();
        if (variant == "none") {
            spec.defect.variant = DefectVariant::None;
        } else if (variant == "asym") {
            spec.defect.variant = DefectVariant::AsymmetricCoupling;
        } else if (variant == "pt") {
            spec.defect.variant = DefectVariant::PTDimer;
        } else {
            throw InvalidSpecError("lattice_spec_from_json: variant must be one of "
                                   "\"none\", \"asym\", \"pt\" (got \"" + variant + "\")");
        }
    } catch (const json::exception& e) {
        throw InvalidSpecError(std::string("lattice_spec_from_json: ") + e.what());
    }
    return spec;
}

json spectrum_to_json(const Spectrum& spectrum) {
    json modes = json::array();
    for (int i = 0; i < spectrum.dim(); ++i) {
        modes.push_back({{"index", i + 1},
                         {"re_E", spectrum.eigenvalues(i).real()},
                         {"im_E", spectrum.eigenvalues(i).imag()},
                         {"residual", spectrum.residuals(i)}});
    }
    return json{{"eigenvalues", modes}};
}

json profile_to_json(const ModeProfile& profile) {
    json sites = json::array();
    for (int site = 1; site <= profile.n_sites(); ++site) {
        const auto a = profile.amplitude(site);
        sites.push_back({{"site", site},
                         {"re_psi", a.real()},
                         {"im_psi", a.imag()},
                         {"intensity", profile.intensity(site)}});
    }
    return json{{"sites", sites}};
}

json sweep_to_json(const SweepTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json modes = json::array();
        for (int i = 0; i < row.eigenvalues.size(); ++i) {
            modes.push_back({{"mode_index", i + 1},
                             {"re_E", row.eigenvalues(i).real()},
                             {"im_E", row.eigenvalues(i).imag()},
                             {"site1_intensity", row.site1_intensity_per_mode(i)},
                             {"defect_site_intensity", row.defect_site_intensity_per_mode(i)}});
        }
        json entry{{"param", row.strength},
                   {"zero_mode", {{"re_E", row.zero_mode_energy.real()},
                                  {"im_E", row.zero_mode_energy.imag()},
                                  {"site1_intensity", row.site1_intensity},
                                  {"defect_site_intensity", row.defect_site_intensity}}},
                   {"modes", modes}};
        if (row.bound_pair_energies) {
            entry["bound_pair"] = {{"re_E_minus", row.bound_pair_energies->first.real()},
                                   {"im_E_minus", row.bound_pair_energies->first.imag()},
                                   {"re_E_plus", row.bound_pair_energies->second.real()},
                                   {"im_E_plus", row.bound_pair_energies->second.imag()}};
        }
        rows.push_back(std::move(entry));
    }
    return json{{"defect_site", table.defect_site}, {"rows", rows}};
}

json evolution_to_json(const EvolutionRecord& record) {
    json rows = json::array();
    for (int t = 0; t < record.num_points(); ++t) {
        json intensities = json::array();
        for (int site = 1; site <= record.n_sites(); ++site) {
            intensities.push_back(record.normalized_intensities(t, site - 1));
        }
        rows.push_back({{"z", record.z_grid(t)}, {"norm_intensity", intensities}});
    }
    return json{{"rows", rows}};
}

json ep_report_to_json(const EPReport& report) {
    return json{{"parameter_value", report.parameter_value},
                {"min_eigenvalue_gap", report.min_eigenvalue_gap},
                {"max_eigenvector_overlap", report.max_eigenvector_overlap}};
}

void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path temp = target.string() + ".tmp";
    try {
        {
            std::ofstream out(temp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error("write_file_atomic: cannot open \"" + temp.string() +
                            "\" for writing");
            }
            writer(out);
            out.flush();
            if (!out) {
                throw Error("write_file_atomic: write to \"" + temp.string() + "\" failed");
            }
        }
        fs::rename(temp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(temp, ec);
        throw;
    }
}

} // namespace nhssh

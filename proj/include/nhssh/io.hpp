#pragma once

// Serialization surfaces: CSV writers with fixed headers, the LatticeSpec
// JSON schema, and atomic file output. Floats are emitted in their shortest
// round-trip form (never more than 17 significant digits) so repeated runs
// are byte-identical.

#include "nhssh/dynamics.hpp"
#include "nhssh/lattice.hpp"
#include "nhssh/mode_profile.hpp"
#include "nhssh/spectral.hpp"

#include <nlohmann/json_fwd.hpp>

#include <functional>
#include <iosfwd>
#include <string>

namespace nhssh {

std::string format_double(double value);

// CSV header: index,re_E,im_E,residual
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
// CSV header: site,re_psi,im_psi,intensity
void write_profile_csv(std::ostream& out, const ModeProfile& profile);
// CSV header: param,mode_index,re_E,im_E,site1_intensity,defect_site_intensity
void write_sweep_csv(std::ostream& out, const SweepTable& table);
// CSV header: z,site,norm_intensity (long format)
void write_evolution_csv(std::ostream& out, const EvolutionRecord& record);
// Dense grid: "# zsteps=<int> nsites=<int>" then one space-separated row per z.
void write_evolution_grid(std::ostream& out, const EvolutionRecord& record);

nlohmann::json lattice_spec_to_json(const LatticeSpec& spec);
// Strict parse: exact field names, no unknown keys. Throws InvalidSpecError.
LatticeSpec lattice_spec_from_json(const nlohmann::json& j);

nlohmann::json spectrum_to_json(const Spectrum& spectrum);
nlohmann::json profile_to_json(const ModeProfile& profile);
nlohmann::json sweep_to_json(const SweepTable& table);
nlohmann::json evolution_to_json(const EvolutionRecord& record);
nlohmann::json ep_report_to_json(const EPReport& report);

// Writes via a temp file in the same directory and renames into place, so a
// failing writer never leaves a partial file behind.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& writer);

} // namespace nhssh

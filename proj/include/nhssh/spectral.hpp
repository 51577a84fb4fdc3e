#pragma once

// Dense complex eigendecomposition of defect-lattice Hamiltonians, zero-mode
// and bound-state classification, defect-strength sweeps, and exceptional
// point location by eigenvector coalescence.

#include "nhssh/lattice.hpp"
#include "nhssh/mode_profile.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace nhssh {

inline constexpr double kDefaultResidualTolerance = 1e-9;
// Near a defective point the generic residual bound is unattainable; within
// |strength - c| < kNearDefectWindow the tolerance relaxes to kNearDefectResidualTolerance.
inline constexpr double kNearDefectWindow = 1e-3;
inline constexpr double kNearDefectResidualTolerance = 1e-6;

struct Spectrum {
    ComplexVector eigenvalues;        // sorted by (Re, Im) ascending
    ComplexMatrix right_eigenvectors; // unit-norm columns, same ordering
    RealVector residuals;             // ||H v_i - E_i v_i||_2

    int dim() const { return static_cast<int>(eigenvalues.size()); }
};

// Full right-eigenpair decomposition. Eigenvalues are sorted by real part,
// then imaginary part, so output is deterministic. Throws ConvergenceError if
// the QR iteration fails or a residual exceeds the tolerance (scaled up for
// matrices with entries larger than 10).
Spectrum eigendecompose(const Hamiltonian& h,
                        double residual_tolerance = kDefaultResidualTolerance);

struct ModeClassification {
    int zero_mode_index = -1;                      // index into Spectrum arrays
    std::optional<std::pair<int, int>> bound_pair; // gap modes E_-, E_+; set iff defect strength > 0
    std::vector<int> band_indices;                 // everything else, ascending
};

// Distance of an eigenvalue from the clean infinite-lattice band intervals
// [c-k, c+k] and [-c-k, -(c-k)] in the complex plane.
double band_isolation(std::complex<double> energy, double k, double c);

// Picks the zero mode among eigenvalues with |Re E| below 1e-8 * max(1, c)
// (smallest |Im E| on ties) and the bound pair as the two remaining
// eigenvalues most isolated from the band intervals. Throws
// ClassificationError when no candidate exists or two candidates cannot be
// told apart.
ModeClassification classify_modes(const LatticeSpec& spec, const Spectrum& spectrum);

// Phase-fixed per-site amplitudes and intensities of the classified zero mode.
ModeProfile zero_mode_profile(const LatticeSpec& spec, const Spectrum& spectrum);

struct SweepRow {
    double strength = 0.0;
    ComplexVector eigenvalues;
    RealVector residuals;
    std::complex<double> zero_mode_energy;
    std::optional<std::pair<std::complex<double>, std::complex<double>>> bound_pair_energies;
    // Zero-mode intensities at site 1 and at the relocation target 2m+1.
    double site1_intensity = 0.0;
    double defect_site_intensity = 0.0;
    // Same two intensities for every mode (rows of the CSV serialization).
    RealVector site1_intensity_per_mode;
    RealVector defect_site_intensity_per_mode;
};

struct SweepTable {
    LatticeSpec template_spec;
    int defect_site = 0;   // 1-based index 2m+1
    std::vector<SweepRow> rows;
};

// Re-solves the lattice for each strength value (template's strength is
// replaced point by point). Rows keep input order. Points are independent
// and are distributed over `jobs` worker threads (<= 0 selects the hardware
// concurrency). Per-point failures are rethrown tagged with the strength.
SweepTable sweep_defect_strength(const LatticeSpec& spec_template,
                                 const std::vector<double>& strengths,
                                 int jobs = 1);

struct EPReport {
    double parameter_value = 0.0;
    double min_eigenvalue_gap = 0.0;
    double max_eigenvector_overlap = 0.0;
};

// Maximizes the largest pairwise right-eigenvector overlap |<v_i, v_j>| over
// the bracket [lo, hi]: a coarse scan locates the peak, golden-section
// refines it to within `tolerance`. Throws NoExceptionalPointError when the
// overlap never exceeds 0.9 inside the bracket.
EPReport locate_exceptional_point(const std::function<Hamiltonian(double)>& build,
                                  double lo, double hi, double tolerance,
                                  int scan_points = 33);

// Same search with the lattice template's defect strength as the parameter.
EPReport locate_exceptional_point(const LatticeSpec& spec_template,
                                  double lo, double hi, double tolerance,
                                  int scan_points = 33);

// Minimal two-site defect models (the defect dimer detached from the chain).
Hamiltonian asymmetric_dimer_hamiltonian(double c, double g);
Hamiltonian pt_dimer_hamiltonian(double c, double gamma);

// Residual tolerance applicable at the given defect strength.
inline double residual_tolerance_for_strength(double strength, double c) {
    return std::abs(strength - c) < kNearDefectWindow ? kNearDefectResidualTolerance
                                                      : kDefaultResidualTolerance;
}

} // namespace nhssh

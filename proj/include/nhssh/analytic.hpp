#pragma once

// Closed-form mode constructions from the wave-matching relations, used as
// independent oracles for the numerical eigensolver:
//   * the clean-lattice zero mode (odd-sublattice geometric profile),
//   * the zero mode relocated to the defect dimer when the asymmetric
//     coupling reaches g = c,
//   * the right-edge mode of the PT defect at gamma = c, built by backward
//     recursion from the last site,
//   * the site-by-site elimination showing the PT lattice at gamma = c
//     admits no zero-energy state.

#include "nhssh/lattice.hpp"
#include "nhssh/mode_profile.hpp"

#include <complex>
#include <string>
#include <vector>

namespace nhssh {

// Zero mode of the clean lattice: psi_{2l+1} = (-k/c)^l, even sites zero.
ModeProfile clean_zero_mode(int n_sites, double k, double c);

// Zero mode for the asymmetric-coupling defect at exactly g = c: all sites
// up to 2m vanish and the geometric tail restarts at site 2m+1.
ModeProfile relocated_zero_mode_at_gc(int n_sites, double k, double c, int m);

// Eigenvector of the PT defect at the rightmost dimer with gamma = c,
// reconstructed from its (numerically obtained) eigenvalue e_t by backward
// recursion from psi_N = 1. Throws RecursionBlowupError if the recursion
// grows beyond 1e12, which signals an e_t inconsistent with a
// right-localized mode.
ModeProfile pt_right_edge_mode_at_gamma_c(int n_sites, double k, double c,
                                          std::complex<double> e_t);

struct EliminationReport {
    bool applicable = false;            // true iff gamma == c (elimination runs)
    std::vector<std::string> steps;     // forced-zero chain, in derivation order
    bool trivial_solution_forced = false;
    double numeric_min_abs_energy = 0.0; // min |E| of the actual spectrum
};

// Runs the elimination argument for E = 0 on the PT lattice with the defect
// at the rightmost dimer: every amplitude is forced to vanish, so no
// zero-energy eigenstate exists at gamma = c. Cross-checks against the
// numerical spectrum. With gamma != c the elimination does not apply and only
// the numeric minimum is reported.
EliminationReport verify_no_real_zero_at_gamma_c(int n_sites, double k, double c,
                                                 double gamma);
inline EliminationReport verify_no_real_zero_at_gamma_c(int n_sites, double k, double c) {
    return verify_no_real_zero_at_gamma_c(n_sites, k, c, c);
}

} // namespace nhssh

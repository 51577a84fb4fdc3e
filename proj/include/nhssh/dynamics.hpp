#pragma once

// Excitation propagation under i d(psi)/dz = H psi. With this sign the PT
// gain site (+i*gamma on the diagonal) amplifies under exp(-i E z).

#include "nhssh/lattice.hpp"

#include <Eigen/Dense>

namespace nhssh {

struct EvolutionRecord {
    RealVector z_grid;                  // strictly increasing, starts at 0
    Eigen::MatrixXcd fields;            // row t = psi(z_t)
    Eigen::MatrixXd normalized_intensities; // per-z |psi|^2 / sum, rows sum to 1

    int num_points() const { return static_cast<int>(z_grid.size()); }
    int n_sites() const { return static_cast<int>(fields.cols()); }
};

// Fixed-step classical RK4 with internal substeps capped well inside the
// stability bound. `dz_cap` overrides the automatic substep cap; values
// violating the RK4 stability limit raise StepSizeError. Records psi on the
// uniform grid of steps+1 points over [0, z_max].
EvolutionRecord propagate(const Hamiltonian& h, const ComplexVector& psi0,
                          double z_max, int steps, double dz_cap = 0.0);

// Exact eigen-expansion psi(z) = V exp(-i E z) V^{-1} psi0. Used to
// cross-check the integrator; throws NearDefectiveError when the eigenvector
// basis is too ill-conditioned to invert (close to an exceptional point).
EvolutionRecord propagate_eigen_expansion(const Hamiltonian& h, const ComplexVector& psi0,
                                          double z_max, int steps);

// Spec-aware variant: refuses outright inside the near-defect window
// |strength - c| < 1e-3, where the eigenbasis cannot be trusted.
EvolutionRecord propagate_eigen_expansion(const LatticeSpec& spec, const ComplexVector& psi0,
                                          double z_max, int steps);

// Unit vector with a single excitation at `site` (1-based).
ComplexVector delta_excitation(int n_sites, int site);

// Mean normalized intensity at `site` over the second half of the z grid
// (the ballistic transient is discarded).
double localization_score(const EvolutionRecord& record, int site);

} // namespace nhssh

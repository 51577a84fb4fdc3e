#pragma once

// One-dimensional SSH lattice with a single embedded non-Hermitian defect.
//
// Sites are numbered 1..n_sites in every interface. Bonds alternate between
// the weak coupling k (bond 1-2, 3-4, ...) and the strong coupling c
// (bond 2-3, 4-5, ...), so the dimer with index m occupies sites 2m and 2m+1
// and is joined by a c bond. With 0 < k < c the clean chain carries one
// zero-energy mode localized at the left edge.
//
// Two defect variants act on dimer m:
//   AsymmetricCoupling — the hop 2m -> 2m+1 becomes c - g while 2m+1 -> 2m
//                        stays c (one-way weakened bond).
//   PTDimer            — balanced gain +i*gamma on site 2m and loss -i*gamma
//                        on site 2m+1.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace nhssh {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class DefectVariant { None, AsymmetricCoupling, PTDimer };

struct DefectSpec {
    DefectVariant variant = DefectVariant::None;
    int m = 1;               // dimer index; defect occupies sites 2m and 2m+1
    double strength = 0.0;   // g for AsymmetricCoupling, gamma for PTDimer

    bool operator==(const DefectSpec&) const = default;
};

struct LatticeSpec {
    int n_sites = 25;   // odd, >= 3
    double k = 0.5;     // intra-cell coupling, 0 < k < c
    double c = 1.0;     // inter-cell (dimer) coupling
    DefectSpec defect;

    bool operator==(const LatticeSpec&) const = default;

    // Site indices (1-based) of the defect dimer.
    int defect_site_gain() const { return 2 * defect.m; }
    int defect_site_loss() const { return 2 * defect.m + 1; }
};

// Dense complex Hamiltonian; semantic indexing is 1-based (site n maps to
// row/column n-1 of the underlying matrix).
using Hamiltonian = ComplexMatrix;

// One human-readable entry per violated invariant; empty iff spec is valid.
std::vector<std::string> validate_spec(const LatticeSpec& spec);

// Builds the dense tridiagonal Hamiltonian realizing the coupled-mode
// equations for the given spec. Throws InvalidSpecError on a bad spec.
Hamiltonian build_hamiltonian(const LatticeSpec& spec);

inline std::string to_string(DefectVariant v) {
    switch (v) {
        case DefectVariant::AsymmetricCoupling: return "asym";
        case DefectVariant::PTDimer: return "pt";
        default: return "none";
    }
}

} // namespace nhssh

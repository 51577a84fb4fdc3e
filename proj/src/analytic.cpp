#include "nhssh/analytic.hpp"

#include "nhssh/errors.hpp"
#include "nhssh/spectral.hpp"

#include <cmath>
#include <sstream>

namespace nhssh {

namespace {

void require_valid_clean(int n_sites, double k, double c) {
    LatticeSpec spec;
    spec.n_sites = n_sites;
    spec.k = k;
    spec.c = c;
    const auto violations = validate_spec(spec);
    if (!violations.empty()) {
        std::string msg = "invalid lattice parameters:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw InvalidSpecError(msg);
    }
}

// Geometric odd-site tail psi_{start+2l} = (-k/c)^l starting at `start`,
// zeros elsewhere; the shape every E = 0 wave-matching solution takes.
ModeProfile geometric_tail_mode(int n_sites, double k, double c, int start) {
    ComplexVector amplitudes = ComplexVector::Zero(n_sites);
    const double ratio = -k / c;
    double value = 1.0;
    for (int site = start; site <= n_sites; site += 2) {
        amplitudes(site - 1) = value;
        value *= ratio;
    }
    return make_mode_profile(std::move(amplitudes), ModeProfile::Source::Analytic);
}

} // namespace

ModeProfile clean_zero_mode(int n_sites, double k, double c) {
    require_valid_clean(n_sites, k, c);
    return geometric_tail_mode(n_sites, k, c, 1);
}

ModeProfile relocated_zero_mode_at_gc(int n_sites, double k, double c, int m) {
    require_valid_clean(n_sites, k, c);
    if (m < 1 || m > (n_sites - 1) / 2) {
        throw InvalidSpecError("relocated_zero_mode_at_gc: m out of range");
    }
    // Sites 1..2m vanish; the tail restarts at the defect site 2m+1.
    return geometric_tail_mode(n_sites, k, c, 2 * m + 1);
}

ModeProfile pt_right_edge_mode_at_gamma_c(int n_sites, double k, double c,
                                          std::complex<double> e_t) {
    require_valid_clean(n_sites, k, c);
    if (e_t == std::complex<double>(0.0, 0.0)) {
        throw InvalidSpecError("pt_right_edge_mode_at_gamma_c: e_t must be nonzero");
    }

    const int n = n_sites;
    const double gamma = c;   // defect pinned at gamma = c
    ComplexVector psi = ComplexVector::Zero(n);
    const std::complex<double> i_unit(0.0, 1.0);

    // Row N:   E psi_N = c psi_{N-1} - i*gamma psi_N
    psi(n - 1) = 1.0;
    psi(n - 2) = (e_t + i_unit * gamma) / c * psi(n - 1);

    // Row N-1: E psi_{N-1} = k psi_{N-2} + c psi_N + i*gamma psi_{N-1}
    if (n >= 3) {
        psi(n - 3) = ((e_t - i_unit * gamma) * psi(n - 2) - c * psi(n - 1)) / k;
    }

    // Bulk rows N-2 down to 2, each solved for the site to its left.
    for (int row = n - 2; row >= 2; --row) {
        const std::complex<double> here = psi(row - 1);
        const std::complex<double> right = psi(row);
        std::complex<double> left;
        if (row % 2 == 0) {
            // E psi_row = k psi_{row-1} + c psi_{row+1}
            left = (e_t * here - c * right) / k;
        } else {
            // E psi_row = c psi_{row-1} + k psi_{row+1}
            left = (e_t * here - k * right) / c;
        }
        psi(row - 2) = left;
        if (std::abs(left) > 1e12) {
            std::ostringstream os;
            os << "pt_right_edge_mode_at_gamma_c: |psi_" << (row - 1) << "| = "
               << std::abs(left) << " exceeds 1e12 * |psi_N|; e_t " << e_t
               << " is not consistent with a right-localized mode";
            throw RecursionBlowupError(os.str());
        }
    }
    return make_mode_profile(std::move(psi), ModeProfile::Source::Analytic);
}

EliminationReport verify_no_real_zero_at_gamma_c(int n_sites, double k, double c,
                                                 double gamma) {
    require_valid_clean(n_sites, k, c);

    EliminationReport report;

    LatticeSpec spec;
    spec.n_sites = n_sites;
    spec.k = k;
    spec.c = c;
    spec.defect = {DefectVariant::PTDimer, (n_sites - 1) / 2, gamma};
    const Spectrum spectrum =
        eigendecompose(build_hamiltonian(spec), residual_tolerance_for_strength(gamma, c));
    report.numeric_min_abs_energy = spectrum.eigenvalues.cwiseAbs().minCoeff();

    report.applicable = gamma == c;
    if (!report.applicable) {
        report.steps.push_back("gamma != c: elimination argument not applicable");
        return report;
    }

    const int n = n_sites;
    const auto site_eq = [](int row) {
        std::ostringstream os;
        os << "row " << row;
        return os.str();
    };

    // Assume E = 0 and keep psi_N symbolic. Row N gives psi_{N-1} = i psi_N;
    // substituting into row N-1 cancels the c psi_N term and forces
    // psi_{N-2} = 0. The even rows then zero every odd site down the chain,
    // row 1 zeroes psi_2, the odd rows zero every even site up the chain,
    // and row N finally collapses psi_N itself.
    report.steps.push_back("assume E = 0 with psi_" + std::to_string(n) + " free");
    report.steps.push_back(site_eq(n) + ": psi_" + std::to_string(n - 1) + " = i psi_" +
                           std::to_string(n));
    report.steps.push_back(site_eq(n - 1) + ": k psi_" + std::to_string(n - 2) +
                           " + c psi_" + std::to_string(n) + " + i c (i psi_" +
                           std::to_string(n) + ") = 0 => psi_" + std::to_string(n - 2) +
                           " = 0");
    for (int site = n - 4; site >= 1; site -= 2) {
        report.steps.push_back(site_eq(site + 1) + ": psi_" + std::to_string(site) +
                               " = -(c/k) psi_" + std::to_string(site + 2) + " = 0");
    }
    report.steps.push_back(site_eq(1) + ": k psi_2 = 0 => psi_2 = 0");
    for (int site = 4; site <= n - 1; site += 2) {
        report.steps.push_back(site_eq(site - 1) + ": psi_" + std::to_string(site) +
                               " = -(c/k) psi_" + std::to_string(site - 2) + " = 0");
    }
    report.steps.push_back("psi_" + std::to_string(n) + " = -i psi_" +
                           std::to_string(n - 1) + " = 0");
    report.steps.push_back("all amplitudes vanish: trivial solution forced");
    report.trivial_solution_forced = true;
    return report;
}

} // namespace nhssh

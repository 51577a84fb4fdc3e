#include "nhssh/dynamics.hpp"

#include "nhssh/errors.hpp"
#include "nhssh/spectral.hpp"

#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <sstream>

namespace nhssh {

namespace {

// Substep cap keeping the RK4 global error well under the 1e-8 contract for
// ||H|| * z_max up to ~100.
constexpr double kAutoStepFactor = 0.002;
// RK4 imaginary-axis stability limit is |h*lambda| <= 2*sqrt(2); stay inside.
constexpr double kStabilityLimit = 2.6;

double infinity_norm(const Hamiltonian& h) {
    return h.cwiseAbs().rowwise().sum().maxCoeff();
}

void validate_propagation_inputs(const Hamiltonian& h, const ComplexVector& psi0,
                                 double z_max, int steps) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw InvalidSpecError("propagate: Hamiltonian must be square and non-empty");
    }
    if (psi0.size() != h.rows()) {
        throw InvalidSpecError("propagate: psi0 length does not match Hamiltonian dimension");
    }
    if (!h.array().isFinite().all() || !psi0.array().isFinite().all()) {
        throw InvalidSpecError("propagate: non-finite input");
    }
    if (psi0.norm() == 0.0) {
        throw InvalidSpecError("propagate: psi0 must be nonzero");
    }
    if (!(z_max > 0.0)) {
        throw InvalidSpecError("propagate: z_max must be positive");
    }
    if (steps < 1) {
        throw InvalidSpecError("propagate: steps must be >= 1");
    }
}

EvolutionRecord make_record(const RealVector& z_grid, const Eigen::MatrixXcd& fields) {
    EvolutionRecord rec;
    rec.z_grid = z_grid;
    rec.fields = fields;
    rec.normalized_intensities = fields.cwiseAbs2().real();
    for (int t = 0; t < rec.normalized_intensities.rows(); ++t) {
        const double total = rec.normalized_intensities.row(t).sum();
        if (!(total > 0.0) || !std::isfinite(total)) {
            std::ostringstream os;
            os << "propagate: intensity degenerate at z = " << rec.z_grid(t)
               << " (integration diverged or field vanished)";
            throw StepSizeError(os.str());
        }
        rec.normalized_intensities.row(t) /= total;
    }
    return rec;
}

} // namespace

EvolutionRecord propagate(const Hamiltonian& h, const ComplexVector& psi0, double z_max,
                          int steps, double dz_cap) {
    validate_propagation_inputs(h, psi0, z_max, steps);

    const double h_norm = infinity_norm(h);
    const double dz = z_max / steps;
    double cap;
    if (dz_cap > 0.0) {
        if (dz_cap * h_norm > kStabilityLimit) {
            std::ostringstream os;
            os << "propagate: dz_cap " << dz_cap << " violates the RK4 stability bound "
               << kStabilityLimit << " / ||H|| = " << kStabilityLimit / h_norm;
            throw StepSizeError(os.str());
        }
        cap = dz_cap;
    } else {
        cap = h_norm > 0.0 ? kAutoStepFactor / h_norm : dz;
    }
    const int substeps = std::max(1, static_cast<int>(std::ceil(dz / cap)));
    const double step = dz / substeps;

    const std::complex<double> minus_i(0.0, -1.0);
    const auto rhs = [&](const ComplexVector& psi) -> ComplexVector {
        return minus_i * (h * psi);
    };

    RealVector z_grid(steps + 1);
    Eigen::MatrixXcd fields(steps + 1, h.rows());
    ComplexVector psi = psi0;
    z_grid(0) = 0.0;
    fields.row(0) = psi;
    for (int t = 1; t <= steps; ++t) {
        for (int s = 0; s < substeps; ++s) {
            const ComplexVector k1 = rhs(psi);
            const ComplexVector k2 = rhs(psi + 0.5 * step * k1);
            const ComplexVector k3 = rhs(psi + 0.5 * step * k2);
            const ComplexVector k4 = rhs(psi + step * k3);
            psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        z_grid(t) = dz * t;
        fields.row(t) = psi;
        if (!psi.array().isFinite().all()) {
            std::ostringstream os;
            os << "propagate: field diverged at z = " << z_grid(t);
            throw StepSizeError(os.str());
        }
    }
    return make_record(z_grid, fields);
}

EvolutionRecord propagate_eigen_expansion(const Hamiltonian& h, const ComplexVector& psi0,
                                          double z_max, int steps) {
    validate_propagation_inputs(h, psi0, z_max, steps);

    const Spectrum s = eigendecompose(h, kNearDefectResidualTolerance);
    Eigen::FullPivLU<ComplexMatrix> lu(s.right_eigenvectors);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-12)) {
        std::ostringstream os;
        os << "propagate_eigen_expansion: eigenvector basis is near-defective "
           << "(rcond " << rcond << ")";
        throw NearDefectiveError(os.str());
    }
    const ComplexVector coefficients = lu.solve(psi0);
    const double reconstruction =
        (s.right_eigenvectors * coefficients - psi0).norm() / psi0.norm();
    if (!(reconstruction < 1e-8)) {
        std::ostringstream os;
        os << "propagate_eigen_expansion: eigenvector basis is near-defective "
           << "(biorthogonal projection residual " << reconstruction << ")";
        throw NearDefectiveError(os.str());
    }

    const double dz = z_max / steps;
    RealVector z_grid(steps + 1);
    Eigen::MatrixXcd fields(steps + 1, h.rows());
    const std::complex<double> minus_i(0.0, -1.0);
    for (int t = 0; t <= steps; ++t) {
        const double z = dz * t;
        z_grid(t) = z;
        const ComplexVector phases =
            (minus_i * z * s.eigenvalues.array()).exp() * coefficients.array();
        fields.row(t) = s.right_eigenvectors * phases;
    }
    return make_record(z_grid, fields);
}

EvolutionRecord propagate_eigen_expansion(const LatticeSpec& spec, const ComplexVector& psi0,
                                          double z_max, int steps) {
    if (spec.defect.variant != DefectVariant::None &&
        std::abs(spec.defect.strength - spec.c) < kNearDefectWindow) {
        std::ostringstream os;
        os << "propagate_eigen_expansion: strength " << spec.defect.strength
           << " is within " << kNearDefectWindow << " of c = " << spec.c
           << " (near-defective Hamiltonian); use the direct integrator";
        throw NearDefectiveError(os.str());
    }
    return propagate_eigen_expansion(build_hamiltonian(spec), psi0, z_max, steps);
}

ComplexVector delta_excitation(int n_sites, int site) {
    if (n_sites < 1) {
        throw InvalidSpecError("delta_excitation: n_sites must be positive");
    }
    if (site < 1 || site > n_sites) {
        std::ostringstream os;
        os << "delta_excitation: site " << site << " out of range 1.." << n_sites;
        throw InvalidSpecError(os.str());
    }
    ComplexVector psi = ComplexVector::Zero(n_sites);
    psi(site - 1) = 1.0;
    return psi;
}

double localization_score(const EvolutionRecord& record, int site) {
    const int points = record.num_points();
    if (points == 0) {
        throw InvalidSpecError("localization_score: empty record");
    }
    if (site < 1 || site > record.n_sites()) {
        throw InvalidSpecError("localization_score: site out of range");
    }
    const int start = points / 2;
    double sum = 0.0;
    for (int t = start; t < points; ++t) {
        sum += record.normalized_intensities(t, site - 1);
    }
    return sum / (points - start);
}

} // namespace nhssh

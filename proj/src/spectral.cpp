#include "nhssh/spectral.hpp"

#include "nhssh/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace nhssh {

namespace {

bool all_finite(const ComplexMatrix& h) {
    return h.array().isFinite().all();
}

std::string format_strength_tag(double strength) {
    std::ostringstream os;
    os << "at strength=" << strength << ": ";
    return os.str();
}

} // namespace

Spectrum eigendecompose(const Hamiltonian& h, double residual_tolerance) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw InvalidSpecError("eigendecompose: matrix must be square and non-empty");
    }
    if (!all_finite(h)) {
        throw InvalidSpecError("eigendecompose: matrix contains non-finite entries");
    }

    const int n = static_cast<int>(h.rows());
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(h, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        // ComplexSchur caps the QR iteration at 30 sweeps per row.
        const long budget = 30L * n;
        throw ConvergenceError("eigendecompose: QR iteration did not converge", budget);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& raw = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&raw](int a, int b) {
        if (raw(a).real() != raw(b).real()) return raw(a).real() < raw(b).real();
        if (raw(a).imag() != raw(b).imag()) return raw(a).imag() < raw(b).imag();
        return a < b;
    });

    Spectrum s;
    s.eigenvalues.resize(n);
    s.right_eigenvectors.resize(n, n);
    s.residuals.resize(n);
    for (int i = 0; i < n; ++i) {
        s.eigenvalues(i) = raw(order[i]);
        ComplexVector v = solver.eigenvectors().col(order[i]);
        v /= v.norm();
        s.right_eigenvectors.col(i) = v;
        s.residuals(i) = (h * v - s.eigenvalues(i) * v).norm();
    }

    const double max_entry = h.cwiseAbs().maxCoeff();
    const double tol = residual_tolerance * std::max(1.0, max_entry / 10.0);
    const double worst = s.residuals.maxCoeff();
    if (worst > tol) {
        std::ostringstream os;
        os << "eigendecompose: residual " << worst << " exceeds tolerance " << tol;
        throw ConvergenceError(os.str(), 30L * n);
    }
    return s;
}

double band_isolation(std::complex<double> energy, double k, double c) {
    const auto dist = [&energy](double lo, double hi) {
        const double x = std::clamp(energy.real(), lo, hi);
        return std::abs(energy - std::complex<double>(x, 0.0));
    };
    return std::min(dist(c - k, c + k), dist(-c - k, -(c - k)));
}

ModeClassification classify_modes(const LatticeSpec& spec, const Spectrum& spectrum) {
    const int n = spectrum.dim();
    const double ztol = 1e-8 * std::max(1.0, spec.c);

    std::vector<int> candidates;
    for (int i = 0; i < n; ++i) {
        if (std::abs(spectrum.eigenvalues(i).real()) < ztol) candidates.push_back(i);
    }
    if (candidates.empty()) {
        throw ClassificationError("classify_modes: no eigenvalue with |Re E| below tolerance");
    }
    // The chiral/PT zero mode keeps Re E = 0 exactly; in broken phases the
    // bound pair joins it on the imaginary axis, so ties break by |Im E|.
    std::sort(candidates.begin(), candidates.end(), [&spectrum](int a, int b) {
        const double ia = std::abs(spectrum.eigenvalues(a).imag());
        const double ib = std::abs(spectrum.eigenvalues(b).imag());
        if (ia != ib) return ia < ib;
        return a < b;
    });
    if (candidates.size() >= 2) {
        const double first = std::abs(spectrum.eigenvalues(candidates[0]).imag());
        const double second = std::abs(spectrum.eigenvalues(candidates[1]).imag());
        if (second - first < ztol) {
            std::ostringstream os;
            os << "classify_modes: zero-mode candidates " << spectrum.eigenvalues(candidates[0])
               << " and " << spectrum.eigenvalues(candidates[1])
               << " are within tolerance of each other";
            throw ClassificationError(os.str());
        }
    }

    ModeClassification cls;
    cls.zero_mode_index = candidates[0];

    const bool has_defect =
        spec.defect.variant != DefectVariant::None && spec.defect.strength > 0.0;
    if (has_defect) {
        std::vector<int> rest;
        for (int i = 0; i < n; ++i) {
            if (i != cls.zero_mode_index) rest.push_back(i);
        }
        std::sort(rest.begin(), rest.end(), [&](int a, int b) {
            const double sa = band_isolation(spectrum.eigenvalues(a), spec.k, spec.c);
            const double sb = band_isolation(spectrum.eigenvalues(b), spec.k, spec.c);
            if (sa != sb) return sa > sb;
            return a < b;
        });
        int lo = rest[0], hi = rest[1];
        if (lo > hi) std::swap(lo, hi);
        cls.bound_pair = std::make_pair(lo, hi);
    }

    for (int i = 0; i < n; ++i) {
        if (i == cls.zero_mode_index) continue;
        if (cls.bound_pair && (i == cls.bound_pair->first || i == cls.bound_pair->second))
            continue;
        cls.band_indices.push_back(i);
    }
    return cls;
}

ModeProfile make_mode_profile(ComplexVector amplitudes, ModeProfile::Source source) {
    int imax = 0;
    amplitudes.cwiseAbs().maxCoeff(&imax);
    const std::complex<double> a = amplitudes(imax);
    if (std::abs(a) == 0.0) {
        throw ClassificationError("make_mode_profile: zero amplitude vector");
    }
    amplitudes *= std::conj(a) / std::abs(a);   // largest component -> real positive

    ModeProfile p;
    // Intensities from the raw amplitudes (scale-invariant); amplitudes are
    // then normalized so analytic and numeric profiles are comparable.
    p.intensities = amplitudes.cwiseAbs2();
    p.intensities /= p.intensities.sum();
    p.amplitudes = std::move(amplitudes);
    p.amplitudes /= p.amplitudes.norm();
    p.source = source;
    return p;
}

ModeProfile zero_mode_profile(const LatticeSpec& spec, const Spectrum& spectrum) {
    const auto cls = classify_modes(spec, spectrum);
    return make_mode_profile(spectrum.right_eigenvectors.col(cls.zero_mode_index),
                             ModeProfile::Source::Numeric);
}

namespace {

SweepRow compute_sweep_row(const LatticeSpec& spec_template, double strength) {
    LatticeSpec spec = spec_template;
    spec.defect.strength = strength;

    const Hamiltonian h = build_hamiltonian(spec);
    const Spectrum s = eigendecompose(h, residual_tolerance_for_strength(strength, spec.c));
    const auto cls = classify_modes(spec, s);
    const auto profile = zero_mode_profile(spec, s);

    const int n = s.dim();
    const int defect_site = spec.defect_site_loss();   // 2m+1

    SweepRow row;
    row.strength = strength;
    row.eigenvalues = s.eigenvalues;
    row.residuals = s.residuals;
    row.zero_mode_energy = s.eigenvalues(cls.zero_mode_index);
    if (cls.bound_pair) {
        row.bound_pair_energies = std::make_pair(s.eigenvalues(cls.bound_pair->first),
                                                 s.eigenvalues(cls.bound_pair->second));
    }
    row.site1_intensity = profile.intensity(1);
    row.defect_site_intensity = profile.intensity(defect_site);
    row.site1_intensity_per_mode.resize(n);
    row.defect_site_intensity_per_mode.resize(n);
    for (int i = 0; i < n; ++i) {
        row.site1_intensity_per_mode(i) = std::norm(s.right_eigenvectors(0, i));
        row.defect_site_intensity_per_mode(i) = std::norm(s.right_eigenvectors(defect_site - 1, i));
    }
    return row;
}

} // namespace

SweepTable sweep_defect_strength(const LatticeSpec& spec_template,
                                 const std::vector<double>& strengths, int jobs) {
    if (strengths.empty()) {
        throw InvalidSpecError("sweep_defect_strength: strengths must be non-empty");
    }
    for (double s : strengths) {
        if (!(s >= 0.0)) {
            throw InvalidSpecError("sweep_defect_strength: strengths must be non-negative");
        }
    }
    if (spec_template.defect.variant == DefectVariant::None) {
        throw InvalidSpecError("sweep_defect_strength: template must carry a defect variant");
    }

    const int count = static_cast<int>(strengths.size());
    SweepTable table;
    table.template_spec = spec_template;
    table.defect_site = spec_template.defect_site_loss();
    table.rows.resize(count);

    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, count);

    std::vector<std::exception_ptr> failures(count);
    std::atomic<int> next{0};
    const auto worker = [&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                table.rows[i] = compute_sweep_row(spec_template, strengths[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (int i = 0; i < count; ++i) {
        if (!failures[i]) continue;
        const std::string tag = format_strength_tag(strengths[i]);
        try {
            std::rethrow_exception(failures[i]);
        } catch (const ClassificationError& e) {
            throw ClassificationError(tag + e.what());
        } catch (const ConvergenceError& e) {
            throw ConvergenceError(tag + e.what(), e.iterations());
        } catch (const InvalidSpecError& e) {
            throw InvalidSpecError(tag + e.what());
        } catch (const std::exception& e) {
            throw Error(tag + e.what());
        }
    }
    return table;
}

namespace {

struct OverlapProbe {
    double overlap = 0.0;
    double gap = 0.0;
};

// Largest pairwise |<v_i, v_j>| among unit right eigenvectors, and the
// eigenvalue gap of that pair.
OverlapProbe probe_overlap(const Hamiltonian& h) {
    const Spectrum s = eigendecompose(h, kNearDefectResidualTolerance);
    const int n = s.dim();
    OverlapProbe best;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double o =
                std::abs(s.right_eigenvectors.col(i).dot(s.right_eigenvectors.col(j)));
            if (o > best.overlap) {
                best.overlap = o;
                best.gap = std::abs(s.eigenvalues(i) - s.eigenvalues(j));
            }
        }
    }
    return best;
}

} // namespace

EPReport locate_exceptional_point(const std::function<Hamiltonian(double)>& build,
                                  double lo, double hi, double tolerance, int scan_points) {
    if (!(lo < hi)) {
        throw InvalidSpecError("locate_exceptional_point: bracket must satisfy lo < hi");
    }
    if (!(tolerance > 0.0)) {
        throw InvalidSpecError("locate_exceptional_point: tolerance must be positive");
    }
    scan_points = std::max(scan_points, 5);

    const auto objective = [&build](double s) { return probe_overlap(build(s)).overlap; };

    double best_overlap = -1.0;
    int best_index = 0;
    std::vector<double> grid(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        grid[i] = lo + (hi - lo) * i / (scan_points - 1);
        const double o = objective(grid[i]);
        if (o > best_overlap) {
            best_overlap = o;
            best_index = i;
        }
    }

    double a = grid[std::max(best_index - 1, 0)];
    double b = grid[std::min(best_index + 1, scan_points - 1)];

    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > tolerance) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = objective(x1);
        }
        best_overlap = std::max(best_overlap, std::max(f1, f2));
    }

    const double located = 0.5 * (a + b);
    const OverlapProbe at_located = probe_overlap(build(located));
    best_overlap = std::max(best_overlap, at_located.overlap);
    if (best_overlap <= 0.9) {
        std::ostringstream os;
        os << "locate_exceptional_point: max eigenvector overlap " << best_overlap
           << " in [" << lo << ", " << hi << "] never exceeded 0.9";
        throw NoExceptionalPointError(os.str());
    }

    EPReport report;
    report.parameter_value = located;
    report.min_eigenvalue_gap = at_located.gap;
    report.max_eigenvector_overlap = at_located.overlap;
    return report;
}

EPReport locate_exceptional_point(const LatticeSpec& spec_template, double lo, double hi,
                                  double tolerance, int scan_points) {
    if (spec_template.defect.variant == DefectVariant::None) {
        throw InvalidSpecError("locate_exceptional_point: template must carry a defect variant");
    }
    const auto build = [spec_template](double strength) {
        LatticeSpec spec = spec_template;
        spec.defect.strength = strength;
        return build_hamiltonian(spec);
    };
    return locate_exceptional_point(build, lo, hi, tolerance, scan_points);
}

Hamiltonian asymmetric_dimer_hamiltonian(double c, double g) {
    Hamiltonian h(2, 2);
    h << 0.0, c - g, c, 0.0;
    return h;
}

Hamiltonian pt_dimer_hamiltonian(double c, double gamma) {
    Hamiltonian h(2, 2);
    h << std::complex<double>(0.0, gamma), std::complex<double>(c, 0.0),
         std::complex<double>(c, 0.0), std::complex<double>(0.0, -gamma);
    return h;
}

} // namespace nhssh

#include "nhssh/dynamics.hpp"

#include "nhssh/errors.hpp"
#include "nhssh/spectral.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

using namespace nhssh;

namespace {

Hamiltonian clean25() {
    return build_hamiltonian(LatticeSpec{25, 0.5, 1.0, DefectSpec{}});
}

Hamiltonian pt25(double gamma) {
    return build_hamiltonian(LatticeSpec{25, 0.5, 1.0,
                                         DefectSpec{DefectVariant::PTDimer, 12, gamma}});
}

} // namespace

TEST_CASE("trivial evolutions") {
    SUBCASE("H = 0 keeps the state put") {
        const Hamiltonian h = Hamiltonian::Zero(1, 1);
        const auto rec = propagate(h, delta_excitation(1, 1), 5.0, 10);
        for (int t = 0; t < rec.num_points(); ++t) {
            CHECK(std::abs(rec.fields(t, 0) - std::complex<double>(1.0, 0.0)) < 1e-14);
            CHECK(rec.normalized_intensities(t, 0) == 1.0);
        }
    }
    SUBCASE("two-level Rabi oscillation with period pi") {
        Hamiltonian h(2, 2);
        h << 0.0, 1.0, 1.0, 0.0;
        const auto rec = propagate(h, delta_excitation(2, 1), M_PI, 2);
        CHECK(std::norm(rec.fields(1, 0)) < 1e-9);        // z = pi/2: fully transferred
        CHECK(std::norm(rec.fields(2, 0)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("single gain site grows like exp(gamma z)") {
        Hamiltonian h(1, 1);
        h(0, 0) = std::complex<double>(0.0, 0.3);
        const auto rec = propagate(h, delta_excitation(1, 1), 1.0, 4);
        CHECK(std::norm(rec.fields(4, 0)) == doctest::Approx(std::exp(0.6)).epsilon(1e-9));
        CHECK(rec.normalized_intensities(3, 0) == 1.0);
    }
}

TEST_CASE("record structure: grid starts at zero, per-z intensities sum to one") {
    const auto rec = propagate(pt25(1.0), delta_excitation(25, 25), 30.0, 120);
    REQUIRE(rec.num_points() == 121);
    CHECK(rec.z_grid(0) == 0.0);
    for (int t = 1; t < rec.num_points(); ++t) CHECK(rec.z_grid(t) > rec.z_grid(t - 1));
    for (int t = 0; t < rec.num_points(); ++t) {
        CHECK(rec.normalized_intensities.row(t).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Hermitian evolution conserves the raw norm to 1e-9 over z = 30") {
    const auto rec = propagate(clean25(), delta_excitation(25, 1), 30.0, 150);
    for (int t = 0; t < rec.num_points(); ++t) {
        CHECK(std::abs(rec.fields.row(t).norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("integrator agrees with the eigen-expansion away from exceptional points") {
    SUBCASE("clean lattice") {
        const auto a = propagate(clean25(), delta_excitation(25, 1), 30.0, 60);
        const auto b = propagate_eigen_expansion(clean25(), delta_excitation(25, 1), 30.0, 60);
        CHECK((a.fields - b.fields).cwiseAbs().maxCoeff() <= 1e-8);
    }
    SUBCASE("PT lattice at gamma = 0.5") {
        const auto a = propagate(pt25(0.5), delta_excitation(25, 25), 30.0, 60);
        const auto b = propagate_eigen_expansion(pt25(0.5), delta_excitation(25, 25), 30.0, 60);
        CHECK((a.fields - b.fields).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("time reversal: propagating with -H returns the initial state") {
    const Hamiltonian h = clean25();
    const ComplexVector psi0 = delta_excitation(25, 13);
    const auto forward = propagate(h, psi0, 10.0, 50);
    const ComplexVector end = forward.fields.row(forward.num_points() - 1);
    const auto backward = propagate(-h, end, 10.0, 50);
    const ComplexVector back = backward.fields.row(backward.num_points() - 1);
    CHECK((back - psi0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("propagation is linear in the initial state") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        const auto variant = static_cast<DefectVariant>(trial % 3);
        const LatticeSpec spec = test::random_spec(rng, variant);
        const Hamiltonian h = build_hamiltonian(spec);
        const int n = spec.n_sites;
        ComplexVector psi1(n), psi2(n);
        for (int i = 0; i < n; ++i) {
            psi1(i) = std::complex<double>(dist(rng), dist(rng));
            psi2(i) = std::complex<double>(dist(rng), dist(rng));
        }
        const std::complex<double> a(dist(rng), dist(rng));
        const std::complex<double> b(dist(rng), dist(rng));

        const auto r1 = propagate(h, psi1, 3.0, 12);
        const auto r2 = propagate(h, psi2, 3.0, 12);
        const auto r12 = propagate(h, a * psi1 + b * psi2, 3.0, 12);
        const Eigen::MatrixXcd combined = a * r1.fields + b * r2.fields;
        CHECK((r12.fields - combined).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("delta excitation basis vectors") {
    const auto e1 = delta_excitation(3, 1);
    CHECK(e1(0) == std::complex<double>(1.0, 0.0));
    CHECK(e1(1) == std::complex<double>(0.0, 0.0));
    CHECK(e1(2) == std::complex<double>(0.0, 0.0));
    CHECK(delta_excitation(25, 25)(24) == std::complex<double>(1.0, 0.0));
    CHECK(delta_excitation(25, 13)(12) == std::complex<double>(1.0, 0.0));
    CHECK_THROWS_AS(delta_excitation(25, 0), InvalidSpecError);
    CHECK_THROWS_AS(delta_excitation(25, 26), InvalidSpecError);
}

TEST_CASE("localization scores quantify the figure-4 contrast") {
    SUBCASE("no coupling means no spreading") {
        const Hamiltonian h = Hamiltonian::Zero(3, 3);
        const auto rec = propagate(h, delta_excitation(3, 1), 5.0, 10);
        CHECK(localization_score(rec, 1) == 1.0);
        CHECK(localization_score(rec, 2) == 0.0);
    }
    SUBCASE("edge excitation stays put, opposite edge spreads ballistically") {
        const auto left = propagate(clean25(), delta_excitation(25, 1), 30.0, 600);
        const auto right = propagate(clean25(), delta_excitation(25, 25), 30.0, 600);
        const double s_left = localization_score(left, 1);
        const double s_right = localization_score(right, 25);
        CHECK(s_right < 0.05);
        CHECK(s_left > 5.0 * s_right);
    }
    SUBCASE("gamma = c restores localization at the right edge") {
        const auto no_defect = propagate(clean25(), delta_excitation(25, 25), 30.0, 600);
        const auto at_c = propagate(pt25(1.0), delta_excitation(25, 25), 30.0, 600);
        const double s0 = localization_score(no_defect, 25);
        const double s1 = localization_score(at_c, 25);
        CHECK(s1 >= 3.0 * s0);
    }
    SUBCASE("site bounds") {
        const auto rec = propagate(Hamiltonian::Zero(2, 2), delta_excitation(2, 1), 1.0, 2);
        CHECK_THROWS_AS(localization_score(rec, 0), InvalidSpecError);
        CHECK_THROWS_AS(localization_score(rec, 3), InvalidSpecError);
    }
}

TEST_CASE("propagate validates inputs and step sizes") {
    const Hamiltonian h = clean25();
    CHECK_THROWS_AS(propagate(h, ComplexVector::Zero(25), 1.0, 10), InvalidSpecError);
    CHECK_THROWS_AS(propagate(h, delta_excitation(25, 1), -1.0, 10), InvalidSpecError);
    CHECK_THROWS_AS(propagate(h, delta_excitation(25, 1), 1.0, 0), InvalidSpecError);
    CHECK_THROWS_AS(propagate(h, delta_excitation(24, 1), 1.0, 10), InvalidSpecError);
    // dz_cap far beyond the RK4 stability bound
    CHECK_THROWS_AS(propagate(h, delta_excitation(25, 1), 1.0, 1, 100.0), StepSizeError);
}

TEST_CASE("eigen-expansion refuses the near-defect strength window") {
    // Asym lattice within 1e-3 of c, where the EP makes the basis untrustworthy.
    const LatticeSpec spec{25, 0.5, 1.0,
                           DefectSpec{DefectVariant::AsymmetricCoupling, 5, 1.00098}};
    CHECK_THROWS_AS(propagate_eigen_expansion(spec, delta_excitation(25, 1), 1.0, 4),
                    NearDefectiveError);
    // A heavily duplicated column must trip the conditioning guard directly.
    Hamiltonian defective(2, 2);
    defective << 0.0, 0.0, 1.0, 0.0;   // Jordan block: eigenvectors coincide
    CHECK_THROWS_AS(propagate_eigen_expansion(defective, delta_excitation(2, 1), 1.0, 4),
                    NearDefectiveError);
}

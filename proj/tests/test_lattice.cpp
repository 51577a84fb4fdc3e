#include "nhssh/lattice.hpp"

#include "nhssh/errors.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <complex>
#include <random>

using namespace nhssh;

namespace {

LatticeSpec make_spec(int n, double k, double c, DefectVariant variant = DefectVariant::None,
                      int m = 1, double strength = 0.0) {
    return LatticeSpec{n, k, c, DefectSpec{variant, m, strength}};
}

} // namespace

TEST_CASE("clean 3-site Hamiltonian matches the coupled-mode equations") {
    const Hamiltonian h = build_hamiltonian(make_spec(3, 0.5, 1.0));
    Hamiltonian expected(3, 3);
    expected << 0.0, 0.5, 0.0,
                0.5, 0.0, 1.0,
                0.0, 1.0, 0.0;
    CHECK((h - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("asymmetric coupling weakens exactly one directed hop") {
    const Hamiltonian h =
        build_hamiltonian(make_spec(5, 0.5, 1.0, DefectVariant::AsymmetricCoupling, 1, 1.0));
    // Row 2: g = c wipes out the 2 -> 3 hop while 3 -> 2 keeps c.
    CHECK(h(1, 0) == std::complex<double>(0.5, 0.0));
    CHECK(h(1, 2) == std::complex<double>(0.0, 0.0));
    CHECK(h(1, 3) == std::complex<double>(0.0, 0.0));
    CHECK(h(2, 1) == std::complex<double>(1.0, 0.0));
    CHECK(h(2, 3) == std::complex<double>(0.5, 0.0));
}

TEST_CASE("PT dimer puts balanced gain and loss on the diagonal") {
    const Hamiltonian h =
        build_hamiltonian(make_spec(3, 0.5, 1.0, DefectVariant::PTDimer, 1, 0.7));
    CHECK(h(1, 1) == std::complex<double>(0.0, 0.7));
    CHECK(h(2, 2) == std::complex<double>(0.0, -0.7));
    CHECK(h(0, 0) == std::complex<double>(0.0, 0.0));
    CHECK(h(0, 1) == std::complex<double>(0.5, 0.0));
    CHECK(h(1, 2) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("validate_spec reports one entry per violated invariant") {
    CHECK(validate_spec(make_spec(4, 0.5, 1.0)) ==
          std::vector<std::string>{"n_sites must be odd"});
    CHECK(validate_spec(make_spec(25, 0.5, 1.0)).empty());
    CHECK(validate_spec(make_spec(5, 1.5, 1.0)) ==
          std::vector<std::string>{"k must satisfy 0 < k < c"});
    CHECK(validate_spec(make_spec(5, 0.0, 1.0)) ==
          std::vector<std::string>{"k must satisfy 0 < k < c"});

    const auto m_out = validate_spec(make_spec(5, 0.5, 1.0, DefectVariant::PTDimer, 3, 0.5));
    REQUIRE(m_out.size() == 1);
    CHECK(m_out[0].find("m must satisfy") == 0);

    const auto neg = validate_spec(make_spec(5, 0.5, 1.0, DefectVariant::PTDimer, 1, -0.5));
    REQUIRE(neg.size() == 1);
    CHECK(neg[0] == "defect strength must be non-negative");

    // m and strength are ignored without a defect variant
    CHECK(validate_spec(make_spec(5, 0.5, 1.0, DefectVariant::None, 99, -3.0)).empty());
}

TEST_CASE("build_hamiltonian rejects invalid specs") {
    CHECK_THROWS_AS(build_hamiltonian(make_spec(4, 0.5, 1.0)), InvalidSpecError);
    CHECK_THROWS_AS(build_hamiltonian(make_spec(1, 0.5, 1.0)), InvalidSpecError);
    CHECK_THROWS_AS(build_hamiltonian(make_spec(5, 1.0, 1.0)), InvalidSpecError);
    CHECK_THROWS_AS(build_hamiltonian(make_spec(5, 0.5, 1.0, DefectVariant::AsymmetricCoupling,
                                                3, 0.5)),
                    InvalidSpecError);
}

TEST_CASE("tridiagonal structure and chiral symmetry hold for random specs") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 60; ++trial) {
        const auto variant = static_cast<DefectVariant>(trial % 3);
        const LatticeSpec spec = test::random_spec(rng, variant);
        const Hamiltonian h = build_hamiltonian(spec);
        const int n = spec.n_sites;

        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (std::abs(i - j) > 1) CHECK(h(i, j) == std::complex<double>(0.0, 0.0));
            }
        }

        // Sigma = diag(+1, -1, +1, ...)
        RealVector sigma(n);
        for (int i = 0; i < n; ++i) sigma(i) = (i % 2 == 0) ? 1.0 : -1.0;
        const Hamiltonian flipped = sigma.asDiagonal() * h * sigma.asDiagonal();
        if (spec.defect.variant == DefectVariant::PTDimer) {
            CHECK((flipped + h.conjugate()).cwiseAbs().maxCoeff() == 0.0);
        } else {
            CHECK((flipped + h).cwiseAbs().maxCoeff() == 0.0);
            for (int i = 0; i < n; ++i) CHECK(h(i, i) == std::complex<double>(0.0, 0.0));
        }
    }
}

TEST_CASE("zero-strength defects reproduce the clean Hamiltonian bit for bit") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        for (auto variant : {DefectVariant::AsymmetricCoupling, DefectVariant::PTDimer}) {
            LatticeSpec spec = test::random_spec(rng, variant);
            spec.defect.strength = 0.0;
            LatticeSpec clean = spec;
            clean.defect = DefectSpec{};
            const Hamiltonian a = build_hamiltonian(spec);
            const Hamiltonian b = build_hamiltonian(clean);
            CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("off-diagonal count matches 2(n-1)") {
    const LatticeSpec spec = make_spec(25, 0.5, 1.0);
    const Hamiltonian h = build_hamiltonian(spec);
    int nonzero = 0;
    for (int i = 0; i < 25; ++i) {
        for (int j = 0; j < 25; ++j) {
            if (i != j && h(i, j) != std::complex<double>(0.0, 0.0)) ++nonzero;
        }
    }
    CHECK(nonzero == 2 * (25 - 1));
}

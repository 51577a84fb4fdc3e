#include "nhssh/lattice.hpp"

#include "nhssh/errors.hpp"

#include <complex>
#include <sstream>

namespace nhssh {

std::vector<std::string> validate_spec(const LatticeSpec& spec) {
    std::vector<std::string> violations;
    if (spec.n_sites % 2 == 0) {
        violations.push_back("n_sites must be odd");
    }
    if (spec.n_sites < 3) {
        violations.push_back("n_sites must be at least 3");
    }
    if (!(spec.k > 0.0 && spec.k < spec.c)) {
        violations.push_back("k must satisfy 0 < k < c");
    }
    if (spec.defect.variant != DefectVariant::None) {
        const int m_max = (spec.n_sites - 1) / 2;
        if (spec.defect.m < 1 || spec.defect.m > m_max) {
            std::ostringstream os;
            os << "m must satisfy 1 <= m <= (n_sites - 1) / 2 = " << m_max;
            violations.push_back(os.str());
        }
        if (spec.defect.strength < 0.0) {
            violations.push_back("defect strength must be non-negative");
        }
    }
    return violations;
}

Hamiltonian build_hamiltonian(const LatticeSpec& spec) {
    const auto violations = validate_spec(spec);
    if (!violations.empty()) {
        std::string msg = "invalid lattice spec:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw InvalidSpecError(msg);
    }

    const int n = spec.n_sites;
    Hamiltonian h = Hamiltonian::Zero(n, n);

    // Bond b joins sites b and b+1; odd bonds carry k, even bonds carry c.
    for (int b = 1; b < n; ++b) {
        const double coupling = (b % 2 == 1) ? spec.k : spec.c;
        h(b - 1, b) = coupling;
        h(b, b - 1) = coupling;
    }

    const int gain = spec.defect_site_gain();   // site 2m
    const int loss = spec.defect_site_loss();   // site 2m+1
    switch (spec.defect.variant) {
        case DefectVariant::AsymmetricCoupling:
            // Hop 2m -> 2m+1 weakened to c - g; reverse hop untouched.
            h(gain - 1, loss - 1) = spec.c - spec.defect.strength;
            break;
        case DefectVariant::PTDimer:
            h(gain - 1, gain - 1) = std::complex<double>(0.0, spec.defect.strength);
            h(loss - 1, loss - 1) = std::complex<double>(0.0, -spec.defect.strength);
            break;
        case DefectVariant::None:
            break;
    }
    return h;
}

} // namespace nhssh

#pragma once

#include "nhssh/lattice.hpp"

namespace nhssh {

// Per-site complex amplitudes and normalized intensities of one mode.
// Global phase convention: the largest-magnitude amplitude is real positive.
struct ModeProfile {
    enum class Source { Analytic, Numeric };

    ComplexVector amplitudes;   // length n_sites, site n at index n-1
    RealVector intensities;     // |amplitude|^2 / sum, sums to 1
    Source source = Source::Numeric;

    int n_sites() const { return static_cast<int>(amplitudes.size()); }

    // 1-based site accessors.
    std::complex<double> amplitude(int site) const { return amplitudes(site - 1); }
    double intensity(int site) const { return intensities(site - 1); }

    // Index (1-based) of the most intense site; first one on ties.
    int argmax_site() const {
        int best = 0;
        intensities.maxCoeff(&best);
        return best + 1;
    }
};

// Applies the phase convention and fills intensities from raw amplitudes.
ModeProfile make_mode_profile(ComplexVector amplitudes, ModeProfile::Source source);

} // namespace nhssh

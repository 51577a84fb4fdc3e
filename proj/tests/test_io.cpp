#include "nhssh/io.hpp"

#include "nhssh/errors.hpp"

#include "doctest.h"
#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace nhssh;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

Spectrum tiny_spectrum() {
    Spectrum s;
    s.eigenvalues.resize(2);
    s.eigenvalues << std::complex<double>(-1.0, 0.0), std::complex<double>(1.0, 0.25);
    s.right_eigenvectors = ComplexMatrix::Identity(2, 2);
    s.residuals.resize(2);
    s.residuals << 1e-16, 2e-16;
    return s;
}

} // namespace

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.25) == "-0.25");

    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-30, 30);
    for (int i = 0; i < 2000; ++i) {
        const double x = mantissa(rng) * std::pow(10.0, exponent(rng));
        const std::string text = format_double(x);
        CHECK(text.size() <= 24);
        double back = 0.0;
        const auto r = std::from_chars(text.data(), text.data() + text.size(), back);
        REQUIRE(r.ec == std::errc());
        CHECK(back == x);
    }
}

TEST_CASE("CSV headers match the published schemas") {
    std::ostringstream spectrum_out;
    write_spectrum_csv(spectrum_out, tiny_spectrum());
    CHECK(first_line(spectrum_out.str()) == "index,re_E,im_E,residual");
    CHECK(spectrum_out.str().find("1,-1,0,1e-16") != std::string::npos);

    ModeProfile profile = make_mode_profile(
        (ComplexVector(2) << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 0.5))
            .finished(),
        ModeProfile::Source::Analytic);
    std::ostringstream profile_out;
    write_profile_csv(profile_out, profile);
    CHECK(first_line(profile_out.str()) == "site,re_psi,im_psi,intensity");

    SweepTable table;
    table.defect_site = 3;
    SweepRow row;
    row.strength = 0.25;
    row.eigenvalues = tiny_spectrum().eigenvalues;
    row.residuals = tiny_spectrum().residuals;
    row.zero_mode_energy = {0.0, 0.0};
    row.site1_intensity_per_mode = (RealVector(2) << 0.5, 0.25).finished();
    row.defect_site_intensity_per_mode = (RealVector(2) << 0.1, 0.2).finished();
    table.rows.push_back(row);
    std::ostringstream sweep_out;
    write_sweep_csv(sweep_out, table);
    CHECK(first_line(sweep_out.str()) ==
          "param,mode_index,re_E,im_E,site1_intensity,defect_site_intensity");
    CHECK(sweep_out.str().find("0.25,1,-1,0,0.5,0.1") != std::string::npos);

    EvolutionRecord record;
    record.z_grid = (RealVector(2) << 0.0, 1.0).finished();
    record.fields = ComplexMatrix::Identity(2, 2);
    record.normalized_intensities = Eigen::MatrixXd::Identity(2, 2);
    std::ostringstream evo_out;
    write_evolution_csv(evo_out, record);
    CHECK(first_line(evo_out.str()) == "z,site,norm_intensity");

    std::ostringstream grid_out;
    write_evolution_grid(grid_out, record);
    CHECK(first_line(grid_out.str()) == "# zsteps=2 nsites=2");
    CHECK(grid_out.str() == "# zsteps=2 nsites=2\n1 0\n0 1\n");
}

TEST_CASE("lattice spec JSON round-trip with exact field names") {
    LatticeSpec spec{25, 0.5, 1.0, DefectSpec{DefectVariant::AsymmetricCoupling, 5, 1.5}};
    const json j = lattice_spec_to_json(spec);
    CHECK(j.at("n_sites") == 25);
    CHECK(j.at("k") == 0.5);
    CHECK(j.at("c") == 1.0);
    CHECK(j.at("defect").at("variant") == "asym");
    CHECK(j.at("defect").at("m") == 5);
    CHECK(j.at("defect").at("strength") == 1.5);
    CHECK(lattice_spec_from_json(j) == spec);

    spec.defect.variant = DefectVariant::PTDimer;
    CHECK(lattice_spec_from_json(lattice_spec_to_json(spec)) == spec);
    spec.defect.variant = DefectVariant::None;
    CHECK(lattice_spec_from_json(lattice_spec_to_json(spec)) == spec);
}

TEST_CASE("lattice spec JSON rejects malformed input") {
    const json good = lattice_spec_to_json(LatticeSpec{});
    CHECK_THROWS_AS(lattice_spec_from_json(json::array()), InvalidSpecError);

    json missing = good;
    missing.erase("k");
    CHECK_THROWS_AS(lattice_spec_from_json(missing), InvalidSpecError);

    json unknown = good;
    unknown["extra"] = 1;
    CHECK_THROWS_AS(lattice_spec_from_json(unknown), InvalidSpecError);

    json bad_variant = good;
    bad_variant["defect"]["variant"] = "weird";
    CHECK_THROWS_AS(lattice_spec_from_json(bad_variant), InvalidSpecError);

    json bad_type = good;
    bad_type["n_sites"] = "25";
    CHECK_THROWS_AS(lattice_spec_from_json(bad_type), InvalidSpecError);

    json unknown_defect = good;
    unknown_defect["defect"]["gain"] = 0.1;
    CHECK_THROWS_AS(lattice_spec_from_json(unknown_defect), InvalidSpecError);
}

TEST_CASE("atomic writes never leave partial files") {
    const fs::path dir = fs::temp_directory_path() / "nhssh_io_test";
    fs::create_directories(dir);
    const fs::path target = dir / "out.csv";

    SUBCASE("successful write replaces the target") {
        write_file_atomic(target.string(), [](std::ostream& out) { out << "hello\n"; });
        std::ifstream in(target);
        std::string line;
        std::getline(in, line);
        CHECK(line == "hello");
        CHECK(!fs::exists(target.string() + ".tmp"));
    }
    SUBCASE("failing writer leaves no target and no temp file") {
        const fs::path fresh = dir / "never.csv";
        fs::remove(fresh);
        CHECK_THROWS_AS(write_file_atomic(fresh.string(),
                                          [](std::ostream&) { throw Error("boom"); }),
                        Error);
        CHECK(!fs::exists(fresh));
        CHECK(!fs::exists(fresh.string() + ".tmp"));
    }
    fs::remove_all(dir);
}

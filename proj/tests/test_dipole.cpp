#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <unistd.h>

#include "aqi/dipole.hpp"
#include "aqi/error.hpp"
#include "doctest.h"

using namespace aqi;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

DriverConfig coherent(double eps = 1e-2, double phi = 0.0) {
    auto c = default_config();
    c.squeezing = {SqueezingKind::coherent, 0.0, FluctuationAxis::amplitude};
    c.epsilon_ratio = eps;
    c.phi = phi;
    return c;
}

const PhaseSpaceSample origin{0, 0.0, 0.0, 1.0};

double plateau_ratio(const DipoleRecord& r, int lo, int hi, int parity) {
    double s = 0.0;
    for (int q = lo; q <= hi; ++q)
        if (q % 2 == parity) s += std::abs(r.at(q));
    return s;
}

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("aqi-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("fourier component of a pure tone") {
    const auto c = default_config();
    const auto& g = c.time_grid;
    std::vector<double> d(g.size());
    for (int q : {3, 12, 21}) {
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::cos(q * c.omega * g.at(i));
        // five full cycles: int cos(qwt) e^{iqwt} dt = T/2
        const auto f = fourier_component(d, g, c.omega, q, SpectralWindow::none);
        CHECK(f.real() == doctest::Approx(g.duration() / 2).epsilon(1e-10));
        CHECK(std::abs(f.imag()) < 1e-9 * g.duration());
        const auto h = fourier_component(d, g, c.omega, q, SpectralWindow::hann);
        CHECK(h.real() == doctest::Approx(g.duration() / 4).epsilon(1e-10));
    }
}

TEST_CASE("spectrum recurrence agrees with direct quadrature") {
    const auto c = coherent();
    const auto rec = sfa_dipole(c, origin);
    double scale = 0.0;
    for (auto v : rec.spectrum) scale = std::max(scale, std::abs(v));
    for (double q : {0.5, 1.0, 7.0, 12.0, 20.5, 33.0}) {
        const auto direct = fourier_component(rec.d_t, c.time_grid, c.omega, q, rec.window);
        CHECK(std::abs(direct - rec.at(q)) < 1e-12 * scale);
    }
}

TEST_CASE("dipole is real and its spectrum conjugate symmetric") {
    const auto c = coherent(1e-2, 0.7);
    const auto rec = sfa_dipole(c, origin);
    REQUIRE(rec.d_t.size() == c.time_grid.size());
    for (double v : rec.d_t) REQUIRE(std::isfinite(v));
    double scale = 0.0;
    for (auto v : rec.spectrum) scale = std::max(scale, std::abs(v));
    for (double q : {1.0, 2.0, 9.5, 15.0}) {
        const auto neg = fourier_component(rec.d_t, c.time_grid, c.omega, -q, rec.window);
        CHECK(std::abs(neg - std::conj(rec.at(q))) < 1e-12 * scale);
    }
}

TEST_CASE("matrix element is odd and peaks near the binding momentum") {
    for (double p : {0.1, 0.5, 1.3}) CHECK(dipole_matrix_element(-p, 0.5) == -dipole_matrix_element(p, 0.5));
    // d/dp [p/(p^2+1)^3] = 0 at p^2 = 1/5
    const double pk = std::sqrt(0.2);
    CHECK(dipole_matrix_element(pk, 0.5) > dipole_matrix_element(pk * 0.98, 0.5));
    CHECK(dipole_matrix_element(pk, 0.5) > dipole_matrix_element(pk * 1.02, 0.5));
}

TEST_CASE("cutoff estimate follows Ip + 3.17 Up") {
    auto c = default_config();
    const double up = c.E_omega * c.E_omega / (4 * c.omega * c.omega);
    CHECK(cutoff_estimate_raw(c) == doctest::Approx((c.Ip + 3.17 * up) / c.omega));
    CHECK(cutoff_estimate(c) == 21);
    c.E_omega = 0.04;
    CHECK(cutoff_estimate(c) % 2 == 1);
}

TEST_CASE("measured cutoff follows the SFA cutoff law") {
    // The saddle-point cutoff of the Lewenstein model carries 1.32 Ip rather than Ip.
    for (double e : {0.04, 0.053, 0.06, 0.07}) {
        auto c = coherent(0.0);
        c.E_omega = e;
        const double up = e * e / (4 * c.omega * c.omega);
        const double law = (1.32 * c.Ip + 3.17 * up) / c.omega;
        const auto rec = sfa_dipole(c, origin);
        INFO("E_omega = " << e << " law " << law << " measured " << measured_cutoff(rec));
        CHECK(std::abs(measured_cutoff(rec) - law) <= 2.0);
    }
}

TEST_CASE("spectrum decays beyond the cutoff") {
    const auto c = coherent(0.0);
    const auto rec = sfa_dipole(c, origin);
    const int qc = cutoff_estimate(c);
    double plateau = 0.0, tail = 0.0;
    int np = 0, nt = 0;
    for (int q = 7; q <= rec.q_values.back(); q += 2) {
        if (q <= qc) plateau += std::abs(rec.at(q)), ++np;
        if (q > qc + 4) tail += std::abs(rec.at(q)), ++nt;
    }
    CHECK(tail / nt < 1e-2 * plateau / np);
}

TEST_CASE("the 2w field breaks the half-cycle symmetry") {
    const auto bare = sfa_dipole(coherent(0.0), origin);
    CHECK(plateau_ratio(bare, 8, 20, 0) < 1e-6 * plateau_ratio(bare, 8, 20, 1));
    const auto a = sfa_dipole(coherent(1e-2, 0.0), origin);
    const auto b = sfa_dipole(coherent(1e-2, pi / 2), origin);
    const double ra = plateau_ratio(a, 8, 20, 0) / plateau_ratio(a, 8, 20, 1);
    const double rb = plateau_ratio(b, 8, 20, 0) / plateau_ratio(b, 8, 20, 1);
    CHECK(ra > 1e-3);
    CHECK(rb > 1e-3);
    CHECK(std::abs(ra - rb) > 0.05 * std::max(ra, rb));
}

TEST_CASE("even harmonics respond linearly to a weak 2w field") {
    const auto ref = sfa_dipole(coherent(1e-2), origin);
    for (double s : {0.5, 2.0}) {
        const auto r = sfa_dipole(coherent(s * 1e-2), origin);
        for (int q = 10; q <= 18; q += 2) {
            INFO("q = " << q << " scale " << s);
            CHECK(std::abs(r.at(q)) / std::abs(ref.at(q)) == doctest::Approx(s).epsilon(0.1).scale(0));
        }
    }
}

TEST_CASE("cache round trip and recovery from a damaged entry") {
    const auto dir = scratch_dir("cache");
    const auto c = coherent();
    const DipoleCache cache(dir);
    const SfaOptions opts;
    const auto key = DipoleCache::key(c, opts, origin);
    CHECK(!cache.load(key));
    const auto rec = sfa_dipole(c, origin, opts);
    cache.store(key, rec);
    const auto back = cache.load(key);
    REQUIRE(back);
    CHECK(back->d_t == rec.d_t);
    CHECK(back->spectrum == rec.spectrum);
    CHECK(back->q_values == rec.q_values);

    auto other = c;
    other.phi = 0.1;
    CHECK(DipoleCache::key(other, opts, origin) != key);

    // truncate the stored file: the ensemble recomputes and warns
    const auto file = dir / (key + ".dip");
    fs::resize_file(file, fs::file_size(file) / 2);
    int warnings = 0;
    EnsembleOptions eo;
    eo.cache = &cache;
    eo.warn = [&](const std::string&) { ++warnings; };
    const std::vector<PhaseSpaceSample> one{origin};
    const auto recs = ensemble_dipoles(c, one, eo);
    CHECK(warnings == 1);
    CHECK(recs[0].d_t == rec.d_t);
    CHECK(cache.load(key));
    fs::remove_all(dir);
}

TEST_CASE("unwritable cache location is a cache error") {
    try {
        DipoleCache cache("/proc/aqi-no-such-dir");
        cache.store("k", sfa_dipole(coherent(), origin));
        FAIL("expected a cache error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::cache);
    }
}

TEST_CASE("off-grid orders are rejected") {
    const auto rec = sfa_dipole(coherent(), origin);
    CHECK_THROWS_AS(rec.at(12.25), Error);
    CHECK_THROWS_AS(rec.at(-1.0), Error);
}

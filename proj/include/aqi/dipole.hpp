#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aqi/field.hpp"

namespace aqi {

using cplx = std::complex<double>;

enum class SpectralWindow { none, hann };

SpectralWindow default_window(const DriverConfig& config);

struct DipoleRecord {
    std::size_t sample_id = 0;
    std::vector<double> d_t;         // on the config time grid
    std::vector<double> q_values;    // 0, 0.5, 1, ... q_max
    std::vector<cplx> spectrum;      // d(q w), parallel to q_values
    SpectralWindow window = SpectralWindow::hann;

    // Spectrum at an exact grid order; throws Error{argument} off-grid.
    cplx at(double q) const;
    std::size_t index_of(double q) const;
};

struct SfaOptions {
    double excursion_cycles = 1.5;
    double eps_reg = 1e-6;
    // Fraction of the excursion window over which a cos^2 taper switches the
    // ionization-time integrand off.
    double taper_fraction = 0.1;
    std::optional<SpectralWindow> window;  // unset: default_window(config)
    double q_max = 0.0;                    // <= 0: max(40, 2 q_cutoff + 8)
};

// Hydrogen-like 1-D bound-state dipole matrix element, real part of
// d(p) = i C p / (p^2 + 2 Ip)^3.
double dipole_matrix_element(double p, double Ip);

DipoleRecord sfa_dipole(const DriverConfig& config, const PhaseSpaceSample& sample, const SfaOptions& opts = {});

// Quadrature of int dt w(t) d(t) e^{i q w t} over the grid (trapezoid weights).
cplx fourier_component(std::span<const double> d_t, const TimeGrid& grid, double omega, double q,
                       SpectralWindow window);

std::vector<double> half_integer_orders(double q_max);

std::vector<cplx> harmonic_spectrum(std::span<const double> d_t, const TimeGrid& grid, double omega,
                                    SpectralWindow window, std::span<const double> q_values);
std::vector<cplx> harmonic_spectrum(const DipoleRecord& record, const TimeGrid& grid, double omega,
                                    SpectralWindow window);

// (Ip + 3.17 Up)/w rounded to the nearest odd integer.
int cutoff_estimate(const DriverConfig& config);
double cutoff_estimate_raw(const DriverConfig& config);

// Last odd harmonic whose (odd-harmonic, log-smoothed) intensity is within
// `decades` of the plateau level.
int measured_cutoff(const DipoleRecord& record, double decades = 1.0);

// Persistent per-record cache: one file per (config, sample) content hash.
class DipoleCache {
public:
    explicit DipoleCache(std::filesystem::path dir);

    std::optional<DipoleRecord> load(const std::string& key) const;
    void store(const std::string& key, const DipoleRecord& record) const;
    const std::filesystem::path& dir() const { return dir_; }

    // Hex digest of the physical config fields, SFA options and sample coordinates.
    static std::string key(const DriverConfig& config, const SfaOptions& opts, const PhaseSpaceSample& sample);

private:
    std::filesystem::path dir_;
};

using WarningSink = std::function<void(const std::string&)>;

struct EnsembleOptions {
    SfaOptions sfa;
    const DipoleCache* cache = nullptr;
    unsigned jobs = 0;  // 0: hardware concurrency
    WarningSink warn;
};

std::vector<DipoleRecord> ensemble_dipoles(const DriverConfig& config, std::span<const PhaseSpaceSample> samples,
                                           const EnsembleOptions& opts = {});

}  // namespace aqi

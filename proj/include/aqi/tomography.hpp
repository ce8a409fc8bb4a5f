#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aqi/phasespace.hpp"
#include "aqi/wigner.hpp"

namespace aqi {

enum class PdfMethod { analytic, fock };

// Density of X_theta outcomes on `x_axis`. The fock path diagonalizes the
// truncated quadrature operator and projects the density matrix onto its
// eigenvectors.
std::vector<double> quadrature_pdf(const HarmonicMixture& mixture, double theta, const std::vector<double>& x_axis,
                                   PdfMethod method = PdfMethod::analytic,
                                   std::size_t n_cutoff = default_fock_cutoff, const WarningSink& warn = {});

inline constexpr std::size_t default_outcome_axis_points = 2001;

// +-(max_k |sqrt(2) beta_k| + 6 sqrt(0.5)) with `n_points` samples.
std::vector<double> outcome_axis(const HarmonicMixture& mixture, std::size_t n_points = default_outcome_axis_points);

// Inverse-CDF draws from a tabulated density; each outcome is an axis point.
std::vector<double> sample_outcomes(const std::vector<double>& x_axis, const std::vector<double>& pdf,
                                    std::size_t n_shots, std::uint64_t seed);

struct AQTTrace {
    double q = 0.0;
    double theta = 0.0;
    std::vector<double> phi_values;
    std::vector<std::vector<double>> outcomes;
    std::uint64_t seed = 0;
    std::size_t n_shots = 0;
};

inline constexpr std::size_t default_phase_settings = 20;
inline constexpr std::size_t default_shots = 500;

struct TraceOptions {
    EnsembleOptions ensemble;
    PdfMethod method = PdfMethod::fock;
    std::size_t n_cutoff = default_fock_cutoff;
    std::size_t axis_points = default_outcome_axis_points;
};

std::vector<double> uniform_phases(std::size_t n_phases);

// Full field -> dipole -> mixture pipeline at each phase of a uniform grid
// over [0, 2pi); the phase setting of shot set j is seeded by mix_seed(seed, j).
AQTTrace collect_aqt_trace(const DriverConfig& config, double q, double theta, std::size_t n_phases,
                           std::size_t n_shots, std::uint64_t seed, const TraceOptions& opts = {});

// Homodyne emulation: one fixed state measured along X_phi for each phase.
AQTTrace rotated_state_trace(const HarmonicMixture& mixture, std::size_t n_phases, std::size_t n_shots,
                             std::uint64_t seed, PdfMethod method = PdfMethod::analytic);

inline constexpr double default_k_cutoff = 3.0;

// Band-limited back-projection kernel (1/2pi^2) int_0^kc k cos(k u) dk.
double radon_kernel(double u, double k_c);

struct AQTGrid {
    PhaseSpaceGrid grid;
    double k_c = default_k_cutoff;
    std::size_t n_phases = 0;
    std::size_t n_shots = 0;
    double theta = 0.0;
};

// Filtered back-projection with the phases as projection angles. With
// `subtract_mean` the per-phase outcome mean is removed first.
AQTGrid inverse_radon(const AQTTrace& trace, const std::vector<double>& x_axis, const std::vector<double>& p_axis,
                      double k_c = default_k_cutoff, bool subtract_mean = false, unsigned jobs = 1);

struct VarianceEstimate {
    double theta = 0.0;
    double variance = 0.0;  // mean of the per-phase sample variances
    double error = 0.0;     // bootstrap standard deviation
    std::vector<double> per_phase;
};

inline constexpr std::size_t default_bootstrap = 200;

VarianceEstimate trace_variance(const AQTTrace& trace, std::size_t n_boot = default_bootstrap,
                                std::uint64_t seed = 0);

std::vector<VarianceEstimate> aqt_variance_vs_theta(const DriverConfig& config, double q,
                                                    const std::vector<double>& theta_list, std::size_t n_phases,
                                                    std::size_t n_shots, std::uint64_t seed,
                                                    const TraceOptions& opts = {});

}  // namespace aqi

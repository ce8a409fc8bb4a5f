#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "aqi/phasespace.hpp"

namespace aqi {

inline constexpr double default_gabor_delta = 6.0;  // a.u., about 145 as

// Row-major in tau: magnitude[i * omega_axis.size() + j] = |G(omega_j, tau_i)|.
struct GaborMap {
    std::vector<double> tau_axis;
    std::vector<double> omega_axis;
    std::vector<double> magnitude;
    double delta = default_gabor_delta;

    double at(std::size_t i, std::size_t j) const { return magnitude[i * omega_axis.size() + j]; }
};

// w(t) = exp(-t^2/delta^2) / (delta sqrt(pi))
double gabor_window(double t, double delta);

// G(omega, tau) = int d(t) w(t - tau) exp(-i omega t) dt by the trapezoid rule
// on the stored grid.
GaborMap gabor_transform(std::span<const double> d_t, const TimeGrid& grid, double delta,
                         const std::vector<double>& tau_axis, const std::vector<double>& omega_axis,
                         unsigned jobs = 1);

// Default axes: `n_tau` centers across the grid and harmonic orders
// q_lo..q_hi in steps of dq, as angular frequencies.
std::vector<double> default_tau_axis(const TimeGrid& grid, std::size_t n_tau = 200);
std::vector<double> harmonic_omega_axis(double omega, double q_lo, double q_hi, double dq);

// Weight-averaged dipole sum_k w_k d_k(t).
std::vector<double> ensemble_dipole(std::span<const PhaseSpaceSample> samples, std::span<const DipoleRecord> records);

GaborMap ensemble_gabor(const DriverConfig& config, std::span<const PhaseSpaceSample> samples,
                        std::span<const DipoleRecord> records, double delta, const std::vector<double>& tau_axis,
                        const std::vector<double>& omega_axis, unsigned jobs = 1);

// ||A - B||_2 / sqrt(||A||_2 ||B||_2) over equally shaped maps.
double gabor_distance(const GaborMap& a, const GaborMap& b);

enum class SigmaSource { intensity_inversion, homodyne_probe };
enum class Parity { odd, even };

struct SigmaEstimate {
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    SigmaSource source = SigmaSource::intensity_inversion;
};

// sigma_x = acos((I_odd - I_even)/I_0)/2, sigma_y = acosh((I_odd + I_even)/I_0)/2.
// Throws Error{inversion_domain} when the classical model cannot produce the intensities.
SigmaEstimate sigma_inversion(double I_odd, double I_even, double I_0);

// I_0 |cos sigma|^2 (odd) or I_0 |sin sigma|^2 (even).
double intensity_model(std::complex<double> sigma, double I_0, Parity parity);

struct HomodyneProbe {
    double q = 0.0;
    std::vector<double> theta;
    std::vector<double> value;  // sum_k w_k Re(d_k(q w) e^{-i theta})
    double amplitude = 0.0;     // |sum_k w_k d_k|
    double phase = 0.0;         // arg sum_k w_k d_k, up to the unknown dipole phase
};

HomodyneProbe homodyne_sigma_probe(const HarmonicMixture& even_mixture, std::span<const DipoleRecord> records,
                                   std::span<const PhaseSpaceSample> samples, const std::vector<double>& theta_list);

}  // namespace aqi

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aqi/phasespace.hpp"

namespace aqi {

// Quadratures use x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2),
// so the vacuum variance is 0.5.
inline double quadrature_mean(cplx beta, double theta) {
    return std::sqrt(2.0) * (beta * std::polar(1.0, -theta)).real();
}

double mean_photon(const HarmonicMixture& mixture);

double quadrature_variance(const HarmonicMixture& mixture, double theta);

struct QuadratureStats {
    double q = 0.0;
    std::vector<double> theta_grid;
    std::vector<double> variance;
    double var_min = 0.5;
    double var_max = 0.5;
    double theta_min = 0.0;
    double theta_max = 0.0;
};

// Extremes from the eigen-decomposition of the 2x2 covariance of the
// component quadrature means; `n_theta` > 0 also tabulates variance(theta)
// on [0, pi).
QuadratureStats variance_extrema(const HarmonicMixture& mixture, std::size_t n_theta = 0);

// Normally ordered intensity correlation; joint moments are sample-diagonal,
// so both mixtures must come from the same phase-space samples.
double g2_pair(const HarmonicMixture& m1, const HarmonicMixture& m2);

struct CorrelationMatrix {
    std::vector<double> q_list;
    std::size_t n = 0;
    std::vector<double> g2;         // row-major n x n, NaN where undefined
    std::vector<double> delta_csi;  // row-major n x n, NaN where undefined
    std::vector<bool> defined;

    double g2_at(std::size_t i, std::size_t j) const { return g2[i * n + j]; }
    double csi_at(std::size_t i, std::size_t j) const { return delta_csi[i * n + j]; }
};

CorrelationMatrix csi_matrix(std::span<const HarmonicMixture> mixtures, unsigned jobs = 1);

// 1 - sum_kl w_k w_l exp(-|beta_k - beta_l|^2)
double linear_entropy(const HarmonicMixture& mixture);
double purity(const HarmonicMixture& mixture);

}  // namespace aqi

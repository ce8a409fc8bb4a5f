#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "aqi/dipole.hpp"
#include "aqi/phasespace.hpp"

namespace aqi {

// Values are row-major in x: values[i * p_axis.size() + j] = W(x_i, p_j).
struct PhaseSpaceGrid {
    std::vector<double> x_axis;
    std::vector<double> p_axis;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * p_axis.size() + j]; }
};

PhaseSpaceGrid wigner_grid(const HarmonicMixture& mixture, const std::vector<double>& x_axis,
                           const std::vector<double>& p_axis, unsigned jobs = 1);

// Symmetric axis over +-(max_k |sqrt(2) beta_k| + 5).
std::vector<double> default_wigner_axis(const HarmonicMixture& mixture, std::size_t n_points = 201);

// atan2(p, x) of the arg-max cell; ties go to the smallest angle.
double wigner_maximum_angle(const PhaseSpaceGrid& grid);

inline constexpr std::size_t default_fock_cutoff = 200;

struct FockDensity {
    std::size_t n_cutoff = 0;
    Eigen::MatrixXcd matrix;
    double trace_deficit = 0.0;
};

// <n|beta> for n < n_cutoff, built by a logarithmic recurrence.
Eigen::VectorXcd coherent_state(cplx beta, std::size_t n_cutoff);

// Throws Error{truncation} if the kept trace falls below 0.999.
FockDensity fock_density(const HarmonicMixture& mixture, std::size_t n_cutoff = default_fock_cutoff,
                         const WarningSink& warn = {});

}  // namespace aqi

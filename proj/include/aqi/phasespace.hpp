#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aqi/dipole.hpp"
#include "aqi/error.hpp"
#include "aqi/field.hpp"

namespace aqi {

struct MixtureComponent {
    std::size_t sample_id = 0;
    double weight = 0.0;
    cplx beta;
};

// Post-limit state of one harmonic mode: sum_k w_k |beta_k><beta_k|.
struct HarmonicMixture {
    double q = 0.0;
    double phi = 0.0;
    double rho_coupling = 0.0;
    std::vector<MixtureComponent> components;

    std::size_t size() const { return components.size(); }
};

// Coherent mixture from explicit (weight, beta) pairs; ids are 0..n-1.
HarmonicMixture make_mixture(std::span<const double> weights, std::span<const cplx> betas, double q = 0.0);

// beta_k = sqrt(q) rho d_k(q w), weights from the phase-space samples.
HarmonicMixture build_mixture(double q, std::span<const DipoleRecord> records,
                              std::span<const PhaseSpaceSample> samples, double rho_coupling, double phi);
HarmonicMixture build_mixture(double q, std::span<const DipoleRecord> records,
                              std::span<const PhaseSpaceSample> samples, const DriverConfig& config);

// sum_k w_k f(beta_k). Evaluator exceptions are rethrown tagged with the sample id.
template <class F>
auto expectation(const HarmonicMixture& mixture, F&& f) -> decltype(f(cplx{}));

// Harmonic order whose mean photon number fixes rho when it is calibrated.
inline constexpr double reference_even_order = 12.0;
inline constexpr double reference_photon_number = 5.0;

// rho such that mean photon number of `q` equals `photons` for this ensemble.
double calibrate_rho(std::span<const DipoleRecord> records, std::span<const PhaseSpaceSample> samples,
                     double q = reference_even_order, double photons = reference_photon_number);

// Samples and dipole records of one driver configuration.
struct Ensemble {
    DriverConfig config;
    std::vector<PhaseSpaceSample> samples;
    std::vector<DipoleRecord> records;
};

Ensemble compute_ensemble(const DriverConfig& config, const EnsembleOptions& opts = {});

// config.rho_coupling when positive; otherwise calibrated on the phi = 0
// ensemble of `config`, so a phase sweep shares one coupling.
double resolve_rho(const DriverConfig& config, const EnsembleOptions& opts = {});

HarmonicMixture build_mixture(double q, const Ensemble& ensemble, double rho_coupling);

template <class F>
auto expectation(const HarmonicMixture& mixture, F&& f) -> decltype(f(cplx{})) {
    using R = decltype(f(cplx{}));
    R acc{};
    for (const auto& c : mixture.components) {
        try {
            acc += c.weight * f(c.beta);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (sample " + std::to_string(c.sample_id) + ")",
                        e.field());
        }
    }
    return acc;
}

}  // namespace aqi

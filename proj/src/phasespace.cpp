#include "aqi/phasespace.hpp"

#include <cmath>
#include <sstream>

#include "aqi/error.hpp"

namespace aqi {

HarmonicMixture make_mixture(std::span<const double> weights, std::span<const cplx> betas, double q) {
    if (weights.size() != betas.size() || weights.empty())
        fail(ErrorCode::argument, "weights and amplitudes must be nonempty and of equal length", "components");
    HarmonicMixture m;
    m.q = q;
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] >= 0.0)) fail(ErrorCode::argument, "negative mixture weight", "weights");
        total += weights[k];
        m.components.push_back({k, weights[k], betas[k]});
    }
    if (std::abs(total - 1.0) > 1e-10) fail(ErrorCode::argument, "mixture weights must sum to 1", "weights");
    return m;
}

HarmonicMixture build_mixture(double q, std::span<const DipoleRecord> records,
                              std::span<const PhaseSpaceSample> samples, double rho_coupling, double phi) {
    if (records.size() != samples.size() || records.empty())
        fail(ErrorCode::argument, "dipole records and phase-space samples are not aligned", "records");
    if (!(q > 0.0)) fail(ErrorCode::argument, "harmonic order must be positive", "q");
    HarmonicMixture m;
    m.q = q;
    m.phi = phi;
    m.rho_coupling = rho_coupling;
    m.components.reserve(samples.size());
    const double scale = std::sqrt(q) * rho_coupling;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (records[k].sample_id != samples[k].id)
            fail(ErrorCode::argument, "record/sample id mismatch at position " + std::to_string(k), "records");
        m.components.push_back({samples[k].id, samples[k].weight, scale * records[k].at(q)});
    }
    return m;
}

HarmonicMixture build_mixture(double q, std::span<const DipoleRecord> records,
                              std::span<const PhaseSpaceSample> samples, const DriverConfig& config) {
    double rho = config.rho_coupling;
    if (!(rho > 0.0)) rho = config.phi == 0.0 ? calibrate_rho(records, samples) : resolve_rho(config);
    return build_mixture(q, records, samples, rho, config.phi);
}

double calibrate_rho(std::span<const DipoleRecord> records, std::span<const PhaseSpaceSample> samples, double q,
                     double photons) {
    const auto unit = build_mixture(q, records, samples, 1.0, 0.0);
    double n = 0.0;
    for (const auto& c : unit.components) n += c.weight * std::norm(c.beta);
    if (!(n > 0.0)) {
        std::ostringstream os;
        os << "cannot calibrate rho: harmonic " << q << " has zero intensity";
        fail(ErrorCode::numerical, os.str(), "rho_coupling");
    }
    return std::sqrt(photons / n);
}

Ensemble compute_ensemble(const DriverConfig& config, const EnsembleOptions& opts) {
    Ensemble e;
    e.config = config;
    resolve_time_grid(e.config);
    e.samples = sample_phase_space(e.config);
    e.records = ensemble_dipoles(e.config, e.samples, opts);
    return e;
}

double resolve_rho(const DriverConfig& config, const EnsembleOptions& opts) {
    if (config.rho_coupling > 0.0) return config.rho_coupling;
    auto ref = config;
    ref.phi = 0.0;
    const auto e = compute_ensemble(ref, opts);
    return calibrate_rho(e.records, e.samples);
}

HarmonicMixture build_mixture(double q, const Ensemble& ensemble, double rho_coupling) {
    return build_mixture(q, ensemble.records, ensemble.samples, rho_coupling, ensemble.config.phi);
}

}  // namespace aqi

#include "aqi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aqi/detail/parallel.hpp"
#include "aqi/error.hpp"

namespace aqi {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

double gabor_window(double t, double delta) {
    const double u = t / delta;
    return std::exp(-u * u) / (delta * std::sqrt(pi));
}

GaborMap gabor_transform(std::span<const double> d_t, const TimeGrid& grid, double delta,
                         const std::vector<double>& tau_axis, const std::vector<double>& omega_axis, unsigned jobs) {
    if (d_t.size() != grid.size()) fail(ErrorCode::argument, "dipole series length does not match the time grid", "d_t");
    const double dt = grid.dt();
    if (!(delta >= 2.0 * dt)) {
        std::ostringstream os;
        os << "window width " << delta << " is below two time steps (" << 2.0 * dt << ")";
        fail(ErrorCode::domain, os.str(), "delta");
    }
    for (double tau : tau_axis)
        if (tau < grid.t_start || tau > grid.t_end)
            fail(ErrorCode::argument, "window centre outside the time grid", "tau_axis");
    GaborMap g{tau_axis, omega_axis, std::vector<double>(tau_axis.size() * omega_axis.size(), 0.0), delta};
    const std::size_t n = d_t.size();
    const double reach = 8.0 * delta;  // w < 1e-27 beyond
    const std::size_t nw = omega_axis.size();
    detail::parallel_for(tau_axis.size(), jobs, [&](std::size_t i) {
        const double tau = tau_axis[i];
        const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor((tau - reach - grid.t_start) / dt)));
        const auto hi = std::min(n - 1, static_cast<std::size_t>(std::ceil((tau + reach - grid.t_start) / dt)));
        std::vector<double> f(hi - lo + 1);
        for (std::size_t k = lo; k <= hi; ++k) {
            double v = d_t[k] * gabor_window(grid.at(k) - tau, delta);
            if (k == 0 || k == n - 1) v *= 0.5;
            f[k - lo] = v;
        }
        for (std::size_t j = 0; j < nw; ++j) {
            const double w = omega_axis[j];
            double re = 0.0, im = 0.0;
            for (std::size_t k = lo; k <= hi; ++k) {
                const double ph = w * grid.at(k);
                re += f[k - lo] * std::cos(ph);
                im -= f[k - lo] * std::sin(ph);
            }
            g.magnitude[i * nw + j] = std::hypot(re, im) * dt;
        }
    });
    return g;
}

std::vector<double> default_tau_axis(const TimeGrid& grid, std::size_t n_tau) {
    if (n_tau < 2) fail(ErrorCode::argument, "need at least two window centres", "n_tau");
    std::vector<double> tau(n_tau);
    for (std::size_t i = 0; i < n_tau; ++i)
        tau[i] = grid.t_start + grid.duration() * static_cast<double>(i) / static_cast<double>(n_tau - 1);
    return tau;
}

std::vector<double> harmonic_omega_axis(double omega, double q_lo, double q_hi, double dq) {
    if (!(dq > 0.0) || q_hi < q_lo) fail(ErrorCode::argument, "bad harmonic range", "omega_axis");
    std::vector<double> axis;
    const auto n = static_cast<std::size_t>(std::floor((q_hi - q_lo) / dq + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) axis.push_back(omega * (q_lo + dq * static_cast<double>(i)));
    return axis;
}

std::vector<double> ensemble_dipole(std::span<const PhaseSpaceSample> samples, std::span<const DipoleRecord> records) {
    if (samples.size() != records.size() || samples.empty())
        fail(ErrorCode::argument, "dipole records and phase-space samples are not aligned", "records");
    std::vector<double> d(records[0].d_t.size(), 0.0);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (records[k].d_t.size() != d.size()) fail(ErrorCode::argument, "records differ in length", "records");
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += samples[k].weight * records[k].d_t[i];
    }
    return d;
}

GaborMap ensemble_gabor(const DriverConfig& config, std::span<const PhaseSpaceSample> samples,
                        std::span<const DipoleRecord> records, double delta, const std::vector<double>& tau_axis,
                        const std::vector<double>& omega_axis, unsigned jobs) {
    const auto d = ensemble_dipole(samples, records);
    return gabor_transform(d, config.time_grid, delta, tau_axis, omega_axis, jobs);
}

double gabor_distance(const GaborMap& a, const GaborMap& b) {
    if (a.magnitude.size() != b.magnitude.size()) fail(ErrorCode::argument, "Gabor maps differ in shape", "maps");
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.magnitude.size(); ++i) {
        const double d = a.magnitude[i] - b.magnitude[i];
        diff += d * d;
        na += a.magnitude[i] * a.magnitude[i];
        nb += b.magnitude[i] * b.magnitude[i];
    }
    if (!(na > 0.0) || !(nb > 0.0)) fail(ErrorCode::domain, "distance to an all-zero Gabor map", "maps");
    return std::sqrt(diff) / std::sqrt(std::sqrt(na * nb));
}

SigmaEstimate sigma_inversion(double I_odd, double I_even, double I_0) {
    if (!(I_0 > 0.0) || !(I_odd >= 0.0) || !(I_even >= 0.0))
        fail(ErrorCode::inversion_domain, "intensities must be non-negative with I_0 > 0", "I_0");
    double c = (I_odd - I_even) / I_0;
    double h = (I_odd + I_even) / I_0;
    constexpr double slack = 1e-12;
    if (std::abs(c) > 1.0 + slack || h < 1.0 - slack) {
        std::ostringstream os;
        os << "no classical sigma reproduces I_odd = " << I_odd << ", I_even = " << I_even << ", I_0 = " << I_0;
        fail(ErrorCode::inversion_domain, os.str(), "intensities");
    }
    c = std::clamp(c, -1.0, 1.0);
    h = std::max(h, 1.0);
    return {0.5 * std::acos(c), 0.5 * std::acosh(h), SigmaSource::intensity_inversion};
}

double intensity_model(std::complex<double> sigma, double I_0, Parity parity) {
    const double cx = std::cos(sigma.real()), sx = std::sin(sigma.real());
    const double ch = std::cosh(sigma.imag()), sh = std::sinh(sigma.imag());
    if (parity == Parity::odd) return I_0 * (cx * cx * ch * ch + sx * sx * sh * sh);
    return I_0 * (sx * sx * ch * ch + cx * cx * sh * sh);
}

HomodyneProbe homodyne_sigma_probe(const HarmonicMixture& even_mixture, std::span<const DipoleRecord> records,
                                   std::span<const PhaseSpaceSample> samples, const std::vector<double>& theta_list) {
    const double q = even_mixture.q;
    if (q != std::round(q) || static_cast<long long>(q) % 2 != 0)
        fail(ErrorCode::argument, "homodyne probe needs an even harmonic", "q");
    if (records.size() != samples.size() || samples.size() != even_mixture.size())
        fail(ErrorCode::argument, "mixture, records and samples are not aligned", "records");
    cplx mean{0.0, 0.0};
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (records[k].sample_id != samples[k].id || even_mixture.components[k].sample_id != samples[k].id)
            fail(ErrorCode::argument, "sample id mismatch at position " + std::to_string(k), "records");
        mean += even_mixture.components[k].weight * records[k].at(q);
    }
    HomodyneProbe p;
    p.q = q;
    p.theta = theta_list;
    for (double th : theta_list) p.value.push_back(mean.real() * std::cos(th) + mean.imag() * std::sin(th));
    p.amplitude = std::abs(mean);
    p.phase = std::arg(mean);
    return p;
}

}  // namespace aqi

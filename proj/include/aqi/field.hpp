#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace aqi {

enum class Envelope { flat, sin2 };
enum class SqueezingKind { coherent, squeezed, thermal };

// Quadrature of the gamma frame that carries the enlarged variance.
// `amplitude` is gamma_x (parallel to the mean 2w field), `phase` is gamma_y.
enum class FluctuationAxis { amplitude, phase };

struct SqueezingSpec {
    SqueezingKind kind = SqueezingKind::squeezed;
    double I_squ = 1e-6;  // a.u.^2
    FluctuationAxis axis = FluctuationAxis::amplitude;

    // Variance of the limiting Gaussian Q along the fluctuating axis.
    double variance() const { return kind == SqueezingKind::coherent ? 0.0 : 4.0 * I_squ; }
};

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t n_steps = 0;

    std::size_t size() const { return n_steps + 1; }
    double dt() const { return (t_end - t_start) / static_cast<double>(n_steps); }
    double at(std::size_t i) const { return t_start + dt() * static_cast<double>(i); }
    double duration() const { return t_end - t_start; }
};

struct DriverConfig {
    double omega = 0.057;
    double E_omega = 0.053;
    double epsilon_ratio = 1e-2;
    double phi = 0.0;
    SqueezingSpec squeezing;
    double Ip = 0.5;
    double n_cycles = 5.0;
    Envelope envelope = Envelope::flat;
    TimeGrid time_grid;
    // <= 0 requests calibration (mean photon number 5 in the reference even harmonic).
    double rho_coupling = 0.0;
    // 0 selects the default node count: 21 (squeezed) or 11 per axis (thermal).
    std::size_t n_samples = 0;

    double period() const;
    double pulse_duration() const { return n_cycles * period(); }
    double mean_2w_amplitude() const { return epsilon_ratio * E_omega; }
};

// Samples per optical cycle used when the time grid is left at its default.
inline constexpr std::size_t default_steps_per_cycle = 1024;

// Paper-default driver (Fig. 2 parameters) with the time grid resolved.
DriverConfig default_config();

// Fills an unset time grid (n_steps == 0) to span the pulse.
void resolve_time_grid(DriverConfig& config);

// Throws Error{validation} naming the offending field; returns soft warnings.
std::vector<std::string> validate(const DriverConfig& config);

struct PhaseSpaceSample {
    std::size_t id = 0;
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double weight = 1.0;
};

// Nodes and weights of the probabilists' Gauss-Hermite rule for N(0, 1):
// sum_i w_i f(x_i) ~ E[f(X)].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_hermite_normal(std::size_t n);

std::vector<PhaseSpaceSample> sample_phase_space(const DriverConfig& config, std::size_t n_samples);
std::vector<PhaseSpaceSample> sample_phase_space(const DriverConfig& config);

// 2w field components (E_2w,x, E_2w,y) in the laboratory frame.
std::pair<double, double> frame_transform(const PhaseSpaceSample& sample, const DriverConfig& config);

// Closed-form field and vector potential of one realization. A(t) = -int_{t_start}^t E.
class FieldRealization {
public:
    FieldRealization(const DriverConfig& config, const PhaseSpaceSample& sample);

    double field(double t) const;
    double vector_potential(double t) const;

    struct Tone {
        double freq;
        double c;  // coefficient of cos(freq t)
        double s;  // coefficient of sin(freq t)
    };
    const std::vector<Tone>& tones() const { return tones_; }

private:
    double antiderivative(double t) const;
    double clamp_to_pulse(double t) const;

    std::vector<Tone> tones_;
    double pulse_start_;
    double pulse_end_;
    double a_offset_;
    bool clipped_;
};

// E(t) for t within the time grid; throws Error{domain} otherwise.
double realize_field(const PhaseSpaceSample& sample, const DriverConfig& config, double t);

}  // namespace aqi

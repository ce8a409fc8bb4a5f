#include "aqi/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aqi/error.hpp"

namespace aqi {

namespace {

using Tone = FieldRealization::Tone;

// Product-to-sum expansion of (c1 cos a + s1 sin a)(c2 cos b + s2 sin b).
void multiply_into(const Tone& u, const Tone& v, std::vector<Tone>& out) {
    const double diff = u.freq - v.freq;
    const double sum = u.freq + v.freq;
    // cos a cos b = [cos(a-b) + cos(a+b)]/2
    // sin a sin b = [cos(a-b) - cos(a+b)]/2
    // sin a cos b = [sin(a+b) + sin(a-b)]/2
    // cos a sin b = [sin(a+b) - sin(a-b)]/2
    Tone minus{diff, 0.5 * (u.c * v.c + u.s * v.s), 0.5 * (u.s * v.c - u.c * v.s)};
    Tone plus{sum, 0.5 * (u.c * v.c - u.s * v.s), 0.5 * (u.s * v.c + u.c * v.s)};
    if (minus.freq < 0.0) {
        minus.freq = -minus.freq;
        minus.s = -minus.s;
    }
    out.push_back(minus);
    out.push_back(plus);
}

}  // namespace

double DriverConfig::period() const { return 2.0 * std::numbers::pi / omega; }

void resolve_time_grid(DriverConfig& config) {
    if (config.time_grid.n_steps != 0) return;
    if (!(config.omega > 0.0) || !(config.n_cycles > 0.0)) return;
    config.time_grid.t_start = 0.0;
    config.time_grid.t_end = config.pulse_duration();
    config.time_grid.n_steps =
        static_cast<std::size_t>(std::llround(config.n_cycles * static_cast<double>(default_steps_per_cycle)));
}

DriverConfig default_config() {
    DriverConfig c;
    resolve_time_grid(c);
    return c;
}

std::vector<std::string> validate(const DriverConfig& c) {
    auto bad = [](const char* field, const std::string& why) {
        fail(ErrorCode::validation, std::string(field) + ": " + why, field);
    };
    if (!(c.omega > 0.0) || !std::isfinite(c.omega)) bad("omega", "must be positive");
    if (!(c.E_omega >= 0.0) || !std::isfinite(c.E_omega)) bad("E_omega", "must be non-negative");
    if (!(c.epsilon_ratio >= 0.0) || !(c.epsilon_ratio < 0.2))
        bad("epsilon_ratio", "must lie in [0, 0.2) for the 2w field to stay perturbative");
    if (!(c.phi >= 0.0) || !(c.phi < 2.0 * std::numbers::pi)) bad("phi", "must lie in [0, 2pi)");
    if (!(c.squeezing.I_squ >= 0.0) || !std::isfinite(c.squeezing.I_squ)) bad("squeezing.I_squ", "must be >= 0");
    if (c.squeezing.kind == SqueezingKind::coherent && c.squeezing.I_squ != 0.0)
        bad("squeezing.I_squ", "must be 0 for a coherent 2w field");
    if (!(c.Ip > 0.0)) bad("Ip", "must be positive");
    if (!(c.n_cycles > 0.0)) bad("n_cycles", "must be positive");
    const auto& g = c.time_grid;
    if (g.n_steps < 2) bad("time_grid.n_steps", "must be >= 2");
    if (!(g.t_end > g.t_start)) bad("time_grid.t_end", "must exceed t_start");
    if (!std::isfinite(c.rho_coupling)) bad("rho_coupling", "must be finite");

    // The grid must resolve harmonic 2 q_cutoff.
    const double up = c.E_omega * c.E_omega / (4.0 * c.omega * c.omega);
    const double q_cut = (c.Ip + 3.17 * up) / c.omega;
    const double cycles = g.duration() / c.period();
    if (static_cast<double>(g.n_steps) < 4.0 * q_cut * cycles) {
        std::ostringstream os;
        os << "needs at least " << std::ceil(4.0 * q_cut * cycles) << " steps to resolve the cutoff";
        bad("time_grid.n_steps", os.str());
    }

    std::vector<std::string> warnings;
    if (c.epsilon_ratio > 0.05)
        warnings.push_back("epsilon_ratio above 0.05: the 2w field may no longer be perturbative");
    return warnings;
}

QuadratureRule gauss_hermite_normal(std::size_t n) {
    if (n < 1) fail(ErrorCode::argument, "Gauss-Hermite rule needs at least one node", "n_samples");
    // Newton iteration on the orthonormal physicists' Hermite recurrence,
    // then x -> sqrt(2) x and w -> w / sqrt(pi) for the N(0,1) weight.
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const std::size_t m = (n + 1) / 2;
    std::vector<double> x(n), w(n);
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double nn = static_cast<double>(n);
        if (i == 0)
            z = std::sqrt(2.0 * nn + 1.0) - 1.85575 * std::pow(2.0 * nn + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(nn, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jj = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / (jj + 1.0)) * p2 - std::sqrt(jj / (jj + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * nn) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if (n % 2 == 1) x[m - 1] = 0.0;

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // ascending order
        rule.nodes[i] = -std::sqrt(2.0) * x[i];
        rule.weights[i] = w[i] / std::sqrt(std::numbers::pi);
        total += rule.weights[i];
    }
    for (auto& wi : rule.weights) wi /= total;
    return rule;
}

std::vector<PhaseSpaceSample> sample_phase_space(const DriverConfig& config, std::size_t n_samples) {
    if (n_samples < 1) fail(ErrorCode::argument, "n_samples must be >= 1", "n_samples");
    const auto& sq = config.squeezing;
    std::vector<PhaseSpaceSample> out;
    if (sq.kind == SqueezingKind::coherent) {
        out.push_back({0, 0.0, 0.0, 1.0});
        return out;
    }
    const double sd = std::sqrt(sq.variance());
    const auto rule = gauss_hermite_normal(n_samples);
    if (sq.kind == SqueezingKind::squeezed) {
        out.reserve(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            PhaseSpaceSample s{i, 0.0, 0.0, rule.weights[i]};
            (sq.axis == FluctuationAxis::amplitude ? s.gamma_x : s.gamma_y) = sd * rule.nodes[i];
            out.push_back(s);
        }
        return out;
    }
    // thermal: tensor grid, row-major in (x, y)
    out.reserve(n_samples * n_samples);
    std::size_t id = 0;
    for (std::size_t i = 0; i < n_samples; ++i)
        for (std::size_t j = 0; j < n_samples; ++j)
            out.push_back({id++, sd * rule.nodes[i], sd * rule.nodes[j], rule.weights[i] * rule.weights[j]});
    return out;
}

std::vector<PhaseSpaceSample> sample_phase_space(const DriverConfig& config) {
    std::size_t n = config.n_samples;
    if (n == 0) n = config.squeezing.kind == SqueezingKind::thermal ? 11 : 21;
    return sample_phase_space(config, n);
}

std::pair<double, double> frame_transform(const PhaseSpaceSample& s, const DriverConfig& config) {
    const double mean = config.mean_2w_amplitude();
    const double c = std::cos(config.phi), sn = std::sin(config.phi);
    return {(s.gamma_x + mean) * c - s.gamma_y * sn, (s.gamma_x + mean) * sn + s.gamma_y * c};
}

FieldRealization::FieldRealization(const DriverConfig& config, const PhaseSpaceSample& sample) {
    const auto [ex, ey] = frame_transform(sample, config);
    const double w = config.omega;
    std::vector<Tone> carrier{{w, config.E_omega, 0.0}, {2.0 * w, ex, ey}};

    const auto& grid = config.time_grid;
    if (config.envelope == Envelope::sin2) {
        // sin^2(pi t / T_p) = 1/2 - cos(2 pi t / T_p)/2 on [0, T_p]
        pulse_start_ = 0.0;
        pulse_end_ = config.pulse_duration();
        const Tone dc{0.0, 0.5, 0.0};
        const Tone ramp{2.0 * std::numbers::pi / pulse_end_, -0.5, 0.0};
        for (const auto& t : carrier) {
            multiply_into(t, dc, tones_);
            multiply_into(t, ramp, tones_);
        }
        // the dc product emits a zero-amplitude companion tone; drop empties
        std::erase_if(tones_, [](const Tone& t) { return t.c == 0.0 && t.s == 0.0; });
        clipped_ = true;
        a_offset_ = 0.0;
        a_offset_ = -antiderivative(pulse_start_);
    } else {
        // Continuous wave: the field predates the grid and A is zero-mean.
        pulse_start_ = grid.t_start;
        pulse_end_ = grid.t_end;
        tones_ = carrier;
        clipped_ = false;
        a_offset_ = 0.0;
    }
}

double FieldRealization::clamp_to_pulse(double t) const {
    return clipped_ ? std::clamp(t, pulse_start_, pulse_end_) : t;
}

double FieldRealization::field(double t) const {
    if (clipped_ && (t < pulse_start_ || t > pulse_end_)) return 0.0;
    double e = 0.0;
    for (const auto& tone : tones_) e += tone.c * std::cos(tone.freq * t) + tone.s * std::sin(tone.freq * t);
    return e;
}

double FieldRealization::antiderivative(double t) const {
    double f = 0.0;
    for (const auto& tone : tones_) {
        if (tone.freq == 0.0) {
            f += tone.c * t;
        } else {
            f += (tone.c * std::sin(tone.freq * t) - tone.s * std::cos(tone.freq * t)) / tone.freq;
        }
    }
    return f;
}

double FieldRealization::vector_potential(double t) const { return -(antiderivative(clamp_to_pulse(t)) + a_offset_); }

double realize_field(const PhaseSpaceSample& sample, const DriverConfig& config, double t) {
    const auto& g = config.time_grid;
    const double slack = 1e-12 * std::max(1.0, std::abs(g.t_end));
    if (!(t >= g.t_start - slack && t <= g.t_end + slack)) {
        std::ostringstream os;
        os << "t = " << t << " outside time grid [" << g.t_start << ", " << g.t_end << "]";
        fail(ErrorCode::domain, os.str(), "t");
    }
    return FieldRealization(config, sample).field(t);
}

}  // namespace aqi

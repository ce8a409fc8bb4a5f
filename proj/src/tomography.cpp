#include "aqi/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "aqi/detail/hash.hpp"
#include "aqi/detail/parallel.hpp"
#include "aqi/error.hpp"

namespace aqi {

namespace {

constexpr double pi = std::numbers::pi;

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2) fail(ErrorCode::argument, std::string(name) + " needs at least two points", name);
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i] > axis[i - 1])) fail(ErrorCode::argument, std::string(name) + " must be strictly increasing", name);
}

// Natural cubic spline through (x_i, y_i), evaluated at ascending `at`;
// zero outside [x_0, x_n].
std::vector<double> spline(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& at) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        const double a = h0, b = 2.0 * (h0 + h1), r = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        const double denom = b - a * c[i - 1];
        c[i] = h1 / denom;
        d[i] = (r - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 1;) m[i] = d[i] - c[i] * m[i + 1];
    std::vector<double> out(at.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t j = 0; j < at.size(); ++j) {
        const double t = at[j];
        if (t < x.front() || t > x.back()) continue;
        while (k + 2 < n && t > x[k + 1]) ++k;
        const double h = x[k + 1] - x[k];
        const double a = (x[k + 1] - t) / h, b = (t - x[k]) / h;
        out[j] = a * y[k] + b * y[k + 1] + ((a * a * a - a) * m[k] + (b * b * b - b) * m[k + 1]) * h * h / 6.0;
    }
    return out;
}

std::vector<double> fock_pdf(const HarmonicMixture& mixture, double theta, const std::vector<double>& x_axis,
                             std::size_t n_cutoff, const WarningSink& warn) {
    const auto rho = fock_density(mixture, n_cutoff, warn);
    const auto n = static_cast<Eigen::Index>(n_cutoff);
    // X_0 = (a + a^dag)/sqrt(2) is real tridiagonal; X_theta = R X_0 R^dag with R = exp(i theta n).
    Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const double v = std::sqrt(static_cast<double>(k + 1) / 2.0);
        x0(k, k + 1) = v;
        x0(k + 1, k) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x0);
    if (es.info() != Eigen::Success) fail(ErrorCode::numerical, "quadrature eigendecomposition failed", "n_cutoff");
    Eigen::MatrixXcd vecs = es.eigenvectors().cast<cplx>();
    for (Eigen::Index k = 0; k < n; ++k) vecs.row(k) *= std::polar(1.0, theta * static_cast<double>(k));
    const Eigen::MatrixXcd proj = vecs.adjoint() * rho.matrix * vecs;

    std::vector<double> nodes(static_cast<std::size_t>(n)), density(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        // Eigenvector i carries probability p_i over an effective width
        // sqrt(pi) |v_i0|^2 exp(lam^2) (the Gauss-Hermite weight of node lam).
        const double log_width = 0.5 * std::log(pi) + std::log(v0 * v0) + lam * lam;
        const double p = std::max(0.0, proj(i, i).real());
        nodes[static_cast<std::size_t>(i)] = lam;
        density[static_cast<std::size_t>(i)] = p > 0.0 ? std::exp(std::log(p) - log_width) : 0.0;
    }
    auto out = spline(nodes, density, x_axis);
    for (auto& v : out) v = std::max(0.0, v);
    return out;
}

}  // namespace

std::vector<double> quadrature_pdf(const HarmonicMixture& mixture, double theta, const std::vector<double>& x_axis,
                                   PdfMethod method, std::size_t n_cutoff, const WarningSink& warn) {
    check_axis(x_axis, "x_axis");
    if (method == PdfMethod::fock) return fock_pdf(mixture, theta, x_axis, n_cutoff, warn);
    std::vector<double> out(x_axis.size(), 0.0);
    const double norm = 1.0 / std::sqrt(pi);  // N(mu, 1/2)
    for (const auto& c : mixture.components) {
        const double mu = std::sqrt(2.0) * (c.beta * std::polar(1.0, -theta)).real();
        for (std::size_t i = 0; i < x_axis.size(); ++i) {
            const double d = x_axis[i] - mu;
            out[i] += c.weight * norm * std::exp(-d * d);
        }
    }
    return out;
}

std::vector<double> outcome_axis(const HarmonicMixture& mixture, std::size_t n_points) {
    if (n_points < 2) fail(ErrorCode::argument, "axis needs at least two points", "axis_points");
    double reach = 0.0;
    for (const auto& c : mixture.components) reach = std::max(reach, std::sqrt(2.0) * std::abs(c.beta));
    const double half = reach + 6.0 * std::sqrt(0.5);
    std::vector<double> axis(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        axis[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(n_points - 1);
    return axis;
}

std::vector<double> sample_outcomes(const std::vector<double>& x_axis, const std::vector<double>& pdf,
                                    std::size_t n_shots, std::uint64_t seed) {
    if (x_axis.size() != pdf.size() || x_axis.empty())
        fail(ErrorCode::argument, "density and axis lengths differ", "pdf");
    const std::size_t n = x_axis.size();
    std::vector<double> cdf(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(pdf[i] >= 0.0) || !std::isfinite(pdf[i])) fail(ErrorCode::argument, "density must be finite and >= 0", "pdf");
        const double lo = i == 0 ? x_axis[0] : 0.5 * (x_axis[i - 1] + x_axis[i]);
        const double hi = i + 1 == n ? x_axis[n - 1] : 0.5 * (x_axis[i] + x_axis[i + 1]);
        const double width = n == 1 ? 1.0 : hi - lo;
        total += pdf[i] * width;
        cdf[i] = total;
    }
    if (!(total > 0.0) || !std::isfinite(total)) fail(ErrorCode::argument, "density is not normalizable", "pdf");
    std::mt19937_64 rng(seed);
    std::vector<double> out(n_shots);
    for (auto& v : out) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        // skip empty cells
        std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        while (pdf[i] == 0.0 && i + 1 < n) ++i;
        v = x_axis[i];
    }
    return out;
}

std::vector<double> uniform_phases(std::size_t n_phases) {
    std::vector<double> phi(n_phases);
    for (std::size_t j = 0; j < n_phases; ++j)
        phi[j] = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n_phases);
    return phi;
}

AQTTrace collect_aqt_trace(const DriverConfig& config, double q, double theta, std::size_t n_phases,
                           std::size_t n_shots, std::uint64_t seed, const TraceOptions& opts) {
    if (n_phases < 2) fail(ErrorCode::argument, "a trace needs at least two phase settings", "n_phases");
    AQTTrace tr;
    tr.q = q;
    tr.theta = theta;
    tr.seed = seed;
    tr.n_shots = n_shots;
    tr.phi_values = uniform_phases(n_phases);
    tr.outcomes.resize(n_phases);
    const double rho = resolve_rho(config, opts.ensemble);
    auto inner = opts.ensemble;
    inner.jobs = 1;
    detail::parallel_for(n_phases, opts.ensemble.jobs, [&](std::size_t j) {
        try {
            auto c = config;
            c.phi = tr.phi_values[j];
            const auto ens = compute_ensemble(c, inner);
            const auto mix = build_mixture(q, ens, rho);
            const auto axis = outcome_axis(mix, opts.axis_points);
            const auto pdf = quadrature_pdf(mix, theta, axis, opts.method, opts.n_cutoff, opts.ensemble.warn);
            tr.outcomes[j] = sample_outcomes(axis, pdf, n_shots, detail::mix_seed(seed, j));
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " (phi = " << tr.phi_values[j] << ")";
            throw Error(e.code(), os.str(), e.field());
        }
    });
    return tr;
}

AQTTrace rotated_state_trace(const HarmonicMixture& mixture, std::size_t n_phases, std::size_t n_shots,
                             std::uint64_t seed, PdfMethod method) {
    if (n_phases < 2) fail(ErrorCode::argument, "a trace needs at least two phase settings", "n_phases");
    AQTTrace tr;
    tr.q = mixture.q;
    tr.seed = seed;
    tr.n_shots = n_shots;
    tr.phi_values = uniform_phases(n_phases);
    const auto axis = outcome_axis(mixture);
    for (std::size_t j = 0; j < n_phases; ++j) {
        const auto pdf = quadrature_pdf(mixture, tr.phi_values[j], axis, method);
        tr.outcomes.push_back(sample_outcomes(axis, pdf, n_shots, detail::mix_seed(seed, j)));
    }
    return tr;
}

double radon_kernel(double u, double k_c) {
    const double z = k_c * u;
    const double c = 1.0 / (2.0 * pi * pi);
    if (std::abs(z) < 0.1) {
        // int_0^kc k cos(k u) dk = kc^2 sum_n (-1)^n z^2n / ((2n)! (2n + 2))
        const double z2 = z * z;
        return c * k_c * k_c * (0.5 - z2 / 8.0 + z2 * z2 / 144.0 - z2 * z2 * z2 / 5760.0 + z2 * z2 * z2 * z2 / 403200.0);
    }
    return c * (std::cos(z) + z * std::sin(z) - 1.0) / (u * u);
}

AQTGrid inverse_radon(const AQTTrace& trace, const std::vector<double>& x_axis, const std::vector<double>& p_axis,
                      double k_c, bool subtract_mean, unsigned jobs) {
    const std::size_t n_phases = trace.phi_values.size();
    if (n_phases < 8 || trace.outcomes.size() != n_phases) {
        std::ostringstream os;
        os << "inverse Radon needs at least 8 phase settings, got " << n_phases;
        fail(ErrorCode::insufficient_projections, os.str(), "n_phases");
    }
    if (!(k_c > 0.0)) fail(ErrorCode::argument, "k_c must be positive", "k_c");
    check_axis(x_axis, "x_axis");
    check_axis(p_axis, "p_axis");
    std::vector<std::vector<double>> lam = trace.outcomes;
    for (auto& v : lam) {
        if (v.empty()) fail(ErrorCode::argument, "phase setting without outcomes", "outcomes");
        if (subtract_mean) {
            double m = 0.0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            for (double& x : v) x -= m;
        }
    }
    AQTGrid out;
    out.k_c = k_c;
    out.n_phases = n_phases;
    out.n_shots = trace.n_shots;
    out.theta = trace.theta;
    out.grid.x_axis = x_axis;
    out.grid.p_axis = p_axis;
    out.grid.values.assign(x_axis.size() * p_axis.size(), 0.0);
    const double dphi = 2.0 * pi / static_cast<double>(n_phases);
    const std::size_t np = p_axis.size();
    detail::parallel_for(x_axis.size(), jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < np; ++j) {
            double w = 0.0;
            for (std::size_t k = 0; k < n_phases; ++k) {
                const double s = x_axis[i] * std::cos(trace.phi_values[k]) + p_axis[j] * std::sin(trace.phi_values[k]);
                double acc = 0.0;
                for (double l : lam[k]) acc += radon_kernel(s - l, k_c);
                w += acc / static_cast<double>(lam[k].size());
            }
            out.grid.values[i * np + j] = 0.5 * dphi * w;
        }
    });
    return out;
}

namespace {

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

VarianceEstimate trace_variance(const AQTTrace& trace, std::size_t n_boot, std::uint64_t seed) {
    VarianceEstimate est;
    est.theta = trace.theta;
    const std::size_t n_phases = trace.outcomes.size();
    if (n_phases == 0) fail(ErrorCode::argument, "empty trace", "outcomes");
    for (const auto& v : trace.outcomes) est.per_phase.push_back(sample_variance(v));
    for (double v : est.per_phase) est.variance += v;
    est.variance /= static_cast<double>(n_phases);
    if (n_boot < 2) return est;
    std::mt19937_64 rng(detail::mix_seed(seed, 0xb007));
    std::vector<double> boot(n_boot);
    std::vector<double> resample;
    for (auto& b : boot) {
        double pooled = 0.0;
        for (const auto& v : trace.outcomes) {
            resample.resize(v.size());
            for (auto& r : resample) r = v[rng() % v.size()];
            pooled += sample_variance(resample);
        }
        b = pooled / static_cast<double>(n_phases);
    }
    double m = 0.0;
    for (double b : boot) m += b;
    m /= static_cast<double>(n_boot);
    double s = 0.0;
    for (double b : boot) s += (b - m) * (b - m);
    est.error = std::sqrt(s / static_cast<double>(n_boot - 1));
    return est;
}

std::vector<VarianceEstimate> aqt_variance_vs_theta(const DriverConfig& config, double q,
                                                    const std::vector<double>& theta_list, std::size_t n_phases,
                                                    std::size_t n_shots, std::uint64_t seed,
                                                    const TraceOptions& opts) {
    if (theta_list.empty()) fail(ErrorCode::argument, "theta list is empty", "theta");
    std::vector<VarianceEstimate> out;
    for (std::size_t i = 0; i < theta_list.size(); ++i) {
        const auto s = detail::mix_seed(seed, 1000 + i);
        const auto tr = collect_aqt_trace(config, q, theta_list[i], n_phases, n_shots, s, opts);
        out.push_back(trace_variance(tr, default_bootstrap, s));
    }
    return out;
}

}  // namespace aqi

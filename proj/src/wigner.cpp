#include "aqi/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "aqi/detail/parallel.hpp"
#include "aqi/error.hpp"

namespace aqi {

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) fail(ErrorCode::argument, std::string(name) + " is empty", name);
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i] > axis[i - 1])) fail(ErrorCode::argument, std::string(name) + " must be strictly increasing", name);
}

}  // namespace

PhaseSpaceGrid wigner_grid(const HarmonicMixture& m, const std::vector<double>& x_axis,
                           const std::vector<double>& p_axis, unsigned jobs) {
    check_axis(x_axis, "x_axis");
    check_axis(p_axis, "p_axis");
    PhaseSpaceGrid g{x_axis, p_axis, std::vector<double>(x_axis.size() * p_axis.size(), 0.0)};
    const std::size_t np = p_axis.size();
    const double inv_pi = 1.0 / std::numbers::pi;
    // exp(-(x-x0)^2 - (p-p0)^2) separates, so each component is an outer product.
    detail::parallel_for(x_axis.size(), jobs, [&](std::size_t i) {
        std::vector<double> row(np, 0.0);
        for (const auto& c : m.components) {
            const double dx = x_axis[i] - std::sqrt(2.0) * c.beta.real();
            const double fx = c.weight * inv_pi * std::exp(-dx * dx);
            if (fx == 0.0) continue;
            const double p0 = std::sqrt(2.0) * c.beta.imag();
            for (std::size_t j = 0; j < np; ++j) {
                const double dp = p_axis[j] - p0;
                row[j] += fx * std::exp(-dp * dp);
            }
        }
        std::copy(row.begin(), row.end(), g.values.begin() + static_cast<std::ptrdiff_t>(i * np));
    });
    return g;
}

std::vector<double> default_wigner_axis(const HarmonicMixture& m, std::size_t n_points) {
    if (n_points < 2) fail(ErrorCode::argument, "axis needs at least two points", "n_points");
    double reach = 0.0;
    for (const auto& c : m.components) reach = std::max(reach, std::sqrt(2.0) * std::abs(c.beta));
    const double half = reach + 5.0;
    std::vector<double> axis(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        axis[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(n_points - 1);
    return axis;
}

double wigner_maximum_angle(const PhaseSpaceGrid& g) {
    double best = -std::numeric_limits<double>::infinity();
    double angle = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < g.x_axis.size(); ++i) {
        for (std::size_t j = 0; j < g.p_axis.size(); ++j) {
            const double v = g.at(i, j);
            if (v != 0.0) any = true;
            const double a = std::atan2(g.p_axis[j], g.x_axis[i]);
            if (v > best || (v == best && a < angle)) {
                best = v;
                angle = a;
            }
        }
    }
    if (!any) fail(ErrorCode::domain, "Wigner grid is identically zero", "grid");
    return angle;
}

Eigen::VectorXcd coherent_state(cplx beta, std::size_t n_cutoff) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n_cutoff));
    const double r = std::abs(beta);
    const double ph = std::arg(beta);
    if (r == 0.0) {
        v.setZero();
        if (n_cutoff > 0) v(0) = 1.0;
        return v;
    }
    // log|<n|beta>| = -r^2/2 + n log r - lgamma(n+1)/2
    double logmag = -0.5 * r * r;
    const double logr = std::log(r);
    for (std::size_t n = 0; n < n_cutoff; ++n) {
        if (n > 0) logmag += logr - 0.5 * std::log(static_cast<double>(n));
        v(static_cast<Eigen::Index>(n)) = std::polar(std::exp(logmag), ph * static_cast<double>(n));
    }
    return v;
}

FockDensity fock_density(const HarmonicMixture& m, std::size_t n_cutoff, const WarningSink& warn) {
    if (n_cutoff < 16) fail(ErrorCode::argument, "n_cutoff must be at least 16", "n_cutoff");
    double max_abs = 0.0;
    for (const auto& c : m.components) max_abs = std::max(max_abs, std::abs(c.beta));
    if (warn && max_abs * max_abs + 6.0 * max_abs > static_cast<double>(n_cutoff)) {
        std::ostringstream os;
        os << "Fock cutoff " << n_cutoff << " may truncate amplitudes up to |beta| = " << max_abs;
        warn(os.str());
    }
    const auto n = static_cast<Eigen::Index>(n_cutoff);
    FockDensity fd;
    fd.n_cutoff = n_cutoff;
    fd.matrix = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& c : m.components) {
        if (c.weight == 0.0) continue;
        const auto v = coherent_state(c.beta, n_cutoff);
        fd.matrix.noalias() += c.weight * (v * v.adjoint());
    }
    // exact Hermiticity
    fd.matrix = 0.5 * (fd.matrix + fd.matrix.adjoint()).eval();
    fd.trace_deficit = 1.0 - fd.matrix.trace().real();
    if (fd.trace_deficit > 1e-3) {
        std::ostringstream os;
        os << "Fock truncation at n_cutoff = " << n_cutoff << " loses trace " << fd.trace_deficit;
        fail(ErrorCode::truncation, os.str(), "n_cutoff");
    }
    return fd;
}

}  // namespace aqi

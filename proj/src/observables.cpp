#include "aqi/observables.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "aqi/detail/parallel.hpp"
#include "aqi/error.hpp"

namespace aqi {

namespace {

constexpr double pi = std::numbers::pi;

struct Covariance {
    double xx = 0.0, xy = 0.0, yy = 0.0;
};

Covariance quadrature_covariance(const HarmonicMixture& m) {
    double mx = 0.0, my = 0.0;
    for (const auto& c : m.components) {
        mx += c.weight * std::sqrt(2.0) * c.beta.real();
        my += c.weight * std::sqrt(2.0) * c.beta.imag();
    }
    Covariance cov;
    for (const auto& c : m.components) {
        const double dx = std::sqrt(2.0) * c.beta.real() - mx;
        const double dy = std::sqrt(2.0) * c.beta.imag() - my;
        cov.xx += c.weight * dx * dx;
        cov.xy += c.weight * dx * dy;
        cov.yy += c.weight * dy * dy;
    }
    return cov;
}

double wrap_pi(double theta) {
    theta = std::fmod(theta, pi);
    if (theta < 0.0) theta += pi;
    if (theta >= pi) theta -= pi;
    return theta;
}

bool same_samples(const HarmonicMixture& a, const HarmonicMixture& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a.components[k].sample_id != b.components[k].sample_id) return false;
        if (a.components[k].weight != b.components[k].weight) return false;
    }
    return true;
}

}  // namespace

double mean_photon(const HarmonicMixture& m) {
    return expectation(m, [](cplx b) { return std::norm(b); });
}

double quadrature_variance(const HarmonicMixture& m, double theta) {
    double s1 = 0.0, s2 = 0.0;
    for (const auto& c : m.components) {
        const double x = quadrature_mean(c.beta, theta);
        s1 += c.weight * x;
        s2 += c.weight * x * x;
    }
    return 0.5 + std::max(0.0, s2 - s1 * s1);
}

QuadratureStats variance_extrema(const HarmonicMixture& m, std::size_t n_theta) {
    QuadratureStats st;
    st.q = m.q;
    const auto cov = quadrature_covariance(m);
    const double mean = 0.5 * (cov.xx + cov.yy);
    const double half = 0.5 * (cov.xx - cov.yy);
    const double radius = std::hypot(half, cov.xy);
    st.var_max = 0.5 + mean + radius;
    st.var_min = 0.5 + std::max(0.0, mean - radius);
    if (radius > 1e-14 * std::max(1.0, mean)) {
        st.theta_max = wrap_pi(0.5 * std::atan2(cov.xy, half));
        st.theta_min = wrap_pi(st.theta_max + 0.5 * pi);
    }
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double th = pi * static_cast<double>(i) / static_cast<double>(n_theta);
        st.theta_grid.push_back(th);
        st.variance.push_back(quadrature_variance(m, th));
    }
    return st;
}

double g2_pair(const HarmonicMixture& m1, const HarmonicMixture& m2) {
    if (!same_samples(m1, m2))
        fail(ErrorCode::argument, "g2 needs mixtures built from the same phase-space samples", "mixtures");
    double n1 = 0.0, n2 = 0.0, joint = 0.0;
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double w = m1.components[k].weight;
        const double i1 = std::norm(m1.components[k].beta);
        const double i2 = std::norm(m2.components[k].beta);
        n1 += w * i1;
        n2 += w * i2;
        joint += w * i1 * i2;
    }
    if (!(n1 > 0.0) || !(n2 > 0.0)) {
        std::ostringstream os;
        os << "g2(" << m1.q << ", " << m2.q << ") undefined: zero mean photon number";
        fail(ErrorCode::undefined_correlation, os.str(), "q");
    }
    if (m1.size() == 1) return 1.0;
    return joint / (n1 * n2);
}

CorrelationMatrix csi_matrix(std::span<const HarmonicMixture> mixtures, unsigned jobs) {
    CorrelationMatrix cm;
    const std::size_t n = mixtures.size();
    cm.n = n;
    for (const auto& m : mixtures) cm.q_list.push_back(m.q);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    cm.g2.assign(n * n, nan);
    cm.delta_csi.assign(n * n, nan);
    cm.defined.assign(n * n, false);
    detail::parallel_for(n, jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            try {
                cm.g2[i * n + j] = g2_pair(mixtures[i], mixtures[j]);
                cm.defined[i * n + j] = true;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::argument) throw;
            }
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool ok = cm.defined[i * n + j] && cm.defined[i * n + i] && cm.defined[j * n + j];
            if (!ok) continue;
            const double gij = cm.g2[i * n + j];
            cm.delta_csi[i * n + j] = i == j ? 0.0 : cm.g2[i * n + i] * cm.g2[j * n + j] - gij * gij;
        }
    }
    return cm;
}

double purity(const HarmonicMixture& m) {
    double gamma = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const auto& a = m.components[k];
        gamma += a.weight * a.weight;
        for (std::size_t l = k + 1; l < m.size(); ++l) {
            const auto& b = m.components[l];
            gamma += 2.0 * a.weight * b.weight * std::exp(-std::norm(a.beta - b.beta));
        }
    }
    return gamma;
}

double linear_entropy(const HarmonicMixture& m) { return std::max(0.0, 1.0 - purity(m)); }

}  // namespace aqi

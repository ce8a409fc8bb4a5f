#pragma once

// Centroid and covariance of a state from its band-limited reconstruction.
// The cutoff k_c blurs the grid (a vacuum Gaussian fitted directly comes out
// about 20% wide at k_c = 3), so the estimate fits the reconstruction with the
// analytic back-projection of a Gaussian through the same angles and cutoff:
//   g_j(u) = (1/2 pi^2) int_0^kc k exp(-k^2 v_j / 2) cos(k (u - m_j)) dk
//   W(r)   = (dphi / 2) sum_j g_j(r . n_j)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "aqi/tomography.hpp"
#include "aqi/wigner.hpp"

namespace fit {

struct Moments {
    double x = 0, p = 0;
    double xx = 0, pp = 0, xp = 0;

    double along(double theta) const {
        const double c = std::cos(theta), s = std::sin(theta);
        return c * c * xx + s * s * pp + 2 * c * s * xp;
    }
};

// Weighted least squares of log W against a quadratic over cells above `level` of the peak.
inline Moments gaussian(const aqi::PhaseSpaceGrid& g, double level = 0.2) {
    const auto& x = g.x_axis;
    const auto& p = g.p_axis;
    const double peak = *std::max_element(g.values.begin(), g.values.end());
    std::vector<Eigen::Matrix<double, 1, 6>> rows;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double w = g.at(i, j);
            if (w <= level * peak) continue;
            Eigen::Matrix<double, 1, 6> r;
            r << 1.0, x[i], p[j], x[i] * x[i], x[i] * p[j], p[j] * p[j];
            rows.push_back(r * w);
            rhs.push_back(std::log(w) * w);
        }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 6);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        a.row(static_cast<Eigen::Index>(k)) = rows[k];
        b(static_cast<Eigen::Index>(k)) = rhs[k];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    Eigen::Matrix2d precision;
    precision << -2 * c(3), -c(4), -c(4), -2 * c(5);
    const Eigen::Matrix2d cov = precision.inverse();
    const Eigen::Vector2d mu = cov * Eigen::Vector2d(c(1), c(2));
    return {mu(0), mu(1), cov(0, 0), cov(1, 1), cov(0, 1)};
}

namespace detail {

// Gauss-Legendre rule on [0, 1] by Newton iteration on P_n.
inline void legendre(int n, std::vector<double>& t, std::vector<double>& w) {
    t.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        t[i] = 0.5 * (1 - z);
        w[i] = 1.0 / ((1 - z * z) * dp * dp);
    }
}

class Model {
public:
    Model(const aqi::AQTTrace& tr, const aqi::PhaseSpaceGrid& g, double k_c) : tr_(tr), g_(g), kc_(k_c) {
        legendre(96, t_, w_);
        for (double& v : t_) v *= k_c;
        for (double& v : w_) v *= k_c;
    }

    // residual vector for theta = (x, p, xx, pp, xp); empty if the covariance is not positive
    Eigen::VectorXd residual(const Eigen::VectorXd& th) const {
        if (th(2) <= 0 || th(3) <= 0 || th(2) * th(3) <= th(4) * th(4)) return {};
        const auto& x = g_.x_axis;
        const auto& p = g_.p_axis;
        const std::size_t n = tr_.phi_values.size();
        const double dphi = 2 * std::numbers::pi / static_cast<double>(n);
        Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(x.size() * p.size()));
        for (std::size_t j = 0; j < n; ++j) {
            const double c = std::cos(tr_.phi_values[j]), s = std::sin(tr_.phi_values[j]);
            const double m = c * th(0) + s * th(1);
            const double v = c * c * th(2) + s * s * th(3) + 2 * c * s * th(4);
            // tabulate g_j(u) over the span of r . n_j - m and interpolate
            const double reach = std::abs(c) * std::max(std::abs(x.front()), std::abs(x.back())) +
                                 std::abs(s) * std::max(std::abs(p.front()), std::abs(p.back())) + std::abs(m) + 1.0;
            const double h = 0.01;
            const std::size_t nt = static_cast<std::size_t>(2 * reach / h) + 2;
            std::vector<double> tab(nt);
            for (std::size_t i = 0; i < nt; ++i) {
                const double u = -reach + h * static_cast<double>(i);
                double acc = 0.0;
                for (std::size_t q = 0; q < t_.size(); ++q)
                    acc += w_[q] * t_[q] * std::exp(-0.5 * t_[q] * t_[q] * v) * std::cos(t_[q] * u);
                tab[i] = acc / (2 * std::numbers::pi * std::numbers::pi);
            }
            for (std::size_t a = 0; a < x.size(); ++a)
                for (std::size_t b = 0; b < p.size(); ++b) {
                    const double f = (c * x[a] + s * p[b] - m + reach) / h;
                    const std::size_t i0 = std::min(static_cast<std::size_t>(f), nt - 2);
                    const double r = f - static_cast<double>(i0);
                    out(static_cast<Eigen::Index>(a * p.size() + b)) += 0.5 * dphi * ((1 - r) * tab[i0] + r * tab[i0 + 1]);
                }
        }
        for (std::size_t k = 0; k < g_.values.size(); ++k) out(static_cast<Eigen::Index>(k)) -= g_.values[k];
        return out;
    }

private:
    const aqi::AQTTrace& tr_;
    const aqi::PhaseSpaceGrid& g_;
    double kc_;
    std::vector<double> t_, w_;
};

}  // namespace detail

// Gaussian whose band-limited back-projection best matches the reconstruction (damped Gauss-Newton).
inline Moments band_limited(const aqi::AQTTrace& tr, const aqi::PhaseSpaceGrid& g, double k_c) {
    const detail::Model model(tr, g, k_c);
    const auto start = gaussian(g);
    Eigen::VectorXd th(5);
    th << start.x, start.p, start.xx, start.pp, start.xp;
    Eigen::VectorXd r = model.residual(th);
    if (r.size() == 0) {
        th.tail(3) << 0.5, 0.5, 0.0;
        r = model.residual(th);
    }
    double lambda = 1e-3;
    for (int it = 0; it < 50; ++it) {
        Eigen::MatrixXd jac(r.size(), 5);
        for (int k = 0; k < 5; ++k) {
            Eigen::VectorXd t = th;
            const double step = 1e-6 * std::max(1.0, std::abs(th(k)));
            t(k) += step;
            auto rk = model.residual(t);
            if (rk.size() == 0) {
                t(k) = th(k) - step;
                rk = model.residual(t);
                jac.col(k) = (r - rk) / step;
            } else {
                jac.col(k) = (rk - r) / step;
            }
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;
        bool moved = false;
        while (lambda < 1e8) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() *= 1 + lambda;
            const Eigen::VectorXd t = th - a.ldlt().solve(jtr);
            const auto rt = model.residual(t);
            if (rt.size() != 0 && rt.squaredNorm() < r.squaredNorm()) {
                moved = (t - th).norm() > 1e-10;
                th = t;
                r = rt;
                lambda = std::max(lambda / 10, 1e-9);
                break;
            }
            lambda *= 10;
        }
        if (!moved) break;
    }
    return {th(0), th(1), th(2), th(3), th(4)};
}

}  // namespace fit

#pragma once

// Dense truncated-Fock reference for coherent mixtures, kept independent of
// the library's own Fock code.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Eigen::VectorXcd ket(cplx beta, int n) {
    Eigen::VectorXcd v(n);
    v(0) = std::exp(-0.5 * std::norm(beta));
    for (int k = 1; k < n; ++k) v(k) = v(k - 1) * beta / std::sqrt(static_cast<double>(k));
    return v;
}

inline Mat density(const std::vector<double>& w, const std::vector<cplx>& b, int n) {
    Mat rho = Mat::Zero(n, n);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto v = ket(b[k], n);
        rho += w[k] * v * v.adjoint();
    }
    return rho;
}

inline Mat lowering(int n) {
    Mat a = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

inline Mat quadrature(double theta, int n) {
    const Mat a = lowering(n);
    return (a * std::polar(1.0, -theta) + a.adjoint() * std::polar(1.0, theta)) / std::sqrt(2.0);
}

inline double expect(const Mat& rho, const Mat& op) { return rho.cwiseProduct(op.transpose()).sum().real(); }

inline double photons(const Mat& rho) {
    const Mat a = lowering(static_cast<int>(rho.rows()));
    return expect(rho, a.adjoint() * a);
}

inline double variance(const Mat& rho, double theta) {
    const Mat x = quadrature(theta, static_cast<int>(rho.rows()));
    const double m = expect(rho, x);
    return expect(rho, x * x) - m * m;
}

inline double purity(const Mat& rho) { return (rho * rho).trace().real(); }

// Two-mode g2 from the joint state sum_k w_k |b1_k><b1_k| (x) |b2_k><b2_k|.
inline double g2_joint(const std::vector<double>& w, const std::vector<cplx>& b1, const std::vector<cplx>& b2,
                       int n) {
    const int d = n * n;
    Mat rho = Mat::Zero(d, d);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto u = ket(b1[k], n), v = ket(b2[k], n);
        Eigen::VectorXcd uv(d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) uv(i * n + j) = u(i) * v(j);
        rho += w[k] * uv * uv.adjoint();
    }
    const Mat a = lowering(n);
    const Mat num = a.adjoint() * a;
    Mat n1 = Mat::Zero(d, d), n2 = Mat::Zero(d, d), n12 = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        n2.block(i * n, i * n, n, n) = num;
        for (int j = 0; j < n; ++j) {
            n1.block(i * n, j * n, n, n) = num(i, j) * Mat::Identity(n, n);
            n12.block(i * n, j * n, n, n) = num(i, j) * num;
        }
    }
    return expect(rho, n12) / (expect(rho, n1) * expect(rho, n2));
}

// Single-mode normally ordered g2.
inline double g2_single(const Mat& rho) {
    const Mat a = lowering(static_cast<int>(rho.rows()));
    const Mat ad = a.adjoint();
    const double n = photons(rho);
    return expect(rho, ad * ad * a * a) / (n * n);
}

}  // namespace oracle

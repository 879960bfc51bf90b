#include "morseopt/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace morseopt::dense {

bool is_symmetric(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = 1.0 + a.cwiseAbs().maxCoeff();
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input) {
    if (!is_symmetric(input, 1e-10))
        throw std::invalid_argument("jacobi_eigen requires a symmetric matrix");
    const Eigen::Index n = input.rows();
    Eigen::MatrixXd a = 0.5 * (input + input.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double stop = 1e-15 * scale;
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= stop) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= stop * 1e-2) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    SymmetricEigen out;
    out.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.values(i) = a(i, i);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index x, Eigen::Index y) { return out.values(x) < out.values(y); });

    Eigen::VectorXd sorted_vals(n);
    Eigen::MatrixXd sorted_vecs(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sorted_vals(i) = out.values(order[static_cast<std::size_t>(i)]);
        sorted_vecs.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    out.values = std::move(sorted_vals);
    out.vectors = std::move(sorted_vecs);
    return out;
}

bool cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& lower) {
    const Eigen::Index n = a.rows();
    lower = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
        if (!(d > 0.0)) return false;
        lower(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            lower(i, j) = s / lower(j, j);
        }
    }
    return true;
}

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& rhs) {
    const Eigen::Index n = lower.rows();
    Eigen::VectorXd x = rhs;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < i; ++k) x(i) -= lower(i, k) * x(k);
        x(i) /= lower(i, i);
    }
    for (Eigen::Index i = n; i-- > 0;) {
        for (Eigen::Index k = i + 1; k < n; ++k) x(i) -= lower(k, i) * x(k);
        x(i) /= lower(i, i);
    }
    return x;
}

Eigen::MatrixXd symmetric_power(const SymmetricEigen& eig, double exponent) {
    const Eigen::Index n = eig.values.size();
    Eigen::VectorXd powered(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = eig.values(i);
        if (v <= 0.0 && (exponent < 0.0 || std::floor(exponent) != exponent))
            throw std::domain_error("symmetric_power requires a positive-definite matrix");
        powered(i) = std::pow(v, exponent);
    }
    return eig.vectors * powered.asDiagonal() * eig.vectors.transpose();
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
    if (a.rows() == 0) throw std::invalid_argument("min_eigenvalue of an empty matrix");
    return jacobi_eigen(a).values(0);
}

}  // namespace morseopt::dense

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>

namespace equant {

// Finite-difference weights for the `order`-th derivative at `x0` from
// arbitrary nodes (Fornberg's recursion). Row k of the result holds the
// weights for the k-th derivative, k = 0..order.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> fornberg_weights(Scalar x0, std::span<const Scalar> nodes,
                                                                       int order) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(order + 1, n);
    Scalar c1 = 1;
    Scalar c4 = nodes[0] - x0;
    c(0, 0) = 1;
    for (Eigen::Index i = 1; i < n; ++i) {
        const auto mn = std::min<Eigen::Index>(i, order);
        Scalar c2 = 1;
        const Scalar c5 = c4;
        c4 = nodes[i] - x0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const Scalar c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (Eigen::Index k = mn; k >= 1; --k) {
                    c(k, i) = c1 * (Scalar(k) * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                }
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (Eigen::Index k = mn; k >= 1; --k) {
                c(k, j) = (c4 * c(k, j) - Scalar(k) * c(k - 1, j)) / c3;
            }
            c(0, j) = c4 * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c;
}

// First-derivative matrix on a uniform grid of `n` points with spacing `h`.
// Interior rows use the centred stencil of half-width `half_width` and are
// exactly antisymmetric; the `half_width` rows at each end use one-sided
// stencils of the same width.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> uniform_derivative_matrix(Eigen::Index n, Scalar h,
                                                                                Eigen::Index half_width) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index width = 2 * half_width + 1;
    Mat d = Mat::Zero(n, n);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> offsets(width);
    for (Eigen::Index k = 0; k < width; ++k) offsets(k) = Scalar(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index start = i - half_width;
        if (start < 0) start = 0;
        if (start + width > n) start = n - width;
        const Scalar x0 = Scalar(i - start);
        const auto w = fornberg_weights<Scalar>(x0, std::span<const Scalar>(offsets.data(), width), 1);
        for (Eigen::Index k = 0; k < width; ++k) d(i, start + k) = w(1, k) / h;
    }
    // Remove round-off asymmetry from the centred block.
    for (Eigen::Index i = half_width; i < n - half_width; ++i) {
        for (Eigen::Index j = i + 1; j <= i + half_width; ++j) {
            if (j >= n - half_width) break;
            const Scalar a = Scalar(0.5) * (d(i, j) - d(j, i));
            d(i, j) = a;
            d(j, i) = -a;
        }
        d(i, i) = 0;
    }
    return d;
}

// Applies the same operator as uniform_derivative_matrix without forming it.
template <typename Derived>
auto apply_uniform_derivative(const Eigen::MatrixBase<Derived>& f, double h, Eigen::Index half_width) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = f.size();
    const Eigen::Index width = 2 * half_width + 1;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
    Eigen::VectorXd offsets(width);
    for (Eigen::Index k = 0; k < width; ++k) offsets(k) = double(k);
    const auto centred = fornberg_weights<double>(double(half_width), std::span<const double>(offsets.data(), width), 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index start = i - half_width;
        if (start < 0) start = 0;
        if (start + width > n) start = n - width;
        const bool interior = i >= half_width && i < n - half_width;
        Eigen::MatrixXd w = interior ? centred
                                     : fornberg_weights<double>(double(i - start),
                                                                std::span<const double>(offsets.data(), width), 1);
        Scalar acc(0);
        for (Eigen::Index k = 0; k < width; ++k) acc += w(1, k) * f(start + k);
        out(i) = acc / h;
    }
    return out;
}

}  // namespace equant

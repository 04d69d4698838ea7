#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "twsp/detail/eigen.hpp"
#include "twsp/matrix.hpp"

namespace twsp {

/// Leading singular triplet of the matrix it was computed from: u has unit
/// norm and length rows, v has unit norm and length cols, sigma >= 0, with
/// A v ~ sigma u and A^T u ~ sigma v up to the iteration tolerance.
struct SingularTriplet {
    std::vector<double> u;
    double sigma = 0.0;
    std::vector<double> v;
};

namespace detail {

struct LeadingTriplet {
    Eigen::VectorXd u;
    double sigma = 0.0;
    Eigen::VectorXd v;
};

/**
 * Power iteration for the dominant singular triplet.
 *
 * Iterates on the Gram matrix of the smaller side (A A^T when rows <= cols,
 * A^T A otherwise), starting from the column (respectively row) of largest
 * 2-norm, lowest index on ties. Stops when successive singular-value
 * estimates change by less than 1e-12 relative, or after 1000 steps. When the
 * two top singular values are (nearly) tied the iterate settles on some
 * direction inside the top subspace; that is enough for the matching step
 * downstream, which only needs a direction of maximal residual energy.
 */
inline LeadingTriplet leading_triplet(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    const Eigen::Index m = a.cols();
    if (n == 0 || m == 0) throw std::invalid_argument("leading singular vector: empty matrix");

    const bool iterate_left = n <= m;
    const Eigen::Index dim = iterate_left ? n : m;

    Eigen::Index start = -1;
    double best_norm = 0.0;
    if (iterate_left) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double s = a.col(j).squaredNorm();
            if (s > best_norm) {
                best_norm = s;
                start = j;
            }
        }
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = a.row(i).squaredNorm();
            if (s > best_norm) {
                best_norm = s;
                start = i;
            }
        }
    }
    if (start < 0) throw std::domain_error("leading singular vector: all-zero matrix");

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
    if (iterate_left) {
        gram.selfadjointView<Eigen::Lower>().rankUpdate(a);
    } else {
        gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    }

    Eigen::VectorXd x =
        iterate_left ? Eigen::VectorXd(a.col(start)) : Eigen::VectorXd(a.row(start).transpose());
    x /= x.norm();

    constexpr int kMaxSteps = 1000;
    constexpr double kRelTol = 1e-12;
    double sigma_prev = -1.0;
    Eigen::VectorXd y(dim);
    for (int step = 0; step < kMaxSteps; ++step) {
        y.noalias() = gram.selfadjointView<Eigen::Lower>() * x;
        const double sigma = std::sqrt(std::max(x.dot(y), 0.0));
        const double ynorm = y.norm();
        if (ynorm == 0.0) break;
        x = y / ynorm;
        if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) < kRelTol * sigma) break;
        sigma_prev = sigma;
    }

    LeadingTriplet t;
    if (iterate_left) {
        t.u = x;
        Eigen::VectorXd w = a.transpose() * x;
        t.sigma = w.norm();
        t.v = t.sigma > 0.0 ? Eigen::VectorXd(w / t.sigma) : Eigen::VectorXd::Zero(m);
    } else {
        t.v = x;
        Eigen::VectorXd z = a * x;
        t.sigma = z.norm();
        t.u = t.sigma > 0.0 ? Eigen::VectorXd(z / t.sigma) : Eigen::VectorXd::Zero(n);
    }
    return t;
}

/// Flips both vectors so the first entry of `anchor` with magnitude above
/// 1e-12 is non-negative. Singular vectors are only defined up to sign; this
/// makes the choice deterministic.
inline void apply_sign_convention(Eigen::VectorXd& anchor, Eigen::VectorXd& other) {
    for (Eigen::Index i = 0; i < anchor.size(); ++i) {
        if (std::abs(anchor(i)) > 1e-12) {
            if (anchor(i) < 0.0) {
                anchor = -anchor;
                other = -other;
            }
            return;
        }
    }
}

/// Moore-Penrose pseudo-inverse via thin SVD. Singular values at or below the
/// tolerance are treated as zero; the default tolerance is
/// max(rows, cols) * eps * sigma_max.
inline Eigen::MatrixXd pinv(const Eigen::MatrixXd& a,
                            std::optional<double> rank_tol = std::nullopt) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = rank_tol ? *rank_tol
                                : static_cast<double>(std::max(a.rows(), a.cols())) *
                                      std::numeric_limits<double>::epsilon() * sigma_max;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace detail

/// Full singular spectrum, sorted non-increasing.
inline std::vector<double> singular_values(const DenseMatrix& a) {
    if (a.empty()) throw std::invalid_argument("singular_values: empty matrix");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(detail::to_eigen(a));
    return detail::to_std(svd.singularValues());
}

/// Moore-Penrose pseudo-inverse. `rank_tol` overrides the automatic rank
/// cutoff max(rows, cols) * eps * sigma_max; singular values at or below the
/// cutoff are dropped, so rank-deficient inputs degrade gracefully.
inline DenseMatrix pseudo_inverse(const DenseMatrix& a,
                                  std::optional<double> rank_tol = std::nullopt) {
    if (a.empty()) throw std::invalid_argument("pseudo_inverse: empty matrix");
    if (rank_tol && (!(*rank_tol >= 0.0) || !std::isfinite(*rank_tol)))
        throw std::invalid_argument("pseudo_inverse: rank_tol must be a finite value >= 0");
    return detail::to_dense(detail::pinv(detail::to_eigen(a), rank_tol));
}

/// Dominant left singular vector (see detail::leading_triplet for the
/// iteration). Sign convention: the first entry of u with magnitude above
/// 1e-12 is non-negative.
inline SingularTriplet leading_left_singular_vector(const DenseMatrix& a) {
    auto t = detail::leading_triplet(detail::to_eigen(a));
    detail::apply_sign_convention(t.u, t.v);
    return {detail::to_std(t.u), t.sigma, detail::to_std(t.v)};
}

/// Dominant right singular vector; sign anchored on v instead of u.
inline SingularTriplet leading_right_singular_vector(const DenseMatrix& a) {
    auto t = detail::leading_triplet(detail::to_eigen(a));
    detail::apply_sign_convention(t.v, t.u);
    return {detail::to_std(t.u), t.sigma, detail::to_std(t.v)};
}

}  // namespace twsp

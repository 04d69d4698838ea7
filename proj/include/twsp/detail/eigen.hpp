#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "twsp/matrix.hpp"

namespace twsp::detail {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajorMatrix>;

inline ConstMap map_of(const DenseMatrix& a) {
    return ConstMap(a.data().data(), static_cast<Eigen::Index>(a.rows()),
                    static_cast<Eigen::Index>(a.cols()));
}

inline Eigen::MatrixXd to_eigen(const DenseMatrix& a) { return map_of(a); }

inline DenseMatrix to_dense(const Eigen::MatrixXd& m) {
    std::vector<double> data(static_cast<std::size_t>(m.size()));
    Eigen::Map<RowMajorMatrix>(data.data(), m.rows(), m.cols()) = m;
    return DenseMatrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                       std::move(data));
}

// Callers are responsible for index validation.
inline Eigen::MatrixXd gather_columns(const ConstMap& x, std::span<const std::size_t> idx) {
    Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t t = 0; t < idx.size(); ++t)
        out.col(static_cast<Eigen::Index>(t)) = x.col(static_cast<Eigen::Index>(idx[t]));
    return out;
}

inline Eigen::MatrixXd gather_rows(const ConstMap& x, std::span<const std::size_t> idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t t = 0; t < idx.size(); ++t)
        out.row(static_cast<Eigen::Index>(t)) = x.row(static_cast<Eigen::Index>(idx[t]));
    return out;
}

inline Eigen::MatrixXd gather_columns_excluding(const ConstMap& x, std::span<const std::size_t> idx,
                                                std::size_t skip_slot) {
    Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(idx.size() - 1));
    Eigen::Index t = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) {
        if (s == skip_slot) continue;
        out.col(t++) = x.col(static_cast<Eigen::Index>(idx[s]));
    }
    return out;
}

inline Eigen::MatrixXd gather_rows_excluding(const ConstMap& x, std::span<const std::size_t> idx,
                                             std::size_t skip_slot) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size() - 1), x.cols());
    Eigen::Index t = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) {
        if (s == skip_slot) continue;
        out.row(t++) = x.row(static_cast<Eigen::Index>(idx[s]));
    }
    return out;
}

}  // namespace twsp::detail

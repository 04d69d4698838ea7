#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "twsp/detail/eigen.hpp"
#include "twsp/matrix.hpp"

namespace twsp {

struct ChannelPick {
    std::size_t channel = 0;  // column label
    double value = 0.0;       // the core entry (signed; ranking is by |value|)
};

struct RowAssignment {
    std::size_t row = 0;  // row label
    std::vector<ChannelPick> picks;
};

/// Per selected row: the f column labels with the largest |core entry|,
/// ordered by descending magnitude.
struct ChannelAssignment {
    std::size_t per_row = 0;
    std::vector<RowAssignment> rows;
};

/// For each row of `core`, picks the f columns with the largest absolute
/// entry (ties to the lower column position) and reports them under the given
/// axis labels. Typical use: core rows are selected sensing locations, core
/// columns are channels, and each location senses only its top-f channels.
inline ChannelAssignment assign_top_f(const DenseMatrix& core, std::size_t f,
                                      std::span<const std::size_t> row_ids,
                                      std::span<const std::size_t> col_ids) {
    if (core.empty()) throw std::invalid_argument("assign_top_f: empty core");
    if (f < 1 || f > core.cols())
        throw std::invalid_argument("assign_top_f: f must be in [1, core columns]");
    if (row_ids.size() != core.rows() || col_ids.size() != core.cols())
        throw std::invalid_argument("assign_top_f: label lists must match the core's shape");

    ChannelAssignment out;
    out.per_row = f;
    out.rows.reserve(core.rows());
    std::vector<std::size_t> order(core.cols());
    for (std::size_t i = 0; i < core.rows(); ++i) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double fa = std::fabs(core(i, a));
            const double fb = std::fabs(core(i, b));
            if (fa != fb) return fa > fb;
            return a < b;
        });
        RowAssignment row;
        row.row = row_ids[i];
        row.picks.reserve(f);
        for (std::size_t t = 0; t < f; ++t)
            row.picks.push_back({col_ids[order[t]], core(i, order[t])});
        out.rows.push_back(std::move(row));
    }
    return out;
}

/// Cross-class kernel X2^T X1 for two sample sets sharing a feature
/// dimension (columns are samples): entry (i, j) is the inner product of
/// X2's sample i with X1's sample j. Selecting columns of the kernel picks
/// class-1 samples and selecting rows picks class-2 samples. For more than
/// two classes, build one kernel per class with X2 the concatenation
/// (hstack) of all other classes.
inline DenseMatrix cross_class_kernel(const DenseMatrix& x1, const DenseMatrix& x2) {
    if (x1.empty() || x2.empty()) throw std::invalid_argument("cross_class_kernel: empty input");
    if (x1.rows() != x2.rows())
        throw std::invalid_argument("cross_class_kernel: feature dimensions differ");
    const Eigen::MatrixXd k = detail::map_of(x2).transpose() * detail::map_of(x1);
    return detail::to_dense(k);
}

}  // namespace twsp

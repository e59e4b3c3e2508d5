// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/linalg.hpp"

#include <utility>

namespace extbell {

RowEchelon rref(RMatrix m, std::size_t cols) {
    RowEchelon out;
    out.cols = cols;
    std::size_t rows = m.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && sgn(m[pivot][c]) == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        Rational inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) {
            if (sgn(m[r][j]) != 0) m[r][j] *= inv;
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                if (sgn(m[r][j]) != 0) m[i][j] -= f * m[r][j];
            }
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

std::size_t rank(const RMatrix& m, std::size_t cols) { return rref(m, cols).rank(); }

RMatrix nullspace(const RMatrix& m, std::size_t cols) {
    RowEchelon e = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    RMatrix basis;
    for (std::size_t j = 0; j < cols; ++j) {
        if (is_pivot[j]) continue;
        RVector z(cols, 0);
        z[j] = 1;
        for (std::size_t k = 0; k < e.pivots.size(); ++k) z[e.pivots[k]] = -e.rows[k][j];
        basis.push_back(std::move(z));
    }
    return basis;
}

bool solve_particular(const RMatrix& m, const RVector& rhs, std::size_t cols, RVector& x) {
    RMatrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
    RowEchelon e = rref(std::move(aug), cols + 1);
    x.assign(cols, 0);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) {
        if (e.pivots[k] == cols) return false;
        x[e.pivots[k]] = e.rows[k][cols];
    }
    return true;
}

}  // namespace extbell

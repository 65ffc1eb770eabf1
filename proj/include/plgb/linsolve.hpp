#pragma once

#include <optional>
#include <vector>

#include "plgb/rational.hpp"

namespace plgb {

// Dense exact Gaussian elimination over the rationals. Solves A x = b for
// one solution (free variables pinned to zero, deterministic pivot order);
// returns nullopt when the system is inconsistent. Supports multiple right
// hand sides solved against a single elimination pass.
class LinearSystem {
public:
    LinearSystem(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows) {
        for (auto& r : a_) r.assign(cols, Rational(0));
    }

    Rational& at(size_t r, size_t c) { return a_[r][c]; }

    std::vector<std::optional<std::vector<Rational>>> solve(
        const std::vector<std::vector<Rational>>& rhss) const {
        // augmented elimination; copy since we are logically const
        std::vector<std::vector<Rational>> m = a_;
        const size_t nrhs = rhss.size();
        std::vector<std::vector<Rational>> b;
        b.reserve(nrhs);
        for (const auto& rhs : rhss) {
            if (rhs.size() != rows_) throw std::invalid_argument("rhs size mismatch");
            b.push_back(rhs);
        }

        std::vector<size_t> pivot_col;  // per eliminated row
        size_t row = 0;
        for (size_t col = 0; col < cols_ && row < rows_; ++col) {
            size_t piv = row;
            while (piv < rows_ && m[piv][col] == 0) ++piv;
            if (piv == rows_) continue;
            std::swap(m[piv], m[row]);
            for (auto& rhs : b) std::swap(rhs[piv], rhs[row]);
            const Rational inv = Rational(1) / m[row][col];
            for (size_t c = col; c < cols_; ++c) m[row][c] *= inv;
            for (auto& rhs : b) rhs[row] *= inv;
            for (size_t r = 0; r < rows_; ++r) {
                if (r == row || m[r][col] == 0) continue;
                const Rational f = m[r][col];
                for (size_t c = col; c < cols_; ++c) m[r][c] -= f * m[row][c];
                for (size_t k = 0; k < nrhs; ++k) b[k][r] -= f * b[k][row];
            }
            pivot_col.push_back(col);
            ++row;
        }

        std::vector<std::optional<std::vector<Rational>>> out(nrhs);
        for (size_t k = 0; k < nrhs; ++k) {
            bool consistent = true;
            for (size_t r = row; r < rows_; ++r)
                if (b[k][r] != 0) consistent = false;
            if (!consistent) continue;
            std::vector<Rational> x(cols_, Rational(0));
            for (size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = b[k][r];
            out[k] = std::move(x);
        }
        return out;
    }

    std::optional<std::vector<Rational>> solve_one(const std::vector<Rational>& rhs) const {
        return solve({rhs})[0];
    }

private:
    size_t rows_, cols_;
    std::vector<std::vector<Rational>> a_;
};

}  // namespace plgb

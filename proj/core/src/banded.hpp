#pragma once

// Banded LU with partial pivoting for half-bandwidth KL = KU = 3 systems
// (LAPACK gbtrf-style compact storage). Internal to the library.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "inls/grid.hpp"

namespace inls::detail {

template <typename T>
struct BandedLU {
    static constexpr int kl = 3, ku = 3;
    int n = 0;
    // storage rows 0 .. 2*kl+ku: row kl+ku+i-j holds A(i,j); top kl rows are fill
    std::vector<T> ab;
    std::vector<int> piv;

    T& at(int i, int j) { return ab[static_cast<std::size_t>(j) * (2 * kl + ku + 1) + (kl + ku + i - j)]; }

    void factor_from(const BandedRows& rows) {
        n = rows.n;
        ab.assign(static_cast<std::size_t>(n) * (2 * kl + ku + 1), T{});
        piv.assign(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
                at(i, j) = static_cast<T>(rows.get(i, j));
        factor();
    }

    // A = I * diag_shift + M * rows  (used for the Crank-Nicolson pair)
    void factor_shifted(const BandedRows& rows, T scale, T shift) {
        n = rows.n;
        ab.assign(static_cast<std::size_t>(n) * (2 * kl + ku + 1), T{});
        piv.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
                at(i, j) = scale * static_cast<T>(rows.get(i, j));
            at(i, i) += shift;
        }
        factor();
    }

    void factor() {
        const int lda = 2 * kl + ku + 1;
        for (int j = 0; j < n; ++j) {
            int pmax = j;
            double vmax = std::abs(at(j, j));
            for (int i = j + 1; i <= std::min(n - 1, j + kl); ++i) {
                double v = std::abs(at(i, j));
                if (v > vmax) {
                    vmax = v;
                    pmax = i;
                }
            }
            if (vmax == 0.0) throw std::runtime_error("banded LU: singular matrix");
            piv[j] = pmax;
            int jmax = std::min(n - 1, j + kl + ku);
            if (pmax != j)
                for (int c = j; c <= jmax; ++c) {
                    // swap within band columns where both entries exist
                    int off_a = kl + ku + j - c, off_b = kl + ku + pmax - c;
                    if (off_b < 0 || off_b >= lda) continue;
                    std::swap(ab[static_cast<std::size_t>(c) * lda + off_a],
                              ab[static_cast<std::size_t>(c) * lda + off_b]);
                }
            T pivval = at(j, j);
            for (int i = j + 1; i <= std::min(n - 1, j + kl); ++i) {
                T m = at(i, j) / pivval;
                at(i, j) = m;
                for (int c = j + 1; c <= jmax; ++c) at(i, c) -= m * at(j, c);
            }
        }
    }

    void solve(std::vector<T>& x) {
        for (int j = 0; j < n; ++j) {
            if (piv[j] != j) std::swap(x[j], x[piv[j]]);
            for (int i = j + 1; i <= std::min(n - 1, j + kl); ++i) x[i] -= at(i, j) * x[j];
        }
        for (int j = n - 1; j >= 0; --j) {
            for (int c = j + 1; c <= std::min(n - 1, j + kl + ku); ++c) x[j] -= at(j, c) * x[c];
            x[j] /= at(j, j);
        }
    }
};

// y = rows * x  (plain banded mat-vec)
template <typename T>
void banded_apply(const BandedRows& rows, const std::vector<T>& x, std::vector<T>& y) {
    const int n = rows.n;
    y.assign(n, T{});
    for (int i = 0; i < n; ++i) {
        T s{};
        for (int j = std::max(0, i - BandedRows::half); j <= std::min(n - 1, i + BandedRows::half); ++j)
            s += static_cast<T>(rows.get(i, j)) * x[j];
        y[i] = s;
    }
}

// y = shift * x + scale * rows * x
template <typename T>
void banded_apply_shifted(const BandedRows& rows, T scale, T shift, const std::vector<T>& x,
                          std::vector<T>& y) {
    banded_apply(rows, x, y);
    for (int i = 0; i < rows.n; ++i) y[i] = shift * x[i] + scale * y[i];
}

}  // namespace inls::detail

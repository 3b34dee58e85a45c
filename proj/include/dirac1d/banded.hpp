#pragma once

// LU factorization of banded matrices with partial pivoting, LAPACK-style
// band storage. The shifted operators (D - z) are tridiagonal or
// pentadiagonal, so solves cost O(dim * bandwidth^2) instead of O(dim^3).

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dirac1d {

namespace detail {
inline double mag(double x) { return std::abs(x); }
inline double mag(const std::complex<double>& x) {
  return std::abs(x.real()) + std::abs(x.imag());
}
}  // namespace detail

// Band storage with kl sub- and ku superdiagonals plus kl fill rows for the
// pivoted factorization: entry (i, j) lives at ab[j * ldab + kl + ku + i - j]
// for i - j in [-(kl + ku), kl].
template <class T>
class BandedLU {
 public:
  BandedLU(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(n) * static_cast<std::size_t>(ldab_)),
        ipiv_(static_cast<std::size_t>(n)) {
    if (n < 1 || kl < 0 || ku < 0) throw std::invalid_argument("BandedLU: bad shape");
  }

  T& at(int i, int j) {
    return ab_[static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_) +
               static_cast<std::size_t>(kl_ + ku_ + i - j)];
  }
  const T& at(int i, int j) const {
    return ab_[static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_) +
               static_cast<std::size_t>(kl_ + ku_ + i - j)];
  }

  int dim() const { return n_; }

  // In-place right-looking factorization. Throws on an exactly singular pivot.
  void factor() {
    for (int j = 0; j < n_; ++j) {
      const int last_row = std::min(n_ - 1, j + kl_);
      int p = j;
      double best = detail::mag(at(j, j));
      for (int i = j + 1; i <= last_row; ++i) {
        const double m = detail::mag(at(i, j));
        if (m > best) {
          best = m;
          p = i;
        }
      }
      ipiv_[static_cast<std::size_t>(j)] = p;
      if (best == 0.0) throw std::runtime_error("BandedLU: singular matrix");
      const int last_col = std::min(n_ - 1, j + kl_ + ku_);
      if (p != j)
        for (int col = j; col <= last_col; ++col) std::swap(at(j, col), at(p, col));
      const T pivot = at(j, j);
      for (int i = j + 1; i <= last_row; ++i) {
        const T mult = at(i, j) / pivot;
        at(i, j) = mult;
        for (int col = j + 1; col <= last_col; ++col) at(i, col) -= mult * at(j, col);
      }
    }
    factored_ = true;
  }

  void solve(T* b) const {
    if (!factored_) throw std::logic_error("BandedLU: solve before factor");
    for (int j = 0; j < n_; ++j) {
      const int p = ipiv_[static_cast<std::size_t>(j)];
      if (p != j) std::swap(b[j], b[p]);
      const int last_row = std::min(n_ - 1, j + kl_);
      for (int i = j + 1; i <= last_row; ++i) b[i] -= at(i, j) * b[j];
    }
    for (int j = n_ - 1; j >= 0; --j) {
      b[j] /= at(j, j);
      const int first_row = std::max(0, j - kl_ - ku_);
      for (int i = first_row; i < j; ++i) b[i] -= at(i, j) * b[j];
    }
  }

  void solve(std::vector<T>& b) const {
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedLU: rhs size");
    solve(b.data());
  }

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<T> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

}  // namespace dirac1d

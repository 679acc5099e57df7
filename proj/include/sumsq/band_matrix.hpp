#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sumsq {

/// Square real matrix with band storage: entry (i,j) kept iff
/// -lower <= j - i <= upper. Row-major band layout.
class BandedMatrix {
 public:
  BandedMatrix(int n, int lower, int upper)
      : n_(n), lower_(lower), upper_(upper),
        a_(static_cast<std::size_t>(n) * width(), 0.0) {
    if (n < 1 || lower < 0 || upper < 0) throw std::invalid_argument("BandedMatrix: bad shape");
  }

  static BandedMatrix identity(int n) {
    BandedMatrix m(n, 0, 0);
    for (int i = 0; i < n; ++i) m.ref(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  bool in_band(int i, int j) const {
    const int d = j - i;
    return d >= -lower_ && d <= upper_;
  }

  double get(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || !in_band(i, j)) return 0.0;
    return a_[idx(i, j)];
  }

  double& ref(int i, int j) {
    if (!in_band(i, j)) throw std::out_of_range("BandedMatrix::ref: outside band");
    return a_[idx(i, j)];
  }

  BandedMatrix& operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
  }

  friend BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("BandedMatrix: size mismatch");
    BandedMatrix out(a.n_, std::max(a.lower_, b.lower_), std::max(a.upper_, b.upper_));
    for (int i = 0; i < a.n_; ++i) {
      const int jlo = std::max(0, i - out.lower_), jhi = std::min(a.n_ - 1, i + out.upper_);
      for (int j = jlo; j <= jhi; ++j) out.ref(i, j) = a.get(i, j) + b.get(i, j);
    }
    return out;
  }

  /// Band product; bandwidths add.
  friend BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("BandedMatrix: size mismatch");
    BandedMatrix out(a.n_, std::min(a.n_ - 1, a.lower_ + b.lower_),
                     std::min(a.n_ - 1, a.upper_ + b.upper_));
    for (int i = 0; i < a.n_; ++i) {
      const int klo = std::max(0, i - a.lower_), khi = std::min(a.n_ - 1, i + a.upper_);
      for (int k = klo; k <= khi; ++k) {
        const double aik = a.a_[a.idx(i, k)];
        if (aik == 0.0) continue;
        const int jlo = std::max({0, k - b.lower_, i - out.lower_});
        const int jhi = std::min({a.n_ - 1, k + b.upper_, i + out.upper_});
        for (int j = jlo; j <= jhi; ++j) out.a_[out.idx(i, j)] += aik * b.a_[b.idx(k, j)];
      }
    }
    return out;
  }

  std::vector<double> apply(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("BandedMatrix::apply: size mismatch");
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      const int jlo = std::max(0, i - lower_), jhi = std::min(n_ - 1, i + upper_);
      double acc = 0.0;
      for (int j = jlo; j <= jhi; ++j) acc += a_[idx(i, j)] * v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
  }

  /// A applied to v zero-extended or truncated to the matrix size.
  std::vector<double> apply_padded(std::span<const double> v) const {
    std::vector<double> w(static_cast<std::size_t>(n_), 0.0);
    const std::size_t m = std::min<std::size_t>(v.size(), static_cast<std::size_t>(n_));
    std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), w.begin());
    return apply(w);
  }

 private:
  int width() const { return lower_ + upper_ + 1; }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(j - i + lower_);
  }

  int n_, lower_, upper_;
  std::vector<double> a_;
};

/// Structurally symmetric real band matrix: stores bands d = 0..half of
/// entries M(i, i+d).
class SymBandMatrix {
 public:
  SymBandMatrix(int n, int half)
      : n_(n), half_(half), bands_(static_cast<std::size_t>(n) * (half + 1), 0.0) {
    if (n < 1 || half < 0) throw std::invalid_argument("SymBandMatrix: bad shape");
  }

  int size() const { return n_; }
  int halfband() const { return half_; }

  double at(int i, int j) const {
    if (j < i) std::swap(i, j);
    const int d = j - i;
    if (d > half_ || j >= n_) return 0.0;
    return bands_[idx(d, i)];
  }

  double& band(int d, int i) { return bands_[idx(d, i)]; }
  double band(int d, int i) const { return bands_[idx(d, i)]; }

  std::vector<double> matvec(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("SymBandMatrix::matvec: size mismatch");
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      double acc = bands_[idx(0, i)] * v[static_cast<std::size_t>(i)];
      for (int d = 1; d <= half_; ++d) {
        if (i + d < n_) acc += bands_[idx(d, i)] * v[static_cast<std::size_t>(i + d)];
        if (i - d >= 0) acc += bands_[idx(d, i - d)] * v[static_cast<std::size_t>(i - d)];
      }
      out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
  }

  double inf_norm() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) {
      double row = 0.0;
      for (int j = std::max(0, i - half_); j <= std::min(n_ - 1, i + half_); ++j)
        row += std::abs(at(i, j));
      m = std::max(m, row);
    }
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : bands_) m = std::max(m, std::abs(x));
    return m;
  }

  /// Leading N-by-N block of a general banded matrix, symmetrized. Refuses if
  /// the block's asymmetry exceeds max_rel_asym relative to its largest entry.
  static SymBandMatrix from_banded_truncate(const BandedMatrix& a, int n, double max_rel_asym) {
    if (n > a.size()) throw std::invalid_argument("SymBandMatrix: block larger than source");
    const int half = std::min(n - 1, std::max(a.lower(), a.upper()));
    double scale = 0.0, asym = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j <= std::min(n - 1, i + half); ++j) {
        scale = std::max({scale, std::abs(a.get(i, j)), std::abs(a.get(j, i))});
        asym = std::max(asym, std::abs(a.get(i, j) - a.get(j, i)));
      }
    if (asym > max_rel_asym * std::max(scale, 1e-300))
      throw std::runtime_error("SymBandMatrix: operator block is not symmetric");
    SymBandMatrix m(n, half);
    for (int i = 0; i < n; ++i)
      for (int d = 0; d <= half && i + d < n; ++d)
        m.band(d, i) = 0.5 * (a.get(i, i + d) + a.get(i + d, i));
    return m;
  }

  /// A^T A restricted to the first ncols columns of A (all rows kept), so the
  /// result is the exact Gram matrix of those columns.
  static SymBandMatrix gram_truncated(const BandedMatrix& a, int ncols) {
    if (ncols > a.size()) throw std::invalid_argument("SymBandMatrix: ncols larger than source");
    const int reach = a.lower() + a.upper();
    const int half = std::min(ncols - 1, reach);
    SymBandMatrix m(ncols, half);
    for (int i = 0; i < ncols; ++i) {
      for (int d = 0; d <= half && i + d < ncols; ++d) {
        const int j = i + d;
        const int rlo = std::max({0, i - a.upper(), j - a.upper()});
        const int rhi = std::min({a.size() - 1, i + a.lower(), j + a.lower()});
        double acc = 0.0;
        for (int r = rlo; r <= rhi; ++r) acc += a.get(r, i) * a.get(r, j);
        m.band(d, i) = acc;
      }
    }
    return m;
  }

  /// alpha*A + beta*B.
  static SymBandMatrix weighted_sum(double alpha, const SymBandMatrix& a, double beta,
                                    const SymBandMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("SymBandMatrix: size mismatch");
    SymBandMatrix out(a.n_, std::max(a.half_, b.half_));
    for (int i = 0; i < a.n_; ++i)
      for (int d = 0; d <= out.half_ && i + d < a.n_; ++d) {
        double v = 0.0;
        if (d <= a.half_) v += alpha * a.band(d, i);
        if (d <= b.half_) v += beta * b.band(d, i);
        out.band(d, i) = v;
      }
    return out;
  }

 private:
  std::size_t idx(int d, int i) const {
    return static_cast<std::size_t>(d) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }

  int n_, half_;
  std::vector<double> bands_;
};

}  // namespace sumsq

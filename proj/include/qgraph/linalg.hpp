#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qgraph {

using Cplx = std::complex<double>;

// Dense complex matrix, row-major. Sized for endpoint matrices (2N x 2N at
// desk scale), so everything here is O(n^3) without blocking.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("Matrix: size mismatch in product");
    Matrix r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        Cplx xv = x(i, k);
        if (xv == Cplx(0.0)) continue;
        for (int j = 0; j < y.cols_; ++j) r(i, j) += xv * y(k, j);
      }
    return r;
  }

  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw std::invalid_argument("Matrix: size mismatch in difference");
    Matrix r(x.rows_, x.cols_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
    return r;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw std::invalid_argument("Matrix: size mismatch in sum");
    Matrix r(x.rows_, x.cols_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }

  Matrix conjugate_transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  std::vector<Cplx> apply(const std::vector<Cplx>& x) const {
    if (static_cast<int>(x.size()) != cols_)
      throw std::invalid_argument("Matrix: size mismatch in apply");
    std::vector<Cplx> y(rows_, Cplx(0.0));
    for (int i = 0; i < rows_; ++i) {
      Cplx acc = 0.0;
      for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Cplx> a_;
};

// det via LU with partial pivoting; the copy is consumed.
inline Cplx determinant(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: square matrix required");
  const int n = a.rows();
  Cplx det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a(r, col));
      if (v > best) { best = v; piv = r; }
    }
    if (best == 0.0) return Cplx(0.0);
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    const Cplx inv = 1.0 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      Cplx f = a(r, col) * inv;
      if (f == Cplx(0.0)) continue;
      for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

// Solves a * x = b for possibly many right-hand sides (columns of b).
inline Matrix solve(Matrix a, Matrix b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw std::invalid_argument("solve: size mismatch");
  const int n = a.rows();
  const int m = b.cols();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a(r, col));
      if (v > best) { best = v; piv = r; }
    }
    if (best == 0.0) throw std::domain_error("solve: singular matrix");
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
      for (int j = 0; j < m; ++j) std::swap(b(piv, j), b(col, j));
    }
    const Cplx inv = 1.0 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      Cplx f = a(r, col) * inv;
      if (f == Cplx(0.0)) continue;
      for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
      for (int j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    const Cplx inv = 1.0 / a(col, col);
    for (int j = 0; j < m; ++j) {
      Cplx acc = b(col, j);
      for (int r = col + 1; r < n; ++r) acc -= a(col, r) * b(r, j);
      b(col, j) = acc * inv;
    }
  }
  return b;
}

inline Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

struct SvdResult {
  std::vector<double> singular_values;  // descending
  Matrix u;                             // left singular vectors (columns)
  Matrix v;                             // right singular vectors (columns), a = u diag(s) v^H
};

// One-sided Jacobi SVD. Slow but simple and very accurate, which is what the
// rank decisions here need; matrices are tiny.
inline SvdResult svd_jacobi(const Matrix& input) {
  const int n = input.rows();
  const int m = input.cols();
  Matrix b = input;
  Matrix v = Matrix::identity(m);

  auto col_dot = [&](const Matrix& mat, int p, int q) {
    // <col_p, col_q> with conjugation on the first argument
    Cplx acc = 0.0;
    for (int i = 0; i < mat.rows(); ++i) acc += std::conj(mat(i, p)) * mat(i, q);
    return acc;
  };

  const int max_sweeps = 60;
  const double tol = 1e-15;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < m - 1; ++p) {
      for (int q = p + 1; q < m; ++q) {
        double alpha = std::real(col_dot(b, p, p));
        double beta = std::real(col_dot(b, q, q));
        Cplx gamma = col_dot(b, p, q);
        double g = std::abs(gamma);
        if (g <= tol * std::sqrt(std::max(alpha * beta, 1e-300))) continue;
        off = std::max(off, g / std::sqrt(std::max(alpha * beta, 1e-300)));
        // Unitary 2x2 rotation diagonalizing [[alpha, gamma], [conj(gamma), beta]].
        Cplx phase = gamma / g;
        double tau = (beta - alpha) / (2.0 * g);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        Cplx ph_conj = std::conj(phase);
        for (int i = 0; i < n; ++i) {
          Cplx bp = b(i, p), bq = b(i, q);
          b(i, p) = c * bp - s * ph_conj * bq;
          b(i, q) = s * phase * bp + c * bq;
        }
        for (int i = 0; i < m; ++i) {
          Cplx vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * ph_conj * vq;
          v(i, q) = s * phase * vp + c * vq;
        }
      }
    }
    if (off < 1e-14) break;
  }

  std::vector<double> sigma(m);
  for (int j = 0; j < m; ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::norm(b(i, j));
    sigma[j] = std::sqrt(acc);
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sigma[x] > sigma[y]; });

  SvdResult out;
  out.singular_values.resize(m);
  out.u = Matrix(n, m);
  out.v = Matrix(m, m);
  for (int j = 0; j < m; ++j) {
    int src = order[j];
    out.singular_values[j] = sigma[src];
    for (int i = 0; i < m; ++i) out.v(i, j) = v(i, src);
    if (sigma[src] > 0.0) {
      for (int i = 0; i < n; ++i) out.u(i, j) = b(i, src) / sigma[src];
    }
  }
  return out;
}

// Eigenvalues of a small real symmetric matrix by cyclic Jacobi; used for
// inertia counts and tiny dense subproblems.
inline std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (int i = 0; i < n; ++i) {
          double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace qgraph

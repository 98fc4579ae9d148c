#include "asuq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asuq/errors.hpp"

namespace asuq {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector product: size mismatch");
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled to avoid overflow for large-magnitude responses.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : a) s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

std::vector<double> singular_values(const Matrix& a) {
  Matrix u = a;
  const std::size_t m = u.rows();
  const std::size_t n = u.cols();
  constexpr double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double up = u(i, p);
          const double uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = u(i, j);
    sv[j] = norm2(col);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

LeastSquaresResult solve_least_squares(const Matrix& a, std::span<const double> b, double rank_tol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw DimensionError("least squares: right-hand side length differs from row count");
  if (n == 0) throw DimensionError("least squares: no columns");
  if (m < n) throw RankError("least squares: fewer rows than columns", m);

  Matrix qr = a;
  std::vector<double> qtb(b.begin(), b.end());
  std::vector<double> v(m);
  for (std::size_t k = 0; k < n; ++k) {
    double xnorm = 0.0;
    {
      std::vector<double> x(m - k);
      for (std::size_t i = k; i < m; ++i) x[i - k] = qr(i, k);
      xnorm = norm2(x);
    }
    if (xnorm == 0.0) continue;
    const double alpha = qr(k, k) > 0.0 ? -xnorm : xnorm;
    for (std::size_t i = k; i < m; ++i) v[i] = qr(i, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i] * qr(i, j);
      s = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < m; ++i) qr(i, j) -= s * v[i];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += v[i] * qtb[i];
    s = 2.0 * s / vnorm2;
    for (std::size_t i = k; i < m; ++i) qtb[i] -= s * v[i];
  }

  LeastSquaresResult out;
  out.r = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.r(i, j) = qr(i, j);

  out.singular_values = singular_values(out.r);
  const double smax = out.singular_values.front();
  const auto rank = static_cast<std::size_t>(std::count_if(
      out.singular_values.begin(), out.singular_values.end(),
      [&](double s) { return s > rank_tol * smax; }));
  if (smax == 0.0 || rank < n) throw RankError("least squares: design matrix is rank deficient", smax == 0.0 ? 0 : rank);
  out.condition = smax / out.singular_values.back();

  out.solution.assign(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = qtb[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= out.r(ii, j) * out.solution[j];
    out.solution[ii] = s / out.r(ii, ii);
  }

  out.residual = multiply(a, out.solution);
  for (std::size_t i = 0; i < m; ++i) out.residual[i] -= b[i];
  out.residual_norm = norm2(out.residual);
  return out;
}

Matrix gram_inverse_from_r(const Matrix& r) {
  const std::size_t n = r.rows();
  Matrix rinv(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t ii = n; ii-- > 0;) {
      double s = (ii == col) ? 1.0 : 0.0;
      for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * rinv(j, col);
      if (r(ii, ii) == 0.0) throw RankError("gram inverse: singular triangular factor", ii);
      rinv(ii, col) = s / r(ii, ii);
    }
  }
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += rinv(i, k) * rinv(j, k);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

SymmetricEigen symmetric_eigen(const Matrix& s, double tol, int max_sweeps) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw DimensionError("symmetric eigen: matrix is not square");
  Matrix a = s;
  Matrix v = Matrix::identity(n);

  auto off_diagonal = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };
  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  frob = std::sqrt(frob);

  for (int sweep = 0; sweep < max_sweeps && off_diagonal() > tol * frob; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace asuq

#include "s2r2/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace s2r2 {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != m.cols()) throw ShapeError("from_rows: ragged row lengths");
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Distribution::validate() const {
  double total = 0.0;
  for (double v : mass) {
    if (v < 0.0) throw InvalidParameter("Distribution: negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidParameter("Distribution: mass sums to " + std::to_string(total));
}

Distribution Distribution::uniform(std::size_t n) {
  if (n == 0) throw EmptyInput("uniform distribution over zero bins");
  return Distribution{std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("cosine_sim: length mismatch");
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na < 1e-12 || nb < 1e-12)
    throw DegenerateVector("cosine_sim: vector norm below 1e-12");
  if (a.size() == b.size() &&
      std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0)
    return 1.0;
  const double c = dot(a, b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) throw EmptyInput("log_sum_exp: empty vector");
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Distribution softmax_row(std::span<const double> v) {
  if (v.empty()) throw EmptyInput("softmax_row: empty vector");
  const double m = *std::max_element(v.begin(), v.end());
  Distribution out;
  out.mass.resize(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.mass[i] = std::exp(v[i] - m);
    s += out.mass[i];
  }
  for (double& x : out.mass) x /= s;
  return out;
}

double js_divergence(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw ShapeError("js_divergence: length mismatch");
  // KL(p||m) + KL(q||m) halves, m = (p+q)/2; 0*log0 = 0. p_i > 0 with
  // m_i = 0 cannot happen for the mixture.
  double js = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) js += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) js += 0.5 * q[i] * std::log(q[i] / m);
  }
  return js;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h) {
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double orig = xs[i];
    xs[i] = orig + h;
    const double fp = f(xs);
    xs[i] = orig - h;
    const double fm = f(xs);
    xs[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericalError("finite_diff_grad: non-finite evaluation");
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("matmul_nt: inner dimensions differ");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = dot(a.row(i), b.row(j));
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("matmul_tn: inner dimensions differ");
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void add_inplace(Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("add_inplace: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
}

void axpy_inplace(Matrix& a, double alpha, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("axpy_inplace: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += alpha * b.data()[i];
}

void scale_inplace(Matrix& a, double alpha) {
  for (double& v : a.data()) v *= alpha;
}

}  // namespace s2r2

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "s2r2/errors.hpp"

namespace s2r2 {

// Dense real matrix, double precision, row-major. Row-major order is
// also the canonical layout of the checkpoint blob, so this type maps
// directly onto saved tensors.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// Nonnegative vector summing to 1 within 1e-9.
struct Distribution {
  std::vector<double> mass;

  std::size_t size() const { return mass.size(); }
  double operator[](std::size_t i) const { return mass[i]; }

  // Throws InvalidParameter if an entry is negative or the total is off.
  void validate() const;

  static Distribution uniform(std::size_t n);
};

// --- scalar reductions -------------------------------------------------

// a.b / (|a||b|), clamped to [-1,1]. Bitwise-equal inputs return exactly
// 1.0 so that a zero-perturbation cost matrix has an exactly zero
// diagonal. Throws DegenerateVector if either norm < 1e-12.
double cosine_sim(std::span<const double> a, std::span<const double> b);

// log(sum(exp(v))) with the max subtracted first.
double log_sum_exp(std::span<const double> v);

// Row-wise softmax; invariant to adding a constant.
Distribution softmax_row(std::span<const double> v);

// Jensen-Shannon divergence, natural log, in [0, ln 2]. Zero entries use
// the 0*log0 = 0 convention.
double js_divergence(const Distribution& p, const Distribution& q);

double frobenius_norm(const Matrix& m);

// Central finite differences (f(x+h e_i) - f(x-h e_i)) / (2h). Throws
// NumericalError on a non-finite evaluation.
std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h = 1e-5);

// --- dense products (used by the toy model) ----------------------------

Matrix matmul(const Matrix& a, const Matrix& b);     // a * b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T * b
Matrix transpose(const Matrix& a);

void add_inplace(Matrix& a, const Matrix& b);
void axpy_inplace(Matrix& a, double alpha, const Matrix& b);  // a += alpha*b
void scale_inplace(Matrix& a, double alpha);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

}  // namespace s2r2

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>

namespace eqsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Largest elementwise deviation of m from its adjoint.
double hermiticity_error(const Matrix& m);

/// Operator norm (largest singular value) of a Hermitian matrix.
double hermitian_operator_norm(const Matrix& m);

/// Kahan-compensated accumulator; summation order fixed by the caller.
class CompensatedSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_total(std::span<const double> xs);

}  // namespace eqsim

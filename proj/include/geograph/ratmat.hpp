#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geograph/rat.hpp"

namespace geograph::exact {

/// Dense matrix over the rationals; small sizes only (Lie algebra dimension).
class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, Rat(0)) {}

  static RatMat identity(int n);
  static RatMat from_rows(const std::vector<std::vector<Rat>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rat& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  RatMat operator*(const RatMat& o) const;
  RatMat operator+(const RatMat& o) const;
  RatMat operator-(const RatMat& o) const;
  RatMat scaled(const Rat& s) const;
  RatMat transpose() const;
  bool operator==(const RatMat& o) const;
  bool operator!=(const RatMat& o) const { return !(*this == o); }

  std::vector<Rat> apply(const std::vector<Rat>& v) const;

  Rat det() const;                 // square only
  RatMat inverse() const;          // throws std::domain_error if singular
  bool is_symmetric() const;

  /// All leading principal minors positive (exact positive-definite test for
  /// symmetric matrices).
  bool leading_minors_positive() const;

  /// Exact solve of A x = b by Gaussian elimination with free variables set to
  /// zero; nullopt when the system is inconsistent.
  static std::optional<std::vector<Rat>> solve(const RatMat& A,
                                               const std::vector<Rat>& b);

  int rank() const;

  Eigen::MatrixXd to_double() const;
  std::string str() const;

 private:
  int rows_, cols_;
  std::vector<Rat> a_;
};

}  // namespace geograph::exact

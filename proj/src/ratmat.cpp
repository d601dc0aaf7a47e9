#include "geograph/ratmat.hpp"

#include <sstream>
#include <stdexcept>

namespace geograph::exact {

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Rat(1);
  return m;
}

RatMat RatMat::from_rows(const std::vector<std::vector<Rat>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  RatMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("RatMat::from_rows: ragged rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RatMat RatMat::operator*(const RatMat& o) const {
  if (cols_ != o.rows_)
    throw std::invalid_argument("RatMat: dimension mismatch in product");
  RatMat r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rat& aik = at(i, k);
      if (rat_is_zero(aik)) continue;
      for (int j = 0; j < o.cols_; ++j) r.at(i, j) += aik * o.at(k, j);
    }
  return r;
}

RatMat RatMat::operator+(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("RatMat: dimension mismatch in sum");
  RatMat r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

RatMat RatMat::operator-(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("RatMat: dimension mismatch in difference");
  RatMat r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

RatMat RatMat::scaled(const Rat& s) const {
  RatMat r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

RatMat RatMat::transpose() const {
  RatMat r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool RatMat::operator==(const RatMat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

std::vector<Rat> RatMat::apply(const std::vector<Rat>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw std::invalid_argument("RatMat::apply: length mismatch");
  std::vector<Rat> r(rows_, Rat(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (!rat_is_zero(at(i, j))) r[i] += at(i, j) * v[j];
  return r;
}

namespace {

// Row-reduce [A | rhs...] in place; returns rank and records pivot columns.
// Only the first `ncols` columns are eligible as pivots.
int reduce(std::vector<std::vector<Rat>>& m, int ncols, std::vector<int>& pivot_cols) {
  const int nrows = static_cast<int>(m.size());
  int rank = 0;
  for (int col = 0; col < ncols && rank < nrows; ++col) {
    int piv = -1;
    for (int r = rank; r < nrows; ++r)
      if (!rat_is_zero(m[r][col])) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    const Rat inv = Rat(1) / m[rank][col];
    for (auto& x : m[rank]) x *= inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == rank || rat_is_zero(m[r][col])) continue;
      const Rat f = m[r][col];
      for (std::size_t j = 0; j < m[r].size(); ++j) m[r][j] -= f * m[rank][j];
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  return rank;
}

}  // namespace

Rat RatMat::det() const {
  if (rows_ != cols_) throw std::invalid_argument("RatMat::det: not square");
  std::vector<std::vector<Rat>> m(rows_, std::vector<Rat>(cols_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m[i][j] = at(i, j);
  Rat d(1);
  for (int col = 0; col < cols_; ++col) {
    int piv = -1;
    for (int r = col; r < rows_; ++r)
      if (!rat_is_zero(m[r][col])) { piv = r; break; }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      d = -d;
    }
    d *= m[col][col];
    const Rat inv = Rat(1) / m[col][col];
    for (int r = col + 1; r < rows_; ++r) {
      if (rat_is_zero(m[r][col])) continue;
      const Rat f = m[r][col] * inv;
      for (int j = col; j < cols_; ++j) m[r][j] -= f * m[col][j];
    }
  }
  return d;
}

RatMat RatMat::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("RatMat::inverse: not square");
  std::vector<std::vector<Rat>> m(rows_, std::vector<Rat>(2 * cols_, Rat(0)));
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m[i][j] = at(i, j);
    m[i][cols_ + i] = Rat(1);
  }
  std::vector<int> pivots;
  const int rank = reduce(m, cols_, pivots);
  if (rank < cols_) throw std::domain_error("RatMat::inverse: singular matrix");
  RatMat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = m[i][cols_ + j];
  return r;
}

bool RatMat::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

bool RatMat::leading_minors_positive() const {
  if (rows_ != cols_) return false;
  for (int k = 1; k <= rows_; ++k) {
    RatMat sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub.at(i, j) = at(i, j);
    if (sgn(sub.det()) <= 0) return false;
  }
  return true;
}

std::optional<std::vector<Rat>> RatMat::solve(const RatMat& A,
                                              const std::vector<Rat>& b) {
  if (static_cast<int>(b.size()) != A.rows_)
    throw std::invalid_argument("RatMat::solve: rhs length mismatch");
  std::vector<std::vector<Rat>> m(A.rows_, std::vector<Rat>(A.cols_ + 1, Rat(0)));
  for (int i = 0; i < A.rows_; ++i) {
    for (int j = 0; j < A.cols_; ++j) m[i][j] = A.at(i, j);
    m[i][A.cols_] = b[i];
  }
  std::vector<int> pivots;
  const int rank = reduce(m, A.cols_, pivots);
  for (int r = rank; r < A.rows_; ++r)
    if (!rat_is_zero(m[r][A.cols_])) return std::nullopt;
  std::vector<Rat> x(A.cols_, Rat(0));
  for (int r = 0; r < rank; ++r) x[pivots[r]] = m[r][A.cols_];
  return x;
}

int RatMat::rank() const {
  std::vector<std::vector<Rat>> m(rows_, std::vector<Rat>(cols_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m[i][j] = at(i, j);
  std::vector<int> pivots;
  return reduce(m, cols_, pivots);
}

Eigen::MatrixXd RatMat::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = rat_double(at(i, j));
  return m;
}

std::string RatMat::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < cols_; ++j) {
      os << rat_str(at(i, j));
      if (j + 1 < cols_) os << " ";
    }
    os << (i + 1 < rows_ ? "\n" : "]");
  }
  return os.str();
}

}  // namespace geograph::exact

#pragma once

// Exact Smith normal form over the integers and finitely generated abelian
// groups built from it.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
      for (long long x : r) data_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    }
    return c;
  }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }
  /// row_i += k row_j
  void add_row(std::size_t i, std::size_t j, const BigInt& k) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += k * (*this)(j, c);
  }
  /// col_i += k col_j
  void add_col(std::size_t i, std::size_t j, const BigInt& k) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) += k * (*this)(r, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> data_;
};

struct SmithForm {
  IntMatrix d;  ///< diagonal, d = u * a * v
  IntMatrix u;  ///< unimodular, rows x rows
  IntMatrix v;  ///< unimodular, cols x cols
  std::vector<BigInt> invariants;  ///< nonzero diagonal entries, each dividing the next
  std::size_t rank = 0;
};

/// Smith normal form by pivoting on the smallest nonzero entry, with all row and
/// column operations accumulated into u and v. Postcondition u a v = d is checked.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm out{a, IntMatrix::identity(m), IntMatrix::identity(n), {}, 0};
  IntMatrix& d = out.d;
  std::size_t k = 0;
  while (k < m && k < n) {
    // Smallest nonzero entry of the trailing block.
    bool found = false;
    std::size_t pi = k, pj = k;
    BigInt best;
    for (std::size_t i = k; i < m; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        if (d(i, j) == 0) continue;
        const BigInt mag = abs(d(i, j));
        if (!found || mag < best) {
          found = true;
          best = mag;
          pi = i;
          pj = j;
        }
      }
    }
    if (!found) break;
    d.swap_rows(k, pi);
    out.u.swap_rows(k, pi);
    d.swap_cols(k, pj);
    out.v.swap_cols(k, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (d(i, k) == 0) continue;
        const BigInt q = d(i, k) / d(k, k);
        d.add_row(i, k, -q);
        out.u.add_row(i, k, -q);
        if (d(i, k) != 0) {  // remainder smaller than the pivot: make it the pivot
          d.swap_rows(k, i);
          out.u.swap_rows(k, i);
          clean = false;
        }
      }
      for (std::size_t j = k + 1; j < n; ++j) {
        if (d(k, j) == 0) continue;
        const BigInt q = d(k, j) / d(k, k);
        d.add_col(j, k, -q);
        out.v.add_col(j, k, -q);
        if (d(k, j) != 0) {
          d.swap_cols(k, j);
          out.v.swap_cols(k, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: fold any row whose entry is not a multiple of the pivot into row k.
      for (std::size_t i = k + 1; i < m && clean; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          if (d(i, j) % d(k, k) != 0) {
            d.add_row(k, i, 1);
            out.u.add_row(k, i, 1);
            clean = false;
            break;
          }
        }
      }
    }
    if (d(k, k) < 0) {
      d.negate_row(k);
      out.u.negate_row(k);
    }
    out.invariants.push_back(d(k, k));
    ++k;
  }
  out.rank = out.invariants.size();
  if (!(out.u * a * out.v == d)) throw std::logic_error("smith_normal_form: postcondition U*A*V = D failed");
  return out;
}

/// Z^rank plus the torsion summands Z/t_i with t_1 | t_2 | ... and each t_i > 1.
struct AbelianGroup {
  std::size_t rank = 0;
  std::vector<BigInt> torsion;

  bool trivial() const { return rank == 0 && torsion.empty(); }

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.rank == b.rank && a.torsion == b.torsion;
  }

  std::string to_string() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank > 0) {
      os << "Z";
      if (rank > 1) os << "^" << rank;
      first = false;
    }
    for (const BigInt& t : torsion) {
      os << (first ? "" : " + ") << "Z/" << t;
      first = false;
    }
    return os.str();
  }
};

/// Z^rows / image(a).
inline AbelianGroup cokernel(const IntMatrix& a) {
  const SmithForm s = smith_normal_form(a);
  AbelianGroup g;
  g.rank = a.rows() - s.rank;
  for (const BigInt& x : s.invariants) {
    if (x > 1) g.torsion.push_back(x);
  }
  return g;
}

/// ker(a) as a subgroup of Z^cols (always free).
inline AbelianGroup kernel(const IntMatrix& a) { return {a.cols() - smith_normal_form(a).rank, {}}; }

/// Direct sum, with the torsion recombined into invariant-factor form.
inline AbelianGroup direct_sum(const AbelianGroup& x, const AbelianGroup& y) {
  std::vector<BigInt> t = x.torsion;
  t.insert(t.end(), y.torsion.begin(), y.torsion.end());
  IntMatrix diag(t.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) diag(i, i) = t[i];
  AbelianGroup g = cokernel(diag);
  g.rank += x.rank + y.rank;
  return g;
}

}  // namespace symplab

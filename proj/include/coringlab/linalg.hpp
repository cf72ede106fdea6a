#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "coringlab/scalar.hpp"

namespace coringlab {

using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

struct ShapeError : Error {
  using Error::Error;
};

#define CORINGLAB_REQUIRE(cond, msg) \
  do {                               \
    if (!(cond)) throw ::coringlab::InternalError(msg); \
  } while (0)

// Finite-dimensional vector space with printable basis labels.
struct FinSpace {
  Field field;
  Index dim = 0;
  std::vector<std::string> labels;

  static FinSpace make(const Field& f, Index dim, std::vector<std::string> labels = {});
  std::string label(Index i) const;
  bool operator==(const FinSpace& o) const;
};

// Linear map stored as a (codomain.dim x domain.dim) matrix acting on columns.
struct LinMap {
  FinSpace domain;
  FinSpace codomain;
  Mat matrix;

  static LinMap make(FinSpace dom, FinSpace cod, Mat m);
  Vec apply(const Vec& v) const;
};

struct RrefResult {
  Mat reduced;
  std::vector<Index> pivots;
  Index rank = 0;
};

// Entry helpers (exact comparisons; no Eigen reductions over Scalar).
bool is_zero_mat(const Mat& m);
bool mats_equal(const Mat& a, const Mat& b);
Mat promote_mat(const Mat& m, const Field& f);
Field field_of(const Mat& m);  // deduced from entries; mixed kinds throw TypeError

// Reduced row echelon form with deterministic pivoting: scan columns left to
// right, use the topmost unused row with a nonzero entry.
RrefResult rref(const Mat& m, const Field& f);
Index rank_of(const Mat& m, const Field& f);

// Kernel basis in free-column order; each vector has 1 at its free coordinate.
std::vector<Vec> kernel_basis(const Mat& m, const Field& f);
Mat kernel_matrix(const Mat& m, const Field& f);  // basis vectors as columns

// Particular solution of m x = b with all free variables set to zero.
std::optional<Vec> solve(const Mat& m, const Vec& b, const Field& f);
std::optional<Mat> solve_many(const Mat& m, const Mat& rhs, const Field& f);

bool in_span(const Mat& cols, const Vec& v, const Field& f);
Mat image_basis(const Mat& m, const Field& f);  // pivot columns of m, ascending

// Ambient space modulo the span of the relation columns, with a chosen
// section whose image is spanned by the non-pivot coordinates.
struct QuotientSpace {
  FinSpace ambient;
  FinSpace space;  // the quotient
  Mat relations;
  Mat projection;  // space.dim x ambient.dim
  Mat section;     // ambient.dim x space.dim

  Vec project(const Vec& v) const { return projection * v; }
  Vec lift(const Vec& v) const { return section * v; }
};

QuotientSpace quotient(const FinSpace& ambient, const Mat& relations,
                       std::vector<std::string> labels = {});

// Row-major flattening of a tensor pair: (i, j) -> i * right_dim + j.
struct TensorIndex {
  Index left_dim = 0;
  Index right_dim = 0;
  Index flat(Index i, Index j) const { return i * right_dim + j; }
  std::pair<Index, Index> unflat(Index k) const { return {k / right_dim, k % right_dim}; }
};

FinSpace tensor_space(const FinSpace& a, const FinSpace& b);
Mat kron(const Mat& a, const Mat& b);
Vec kron_vec(const Vec& a, const Vec& b);
Mat identity(Index n);
Vec unit_vec(Index dim, Index i);

// Basis (as matrices) of all rows x cols matrices X satisfying every listed
// homogeneous linear condition; conditions are evaluated on elementary
// matrices, so they must be linear in X.
std::vector<Mat> linear_solution_space(Index rows, Index cols, const Field& f,
                                       const std::vector<std::function<Mat(const Mat&)>>& conditions);

// One rows x cols matrix X with conditions[i](X) == targets[i], if any exists.
std::optional<Mat> affine_solve(Index rows, Index cols, const Field& f,
                                const std::vector<std::function<Mat(const Mat&)>>& conditions,
                                const std::vector<Mat>& targets);

// Pretty form of a vector in a labeled basis, e.g. "e0 + 3/2*e2".
std::string vec_str(const Vec& v, const FinSpace& space);

}  // namespace coringlab

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coringlab/linalg.hpp"

namespace coringlab {

struct CheckIssue {
  std::string check;
  std::vector<Index> where;
  std::string detail;
};

// Outcome of an axiom verification: named pass/fail results plus witnesses
// for everything that failed.
struct CheckReport {
  std::string subject;
  std::vector<std::pair<std::string, bool>> results;
  std::vector<CheckIssue> issues;

  bool ok() const;
  bool passed(const std::string& name) const;
  void add(const std::string& name, bool pass);
  void fail(const std::string& name, std::vector<Index> where, std::string detail);
  std::vector<std::string> lines() const;
};

// Finite-dimensional unital associative algebra with a fixed basis.  The
// multiplication tensor stores e_i * e_j in column i*dim + j.
struct Algebra {
  std::string name;
  Field field;
  FinSpace space;
  Mat mult;  // dim x dim^2
  Vec unit;  // coordinates of 1

  static Algebra make(std::string name, FinSpace space, Mat mult, Vec unit);
  Index dim() const { return space.dim; }
  Vec element(Index i) const { return unit_vec(space.dim, i); }
  Vec one() const { return unit; }
  Vec multiply(const Vec& a, const Vec& b) const;
  Mat left_mult(const Vec& a) const;   // matrix of x -> a*x
  Mat right_mult(const Vec& b) const;  // matrix of x -> x*b
  bool same_structure(const Algebra& o) const;
};

Algebra ground_field_algebra(const Field& f, std::string name = "k");

CheckReport check_algebra_axioms(const Algebra& a);

struct AlgebraMap {
  Algebra source;
  Algebra target;
  Mat matrix;  // target.dim x source.dim

  static AlgebraMap make(Algebra src, Algebra tgt, Mat m);
  Vec apply(const Vec& v) const { return matrix * v; }
};

AlgebraMap identity_map(const Algebra& a);
CheckReport check_algebra_map(const AlgebraMap& f);

// (A,B)-bimodule.  left_action column i*dim + j holds a_i . m_j; right_action
// column j*B.dim + i holds m_j . b_i.
struct Bimodule {
  std::string name;
  Field field;
  FinSpace space;
  Algebra left_algebra;
  Algebra right_algebra;
  Mat left_action;
  Mat right_action;

  static Bimodule make(std::string name, FinSpace space, Algebra left, Algebra right,
                       Mat left_action, Mat right_action);
  Index dim() const { return space.dim; }
  Vec element(Index i) const { return unit_vec(space.dim, i); }
  Vec act_left(const Vec& a, const Vec& m) const;
  Vec act_right(const Vec& m, const Vec& b) const;
  Mat left_op(const Vec& a) const;   // matrix of m -> a.m
  Mat right_op(const Vec& b) const;  // matrix of m -> m.b
};

CheckReport check_bimodule(const Bimodule& m);

// A as an (A,A)-bimodule.
Bimodule regular_bimodule(const Algebra& a);
// A right A-module (trivial left action of the ground field).
Bimodule right_module(std::string name, const Algebra& a, FinSpace space, Mat right_action);
// A^n as a right A-module: basis element k*A.dim + i is (unit slot k) * e_i.
Bimodule free_right_module(const Algebra& a, Index n);
// Restrict the right action along an algebra map B -> A.
Bimodule restrict_right(const Bimodule& m, const AlgebraMap& incl);
// View R as an (S,S)-bimodule along an inclusion S -> R.
Bimodule bimodule_over_subalgebra(const Algebra& r, const AlgebraMap& incl);

// M (x)_R N: quotient of the tensor product over the middle algebra, with
// verified induced outer actions.
struct BalancedTensor {
  Bimodule result;
  QuotientSpace q;
  TensorIndex index;

  Vec pure(const Vec& m, const Vec& n) const { return q.projection * kron_vec(m, n); }
};

BalancedTensor tensor_over_R(const Bimodule& m, const Bimodule& n);

// Basis of right-linear (resp. left-linear) maps between modules over the
// same algebra.
std::vector<Mat> module_hom_space(const Bimodule& m, const Bimodule& n);
std::vector<Mat> module_hom_space_left(const Bimodule& m, const Bimodule& n);

// A right-linear right inverse of f : M -> N (the data exhibiting f as a
// retraction), found deterministically with free coordinates set to zero.
std::optional<Mat> has_retraction(const Bimodule& m, const Bimodule& n, const Mat& f);

// Projectivity via a splitting of the free cover on the given generators
// (defaults to the full basis, which always generates).
bool is_projective(const Bimodule& m);
bool is_projective(const Bimodule& m, const std::vector<Vec>& generators);

// Whether (s_1..s_n) -> sum s_i . elems_i is a bijection S^n -> R, i.e. the
// elements form a free left-S basis of R along the inclusion.
bool verify_free_basis(const AlgebraMap& incl, const std::vector<Vec>& elems);

// Basis of {s in R : s.m0 == m0.s} for m0 in an (R,R)-bimodule.
std::vector<Vec> centralizer(const Algebra& r, const Bimodule& m, const Vec& m0);

struct Subalgebra {
  Algebra algebra;
  AlgebraMap inclusion;
};

// Span of the given vectors as a subalgebra (requires multiplicative closure
// and that the unit lies in the span).
Subalgebra subalgebra_on_basis(const Algebra& r, const std::vector<Vec>& basis_vecs,
                               std::string name);

// Iterated balanced tensor powers base (x)_R step (x)_R ... (x)_R step with
// cached projections from the full k-linear ambient product.
class Tower {
 public:
  Tower() = default;
  Tower(Bimodule base, Bimodule step, int levels);

  int levels() const { return static_cast<int>(level_.size()) - 1; }
  const Bimodule& level(int k) const;
  Index dim(int k) const { return level(k).dim(); }
  Index ambient_dim(int k) const;
  const Mat& full_proj(int k) const;
  const Mat& full_section(int k) const;
  const Bimodule& base() const { return base_; }
  const Bimodule& step() const { return step_; }

 private:
  Bimodule base_, step_;
  std::vector<Bimodule> level_;
  std::vector<Mat> full_proj_, full_section_;
};

}  // namespace coringlab

#include "coringlab/algebra.hpp"

#include <sstream>

namespace coringlab {

bool CheckReport::ok() const {
  for (const auto& [name, pass] : results) {
    if (!pass) return false;
  }
  return true;
}

bool CheckReport::passed(const std::string& name) const {
  for (const auto& [n, pass] : results) {
    if (n == name) return pass;
  }
  throw Error("no check named '" + name + "' in report for " + subject);
}

void CheckReport::add(const std::string& name, bool pass) { results.emplace_back(name, pass); }

void CheckReport::fail(const std::string& name, std::vector<Index> where, std::string detail) {
  issues.push_back(CheckIssue{name, std::move(where), std::move(detail)});
}

std::vector<std::string> CheckReport::lines() const {
  std::vector<std::string> out;
  for (const auto& [name, pass] : results) {
    std::string line = (pass ? "[ok]   " : "[FAIL] ") + name;
    if (!pass) {
      for (const CheckIssue& issue : issues) {
        if (issue.check == name) {
          line += " — " + issue.detail;
          break;
        }
      }
    }
    out.push_back(std::move(line));
  }
  return out;
}

namespace {

std::string idx_str(const std::vector<Index>& where) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < where.size(); ++i) {
    if (i) os << ",";
    os << where[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

Algebra Algebra::make(std::string name, FinSpace space, Mat mult, Vec unit) {
  if (mult.rows() != space.dim || mult.cols() != space.dim * space.dim) {
    throw ShapeError("algebra '" + name + "': multiplication tensor must be dim x dim^2");
  }
  if (unit.size() != space.dim) {
    throw ShapeError("algebra '" + name + "': unit vector has wrong dimension");
  }
  Algebra a;
  a.name = std::move(name);
  a.field = space.field;
  a.space = std::move(space);
  a.mult = promote_mat(mult, a.field);
  a.unit = promote_mat(unit, a.field);
  return a;
}

Vec Algebra::multiply(const Vec& a, const Vec& b) const { return mult * kron_vec(a, b); }

Mat Algebra::left_mult(const Vec& a) const {
  Mat out = Mat::Constant(dim(), dim(), field.zero());
  for (Index i = 0; i < dim(); ++i) out += a(i) * mult.middleCols(i * dim(), dim());
  return out;
}

Mat Algebra::right_mult(const Vec& b) const {
  Mat out(dim(), dim());
  for (Index j = 0; j < dim(); ++j) out.col(j) = multiply(element(j), b);
  return out;
}

bool Algebra::same_structure(const Algebra& o) const {
  return field == o.field && space.dim == o.space.dim && mats_equal(mult, o.mult) &&
         mats_equal(unit, o.unit);
}

Algebra ground_field_algebra(const Field& f, std::string name) {
  FinSpace s = FinSpace::make(f, 1, {"1"});
  Mat mult = Mat::Constant(1, 1, f.one());
  Vec unit = Vec::Constant(1, f.one());
  return Algebra::make(std::move(name), std::move(s), std::move(mult), std::move(unit));
}

CheckReport check_algebra_axioms(const Algebra& a) {
  CheckReport rep;
  rep.subject = "algebra " + a.name;
  const Index n = a.dim();

  bool unital = true;
  for (Index j = 0; j < n; ++j) {
    const Vec ej = a.element(j);
    if (!mats_equal(a.multiply(a.unit, ej), ej)) {
      unital = false;
      rep.fail("unit", {j}, "1*" + a.space.label(j) + " differs from " + a.space.label(j));
    }
    if (!mats_equal(a.multiply(ej, a.unit), ej)) {
      unital = false;
      rep.fail("unit", {j}, a.space.label(j) + "*1 differs from " + a.space.label(j));
    }
  }
  rep.add("unit", unital);

  bool assoc = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        const Vec lhs = a.multiply(a.multiply(a.element(i), a.element(j)), a.element(k));
        const Vec rhs = a.multiply(a.element(i), a.multiply(a.element(j), a.element(k)));
        if (!mats_equal(lhs, rhs)) {
          assoc = false;
          rep.fail("associativity", {i, j, k},
                   "basis triple " + idx_str({i, j, k}) + " associates differently");
        }
      }
    }
  }
  rep.add("associativity", assoc);
  return rep;
}

AlgebraMap AlgebraMap::make(Algebra src, Algebra tgt, Mat m) {
  if (m.rows() != tgt.dim() || m.cols() != src.dim()) {
    throw ShapeError("algebra map matrix must be target.dim x source.dim");
  }
  if (src.field != tgt.field) throw TypeError("algebra map between different fields");
  AlgebraMap f;
  f.source = std::move(src);
  f.target = std::move(tgt);
  f.matrix = promote_mat(m, f.target.field);
  return f;
}

AlgebraMap identity_map(const Algebra& a) {
  return AlgebraMap::make(a, a, promote_mat(identity(a.dim()), a.field));
}

CheckReport check_algebra_map(const AlgebraMap& f) {
  CheckReport rep;
  rep.subject = "algebra map " + f.source.name + " -> " + f.target.name;

  const bool unit_ok = mats_equal(f.apply(f.source.unit), f.target.unit);
  if (!unit_ok) rep.fail("unit", {}, "map does not send 1 to 1");
  rep.add("unit", unit_ok);

  bool mult_ok = true;
  for (Index i = 0; i < f.source.dim(); ++i) {
    for (Index j = 0; j < f.source.dim(); ++j) {
      const Vec lhs = f.apply(f.source.multiply(f.source.element(i), f.source.element(j)));
      const Vec rhs = f.target.multiply(f.apply(f.source.element(i)), f.apply(f.source.element(j)));
      if (!mats_equal(lhs, rhs)) {
        mult_ok = false;
        rep.fail("multiplicative", {i, j},
                 "products of basis pair " + idx_str({i, j}) + " disagree");
      }
    }
  }
  rep.add("multiplicative", mult_ok);
  return rep;
}

Bimodule Bimodule::make(std::string name, FinSpace space, Algebra left, Algebra right,
                        Mat left_action, Mat right_action) {
  if (left_action.rows() != space.dim || left_action.cols() != left.dim() * space.dim) {
    throw ShapeError("bimodule '" + name + "': left action has wrong shape");
  }
  if (right_action.rows() != space.dim || right_action.cols() != space.dim * right.dim()) {
    throw ShapeError("bimodule '" + name + "': right action has wrong shape");
  }
  if (space.field != left.field || space.field != right.field) {
    throw TypeError("bimodule '" + name + "': field mismatch");
  }
  Bimodule m;
  m.name = std::move(name);
  m.field = space.field;
  m.space = std::move(space);
  m.left_algebra = std::move(left);
  m.right_algebra = std::move(right);
  m.left_action = promote_mat(left_action, m.field);
  m.right_action = promote_mat(right_action, m.field);
  return m;
}

Vec Bimodule::act_left(const Vec& a, const Vec& m) const { return left_action * kron_vec(a, m); }

Vec Bimodule::act_right(const Vec& m, const Vec& b) const {
  return right_action * kron_vec(m, b);
}

Mat Bimodule::left_op(const Vec& a) const {
  Mat out = Mat::Constant(dim(), dim(), field.zero());
  for (Index i = 0; i < left_algebra.dim(); ++i) {
    out += a(i) * left_action.middleCols(i * dim(), dim());
  }
  return out;
}

Mat Bimodule::right_op(const Vec& b) const {
  Mat out(dim(), dim());
  for (Index j = 0; j < dim(); ++j) out.col(j) = act_right(element(j), b);
  return out;
}

CheckReport check_bimodule(const Bimodule& m) {
  CheckReport rep;
  rep.subject = "bimodule " + m.name;
  const Algebra& a = m.left_algebra;
  const Algebra& b = m.right_algebra;

  bool unit_ok = true;
  for (Index j = 0; j < m.dim(); ++j) {
    const Vec ej = m.element(j);
    if (!mats_equal(m.act_left(a.unit, ej), ej) || !mats_equal(m.act_right(ej, b.unit), ej)) {
      unit_ok = false;
      rep.fail("unit action", {j}, "unit does not act as identity on " + m.space.label(j));
    }
  }
  rep.add("unit action", unit_ok);

  bool left_ok = true;
  for (Index i = 0; i < a.dim(); ++i) {
    for (Index k = 0; k < a.dim(); ++k) {
      for (Index j = 0; j < m.dim(); ++j) {
        const Vec lhs = m.act_left(a.multiply(a.element(i), a.element(k)), m.element(j));
        const Vec rhs = m.act_left(a.element(i), m.act_left(a.element(k), m.element(j)));
        if (!mats_equal(lhs, rhs)) {
          left_ok = false;
          rep.fail("left associativity", {i, k, j}, "left action fails at " + idx_str({i, k, j}));
        }
      }
    }
  }
  rep.add("left associativity", left_ok);

  bool right_ok = true;
  for (Index j = 0; j < m.dim(); ++j) {
    for (Index i = 0; i < b.dim(); ++i) {
      for (Index k = 0; k < b.dim(); ++k) {
        const Vec lhs = m.act_right(m.element(j), b.multiply(b.element(i), b.element(k)));
        const Vec rhs = m.act_right(m.act_right(m.element(j), b.element(i)), b.element(k));
        if (!mats_equal(lhs, rhs)) {
          right_ok = false;
          rep.fail("right associativity", {j, i, k},
                   "right action fails at " + idx_str({j, i, k}));
        }
      }
    }
  }
  rep.add("right associativity", right_ok);

  bool comm_ok = true;
  for (Index i = 0; i < a.dim(); ++i) {
    for (Index j = 0; j < m.dim(); ++j) {
      for (Index k = 0; k < b.dim(); ++k) {
        const Vec lhs = m.act_right(m.act_left(a.element(i), m.element(j)), b.element(k));
        const Vec rhs = m.act_left(a.element(i), m.act_right(m.element(j), b.element(k)));
        if (!mats_equal(lhs, rhs)) {
          comm_ok = false;
          rep.fail("commuting actions", {i, j, k},
                   "(a.m).b != a.(m.b) at " + idx_str({i, j, k}));
        }
      }
    }
  }
  rep.add("commuting actions", comm_ok);
  return rep;
}

Bimodule regular_bimodule(const Algebra& a) {
  return Bimodule::make(a.name, a.space, a, a, a.mult, a.mult);
}

Bimodule right_module(std::string name, const Algebra& a, FinSpace space, Mat right_action) {
  const Algebra k = ground_field_algebra(space.field);
  Mat left_action = promote_mat(identity(space.dim), space.field);
  return Bimodule::make(std::move(name), std::move(space), k, a, std::move(left_action),
                        std::move(right_action));
}

Bimodule free_right_module(const Algebra& a, Index n) {
  const Index d = a.dim();
  std::vector<std::string> labels;
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < d; ++i) {
      labels.push_back("s" + std::to_string(k) + "." + a.space.label(i));
    }
  }
  FinSpace space = FinSpace::make(a.field, n * d, std::move(labels));
  Mat right_action = Mat::Constant(n * d, n * d * d, a.field.zero());
  const TensorIndex t{n * d, d};
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < d; ++i) {
      for (Index b = 0; b < d; ++b) {
        const Vec prod = a.multiply(a.element(i), a.element(b));
        for (Index r = 0; r < d; ++r) {
          right_action(k * d + r, t.flat(k * d + i, b)) = prod(r);
        }
      }
    }
  }
  return right_module(a.name + "^" + std::to_string(n), a, std::move(space),
                      std::move(right_action));
}

Bimodule restrict_right(const Bimodule& m, const AlgebraMap& incl) {
  if (!incl.target.same_structure(m.right_algebra)) {
    throw TypeError("restriction: inclusion target is not the module's algebra");
  }
  const Algebra& s = incl.source;
  Mat right_action = Mat::Constant(m.dim(), m.dim() * s.dim(), m.field.zero());
  const TensorIndex t{m.dim(), s.dim()};
  for (Index j = 0; j < m.dim(); ++j) {
    for (Index i = 0; i < s.dim(); ++i) {
      right_action.col(t.flat(j, i)) = m.act_right(m.element(j), incl.apply(s.element(i)));
    }
  }
  return Bimodule::make(m.name + "|" + s.name, m.space, m.left_algebra, s, m.left_action,
                        std::move(right_action));
}

Bimodule bimodule_over_subalgebra(const Algebra& r, const AlgebraMap& incl) {
  if (!incl.target.same_structure(r)) {
    throw TypeError("bimodule_over_subalgebra: inclusion target mismatch");
  }
  const Algebra& s = incl.source;
  const Index d = r.dim();
  Mat left_action = Mat::Constant(d, s.dim() * d, r.field.zero());
  Mat right_action = Mat::Constant(d, d * s.dim(), r.field.zero());
  const TensorIndex tl{s.dim(), d};
  const TensorIndex tr{d, s.dim()};
  for (Index i = 0; i < s.dim(); ++i) {
    const Vec si = incl.apply(s.element(i));
    for (Index j = 0; j < d; ++j) {
      left_action.col(tl.flat(i, j)) = r.multiply(si, r.element(j));
      right_action.col(tr.flat(j, i)) = r.multiply(r.element(j), si);
    }
  }
  return Bimodule::make(r.name + " over " + s.name, r.space, s, s, std::move(left_action),
                        std::move(right_action));
}

BalancedTensor tensor_over_R(const Bimodule& m, const Bimodule& n) {
  if (!m.right_algebra.same_structure(n.left_algebra)) {
    throw TypeError("balanced tensor: middle algebras differ (" + m.name + ", " + n.name + ")");
  }
  const Field& f = m.field;
  const Algebra& r = m.right_algebra;
  const FinSpace ambient = tensor_space(m.space, n.space);

  Mat relations = Mat::Constant(ambient.dim, m.dim() * r.dim() * n.dim(), f.zero());
  Index col = 0;
  for (Index j = 0; j < m.dim(); ++j) {
    for (Index i = 0; i < r.dim(); ++i) {
      for (Index k = 0; k < n.dim(); ++k) {
        relations.col(col++) =
            kron_vec(m.act_right(m.element(j), r.element(i)), n.element(k)) -
            kron_vec(m.element(j), n.act_left(r.element(i), n.element(k)));
      }
    }
  }

  BalancedTensor t;
  t.q = quotient(ambient, relations);
  t.index = TensorIndex{m.dim(), n.dim()};
  const Index qd = t.q.space.dim;

  // Outer actions descend to the quotient; solvability of that descent is the
  // well-definedness proof, so failures indicate inconsistent module data.
  const auto descend = [&](const Mat& amb_op) {
    if (!is_zero_mat(t.q.projection * amb_op * relations)) {
      throw Error("balanced tensor " + m.name + "(x)" + n.name +
                  ": an outer action does not descend; module axioms are violated");
    }
    return Mat(t.q.projection * amb_op * t.q.section);
  };

  const Algebra& a = m.left_algebra;
  const Algebra& b = n.right_algebra;
  Mat left_action = Mat::Constant(qd, a.dim() * qd, f.zero());
  for (Index i = 0; i < a.dim(); ++i) {
    const Mat op = descend(kron(m.left_op(a.element(i)), promote_mat(identity(n.dim()), f)));
    left_action.middleCols(i * qd, qd) = op;
  }
  Mat right_action = Mat::Constant(qd, qd * b.dim(), f.zero());
  const TensorIndex tr{qd, b.dim()};
  for (Index i = 0; i < b.dim(); ++i) {
    const Mat op = descend(kron(promote_mat(identity(m.dim()), f), n.right_op(b.element(i))));
    for (Index j = 0; j < qd; ++j) right_action.col(tr.flat(j, i)) = op.col(j);
  }

  t.result = Bimodule::make(m.name + "(x)" + n.name, t.q.space, a, b, std::move(left_action),
                            std::move(right_action));
  return t;
}

std::vector<Mat> module_hom_space(const Bimodule& m, const Bimodule& n) {
  if (!m.right_algebra.same_structure(n.right_algebra)) {
    throw TypeError("hom space: modules are over different algebras");
  }
  const Algebra& r = m.right_algebra;
  std::vector<std::function<Mat(const Mat&)>> conds;
  for (Index i = 0; i < r.dim(); ++i) {
    const Mat mi = m.right_op(r.element(i));
    const Mat ni = n.right_op(r.element(i));
    conds.push_back([mi, ni](const Mat& x) { return Mat(x * mi - ni * x); });
  }
  return linear_solution_space(n.dim(), m.dim(), m.field, conds);
}

std::vector<Mat> module_hom_space_left(const Bimodule& m, const Bimodule& n) {
  if (!m.left_algebra.same_structure(n.left_algebra)) {
    throw TypeError("hom space: modules are over different algebras");
  }
  const Algebra& r = m.left_algebra;
  std::vector<std::function<Mat(const Mat&)>> conds;
  for (Index i = 0; i < r.dim(); ++i) {
    const Mat mi = m.left_op(r.element(i));
    const Mat ni = n.left_op(r.element(i));
    conds.push_back([mi, ni](const Mat& x) { return Mat(x * mi - ni * x); });
  }
  return linear_solution_space(n.dim(), m.dim(), m.field, conds);
}

std::optional<Mat> has_retraction(const Bimodule& m, const Bimodule& n, const Mat& f) {
  if (f.rows() != n.dim() || f.cols() != m.dim()) {
    throw ShapeError("has_retraction: map must be n.dim x m.dim");
  }
  if (!m.right_algebra.same_structure(n.right_algebra)) {
    throw TypeError("has_retraction: modules are over different algebras");
  }
  const Algebra& r = m.right_algebra;
  const Field& field = m.field;
  std::vector<std::function<Mat(const Mat&)>> conds;
  std::vector<Mat> targets;
  for (Index i = 0; i < r.dim(); ++i) {
    const Mat ni = n.right_op(r.element(i));
    const Mat mi = m.right_op(r.element(i));
    conds.push_back([ni, mi](const Mat& g) { return Mat(g * ni - mi * g); });
    targets.push_back(Mat::Constant(m.dim(), n.dim(), field.zero()));
  }
  conds.push_back([f](const Mat& g) { return Mat(f * g); });
  targets.push_back(promote_mat(identity(n.dim()), field));
  return affine_solve(m.dim(), n.dim(), field, conds, targets);
}

bool is_projective(const Bimodule& m) {
  std::vector<Vec> gens;
  for (Index i = 0; i < m.dim(); ++i) gens.push_back(m.element(i));
  return is_projective(m, gens);
}

bool is_projective(const Bimodule& m, const std::vector<Vec>& generators) {
  const Algebra& r = m.right_algebra;
  const Bimodule cover = free_right_module(r, static_cast<Index>(generators.size()));
  Mat pi = Mat::Constant(m.dim(), cover.dim(), m.field.zero());
  const TensorIndex t{static_cast<Index>(generators.size()), r.dim()};
  for (size_t k = 0; k < generators.size(); ++k) {
    for (Index i = 0; i < r.dim(); ++i) {
      pi.col(t.flat(static_cast<Index>(k), i)) = m.act_right(generators[k], r.element(i));
    }
  }
  if (rank_of(pi, m.field) != m.dim()) {
    throw Error("is_projective: the given elements do not generate the module");
  }
  return has_retraction(cover, m, pi).has_value();
}

bool verify_free_basis(const AlgebraMap& incl, const std::vector<Vec>& elems) {
  const Algebra& r = incl.target;
  const Algebra& s = incl.source;
  const Index n = static_cast<Index>(elems.size());
  if (n * s.dim() != r.dim()) return false;
  Mat phi = Mat::Constant(r.dim(), n * s.dim(), r.field.zero());
  const TensorIndex t{n, s.dim()};
  for (Index k = 0; k < n; ++k) {
    if (elems[static_cast<size_t>(k)].size() != r.dim()) {
      throw ShapeError("verify_free_basis: candidate element has wrong dimension");
    }
    for (Index j = 0; j < s.dim(); ++j) {
      phi.col(t.flat(k, j)) = r.multiply(incl.apply(s.element(j)), elems[static_cast<size_t>(k)]);
    }
  }
  return rank_of(phi, r.field) == r.dim();
}

std::vector<Vec> centralizer(const Algebra& r, const Bimodule& m, const Vec& m0) {
  Mat defect = Mat::Constant(m.dim(), r.dim(), r.field.zero());
  for (Index j = 0; j < r.dim(); ++j) {
    defect.col(j) = m.act_left(r.element(j), m0) - m.act_right(m0, r.element(j));
  }
  return kernel_basis(defect, r.field);
}

Subalgebra subalgebra_on_basis(const Algebra& r, const std::vector<Vec>& basis_vecs,
                               std::string name) {
  const Index n = static_cast<Index>(basis_vecs.size());
  const Field& f = r.field;
  Mat span = Mat::Constant(r.dim(), n, f.zero());
  for (Index i = 0; i < n; ++i) span.col(i) = basis_vecs[static_cast<size_t>(i)];
  if (rank_of(span, f) != n) throw Error("subalgebra_on_basis: vectors are linearly dependent");

  Mat mult = Mat::Constant(n, n * n, f.zero());
  const TensorIndex t{n, n};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Vec prod = r.multiply(span.col(i), span.col(j));
      const std::optional<Vec> coords = solve(span, prod, f);
      if (!coords) {
        throw Error("subalgebra_on_basis: span of '" + name + "' is not closed under products");
      }
      mult.col(t.flat(i, j)) = *coords;
    }
  }
  const std::optional<Vec> unit = solve(span, r.unit, f);
  if (!unit) throw Error("subalgebra_on_basis: span of '" + name + "' does not contain the unit");

  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(name + std::to_string(i));
  Subalgebra out;
  out.algebra = Algebra::make(name, FinSpace::make(f, n, std::move(labels)), std::move(mult), *unit);
  out.inclusion = AlgebraMap::make(out.algebra, r, span);
  return out;
}

Tower::Tower(Bimodule base, Bimodule step, int levels) : base_(std::move(base)), step_(std::move(step)) {
  if (levels < 0) throw ShapeError("tower needs a nonnegative level count");
  const Field& f = base_.field;
  level_.push_back(base_);
  full_proj_.push_back(promote_mat(identity(base_.dim()), f));
  full_section_.push_back(promote_mat(identity(base_.dim()), f));
  for (int k = 0; k < levels; ++k) {
    BalancedTensor t = tensor_over_R(level_.back(), step_);
    full_proj_.push_back(Mat(t.q.projection * kron(full_proj_.back(), promote_mat(identity(step_.dim()), f))));
    full_section_.push_back(Mat(kron(full_section_.back(), promote_mat(identity(step_.dim()), f)) * t.q.section));
    level_.push_back(std::move(t.result));
    CORINGLAB_REQUIRE(mats_equal(full_proj_.back() * full_section_.back(),
                                 promote_mat(identity(level_.back().dim()), f)),
                      "tower: full projection is not a retraction of the full section");
  }
}

const Bimodule& Tower::level(int k) const {
  if (k < 0 || k >= static_cast<int>(level_.size())) throw ShapeError("tower level out of range");
  return level_[static_cast<size_t>(k)];
}

Index Tower::ambient_dim(int k) const {
  Index d = base_.dim();
  for (int i = 0; i < k; ++i) d *= step_.dim();
  return d;
}

const Mat& Tower::full_proj(int k) const {
  if (k < 0 || k >= static_cast<int>(full_proj_.size())) throw ShapeError("tower level out of range");
  return full_proj_[static_cast<size_t>(k)];
}

const Mat& Tower::full_section(int k) const {
  if (k < 0 || k >= static_cast<int>(full_section_.size())) throw ShapeError("tower level out of range");
  return full_section_[static_cast<size_t>(k)];
}

}  // namespace coringlab

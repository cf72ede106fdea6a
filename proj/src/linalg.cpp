#include "coringlab/linalg.hpp"

#include <sstream>

namespace coringlab {

FinSpace FinSpace::make(const Field& f, Index dim, std::vector<std::string> labels) {
  if (dim < 0) throw ShapeError("space dimension must be nonnegative");
  if (!labels.empty() && static_cast<Index>(labels.size()) != dim) {
    throw ShapeError("label count does not match dimension");
  }
  FinSpace s;
  s.field = f;
  s.dim = dim;
  s.labels = std::move(labels);
  return s;
}

std::string FinSpace::label(Index i) const {
  if (i < 0 || i >= dim) throw ShapeError("basis index out of range");
  if (labels.empty()) return "e" + std::to_string(i);
  return labels[static_cast<size_t>(i)];
}

bool FinSpace::operator==(const FinSpace& o) const {
  return field == o.field && dim == o.dim;
}

LinMap LinMap::make(FinSpace dom, FinSpace cod, Mat m) {
  if (m.rows() != cod.dim || m.cols() != dom.dim) {
    throw ShapeError("linear map matrix must be codomain.dim x domain.dim");
  }
  LinMap f;
  f.domain = std::move(dom);
  f.codomain = std::move(cod);
  f.matrix = std::move(m);
  return f;
}

Vec LinMap::apply(const Vec& v) const {
  if (v.size() != domain.dim) throw ShapeError("vector does not live in the map's domain");
  return matrix * v;
}

bool is_zero_mat(const Mat& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!m(i, j).is_zero()) return false;
    }
  }
  return true;
}

bool mats_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

Mat promote_mat(const Mat& m, const Field& f) {
  Mat out = m;
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = 0; i < out.rows(); ++i) {
      out(i, j) = f.promote(out(i, j));
    }
  }
  return out;
}

Field field_of(const Mat& m) {
  bool saw_rat = false;
  bool saw_mod = false;
  long long p = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Scalar& s = m(i, j);
      if (s.kind() == Scalar::Kind::Rat) saw_rat = true;
      if (s.kind() == Scalar::Kind::Mod) {
        if (saw_mod && p != s.modulus()) throw TypeError("mixed moduli in matrix");
        saw_mod = true;
        p = s.modulus();
      }
    }
  }
  if (saw_rat && saw_mod) throw TypeError("mixed scalar kinds in matrix");
  if (saw_mod) return Field::GF(p);
  return Field::QQ();  // integer literals default to the rationals
}

RrefResult rref(const Mat& m, const Field& f) {
  RrefResult res;
  res.reduced = promote_mat(m, f);
  Mat& a = res.reduced;
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index piv = -1;
    for (Index r = row; r < a.rows(); ++r) {
      if (!a(r, col).is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != row) a.row(row).swap(a.row(piv));
    const Scalar inv = a(row, col).inverse();
    for (Index c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      const Scalar factor = a(r, col);
      for (Index c = col; c < a.cols(); ++c) a(r, c) -= factor * a(row, c);
    }
    res.pivots.push_back(col);
    ++row;
  }
  res.rank = static_cast<Index>(res.pivots.size());
  return res;
}

Index rank_of(const Mat& m, const Field& f) { return rref(m, f).rank; }

std::vector<Vec> kernel_basis(const Mat& m, const Field& f) {
  const RrefResult r = rref(m, f);
  std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
  for (Index p : r.pivots) is_pivot[static_cast<size_t>(p)] = true;

  std::vector<Vec> basis;
  for (Index c = 0; c < m.cols(); ++c) {
    if (is_pivot[static_cast<size_t>(c)]) continue;
    Vec v = Vec::Constant(m.cols(), f.zero());
    v(c) = f.one();
    for (Index i = 0; i < r.rank; ++i) v(r.pivots[static_cast<size_t>(i)]) = -r.reduced(i, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

Mat kernel_matrix(const Mat& m, const Field& f) {
  const std::vector<Vec> basis = kernel_basis(m, f);
  Mat out = Mat::Constant(m.cols(), static_cast<Index>(basis.size()), f.zero());
  for (size_t j = 0; j < basis.size(); ++j) out.col(static_cast<Index>(j)) = basis[j];
  return out;
}

std::optional<Mat> solve_many(const Mat& m, const Mat& rhs, const Field& f) {
  if (rhs.rows() != m.rows()) throw ShapeError("right-hand side has wrong height");
  Mat aug = Mat::Constant(m.rows(), m.cols() + rhs.cols(), f.zero());
  aug.leftCols(m.cols()) = m;
  aug.rightCols(rhs.cols()) = rhs;
  const RrefResult r = rref(aug, f);
  for (Index p : r.pivots) {
    if (p >= m.cols()) return std::nullopt;
  }
  Mat x = Mat::Constant(m.cols(), rhs.cols(), f.zero());
  for (Index i = 0; i < r.rank; ++i) {
    for (Index k = 0; k < rhs.cols(); ++k) {
      x(r.pivots[static_cast<size_t>(i)], k) = r.reduced(i, m.cols() + k);
    }
  }
  return x;
}

std::optional<Vec> solve(const Mat& m, const Vec& b, const Field& f) {
  const std::optional<Mat> x = solve_many(m, b, f);
  if (!x) return std::nullopt;
  return Vec(x->col(0));
}

bool in_span(const Mat& cols, const Vec& v, const Field& f) {
  return solve(cols, v, f).has_value();
}

Mat image_basis(const Mat& m, const Field& f) {
  const RrefResult r = rref(m, f);
  Mat out = Mat::Constant(m.rows(), r.rank, f.zero());
  for (Index i = 0; i < r.rank; ++i) out.col(i) = m.col(r.pivots[static_cast<size_t>(i)]);
  return out;
}

QuotientSpace quotient(const FinSpace& ambient, const Mat& relations,
                       std::vector<std::string> labels) {
  if (relations.size() > 0 && relations.rows() != ambient.dim) {
    throw ShapeError("relation vectors must live in the ambient space");
  }
  const Field& f = ambient.field;
  const Index n = ambient.dim;

  Mat rel = relations;
  if (rel.size() == 0) rel = Mat::Constant(n, 0, f.zero());
  const RrefResult r = rref(Mat(rel.transpose()), f);

  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (Index p : r.pivots) is_pivot[static_cast<size_t>(p)] = true;
  std::vector<Index> free_cols;
  for (Index c = 0; c < n; ++c) {
    if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);
  }
  const Index q = static_cast<Index>(free_cols.size());

  QuotientSpace out;
  out.ambient = ambient;
  out.relations = rel;
  out.projection = Mat::Constant(q, n, f.zero());
  out.section = Mat::Constant(n, q, f.zero());
  std::vector<std::string> qlabels;
  for (Index j = 0; j < q; ++j) {
    out.projection(j, free_cols[static_cast<size_t>(j)]) = f.one();
    out.section(free_cols[static_cast<size_t>(j)], j) = f.one();
    qlabels.push_back("[" + ambient.label(free_cols[static_cast<size_t>(j)]) + "]");
  }
  for (Index i = 0; i < r.rank; ++i) {
    const Index pc = r.pivots[static_cast<size_t>(i)];
    for (Index j = 0; j < q; ++j) {
      out.projection(j, pc) = -r.reduced(i, free_cols[static_cast<size_t>(j)]);
    }
  }
  out.space = FinSpace::make(f, q, labels.empty() ? std::move(qlabels) : std::move(labels));

  CORINGLAB_REQUIRE(mats_equal(out.projection * out.section,
                               promote_mat(identity(q), f)),
                    "quotient: projection is not a retraction of the section");
  CORINGLAB_REQUIRE(is_zero_mat(out.projection * rel),
                    "quotient: projection does not kill the relations");
  return out;
}

FinSpace tensor_space(const FinSpace& a, const FinSpace& b) {
  if (a.field != b.field) throw TypeError("tensor factors over different fields");
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(a.dim * b.dim));
  for (Index i = 0; i < a.dim; ++i) {
    for (Index j = 0; j < b.dim; ++j) labels.push_back(a.label(i) + "(x)" + b.label(j));
  }
  return FinSpace::make(a.field, a.dim * b.dim, std::move(labels));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index k = 0; k < b.rows(); ++k) {
        for (Index l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  }
  return out;
}

Mat identity(Index n) { return Mat::Identity(n, n); }

Vec unit_vec(Index dim, Index i) {
  Vec v = Vec::Constant(dim, Scalar(0));
  v(i) = Scalar(1);
  return v;
}

namespace {

Vec flatten(const Mat& m) {
  Vec v(m.rows() * m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

Mat unflatten(const Vec& v, Index rows, Index cols) {
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  }
  return m;
}

// Stacks the conditions evaluated on every elementary matrix into one system.
Mat condition_system(Index rows, Index cols, const Field& f,
                     const std::vector<std::function<Mat(const Mat&)>>& conditions,
                     std::vector<std::pair<Index, Index>>& shapes) {
  const Index n = rows * cols;
  shapes.clear();
  Index total = 0;
  std::vector<std::vector<Vec>> evaluated(conditions.size());
  for (Index u = 0; u < n; ++u) {
    Mat e = Mat::Constant(rows, cols, f.zero());
    e(u / cols, u % cols) = f.one();
    for (size_t c = 0; c < conditions.size(); ++c) {
      Mat out = conditions[c](e);
      if (u == 0) {
        shapes.emplace_back(out.rows(), out.cols());
        total += out.rows() * out.cols();
      } else if (out.rows() != shapes[c].first || out.cols() != shapes[c].second) {
        throw InternalError("linear condition changed output shape between evaluations");
      }
      evaluated[c].push_back(flatten(out));
    }
  }
  Mat a = Mat::Constant(total, n, f.zero());
  Index row0 = 0;
  for (size_t c = 0; c < conditions.size(); ++c) {
    const Index h = shapes[c].first * shapes[c].second;
    for (Index u = 0; u < n; ++u) a.block(row0, u, h, 1) = evaluated[c][static_cast<size_t>(u)];
    row0 += h;
  }
  return a;
}

}  // namespace

std::vector<Mat> linear_solution_space(Index rows, Index cols, const Field& f,
                                       const std::vector<std::function<Mat(const Mat&)>>& conditions) {
  if (rows * cols == 0) return {};
  std::vector<std::pair<Index, Index>> shapes;
  const Mat a = condition_system(rows, cols, f, conditions, shapes);
  std::vector<Mat> basis;
  for (const Vec& v : kernel_basis(a, f)) basis.push_back(unflatten(v, rows, cols));
  return basis;
}

std::optional<Mat> affine_solve(Index rows, Index cols, const Field& f,
                                const std::vector<std::function<Mat(const Mat&)>>& conditions,
                                const std::vector<Mat>& targets) {
  if (conditions.size() != targets.size()) {
    throw ShapeError("affine_solve needs one target per condition");
  }
  std::vector<std::pair<Index, Index>> shapes;
  const Mat a = condition_system(rows, cols, f, conditions, shapes);
  Vec b = Vec::Constant(a.rows(), f.zero());
  Index row0 = 0;
  for (size_t c = 0; c < targets.size(); ++c) {
    if (targets[c].rows() != shapes[c].first || targets[c].cols() != shapes[c].second) {
      throw ShapeError("affine_solve target has wrong shape");
    }
    const Index h = shapes[c].first * shapes[c].second;
    b.segment(row0, h) = flatten(targets[c]);
    row0 += h;
  }
  const std::optional<Vec> x = solve(a, b, f);
  if (!x) return std::nullopt;
  return unflatten(*x, rows, cols);
}

std::string vec_str(const Vec& v, const FinSpace& space) {
  if (v.size() != space.dim) throw ShapeError("vector does not live in the labeled space");
  std::ostringstream os;
  bool first = true;
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i).is_zero()) continue;
    if (!first) os << " + ";
    if (!v(i).is_one()) {
      if (v(i).kind() == Scalar::Kind::Mod) {
        os << v(i).residue() << "*";
      } else {
        os << v(i).str() << "*";
      }
    }
    os << space.label(i);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace coringlab

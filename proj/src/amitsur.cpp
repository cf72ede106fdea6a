#include "coringlab/amitsur.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace coringlab {

namespace {

void merge_report(CheckReport& dst, const CheckReport& src, const std::string& prefix) {
  for (const auto& [name, pass] : src.results) dst.add(prefix + name, pass);
  for (const CheckIssue& issue : src.issues) {
    dst.issues.push_back(CheckIssue{prefix + issue.check, issue.where, issue.detail});
  }
}

Index ipow(Index base, Index e) {
  Index out = 1;
  for (Index k = 0; k < e; ++k) out *= base;
  return out;
}

Mat kronpow(const Mat& m, Index e, const Field& f) {
  Mat out = promote_mat(identity(1), f);
  for (Index k = 0; k < e; ++k) out = kron(out, m);
  return out;
}

Mat as_col(const Vec& v) {
  Mat m(v.size(), 1);
  m.col(0) = v;
  return m;
}

Mat eye(Index n, const Field& f) { return promote_mat(identity(n), f); }

// Whether m kills ker(proj), given a section with proj * sec == id; uses
// that I - sec*proj projects onto the kernel, avoiding any elimination.
bool kills_kernel(const Mat& m, const Mat& proj, const Mat& sec) {
  return is_zero_mat(Mat(m - (m * sec) * proj));
}

// R viewed as an (S,R)-bimodule along an inclusion S -> R.
Bimodule left_module_over(const AlgebraMap& incl) {
  const Algebra& R = incl.target;
  const Algebra& S = incl.source;
  const Field& f = R.field;
  const Index dr = R.dim();
  Mat left = Mat::Constant(dr, S.dim() * dr, f.zero());
  for (Index i = 0; i < S.dim(); ++i) {
    for (Index j = 0; j < dr; ++j) {
      left.col(i * dr + j) = R.multiply(incl.apply(S.element(i)), R.element(j));
    }
  }
  return Bimodule::make("R", R.space, S, R, left, regular_bimodule(R).right_action);
}

// Quotient of (degree-n space) (x)_k R by the S-balancing relations, without
// materializing the full bimodule structure on the result.
QuotientSpace balanced_with_r(const AmitsurContext& ctx, Index n, const AlgebraMap& incl) {
  const Algebra& R = ctx.coring().R;
  const Field& f = R.field;
  const Index dr = R.dim();
  const Index dm = ctx.dim(n);
  const Index ds = incl.source.dim();
  Mat rel = Mat::Constant(dm * dr, ds * dm * dr, f.zero());
  for (Index k = 0; k < ds; ++k) {
    Vec s = incl.apply(incl.source.element(k));
    Mat rs = ctx.right_act(n, s);
    Mat sr = R.left_mult(s);
    for (Index m = 0; m < dm; ++m) {
      for (Index r = 0; r < dr; ++r) {
        rel.col((k * dm + m) * dr + r) =
            kron_vec(Vec(rs.col(m)), unit_vec(dr, r)) -
            kron_vec(unit_vec(dm, m), Vec(sr.col(r)));
      }
    }
  }
  return quotient(FinSpace::make(f, dm * dr), rel);
}

}  // namespace

AmitsurContext::AmitsurContext(const Coring& c, const Vec& g, Index max_degree)
    : c_(c), g_(g), max_degree_(max_degree) {
  if (max_degree_ < 1) throw Error("tensor complex: max degree must be at least 1");
  if (g_.size() != c_.dim()) throw ShapeError("tensor complex: element has the wrong dimension");
  const Field& f = c_.R.field;
  GrouplikeInfo gi = verify_grouplike(c_, g_);
  semi_ = gi.semi_grouplike;
  proper_ = gi.grouplike;
  tower_ = Tower(c_.C, c_.C, static_cast<int>(max_degree_) - 1);

  const Index dr = c_.R.dim();
  const Index dc = c_.dim();
  Mat d0 = Mat::Constant(dc, dr, f.zero());
  for (Index j = 0; j < dr; ++j) {
    Vec r = c_.R.element(j);
    d0.col(j) = c_.C.act_right(g_, r) - c_.C.act_left(r, g_);
  }
  amb_d_.push_back(d0);
  d_.push_back(d0);

  Mat gcol = as_col(g_);
  for (Index n = 1; n < max_degree_; ++n) {
    const Index low = ipow(dc, n);
    Mat amb = kron(gcol, eye(low, f));
    for (Index i = 1; i <= n; ++i) {
      Mat mid = kron(eye(ipow(dc, i - 1), f),
                     kron(c_.delta_lift, eye(ipow(dc, n - i), f)));
      if (i % 2 == 1) {
        amb -= mid;
      } else {
        amb += mid;
      }
    }
    Mat last = kron(eye(low, f), gcol);
    if (n % 2 == 0) {
      amb -= last;
    } else {
      amb += last;
    }
    Mat top = full_proj(n + 1) * amb;
    CORINGLAB_REQUIRE(kills_kernel(top, full_proj(n), full_section(n)),
                      "tensor complex: differential does not descend to the balanced quotient");
    amb_d_.push_back(amb);
    d_.push_back(top * full_section(n));
  }
  s_basis_ = centralizer(c_.R, c_.C, g_);
}

Index AmitsurContext::dim(Index n) const {
  CORINGLAB_REQUIRE(n >= 0 && n <= max_degree_, "tensor complex: degree out of range");
  return n == 0 ? c_.R.dim() : tower_->dim(static_cast<int>(n) - 1);
}

const FinSpace& AmitsurContext::space(Index n) const {
  CORINGLAB_REQUIRE(n >= 0 && n <= max_degree_, "tensor complex: degree out of range");
  return n == 0 ? c_.R.space : tower_->level(static_cast<int>(n) - 1).space;
}

const Mat& AmitsurContext::d(Index n) const {
  CORINGLAB_REQUIRE(n >= 0 && n < max_degree_, "tensor complex: no differential at this degree");
  return d_[static_cast<size_t>(n)];
}

const Mat& AmitsurContext::ambient_d(Index n) const {
  CORINGLAB_REQUIRE(n >= 0 && n < max_degree_, "tensor complex: no differential at this degree");
  return amb_d_[static_cast<size_t>(n)];
}

Mat AmitsurContext::full_proj(Index n) const {
  CORINGLAB_REQUIRE(n >= 0 && n <= max_degree_, "tensor complex: degree out of range");
  if (n == 0) return eye(c_.R.dim(), c_.R.field);
  return tower_->full_proj(static_cast<int>(n) - 1);
}

Mat AmitsurContext::full_section(Index n) const {
  CORINGLAB_REQUIRE(n >= 0 && n <= max_degree_, "tensor complex: degree out of range");
  if (n == 0) return eye(c_.R.dim(), c_.R.field);
  return tower_->full_section(static_cast<int>(n) - 1);
}

Mat AmitsurContext::left_act(Index n, const Vec& r) const {
  if (n == 0) return c_.R.left_mult(r);
  return tower_->level(static_cast<int>(n) - 1).left_op(r);
}

Mat AmitsurContext::right_act(Index n, const Vec& r) const {
  if (n == 0) return c_.R.right_mult(r);
  return tower_->level(static_cast<int>(n) - 1).right_op(r);
}

GradedElement AmitsurContext::product(const GradedElement& x, const GradedElement& y) const {
  const Index m = x.degree;
  const Index n = y.degree;
  if (m + n > max_degree_) throw Error("tensor complex: product degree exceeds the context");
  CORINGLAB_REQUIRE(x.coords.size() == dim(m) && y.coords.size() == dim(n),
                    "tensor complex: element coordinates have the wrong size");
  if (m == 0 && n == 0) return {0, c_.R.multiply(x.coords, y.coords)};
  if (m == 0) return {n, Vec(left_act(n, x.coords) * y.coords)};
  if (n == 0) return {m, Vec(right_act(m, y.coords) * x.coords)};
  Vec amb = kron_vec(Vec(full_section(m) * x.coords), Vec(full_section(n) * y.coords));
  return {m + n, Vec(full_proj(m + n) * amb)};
}

CheckReport check_dg_axioms(const AmitsurContext& ctx) {
  const Coring& c = ctx.coring();
  CheckReport rep;
  rep.subject = "tensor complex of " + c.name;
  const Index N = ctx.max_degree();

  bool sq = true;
  for (Index n = 0; n + 1 < N; ++n) {
    if (!is_zero_mat(ctx.d(n + 1) * ctx.d(n))) {
      sq = false;
      rep.fail("d squared", {n}, "composite is nonzero starting in degree " + std::to_string(n));
    }
  }
  rep.add("d squared", sq);

  bool leib = true;
  for (Index m = 0; m <= N && leib; ++m) {
    for (Index n = 0; m + n + 1 <= N && leib; ++n) {
      for (Index x = 0; x < ctx.dim(m) && leib; ++x) {
        GradedElement xe{m, unit_vec(ctx.dim(m), x)};
        GradedElement dx{m + 1, Vec(ctx.d(m) * xe.coords)};
        for (Index y = 0; y < ctx.dim(n) && leib; ++y) {
          GradedElement ye{n, unit_vec(ctx.dim(n), y)};
          GradedElement dy{n + 1, Vec(ctx.d(n) * ye.coords)};
          Vec lhs = ctx.d(m + n) * ctx.product(xe, ye).coords;
          Vec rhs = ctx.product(dx, ye).coords;
          if (m % 2 == 0) {
            rhs += ctx.product(xe, dy).coords;
          } else {
            rhs -= ctx.product(xe, dy).coords;
          }
          if (!mats_equal(Mat(lhs), Mat(rhs))) {
            leib = false;
            rep.fail("graded Leibniz rule", {m, n, x, y},
                     "fails on basis pair in degrees " + std::to_string(m) + "," +
                         std::to_string(n));
          }
        }
      }
    }
  }
  rep.add("graded Leibniz rule", leib);

  bool lmul = true;
  bool rmul = true;
  for (Index k = 0; k < static_cast<Index>(ctx.s_basis().size()); ++k) {
    const Vec& s = ctx.s_basis()[static_cast<size_t>(k)];
    for (Index n = 0; n < N; ++n) {
      if (lmul && !mats_equal(Mat(ctx.d(n) * ctx.left_act(n, s)),
                              Mat(ctx.left_act(n + 1, s) * ctx.d(n)))) {
        lmul = false;
        rep.fail("left coinvariant linearity", {k, n}, "fails in degree " + std::to_string(n));
      }
      if (rmul && !mats_equal(Mat(ctx.d(n) * ctx.right_act(n, s)),
                              Mat(ctx.right_act(n + 1, s) * ctx.d(n)))) {
        rmul = false;
        rep.fail("right coinvariant linearity", {k, n}, "fails in degree " + std::to_string(n));
      }
    }
  }
  rep.add("left coinvariant linearity", lmul);
  rep.add("right coinvariant linearity", rmul);

  bool dS = true;
  for (Index k = 0; k < static_cast<Index>(ctx.s_basis().size()); ++k) {
    if (!is_zero_mat(Mat(ctx.d(0) * ctx.s_basis()[static_cast<size_t>(k)]))) {
      dS = false;
      rep.fail("vanishes on coinvariants", {k}, "d is nonzero on a coinvariant element");
    }
  }
  rep.add("vanishes on coinvariants", dS);

  bool assoc = true;
  for (Index a = 0; a <= N && assoc; ++a) {
    for (Index b = 0; a + b <= N && assoc; ++b) {
      for (Index e = 0; a + b + e <= N && assoc; ++e) {
        for (Index x = 0; x < ctx.dim(a) && assoc; ++x) {
          GradedElement xe{a, unit_vec(ctx.dim(a), x)};
          for (Index y = 0; y < ctx.dim(b) && assoc; ++y) {
            GradedElement ye{b, unit_vec(ctx.dim(b), y)};
            GradedElement xy = ctx.product(xe, ye);
            for (Index z = 0; z < ctx.dim(e) && assoc; ++z) {
              GradedElement ze{e, unit_vec(ctx.dim(e), z)};
              Vec p1 = ctx.product(xy, ze).coords;
              Vec p2 = ctx.product(xe, ctx.product(ye, ze)).coords;
              if (!mats_equal(Mat(p1), Mat(p2))) {
                assoc = false;
                rep.fail("product associative", {a, b, e, x, y, z},
                         "association fails in degrees " + std::to_string(a) + "," +
                             std::to_string(b) + "," + std::to_string(e));
              }
            }
          }
        }
      }
    }
  }
  rep.add("product associative", assoc);

  bool unital = true;
  GradedElement one{0, c.R.one()};
  for (Index n = 0; n <= N && unital; ++n) {
    for (Index x = 0; x < ctx.dim(n) && unital; ++x) {
      GradedElement xe{n, unit_vec(ctx.dim(n), x)};
      if (!mats_equal(Mat(ctx.product(one, xe).coords), Mat(xe.coords)) ||
          !mats_equal(Mat(ctx.product(xe, one).coords), Mat(xe.coords))) {
        unital = false;
        rep.fail("product unital", {n, x}, "unit fails on a basis element");
      }
    }
  }
  rep.add("product unital", unital);
  return rep;
}

ReducedContext reduced_context(const AmitsurContext& ctx) {
  if (!ctx.grouplike_proper()) {
    throw Error("reduced subcomplex requires a grouplike element");
  }
  const Coring& c = ctx.coring();
  const Field& f = c.R.field;
  const Index N = ctx.max_degree();
  ReducedContext rc;
  rc.max_degree = N;
  Mat K = kernel_matrix(c.counit, f);
  rc.basis.push_back(eye(c.R.dim(), f));
  for (Index n = 1; n <= N; ++n) {
    rc.basis.push_back(image_basis(Mat(ctx.full_proj(n) * kronpow(K, n, f)), f));
  }
  for (Index n = 0; n < N; ++n) {
    auto rd = solve_many(rc.basis[static_cast<size_t>(n + 1)],
                         Mat(ctx.d(n) * rc.basis[static_cast<size_t>(n)]), f);
    CORINGLAB_REQUIRE(rd.has_value(), "reduced subcomplex is not preserved by d");
    rc.d.push_back(*rd);
  }
  return rc;
}

GradedElement reduced_product(const AmitsurContext& ctx, const ReducedContext& rc,
                              const GradedElement& x, const GradedElement& y) {
  const Field& f = ctx.coring().R.field;
  GradedElement up = ctx.product({x.degree, Vec(rc.basis[static_cast<size_t>(x.degree)] * x.coords)},
                                 {y.degree, Vec(rc.basis[static_cast<size_t>(y.degree)] * y.coords)});
  auto coords = solve(rc.basis[static_cast<size_t>(up.degree)], up.coords, f);
  CORINGLAB_REQUIRE(coords.has_value(), "product left the reduced subcomplex");
  return {up.degree, *coords};
}

std::vector<Index> chain_cohomology(const std::vector<Mat>& d, const std::vector<Index>& dims,
                                    const Field& f) {
  CORINGLAB_REQUIRE(dims.size() == d.size() + 1, "chain: dimension list does not match d list");
  for (size_t n = 0; n < d.size(); ++n) {
    CORINGLAB_REQUIRE(d[n].rows() == dims[n + 1] && d[n].cols() == dims[n],
                      "chain: differential has the wrong shape");
    if (n + 1 < d.size()) {
      CORINGLAB_REQUIRE(is_zero_mat(d[n + 1] * d[n]), "chain: d squared is nonzero");
    }
  }
  std::vector<Index> ranks(d.size());
  for (size_t n = 0; n < d.size(); ++n) ranks[n] = rank_of(d[n], f);
  std::vector<Index> out(d.size());
  out[0] = dims[0] - ranks[0];
  for (size_t n = 1; n < d.size(); ++n) out[n] = dims[n] - ranks[n] - ranks[n - 1];
  return out;
}

std::vector<Index> cohomology(const AmitsurContext& ctx) {
  std::vector<Mat> d;
  std::vector<Index> dims;
  for (Index n = 0; n <= ctx.max_degree(); ++n) dims.push_back(ctx.dim(n));
  for (Index n = 0; n < ctx.max_degree(); ++n) d.push_back(ctx.d(n));
  return chain_cohomology(d, dims, ctx.coring().R.field);
}

std::vector<Index> cohomology(const AmitsurContext& ctx, const ReducedContext& rc) {
  std::vector<Index> dims;
  for (Index n = 0; n <= rc.max_degree; ++n) dims.push_back(rc.dim(n));
  return chain_cohomology(rc.d, dims, ctx.coring().R.field);
}

GaloisResult galois_map(const Coring& c, const Vec& g) {
  const Field& f = c.R.field;
  GaloisResult out;
  out.report.subject = "canonical comparison map for " + c.name;
  out.coinv = coinvariant_subring(c, g);
  out.sweedler = sweedler_coring(c.R, out.coinv.inclusion);
  const Index dr = c.R.dim();
  const Index dc = c.dim();

  Mat amb = Mat::Constant(dc, dr * dr, f.zero());
  for (Index i = 0; i < dr; ++i) {
    for (Index j = 0; j < dr; ++j) {
      amb.col(i * dr + j) =
          c.C.act_left(c.R.element(i), c.C.act_right(g, c.R.element(j)));
    }
  }
  out.report.add("well defined", is_zero_mat(amb * out.sweedler.RsR.q.relations));
  out.chi = amb * out.sweedler.RsR.q.section;
  merge_report(out.report, check_coring_map(out.sweedler.coring, c, out.chi), "coring map: ");
  out.report.add("grouplike preserved", mats_equal(Mat(out.chi * out.sweedler.g), as_col(g)));
  const bool square = out.sweedler.RsR.result.dim() == dc;
  const bool bij = square && rank_of(out.chi, f) == dc;
  out.report.add("bijective", bij);
  if (!bij) {
    out.report.fail("bijective", {},
                    square ? "comparison map has a nontrivial kernel"
                           : "source and target have different dimensions");
  }
  out.galois = out.report.ok();
  if (bij) {
    auto inv = solve_many(out.chi, eye(dc, f), f);
    CORINGLAB_REQUIRE(inv.has_value(), "full-rank square map must be invertible");
    CORINGLAB_REQUIRE(mats_equal(Mat(out.chi * *inv), eye(dc, f)) &&
                          mats_equal(Mat(*inv * out.chi), eye(dc, f)),
                      "inverse of the comparison map failed to verify");
    out.chi_inv = *inv;
  }
  return out;
}

CheckReport verify_star_identity(const Coring& c, const Vec& g, const GaloisResult& gal) {
  if (!gal.galois || !gal.chi_inv.has_value()) {
    throw Error("grouplike factorization identity requires the comparison map to be invertible");
  }
  const Field& f = c.R.field;
  const Algebra& R = c.R;
  const Index dr = R.dim();
  const Index dc = c.dim();
  CheckReport rep;
  rep.subject = "grouplike factorization identity for " + c.name;

  Bimodule c_rs = restrict_right(c.C, gal.coinv.inclusion);
  Bimodule r_sr = left_module_over(gal.coinv.inclusion);
  BalancedTensor QT = tensor_over_R(c_rs, r_sr);

  // Lift of the inverse comparison map into plain tensor coordinates.
  Mat W = gal.sweedler.RsR.q.section * *gal.chi_inv;

  Mat lhs = Mat::Constant(QT.result.dim(), dc, f.zero());
  for (Index j = 0; j < dc; ++j) {
    for (Index t = 0; t < W.rows(); ++t) {
      if (W(t, j).is_zero()) continue;
      const Index a = t / dr;
      const Index b = t % dr;
      lhs.col(j) += W(t, j) * QT.pure(c.C.act_left(R.element(a), g), R.element(b));
    }
  }

  Mat embed = Mat::Constant(QT.result.dim(), dc * dc, f.zero());
  for (Index p = 0; p < dc; ++p) {
    for (Index q = 0; q < dc; ++q) {
      Vec col = Vec::Constant(QT.result.dim(), f.zero());
      for (Index t = 0; t < W.rows(); ++t) {
        if (W(t, q).is_zero()) continue;
        const Index a = t / dr;
        const Index b = t % dr;
        col += W(t, q) * QT.pure(c.C.act_right(c.C.element(p), R.element(a)), R.element(b));
      }
      embed.col(p * dc + q) = col;
    }
  }
  Mat rhs = embed * c.delta_lift;

  bool identity_ok = true;
  for (Index j = 0; j < dc; ++j) {
    if (!mats_equal(Mat(lhs.col(j)), Mat(rhs.col(j)))) {
      identity_ok = false;
      rep.fail("factorization identity", {j}, "sides differ on " + c.C.space.label(j));
    }
  }
  rep.add("factorization identity", identity_ok);
  rep.add("inverse of grouplike",
          mats_equal(Mat(*gal.chi_inv * g), as_col(gal.sweedler.g)));
  rep.add("recomposition", mats_equal(Mat(gal.chi * *gal.chi_inv), eye(dc, f)));
  return rep;
}

HomotopyResult contracting_homotopy(const AmitsurContext& ctx, const GaloisResult& gal) {
  if (!gal.galois || !gal.chi_inv.has_value()) {
    throw Error("contracting homotopy requires the comparison map to be invertible");
  }
  const Coring& c = ctx.coring();
  const Field& f = c.R.field;
  const Index dr = c.R.dim();
  const Index dc = c.dim();
  const Index N = ctx.max_degree();
  HomotopyResult out;
  out.report.subject = "contracting homotopy for " + c.name;

  // The extended spaces Omega^n (x)_S R, presented on the plain ambients
  // C^{(x)k n} (x)k R with projections P and sections Sec.
  std::vector<Mat> P(static_cast<size_t>(N) + 1);
  std::vector<Mat> Sec(static_cast<size_t>(N) + 1);
  std::vector<Index> xdim(static_cast<size_t>(N) + 1);
  P[0] = gal.sweedler.RsR.q.projection;
  Sec[0] = gal.sweedler.RsR.q.section;
  xdim[0] = gal.sweedler.RsR.result.dim();
  for (Index n = 1; n <= N; ++n) {
    QuotientSpace q = balanced_with_r(ctx, n, gal.coinv.inclusion);
    P[static_cast<size_t>(n)] = q.projection * kron(ctx.full_proj(n), eye(dr, f));
    Sec[static_cast<size_t>(n)] = kron(ctx.full_section(n), eye(dr, f)) * q.section;
    xdim[static_cast<size_t>(n)] = q.space.dim;
  }

  std::vector<Mat> dq(static_cast<size_t>(N));
  bool dwell = true;
  for (Index n = 0; n < N; ++n) {
    Mat top = P[static_cast<size_t>(n + 1)] * kron(ctx.ambient_d(n), eye(dr, f));
    if (!kills_kernel(top, P[static_cast<size_t>(n)], Sec[static_cast<size_t>(n)])) {
      dwell = false;
      out.report.fail("extended d well defined", {n}, "descent fails in degree " + std::to_string(n));
    }
    dq[static_cast<size_t>(n)] = top * Sec[static_cast<size_t>(n)];
  }
  out.report.add("extended d well defined", dwell);

  Mat W = gal.sweedler.RsR.q.section * *gal.chi_inv;
  out.h.resize(static_cast<size_t>(N) + 1);
  bool hwell = true;
  for (Index n = 1; n <= N; ++n) {
    // the target ambient is R (x) R in degree one, C^(n-1) (x) R above
    const Index rows = (n == 1) ? dr * dr : ipow(dc, n - 1) * dr;
    const Index cols = ipow(dc, n) * dr;
    Mat hamb = Mat::Constant(rows, cols, f.zero());
    std::vector<Mat> ra;
    if (n >= 2) {
      ra.reserve(static_cast<size_t>(dr));
      for (Index a = 0; a < dr; ++a) {
        ra.push_back(kron(eye(ipow(dc, n - 2), f), c.C.right_op(c.R.element(a))));
      }
    }
    for (Index mbar = 0; mbar < ipow(dc, n); ++mbar) {
      const Index head = mbar / dc;
      const Index last = mbar % dc;
      for (Index j = 0; j < dr; ++j) {
        Vec w = W * c.C.act_right(c.C.element(last), c.R.element(j));
        Vec col = Vec::Constant(rows, f.zero());
        for (Index t = 0; t < w.size(); ++t) {
          if (w(t).is_zero()) continue;
          const Index a = t / dr;
          const Index b = t % dr;
          if (n == 1) {
            col(a * dr + b) += w(t);
          } else {
            col += w(t) * kron_vec(Vec(ra[static_cast<size_t>(a)] * unit_vec(ipow(dc, n - 1), head)),
                                   unit_vec(dr, b));
          }
        }
        if (n % 2 == 1) {
          hamb.col(mbar * dr + j) = -col;
        } else {
          hamb.col(mbar * dr + j) = col;
        }
      }
    }
    Mat toph = P[static_cast<size_t>(n - 1)] * hamb;
    if (!kills_kernel(toph, P[static_cast<size_t>(n)], Sec[static_cast<size_t>(n)])) {
      hwell = false;
      out.report.fail("h well defined", {n}, "descent fails in degree " + std::to_string(n));
    }
    out.h[static_cast<size_t>(n)] = toph * Sec[static_cast<size_t>(n)];
  }
  out.report.add("h well defined", hwell);

  bool extsq = true;
  for (Index n = 0; n + 1 < N; ++n) {
    if (!is_zero_mat(dq[static_cast<size_t>(n + 1)] * dq[static_cast<size_t>(n)])) {
      extsq = false;
      out.report.fail("extended d squared", {n}, "composite nonzero in degree " + std::to_string(n));
    }
  }
  out.report.add("extended d squared", extsq);

  bool homid = true;
  for (Index n = 1; n < N; ++n) {
    Mat lhs = out.h[static_cast<size_t>(n + 1)] * dq[static_cast<size_t>(n)] +
              dq[static_cast<size_t>(n - 1)] * out.h[static_cast<size_t>(n)];
    if (!mats_equal(lhs, eye(xdim[static_cast<size_t>(n)], f))) {
      homid = false;
      out.report.fail("homotopy identity", {n}, "h.d + d.h is not the identity in degree " +
                                                    std::to_string(n));
    }
  }
  out.report.add("homotopy identity", homid);
  return out;
}

Index UniversalForms::dim(Index n) const { return tower->dim(static_cast<int>(n)); }

Mat UniversalForms::full_proj(Index n) const { return tower->full_proj(static_cast<int>(n)); }

Mat UniversalForms::full_section(Index n) const { return tower->full_section(static_cast<int>(n)); }

namespace {

// (x0, v1..va),(index of a basis ring element) -> x . r on the plain ambient
// of degree a, following the merge rule that pushes r through the slots.
Vec universal_right_mult(const UniversalForms& u, Index a, const Vec& xamb, Index rho) {
  const Algebra& R = u.R;
  const Field& f = R.field;
  const Index dr = R.dim();
  const Index q = u.rs.space.dim;
  Vec out = Vec::Constant(dr * ipow(q, a), f.zero());
  Vec rho_elem = R.element(rho);
  Vec rho_bar = u.rs.project(rho_elem);
  for (Index s = 0; s < xamb.size(); ++s) {
    if (xamb(s).is_zero()) continue;
    const Scalar cx = xamb(s);
    const Index j0 = s / ipow(q, a);
    const Index tail = s % ipow(q, a);
    std::vector<Index> digits(static_cast<size_t>(a));
    for (Index i = 0; i < a; ++i) {
      digits[static_cast<size_t>(i)] = (tail / ipow(q, a - 1 - i)) % q;
    }
    if (a == 0) {
      Vec prod = R.multiply(R.element(j0), rho_elem);
      for (Index rsl = 0; rsl < dr; ++rsl) {
        if (!prod(rsl).is_zero()) out(rsl) += cx * prod(rsl);
      }
      continue;
    }
    for (Index i = 0; i <= a; ++i) {
      const bool negative = (a - i) % 2 == 1;
      if (i == 0) {
        Vec head = R.multiply(R.element(j0), u.rs.lift(unit_vec(q, digits[0])));
        // slots v2..va keep their place, the pushed element lands in the last slot
        Index mid = 0;
        for (Index k = 1; k < a; ++k) mid = mid * q + digits[static_cast<size_t>(k)];
        for (Index rsl = 0; rsl < dr; ++rsl) {
          if (head(rsl).is_zero()) continue;
          for (Index pc = 0; pc < q; ++pc) {
            if (rho_bar(pc).is_zero()) continue;
            const Index idx = (rsl * ipow(q, a - 1) + mid) * q + pc;
            Scalar term = cx * head(rsl) * rho_bar(pc);
            if (negative) {
              out(idx) -= term;
            } else {
              out(idx) += term;
            }
          }
        }
      } else if (i < a) {
        Vec merged = u.rs.project(R.multiply(u.rs.lift(unit_vec(q, digits[static_cast<size_t>(i - 1)])),
                                             u.rs.lift(unit_vec(q, digits[static_cast<size_t>(i)]))));
        for (Index mc = 0; mc < q; ++mc) {
          if (merged(mc).is_zero()) continue;
          for (Index pc = 0; pc < q; ++pc) {
            if (rho_bar(pc).is_zero()) continue;
            Index idx = j0;
            for (Index k = 0; k < a; ++k) {
              Index digit;
              if (k < i - 1) {
                digit = digits[static_cast<size_t>(k)];
              } else if (k == i - 1) {
                digit = mc;
              } else if (k < a - 1) {
                digit = digits[static_cast<size_t>(k + 1)];
              } else {
                digit = pc;
              }
              idx = idx * q + digit;
            }
            Scalar term = cx * merged(mc) * rho_bar(pc);
            if (negative) {
              out(idx) -= term;
            } else {
              out(idx) += term;
            }
          }
        }
      } else {
        Vec merged = u.rs.project(
            R.multiply(u.rs.lift(unit_vec(q, digits[static_cast<size_t>(a - 1)])), rho_elem));
        for (Index mc = 0; mc < q; ++mc) {
          if (merged(mc).is_zero()) continue;
          Index idx = j0;
          for (Index k = 0; k + 1 < a; ++k) idx = idx * q + digits[static_cast<size_t>(k)];
          idx = idx * q + mc;
          Scalar term = cx * merged(mc);
          if (negative) {
            out(idx) -= term;
          } else {
            out(idx) += term;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

GradedElement UniversalForms::product(const GradedElement& x, const GradedElement& y) const {
  const Field& f = R.field;
  const Index a = x.degree;
  const Index b = y.degree;
  if (a + b > max_degree) throw Error("relative forms: product degree exceeds the context");
  const Index q = rs.space.dim;
  Vec xamb = full_section(a) * x.coords;
  Vec yamb = full_section(b) * y.coords;
  Vec res = Vec::Constant(R.dim() * ipow(q, a + b), f.zero());
  for (Index t = 0; t < yamb.size(); ++t) {
    if (yamb(t).is_zero()) continue;
    const Index j0 = t / ipow(q, b);
    const Index mbar = t % ipow(q, b);
    Vec z = universal_right_mult(*this, a, xamb, j0);
    for (Index s = 0; s < z.size(); ++s) {
      if (z(s).is_zero()) continue;
      res(s * ipow(q, b) + mbar) += yamb(t) * z(s);
    }
  }
  return {a + b, Vec(full_proj(a + b) * res)};
}

UniversalForms universal_forms(const Algebra& r, const AlgebraMap& incl, Index max_degree,
                               unsigned long long section_seed) {
  if (max_degree < 1) throw Error("relative forms: max degree must be at least 1");
  CORINGLAB_REQUIRE(incl.target.same_structure(r), "relative forms: inclusion target mismatch");
  const Field& f = r.field;
  UniversalForms u;
  u.R = r;
  u.incl = incl;
  u.max_degree = max_degree;
  u.rs = quotient(r.space, incl.matrix);
  if (section_seed != 0) {
    unsigned long long state = section_seed;
    auto next_coeff = [&state]() {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      return static_cast<long long>((state >> 33) % 7) - 3;
    };
    Mat sec = u.rs.section;
    for (Index j = 0; j < sec.cols(); ++j) {
      for (Index i = 0; i < incl.matrix.cols(); ++i) {
        long long coeff = next_coeff();
        if (coeff == 0) continue;
        sec.col(j) += f.from_long(coeff) * incl.matrix.col(i);
      }
    }
    CORINGLAB_REQUIRE(mats_equal(Mat(u.rs.projection * sec), eye(u.rs.space.dim, f)),
                      "perturbed section is no longer a section");
    u.rs.section = sec;
  }

  const Index q = u.rs.space.dim;
  const Index ds = incl.source.dim();
  Mat left = Mat::Constant(q, ds * q, f.zero());
  Mat right = Mat::Constant(q, q * ds, f.zero());
  for (Index i = 0; i < ds; ++i) {
    Vec s = incl.apply(incl.source.element(i));
    for (Index j = 0; j < q; ++j) {
      Vec v = u.rs.lift(unit_vec(q, j));
      left.col(i * q + j) = u.rs.project(r.multiply(s, v));
      right.col(j * ds + i) = u.rs.project(r.multiply(v, s));
    }
  }
  u.rs_bimodule = Bimodule::make("cokernel", u.rs.space, incl.source, incl.source, left, right);
  Bimodule base = restrict_right(regular_bimodule(r), incl);
  u.tower = Tower(base, u.rs_bimodule, static_cast<int>(max_degree));

  Mat unit_insert = kron(as_col(r.one()), u.rs.projection);
  for (Index n = 0; n < max_degree; ++n) {
    Mat top = u.full_proj(n + 1) * kron(unit_insert, eye(ipow(q, n), f));
    CORINGLAB_REQUIRE(kills_kernel(top, u.full_proj(n), u.full_section(n)),
                      "relative forms: differential does not descend");
    u.d.push_back(top * u.full_section(n));
  }
  return u;
}

CheckReport check_universal_dg(const UniversalForms& u) {
  CheckReport rep;
  rep.subject = "relative forms over " + u.incl.source.name + " -> " + u.R.name;
  const Index N = u.max_degree;

  bool sq = true;
  for (Index n = 0; n + 1 < N; ++n) {
    if (!is_zero_mat(u.d[static_cast<size_t>(n + 1)] * u.d[static_cast<size_t>(n)])) {
      sq = false;
      rep.fail("d squared", {n}, "composite nonzero in degree " + std::to_string(n));
    }
  }
  rep.add("d squared", sq);
  rep.add("vanishes on the base ring", is_zero_mat(u.d[0] * u.incl.matrix));

  bool leib = true;
  for (Index m = 0; m <= N && leib; ++m) {
    for (Index n = 0; m + n + 1 <= N && leib; ++n) {
      for (Index x = 0; x < u.dim(m) && leib; ++x) {
        GradedElement xe{m, unit_vec(u.dim(m), x)};
        GradedElement dx{m + 1, Vec(u.d[static_cast<size_t>(m)] * xe.coords)};
        for (Index y = 0; y < u.dim(n) && leib; ++y) {
          GradedElement ye{n, unit_vec(u.dim(n), y)};
          GradedElement dy{n + 1, Vec(u.d[static_cast<size_t>(n)] * ye.coords)};
          Vec lhs = u.d[static_cast<size_t>(m + n)] * u.product(xe, ye).coords;
          Vec rhs = u.product(dx, ye).coords;
          if (m % 2 == 0) {
            rhs += u.product(xe, dy).coords;
          } else {
            rhs -= u.product(xe, dy).coords;
          }
          if (!mats_equal(Mat(lhs), Mat(rhs))) {
            leib = false;
            rep.fail("graded Leibniz rule", {m, n, x, y},
                     "fails on basis pair in degrees " + std::to_string(m) + "," +
                         std::to_string(n));
          }
        }
      }
    }
  }
  rep.add("graded Leibniz rule", leib);

  bool lmul = true;
  bool rmul = true;
  for (Index k = 0; k < u.incl.source.dim(); ++k) {
    Vec s_in_r = u.incl.apply(u.incl.source.element(k));
    for (Index n = 0; n < N; ++n) {
      const Bimodule& lev = u.tower->level(static_cast<int>(n));
      const Bimodule& lev1 = u.tower->level(static_cast<int>(n + 1));
      if (lmul && !mats_equal(Mat(u.d[static_cast<size_t>(n)] * lev.left_op(s_in_r)),
                              Mat(lev1.left_op(s_in_r) * u.d[static_cast<size_t>(n)]))) {
        lmul = false;
        rep.fail("left base linearity", {k, n}, "fails in degree " + std::to_string(n));
      }
      Vec s = u.incl.source.element(k);
      if (rmul && !mats_equal(Mat(u.d[static_cast<size_t>(n)] * lev.right_op(s)),
                              Mat(lev1.right_op(s) * u.d[static_cast<size_t>(n)]))) {
        rmul = false;
        rep.fail("right base linearity", {k, n}, "fails in degree " + std::to_string(n));
      }
    }
  }
  rep.add("left base linearity", lmul);
  rep.add("right base linearity", rmul);

  bool assoc = true;
  for (Index a = 0; a <= N && assoc; ++a) {
    for (Index b = 0; a + b <= N && assoc; ++b) {
      for (Index e = 0; a + b + e <= N && assoc; ++e) {
        for (Index x = 0; x < u.dim(a) && assoc; ++x) {
          GradedElement xe{a, unit_vec(u.dim(a), x)};
          for (Index y = 0; y < u.dim(b) && assoc; ++y) {
            GradedElement ye{b, unit_vec(u.dim(b), y)};
            GradedElement xy = u.product(xe, ye);
            for (Index z = 0; z < u.dim(e) && assoc; ++z) {
              GradedElement ze{e, unit_vec(u.dim(e), z)};
              if (!mats_equal(Mat(u.product(xy, ze).coords),
                              Mat(u.product(xe, u.product(ye, ze)).coords))) {
                assoc = false;
                rep.fail("product associative", {a, b, e, x, y, z},
                         "association fails in degrees " + std::to_string(a) + "," +
                             std::to_string(b) + "," + std::to_string(e));
              }
            }
          }
        }
      }
    }
  }
  rep.add("product associative", assoc);

  bool unital = true;
  GradedElement one{0, u.R.one()};
  for (Index n = 0; n <= N && unital; ++n) {
    for (Index x = 0; x < u.dim(n) && unital; ++x) {
      GradedElement xe{n, unit_vec(u.dim(n), x)};
      if (!mats_equal(Mat(u.product(one, xe).coords), Mat(xe.coords)) ||
          !mats_equal(Mat(u.product(xe, one).coords), Mat(xe.coords))) {
        unital = false;
        rep.fail("product unital", {n, x}, "unit fails on a basis element");
      }
    }
  }
  rep.add("product unital", unital);
  return rep;
}

SweedlerOracle sweedler_oracle(const SweedlerData& sd, const AmitsurContext& ctx) {
  const Algebra& R = sd.incl.target;
  const Field& f = R.field;
  const Index dr = R.dim();
  const Index N = ctx.max_degree();
  CORINGLAB_REQUIRE(ctx.coring().dim() == sd.coring.dim(),
                    "canonical model: context was built over a different coring");
  SweedlerOracle out;
  out.report.subject = "canonical complex model for " + sd.coring.name;
  Bimodule base = restrict_right(regular_bimodule(R), sd.incl);
  Bimodule step = bimodule_over_subalgebra(R, sd.incl);
  out.tower = Tower(base, step, static_cast<int>(N));

  Mat onecol = as_col(R.one());
  for (Index n = 0; n < N; ++n) {
    Mat amb = Mat::Constant(ipow(dr, n + 2), ipow(dr, n + 1), f.zero());
    for (Index i = 0; i <= n + 1; ++i) {
      Mat ins = kron(eye(ipow(dr, i), f), kron(onecol, eye(ipow(dr, n + 1 - i), f)));
      if (i % 2 == 0) {
        amb += ins;
      } else {
        amb -= ins;
      }
    }
    Mat top = out.tower->full_proj(static_cast<int>(n + 1)) * amb;
    CORINGLAB_REQUIRE(kills_kernel(top, out.tower->full_proj(static_cast<int>(n)),
                                   out.tower->full_section(static_cast<int>(n))),
                      "canonical model: differential does not descend");
    out.d.push_back(top * out.tower->full_section(static_cast<int>(n)));
  }

  out.mu.push_back(eye(dr, f));
  for (Index n = 1; n <= N; ++n) {
    Mat lifts = kronpow(sd.RsR.q.section, n, f);
    Mat contract = (n == 1) ? eye(dr * dr, f)
                            : kron(eye(dr, f), kron(kronpow(R.mult, n - 1, f), eye(dr, f)));
    Mat top = out.tower->full_proj(static_cast<int>(n)) * (contract * lifts);
    CORINGLAB_REQUIRE(kills_kernel(top, ctx.full_proj(n), ctx.full_section(n)),
                      "canonical model: the comparison does not descend");
    out.mu.push_back(top * ctx.full_section(n));
  }

  bool bij = true;
  for (Index n = 0; n <= N; ++n) {
    const Mat& mu = out.mu[static_cast<size_t>(n)];
    if (mu.rows() != mu.cols() || rank_of(mu, f) != mu.rows() || ctx.dim(n) != mu.cols()) {
      bij = false;
      out.report.fail("comparison bijective", {n}, "fails in degree " + std::to_string(n));
    }
  }
  out.report.add("comparison bijective", bij);

  bool inter = true;
  for (Index n = 0; n < N; ++n) {
    if (!mats_equal(Mat(out.mu[static_cast<size_t>(n + 1)] * ctx.d(n)),
                    Mat(out.d[static_cast<size_t>(n)] * out.mu[static_cast<size_t>(n)]))) {
      inter = false;
      out.report.fail("comparison intertwines d", {n}, "fails in degree " + std::to_string(n));
    }
  }
  out.report.add("comparison intertwines d", inter);
  return out;
}

ThetaResult theta_iso(const SweedlerData& sd, const AmitsurContext& ctx,
                      const ReducedContext& rc, const UniversalForms& u) {
  const Field& f = u.R.field;
  const Index dr = u.R.dim();
  const Index q = u.rs.space.dim;
  CORINGLAB_REQUIRE(ctx.max_degree() == u.max_degree && rc.max_degree == u.max_degree,
                    "comparison: the graded contexts disagree on max degree");
  const Index N = u.max_degree;
  SweedlerOracle so = sweedler_oracle(sd, ctx);

  ThetaResult out;
  out.report.subject = "relative forms comparison for " + sd.coring.name;

  std::vector<Mat> theta_amb(static_cast<size_t>(N) + 1);
  bool wd = true;
  for (Index n = 0; n <= N; ++n) {
    Mat pis = kron(eye(dr, f), kronpow(u.rs.projection, n, f));
    theta_amb[static_cast<size_t>(n)] = u.full_proj(n) * pis;
    if (!kills_kernel(theta_amb[static_cast<size_t>(n)],
                      so.tower->full_proj(static_cast<int>(n)),
                      so.tower->full_section(static_cast<int>(n)))) {
      wd = false;
      out.report.fail("well defined", {n}, "descent fails in degree " + std::to_string(n));
    }
    out.theta.push_back(theta_amb[static_cast<size_t>(n)] *
                        so.tower->full_section(static_cast<int>(n)) *
                        so.mu[static_cast<size_t>(n)] * rc.basis[static_cast<size_t>(n)]);
  }
  out.report.add("well defined", wd);

  bool bij = true;
  for (Index n = 0; n <= N; ++n) {
    const Mat& th = out.theta[static_cast<size_t>(n)];
    if (th.rows() != th.cols() || rank_of(th, f) != th.rows()) {
      bij = false;
      out.report.fail("bijective", {n}, "fails in degree " + std::to_string(n));
    }
  }
  out.report.add("bijective", bij);

  bool dcomm = true;
  for (Index n = 0; n < N; ++n) {
    if (!mats_equal(Mat(out.theta[static_cast<size_t>(n + 1)] * rc.d[static_cast<size_t>(n)]),
                    Mat(u.d[static_cast<size_t>(n)] * out.theta[static_cast<size_t>(n)]))) {
      dcomm = false;
      out.report.fail("commutes with d", {n}, "fails in degree " + std::to_string(n));
    }
  }
  out.report.add("commutes with d", dcomm);

  Mat onecol = as_col(u.R.one());
  bool kills = true;
  for (Index n = 0; n < N && kills; ++n) {
    for (Index i = 1; i <= n + 1 && kills; ++i) {
      Mat ins = kron(eye(ipow(dr, i), f), kron(onecol, eye(ipow(dr, n + 1 - i), f)));
      Mat desc = so.tower->full_proj(static_cast<int>(n + 1)) * ins *
                 so.tower->full_section(static_cast<int>(n));
      Mat whole = theta_amb[static_cast<size_t>(n + 1)] *
                  so.tower->full_section(static_cast<int>(n + 1)) * desc;
      if (!is_zero_mat(whole)) {
        kills = false;
        out.report.fail("kills interior unit insertions", {n, i},
                        "insertion " + std::to_string(i) + " survives in degree " +
                            std::to_string(n));
      }
    }
  }
  out.report.add("kills interior unit insertions", kills);

  bool multi = true;
  for (Index m = 0; m <= N && multi; ++m) {
    for (Index n = 0; m + n <= N && multi; ++n) {
      for (Index x = 0; x < rc.dim(m) && multi; ++x) {
        GradedElement xe{m, unit_vec(rc.dim(m), x)};
        GradedElement tx{m, Vec(out.theta[static_cast<size_t>(m)] * xe.coords)};
        for (Index y = 0; y < rc.dim(n) && multi; ++y) {
          GradedElement ye{n, unit_vec(rc.dim(n), y)};
          GradedElement ty{n, Vec(out.theta[static_cast<size_t>(n)] * ye.coords)};
          Vec lhs = out.theta[static_cast<size_t>(m + n)] *
                    reduced_product(ctx, rc, xe, ye).coords;
          Vec rhs = u.product(tx, ty).coords;
          if (!mats_equal(Mat(lhs), Mat(rhs))) {
            multi = false;
            out.report.fail("multiplicative", {m, n, x, y},
                            "fails on basis pair in degrees " + std::to_string(m) + "," +
                                std::to_string(n));
          }
        }
      }
    }
  }
  out.report.add("multiplicative", multi);

  // In degree one the inverse has a closed form: r (x) class(r') goes to
  // r (x) r' - r.r' (x) 1, independently of the chosen section.
  bool inv_ok = true;
  if (N >= 1 && rc.dim(1) == u.dim(1)) {
    Mat b = Mat::Constant(rc.dim(1), dr * q, f.zero());
    for (Index j0 = 0; j0 < dr && inv_ok; ++j0) {
      for (Index m = 0; m < q && inv_ok; ++m) {
        Vec sig = u.rs.lift(unit_vec(q, m));
        Vec val = sd.RsR.pure(u.R.element(j0), sig) -
                  sd.RsR.pure(u.R.multiply(u.R.element(j0), sig), u.R.one());
        auto red = solve(rc.basis[1], val, f);
        if (!red.has_value()) {
          inv_ok = false;
          out.report.fail("degree one inverse", {j0, m}, "image is not reduced");
        } else {
          b.col(j0 * q + m) = *red;
        }
      }
    }
    if (inv_ok) {
      Mat inv1 = b * u.full_section(1);
      inv_ok = mats_equal(Mat(inv1 * out.theta[1]), eye(rc.dim(1), f)) &&
               mats_equal(Mat(out.theta[1] * inv1), eye(u.dim(1), f));
      if (!inv_ok) {
        out.report.fail("degree one inverse", {}, "closed form is not a two-sided inverse");
      }
    }
  } else if (N >= 1) {
    inv_ok = false;
    out.report.fail("degree one inverse", {}, "degree one dimensions differ");
  }
  out.report.add("degree one inverse", inv_ok);
  return out;
}

EntwiningOracle entwining_oracle(const EntwiningData& e, const Coring& ct, const Mat& rho_a,
                                 const AmitsurContext& ctx) {
  const Field& f = e.A.field;
  const Index da = e.A.dim();
  const Index dc0 = e.Cspace.dim;
  CORINGLAB_REQUIRE(ct.dim() == da * dc0, "entwined model: coring dimension mismatch");
  CORINGLAB_REQUIRE(rho_a.rows() == da * dc0 && rho_a.cols() == da,
                    "entwined model: coaction has the wrong shape");
  const Index N = ctx.max_degree();
  Vec gvec = rho_a * e.A.one();
  CORINGLAB_REQUIRE(mats_equal(as_col(gvec), as_col(ctx.grouplike())),
                    "entwined model: context grouplike is not the coaction of the unit");

  EntwiningOracle out;
  out.report.subject = "entwined complex model for " + ct.name;

  out.psi_n.push_back(eye(da, f));
  if (N >= 1) out.psi_n.push_back(promote_mat(e.psi, f));
  for (Index n = 2; n <= N; ++n) {
    out.psi_n.push_back(Mat(kron(e.psi, eye(ipow(dc0, n - 1), f)) *
                            kron(eye(dc0, f), out.psi_n[static_cast<size_t>(n - 1)])));
  }

  bool chain_ok = true;
  for (Index n = 1; n <= N; ++n) {
    Mat direct = eye(ipow(dc0, n) * da, f);
    for (Index j = n - 1; j >= 0; --j) {
      direct = Mat(kron(eye(ipow(dc0, j), f), kron(e.psi, eye(ipow(dc0, n - 1 - j), f))) * direct);
    }
    if (!mats_equal(out.psi_n[static_cast<size_t>(n)], direct)) {
      chain_ok = false;
      out.report.fail("iterated entwining agrees", {n}, "fails in degree " + std::to_string(n));
    }
  }
  out.report.add("iterated entwining agrees", chain_ok);

  Mat ucol = kron(as_col(e.A.one()), eye(dc0, f));
  std::vector<Mat> phi(static_cast<size_t>(N) + 1);
  if (N >= 1) phi[1] = eye(da * dc0, f);
  for (Index n = 2; n <= N; ++n) {
    Mat fk = Mat(kron(e.A.mult, eye(ipow(dc0, n), f)) *
                 kron(eye(da, f), kron(out.psi_n[static_cast<size_t>(n - 1)], eye(dc0, f))));
    phi[static_cast<size_t>(n)] = Mat(fk * kron(phi[static_cast<size_t>(n - 1)], eye(da * dc0, f)));
  }

  out.nu.push_back(eye(da, f));
  out.nu_inv.push_back(eye(da, f));
  for (Index n = 1; n <= N; ++n) {
    Mat ins = kron(eye(da * dc0, f), kronpow(ucol, n - 1, f));
    out.nu.push_back(Mat(ctx.full_proj(n) * ins));
    out.nu_inv.push_back(Mat(phi[static_cast<size_t>(n)] * ctx.full_section(n)));
  }

  bool round = true;
  bool collapse_wd = true;
  for (Index n = 0; n <= N; ++n) {
    const Mat& nu = out.nu[static_cast<size_t>(n)];
    const Mat& nu_inv = out.nu_inv[static_cast<size_t>(n)];
    if (!mats_equal(Mat(nu_inv * nu), eye(da * ipow(dc0, n), f)) ||
        !mats_equal(Mat(nu * nu_inv), eye(ctx.dim(n), f))) {
      round = false;
      out.report.fail("model identification", {n}, "round trip fails in degree " + std::to_string(n));
    }
    if (n >= 1 &&
        !kills_kernel(phi[static_cast<size_t>(n)], ctx.full_proj(n), ctx.full_section(n))) {
      collapse_wd = false;
      out.report.fail("collapse well defined", {n}, "fails in degree " + std::to_string(n));
    }
  }
  out.report.add("model identification", round);
  out.report.add("collapse well defined", collapse_wd);

  bool dmatch = true;
  for (Index n = 0; n < N; ++n) {
    Mat dh = Mat(kron(rho_a, eye(ipow(dc0, n), f)));
    for (Index i = 1; i <= n; ++i) {
      Mat mid = kron(eye(da * ipow(dc0, i - 1), f), kron(e.delta0, eye(ipow(dc0, n - i), f)));
      if (i % 2 == 1) {
        dh -= mid;
      } else {
        dh += mid;
      }
    }
    Mat w = Mat::Constant(da * ipow(dc0, n + 1), ipow(dc0, n), f.zero());
    for (Index mbar = 0; mbar < ipow(dc0, n); ++mbar) {
      for (Index beta = 0; beta < da * dc0; ++beta) {
        if (gvec(beta).is_zero()) continue;
        const Index ba = beta / dc0;
        const Index bc = beta % dc0;
        Vec core = (n == 0) ? unit_vec(da, ba)
                            : Vec(out.psi_n[static_cast<size_t>(n)] *
                                  kron_vec(unit_vec(ipow(dc0, n), mbar), unit_vec(da, ba)));
        w.col(mbar) += gvec(beta) * kron_vec(core, unit_vec(dc0, bc));
      }
    }
    for (Index i = 0; i < da; ++i) {
      Mat lm = kron(e.A.left_mult(e.A.element(i)), eye(ipow(dc0, n + 1), f));
      for (Index mbar = 0; mbar < ipow(dc0, n); ++mbar) {
        if (n % 2 == 0) {
          dh.col(i * ipow(dc0, n) + mbar) -= lm * w.col(mbar);
        } else {
          dh.col(i * ipow(dc0, n) + mbar) += lm * w.col(mbar);
        }
      }
    }
    out.d_hat.push_back(dh);
    if (!mats_equal(Mat(out.nu_inv[static_cast<size_t>(n + 1)] * ctx.d(n) *
                        out.nu[static_cast<size_t>(n)]),
                    dh)) {
      dmatch = false;
      out.report.fail("differential matches", {n}, "fails in degree " + std::to_string(n));
    }
  }
  out.report.add("differential matches", dmatch);

  bool pmatch = true;
  for (Index m = 0; m <= N && pmatch; ++m) {
    for (Index n = 0; m + n <= N && pmatch; ++n) {
      for (Index xm = 0; xm < da * ipow(dc0, m) && pmatch; ++xm) {
        const Index i = xm / ipow(dc0, m);
        const Index mbar = xm % ipow(dc0, m);
        Mat lm = kron(e.A.left_mult(e.A.element(i)), eye(ipow(dc0, m), f));
        for (Index yn = 0; yn < da * ipow(dc0, n) && pmatch; ++yn) {
          const Index ip = yn / ipow(dc0, n);
          const Index mbarp = yn % ipow(dc0, n);
          Vec za = (m == 0) ? unit_vec(da, ip)
                            : Vec(out.psi_n[static_cast<size_t>(m)] *
                                  kron_vec(unit_vec(ipow(dc0, m), mbar), unit_vec(da, ip)));
          Vec model = kron_vec(Vec(lm * za), unit_vec(ipow(dc0, n), mbarp));
          GradedElement gx{m, Vec(out.nu[static_cast<size_t>(m)] * unit_vec(da * ipow(dc0, m), xm))};
          GradedElement gy{n, Vec(out.nu[static_cast<size_t>(n)] * unit_vec(da * ipow(dc0, n), yn))};
          Vec back = out.nu_inv[static_cast<size_t>(m + n)] * ctx.product(gx, gy).coords;
          if (!mats_equal(Mat(model), Mat(back))) {
            pmatch = false;
            out.report.fail("product matches", {m, n, xm, yn},
                            "fails on basis pair in degrees " + std::to_string(m) + "," +
                                std::to_string(n));
          }
        }
      }
    }
  }
  out.report.add("product matches", pmatch);
  return out;
}

DgCoring coring_from_dg(const DgInput& in) {
  const Algebra& R = in.R;
  const Field& f = R.field;
  const Index dr = R.dim();
  const Index dw = in.omega1.dim();
  CORINGLAB_REQUIRE(in.d0.rows() == dw && in.d0.cols() == dr,
                    "differential data: d has the wrong shape in degree zero");
  CORINGLAB_REQUIRE(in.d1_lift.rows() == dw * dw && in.d1_lift.cols() == dw,
                    "differential data: d has the wrong shape in degree one");
  CORINGLAB_REQUIRE(in.omega1.left_algebra.same_structure(R) &&
                        in.omega1.right_algebra.same_structure(R),
                    "differential data: the form module is not an (R,R)-bimodule");

  CheckReport pre;
  pre.subject = "differential data over " + R.name;
  merge_report(pre, check_bimodule(in.omega1), "bimodule: ");

  bool der = true;
  for (Index i = 0; i < dr && der; ++i) {
    for (Index j = 0; j < dr && der; ++j) {
      Vec lhs = in.d0 * R.multiply(R.element(i), R.element(j));
      Vec rhs = in.omega1.act_right(Vec(in.d0.col(i)), R.element(j)) +
                in.omega1.act_left(R.element(i), Vec(in.d0.col(j)));
      if (!mats_equal(Mat(lhs), Mat(rhs))) {
        der = false;
        pre.fail("derivation rule", {i, j}, "fails on a basis pair");
      }
    }
  }
  pre.add("derivation rule", der);

  Tower to(in.omega1, in.omega1, 2);
  Mat d1 = to.full_proj(1) * in.d1_lift;
  const Bimodule& oo = to.level(1);

  bool lleib = true;
  bool rleib = true;
  for (Index i = 0; i < dr; ++i) {
    for (Index w = 0; w < dw; ++w) {
      Vec ew = unit_vec(dw, w);
      if (lleib) {
        Vec lhs = d1 * in.omega1.act_left(R.element(i), ew);
        Vec rhs = to.full_proj(1) * kron_vec(Vec(in.d0.col(i)), ew) +
                  oo.act_left(R.element(i), Vec(d1 * ew));
        if (!mats_equal(Mat(lhs), Mat(rhs))) {
          lleib = false;
          pre.fail("left Leibniz rule", {i, w}, "fails on a basis pair");
        }
      }
      if (rleib) {
        Vec lhs = d1 * in.omega1.act_right(ew, R.element(i));
        Vec rhs = oo.act_right(Vec(d1 * ew), R.element(i)) -
                  to.full_proj(1) * kron_vec(ew, Vec(in.d0.col(i)));
        if (!mats_equal(Mat(lhs), Mat(rhs))) {
          rleib = false;
          pre.fail("right Leibniz rule", {i, w}, "fails on a basis pair");
        }
      }
    }
  }
  pre.add("left Leibniz rule", lleib);
  pre.add("right Leibniz rule", rleib);

  Mat obstruction = kron(in.d1_lift, eye(dw, f)) - kron(eye(dw, f), in.d1_lift);
  Mat obs_top = to.full_proj(2) * obstruction;
  const bool owd = kills_kernel(obs_top, to.full_proj(1), to.full_section(1));
  pre.add("obstruction well defined", owd);
  if (owd) {
    Mat obar = obs_top * to.full_section(1);
    const bool oz = is_zero_mat(obar * d1);
    pre.add("obstruction vanishes", oz);
    if (!oz) pre.fail("obstruction vanishes", {}, "(d (x) 1 - 1 (x) d) . d is nonzero");
  } else {
    pre.add("obstruction vanishes", false);
  }

  if (!pre.ok()) {
    std::string msg = "differential data rejected:";
    for (const auto& [name, pass] : pre.results) {
      if (!pass) msg += " [" + name + "]";
    }
    throw Error(msg);
  }

  const Index dC = dr + dw;
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(dC));
  for (Index i = 0; i < dr; ++i) labels.push_back(R.space.label(i) + ".g");
  for (Index w = 0; w < dw; ++w) labels.push_back(in.omega1.space.label(w));
  FinSpace cs = FinSpace::make(f, dC, labels);

  auto embed_r = [&](const Vec& r) {
    Vec v = Vec::Constant(dC, f.zero());
    for (Index i = 0; i < dr; ++i) v(i) = r(i);
    return v;
  };
  auto embed_w = [&](const Vec& w) {
    Vec v = Vec::Constant(dC, f.zero());
    for (Index i = 0; i < dw; ++i) v(dr + i) = w(i);
    return v;
  };

  Mat left = Mat::Constant(dC, dr * dC, f.zero());
  Mat right = Mat::Constant(dC, dC * dr, f.zero());
  for (Index i = 0; i < dr; ++i) {
    for (Index j = 0; j < dC; ++j) {
      if (j < dr) {
        left.col(i * dC + j) = embed_r(R.multiply(R.element(i), R.element(j)));
      } else {
        left.col(i * dC + j) = embed_w(in.omega1.act_left(R.element(i), unit_vec(dw, j - dr)));
      }
    }
  }
  for (Index j = 0; j < dC; ++j) {
    for (Index i = 0; i < dr; ++i) {
      if (j < dr) {
        right.col(j * dr + i) = embed_r(R.multiply(R.element(j), R.element(i))) +
                                embed_w(in.omega1.act_left(R.element(j), Vec(in.d0.col(i))));
      } else {
        right.col(j * dr + i) = embed_w(in.omega1.act_right(unit_vec(dw, j - dr), R.element(i)));
      }
    }
  }

  Mat counit = Mat::Constant(dr, dC, f.zero());
  for (Index i = 0; i < dr; ++i) counit(i, i) = f.one();

  Vec gvec = embed_r(R.one());
  Mat delta_lift = Mat::Constant(dC * dC, dC, f.zero());
  for (Index j = 0; j < dC; ++j) {
    if (j < dr) {
      delta_lift.col(j) = kron_vec(embed_r(R.element(j)), gvec);
    } else {
      Vec ew = embed_w(unit_vec(dw, j - dr));
      Vec col = kron_vec(gvec, ew) + kron_vec(ew, gvec);
      for (Index t = 0; t < dw * dw; ++t) {
        if (in.d1_lift(t, j - dr).is_zero()) continue;
        col -= in.d1_lift(t, j - dr) *
               kron_vec(embed_w(unit_vec(dw, t / dw)), embed_w(unit_vec(dw, t % dw)));
      }
      delta_lift.col(j) = col;
    }
  }

  DgCoring out;
  out.g = gvec;
  out.report = pre;
  Bimodule cb = Bimodule::make("forms over " + R.name, cs, R, R, left, right);
  out.coring = Coring::make("dg(" + R.name + ")", R, cb, delta_lift, counit);
  merge_report(out.report, check_coring_axioms(out.coring), "coring: ");
  GrouplikeInfo gi = verify_grouplike(out.coring, out.g);
  merge_report(out.report, gi.report, "grouplike: ");

  Mat kd0 = kernel_matrix(in.d0, f);
  std::vector<Vec> cent = centralizer(R, out.coring.C, out.g);
  bool coinv = static_cast<Index>(cent.size()) == kd0.cols();
  if (coinv) {
    Mat cmat = Mat::Constant(dr, static_cast<Index>(cent.size()), f.zero());
    for (Index k = 0; k < static_cast<Index>(cent.size()); ++k) {
      cmat.col(k) = cent[static_cast<size_t>(k)];
    }
    for (Index k = 0; k < kd0.cols() && coinv; ++k) {
      coinv = in_span(cmat, Vec(kd0.col(k)), f);
    }
  }
  out.report.add("coinvariants are the kernel of d", coinv);
  return out;
}

CheckReport verify_structure_theorem(const Coring& c, const Vec& g) {
  const Field& f = c.R.field;
  GrouplikeInfo gi = verify_grouplike(c, g);
  if (!gi.grouplike) throw Error("reconstruction requires a grouplike element");
  AmitsurContext ctx(c, g, 2);
  ReducedContext rc = reduced_context(ctx);
  CheckReport rep;
  rep.subject = "dg reconstruction of " + c.name;
  const Index dr = c.R.dim();
  const Index dc = c.dim();
  const Mat& K = rc.basis[1];
  const Index kd = K.cols();

  Mat left = Mat::Constant(kd, dr * kd, f.zero());
  Mat right = Mat::Constant(kd, kd * dr, f.zero());
  for (Index i = 0; i < dr; ++i) {
    for (Index w = 0; w < kd; ++w) {
      auto lsol = solve(K, c.C.act_left(c.R.element(i), Vec(K.col(w))), f);
      auto rsol = solve(K, c.C.act_right(Vec(K.col(w)), c.R.element(i)), f);
      CORINGLAB_REQUIRE(lsol.has_value() && rsol.has_value(),
                        "kernel of the counit is not closed under the actions");
      left.col(i * kd + w) = *lsol;
      right.col(w * dr + i) = *rsol;
    }
  }
  Bimodule kb = Bimodule::make("counit kernel", FinSpace::make(f, kd), c.R, c.R, left, right);

  BalancedTensor kk = tensor_over_R(kb, kb);
  Mat tau = Mat::Constant(rc.dim(2), kd * kd, f.zero());
  for (Index v = 0; v < kd; ++v) {
    for (Index w = 0; w < kd; ++w) {
      Vec up = ctx.full_proj(2) * kron_vec(Vec(K.col(v)), Vec(K.col(w)));
      auto red = solve(rc.basis[2], up, f);
      CORINGLAB_REQUIRE(red.has_value(), "kernel square does not land in the reduced subspace");
      tau.col(v * kd + w) = *red;
    }
  }
  rep.add("square embedding well defined", is_zero_mat(tau * kk.q.relations));
  Mat iota = tau * kk.q.section;
  const bool bij = kk.result.dim() == rc.dim(2) && rank_of(iota, f) == rc.dim(2);
  rep.add("square embedding bijective", bij);
  if (!rep.ok()) return rep;

  auto iota_inv = solve_many(iota, eye(rc.dim(2), f), f);
  CORINGLAB_REQUIRE(iota_inv.has_value(), "full-rank square map must be invertible");
  Mat d1_lift = kk.q.section * (*iota_inv * rc.d[1]);

  DgCoring dg = coring_from_dg(DgInput{c.R, kb, rc.d[0], d1_lift});
  merge_report(rep, dg.report, "rebuilt: ");

  Mat iso = Mat::Constant(dc, dr + kd, f.zero());
  for (Index i = 0; i < dr; ++i) iso.col(i) = c.C.act_left(c.R.element(i), g);
  for (Index w = 0; w < kd; ++w) iso.col(dr + w) = K.col(w);
  merge_report(rep, check_coring_map(dg.coring, c, iso), "isomorphism: ");
  rep.add("isomorphism bijective", dc == dr + kd && rank_of(iso, f) == dc);
  rep.add("grouplike matches", mats_equal(Mat(iso * dg.g), as_col(g)));
  return rep;
}

}  // namespace coringlab

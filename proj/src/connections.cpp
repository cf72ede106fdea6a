#include "coringlab/connections.hpp"

#include <string>
#include <utility>
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

Mat eye(Index n, const Field& f) { return promote_mat(identity(n), f); }

// Whether m kills ker(proj), given a section with proj * sec == id; uses
// that I - sec*proj projects onto the kernel, avoiding any elimination.
bool kills_kernel(const Mat& m, const Mat& proj, const Mat& sec) {
  return is_zero_mat(Mat(m - (m * sec) * proj));
}

// Column j of the matrix of x -> x.r in a bimodule-layout action table.
Mat op_from_action(const Mat& action, Index dim, const Vec& r, const Field& f) {
  const Index dr = r.size();
  Mat out = Mat::Constant(dim, dim, f.zero());
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dr; ++i) {
      if (r(i) == f.zero()) continue;
      out.col(j) += r(i) * action.col(j * dr + i);
    }
  }
  return out;
}

// Coordinate change between two quotients of the same ambient space with the
// same kernel; verified to be a two-sided inverse pair.
Mat reconcile(const QuotientSpace& from, const Mat& to_proj, const Mat& to_sec,
              const std::string& what) {
  const Mat fwd = Mat(to_proj * from.section);
  const Mat bwd = Mat(from.projection * to_sec);
  CORINGLAB_REQUIRE(is_zero_mat(Mat(fwd * bwd - eye(to_proj.rows(), from.ambient.field))) &&
                        is_zero_mat(Mat(bwd * fwd - eye(from.space.dim, from.ambient.field))),
                    what + ": tensor coordinates disagree");
  return fwd;
}

std::optional<Connection> exists_for(const AmitsurContext& ctx, const ReducedContext& rc,
                                     const ModuleForms& forms) {
  const auto j = has_retraction(forms.tower.level(1), forms.M, forms.counit_map);
  if (!j.has_value()) return std::nullopt;
  return connection_from_section(ctx, rc, forms, *j);
}

std::string degree_tag(Index n) { return "^" + std::to_string(n); }

}  // namespace

Index ModuleForms::dim(Index k) const {
  if (k == 0) return M.dim();
  return basis[static_cast<size_t>(k)].cols();
}

Mat ModuleForms::right_op(Index k, const Vec& r) const {
  return op_from_action(right_action[static_cast<size_t>(k)], dim(k), r, M.field);
}

ModuleForms module_forms(const AmitsurContext& ctx, const ReducedContext& rc, const Bimodule& m) {
  const Coring& c = ctx.coring();
  CORINGLAB_REQUIRE(m.right_algebra.same_structure(c.R),
                    "module_forms: the module is not a right module over the base ring");
  const Field& f = m.field;
  const Index dm = m.dim();
  const Index dr = c.R.dim();
  const Index dc = c.dim();
  const Index n = rc.max_degree;

  ModuleForms out;
  out.M = m;
  out.max_degree = n;
  out.tower = Tower(m, c.C, static_cast<int>(n));
  out.d0 = rc.d[0];

  // degree 0: M (x)_R Omega^0 = M itself, reached from plain M (x) R coords
  out.basis.push_back(eye(dm, f));
  out.proj.push_back(m.right_action);
  Mat s0 = Mat::Constant(dm * dr, dm, f.zero());
  for (Index i = 0; i < dm; ++i) s0.col(i) = kron_vec(unit_vec(dm, i), c.R.one());
  out.sec.push_back(std::move(s0));
  out.right_action.push_back(m.right_action);

  for (Index k = 1; k <= n; ++k) {
    const Mat embed = Mat(ctx.full_section(k) * rc.basis[static_cast<size_t>(k)]);
    const Mat into = Mat(out.tower.full_proj(static_cast<int>(k)) * kron(eye(dm, f), embed));
    Mat wb = image_basis(into, f);
    const Index w = wb.cols();
    auto pk = solve_many(wb, into, f);
    CORINGLAB_REQUIRE(pk.has_value(), "module_forms: form coordinates failed at degree " +
                                          std::to_string(k));
    auto sk = solve_many(*pk, eye(w, f), f);
    CORINGLAB_REQUIRE(sk.has_value(),
                      "module_forms: no section at degree " + std::to_string(k));

    Mat act = Mat::Constant(w, w * dr, f.zero());
    for (Index i = 0; i < dr; ++i) {
      const Mat lvl = out.tower.level(static_cast<int>(k)).right_op(c.R.element(i));
      auto wi = solve_many(wb, Mat(lvl * wb), f);
      CORINGLAB_REQUIRE(wi.has_value(),
                        "module_forms: forms are not stable under the right action at degree " +
                            std::to_string(k));
      for (Index j = 0; j < w; ++j) act.col(j * dr + i) = wi->col(j);
    }

    out.basis.push_back(std::move(wb));
    out.proj.push_back(std::move(*pk));
    out.sec.push_back(std::move(*sk));
    out.right_action.push_back(std::move(act));
  }

  Mat eamb = Mat::Constant(dm, dm * dc, f.zero());
  for (Index i = 0; i < dm; ++i) {
    for (Index j = 0; j < dc; ++j) {
      eamb.col(i * dc + j) = m.act_right(m.element(i), Vec(c.counit.col(j)));
    }
  }
  CORINGLAB_REQUIRE(kills_kernel(eamb, out.tower.full_proj(1), out.tower.full_section(1)),
                    "module_forms: the counit does not descend to M (x)_R C");
  out.counit_map = Mat(eamb * out.tower.full_section(1));

  Mat pg = Mat::Constant(out.tower.dim(1), dm, f.zero());
  for (Index i = 0; i < dm; ++i) {
    pg.col(i) = out.tower.full_proj(1) * kron_vec(unit_vec(dm, i), ctx.grouplike());
  }
  out.pure_g = std::move(pg);
  return out;
}

Connection make_connection(ModuleForms forms, Mat nabla) {
  if (nabla.rows() != forms.dim(1) || nabla.cols() != forms.M.dim()) {
    throw ShapeError("make_connection: nabla must be dim(M (x) Omega^1) x dim(M)");
  }
  Mat nb = promote_mat(nabla, forms.M.field);
  return Connection{std::move(forms), std::move(nb)};
}

CheckReport check_connection(const Connection& cn) {
  const ModuleForms& fo = cn.forms;
  const Algebra& r = fo.M.right_algebra;
  const Field& f = fo.M.field;
  const Index dm = fo.M.dim();

  CheckReport rep;
  rep.subject = "connection on " + fo.M.name;
  bool ok = true;
  for (Index jr = 0; jr < r.dim(); ++jr) {
    const Vec a = r.element(jr);
    const Mat lhs = Mat(cn.nabla * fo.M.right_op(a));
    Mat tail = Mat::Constant(fo.dim(1), dm, f.zero());
    for (Index i = 0; i < dm; ++i) {
      tail.col(i) = fo.proj[1] * kron_vec(unit_vec(dm, i), Vec(fo.d0.col(jr)));
    }
    const Mat rhs = Mat(fo.right_op(1, a) * cn.nabla + tail);
    for (Index i = 0; i < dm; ++i) {
      if (!mats_equal(Mat(lhs.col(i)), Mat(rhs.col(i)))) {
        ok = false;
        rep.fail("Leibniz rule", {i, jr},
                 "fails on (" + fo.M.space.label(i) + ", " + r.space.label(jr) + ")");
      }
    }
  }
  rep.add("Leibniz rule", ok);
  return rep;
}

Mat extension_matrix(const AmitsurContext& ctx, const ReducedContext& rc, const Connection& cn,
                     Index k) {
  const ModuleForms& fo = cn.forms;
  if (k < 0 || k + 1 > fo.max_degree || k + 1 > ctx.max_degree()) {
    throw Error("extension_matrix: degree overflow at " + std::to_string(k));
  }
  if (k == 0) return cn.nabla;

  const Field& f = fo.M.field;
  const Index dm = fo.M.dim();
  const Index dc = ctx.coring().dim();
  const Index qk = rc.dim(k);
  const Index amb = ipow(dc, k + 1);

  Mat prodamb = Mat::Constant(amb, dc * qk, f.zero());
  for (Index q = 0; q < dc; ++q) {
    for (Index a = 0; a < qk; ++a) {
      const GradedElement x{1, unit_vec(dc, q)};
      const GradedElement y{k, Vec(rc.basis[static_cast<size_t>(k)].col(a))};
      prodamb.col(q * qk + a) = ctx.full_section(k + 1) * ctx.product(x, y).coords;
    }
  }
  const Mat dcol = Mat(ctx.full_section(k + 1) * rc.basis[static_cast<size_t>(k + 1)] *
                       rc.d[static_cast<size_t>(k)]);
  const Mat lifts = Mat(fo.tower.full_section(1) * fo.basis[1] * cn.nabla);
  const Mat fpk1 = fo.tower.full_proj(static_cast<int>(k + 1));

  Mat extamb = Mat::Constant(fo.tower.dim(static_cast<int>(k + 1)), dm * qk, f.zero());
  for (Index i = 0; i < dm; ++i) {
    for (Index a = 0; a < qk; ++a) {
      Vec w = Vec::Constant(dm * amb, f.zero());
      for (Index p = 0; p < dm; ++p) {
        for (Index q = 0; q < dc; ++q) {
          const Scalar lam = lifts(p * dc + q, i);
          if (lam == f.zero()) continue;
          w.segment(p * amb, amb) += lam * prodamb.col(q * qk + a);
        }
      }
      w.segment(i * amb, amb) += dcol.col(a);
      extamb.col(i * qk + a) = fpk1 * w;
    }
  }
  CORINGLAB_REQUIRE(
      kills_kernel(extamb, fo.proj[static_cast<size_t>(k)], fo.sec[static_cast<size_t>(k)]),
      "extension_matrix: the Leibniz formula does not descend at degree " + std::to_string(k));
  const auto res =
      solve_many(fo.basis[static_cast<size_t>(k + 1)], Mat(extamb * fo.sec[static_cast<size_t>(k)]), f);
  CORINGLAB_REQUIRE(res.has_value(), "extension_matrix: values leave the reduced forms at degree " +
                                         std::to_string(k));
  return *res;
}

GradedElement extend_connection(const AmitsurContext& ctx, const ReducedContext& rc,
                                const Connection& cn, const GradedElement& x) {
  if (x.coords.size() != cn.forms.dim(x.degree)) {
    throw ShapeError("extend_connection: element has the wrong dimension for degree " +
                     std::to_string(x.degree));
  }
  const Mat ext = extension_matrix(ctx, rc, cn, x.degree);
  return GradedElement{x.degree + 1, Vec(ext * x.coords)};
}

CurvatureValue curvature(const AmitsurContext& ctx, const ReducedContext& rc,
                         const Connection& cn) {
  const ModuleForms& fo = cn.forms;
  const Algebra& r = fo.M.right_algebra;
  CurvatureValue out;
  out.matrix = Mat(extension_matrix(ctx, rc, cn, 1) * cn.nabla);
  out.report.subject = "curvature on " + fo.M.name;
  bool lin = true;
  for (Index jr = 0; jr < r.dim(); ++jr) {
    const Vec a = r.element(jr);
    const Mat lhs = Mat(out.matrix * fo.M.right_op(a));
    const Mat rhs = Mat(fo.right_op(2, a) * out.matrix);
    for (Index i = 0; i < fo.M.dim(); ++i) {
      if (!mats_equal(Mat(lhs.col(i)), Mat(rhs.col(i)))) {
        lin = false;
        out.report.fail("right linear", {i, jr},
                        "fails on (" + fo.M.space.label(i) + ", " + r.space.label(jr) + ")");
      }
    }
  }
  out.report.add("right linear", lin);
  return out;
}

bool is_flat(const AmitsurContext& ctx, const ReducedContext& rc, const Connection& cn) {
  return is_zero_mat(curvature(ctx, rc, cn).matrix);
}

Connection connection_from_section(const AmitsurContext& ctx, const ReducedContext& rc,
                                   ModuleForms forms, const Mat& j) {
  (void)ctx;
  (void)rc;
  const Field& f = forms.M.field;
  if (j.rows() != forms.tower.dim(1) || j.cols() != forms.M.dim()) {
    throw ShapeError("connection_from_section: section must be dim(M (x) C) x dim(M)");
  }
  const Mat jj = promote_mat(j, f);
  const Algebra& r = forms.M.right_algebra;
  for (Index i = 0; i < r.dim(); ++i) {
    const Vec a = r.element(i);
    if (!mats_equal(Mat(jj * forms.M.right_op(a)),
                    Mat(forms.tower.level(1).right_op(a) * jj))) {
      throw Error("connection_from_section: the map is not right R-linear");
    }
  }
  if (!mats_equal(Mat(forms.counit_map * jj), eye(forms.M.dim(), f))) {
    throw Error("connection_from_section: the map is not a section of the counit");
  }
  const auto nb = solve_many(forms.basis[1], Mat(jj - forms.pure_g), f);
  CORINGLAB_REQUIRE(nb.has_value(),
                    "connection_from_section: values do not lie in M (x) ker eps");
  return Connection{std::move(forms), *nb};
}

Mat section_from_connection(const Connection& cn) {
  return Mat(cn.forms.basis[1] * cn.nabla + cn.forms.pure_g);
}

std::optional<Connection> connection_exists(const AmitsurContext& ctx, const ReducedContext& rc,
                                            const Bimodule& m) {
  return exists_for(ctx, rc, module_forms(ctx, rc, m));
}

std::optional<Connection> nonflat_connection(const AmitsurContext& ctx, const ReducedContext& rc,
                                             const Bimodule& m) {
  const ModuleForms forms = module_forms(ctx, rc, m);
  const Field& f = m.field;
  const Index dm = m.dim();
  const auto base = has_retraction(forms.tower.level(1), m, forms.counit_map);
  if (!base.has_value()) return std::nullopt;

  Connection base_con = connection_from_section(ctx, rc, forms, *base);
  if (!is_flat(ctx, rc, base_con)) return base_con;

  const std::vector<Mat> homs = module_hom_space(m, forms.tower.level(1));
  Mat constraint = Mat::Constant(dm * dm, static_cast<Index>(homs.size()), f.zero());
  for (size_t h = 0; h < homs.size(); ++h) {
    const Mat img = Mat(forms.counit_map * homs[h]);
    for (Index ccol = 0; ccol < dm; ++ccol) {
      for (Index row = 0; row < dm; ++row) constraint(ccol * dm + row, static_cast<Index>(h)) = img(row, ccol);
    }
  }
  const Mat coeffs = kernel_matrix(constraint, f);
  std::vector<Mat> dirs;
  for (Index k = 0; k < coeffs.cols(); ++k) {
    Mat delta = Mat::Constant(forms.tower.dim(1), dm, f.zero());
    for (size_t h = 0; h < homs.size(); ++h) {
      delta += coeffs(static_cast<Index>(h), k) * homs[h];
    }
    if (!is_zero_mat(delta)) dirs.push_back(std::move(delta));
  }

  // The curvature of base + x is linear plus quadratic in x, so if it
  // vanishes on every basis direction, every doubled direction and every
  // pairwise sum, it vanishes on the whole space of sections.
  std::vector<Mat> candidates;
  for (const Mat& d : dirs) candidates.push_back(d);
  for (const Mat& d : dirs) candidates.push_back(Mat(d + d));
  for (size_t i = 0; i < dirs.size(); ++i) {
    for (size_t j = i + 1; j < dirs.size(); ++j) {
      candidates.push_back(Mat(dirs[i] + dirs[j]));
    }
  }
  for (const Mat& delta : candidates) {
    if (is_zero_mat(delta)) continue;
    Connection cand = connection_from_section(ctx, rc, forms, Mat(*base + delta));
    if (!is_flat(ctx, rc, cand)) return cand;
  }
  return std::nullopt;
}

Mat coassociativity_defect(const AmitsurContext& ctx, const ModuleForms& forms, const Mat& rho) {
  const Field& f = forms.M.field;
  const Index dm = forms.M.dim();
  const Index dc = ctx.coring().dim();
  CORINGLAB_REQUIRE(forms.max_degree >= 2, "coassociativity_defect: needs degree 2 forms");
  if (rho.rows() != forms.tower.dim(1) || rho.cols() != dm) {
    throw ShapeError("coassociativity_defect: coaction must be dim(M (x) C) x dim(M)");
  }
  const Mat lift = Mat(forms.tower.full_section(1) * rho);
  const Mat a1 = kron(lift, eye(dc, f));
  const Mat a2 = kron(eye(dm, f), ctx.coring().delta_lift);
  const Mat diff = Mat(forms.tower.full_proj(2) * (a1 - a2));
  CORINGLAB_REQUIRE(kills_kernel(diff, forms.tower.full_proj(1), forms.tower.full_section(1)),
                    "coassociativity_defect: the tensored coactions do not descend");
  return Mat(diff * lift);
}

Connection coaction_to_connection(const AmitsurContext& ctx, const ReducedContext& rc,
                                  const Comodule& com) {
  ModuleForms forms = module_forms(ctx, rc, com.M);
  const Mat to_tower = reconcile(com.MC.q, forms.tower.full_proj(1), forms.tower.full_section(1),
                                 "coaction_to_connection");
  return connection_from_section(ctx, rc, std::move(forms), Mat(to_tower * com.coaction));
}

Comodule connection_to_coaction(const AmitsurContext& ctx, const ReducedContext& rc,
                                const Connection& cn, std::string name) {
  (void)rc;
  const Mat rho = section_from_connection(cn);
  const Mat lift = Mat(cn.forms.tower.full_section(1) * rho);
  if (name.empty()) name = cn.forms.M.name + " via connection";
  return make_comodule(std::move(name), cn.forms.M, ctx.coring(), lift);
}

MorphismCheck morphism_correspondence(const AmitsurContext& ctx, const ReducedContext& rc,
                                      const Comodule& mcom, const Comodule& ncom, const Mat& f) {
  const Field& field = mcom.M.field;
  const Index dc = ctx.coring().dim();
  MorphismCheck out;
  out.report.subject = "morphism " + mcom.name + " -> " + ncom.name;
  if (f.rows() != ncom.M.dim() || f.cols() != mcom.M.dim()) {
    throw ShapeError("morphism_correspondence: map must be dim(N) x dim(M)");
  }
  const Mat ff = promote_mat(f, field);

  bool linear = true;
  const Algebra& r = mcom.M.right_algebra;
  for (Index i = 0; i < r.dim(); ++i) {
    const Vec a = r.element(i);
    if (!mats_equal(Mat(ff * mcom.M.right_op(a)), Mat(ncom.M.right_op(a) * ff))) {
      linear = false;
      out.report.fail("right R-linear", {i}, "fails over " + r.space.label(i));
    }
  }
  out.report.add("right R-linear", linear);
  if (!linear) return out;

  const ModuleForms mf = module_forms(ctx, rc, mcom.M);
  const ModuleForms nf = module_forms(ctx, rc, ncom.M);
  const Mat rho_m =
      Mat(reconcile(mcom.MC.q, mf.tower.full_proj(1), mf.tower.full_section(1),
                    "morphism_correspondence") *
          mcom.coaction);
  const Mat rho_n =
      Mat(reconcile(ncom.MC.q, nf.tower.full_proj(1), nf.tower.full_section(1),
                    "morphism_correspondence") *
          ncom.coaction);

  const Mat fcamb = Mat(nf.tower.full_proj(1) * kron(ff, eye(dc, field)));
  CORINGLAB_REQUIRE(kills_kernel(fcamb, mf.tower.full_proj(1), mf.tower.full_section(1)),
                    "morphism_correspondence: f (x) C does not descend");
  const Mat fc = Mat(fcamb * mf.tower.full_section(1));

  out.comodule_defect = Mat(rho_n * ff - fc * rho_m);
  out.comodule_map = is_zero_mat(out.comodule_defect);

  const auto nab_m = solve_many(mf.basis[1], Mat(rho_m - mf.pure_g), field);
  const auto nab_n = solve_many(nf.basis[1], Mat(rho_n - nf.pure_g), field);
  const auto f_forms = solve_many(nf.basis[1], Mat(fc * mf.basis[1]), field);
  CORINGLAB_REQUIRE(nab_m.has_value() && nab_n.has_value() && f_forms.has_value(),
                    "morphism_correspondence: data does not restrict to the reduced forms");
  out.connection_defect = Mat(*nab_n * ff - *f_forms * *nab_m);
  out.connection_map = is_zero_mat(out.connection_defect);

  for (Index i = 0; i < mcom.M.dim(); ++i) {
    if (!is_zero_mat(Mat(out.comodule_defect.col(i)))) {
      out.report.fail("comodule square", {i}, "fails on " + mcom.M.space.label(i));
    }
    if (!is_zero_mat(Mat(out.connection_defect.col(i)))) {
      out.report.fail("connection square", {i}, "fails on " + mcom.M.space.label(i));
    }
  }
  out.report.add("comodule square", out.comodule_map);
  out.report.add("connection square", out.connection_map);
  out.report.add("defects correspond",
                 mats_equal(Mat(nf.basis[1] * out.connection_defect), out.comodule_defect));
  out.report.add("verdicts agree", out.comodule_map == out.connection_map);
  return out;
}

CuntzQuillen cuntz_quillen_check(const Algebra& a, const Bimodule& m) {
  CORINGLAB_REQUIRE(m.right_algebra.same_structure(a),
                    "cuntz_quillen_check: the module is not over the given algebra");
  const Field& f = a.field;
  const Index da = a.dim();
  const Index dm = m.dim();

  CuntzQuillen out;
  out.report.subject = "Cuntz-Quillen criterion for " + m.name + " over " + a.name;

  const Algebra ground = ground_field_algebra(f);
  Mat unit_col = Mat::Constant(da, 1, f.zero());
  unit_col.col(0) = a.one();
  const AlgebraMap incl = AlgebraMap::make(ground, a, unit_col);
  const SweedlerData sd = sweedler_coring(a, incl);
  AmitsurContext ctx(sd.coring, sd.g, 2);
  const ReducedContext rc = reduced_context(ctx);
  const ModuleForms forms = module_forms(ctx, rc, m);

  const Index dc = sd.coring.dim();
  Mat phiamb = Mat::Constant(dm * da, dm * dc, f.zero());
  for (Index i = 0; i < dm; ++i) {
    for (Index j = 0; j < dc; ++j) {
      const Vec lift = sd.RsR.q.section.col(j);
      Vec v = Vec::Constant(dm * da, f.zero());
      for (Index p = 0; p < da; ++p) {
        for (Index q = 0; q < da; ++q) {
          const Scalar lam = lift(p * da + q);
          if (lam == f.zero()) continue;
          v += lam * kron_vec(m.act_right(m.element(i), a.element(p)), unit_vec(da, q));
        }
      }
      phiamb.col(i * dc + j) = v;
    }
  }
  CORINGLAB_REQUIRE(kills_kernel(phiamb, forms.tower.full_proj(1), forms.tower.full_section(1)),
                    "cuntz_quillen_check: the identification does not descend");
  const Mat phi = Mat(phiamb * forms.tower.full_section(1));
  CORINGLAB_REQUIRE(phi.rows() == phi.cols() && rank_of(phi, f) == phi.rows(),
                    "cuntz_quillen_check: M (x)_A (A (x) A) does not identify with M (x) A");

  Mat action = Mat::Constant(dm, dm * da, f.zero());
  for (Index i = 0; i < dm; ++i) {
    for (Index p = 0; p < da; ++p) {
      action.col(i * da + p) = m.act_right(m.element(i), a.element(p));
    }
  }
  out.report.add("counit matches the action", mats_equal(forms.counit_map, Mat(action * phi)));

  out.con = exists_for(ctx, rc, forms);
  out.connection = out.con.has_value();
  out.projective = is_projective(m);
  out.agree = (out.connection == out.projective);
  out.report.add("existence matches projectivity", out.agree);
  return out;
}

EntwinedConnection entwining_flat_connection_ac(const EntwiningData& e, const Coring& ct,
                                                const Mat& rho_a, const AmitsurContext& ctx,
                                                const ReducedContext& rc, Index n) {
  if (n < 1) throw Error("entwining_flat_connection_ac: n must be at least 1");
  const Field& f = e.A.field;
  const Index da = e.A.dim();
  const Index dc0 = e.Cspace.dim;
  const Index dn = ipow(dc0, n);
  const Index dm = da * dn;
  const Index dcc = ct.dim();
  CORINGLAB_REQUIRE(dcc == da * dc0 && ctx.coring().dim() == dcc && rc.max_degree >= 2,
                    "entwining_flat_connection_ac: inconsistent entwining data");

  std::vector<Mat> psin;
  psin.push_back(eye(da, f));
  psin.push_back(promote_mat(e.psi, f));
  for (Index k = 2; k <= n; ++k) {
    psin.push_back(Mat(kron(promote_mat(e.psi, f), eye(ipow(dc0, k - 1), f)) *
                       kron(eye(dc0, f), psin[static_cast<size_t>(k - 1)])));
  }

  const Mat ract = Mat(kron(promote_mat(e.A.mult, f), eye(dn, f)) *
                       kron(eye(da, f), psin[static_cast<size_t>(n)]));
  const Bimodule m = right_module("A(x)C0" + degree_tag(n), e.A,
                                  FinSpace::make(f, dm), ract);

  EntwinedConnection out;
  out.report.subject = "entwined module A(x)C0" + degree_tag(n) + " over " + ct.name;
  merge_report(out.report, check_bimodule(m), "module: ");

  const ModuleForms forms = module_forms(ctx, rc, m);
  const Mat delta0 = promote_mat(e.delta0, f);

  // coaction: comultiply the last coalgebra factor
  Mat lift = Mat::Constant(dm * dcc, dm, f.zero());
  for (Index u = 0; u < da; ++u) {
    for (Index kk = 0; kk < dn; ++kk) {
      const Index m0 = u * dn + kk;
      const Index p = kk % dc0;
      const Index head = kk / dc0;
      for (Index q = 0; q < dc0; ++q) {
        for (Index t = 0; t < dc0; ++t) {
          const Scalar lam = delta0(q * dc0 + t, p);
          if (lam == f.zero()) continue;
          const Index m1 = u * dn + head * dc0 + q;
          lift.col(m0) += lam * kron_vec(unit_vec(dm, m1),
                                         kron_vec(e.A.one(), unit_vec(dc0, t)));
        }
      }
    }
  }
  out.comodule = make_comodule("A(x)C0" + degree_tag(n), m, ctx.coring(), lift);
  merge_report(out.report, check_comodule(ctx.coring(), out.comodule), "comodule: ");

  // the stated connection: last-factor comultiplication minus the psi term
  const Vec r1 = Vec(promote_mat(rho_a, f) * e.A.one());
  Mat term2 = Mat::Constant(dm * dcc, dm, f.zero());
  for (Index u = 0; u < da; ++u) {
    for (Index kk = 0; kk < dn; ++kk) {
      const Index m0 = u * dn + kk;
      for (Index s = 0; s < da; ++s) {
        for (Index t = 0; t < dc0; ++t) {
          const Scalar mu = r1(s * dc0 + t);
          if (mu == f.zero()) continue;
          const Vec img = Vec(psin[static_cast<size_t>(n)].col(kk * da + s));
          for (Index w = 0; w < da; ++w) {
            for (Index l = 0; l < dn; ++l) {
              const Scalar lam = img(w * dn + l);
              if (lam == f.zero()) continue;
              const Vec prod = e.A.multiply(e.A.element(u), e.A.element(w));
              for (Index x = 0; x < da; ++x) {
                if (prod(x) == f.zero()) continue;
                term2.col(m0) += Scalar(mu * lam * prod(x)) *
                                 kron_vec(unit_vec(dm, x * dn + l),
                                          kron_vec(e.A.one(), unit_vec(dc0, t)));
              }
            }
          }
        }
      }
    }
  }
  const Mat nabla_full = Mat(forms.tower.full_proj(1) * (lift - term2));
  const Mat rho_lvl = Mat(forms.tower.full_proj(1) * lift);
  out.report.add("matches the comodule connection",
                 mats_equal(nabla_full, Mat(rho_lvl - forms.pure_g)));

  const auto nb = solve_many(forms.basis[1], nabla_full, f);
  CORINGLAB_REQUIRE(nb.has_value(),
                    "entwining_flat_connection_ac: values do not lie in M (x) ker eps");
  out.con = Connection{forms, *nb};
  merge_report(out.report, check_connection(out.con), "connection: ");
  const CurvatureValue cv = curvature(ctx, rc, out.con);
  out.report.add("flat", is_zero_mat(cv.matrix));
  merge_report(out.report, cv.report, "curvature: ");
  return out;
}

EntwinedConnection entwining_flat_connection_ca(const EntwiningData& e, const Coring& ct,
                                                const Mat& rho_a, const AmitsurContext& ctx,
                                                const ReducedContext& rc, Index n) {
  if (n < 1) throw Error("entwining_flat_connection_ca: n must be at least 1");
  const Field& f = e.A.field;
  const Index da = e.A.dim();
  const Index dc0 = e.Cspace.dim;
  const Index dan = ipow(da, n);
  const Index dm = dc0 * dan;
  const Index dcc = ct.dim();
  CORINGLAB_REQUIRE(dcc == da * dc0 && ctx.coring().dim() == dcc && rc.max_degree >= 2,
                    "entwining_flat_connection_ca: inconsistent entwining data");

  const Mat ract = kron(eye(dc0 * ipow(da, n - 1), f), promote_mat(e.A.mult, f));
  const Bimodule m = right_module("C0(x)A" + degree_tag(n), e.A,
                                  FinSpace::make(f, dm), ract);

  EntwinedConnection out;
  out.report.subject = "entwined module C0(x)A" + degree_tag(n) + " over " + ct.name;
  merge_report(out.report, check_bimodule(m), "module: ");

  const ModuleForms forms = module_forms(ctx, rc, m);
  const Mat delta0 = promote_mat(e.delta0, f);

  // psi_n : C0 (x) A^n -> A^n (x) C0 by sliding the coalgebra factor right
  Mat slide = eye(dc0 * dan, f);
  for (Index j = 0; j < n; ++j) {
    slide = Mat(kron(eye(ipow(da, j), f),
                     kron(promote_mat(e.psi, f), eye(ipow(da, n - 1 - j), f))) *
                slide);
  }

  // derived coaction c (x) abar -> c_(1) (x) psi_n(c_(2) (x) abar)
  Mat lift = Mat::Constant(dm * dcc, dm, f.zero());
  for (Index p0 = 0; p0 < dc0; ++p0) {
    for (Index jj = 0; jj < dan; ++jj) {
      const Index m0 = p0 * dan + jj;
      for (Index p = 0; p < dc0; ++p) {
        for (Index q = 0; q < dc0; ++q) {
          const Scalar lam = delta0(p * dc0 + q, p0);
          if (lam == f.zero()) continue;
          const Vec img = Vec(slide.col(q * dan + jj));
          for (Index b = 0; b < dan; ++b) {
            for (Index t = 0; t < dc0; ++t) {
              const Scalar mu = img(b * dc0 + t);
              if (mu == f.zero()) continue;
              lift.col(m0) += Scalar(lam * mu) *
                              kron_vec(unit_vec(dm, p * dan + b),
                                       kron_vec(e.A.one(), unit_vec(dc0, t)));
            }
          }
        }
      }
    }
  }
  out.comodule = make_comodule("C0(x)A" + degree_tag(n), m, ctx.coring(), lift);
  merge_report(out.report, check_comodule(ctx.coring(), out.comodule), "comodule: ");

  // the grouplike term of the stated formula, written through the action
  const Vec r1 = Vec(promote_mat(rho_a, f) * e.A.one());
  Mat term2 = Mat::Constant(dm * dcc, dm, f.zero());
  for (Index m0 = 0; m0 < dm; ++m0) {
    for (Index s = 0; s < da; ++s) {
      for (Index t = 0; t < dc0; ++t) {
        const Scalar mu = r1(s * dc0 + t);
        if (mu == f.zero()) continue;
        term2.col(m0) += mu * kron_vec(Vec(ract.col(m0 * da + s)),
                                       kron_vec(e.A.one(), unit_vec(dc0, t)));
      }
    }
  }
  out.report.add("grouplike term balances",
                 mats_equal(Mat(forms.tower.full_proj(1) * term2), forms.pure_g));

  const Mat nabla_full = Mat(forms.tower.full_proj(1) * (lift - term2));
  const auto nb = solve_many(forms.basis[1], nabla_full, f);
  CORINGLAB_REQUIRE(nb.has_value(),
                    "entwining_flat_connection_ca: values do not lie in M (x) ker eps");
  out.con = Connection{forms, *nb};
  merge_report(out.report, check_connection(out.con), "connection: ");
  const CurvatureValue cv = curvature(ctx, rc, out.con);
  out.report.add("flat", is_zero_mat(cv.matrix));
  merge_report(out.report, cv.report, "curvature: ");
  return out;
}

}  // namespace coringlab

#include "coringlab/coring.hpp"

#include <sstream>

namespace coringlab {

namespace {

Vec flatten_mat(const Mat& m) {
  Vec v(m.rows() * m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

void merge_report(CheckReport& dst, const CheckReport& src, const std::string& prefix) {
  for (const auto& [name, pass] : src.results) dst.add(prefix + name, pass);
  for (const CheckIssue& issue : src.issues) {
    dst.issues.push_back(CheckIssue{prefix + issue.check, issue.where, issue.detail});
  }
}

// Columns of a 0/1 section are ambient unit vectors; returns the hit row.
Index section_rep(const QuotientSpace& q, Index col) {
  for (Index r = 0; r < q.section.rows(); ++r) {
    if (!q.section(r, col).is_zero()) return r;
  }
  throw InternalError("quotient section has a zero column");
}

bool maps_equal_on(const Mat& a, const Mat& b, CheckReport& rep, const std::string& check,
                   const FinSpace& domain) {
  bool ok = true;
  for (Index j = 0; j < a.cols(); ++j) {
    if (!mats_equal(Mat(a.col(j)), Mat(b.col(j)))) {
      ok = false;
      rep.fail(check, {j}, "maps disagree on " + domain.label(j));
    }
  }
  return ok;
}

}  // namespace

Coring Coring::make(std::string name, Algebra R, Bimodule C, Mat delta_lift, Mat counit) {
  if (!C.left_algebra.same_structure(R) || !C.right_algebra.same_structure(R)) {
    throw TypeError("coring '" + name + "': C must be an (R,R)-bimodule over the given R");
  }
  if (delta_lift.rows() != C.dim() * C.dim() || delta_lift.cols() != C.dim()) {
    throw ShapeError("coring '" + name + "': comultiplication lift must be dim^2 x dim");
  }
  if (counit.rows() != R.dim() || counit.cols() != C.dim()) {
    throw ShapeError("coring '" + name + "': counit must be R.dim x dim");
  }
  Coring c;
  c.name = std::move(name);
  c.R = std::move(R);
  c.C = std::move(C);
  c.delta_lift = promote_mat(delta_lift, c.C.field);
  c.counit = promote_mat(counit, c.C.field);
  c.CC = tensor_over_R(c.C, c.C);
  c.delta = c.CC.q.projection * c.delta_lift;
  return c;
}

Coring trivial_coring(const Algebra& r) {
  const Bimodule c = regular_bimodule(r);
  Mat delta_lift = Mat::Constant(r.dim() * r.dim(), r.dim(), r.field.zero());
  for (Index j = 0; j < r.dim(); ++j) delta_lift.col(j) = kron_vec(r.element(j), r.one());
  return Coring::make("trivial(" + r.name + ")", r, c, std::move(delta_lift),
                      promote_mat(identity(r.dim()), r.field));
}

SweedlerData sweedler_coring(const Algebra& r, const AlgebraMap& s_incl) {
  if (!s_incl.target.same_structure(r)) {
    throw TypeError("sweedler_coring: inclusion target is not R");
  }
  const Algebra& s = s_incl.source;
  const Field& f = r.field;

  // R as an (R,S)-bimodule and as an (S,R)-bimodule along the inclusion.
  Mat right_via_s = Mat::Constant(r.dim(), r.dim() * s.dim(), f.zero());
  Mat left_via_s = Mat::Constant(r.dim(), s.dim() * r.dim(), f.zero());
  for (Index i = 0; i < s.dim(); ++i) {
    const Vec si = s_incl.apply(s.element(i));
    for (Index j = 0; j < r.dim(); ++j) {
      right_via_s.col(j * s.dim() + i) = r.multiply(r.element(j), si);
      left_via_s.col(i * r.dim() + j) = r.multiply(si, r.element(j));
    }
  }
  const Bimodule left_factor = Bimodule::make("R", r.space, r, s, r.mult, right_via_s);
  const Bimodule right_factor = Bimodule::make("R", r.space, s, r, left_via_s, r.mult);

  SweedlerData data;
  data.RsR = tensor_over_R(left_factor, right_factor);
  data.incl = s_incl;
  const BalancedTensor& t = data.RsR;
  const Index n = t.result.dim();

  Mat delta_lift = Mat::Constant(n * n, n, f.zero());
  Mat counit = Mat::Constant(r.dim(), n, f.zero());
  for (Index qcol = 0; qcol < n; ++qcol) {
    const auto [a, b] = t.index.unflat(section_rep(t.q, qcol));
    delta_lift.col(qcol) =
        kron_vec(t.pure(r.element(a), r.one()), t.pure(r.one(), r.element(b)));
    counit.col(qcol) = r.multiply(r.element(a), r.element(b));
  }

  data.coring = Coring::make(r.name + "(x)" + s.name + "-sweedler", r, t.result,
                             std::move(delta_lift), std::move(counit));
  data.g = t.pure(r.one(), r.one());
  return data;
}

CheckReport check_coring_axioms(const Coring& c) {
  CheckReport rep;
  rep.subject = "coring " + c.name;
  const Bimodule& C = c.C;
  const Algebra& r = c.R;
  const Field& f = C.field;
  const Index d = C.dim();

  bool eps_bimod = true;
  for (Index i = 0; i < r.dim(); ++i) {
    const Vec a = r.element(i);
    if (!mats_equal(Mat(c.counit * C.left_op(a)), Mat(r.left_mult(a) * c.counit)) ||
        !mats_equal(Mat(c.counit * C.right_op(a)), Mat(r.right_mult(a) * c.counit))) {
      eps_bimod = false;
      rep.fail("counit bimodule map", {i},
               "counit is not balanced over " + r.space.label(i));
    }
  }
  rep.add("counit bimodule map", eps_bimod);

  bool delta_bimod = true;
  for (Index i = 0; i < r.dim(); ++i) {
    const Vec a = r.element(i);
    if (!mats_equal(Mat(c.delta * C.left_op(a)), Mat(c.CC.result.left_op(a) * c.delta))) {
      delta_bimod = false;
      rep.fail("comultiplication bimodule map", {i},
               "comultiplication is not left-linear over " + r.space.label(i));
    }
    if (!mats_equal(Mat(c.delta * C.right_op(a)), Mat(c.CC.result.right_op(a) * c.delta))) {
      delta_bimod = false;
      rep.fail("comultiplication bimodule map", {i},
               "comultiplication is not right-linear over " + r.space.label(i));
    }
  }
  rep.add("comultiplication bimodule map", delta_bimod);

  const Tower tw(C, C, 2);
  CORINGLAB_REQUIRE(mats_equal(tw.full_proj(1), c.CC.q.projection),
                    "coring axioms: tower level 1 disagrees with stored C(x)C");

  const Mat left_amb = kron(c.delta_lift, promote_mat(identity(d), f));
  const Mat right_amb = kron(promote_mat(identity(d), f), c.delta_lift);
  bool coassoc = true;
  if (!is_zero_mat(tw.full_proj(2) * left_amb * c.CC.q.relations) ||
      !is_zero_mat(tw.full_proj(2) * right_amb * c.CC.q.relations)) {
    coassoc = false;
    rep.fail("coassociativity", {},
             "one-sided comultiplications do not descend to C(x)C");
  } else {
    const Mat lhs = tw.full_proj(2) * left_amb * c.CC.q.section * c.delta;
    const Mat rhs = tw.full_proj(2) * right_amb * c.CC.q.section * c.delta;
    coassoc = maps_equal_on(lhs, rhs, rep, "coassociativity", C.space);
  }
  rep.add("coassociativity", coassoc);

  const Mat lift = c.CC.q.section * c.delta;
  const Mat left_law = C.left_action * kron(c.counit, promote_mat(identity(d), f)) * lift;
  const Mat right_law = C.right_action * kron(promote_mat(identity(d), f), c.counit) * lift;
  const Mat id_c = promote_mat(identity(d), f);
  rep.add("left counit law", maps_equal_on(left_law, id_c, rep, "left counit law", C.space));
  rep.add("right counit law", maps_equal_on(right_law, id_c, rep, "right counit law", C.space));
  return rep;
}

CheckReport check_coring_map(const Coring& src, const Coring& dst, const Mat& f) {
  CheckReport rep;
  rep.subject = "coring map " + src.name + " -> " + dst.name;
  if (!src.R.same_structure(dst.R)) {
    throw TypeError("coring map: corings live over different base rings");
  }
  if (f.rows() != dst.dim() || f.cols() != src.dim()) {
    throw ShapeError("coring map matrix must be dst.dim x src.dim");
  }

  bool bimod = true;
  for (Index i = 0; i < src.R.dim(); ++i) {
    const Vec a = src.R.element(i);
    if (!mats_equal(Mat(f * src.C.left_op(a)), Mat(dst.C.left_op(a) * f)) ||
        !mats_equal(Mat(f * src.C.right_op(a)), Mat(dst.C.right_op(a) * f))) {
      bimod = false;
      rep.fail("bimodule map", {i}, "map is not balanced over " + src.R.space.label(i));
    }
  }
  rep.add("bimodule map", bimod);

  bool comult = true;
  const Mat ff = kron(f, f);
  if (!is_zero_mat(dst.CC.q.projection * ff * src.CC.q.relations)) {
    comult = false;
    rep.fail("comultiplicative", {}, "f(x)f does not descend to the balanced tensors");
  } else {
    const Mat lhs = dst.CC.q.projection * ff * src.CC.q.section * src.delta;
    const Mat rhs = dst.delta * f;
    comult = maps_equal_on(lhs, rhs, rep, "comultiplicative", src.C.space);
  }
  rep.add("comultiplicative", comult);

  rep.add("counital",
          maps_equal_on(Mat(dst.counit * f), src.counit, rep, "counital", src.C.space));
  return rep;
}

GrouplikeInfo verify_grouplike(const Coring& c, const Vec& g) {
  if (g.size() != c.dim()) throw ShapeError("grouplike candidate has wrong dimension");
  GrouplikeInfo info;
  info.report.subject = "grouplike candidate in " + c.name;
  CheckReport& rep = info.report;

  const bool comult = mats_equal(Mat(c.delta * g), Mat(c.CC.pure(g, g)));
  if (!comult) rep.fail("comultiplicative", {}, "delta(g) differs from g(x)g");
  rep.add("comultiplicative", comult);

  info.u = c.counit * g;
  const bool counital = mats_equal(Mat(info.u), Mat(c.R.one()));
  if (!counital) rep.fail("counital", {}, "counit of g is " + vec_str(info.u, c.R.space));
  rep.add("counital", counital);

  const bool nonzero = !is_zero_mat(g);
  if (!nonzero) rep.fail("nonzero", {}, "g = 0");
  rep.add("nonzero", nonzero);

  const bool idem = mats_equal(c.R.multiply(info.u, info.u), info.u);
  if (!idem) rep.fail("counit idempotent", {}, "eps(g) is not idempotent");
  rep.add("counit idempotent", idem);

  const bool commutes = mats_equal(c.C.act_left(info.u, g), c.C.act_right(g, info.u));
  if (!commutes) rep.fail("counit commutes with g", {}, "eps(g).g differs from g.eps(g)");
  rep.add("counit commutes with g", commutes);

  info.grouplike = comult && counital && nonzero;
  info.semi_grouplike = comult && idem && commutes;
  return info;
}

std::vector<Vec> search_grouplikes(const Coring& c) {
  const Field& f = c.C.field;
  if (f.kind != Field::Kind::Fp) {
    throw Error("search_grouplikes requires a prime field");
  }
  const Index d = c.dim();
  double states = 1;
  for (Index i = 0; i < d; ++i) states *= static_cast<double>(f.p);
  if (states > static_cast<double>(1 << 20)) {
    throw Error("search_grouplikes: state space exceeds 2^20");
  }

  std::vector<Vec> found;
  const long long total = static_cast<long long>(states);
  for (long long n = 1; n < total; ++n) {
    Vec g = Vec::Constant(d, f.zero());
    long long rest = n;
    for (Index i = 0; i < d; ++i) {
      g(i) = f.from_long(rest % f.p);
      rest /= f.p;
    }
    if (mats_equal(Mat(c.delta * g), Mat(c.CC.pure(g, g))) &&
        mats_equal(Mat(c.counit * g), Mat(c.R.one()))) {
      found.push_back(std::move(g));
    }
  }
  return found;
}

Comodule make_comodule(std::string name, Bimodule m, const Coring& c, Mat coaction_lift) {
  if (!m.right_algebra.same_structure(c.R)) {
    throw TypeError("comodule '" + name + "': module is not over the coring's base ring");
  }
  if (m.left_algebra.dim() != 1) {
    throw TypeError("comodule '" + name + "': expected a plain right module");
  }
  if (coaction_lift.rows() != m.dim() * c.dim() || coaction_lift.cols() != m.dim()) {
    throw ShapeError("comodule '" + name + "': coaction lift must be (M.dim*C.dim) x M.dim");
  }
  Comodule out;
  out.name = std::move(name);
  out.M = std::move(m);
  out.coaction_lift = promote_mat(coaction_lift, out.M.field);
  out.MC = tensor_over_R(out.M, c.C);
  out.coaction = out.MC.q.projection * out.coaction_lift;
  return out;
}

CheckReport check_comodule(const Coring& c, const Comodule& m) {
  CheckReport rep;
  rep.subject = "comodule " + m.name + " over " + c.name;
  const Field& f = m.M.field;

  bool linear = true;
  for (Index i = 0; i < c.R.dim(); ++i) {
    const Vec a = c.R.element(i);
    if (!mats_equal(Mat(m.coaction * m.M.right_op(a)),
                    Mat(m.MC.result.right_op(a) * m.coaction))) {
      linear = false;
      rep.fail("right linear", {i}, "coaction is not linear over " + c.R.space.label(i));
    }
  }
  rep.add("right linear", linear);

  const Tower tw(m.M, c.C, 2);
  CORINGLAB_REQUIRE(mats_equal(tw.full_proj(1), m.MC.q.projection),
                    "comodule check: tower level 1 disagrees with stored M(x)C");
  const Mat rho_c = kron(m.coaction_lift, promote_mat(identity(c.dim()), f));
  const Mat m_delta = kron(promote_mat(identity(m.M.dim()), f), c.delta_lift);
  bool coassoc = true;
  if (!is_zero_mat(tw.full_proj(2) * rho_c * m.MC.q.relations) ||
      !is_zero_mat(tw.full_proj(2) * m_delta * m.MC.q.relations)) {
    coassoc = false;
    rep.fail("coassociative", {}, "tensored coactions do not descend to M(x)C");
  } else {
    const Mat lhs = tw.full_proj(2) * rho_c * m.MC.q.section * m.coaction;
    const Mat rhs = tw.full_proj(2) * m_delta * m.MC.q.section * m.coaction;
    coassoc = maps_equal_on(lhs, rhs, rep, "coassociative", m.M.space);
  }
  rep.add("coassociative", coassoc);

  const Mat counit_law = m.M.right_action *
                         kron(promote_mat(identity(m.M.dim()), f), c.counit) *
                         m.MC.q.section * m.coaction;
  rep.add("counital", maps_equal_on(counit_law, promote_mat(identity(m.M.dim()), f), rep,
                                    "counital", m.M.space));
  return rep;
}

Comodule regular_comodule(const Coring& c, const Vec& g) {
  const Algebra& r = c.R;
  Bimodule m = right_module(r.name, r, r.space, r.mult);
  Mat lift = Mat::Constant(r.dim() * c.dim(), r.dim(), r.field.zero());
  for (Index j = 0; j < r.dim(); ++j) {
    lift.col(j) = kron_vec(r.one(), c.C.act_right(g, r.element(j)));
  }
  return make_comodule(r.name, std::move(m), c, std::move(lift));
}

Comodule coring_comodule(const Coring& c) {
  Bimodule m = right_module(c.name, c.R, c.C.space, c.C.right_action);
  return make_comodule(c.name, std::move(m), c, c.delta_lift);
}

std::vector<Vec> coinvariants(const Coring& c, const Comodule& m, const Vec& g) {
  if (g.size() != c.dim()) throw ShapeError("coinvariants: grouplike has wrong dimension");
  Mat defect = Mat::Constant(m.coaction.rows(), m.M.dim(), m.M.field.zero());
  for (Index j = 0; j < m.M.dim(); ++j) {
    defect.col(j) = m.coaction.col(j) - m.MC.pure(m.M.element(j), g);
  }
  return kernel_basis(defect, m.M.field);
}

Subalgebra coinvariant_subring(const Coring& c, const Vec& g) {
  const std::vector<Vec> cent = centralizer(c.R, c.C, g);
  const std::vector<Vec> coinv = coinvariants(c, regular_comodule(c, g), g);
  if (cent.size() != coinv.size()) {
    throw Error("coinvariant_subring: centralizer and coinvariants disagree");
  }
  Mat cent_mat = Mat::Constant(c.R.dim(), static_cast<Index>(cent.size()), c.R.field.zero());
  for (size_t i = 0; i < cent.size(); ++i) cent_mat.col(static_cast<Index>(i)) = cent[i];
  for (const Vec& v : coinv) {
    if (!in_span(cent_mat, v, c.R.field)) {
      throw Error("coinvariant_subring: coinvariant outside the centralizer");
    }
  }
  return subalgebra_on_basis(c.R, cent, "S");
}

Comodule induction_comodule(const Coring& c, const Vec& g, const AlgebraMap& s_incl,
                            const Bimodule& m_s) {
  if (!s_incl.target.same_structure(c.R)) {
    throw TypeError("induction: inclusion target is not the base ring");
  }
  if (!m_s.right_algebra.same_structure(s_incl.source)) {
    throw TypeError("induction: module is not over the inclusion source");
  }
  const Algebra& r = c.R;
  const Algebra& s = s_incl.source;
  const Field& f = r.field;

  // R as an (S,R)-bimodule along the inclusion.
  Mat left_via_s = Mat::Constant(r.dim(), s.dim() * r.dim(), f.zero());
  for (Index i = 0; i < s.dim(); ++i) {
    const Vec si = s_incl.apply(s.element(i));
    for (Index j = 0; j < r.dim(); ++j) left_via_s.col(i * r.dim() + j) = r.multiply(si, r.element(j));
  }
  const Bimodule r_sr = Bimodule::make("R", r.space, s, r, left_via_s, r.mult);
  const BalancedTensor msr = tensor_over_R(m_s, r_sr);

  Mat amb = Mat::Constant(msr.result.dim() * c.dim(), m_s.dim() * r.dim(), f.zero());
  for (Index j = 0; j < m_s.dim(); ++j) {
    for (Index i = 0; i < r.dim(); ++i) {
      amb.col(msr.index.flat(j, i)) =
          kron_vec(msr.pure(m_s.element(j), r.one()), c.C.act_right(g, r.element(i)));
    }
  }
  Mat lift = amb * msr.q.section;
  return make_comodule(m_s.name + "(x)R", msr.result, c, std::move(lift));
}

std::vector<Mat> comodule_hom_space(const Coring& c, const Comodule& m, const Comodule& n) {
  const Field& f = m.M.field;
  std::vector<std::function<Mat(const Mat&)>> conds;
  for (Index i = 0; i < c.R.dim(); ++i) {
    const Mat mi = m.M.right_op(c.R.element(i));
    const Mat ni = n.M.right_op(c.R.element(i));
    conds.push_back([mi, ni](const Mat& x) { return Mat(x * mi - ni * x); });
  }
  const Mat id_c = promote_mat(identity(c.dim()), f);
  const Mat proj_n = n.MC.q.projection;
  const Mat sec_m = m.MC.q.section;
  const Mat rho_m = m.coaction;
  const Mat rho_n = n.coaction;
  conds.push_back([=](const Mat& x) {
    return Mat(proj_n * kron(x, id_c) * sec_m * rho_m - rho_n * x);
  });
  return linear_solution_space(n.M.dim(), m.M.dim(), f, conds);
}

CheckReport check_coalgebra(const EntwiningData& e) {
  CheckReport rep;
  rep.subject = "coalgebra of " + e.name;
  const Field& f = e.A.field;
  const Index d = e.Cspace.dim;
  const Mat id_c = promote_mat(identity(d), f);

  const Mat lhs = kron(e.delta0, id_c) * e.delta0;
  const Mat rhs = kron(id_c, e.delta0) * e.delta0;
  rep.add("coassociativity", maps_equal_on(lhs, rhs, rep, "coassociativity", e.Cspace));

  const Mat left_law = kron(e.eps0, id_c) * e.delta0;
  const Mat right_law = kron(id_c, e.eps0) * e.delta0;
  bool counit_ok = maps_equal_on(left_law, id_c, rep, "counit laws", e.Cspace);
  counit_ok = maps_equal_on(right_law, id_c, rep, "counit laws", e.Cspace) && counit_ok;
  rep.add("counit laws", counit_ok);
  return rep;
}

namespace {

Bimodule entwined_bimodule(const EntwiningData& e) {
  const Algebra& a = e.A;
  const Field& f = a.field;
  const Index da = a.dim();
  const Index dc = e.Cspace.dim;
  const FinSpace space = tensor_space(a.space, e.Cspace);
  const Index d = space.dim;

  Mat left_action = Mat::Constant(d, da * d, f.zero());
  for (Index i = 0; i < da; ++i) {
    const Mat op = kron(a.left_mult(a.element(i)), promote_mat(identity(dc), f));
    left_action.middleCols(i * d, d) = op;
  }

  Mat right_action = Mat::Constant(d, d * da, f.zero());
  const TensorIndex tr{d, da};
  const TensorIndex tac{da, dc};
  for (Index b = 0; b < da; ++b) {
    for (Index j = 0; j < da; ++j) {
      for (Index k = 0; k < dc; ++k) {
        const Vec moved = e.psi * kron_vec(unit_vec(dc, k), unit_vec(da, b));
        const Vec out = kron(a.left_mult(a.element(j)), promote_mat(identity(dc), f)) * moved;
        right_action.col(tr.flat(tac.flat(j, k), b)) = out;
      }
    }
  }
  return Bimodule::make(e.name, space, a, a, std::move(left_action), std::move(right_action));
}

Coring build_entwined_coring(const EntwiningData& e) {
  const Algebra& a = e.A;
  const Field& f = a.field;
  const Index da = a.dim();
  const Index dc = e.Cspace.dim;
  Bimodule c = entwined_bimodule(e);

  Mat unit_insert = Mat::Constant(da * dc, dc, f.zero());
  for (Index k = 0; k < dc; ++k) unit_insert.col(k) = kron_vec(a.one(), unit_vec(dc, k));
  const Mat delta_lift = kron(promote_mat(identity(da * dc), f), unit_insert) *
                         kron(promote_mat(identity(da), f), e.delta0);

  Mat counit = Mat::Constant(da, da * dc, f.zero());
  const TensorIndex tac{da, dc};
  for (Index i = 0; i < da; ++i) {
    for (Index k = 0; k < dc; ++k) counit.col(tac.flat(i, k)) = e.eps0(0, k) * a.element(i);
  }
  return Coring::make(e.name, a, std::move(c), delta_lift, std::move(counit));
}

}  // namespace

CheckReport check_entwining(const EntwiningData& e) {
  CheckReport rep;
  rep.subject = "entwining " + e.name;
  merge_report(rep, check_coalgebra(e), "coalgebra: ");

  CheckReport module_rep;
  try {
    module_rep = check_bimodule(entwined_bimodule(e));
  } catch (const Error& err) {
    rep.add("module: construction", false);
    rep.fail("module: construction", {}, err.what());
    return rep;
  }
  merge_report(rep, module_rep, "module: ");
  if (!module_rep.ok()) {
    rep.add("coring: axioms", false);
    rep.fail("coring: axioms", {}, "skipped: the induced bimodule is invalid");
    return rep;
  }

  try {
    merge_report(rep, check_coring_axioms(build_entwined_coring(e)), "coring: ");
  } catch (const Error& err) {
    rep.add("coring: axioms", false);
    rep.fail("coring: axioms", {}, err.what());
  }
  return rep;
}

Coring entwining_to_coring(const EntwiningData& e) {
  const CheckReport rep = check_entwining(e);
  if (!rep.ok()) {
    std::ostringstream os;
    os << "entwining '" << e.name << "' is invalid:";
    for (const auto& [name, pass] : rep.results) {
      if (!pass) os << " [" << name << "]";
    }
    throw Error(os.str());
  }
  return build_entwined_coring(e);
}

EntwinedGrouplike grouplike_from_entwined_algebra(const EntwiningData& e, const Coring& ct,
                                                  const Mat& rho_a) {
  const Algebra& a = e.A;
  if (rho_a.rows() != ct.dim() || rho_a.cols() != a.dim()) {
    throw ShapeError("entwined coaction must be (A.dim*C0.dim) x A.dim");
  }
  Mat lift = Mat::Constant(a.dim() * ct.dim(), a.dim(), a.field.zero());
  for (Index j = 0; j < a.dim(); ++j) lift.col(j) = kron_vec(a.one(), Vec(rho_a.col(j)));

  EntwinedGrouplike out;
  out.a_comodule = make_comodule(a.name, right_module(a.name, a, a.space, a.mult), ct,
                                 std::move(lift));
  out.report.subject = "entwined module structure on " + a.name;
  merge_report(out.report, check_comodule(ct, out.a_comodule), "module: ");
  out.g = rho_a * a.unit;
  merge_report(out.report, verify_grouplike(ct, out.g).report, "grouplike: ");
  return out;
}

Mat DualRing::to_hom(const Vec& coords) const {
  if (coords.size() != algebra.dim()) throw ShapeError("dual ring coordinates have wrong size");
  if (hom_basis.empty()) throw Error("dual ring is zero");
  Mat out = Mat::Constant(hom_basis[0].rows(), hom_basis[0].cols(), algebra.field.zero());
  for (size_t k = 0; k < hom_basis.size(); ++k) out += coords(static_cast<Index>(k)) * hom_basis[k];
  return out;
}

Vec DualRing::to_coords(const Mat& hom) const {
  const std::optional<Vec> coords = solve(span, flatten_mat(hom), algebra.field);
  if (!coords) throw Error("map is not in the dual ring span");
  return *coords;
}

DualRing dual_ring(const Coring& c) {
  const Field& f = c.C.field;
  DualRing d;
  d.hom_basis = module_hom_space_left(c.C, regular_bimodule(c.R));
  const Index n = static_cast<Index>(d.hom_basis.size());

  d.span = Mat::Constant(c.R.dim() * c.dim(), n, f.zero());
  for (Index k = 0; k < n; ++k) d.span.col(k) = flatten_mat(d.hom_basis[static_cast<size_t>(k)]);

  Mat mult = Mat::Constant(n, n * n, f.zero());
  for (Index l = 0; l < n; ++l) {
    // contraction x (x) y -> x . xi_l(y), well defined over the balancing
    const Mat& xi_l = d.hom_basis[static_cast<size_t>(l)];
    Mat contract = Mat::Constant(c.dim(), c.dim() * c.dim(), f.zero());
    const TensorIndex t{c.dim(), c.dim()};
    for (Index i = 0; i < c.dim(); ++i) {
      for (Index j = 0; j < c.dim(); ++j) {
        contract.col(t.flat(i, j)) = c.C.act_right(c.C.element(i), Vec(xi_l * c.C.element(j)));
      }
    }
    CORINGLAB_REQUIRE(is_zero_mat(contract * c.CC.q.relations),
                      "dual ring: convolution is not balanced");
    for (Index k = 0; k < n; ++k) {
      const Mat prod = d.hom_basis[static_cast<size_t>(k)] * contract * c.delta_lift;
      const std::optional<Vec> coords = solve(d.span, flatten_mat(prod), f);
      if (!coords) throw Error("dual ring: product escapes the hom space");
      mult.col(k * n + l) = *coords;
    }
  }

  const std::optional<Vec> unit = solve(d.span, flatten_mat(c.counit), f);
  if (!unit) throw Error("dual ring: counit is not in the hom space");

  std::vector<std::string> labels;
  for (Index k = 0; k < n; ++k) labels.push_back("xi" + std::to_string(k));
  d.algebra = Algebra::make("dual(" + c.name + ")", FinSpace::make(f, n, std::move(labels)),
                            std::move(mult), *unit);
  return d;
}

Bimodule dual_action(const Coring& c, const DualRing& d, const Comodule& m) {
  const Field& f = m.M.field;
  const Index n = d.algebra.dim();
  const Index dm = m.M.dim();
  if (m.coaction_lift.rows() != dm * c.dim()) {
    throw ShapeError("dual action: comodule does not match the coring");
  }

  Mat left_action = Mat::Constant(dm, n * dm, f.zero());
  for (Index k = 0; k < n; ++k) {
    const Mat op = m.M.right_action *
                   kron(promote_mat(identity(dm), f), d.hom_basis[static_cast<size_t>(k)]);
    CORINGLAB_REQUIRE(is_zero_mat(op * m.MC.q.relations),
                      "dual action: evaluation is not balanced");
    const Mat dk = op * m.coaction_lift;
    for (Index j = 0; j < dm; ++j) left_action.col(k * dm + j) = dk.col(j);
  }
  return Bimodule::make(m.name + " over " + d.algebra.name, m.M.space, d.algebra,
                        ground_field_algebra(f), std::move(left_action),
                        promote_mat(identity(dm), f));
}

Augmentation augmentation(const Coring& c, const DualRing& d, const Vec& g) {
  const Field& f = c.C.field;
  const Index n = d.algebra.dim();
  Augmentation out;
  out.report.subject = "augmentation of " + d.algebra.name;

  out.pi = Mat::Constant(c.R.dim(), n, f.zero());
  for (Index k = 0; k < n; ++k) out.pi.col(k) = d.hom_basis[static_cast<size_t>(k)] * g;

  const bool unit_ok = mats_equal(Mat(out.pi * d.algebra.unit), Mat(c.R.one()));
  if (!unit_ok) out.report.fail("unit to unit", {}, "pi(counit) is not 1");
  out.report.add("unit to unit", unit_ok);

  bool identity_ok = true;
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      const Vec prod = d.algebra.multiply(d.algebra.element(k), d.algebra.element(l));
      const Vec lhs = out.pi * prod;
      const Vec rhs = d.hom_basis[static_cast<size_t>(k)] *
                      c.C.act_right(g, Vec(out.pi.col(l)));
      if (!mats_equal(lhs, rhs)) {
        identity_ok = false;
        out.report.fail("augmentation identity", {k, l},
                        "pi(xi xi') differs from xi(g.pi(xi')) at pair (" +
                            std::to_string(k) + "," + std::to_string(l) + ")");
      }
    }
  }
  out.report.add("augmentation identity", identity_ok);
  return out;
}

Decomposition decomposition_maps(const Coring& c, const Vec& g) {
  const Field& f = c.C.field;
  const Index d = c.dim();
  const Index rd = c.R.dim();
  Decomposition out;
  out.report.subject = "decomposition of " + c.name;

  out.ker_eps = kernel_matrix(c.counit, f);
  const Index kd = out.ker_eps.cols();
  const bool dims_ok = rd + kd == d;
  if (!dims_ok) out.report.fail("dimensions", {}, "R.dim + dim(ker eps) != dim C");
  out.report.add("dimensions", dims_ok);

  // u_r(c) = (eps(c), g.eps(c) - c); u_l(c) = (eps(c), c - eps(c).g)
  Mat br = Mat::Constant(d, d, f.zero());
  Mat bl = Mat::Constant(d, d, f.zero());
  for (Index j = 0; j < d; ++j) {
    const Vec eps_j = c.counit.col(j);
    br.col(j) = c.C.act_right(g, eps_j) - c.C.element(j);
    bl.col(j) = c.C.element(j) - c.C.act_left(eps_j, g);
  }
  const std::optional<Mat> kr = solve_many(out.ker_eps, br, f);
  const std::optional<Mat> kl = solve_many(out.ker_eps, bl, f);
  if (!kr || !kl) throw Error("decomposition: defect terms escape ker eps");

  out.u_r = Mat::Constant(rd + kd, d, f.zero());
  out.u_r.topRows(rd) = c.counit;
  out.u_r.bottomRows(kd) = *kr;
  out.u_l = Mat::Constant(rd + kd, d, f.zero());
  out.u_l.topRows(rd) = c.counit;
  out.u_l.bottomRows(kd) = *kl;

  out.u_r_inv = Mat::Constant(d, rd + kd, f.zero());
  out.u_l_inv = Mat::Constant(d, rd + kd, f.zero());
  for (Index i = 0; i < rd; ++i) {
    out.u_r_inv.col(i) = c.C.act_right(g, c.R.element(i));
    out.u_l_inv.col(i) = c.C.act_left(c.R.element(i), g);
  }
  for (Index j = 0; j < kd; ++j) {
    out.u_r_inv.col(rd + j) = -out.ker_eps.col(j);
    out.u_l_inv.col(rd + j) = out.ker_eps.col(j);
  }

  const Mat id_sum = promote_mat(identity(rd + kd), f);
  const Mat id_c = promote_mat(identity(d), f);
  const bool inv_ok = mats_equal(Mat(out.u_r * out.u_r_inv), id_sum) &&
                      mats_equal(Mat(out.u_r_inv * out.u_r), id_c) &&
                      mats_equal(Mat(out.u_l * out.u_l_inv), id_sum) &&
                      mats_equal(Mat(out.u_l_inv * out.u_l), id_c);
  if (!inv_ok) out.report.fail("mutually inverse", {}, "splitting maps do not invert each other");
  out.report.add("mutually inverse", inv_ok);

  // block action on R ++ ker eps induced by the bimodule structure
  const auto block_op = [&](const Mat& c_op, const Mat& r_op) -> std::optional<Mat> {
    const std::optional<Mat> k_act = solve_many(out.ker_eps, Mat(c_op * out.ker_eps), f);
    if (!k_act) return std::nullopt;
    Mat blk = Mat::Constant(rd + kd, rd + kd, f.zero());
    blk.topLeftCorner(rd, rd) = r_op;
    blk.bottomRightCorner(kd, kd) = *k_act;
    return blk;
  };

  const std::vector<Vec> s_basis = centralizer(c.R, c.C, g);
  bool r_bilinear = true;
  bool l_bilinear = true;
  for (Index i = 0; i < rd; ++i) {
    const Vec a = c.R.element(i);
    const auto right_blk = block_op(c.C.right_op(a), c.R.right_mult(a));
    if (!right_blk || !mats_equal(Mat(out.u_r * c.C.right_op(a)), Mat(*right_blk * out.u_r))) {
      r_bilinear = false;
      out.report.fail("right R-linear", {i}, "u_r fails on " + c.R.space.label(i));
    }
    const auto left_blk = block_op(c.C.left_op(a), c.R.left_mult(a));
    if (!left_blk || !mats_equal(Mat(out.u_l * c.C.left_op(a)), Mat(*left_blk * out.u_l))) {
      l_bilinear = false;
      out.report.fail("left R-linear", {i}, "u_l fails on " + c.R.space.label(i));
    }
  }
  out.report.add("right R-linear", r_bilinear);
  out.report.add("left R-linear", l_bilinear);

  bool s_left = true;
  bool s_right = true;
  for (const Vec& s : s_basis) {
    const auto left_blk = block_op(c.C.left_op(s), c.R.left_mult(s));
    if (!left_blk || !mats_equal(Mat(out.u_r * c.C.left_op(s)), Mat(*left_blk * out.u_r))) {
      s_left = false;
      out.report.fail("left S-linear", {}, "u_r fails on a coinvariant scalar");
    }
    const auto right_blk = block_op(c.C.right_op(s), c.R.right_mult(s));
    if (!right_blk || !mats_equal(Mat(out.u_l * c.C.right_op(s)), Mat(*right_blk * out.u_l))) {
      s_right = false;
      out.report.fail("right S-linear", {}, "u_l fails on a coinvariant scalar");
    }
  }
  out.report.add("left S-linear", s_left);
  out.report.add("right S-linear", s_right);
  return out;
}

GrouplikeRing grouplike_ring_structure(const Coring& c, const Vec& g) {
  const Field& f = c.C.field;
  const Index d = c.dim();
  GrouplikeRing out;
  out.report.subject = "transported ring structure on " + c.name;

  Mat mult = Mat::Constant(d, d * d, f.zero());
  for (Index i = 0; i < d; ++i) {
    const Vec eps_i = c.counit.col(i);
    for (Index j = 0; j < d; ++j) {
      const Vec eps_j = c.counit.col(j);
      mult.col(i * d + j) = c.C.act_left(eps_i, c.C.element(j)) +
                            c.C.act_right(c.C.element(i), eps_j) -
                            c.C.act_left(eps_i, c.C.act_right(g, eps_j));
    }
  }
  out.ring = Algebra::make(c.name + "-ring", c.C.space, std::move(mult), g);
  merge_report(out.report, check_algebra_axioms(out.ring), "");

  merge_report(out.report, check_algebra_map(AlgebraMap::make(out.ring, c.R, c.counit)),
               "counit ");

  Mat i_l = Mat::Constant(d, c.R.dim(), f.zero());
  Mat i_r = Mat::Constant(d, c.R.dim(), f.zero());
  for (Index i = 0; i < c.R.dim(); ++i) {
    i_l.col(i) = c.C.act_left(c.R.element(i), g);
    i_r.col(i) = c.C.act_right(g, c.R.element(i));
  }
  merge_report(out.report, check_algebra_map(AlgebraMap::make(c.R, out.ring, i_l)),
               "left section ");
  merge_report(out.report, check_algebra_map(AlgebraMap::make(c.R, out.ring, i_r)),
               "right section ");

  const Mat id_r = promote_mat(identity(c.R.dim()), f);
  const bool split_ok =
      mats_equal(Mat(c.counit * i_l), id_r) && mats_equal(Mat(c.counit * i_r), id_r);
  if (!split_ok) out.report.fail("sections split counit", {}, "counit does not retract them");
  out.report.add("sections split counit", split_ok);
  return out;
}

CheckReport verify_coinv_C_iso(const Coring& c, const Vec& g) {
  CheckReport rep;
  rep.subject = "R = coinvariants of " + c.name;
  const Field& f = c.C.field;
  const Index rd = c.R.dim();

  const std::vector<Vec> coinv = coinvariants(c, coring_comodule(c), g);
  Mat k = Mat::Constant(c.dim(), static_cast<Index>(coinv.size()), f.zero());
  for (size_t j = 0; j < coinv.size(); ++j) k.col(static_cast<Index>(j)) = coinv[j];

  const bool dim_ok = static_cast<Index>(coinv.size()) == rd;
  if (!dim_ok) rep.fail("dimension", {}, "coinvariants of C have unexpected dimension");
  rep.add("dimension", dim_ok);

  Mat phi = Mat::Constant(c.dim(), rd, f.zero());
  for (Index i = 0; i < rd; ++i) phi.col(i) = c.C.act_left(c.R.element(i), g);

  bool image_ok = true;
  for (Index i = 0; i < rd; ++i) {
    if (!in_span(k, Vec(phi.col(i)), f)) {
      image_ok = false;
      rep.fail("image coinvariant", {i}, "r.g is not coinvariant for a basis r");
    }
  }
  rep.add("image coinvariant", image_ok);

  const bool inv1 = mats_equal(Mat(c.counit * phi), promote_mat(identity(rd), f));
  if (!inv1) rep.fail("counit retracts", {}, "eps(r.g) differs from r");
  rep.add("counit retracts", inv1);

  bool inv2 = dim_ok;
  if (dim_ok) {
    for (Index j = 0; j < k.cols(); ++j) {
      // every coinvariant satisfies x = eps(x).g
      const Vec back = c.C.act_left(Vec(c.counit * k.col(j)), g);
      if (!mats_equal(back, Vec(k.col(j)))) {
        inv2 = false;
        rep.fail("coinvariants recovered", {j}, "x differs from eps(x).g on the basis");
      }
    }
  }
  rep.add("coinvariants recovered", inv2);

  bool left_ok = true;
  for (Index i = 0; i < rd; ++i) {
    const Vec a = c.R.element(i);
    if (!mats_equal(Mat(phi * c.R.left_mult(a)), Mat(c.C.left_op(a) * phi))) {
      left_ok = false;
      rep.fail("left R-linear", {i}, "phi fails left linearity on " + c.R.space.label(i));
    }
  }
  rep.add("left R-linear", left_ok);

  bool right_ok = true;
  for (const Vec& s : centralizer(c.R, c.C, g)) {
    if (!mats_equal(Mat(phi * c.R.right_mult(s)), Mat(c.C.right_op(s) * phi))) {
      right_ok = false;
      rep.fail("right S-linear", {}, "phi fails right linearity over a coinvariant scalar");
    }
  }
  rep.add("right S-linear", right_ok);
  return rep;
}

HomCoinvResult hom_coinv_iso(const Coring& c, const Vec& g, const Comodule& m) {
  HomCoinvResult out;
  out.report.subject = "comodule maps R -> " + m.name + " vs coinvariants";
  const Field& f = m.M.field;

  const Comodule rc = regular_comodule(c, g);
  const std::vector<Mat> homs = comodule_hom_space(c, rc, m);
  const std::vector<Vec> coinv = coinvariants(c, m, g);
  out.hom_dim = static_cast<Index>(homs.size());
  out.coinv_dim = static_cast<Index>(coinv.size());

  const bool dim_ok = out.hom_dim == out.coinv_dim;
  if (!dim_ok) out.report.fail("dimension match", {}, "hom and coinvariant dimensions differ");
  out.report.add("dimension match", dim_ok);

  Mat k = Mat::Constant(m.M.dim(), out.coinv_dim, f.zero());
  for (Index j = 0; j < out.coinv_dim; ++j) k.col(j) = coinv[static_cast<size_t>(j)];

  bool eval_ok = true;
  bool round_f = true;
  for (size_t t = 0; t < homs.size(); ++t) {
    const Vec m1 = homs[t] * c.R.one();
    if (!in_span(k, m1, f)) {
      eval_ok = false;
      out.report.fail("evaluation coinvariant", {static_cast<Index>(t)},
                      "f(1) is not a coinvariant");
    }
    Mat rebuilt(m.M.dim(), c.R.dim());
    for (Index i = 0; i < c.R.dim(); ++i) rebuilt.col(i) = m.M.act_right(m1, c.R.element(i));
    if (!mats_equal(rebuilt, homs[t])) {
      round_f = false;
      out.report.fail("hom round trip", {static_cast<Index>(t)},
                      "f(1).r does not rebuild f");
    }
  }
  out.report.add("evaluation coinvariant", eval_ok);
  out.report.add("hom round trip", round_f);

  bool round_m = true;
  for (Index j = 0; j < out.coinv_dim; ++j) {
    const Vec back = m.M.act_right(Vec(k.col(j)), c.R.one());
    if (!mats_equal(back, Vec(k.col(j)))) {
      round_m = false;
      out.report.fail("coinvariant round trip", {j}, "m.1 differs from m");
    }
  }
  out.report.add("coinvariant round trip", round_m);

  bool s_ok = true;
  const std::vector<Vec> s_basis = centralizer(c.R, c.C, g);
  for (const Mat& h : homs) {
    for (const Vec& s : s_basis) {
      const Vec lhs = h * s;  // f(s.1) = f(s)
      const Vec rhs = m.M.act_right(Vec(h * c.R.one()), s);
      if (!mats_equal(lhs, rhs)) {
        s_ok = false;
        out.report.fail("S-action compatible", {}, "f(s) differs from f(1).s");
      }
    }
  }
  out.report.add("S-action compatible", s_ok);
  return out;
}

}  // namespace coringlab

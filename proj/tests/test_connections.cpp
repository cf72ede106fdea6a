#include "doctest.h"

#include "coringlab/connections.hpp"

#include <optional>
#include <string>
#include <vector>

#include "fixtures.hpp"

using namespace coringlab;
using namespace testutil;

namespace {

Mat eye(Index n, const Field& f) { return promote_mat(identity(n), f); }

// omega -> 1 (x) omega from reduced degree-k coordinates into the module
// forms of M; for M = R this is an isomorphism in every degree.
Mat unit_times(const ReducedContext& rc, const ModuleForms& fo, Index k) {
  const Field& f = fo.M.field;
  const Index qk = k == 0 ? fo.M.right_algebra.dim() : rc.dim(k);
  Mat u = Mat::Constant(fo.dim(k), qk, f.zero());
  for (Index a = 0; a < qk; ++a) {
    u.col(a) = fo.proj[static_cast<size_t>(k)] *
               kron_vec(fo.M.right_algebra.one(), unit_vec(qk, a));
  }
  return u;
}

}  // namespace

TEST_CASE("module forms organize a module against the reduced complex") {
  const SweedlerData fd = sweedler_coring(f4_algebra(), f2_into_f4());
  const Field f = fd.coring.R.field;
  AmitsurContext ctx(fd.coring, fd.g, 3);
  const ReducedContext rc = reduced_context(ctx);
  const Bimodule m = regular_bimodule(fd.coring.R);
  const ModuleForms fo = module_forms(ctx, rc, m);

  CHECK(fo.max_degree == 3);
  CHECK(fo.dim(0) == 2);
  for (Index k = 1; k <= 3; ++k) {
    // R (x)_R W is W itself, so the module forms match the reduced complex
    CHECK(fo.dim(k) == rc.dim(k));
    CHECK(mats_equal(Mat(fo.proj[static_cast<size_t>(k)] * fo.sec[static_cast<size_t>(k)]),
                     eye(fo.dim(k), f)));
    CHECK(rank_of(unit_times(rc, fo, k), f) == rc.dim(k));
    CHECK(mats_equal(fo.right_op(k, fd.coring.R.one()), eye(fo.dim(k), f)));
  }
  CHECK(mats_equal(Mat(fo.counit_map * fo.pure_g), eye(m.dim(), f)));
}

TEST_CASE("the reduced differential is a flat connection on the base ring") {
  const SweedlerData fd = sweedler_coring(f4_algebra(), f2_into_f4());
  const Field f = fd.coring.R.field;
  AmitsurContext ctx(fd.coring, fd.g, 3);
  const ReducedContext rc = reduced_context(ctx);
  const ModuleForms fo = module_forms(ctx, rc, regular_bimodule(fd.coring.R));

  const Mat u1 = unit_times(rc, fo, 1);
  const Connection cn = make_connection(fo, Mat(u1 * rc.d[0]));
  CHECK(check_connection(cn).ok());
  CHECK(is_flat(ctx, rc, cn));
  CHECK(mats_equal(extension_matrix(ctx, rc, cn, 0), cn.nabla));

  // in every degree the extension of d along 1 (x) - is d again
  for (Index k = 0; k <= 2; ++k) {
    const Mat ext = extension_matrix(ctx, rc, cn, k);
    CHECK(mats_equal(Mat(ext * unit_times(rc, fo, k)),
                     Mat(unit_times(rc, fo, k + 1) * rc.d[static_cast<size_t>(k)])));
  }

  // a closed form with a parallel coefficient extends to zero
  const Vec t = fd.coring.R.element(1);
  const GradedElement x{1, Vec(u1 * Vec(rc.d[0] * t))};
  CHECK(is_zero_mat(extend_connection(ctx, rc, cn, x).coords));

  // the zero map fails the Leibniz rule because d is nonzero on the base
  REQUIRE(!is_zero_mat(rc.d[0]));
  const Connection zero = make_connection(fo, Mat::Constant(fo.dim(1), fo.dim(0), f.zero()));
  const CheckReport bad = check_connection(zero);
  CHECK(!bad.ok());
  REQUIRE(!bad.issues.empty());
  CHECK(bad.issues.front().check == "Leibniz rule");

  CHECK_THROWS_AS(extension_matrix(ctx, rc, cn, 3), const Error&);
  CHECK_THROWS_AS(extend_connection(ctx, rc, cn, GradedElement{1, unit_vec(1, 0)}),
                  const ShapeError&);
  CHECK_THROWS_AS(make_connection(fo, eye(1, f)), const ShapeError&);
}

TEST_CASE("coactions and flat connections determine each other") {
  const SweedlerData fd = sweedler_coring(f4_algebra(), f2_into_f4());
  AmitsurContext ctx(fd.coring, fd.g, 2);
  const ReducedContext rc = reduced_context(ctx);

  std::vector<Comodule> catalog;
  catalog.push_back(regular_comodule(fd.coring, fd.g));
  catalog.push_back(coring_comodule(fd.coring));
  const Algebra& s = fd.incl.source;
  catalog.push_back(induction_comodule(fd.coring, fd.g, fd.incl, free_right_module(s, 2)));

  for (const Comodule& com : catalog) {
    CAPTURE(com.name);
    REQUIRE(check_comodule(fd.coring, com).ok());
    const Connection cn = coaction_to_connection(ctx, rc, com);
    CHECK(check_connection(cn).ok());
    CHECK(is_flat(ctx, rc, cn));

    const Comodule back = connection_to_coaction(ctx, rc, cn, com.name);
    CHECK(mats_equal(back.coaction, com.coaction));
    CHECK(check_comodule(fd.coring, back).ok());
  }

  // same story over the rationals
  const SweedlerData qd = sweedler_coring(qx2_algebra(), q_into_qx2());
  AmitsurContext qctx(qd.coring, qd.g, 2);
  const ReducedContext qrc = reduced_context(qctx);
  const Connection qcn = coaction_to_connection(qctx, qrc, regular_comodule(qd.coring, qd.g));
  CHECK(check_connection(qcn).ok());
  CHECK(is_flat(qctx, qrc, qcn));
}

TEST_CASE("sections of the counit carry the same data as connections") {
  const SweedlerData fd = sweedler_coring(f4_algebra(), f2_into_f4());
  const Field f = fd.coring.R.field;
  AmitsurContext ctx(fd.coring, fd.g, 2);
  const ReducedContext rc = reduced_context(ctx);
  const Bimodule m = regular_bimodule(fd.coring.R);
  const ModuleForms fo = module_forms(ctx, rc, m);

  const Connection cn = coaction_to_connection(ctx, rc, regular_comodule(fd.coring, fd.g));
  const Mat j = section_from_connection(cn);
  CHECK(mats_equal(Mat(fo.counit_map * j), eye(m.dim(), f)));

  const Connection cn2 = connection_from_section(ctx, rc, fo, j);
  CHECK(mats_equal(cn2.nabla, cn.nabla));
  CHECK(mats_equal(section_from_connection(cn2), j));

  // the zero map is right linear but misses the counit
  const Mat zero = Mat::Constant(j.rows(), j.cols(), f.zero());
  CHECK_THROWS_AS(connection_from_section(ctx, rc, fo, zero), const Error&);

  // sending 1 somewhere and t to zero is not right linear
  Mat skew = Mat::Constant(j.rows(), j.cols(), f.zero());
  skew.col(0) = j.col(0);
  CHECK_THROWS_AS(connection_from_section(ctx, rc, fo, skew), const Error&);

  CHECK_THROWS_AS(connection_from_section(ctx, rc, fo, eye(1, f)), const ShapeError&);
}

TEST_CASE("curvature is the coassociativity defect of the induced coaction") {
  const SweedlerData fd = sweedler_coring(f4_algebra(), f2_into_f4());
  AmitsurContext ctx(fd.coring, fd.g, 2);
  const ReducedContext rc = reduced_context(ctx);
  const Algebra& r = fd.coring.R;
  const Bimodule m = right_module(r.name, r, r.space, r.mult);

  const auto bent = nonflat_connection(ctx, rc, m);
  REQUIRE(bent.has_value());
  const CurvatureValue cv = curvature(ctx, rc, *bent);
  CHECK(cv.report.ok());
  CHECK(!is_zero_mat(cv.matrix));
  CHECK(!is_flat(ctx, rc, *bent));

  // as maps into the second tower level the two defects agree on the nose
  const Mat rho = section_from_connection(*bent);
  const Mat defect = coassociativity_defect(ctx, bent->forms, rho);
  CHECK(mats_equal(Mat(bent->forms.basis[2] * cv.matrix), defect));

  // the induced coaction is counital and linear but not coassociative
  const Comodule com = connection_to_coaction(ctx, rc, *bent, "bent");
  const CheckReport rep = check_comodule(fd.coring, com);
  CHECK(rep.passed("right linear"));
  CHECK(rep.passed("counital"));
  CHECK(!rep.passed("coassociative"));

  // flat connections have vanishing defect
  const Connection flat = coaction_to_connection(ctx, rc, regular_comodule(fd.coring, fd.g));
  CHECK(is_zero_mat(coassociativity_defect(ctx, flat.forms, section_from_connection(flat))));
}

TEST_CASE("comodule morphisms are connection morphisms and conversely") {
  const SweedlerData fd = sweedler_coring(f4_algebra(), f2_into_f4());
  const Field f = fd.coring.R.field;
  AmitsurContext ctx(fd.coring, fd.g, 2);
  const ReducedContext rc = reduced_context(ctx);
  const Comodule reg = regular_comodule(fd.coring, fd.g);

  const MorphismCheck idc = morphism_correspondence(ctx, rc, reg, reg, eye(2, f));
  CHECK(idc.comodule_map);
  CHECK(idc.connection_map);
  CHECK(idc.report.ok());

  // multiplication by t respects the module structure but moves the grouplike
  const Mat mult_t = fd.coring.R.left_mult(fd.coring.R.element(1));
  const MorphismCheck tw = morphism_correspondence(ctx, rc, reg, reg, mult_t);
  CHECK(tw.report.passed("right R-linear"));
  CHECK(!tw.comodule_map);
  CHECK(!tw.connection_map);
  CHECK(tw.report.passed("defects correspond"));
  CHECK(tw.report.passed("verdicts agree"));

  // the coaction itself maps the regular comodule into the coring comodule
  const Comodule cc = coring_comodule(fd.coring);
  Mat rho_map = Mat::Constant(fd.coring.dim(), 2, f.zero());
  for (Index j = 0; j < 2; ++j) {
    rho_map.col(j) = fd.coring.C.act_right(fd.g, fd.coring.R.element(j));
  }
  const MorphismCheck rm = morphism_correspondence(ctx, rc, reg, cc, rho_map);
  CHECK(rm.comodule_map);
  CHECK(rm.connection_map);
  CHECK(rm.report.ok());

  // every basis solution of the comodule morphism equations passes
  for (const Mat& h : comodule_hom_space(fd.coring, reg, reg)) {
    const MorphismCheck hc = morphism_correspondence(ctx, rc, reg, reg, h);
    CHECK(hc.comodule_map);
    CHECK(hc.connection_map);
  }

  CHECK_THROWS_AS(morphism_correspondence(ctx, rc, reg, reg, eye(3, f)), const ShapeError&);
}

TEST_CASE("connections exist exactly for direct summands of free modules") {
  const SweedlerData qd = sweedler_coring(qx2_algebra(), q_into_qx2());
  const Algebra a = qx2_algebra();
  const Field f = a.field;
  AmitsurContext ctx(qd.coring, qd.g, 2);
  const ReducedContext rc = reduced_context(ctx);

  CHECK(connection_exists(ctx, rc, regular_bimodule(a)).has_value());
  CHECK(connection_exists(ctx, rc, free_right_module(a, 2)).has_value());

  // the one-dimensional quotient by the nilpotent kills every candidate
  Mat qact = Mat::Constant(1, 2, f.zero());
  qact(0, 0) = f.one();
  const Bimodule quo = right_module("A/(x)", a, FinSpace::make(f, 1, {"e"}), qact);
  REQUIRE(check_bimodule(quo).ok());
  CHECK(!connection_exists(ctx, rc, quo).has_value());
  CHECK(!nonflat_connection(ctx, rc, quo).has_value());
}

TEST_CASE("connection existence matches projectivity over the ground field coring") {
  const Algebra a = qx2_algebra();
  const Field f = a.field;

  const CuntzQuillen free_case = cuntz_quillen_check(a, regular_bimodule(a));
  CHECK(free_case.projective);
  CHECK(free_case.connection);
  CHECK(free_case.agree);
  CHECK(free_case.report.ok());
  CHECK(free_case.con.has_value());

  Mat qact = Mat::Constant(1, 2, f.zero());
  qact(0, 0) = f.one();
  const Bimodule quo = right_module("A/(x)", a, FinSpace::make(f, 1, {"e"}), qact);
  const CuntzQuillen quo_case = cuntz_quillen_check(a, quo);
  CHECK(!quo_case.projective);
  CHECK(!quo_case.connection);
  CHECK(quo_case.agree);
  CHECK(quo_case.report.passed("counit matches the action"));
  CHECK(quo_case.report.passed("existence matches projectivity"));
  CHECK(!quo_case.con.has_value());

  const Algebra f4 = f4_algebra();
  const CuntzQuillen field_case = cuntz_quillen_check(f4, regular_bimodule(f4));
  CHECK(field_case.projective);
  CHECK(field_case.connection);
  CHECK(field_case.report.ok());
}

TEST_CASE("entwined modules with the coalgebra factor on the right are flat") {
  const EntwiningData sf = superflip_entwining();
  const Coring cs = entwining_to_coring(sf);
  const Field f = sf.A.field;
  Mat rho_s = Mat::Constant(4, 2, f.zero());
  for (Index j = 0; j < 2; ++j) rho_s.col(j) = kron_vec(unit_vec(2, j), unit_vec(2, 0));
  const EntwinedGrouplike sg = grouplike_from_entwined_algebra(sf, cs, rho_s);
  AmitsurContext ctx(cs, sg.g, 2);
  const ReducedContext rc = reduced_context(ctx);

  for (Index n = 1; n <= 2; ++n) {
    CAPTURE(n);
    const EntwinedConnection ec = entwining_flat_connection_ac(sf, cs, rho_s, ctx, rc, n);
    CHECK(ec.report.ok());
    CHECK(ec.report.passed("flat"));
    CHECK(ec.report.passed("matches the comodule connection"));
    CHECK(mats_equal(connection_to_coaction(ctx, rc, ec.con, "back").coaction,
                     ec.comodule.coaction));
  }

  // a one-point coalgebra gives a coring with no reduced forms at all
  const Algebra ut = upper_tri_algebra(Field::GF(2));
  const EntwiningData pt = point_entwining(ut);
  const Coring cp = entwining_to_coring(pt);
  const Mat rho_p = eye(3, ut.field);
  const EntwinedGrouplike pg = grouplike_from_entwined_algebra(pt, cp, rho_p);
  AmitsurContext pctx(cp, pg.g, 2);
  const ReducedContext prc = reduced_context(pctx);
  const EntwinedConnection pc = entwining_flat_connection_ac(pt, cp, rho_p, pctx, prc, 1);
  CHECK(pc.report.ok());
  CHECK(pc.con.forms.dim(1) == 0);

  CHECK_THROWS_AS(entwining_flat_connection_ac(sf, cs, rho_s, ctx, rc, 0), const Error&);
}

TEST_CASE("entwined modules with the coalgebra factor on the left are flat") {
  const EntwiningData sf = superflip_entwining();
  const Coring cs = entwining_to_coring(sf);
  const Field f = sf.A.field;
  Mat rho_s = Mat::Constant(4, 2, f.zero());
  for (Index j = 0; j < 2; ++j) rho_s.col(j) = kron_vec(unit_vec(2, j), unit_vec(2, 0));
  const EntwinedGrouplike sg = grouplike_from_entwined_algebra(sf, cs, rho_s);
  AmitsurContext ctx(cs, sg.g, 2);
  const ReducedContext rc = reduced_context(ctx);

  for (Index n = 1; n <= 2; ++n) {
    CAPTURE(n);
    const EntwinedConnection ec = entwining_flat_connection_ca(sf, cs, rho_s, ctx, rc, n);
    CHECK(ec.report.ok());
    CHECK(ec.report.passed("flat"));
    CHECK(ec.report.passed("grouplike term balances"));
    CHECK(mats_equal(connection_to_coaction(ctx, rc, ec.con, "back").coaction,
                     ec.comodule.coaction));
  }

  const EntwiningData flip = flip_entwining();
  const Coring cf = entwining_to_coring(flip);
  Mat rho = Mat::Constant(4, 2, f.zero());
  for (Index j = 0; j < 2; ++j) rho.col(j) = kron_vec(unit_vec(2, j), unit_vec(2, 1));
  const EntwinedGrouplike eg = grouplike_from_entwined_algebra(flip, cf, rho);
  AmitsurContext fctx(cf, eg.g, 2);
  const ReducedContext frc = reduced_context(fctx);
  const EntwinedConnection fc = entwining_flat_connection_ca(flip, cf, rho, fctx, frc, 1);
  CHECK(fc.report.ok());
  CHECK(fc.report.passed("flat"));

  CHECK_THROWS_AS(entwining_flat_connection_ca(sf, cs, rho_s, ctx, rc, 0), const Error&);
}

// Acceptance gate: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coringlab/amitsur.hpp"
#include "coringlab/connections.hpp"
#include "coringlab/instance.hpp"
#include "coringlab/report.hpp"

using namespace coringlab;

namespace {

int g_failed = 0;

using Problems = std::vector<std::string>;

void expect(Problems& problems, bool cond, const std::string& msg) {
  if (!cond) problems.push_back(msg);
}

std::string fixture_path(const std::string& name) {
  return std::string(CORINGLAB_FIXTURE_DIR) + "/" + name + ".json";
}

Instance load(const std::string& name) { return parse_instance_file(fixture_path(name)); }

const std::vector<std::string>& good_fixtures() {
  static const std::vector<std::string> names = {
      "trivial_f2",     "trivial_q", "f2_f4_sweedler",      "q_qx2_sweedler",
      "flip_entwining", "cobar",     "superflip_entwining", "from_dg"};
  return names;
}

// The instances whose bundled element is a proper grouplike.
const std::vector<std::string>& proper_fixtures() {
  static const std::vector<std::string> names = {
      "trivial_f2",     "trivial_q",           "f2_f4_sweedler", "q_qx2_sweedler",
      "flip_entwining", "superflip_entwining", "from_dg"};
  return names;
}

void run(int id, const std::string& label, double budget_seconds,
         const std::function<void(Problems&)>& body) {
  Problems problems;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(problems);
  } catch (const std::exception& e) {
    problems.push_back(std::string("unexpected exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0 && secs > budget_seconds) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.2fs exceeded the %.0fs budget", secs,
                  budget_seconds);
    problems.push_back(buf);
  }
  if (problems.empty()) {
    std::printf("criterion %02d: PASS - %s\n", id, label.c_str());
  } else {
    ++g_failed;
    std::printf("criterion %02d: FAIL - %s: %s\n", id, label.c_str(), problems.front().c_str());
    for (size_t i = 1; i < problems.size(); ++i) {
      std::printf("              also: %s\n", problems[i].c_str());
    }
  }
  std::fflush(stdout);
}

void criterion_axiom_suite(Problems& p) {
  const ReportOptions opt;
  for (const std::string& name : good_fixtures()) {
    const CommandResult res = cmd_validate(load(name), opt);
    expect(p, res.exit_code == 0, name + " failed validation");
  }
  const CommandResult counit = cmd_validate(load("broken_counit"), opt);
  expect(p, counit.exit_code == 1, "broken_counit validated cleanly");
  expect(p, counit.text.find("witness (left counit law) at (1)") != std::string::npos,
         "broken_counit is missing the counit witness");
  const CommandResult balancing = cmd_validate(load("broken_balancing"), opt);
  expect(p, balancing.exit_code == 1, "broken_balancing validated cleanly");
  expect(p, balancing.text.find("witness (right associativity)") != std::string::npos,
         "broken_balancing is missing the associativity witness");
}

void criterion_acyclicity(Problems& p) {
  const Instance inst = load("f2_f4_sweedler");
  const Algebra& r = inst.coring.R;
  const GaloisResult gal = galois_map(inst.coring, inst.grouplike);
  expect(p, gal.galois, "the comparison map is not bijective");
  expect(p, verify_free_basis(gal.coinv.inclusion, {r.element(0), r.element(1)}),
         "{1, t} is not certified as a free basis");

  const AmitsurContext ctx(inst.coring, inst.grouplike, 4);
  const std::vector<Index> h = cohomology(ctx);
  expect(p, h == std::vector<Index>({1, 0, 0, 0}),
         "rank cohomology is not [1, 0, 0, 0]");

  const HomotopyResult hom = contracting_homotopy(ctx, gal);
  expect(p, hom.report.passed("homotopy identity"), "h d + d h = id fails");
  expect(p, hom.report.ok(), "the contracting homotopy is not well defined");
  // two independent computations of exactness must agree
  for (size_t n = 1; n < h.size(); ++n) {
    expect(p, h[n] == 0, "rank computation disagrees with the homotopy");
  }
}

// r -> r.1^{(x) n}, the canonical identification of every power with R.
Mat trivial_iota(const AmitsurContext& ctx, const Algebra& r, Index n) {
  Mat out = Mat::Constant(ctx.dim(n), r.dim(), r.field.zero());
  for (Index i = 0; i < r.dim(); ++i) {
    Vec amb = unit_vec(r.dim(), i);
    for (Index k = 1; k < n; ++k) amb = kron_vec(amb, r.unit);
    out.col(i) = ctx.full_proj(n) * amb;
  }
  return out;
}

void criterion_trivial_oracle(Problems& p) {
  for (const std::string& name : {std::string("trivial_f2"), std::string("trivial_q")}) {
    const Instance inst = load(name);
    const Field& f = inst.field;
    const Index dim_r = inst.coring.R.dim();
    const AmitsurContext ctx(inst.coring, inst.grouplike, 4);
    for (Index n = 0; n <= 4; ++n) {
      expect(p, ctx.dim(n) == dim_r, name + ": power " + std::to_string(n) + " is not R");
    }
    // alternating (0, id, 0, id, ...) under the identification of powers with R
    for (Index n = 0; n < 4; ++n) {
      const Mat next = trivial_iota(ctx, inst.coring.R, n + 1);
      expect(p, rank_of(next, f) == dim_r,
             name + ": the identification with R fails at degree " + std::to_string(n + 1));
      const bool ok = n % 2 == 0
                          ? is_zero_mat(ctx.d(n))
                          : mats_equal(Mat(ctx.d(n) * trivial_iota(ctx, inst.coring.R, n)), next);
      expect(p, ok, name + ": d at degree " + std::to_string(n) + " does not alternate");
    }
    std::vector<Index> want = {dim_r, 0, 0, 0};
    expect(p, cohomology(ctx) == want, name + ": cohomology is not [dim R, 0, 0, 0]");
  }
}

void criterion_flat_round_trip(Problems& p) {
  for (const std::string& name : proper_fixtures()) {
    const Instance inst = load(name);
    const AmitsurContext ctx(inst.coring, inst.grouplike, 2);
    const ReducedContext rc = reduced_context(ctx);

    std::vector<Comodule> comodules;
    comodules.push_back(regular_comodule(inst.coring, inst.grouplike));
    comodules.push_back(coring_comodule(inst.coring));
    for (const ModuleEntry& entry : inst.modules) {
      if (entry.coaction_lift.has_value()) {
        comodules.push_back(
            make_comodule(entry.name, entry.module, inst.coring, *entry.coaction_lift));
      }
    }
    if (inst.entwining.has_value() && inst.entwining_coaction.has_value()) {
      comodules.push_back(grouplike_from_entwined_algebra(*inst.entwining, inst.coring,
                                                          *inst.entwining_coaction)
                              .a_comodule);
    }

    for (const Comodule& com : comodules) {
      const std::string where = name + "/" + com.name;
      const Connection cn = coaction_to_connection(ctx, rc, com);
      const CurvatureValue cv = curvature(ctx, rc, cn);
      expect(p, is_zero_mat(cv.matrix), where + ": induced connection is not flat");
      const Comodule back = connection_to_coaction(ctx, rc, cn);
      expect(p, mats_equal(back.coaction, com.coaction),
             where + ": coaction is not recovered exactly");
    }
  }

  // a generated non-flat connection must fail coassociativity with a
  // witness matching its curvature
  const Instance qx = load("q_qx2_sweedler");
  const AmitsurContext ctx(qx.coring, qx.grouplike, 2);
  const ReducedContext rc = reduced_context(ctx);
  const Algebra& r = qx.coring.R;
  const Bimodule m = right_module(r.name, r, r.space, r.mult);
  const std::optional<Connection> bad = nonflat_connection(ctx, rc, m);
  expect(p, bad.has_value(), "no non-flat connection was generated");
  if (bad.has_value()) {
    const CurvatureValue cv = curvature(ctx, rc, *bad);
    expect(p, !is_zero_mat(cv.matrix), "the generated connection is flat");
    const Comodule bent = connection_to_coaction(ctx, rc, *bad);
    const CheckReport rep = check_comodule(qx.coring, bent);
    expect(p, !rep.passed("coassociative"), "the derived coaction is coassociative");
    bool witnessed = false;
    for (const CheckIssue& issue : rep.issues) {
      if (issue.check == "coassociative") witnessed = true;
    }
    expect(p, witnessed, "no coassociativity witness was recorded");
    const Mat defect = coassociativity_defect(ctx, bad->forms, section_from_connection(*bad));
    expect(p, mats_equal(Mat(bad->forms.basis[2] * cv.matrix), defect),
           "curvature does not equal the coassociativity defect");
  }
}

void criterion_existence_vs_projectivity(Problems& p) {
  const Instance inst = load("q_qx2_sweedler");
  const AmitsurContext ctx(inst.coring, inst.grouplike, 2);
  const ReducedContext rc = reduced_context(ctx);
  const struct {
    const char* name;
    bool expected;
  } cases[] = {{"A", true}, {"A_mod_x", false}, {"A2", true}};
  for (const auto& cs : cases) {
    const ModuleEntry* entry = inst.find_module(cs.name);
    expect(p, entry != nullptr, std::string("module ") + cs.name + " is missing");
    if (entry == nullptr) continue;
    const bool exists = connection_exists(ctx, rc, entry->module).has_value();
    const bool projective = is_projective(entry->module);
    expect(p, exists == cs.expected,
           std::string(cs.name) + ": connection existence has the wrong verdict");
    expect(p, projective == cs.expected,
           std::string(cs.name) + ": projectivity oracle has the wrong verdict");
    const CuntzQuillen cq = cuntz_quillen_check(inst.coring.R, entry->module);
    expect(p, cq.agree && cq.report.ok(),
           std::string(cs.name) + ": existence and projectivity disagree");
  }
}

void criterion_theta(Problems& p) {
  for (const std::string& name :
       {std::string("f2_f4_sweedler"), std::string("q_qx2_sweedler")}) {
    const Instance inst = load(name);
    const SweedlerData sd = sweedler_coring(inst.coring.R, *inst.inclusion);
    const AmitsurContext ctx(sd.coring, sd.g, 3);
    const ReducedContext rc = reduced_context(ctx);
    const UniversalForms u = universal_forms(inst.coring.R, sd.incl, 3);
    const ThetaResult th = theta_iso(sd, ctx, rc, u);
    expect(p, th.report.passed("bijective"), name + ": theta is not bijective");
    expect(p, th.report.passed("commutes with d"), name + ": theta does not commute with d");
    expect(p, th.report.passed("multiplicative"), name + ": theta is not multiplicative");
    expect(p, th.report.ok(), name + ": theta comparison failed");
  }
}

void criterion_dual_ring(Problems& p) {
  const Instance inst = load("f2_f4_sweedler");
  const Coring& c = inst.coring;
  const Field& f = inst.field;
  const Index dr = c.R.dim();

  const DualRing d = dual_ring(c);
  expect(p, d.algebra.dim() == 4, "the dual ring does not have dimension 4");
  expect(p, check_algebra_axioms(d.algebra).ok(), "the dual ring is not associative unital");
  expect(p, mats_equal(d.to_hom(d.algebra.unit), c.counit),
         "the unit of the dual ring is not the counit");

  const Comodule reg = regular_comodule(c, inst.grouplike);
  const Bimodule act = dual_action(c, d, reg);
  expect(p, check_bimodule(act).ok(), "the dual action is not a module structure");
  // stacking xi_i . r_j exhibits the action as a bijection onto End(R)
  Mat stacked = Mat::Constant(dr * dr, d.algebra.dim(), f.zero());
  for (Index i = 0; i < d.algebra.dim(); ++i) {
    for (Index j = 0; j < dr; ++j) {
      for (Index t = 0; t < dr; ++t) stacked(j * dr + t, i) = act.left_action(t, i * dr + j);
    }
  }
  expect(p, rank_of(stacked, f) == dr * dr,
         "the dual ring is not isomorphic to the endomorphism algebra");

  const Augmentation aug = augmentation(c, d, inst.grouplike);
  expect(p, aug.report.ok(), "the augmentation identity fails");
}

void criterion_structural_isos(Problems& p) {
  for (const std::string& name : proper_fixtures()) {
    const Instance inst = load(name);
    const Coring& c = inst.coring;
    const Vec& g = inst.grouplike;
    expect(p, verify_coinv_C_iso(c, g).ok(), name + ": R is not the coinvariants of C");
    for (const Comodule& com : {regular_comodule(c, g), coring_comodule(c)}) {
      const HomCoinvResult hc = hom_coinv_iso(c, g, com);
      expect(p, hc.report.ok() && hc.hom_dim == hc.coinv_dim,
             name + "/" + com.name + ": hom space does not match the coinvariants");
    }
    const GrouplikeRing gr = grouplike_ring_structure(c, g);
    expect(p, gr.report.ok() && check_algebra_axioms(gr.ring).ok(),
           name + ": the transported ring structure fails");
    expect(p, decomposition_maps(c, g).report.ok(), name + ": the splittings of C fail");
    expect(p, verify_structure_theorem(c, g).ok(),
           name + ": the dg reconstruction is not isomorphic");
  }
}

void criterion_zero_grouplike(Problems& p) {
  for (const std::string& name : good_fixtures()) {
    const Instance inst = load(name);
    const Field& f = inst.field;
    const Vec zero = Vec::Constant(inst.coring.dim(), f.zero());
    const AmitsurContext ctx(inst.coring, zero, 3);
    expect(p, ctx.semi_grouplike(), name + ": zero is not recognized as semi-grouplike");
    for (Index n = 0; n + 1 < 3; ++n) {
      expect(p, is_zero_mat(Mat(ctx.d(n + 1) * ctx.d(n))),
             name + ": d squared is nonzero at degree " + std::to_string(n));
    }
  }
}

void criterion_entwining(Problems& p) {
  for (const std::string& name :
       {std::string("flip_entwining"), std::string("superflip_entwining")}) {
    const Instance inst = load(name);
    const EntwiningData& e = *inst.entwining;
    const Mat& rho = *inst.entwining_coaction;
    const AmitsurContext ctx(inst.coring, inst.grouplike, 3);
    const ReducedContext rc = reduced_context(ctx);

    const EntwiningOracle oracle = entwining_oracle(e, inst.coring, rho, ctx);
    expect(p, oracle.report.passed("iterated entwining agrees"),
           name + ": the iterated entwining recursion disagrees");
    expect(p, oracle.report.passed("differential matches"),
           name + ": d does not match the split model");
    expect(p, oracle.report.ok(), name + ": the split model comparison failed");

    const EntwinedConnection ac = entwining_flat_connection_ac(e, inst.coring, rho, ctx, rc, 1);
    expect(p, ac.report.passed("matches the comodule connection"),
           name + ": the explicit connection differs from the comodule one");
    expect(p, ac.report.passed("flat"), name + ": the explicit connection is not flat");
    expect(p, ac.report.ok(), name + ": the explicit connection fails its checks");

    const EntwinedConnection ca = entwining_flat_connection_ca(e, inst.coring, rho, ctx, rc, 1);
    expect(p, ca.report.passed("connection: Leibniz rule"),
           name + ": the opposite-order connection fails the Leibniz rule");
    expect(p, ca.report.passed("flat"), name + ": the opposite-order connection is not flat");
    expect(p, ca.report.ok(), name + ": the opposite-order connection fails its checks");
  }
}

}  // namespace

int main() {
  run(1, "axiom suite over the bundled instances", 5.0, criterion_axiom_suite);
  run(2, "acyclicity of the faithfully flat Sweedler complex", 10.0, criterion_acyclicity);
  run(3, "trivial coring differential alternates", 0, criterion_trivial_oracle);
  run(4, "flat connections and coactions round trip", 0, criterion_flat_round_trip);
  run(5, "connection existence matches projectivity", 0, criterion_existence_vs_projectivity);
  run(6, "reduced forms match universal forms degreewise", 0, criterion_theta);
  run(7, "dual ring is the endomorphism algebra", 0, criterion_dual_ring);
  run(8, "structural isomorphisms induced by the grouplike", 0, criterion_structural_isos);
  run(9, "zero grouplike differential squares to zero", 0, criterion_zero_grouplike);
  run(10, "entwined complexes and their flat connections", 0, criterion_entwining);
  if (g_failed != 0) {
    std::printf("%d criterion(s) failed\n", g_failed);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}

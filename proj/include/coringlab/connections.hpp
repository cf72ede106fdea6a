#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coringlab/amitsur.hpp"

namespace coringlab {

// The spaces M (x)_R Omega^k for a right R-module M, with Omega the reduced
// complex of the context, realized inside the tower M (x)_R C^{(x)_R k}.
struct ModuleForms {
  Bimodule M;
  Index max_degree = 0;
  Tower tower;                    // level k = M (x)_R C^{(x)_R k}
  std::vector<Mat> basis;         // basis[k]: form coords -> tower level k coords
  std::vector<Mat> proj;          // proj[k]: M (x)_k Omega^k plain coords -> form coords
  std::vector<Mat> sec;           // a section of proj[k]
  std::vector<Mat> right_action;  // right R-action on form coords (bimodule layout)
  Mat counit_map;                 // M (x) eps : level 1 -> M
  Mat pure_g;                     // m -> m (x) g : M -> level 1
  Mat d0;                         // degree-0 reduced differential of the context

  Index dim(Index k) const;  // k = 0 gives M.dim()
  Mat right_op(Index k, const Vec& r) const;
};

ModuleForms module_forms(const AmitsurContext& ctx, const ReducedContext& rc, const Bimodule& m);

// A connection is stored by its restriction to M; the action on all of
// M (x)_R Omega is recovered from the Leibniz rule.
struct Connection {
  ModuleForms forms;
  Mat nabla;  // forms.dim(1) x M.dim
};

Connection make_connection(ModuleForms forms, Mat nabla);

// nabla(m.r) = nabla(m).r + m (x) d(r) on all basis pairs (m, r).
CheckReport check_connection(const Connection& cn);

// The degree-k piece nabla(m (x) w) = nabla(m) w + m (x) d(w), verified to
// descend through the balancing relations; degree 0 returns nabla itself.
Mat extension_matrix(const AmitsurContext& ctx, const ReducedContext& rc, const Connection& cn,
                     Index k);
GradedElement extend_connection(const AmitsurContext& ctx, const ReducedContext& rc,
                                const Connection& cn, const GradedElement& x);

struct CurvatureValue {
  Mat matrix;          // forms.dim(2) x M.dim
  CheckReport report;  // right R-linearity of the curvature
};

CurvatureValue curvature(const AmitsurContext& ctx, const ReducedContext& rc,
                         const Connection& cn);
bool is_flat(const AmitsurContext& ctx, const ReducedContext& rc, const Connection& cn);

// j : M -> M (x)_R C in tower level-1 coordinates.  Rejects maps that are not
// right R-linear sections of M (x) eps; nabla_j = j - (. (x) g).
Connection connection_from_section(const AmitsurContext& ctx, const ReducedContext& rc,
                                   ModuleForms forms, const Mat& j);
Mat section_from_connection(const Connection& cn);

// A connection exists iff M (x) eps admits a right R-linear section.
std::optional<Connection> connection_exists(const AmitsurContext& ctx, const ReducedContext& rc,
                                            const Bimodule& m);

// Deterministic counterexample generator: perturbs an existing section inside
// ker(M (x) eps) and keeps the first perturbation with nonzero curvature.
std::optional<Connection> nonflat_connection(const AmitsurContext& ctx, const ReducedContext& rc,
                                             const Bimodule& m);

// (rho (x) C) rho - (M (x) Delta) rho in tower level-2 coordinates, for rho
// given in level-1 coordinates.
Mat coassociativity_defect(const AmitsurContext& ctx, const ModuleForms& forms, const Mat& rho);

// The mutually inverse assignments rho <-> nabla = rho - (. (x) g).
Connection coaction_to_connection(const AmitsurContext& ctx, const ReducedContext& rc,
                                  const Comodule& com);
Comodule connection_to_coaction(const AmitsurContext& ctx, const ReducedContext& rc,
                                const Connection& cn, std::string name = "");

// A right R-linear f : M -> N is a comodule map iff it commutes with the
// associated connections; both commuting-square defects are returned.
struct MorphismCheck {
  bool comodule_map = false;
  bool connection_map = false;
  Mat comodule_defect;    // M -> N-side level 1
  Mat connection_defect;  // M -> N-side form coords
  CheckReport report;
};

MorphismCheck morphism_correspondence(const AmitsurContext& ctx, const ReducedContext& rc,
                                      const Comodule& mcom, const Comodule& ncom, const Mat& f);

// Over the Sweedler coring of k -> A the counit collapses to the module
// action, and a connection exists precisely when M is projective.
struct CuntzQuillen {
  bool projective = false;
  bool connection = false;
  bool agree = false;
  std::optional<Connection> con;
  CheckReport report;
};

CuntzQuillen cuntz_quillen_check(const Algebra& a, const Bimodule& m);

// Entwined modules A (x) C0^{(x)n} and C0 (x) A^{(x)n} with their flat
// connections; the ac version is cross-checked against the connection of the
// last-factor comodule structure.
struct EntwinedConnection {
  Connection con;
  Comodule comodule;
  CheckReport report;
};

EntwinedConnection entwining_flat_connection_ac(const EntwiningData& e, const Coring& ct,
                                                const Mat& rho_a, const AmitsurContext& ctx,
                                                const ReducedContext& rc, Index n);
EntwinedConnection entwining_flat_connection_ca(const EntwiningData& e, const Coring& ct,
                                                const Mat& rho_a, const AmitsurContext& ctx,
                                                const ReducedContext& rc, Index n);

}  // namespace coringlab

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coringlab/algebra.hpp"

namespace coringlab {

// Coassociative counital comonoid in (R,R)-bimodules.  The comultiplication
// is stored as a chosen k-linear lift C -> C (x)_k C; all axioms are checked
// against its projection into C (x)_R C.
struct Coring {
  std::string name;
  Algebra R;
  Bimodule C;      // (R,R)-bimodule
  Mat delta_lift;  // dim^2 x dim
  Mat counit;      // R.dim x dim
  BalancedTensor CC;
  Mat delta;  // dim(CC) x dim, projected comultiplication

  static Coring make(std::string name, Algebra R, Bimodule C, Mat delta_lift, Mat counit);
  Index dim() const { return C.dim(); }
};

// C = R with the canonical identifications R = R (x)_R R.
Coring trivial_coring(const Algebra& r);

struct SweedlerData {
  Coring coring;
  BalancedTensor RsR;  // R (x)_S R with projection/section
  AlgebraMap incl;     // S -> R
  Vec g;               // class of 1 (x) 1
};

// The canonical coring R (x)_S R of a ring extension.
SweedlerData sweedler_coring(const Algebra& r, const AlgebraMap& s_incl);

CheckReport check_coring_axioms(const Coring& c);
CheckReport check_coring_map(const Coring& src, const Coring& dst, const Mat& f);

struct GrouplikeInfo {
  bool grouplike = false;       // comultiplicative, counital, nonzero
  bool semi_grouplike = false;  // comultiplicative only (zero allowed)
  Vec u;                        // counit of g; idempotent in the semi case
  CheckReport report;
};

GrouplikeInfo verify_grouplike(const Coring& c, const Vec& g);

// Exhaustive enumeration over a prime field (state space capped at 2^20).
std::vector<Vec> search_grouplikes(const Coring& c);

// Right comodule with a chosen k-linear lift of the coaction.
struct Comodule {
  std::string name;
  Bimodule M;         // right R-module
  Mat coaction_lift;  // (M.dim * C.dim) x M.dim
  BalancedTensor MC;  // M (x)_R C
  Mat coaction;       // dim(MC) x M.dim
};

Comodule make_comodule(std::string name, Bimodule m, const Coring& c, Mat coaction_lift);
CheckReport check_comodule(const Coring& c, const Comodule& m);

// R with coaction r -> g.r.
Comodule regular_comodule(const Coring& c, const Vec& g);
// C with coaction = comultiplication.
Comodule coring_comodule(const Coring& c);

// Basis of {m : rho(m) = m (x) g}.
std::vector<Vec> coinvariants(const Coring& c, const Comodule& m, const Vec& g);

// Coinvariants of R itself, verified against the centralizer of g and closed
// into a subalgebra.
Subalgebra coinvariant_subring(const Coring& c, const Vec& g);

// M (x)_S R with coaction m (x) r -> m (x) g.r, for a right S-module M.
Comodule induction_comodule(const Coring& c, const Vec& g, const AlgebraMap& s_incl,
                            const Bimodule& m_s);

// Basis of right-linear comodule maps M -> N.
std::vector<Mat> comodule_hom_space(const Coring& c, const Comodule& m, const Comodule& n);

// Entwining of an algebra A and a coalgebra C0 over the ground field,
// given by psi : C0 (x) A -> A (x) C0.
struct EntwiningData {
  std::string name;
  Algebra A;
  FinSpace Cspace;
  Mat delta0;  // C0.dim^2 x C0.dim
  Mat eps0;    // 1 x C0.dim
  Mat psi;     // (A.dim * C0.dim) x (C0.dim * A.dim)
};

CheckReport check_coalgebra(const EntwiningData& e);
// Validity of the entwining is defined by the associated A (x) C0 structure
// satisfying the bimodule and coring axioms.
CheckReport check_entwining(const EntwiningData& e);
Coring entwining_to_coring(const EntwiningData& e);  // throws Error when invalid

struct EntwinedGrouplike {
  Vec g;               // rho_A(1) in A (x) C0 coordinates
  Comodule a_comodule;  // A as an entwined module
  CheckReport report;
};

// Certifies rho_A as an entwined-module structure on A and extracts the
// resulting grouplike element of A (x) C0.
EntwinedGrouplike grouplike_from_entwined_algebra(const EntwiningData& e, const Coring& ct,
                                                  const Mat& rho_a);

// Left-linear maps C -> R with convolution-style product through the
// comultiplication; the counit is the unit.
struct DualRing {
  Algebra algebra;
  std::vector<Mat> hom_basis;  // each R.dim x C.dim
  Mat span;                    // flattened basis columns
  Mat to_hom(const Vec& coords) const;
  Vec to_coords(const Mat& hom) const;
};

DualRing dual_ring(const Coring& c);

// M as a left module over the dual ring via xi.m = m_(0) . xi(m_(1)).
Bimodule dual_action(const Coring& c, const DualRing& d, const Comodule& m);

struct Augmentation {
  Mat pi;  // R.dim x dual dim
  CheckReport report;
};

Augmentation augmentation(const Coring& c, const DualRing& d, const Vec& g);

// The two splittings of C induced by a grouplike: c -> (eps(c), g.eps(c) - c)
// and c -> (eps(c), c - eps(c).g), with block coordinates R ++ ker eps.
struct Decomposition {
  Mat ker_eps;  // columns span ker eps
  Mat u_r, u_r_inv;
  Mat u_l, u_l_inv;
  CheckReport report;
};

Decomposition decomposition_maps(const Coring& c, const Vec& g);

// Ring structure transported onto C by either splitting: unit g, counit a
// ring map split by r -> r.g and r -> g.r.
struct GrouplikeRing {
  Algebra ring;
  CheckReport report;
};

GrouplikeRing grouplike_ring_structure(const Coring& c, const Vec& g);

// r -> r.g is an isomorphism from R onto the coinvariants of C, inverse eps.
CheckReport verify_coinv_C_iso(const Coring& c, const Vec& g);

struct HomCoinvResult {
  Index hom_dim = 0;
  Index coinv_dim = 0;
  CheckReport report;
};

// Comodule maps R -> M correspond to coinvariants via f -> f(1).
HomCoinvResult hom_coinv_iso(const Coring& c, const Vec& g, const Comodule& m);

}  // namespace coringlab

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coringlab/coring.hpp"

namespace coringlab {

// Element of the tensor ring: degree n lives in Omega^n.
struct GradedElement {
  Index degree = 0;
  Vec coords;
};

// The tensor powers Omega^0 = R, Omega^n = C^{(x)_R n} together with the
// differential induced by a (semi-)grouplike element:
//   d(r) = g.r - r.g
//   d(c1 (x) ... (x) cn) = g (x) c1 (x) ... (x) cn
//                          + sum_i (-1)^i c1 (x) ... delta(ci) ... (x) cn
//                          + (-1)^{n+1} c1 (x) ... (x) cn (x) g.
class AmitsurContext {
 public:
  AmitsurContext(const Coring& c, const Vec& g, Index max_degree = 4);

  const Coring& coring() const { return c_; }
  const Vec& grouplike() const { return g_; }
  Index max_degree() const { return max_degree_; }
  bool semi_grouplike() const { return semi_; }
  bool grouplike_proper() const { return proper_; }

  Index dim(Index n) const;
  const FinSpace& space(Index n) const;
  const Mat& d(Index n) const;          // Omega^n -> Omega^{n+1}, 0 <= n < max_degree
  const Mat& ambient_d(Index n) const;  // same map on the plain k-tensor ambients
  Mat full_proj(Index n) const;         // C^{(x)_k n} -> Omega^n (identity for n = 0)
  Mat full_section(Index n) const;

  // action of r in R on Omega^n (first factor from the left, last from the right)
  Mat left_act(Index n, const Vec& r) const;
  Mat right_act(Index n, const Vec& r) const;

  // concatenation product Omega^m x Omega^n -> Omega^{m+n}
  GradedElement product(const GradedElement& x, const GradedElement& y) const;

  const std::vector<Vec>& s_basis() const { return s_basis_; }  // centralizer of g

 private:
  Coring c_;
  Vec g_;
  Index max_degree_;
  bool semi_ = false;
  bool proper_ = false;
  std::optional<Tower> tower_;
  std::vector<Mat> d_;
  std::vector<Mat> amb_d_;
  std::vector<Vec> s_basis_;
};

// d^2 = 0, graded Leibniz rule, S-bilinearity of d, d(S) = 0.
CheckReport check_dg_axioms(const AmitsurContext& ctx);

// The subcomplex R, ker eps, (ker eps)^{(x)_R 2}, ... realized as verified
// subspaces of the full powers; requires a proper grouplike.
struct ReducedContext {
  Index max_degree = 0;
  std::vector<Mat> basis;  // basis[n]: reduced coords -> Omega^n coords
  std::vector<Mat> d;      // d[n] in reduced coordinates
  Index dim(Index n) const { return basis[static_cast<size_t>(n)].cols(); }
};

ReducedContext reduced_context(const AmitsurContext& ctx);

// Product of reduced elements, computed upstairs and restricted back.
GradedElement reduced_product(const AmitsurContext& ctx, const ReducedContext& rc,
                              const GradedElement& x, const GradedElement& y);

// Betti numbers of a finite chain  d[n] : dims[n] -> dims[n+1].
std::vector<Index> chain_cohomology(const std::vector<Mat>& d, const std::vector<Index>& dims,
                                    const Field& f);
std::vector<Index> cohomology(const AmitsurContext& ctx);
std::vector<Index> cohomology(const AmitsurContext& ctx, const ReducedContext& rc);

// chi : R (x)_S R -> C, r (x) r' -> r.g.r', for S the coinvariants of g.
struct GaloisResult {
  SweedlerData sweedler;
  Subalgebra coinv;
  Mat chi;
  std::optional<Mat> chi_inv;
  bool galois = false;
  CheckReport report;
};

GaloisResult galois_map(const Coring& c, const Vec& g);

// In C (x)_S R: chi^{-1}(c) g-composed both ways agrees with the
// comultiplication contracted against chi^{-1}.
CheckReport verify_star_identity(const Coring& c, const Vec& g, const GaloisResult& gal);

// h_n : Omega^n (x)_S R -> Omega^{n-1} (x)_S R contracting the extended
// complex of a Galois coring; verifies h d + d h = id in degrees 1..max-1.
struct HomotopyResult {
  std::vector<Mat> h;  // h[n] for n >= 1
  CheckReport report;
};

HomotopyResult contracting_homotopy(const AmitsurContext& ctx, const GaloisResult& gal);

// Relative universal forms R (x)_S (R/S)^{(x)_S n} with
// d(r0 (x) v1 ... vn) = 1 (x) pi(r0) (x) v1 ... vn and the merge product.
struct UniversalForms {
  Algebra R;
  AlgebraMap incl;
  QuotientSpace rs;       // R/S with a chosen section
  Bimodule rs_bimodule;   // R/S as an (S,S)-bimodule
  Index max_degree = 0;
  std::vector<Mat> d;

  Index dim(Index n) const;
  Mat full_proj(Index n) const;
  Mat full_section(Index n) const;
  GradedElement product(const GradedElement& x, const GradedElement& y) const;

  // internal: tower over the quotient step
  std::optional<Tower> tower;
};

// section_seed deterministically perturbs the chosen section of R -> R/S;
// all public structure maps must be independent of it.
UniversalForms universal_forms(const Algebra& r, const AlgebraMap& incl, Index max_degree,
                               unsigned long long section_seed = 0);

CheckReport check_universal_dg(const UniversalForms& u);

// Independent model of the Sweedler-coring complex: R^{(x)_S (n+1)} with the
// alternating sum of unit insertions, compared through the shuffle
// mu(a1 (x) b1 (x) ... (x) an (x) bn) = a1 (x) b1 a2 (x) ... (x) bn.
struct SweedlerOracle {
  std::optional<Tower> tower;  // level n = R^{(x)_S (n+1)}
  std::vector<Mat> d;          // oracle differentials
  std::vector<Mat> mu;         // Omega^n(C) -> level n
  CheckReport report;          // bijectivity + intertwining
};

SweedlerOracle sweedler_oracle(const SweedlerData& sd, const AmitsurContext& ctx);

// Degreewise comparison of the reduced complex with universal forms through
// theta_n = (R (x) pi^{(x) n}) composed with mu_n.
struct ThetaResult {
  std::vector<Mat> theta;  // reduced coords -> universal level coords
  CheckReport report;
};

ThetaResult theta_iso(const SweedlerData& sd, const AmitsurContext& ctx,
                      const ReducedContext& rc, const UniversalForms& u);

// Independent model of the entwining-coring complex on A (x) C0^{(x) n},
// with psi^n built by the iterated-entwining recursion.
struct EntwiningOracle {
  std::vector<Mat> psi_n;   // psi_n[n]: C0^{(x)n} (x) A -> A (x) C0^{(x)n}, n >= 1
  std::vector<Mat> nu;      // A (x) C0^{(x)n} -> Omega^n
  std::vector<Mat> nu_inv;
  std::vector<Mat> d_hat;   // explicit differential on the model spaces
  CheckReport report;
};

EntwiningOracle entwining_oracle(const EntwiningData& e, const Coring& ct, const Mat& rho_a,
                                 const AmitsurContext& ctx);

// Differential graded data (R, Omega^1, d) collapsed into a coring R.g ++ Omega^1.
struct DgInput {
  Algebra R;
  Bimodule omega1;  // (R,R)-bimodule
  Mat d0;           // R.dim -> omega1.dim
  Mat d1_lift;      // omega1.dim^2 x omega1.dim, values in omega1 (x)_k omega1
};

struct DgCoring {
  Coring coring;
  Vec g;
  CheckReport report;
};

DgCoring coring_from_dg(const DgInput& in);

// Round trip: the coring rebuilt from its own reduced dg data is isomorphic
// to the original via (r, w) -> r.g + w.
CheckReport verify_structure_theorem(const Coring& c, const Vec& g);

}  // namespace coringlab

#pragma once

#include <vector>

#include "coringlab/algebra.hpp"
#include "coringlab/coring.hpp"

namespace testutil {

using namespace coringlab;

struct Lcg {
  unsigned long long state;
  explicit Lcg(unsigned long long seed) : state(seed) {}
  long long next(long long lo, long long hi) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return lo + static_cast<long long>((state >> 33) % static_cast<unsigned long long>(hi - lo + 1));
  }
};

// Builds an algebra from the products of basis elements: products[i][j] is
// the coordinate vector of e_i * e_j.
inline Algebra make_algebra(std::string name, const Field& f,
                            std::vector<std::string> labels,
                            const std::vector<std::vector<std::vector<long long>>>& products,
                            const std::vector<long long>& unit) {
  const Index n = static_cast<Index>(labels.size());
  Mat mult = Mat::Constant(n, n * n, f.zero());
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index r = 0; r < n; ++r) {
        mult(r, i * n + j) = f.from_long(products[i][j][r]);
      }
    }
  }
  Vec u(n);
  for (Index r = 0; r < n; ++r) u(r) = f.from_long(unit[r]);
  return Algebra::make(std::move(name), FinSpace::make(f, n, std::move(labels)), mult, u);
}

// GF(4) = GF(2)[t]/(t^2+t+1), basis {1, t}.
inline Algebra f4_algebra() {
  return make_algebra("F4", Field::GF(2), {"1", "t"},
                      {{{1, 0}, {0, 1}}, {{0, 1}, {1, 1}}}, {1, 0});
}

// Q[x]/(x^2), basis {1, x}.
inline Algebra qx2_algebra() {
  return make_algebra("A", Field::QQ(), {"1", "x"},
                      {{{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}}, {1, 0});
}

// Group algebra Q[C2], basis {1, s} with s^2 = 1.
inline Algebra qc2_algebra() {
  return make_algebra("QC2", Field::QQ(), {"1", "s"},
                      {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}}, {1, 0});
}

// Upper triangular 2x2 matrices, basis {e11, e12, e22}; noncommutative.
inline Algebra upper_tri_algebra(const Field& f) {
  return make_algebra("UT2", f, {"e11", "e12", "e22"},
                      {{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}},
                       {{0, 0, 0}, {0, 0, 0}, {0, 1, 0}},
                       {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}},
                      {1, 0, 1});
}

inline AlgebraMap f2_into_f4() {
  const Algebra f2 = ground_field_algebra(Field::GF(2), "F2");
  const Algebra f4 = f4_algebra();
  Mat m = Mat::Constant(2, 1, Field::GF(2).zero());
  m(0, 0) = Field::GF(2).one();
  return AlgebraMap::make(f2, f4, m);
}

inline AlgebraMap q_into_qx2() {
  const Algebra k = ground_field_algebra(Field::QQ(), "Q");
  const Algebra a = qx2_algebra();
  Mat m = Mat::Constant(2, 1, Field::QQ().zero());
  m(0, 0) = Field::QQ().one();
  return AlgebraMap::make(k, a, m);
}

// Coalgebra with every basis vector set to delta(e) = e (x) e, eps(e) = 1.
inline std::pair<Mat, Mat> pointwise_coalgebra(const FinSpace& sp) {
  const Field& f = sp.field;
  Mat delta0 = Mat::Constant(sp.dim * sp.dim, sp.dim, f.zero());
  Mat eps0 = Mat::Constant(1, sp.dim, f.zero());
  for (Index j = 0; j < sp.dim; ++j) {
    delta0.col(j) = kron_vec(unit_vec(sp.dim, j), unit_vec(sp.dim, j));
    eps0(0, j) = f.one();
  }
  return {delta0, eps0};
}

// Two-dimensional coalgebra on {1, s}: 1 grouplike, s primitive.
inline std::pair<Mat, Mat> superline_coalgebra(const Field& f) {
  Mat delta0 = Mat::Constant(4, 2, f.zero());
  delta0.col(0) = kron_vec(unit_vec(2, 0), unit_vec(2, 0));
  delta0.col(1) = kron_vec(unit_vec(2, 1), unit_vec(2, 0)) +
                  kron_vec(unit_vec(2, 0), unit_vec(2, 1));
  Mat eps0 = Mat::Constant(1, 2, f.zero());
  eps0(0, 0) = f.one();
  return {delta0, eps0};
}

// psi(c_k (x) a_b) = sign(k, b) * a_b (x) c_k.
inline Mat flip_psi(const FinSpace& c, const FinSpace& a,
                    const std::vector<std::vector<long long>>& sign = {}) {
  const Field& f = c.field;
  Mat psi = Mat::Constant(a.dim * c.dim, c.dim * a.dim, f.zero());
  const TensorIndex in{c.dim, a.dim};
  for (Index k = 0; k < c.dim; ++k) {
    for (Index b = 0; b < a.dim; ++b) {
      const long long s = sign.empty() ? 1 : sign[static_cast<size_t>(k)][static_cast<size_t>(b)];
      psi.col(in.flat(k, b)) = f.from_long(s) * kron_vec(unit_vec(a.dim, b), unit_vec(c.dim, k));
    }
  }
  return psi;
}

// A = C = QC2 with the plain flip.
inline EntwiningData flip_entwining() {
  const Algebra a = qc2_algebra();
  const FinSpace c = FinSpace::make(a.field, 2, {"e1", "es"});
  auto [delta0, eps0] = pointwise_coalgebra(c);
  return EntwiningData{"flip", a, c, delta0, eps0, flip_psi(c, a.space)};
}

// C a single grouplike point over the algebra's field.
inline EntwiningData point_entwining(const Algebra& a) {
  const FinSpace c = FinSpace::make(a.field, 1, {"e"});
  auto [delta0, eps0] = pointwise_coalgebra(c);
  return EntwiningData{"point", a, c, delta0, eps0, flip_psi(c, a.space)};
}

// A = QC2 graded by the sign of s, C the super-line; the flip carries the
// Koszul sign (-1)^{|c||a|}.
inline EntwiningData superflip_entwining() {
  const Algebra a = qc2_algebra();
  const FinSpace c = FinSpace::make(a.field, 2, {"e1", "es"});
  auto [delta0, eps0] = superline_coalgebra(a.field);
  return EntwiningData{"superflip", a, c, delta0, eps0,
                       flip_psi(c, a.space, {{1, 1}, {1, -1}})};
}

// Same data with the sign attached to the whole row of s: psi(s (x) y) =
// -y (x) s for every y, which overshoots on y = 1.
inline EntwiningData literal_superflip_entwining() {
  EntwiningData e = superflip_entwining();
  e.name = "superflip-literal";
  e.psi = flip_psi(e.Cspace, e.A.space, {{1, 1}, {-1, -1}});
  return e;
}

}  // namespace testutil

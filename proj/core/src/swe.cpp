#include "owc/swe.hpp"

#include <cmath>

namespace owc::swe {

double wet_depth(const CellState& u) {
  const double h = u.depth();
  if (!(h > 0.0)) throw DryState(h);
  return h;
}

Vec2 flux(const CellState& u, double g) {
  const double h = wet_depth(u);
  return {{u.q,
           u.q * u.q / h + 0.5 * g * (h * h - u.h_rest * u.h_rest)}};
}

Mat2 jacobian(const CellState& u, double g) {
  const double h = wet_depth(u);
  const double v = u.q / h;
  return {{{0.0, 1.0}, {g * h - v * v, 2.0 * v}}};
}

namespace {
// Subcritical sound speed / velocity split shared by the eigen ops.
struct Char {
  double v;  // q/h
  double c;  // sqrt(g h)
};
Char subcritical_chars(const CellState& u, double g) {
  const double h = wet_depth(u);
  const double v = u.q / h;
  const double margin = g * h - v * v;
  if (!(margin > 0.0)) throw CriticalFlow(margin);
  return {v, std::sqrt(g * h)};
}
}  // namespace

EigenPair eigen(const CellState& u, double g) {
  const Char ch = subcritical_chars(u, g);
  EigenPair ep;
  ep.lambda_plus = ch.v + ch.c;
  ep.lambda_minus = ch.v - ch.c;
  const double np = std::sqrt(1.0 + ep.lambda_plus * ep.lambda_plus);
  const double nm = std::sqrt(1.0 + ep.lambda_minus * ep.lambda_minus);
  ep.e_plus = {{1.0 / np, ep.lambda_plus / np}};
  ep.e_minus = {{1.0 / nm, ep.lambda_minus / nm}};
  return ep;
}

RiemannInvariants riemann_invariants(const CellState& u, double g) {
  const double h = wet_depth(u);
  const double c = std::sqrt(g * h);
  return {u.q / h + 2.0 * c, u.q / h - 2.0 * c};
}

RiemannInvariants riemann_invariants_offset(const CellState& u, double g) {
  RiemannInvariants r = riemann_invariants(u, g);
  const double c0 = std::sqrt(g * u.h_rest);
  return {r.r_plus - 2.0 * c0, r.r_minus + 2.0 * c0};
}

Mat2x4 boundary_matrix() {
  Mat2x4 m;
  m[0][1] = -1.0;
  m[0][3] = 1.0;
  m[1][1] = 0.5;
  m[1][3] = 0.5;
  return m;
}

Lopatinskii lopatinskii(const CellState& u_minus, const CellState& u_plus,
                        double g) {
  // Outgoing eigenvectors scaled to second component 1: e = (1/lambda, 1).
  const EigenPair em = eigen(u_minus, g);
  const EigenPair ep = eigen(u_plus, g);
  const Vec2 e_out_minus{{1.0 / em.lambda_minus, 1.0}};
  const Vec2 e_out_plus{{1.0 / ep.lambda_plus, 1.0}};

  const Mat2x4 M = boundary_matrix();
  Lopatinskii lop;
  for (int r = 0; r < 2; ++r) {
    lop.L[r][0] = M[r][0] * e_out_minus[0] + M[r][1] * e_out_minus[1];
    lop.L[r][1] = M[r][2] * e_out_plus[0] + M[r][3] * e_out_plus[1];
  }
  lop.det = det(lop.L);
  if (std::abs(lop.det) < 1e-12)
    throw Singular("Lopatinskii determinant " + std::to_string(lop.det));
  lop.inv_norm = spectral_norm(inverse(lop.L));
  return lop;
}

Mat2 symmetrizer(const CellState& u, double g) {
  const Char ch = subcritical_chars(u, g);
  const double c2 = ch.c * ch.c;
  return {{{c2 + ch.v * ch.v, -ch.v}, {-ch.v, 1.0}}};
}

Mat2 weighted_symmetrizer(const CellState& u, double g, double w_plus,
                          double w_minus) {
  const Char ch = subcritical_chars(u, g);
  // E = [(1,1),(lambda_+, lambda_-)], E^{-1} = (1/2c) [[c-v, 1], [c+v, -1]].
  const double inv2c = 0.5 / ch.c;
  const double ei[2][2] = {{(ch.c - ch.v) * inv2c, inv2c},
                           {(ch.c + ch.v) * inv2c, -inv2c}};
  const double d[2] = {2.0 * ch.c * ch.c * w_plus, 2.0 * ch.c * ch.c * w_minus};
  Mat2 sw;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      sw[i][j] = d[0] * ei[0][i] * ei[0][j] + d[1] * ei[1][i] * ei[1][j];
  return sw;
}

Mat4 system_matrix4(const CellState& u_minus, const CellState& u_plus,
                    double g) {
  Mat2 am = jacobian(u_minus, g);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) am[i][j] = -am[i][j];
  return block_diag(am, jacobian(u_plus, g));
}

Mat4 symmetrizer4(const CellState& u_minus, const CellState& u_plus, double g) {
  return block_diag(symmetrizer(u_minus, g), symmetrizer(u_plus, g));
}

Mat4 kreiss_symmetrizer4(const CellState& u_minus, const CellState& u_plus,
                         double g, double incoming_weight) {
  // Incoming modes of diag(-A(u^-), A(u^+)) at the x = 0 boundary of the
  // half line: the e_- field of the minus block, the e_+ field of the plus
  // block. Down-weighting them is what makes ker M strictly dissipative.
  const Mat2 sm = weighted_symmetrizer(u_minus, g, 1.0, incoming_weight);
  const Mat2 sp = weighted_symmetrizer(u_plus, g, incoming_weight, 1.0);
  return block_diag(sm, sp);
}

Dissipativity boundary_dissipativity(const Mat4& S4, const Mat4& A4,
                                     const Mat2x4& M) {
  const Mat4 sa = mul(S4, A4);

  // Restrict the (symmetrized) form to ker M = span{e1, e3}.
  Mat2 kk;
  const int idx[2] = {0, 2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      kk[i][j] = 0.5 * (sa[idx[i]][idx[j]] + sa[idx[j]][idx[i]]);
  // min over unit ker M of -v^T sa v = -lambda_max(kk)
  const double kernel_min = -sym_eigenvalues(kk)[1];
  if (!(kernel_min > 0.0)) throw NotDissipative(kernel_min);

  Dissipativity out;
  out.kernel_min = kernel_min;
  out.c2 = 0.5 * kernel_min;

  const Mat4 mtm = gram(M);
  auto lambda_max = [&](double C2) {
    Mat4 n;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        n[i][j] = 0.5 * (sa[i][j] + sa[j][i]) - C2 * mtm[i][j];
        if (i == j) n[i][j] += out.c2;
      }
    return sym_eigenvalues(n)[3];
  };

  double hi = 1.0;
  int guard = 0;
  while (lambda_max(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 60) throw NotDissipative(kernel_min);
  }
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lambda_max(mid) <= 0.0 ? hi : lo) = mid;
  }
  out.C2 = hi;
  return out;
}

}  // namespace owc::swe

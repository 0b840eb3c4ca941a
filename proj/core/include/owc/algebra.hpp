#pragma once

// Small fixed-size linear algebra for the 2x2 / 4x4 boundary calculus.
// Everything is closed-form except the symmetric 4x4 eigenvalues (cyclic
// Jacobi); no external dependency on purpose so the core stays self-contained.

#include <algorithm>
#include <array>
#include <cmath>

#include "owc/errors.hpp"

namespace owc {

struct Vec2 {
  double v[2]{0.0, 0.0};
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

struct Vec4 {
  double v[4]{0.0, 0.0, 0.0, 0.0};
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

struct Mat2 {
  // m[row][col]
  double m[2][2]{{0.0, 0.0}, {0.0, 0.0}};
  double* operator[](int r) { return m[r]; }
  const double* operator[](int r) const { return m[r]; }
};

struct Mat4 {
  double m[4][4]{};
  double* operator[](int r) { return m[r]; }
  const double* operator[](int r) const { return m[r]; }
};

// 2x4 block, used for the boundary condition matrix M.
struct Mat2x4 {
  double m[2][4]{};
  double* operator[](int r) { return m[r]; }
  const double* operator[](int r) const { return m[r]; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {{a[0] + b[0], a[1] + b[1]}}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {{a[0] - b[0], a[1] - b[1]}}; }
inline Vec2 operator*(double s, Vec2 a) { return {{s * a[0], s * a[1]}}; }

inline Vec2 mul(const Mat2& a, Vec2 x) {
  return {{a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]}};
}

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline Mat2 transpose(const Mat2& a) {
  return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}};
}

inline double det(const Mat2& a) {
  return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

inline Mat2 inverse(const Mat2& a, double tol = 1e-12) {
  const double d = det(a);
  if (std::abs(d) < tol) throw Singular("2x2 determinant " + std::to_string(d));
  return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

/// Eigenvalues of a symmetric 2x2, ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& a) {
  const double tr = a[0][0] + a[1][1];
  const double off = 0.5 * (a[0][1] + a[1][0]);  // symmetrize defensively
  const double diff = 0.5 * (a[0][0] - a[1][1]);
  const double disc = std::sqrt(diff * diff + off * off);
  return {0.5 * tr - disc, 0.5 * tr + disc};
}

/// Singular values of a 2x2, descending (exact via eigenvalues of A^T A).
inline std::array<double, 2> singular_values(const Mat2& a) {
  const Mat2 ata = mul(transpose(a), a);
  const auto ev = sym_eigenvalues(ata);
  const double lo = ev[0] > 0.0 ? std::sqrt(ev[0]) : 0.0;
  return {std::sqrt(std::max(ev[1], 0.0)), lo};
}

/// Spectral norm ||A||_2 of a 2x2.
inline double spectral_norm(const Mat2& a) { return singular_values(a)[0]; }

inline Vec4 mul(const Mat4& a, Vec4 x) {
  Vec4 y;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Vec2 mul(const Mat2x4& a, Vec4 x) {
  Vec2 y;
  for (int j = 0; j < 4; ++j) {
    y[0] += a[0][j] * x[j];
    y[1] += a[1][j] * x[j];
  }
  return y;
}

/// diag(B00, B11) from two 2x2 blocks.
inline Mat4 block_diag(const Mat2& b0, const Mat2& b1) {
  Mat4 a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a[i][j] = b0[i][j];
      a[i + 2][j + 2] = b1[i][j];
    }
  return a;
}

inline double quadratic_form(const Mat4& a, Vec4 v) {
  double q = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q += v[i] * a[i][j] * v[j];
  return q;
}

/// M^T M as a 4x4 (for the dissipativity bisection).
inline Mat4 gram(const Mat2x4& m) {
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g[i][j] = m[0][i] * m[0][j] + m[1][i] * m[1][j];
  return g;
}

/// Eigenvalues of a symmetric 4x4 by cyclic Jacobi, ascending.
inline std::array<double, 4> sym_eigenvalues(Mat4 a) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-28) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, 4> ev{a[0][0], a[1][1], a[2][2], a[3][3]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace owc

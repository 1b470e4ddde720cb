#pragma once
#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gnat/errors.hpp"
#include "gnat/scalar.hpp"

namespace gnat {

// Constant-coefficient field sum_i v[i] e_i.
template <class T>
using FVec = std::vector<T>;

// Homogeneous model: orthonormal frame e_1..e_m with constant structure constants
// [e_i, e_j] = sum_k c_ij^k e_k. Indices are 0-based in code.
template <class T>
struct FrameModel {
  int m = 0;
  std::string name = "custom";
  std::vector<T> c;     // c[(i*m + j)*m + k] = c_ij^k
  std::vector<T> conn;  // conn[(i*m + j)*m + k] = <nabla_{e_i} e_j, e_k>
  std::vector<T> curv;  // curv[((i*m + j)*m + k)*m + l] = <R(e_i,e_j) e_k, e_l>

  const T& C(int i, int j, int k) const { return c[(i * m + j) * m + k]; }
  const T& Conn(int i, int j, int k) const { return conn[(i * m + j) * m + k]; }
  const T& Curv(int i, int j, int k, int l) const { return curv[((i * m + j) * m + k) * m + l]; }
};

// ---- vector algebra ------------------------------------------------------------------------

template <class T>
FVec<T> zeros(int m) {
  return FVec<T>(static_cast<std::size_t>(m), T(0));
}
template <class T>
FVec<T> basis(int m, int i) {
  FVec<T> v = zeros<T>(m);
  v[i] = T(1);
  return v;
}
template <class T>
FVec<T> operator+(const FVec<T>& a, const FVec<T>& b) {
  FVec<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
template <class T>
FVec<T> operator-(const FVec<T>& a, const FVec<T>& b) {
  FVec<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
template <class T>
FVec<T> operator-(const FVec<T>& a) {
  FVec<T> r(a);
  for (auto& x : r) x = -x;
  return r;
}
template <class T>
FVec<T> scale(const T& s, const FVec<T>& a) {
  FVec<T> r(a);
  for (auto& x : r) x *= s;
  return r;
}
template <class T>
T dot(const FVec<T>& a, const FVec<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
template <class T>
double max_abs(const FVec<T>& a) {
  double s = 0.0;
  for (const auto& x : a) s = std::max(s, magnitude(x));
  return s;
}
template <class T>
bool vec_is_zero(const FVec<T>& a, double scale, double tol) {
  for (const auto& x : a)
    if (!scalar_is_zero(x, scale, tol)) return false;
  return true;
}

// ---- model construction --------------------------------------------------------------------

template <class T>
FrameModel<T> build_model(int m, std::vector<T> c, std::string name = "custom", double tol = 1e-12) {
  if (m < 1) throw ModelError("frame model: dimension must be >= 1");
  if (c.size() != static_cast<std::size_t>(m) * m * m)
    throw ModelError("frame model: expected m^3 structure constants");
  FrameModel<T> M;
  M.m = m;
  M.name = std::move(name);
  M.c = std::move(c);
  double cscale = 0.0;
  for (const auto& x : M.c) cscale = std::max(cscale, magnitude(x));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (!scalar_is_zero(M.C(i, j, k) + M.C(j, i, k), cscale, tol)) {
          std::ostringstream os;
          os << "frame model: structure constants not antisymmetric at (" << i + 1 << "," << j + 1
             << "," << k + 1 << ")";
          throw ModelError(os.str());
        }
  // Jacobi: [[e_i,e_j],e_k] + cyclic = 0.
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        for (int p = 0; p < m; ++p) {
          T s(0);
          for (int l = 0; l < m; ++l)
            s += M.C(i, j, l) * M.C(l, k, p) + M.C(j, k, l) * M.C(l, i, p) + M.C(k, i, l) * M.C(l, j, p);
          if (!scalar_is_zero(s, cscale * cscale, tol)) {
            std::ostringstream os;
            os << "frame model: Jacobi identity fails for the triple (e" << i + 1 << ", e" << j + 1
               << ", e" << k + 1 << ")";
            throw ModelError(os.str());
          }
        }
  // Koszul formula for an orthonormal frame with constant brackets.
  M.conn.assign(static_cast<std::size_t>(m) * m * m, T(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        M.conn[(i * m + j) * m + k] = (M.C(i, j, k) - M.C(j, k, i) + M.C(k, i, j)) / T(2);
  // R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k.
  M.curv.assign(static_cast<std::size_t>(m) * m * m * m, T(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          T r(0);
          for (int q = 0; q < m; ++q) {
            r += M.Conn(j, k, q) * M.Conn(i, q, l) - M.Conn(i, k, q) * M.Conn(j, q, l);
            r -= M.C(i, j, q) * M.Conn(q, k, l);
          }
          M.curv[((i * m + j) * m + k) * m + l] = r;
        }
  return M;
}

// Structure-constant helper: set [e_i, e_j] = v (and [e_j, e_i] = -v), 0-based indices.
template <class T>
void set_bracket(std::vector<T>& c, int m, int i, int j, const FVec<T>& v) {
  for (int k = 0; k < m; ++k) {
    c[(i * m + j) * m + k] = v[k];
    c[(j * m + i) * m + k] = -v[k];
  }
}

// Sol_3: [e1,e2] = 0, [e2,e3] = -e2, [e1,e3] = e1.
template <class T>
FrameModel<T> sol3() {
  const int m = 3;
  std::vector<T> c(27, T(0));
  set_bracket<T>(c, m, 1, 2, {T(0), T(-1), T(0)});
  set_bracket<T>(c, m, 0, 2, {T(1), T(0), T(0)});
  return build_model<T>(m, std::move(c), "sol3");
}

// H^n: [e_i, e_n] = -k e_i for i < n, other brackets zero.
template <class T>
FrameModel<T> hyperbolic(int n, const T& k) {
  if (n < 2) throw ModelError("hyperbolic model: n must be >= 2");
  std::vector<T> c(static_cast<std::size_t>(n) * n * n, T(0));
  for (int i = 0; i + 1 < n; ++i) {
    FVec<T> v = zeros<T>(n);
    v[i] = -k;
    set_bracket<T>(c, n, i, n - 1, v);
  }
  return build_model<T>(n, std::move(c), "hyperbolic");
}

// SU(2) with a left-invariant metric: [e1,e2] = l3 e3, [e2,e3] = l1 e1, [e3,e1] = l2 e2.
template <class T>
FrameModel<T> su2(const T& l1, const T& l2, const T& l3) {
  const int m = 3;
  std::vector<T> c(27, T(0));
  set_bracket<T>(c, m, 0, 1, {T(0), T(0), l3});
  set_bracket<T>(c, m, 1, 2, {l1, T(0), T(0)});
  set_bracket<T>(c, m, 2, 0, {T(0), l2, T(0)});
  return build_model<T>(m, std::move(c), "su2");
}

// ---- operators on constant-coefficient fields -----------------------------------------------

template <class T>
FVec<T> bracket(const FrameModel<T>& M, const FVec<T>& X, const FVec<T>& Y) {
  FVec<T> r = zeros<T>(M.m);
  for (int i = 0; i < M.m; ++i)
    for (int j = 0; j < M.m; ++j) {
      if (X[i] == T(0) || Y[j] == T(0)) continue;
      const T w = X[i] * Y[j];
      for (int k = 0; k < M.m; ++k) r[k] += w * M.C(i, j, k);
    }
  return r;
}

template <class T>
FVec<T> nabla(const FrameModel<T>& M, const FVec<T>& X, const FVec<T>& Y) {
  FVec<T> r = zeros<T>(M.m);
  for (int i = 0; i < M.m; ++i)
    for (int j = 0; j < M.m; ++j) {
      if (X[i] == T(0) || Y[j] == T(0)) continue;
      const T w = X[i] * Y[j];
      for (int k = 0; k < M.m; ++k) r[k] += w * M.Conn(i, j, k);
    }
  return r;
}

template <class T>
FVec<T> curvature(const FrameModel<T>& M, const FVec<T>& X, const FVec<T>& Y, const FVec<T>& Z) {
  FVec<T> r = zeros<T>(M.m);
  for (int i = 0; i < M.m; ++i) {
    if (X[i] == T(0)) continue;
    for (int j = 0; j < M.m; ++j) {
      if (Y[j] == T(0)) continue;
      for (int k = 0; k < M.m; ++k) {
        if (Z[k] == T(0)) continue;
        const T w = X[i] * Y[j] * Z[k];
        for (int l = 0; l < M.m; ++l) r[l] += w * M.Curv(i, j, k, l);
      }
    }
  }
  return r;
}

// (nabla_X R)(Y, Z) W for constant-coefficient fields.
template <class T>
FVec<T> nabla_R(const FrameModel<T>& M, const FVec<T>& X, const FVec<T>& Y, const FVec<T>& Z,
                const FVec<T>& W) {
  return nabla(M, X, curvature(M, Y, Z, W)) - curvature(M, nabla(M, X, Y), Z, W) -
         curvature(M, Y, nabla(M, X, Z), W) - curvature(M, Y, Z, nabla(M, X, W));
}

template <class T>
FVec<T> ricci_operator(const FrameModel<T>& M, const FVec<T>& X) {
  FVec<T> r = zeros<T>(M.m);
  for (int i = 0; i < M.m; ++i) {
    const FVec<T> e = basis<T>(M.m, i);
    r = r + curvature(M, X, e, e);
  }
  return r;
}

// Rough Laplacian -sum_i (nabla_{e_i} nabla_{e_i} U - nabla_{nabla_{e_i} e_i} U).
template <class T>
FVec<T> rough_laplacian(const FrameModel<T>& M, const FVec<T>& U) {
  FVec<T> r = zeros<T>(M.m);
  for (int i = 0; i < M.m; ++i) {
    const FVec<T> e = basis<T>(M.m, i);
    r = r - (nabla(M, e, nabla(M, e, U)) - nabla(M, nabla(M, e, e), U));
  }
  return r;
}

// S(U) = -sum_i R(nabla_{e_i} U, U) e_i.
template <class T>
FVec<T> s_operator(const FrameModel<T>& M, const FVec<T>& U) {
  FVec<T> r = zeros<T>(M.m);
  for (int i = 0; i < M.m; ++i) {
    const FVec<T> e = basis<T>(M.m, i);
    r = r - curvature(M, nabla(M, e, U), U, e);
  }
  return r;
}

template <class T>
T divergence(const FrameModel<T>& M, const FVec<T>& U) {
  T s(0);
  for (int i = 0; i < M.m; ++i) {
    const FVec<T> e = basis<T>(M.m, i);
    s += dot(nabla(M, e, U), e);
  }
  return s;
}

template <class T>
T grad_norm_sq(const FrameModel<T>& M, const FVec<T>& U) {
  T s(0);
  for (int i = 0; i < M.m; ++i) {
    const FVec<T> d = nabla(M, basis<T>(M.m, i), U);
    s += dot(d, d);
  }
  return s;
}

template <class T>
struct DerivedOperators {
  FVec<T> QU, laplacian_U, S_U, nabla_U_U;
  T div_U{0}, grad_norm_sq{0};
};

template <class T>
DerivedOperators<T> derived_operators(const FrameModel<T>& M, const FVec<T>& U) {
  if (static_cast<int>(U.size()) != M.m) throw DimensionError("field has the wrong dimension");
  DerivedOperators<T> d;
  d.QU = ricci_operator(M, U);
  d.laplacian_U = rough_laplacian(M, U);
  d.S_U = s_operator(M, U);
  d.nabla_U_U = nabla(M, U, U);
  d.div_U = divergence(M, U);
  d.grad_norm_sq = grad_norm_sq(M, U);
  return d;
}

// sum_i { 2 R(e_i, W) nabla_{e_i} U + (nabla_{e_i} R)(e_i, W) U + R(e_i, nabla_{e_i} W) U }.
template <class T>
FVec<T> curvature_sum(const FrameModel<T>& M, const FVec<T>& U, const FVec<T>& W) {
  FVec<T> r = zeros<T>(M.m);
  for (int i = 0; i < M.m; ++i) {
    const FVec<T> e = basis<T>(M.m, i);
    r = r + scale(T(2), curvature(M, e, W, nabla(M, e, U))) + nabla_R(M, e, e, W, U) +
        curvature(M, e, nabla(M, e, W), U);
  }
  return r;
}

// Named invariant checks of a built model; returns the failures (empty when all hold).
template <class T>
std::vector<std::string> model_invariant_failures(const FrameModel<T>& M, double tol = 1e-12) {
  std::vector<std::string> out;
  const int m = M.m;
  double sc = 0.0;
  for (const auto& x : M.curv) sc = std::max(sc, magnitude(x));
  for (const auto& x : M.conn) sc = std::max(sc, magnitude(x));
  auto fail = [&](const std::string& what, int i, int j, int k) {
    std::ostringstream os;
    os << what << " at (" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
    out.push_back(os.str());
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const FVec<T> ei = basis<T>(m, i), ej = basis<T>(m, j);
      if (!vec_is_zero(nabla(M, ei, ej) - nabla(M, ej, ei) - bracket(M, ei, ej), sc, tol))
        fail("torsion", i, j, 0);
      for (int k = 0; k < m; ++k) {
        const FVec<T> ek = basis<T>(m, k);
        if (!scalar_is_zero(dot(nabla(M, ei, ej), ek) + dot(ej, nabla(M, ei, ek)), sc, tol))
          fail("metric compatibility", i, j, k);
        const FVec<T> rijk = curvature(M, ei, ej, ek);
        if (!vec_is_zero(rijk + curvature(M, ej, ei, ek), sc, tol)) fail("R antisymmetry", i, j, k);
        if (!vec_is_zero(rijk + curvature(M, ej, ek, ei) + curvature(M, ek, ei, ej), sc, tol))
          fail("first Bianchi", i, j, k);
        for (int l = 0; l < m; ++l) {
          const FVec<T> el = basis<T>(m, l);
          if (!scalar_is_zero(dot(rijk, el) - dot(curvature(M, ek, el, ei), ej), sc * sc, tol))
            fail("pair symmetry", i, j, k);
        }
      }
    }
  return out;
}

}  // namespace gnat

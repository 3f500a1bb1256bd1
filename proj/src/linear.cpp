#include "lls/linear.hpp"

#include <algorithm>

namespace lls {

namespace {

// Reduced row echelon form in place; returns pivot column per row.
std::vector<int> rref(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && m[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    Rat inv = 1 / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(RatMat m) { return static_cast<int>(rref(m).size()); }

Rat AffineSpace::coord(size_t i, const RatVec& params) const {
  Rat v = x0[i];
  for (size_t k = 0; k < basis.size(); ++k) v += basis[k][i] * params[k];
  return v;
}

bool AffineSpace::coord_identically_zero(size_t i) const {
  if (x0[i] != 0) return false;
  for (const auto& b : basis)
    if (b[i] != 0) return false;
  return true;
}

bool AffineSpace::functional_identically_zero(const RatVec& c, const Rat& c0) const {
  Rat at0 = c0;
  for (size_t i = 0; i < c.size(); ++i) at0 += c[i] * x0[i];
  if (at0 != 0) return false;
  for (const auto& b : basis) {
    Rat d = 0;
    for (size_t i = 0; i < c.size(); ++i) d += c[i] * b[i];
    if (d != 0) return false;
  }
  return true;
}

std::optional<AffineSpace> solve_affine(const RatMat& a, const RatVec& b, size_t cols) {
  size_t rows = a.size();
  if (rows != 0 && a[0].size() != cols) throw Error("solve_affine: column mismatch");
  if (rows == 0) {
    // Everything is free.
    AffineSpace s;
    s.x0.assign(cols, Rat(0));
    for (size_t c = 0; c < cols; ++c) {
      RatVec dir(cols, Rat(0));
      dir[c] = 1;
      s.basis.push_back(std::move(dir));
    }
    return s;
  }
  RatMat aug(rows, RatVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  std::vector<int> pivots = rref(aug);
  // Inconsistent iff a pivot lands in the constants column.
  for (int p : pivots)
    if (static_cast<size_t>(p) == cols) return std::nullopt;

  AffineSpace s;
  s.x0.assign(cols, Rat(0));
  std::vector<int> pivot_of_col(cols, -1);
  for (size_t r = 0; r < pivots.size(); ++r) pivot_of_col[pivots[r]] = static_cast<int>(r);
  for (size_t c = 0; c < cols; ++c)
    if (pivot_of_col[c] >= 0) s.x0[c] = aug[pivot_of_col[c]][cols];
  for (size_t c = 0; c < cols; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    RatVec dir(cols, Rat(0));
    dir[c] = 1;
    for (size_t c2 = 0; c2 < cols; ++c2)
      if (pivot_of_col[c2] >= 0) dir[c2] = -aug[pivot_of_col[c2]][c];
    s.basis.push_back(std::move(dir));
  }
  return s;
}

RatVec avoid_hyperplanes(size_t nparams,
                         const std::vector<std::pair<RatVec, Rat>>& functionals) {
  auto ok = [&](const RatVec& s) {
    for (const auto& [c, c0] : functionals) {
      Rat v = c0;
      for (size_t k = 0; k < nparams; ++k) v += c[k] * s[k];
      if (v == 0) return false;
    }
    return true;
  };
  if (nparams == 0) {
    RatVec s;
    if (!ok(s)) throw Error("avoid_hyperplanes: a functional is identically zero");
    return s;
  }
  // Sweep integer vectors by max-norm, then lexicographically. Each
  // functional is nonzero somewhere, so a large enough norm always works.
  for (long long radius = 0;; ++radius) {
    std::vector<long long> v(nparams, -radius);
    while (true) {
      bool on_shell = radius == 0;
      for (long long x : v)
        if (x == radius || x == -radius) {
          on_shell = true;
          break;
        }
      if (on_shell) {
        RatVec s(nparams);
        for (size_t k = 0; k < nparams; ++k) s[k] = Rat(v[k]);
        if (ok(s)) return s;
      }
      int i = static_cast<int>(nparams) - 1;
      while (i >= 0 && v[i] == radius) v[i--] = -radius;
      if (i < 0) break;
      ++v[i];
    }
  }
}

}  // namespace lls

#pragma once

#include "lls/rational.hpp"

#include <optional>
#include <vector>

namespace lls {

// Dense exact-rational matrices, sized for the desk-scale systems produced
// by the compatibility algorithm (tens of unknowns).
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

int rank(RatMat m);  // by Gaussian elimination, exact

// Solution set of A x = b as x0 + span(basis). Empty optional when
// inconsistent.
struct AffineSpace {
  RatVec x0;
  std::vector<RatVec> basis;  // nullspace basis (echelon, deterministic)

  size_t dim() const { return basis.size(); }
  // Evaluates coordinate i of x0 + basis * params.
  Rat coord(size_t i, const RatVec& params) const;
  // Is coordinate i identically zero on the whole space?
  bool coord_identically_zero(size_t i) const;
  // Is the linear functional sum_i c[i] x_i + c0 identically zero on the space?
  bool functional_identically_zero(const RatVec& c, const Rat& c0) const;
};

std::optional<AffineSpace> solve_affine(const RatMat& a, const RatVec& b, size_t cols);

// Smallest integer parameter vector (by max-norm, then lexicographic order)
// at which none of the given affine functionals vanish. Each functional is
// (coefficients over the parameters, constant term) and must not be
// identically zero. Returns the parameter vector.
RatVec avoid_hyperplanes(size_t nparams,
                         const std::vector<std::pair<RatVec, Rat>>& functionals);

}  // namespace lls

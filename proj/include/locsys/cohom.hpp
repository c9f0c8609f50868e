#pragma once

// Cohomology of a presented group with coefficients in Ad(rho): n x n
// matrices over F_p with g . X = rho(g) X rho(g)^-1.
//
// Convention: lifts are left perturbations (Id + p^k c(g)) rho(g), so a
// cocycle satisfies c(gh) = c(g) + Ad(rho(g)) c(h). A cochain is a tuple
// (c(x_1), ..., c(x_r)) flattened generator-major, each matrix row-major.

#include <cstddef>
#include <optional>
#include <vector>

#include "locsys/linalg.hpp"
#include "locsys/repvar.hpp"

namespace locsys {

/// The n^2 x n^2 matrix of X -> g X g^-1 on row-major vec(X).
ModMatrix ad_matrix(const Matrix& g, const Matrix& g_inverse, const CoeffRing& field);

/// Basis (RREF, canonical) of the centralizer of the image of rep mod p.
std::vector<Matrix> h0_basis(const Representation& rep);

struct CocycleSpace {
  int n = 0;
  int r = 0;
  std::size_t ambient_dim = 0;  // r * n^2
  std::vector<ModVector> z1_basis;
  std::vector<ModVector> b1_basis;
  std::size_t h0 = 0;
  std::size_t z1 = 0;
  std::size_t b1 = 0;
  std::size_t h1 = 0;
};

/// Split a flattened cochain into r matrices.
std::vector<Matrix> cochain_matrices(const ModVector& v, int n, int r);

/// The linearized relator map c -> (sum_i Ad(d w / d x_i) c_i)_w evaluated
/// through rep mod p; (#relators * n^2) x (r * n^2).
ModMatrix linearized_relator_map(const Representation& rep);

/// Z^1 as the kernel of the linearized relator map, B^1 as the image of
/// X -> (X - Ad(rho(x_i)) X)_i. Checks B^1 within Z^1 and h0 + b1 = n^2.
CocycleSpace cocycle_spaces(const Representation& rep);

struct ObstructionVector {
  /// eps_w with w(naive lift) = Id + p^k eps_w, one per relator, over F_p.
  std::vector<Matrix> per_relator;
  ModVector epsilon;
  /// Canonical representative of eps modulo the image of the linearized
  /// relator map; zero iff the representation lifts one level.
  ModVector residue;
  bool liftable = false;
  /// Dimension of the cokernel where the class lives.
  std::size_t cokernel_dim = 0;
  /// When liftable: c with L c = -eps and every free variable zero.
  std::optional<ModVector> correction;

  /// 0 when the class vanishes, 1 otherwise.
  std::size_t rank() const noexcept { return liftable ? 0 : 1; }
};

/// Obstruction for lifting rep (over Z/p^k) to Z/p^{k+1}. `naive_lift`
/// must reduce to rep. Throws ShapeViolation if some relator is not
/// congruent to Id mod p^k under the naive lift.
ObstructionVector lift_obstruction(const Representation& rep,
                                   const std::vector<Matrix>& naive_lift);

/// Entrywise lift: residues reinterpreted in Z/p^{k+1}.
std::vector<Matrix> naive_lift(const Representation& rep);

/// Solutions of X M_i = M_i X over the full coefficient ring of rep.
KernelModule centralizer_module(const Representation& rep);

/// Number of invertible elements of the centralizer algebra. Over F_p this
/// sweeps the span of h0_basis; over Z/p^k (k > 1) it sweeps
/// centralizer_module.
std::uint64_t centralizer_unit_count(const Representation& rep);

}  // namespace locsys

#pragma once

// Dense linear algebra over F_p (row reduction) and over Z/p^k (Smith form
// kernels). Sizes here are small: r*n^2 columns at most a few dozen.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "locsys/ring.hpp"

namespace locsys {

using ModVector = std::vector<Residue>;

/// Dense rows x cols matrix over a CoeffRing, row-major.
class ModMatrix {
 public:
  ModMatrix() = default;
  ModMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Residue& at(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  Residue at(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  ModVector row(std::size_t r) const;
  void append_row(const ModVector& v);

  static ModMatrix from_rows(const std::vector<ModVector>& rows, std::size_t cols);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

// ---------------------------------------------------------------------------
// Over a prime field (ring.level() == 1).

/// In-place reduced row echelon form. Returns pivot columns in order.
std::vector<std::size_t> rref(ModMatrix& a, const CoeffRing& field);

std::size_t rank(ModMatrix a, const CoeffRing& field);

/// Basis of {x : a x = 0}, as the nonzero rows of a reduced row echelon
/// matrix (canonical for the subspace).
std::vector<ModVector> nullspace_basis(const ModMatrix& a, const CoeffRing& field);

/// Canonical basis (nonzero RREF rows) of the span of `vectors`.
std::vector<ModVector> span_basis(const std::vector<ModVector>& vectors, std::size_t dim,
                                  const CoeffRing& field);

/// One solution of a x = b with every free variable set to zero, or
/// nullopt when the system is inconsistent.
std::optional<ModVector> solve(const ModMatrix& a, const ModVector& b, const CoeffRing& field);

/// Canonical representative of v modulo the span of an RREF basis.
ModVector reduce_modulo(const ModVector& v, const std::vector<ModVector>& rref_basis,
                        const CoeffRing& field);

/// Calls `visit` once for every F_p-linear combination of `basis`
/// (p^{basis.size()} vectors), coefficients in lexicographic order.
void for_each_combination(const std::vector<ModVector>& basis, std::size_t dim,
                          const CoeffRing& field,
                          const std::function<void(const ModVector&)>& visit);

// ---------------------------------------------------------------------------
// Over Z/p^k.

/// The solution module {x : a x = 0} over Z/p^k written as a direct sum of
/// cyclic pieces: element t of `generators` has additive order `orders[t]`
/// and every solution is uniquely sum_t c_t g_t with 0 <= c_t < orders[t].
struct KernelModule {
  std::vector<ModVector> generators;
  std::vector<std::uint64_t> orders;

  /// Number of elements, throws StructuralError on overflow.
  std::uint64_t size() const;
};

/// Kernel via Smith normal form over the local ring Z/p^k (pivot on an
/// entry of minimal valuation; column operations tracked).
KernelModule kernel_module(const ModMatrix& a, const CoeffRing& ring);

/// Visit every element of the module exactly once.
void for_each_element(const KernelModule& module, std::size_t dim, const CoeffRing& ring,
                      const std::function<void(const ModVector&)>& visit);

}  // namespace locsys

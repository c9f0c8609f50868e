#pragma once

// Exact arithmetic over Z/p^k and n x n matrices over it.
//
// Residues are stored canonically in [0, p^k). The modulus p^k is capped
// below 2^63 so every product fits a 128-bit intermediate.

#include <array>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace locsys {

using Residue = std::uint64_t;

/// Largest matrix dimension supported by the fixed-capacity Matrix storage.
inline constexpr int kMaxDim = 4;

/// Largest admissible modulus p^k (exclusive).
inline constexpr std::uint64_t kModulusCap = std::uint64_t{1} << 63;

bool is_prime(std::uint64_t p);

/// The coefficient ring Z/p^k.
class CoeffRing {
 public:
  CoeffRing(std::uint64_t p, int k);

  std::uint64_t p() const noexcept { return p_; }
  int level() const noexcept { return k_; }
  std::uint64_t modulus() const noexcept { return modulus_; }

  /// p^j for 0 <= j <= level().
  std::uint64_t p_power(int j) const;

  /// Same prime, different level.
  CoeffRing with_level(int k) const { return CoeffRing(p_, k); }
  CoeffRing residue_field() const { return with_level(1); }
  bool can_lift() const noexcept;

  Residue reduce(std::int64_t x) const noexcept;
  Residue reduce_u(std::uint64_t x) const noexcept { return x % modulus_; }
  Residue add(Residue a, Residue b) const noexcept;
  Residue sub(Residue a, Residue b) const noexcept;
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : modulus_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    if (modulus_ < (std::uint64_t{1} << 32)) return (a * b) % modulus_;
    return static_cast<Residue>((static_cast<unsigned __int128>(a) * b) % modulus_);
  }
  bool is_unit(Residue a) const noexcept { return a % p_ != 0; }
  /// Inverse of a unit; throws NotAUnit otherwise.
  Residue inverse(Residue a) const;
  /// p-adic valuation of a residue, with valuation(0) == level().
  int valuation(Residue a) const noexcept;

  std::string to_string() const;

  friend bool operator==(const CoeffRing&, const CoeffRing&) = default;

 private:
  std::uint64_t p_;
  int k_;
  std::uint64_t modulus_;
};

/// Operations every truncated local coefficient ring must provide. Matrix
/// code is written against this surface so other finite local rings (for
/// instance Galois rings over Z/p^k) can implement it.
template <class R>
concept TruncatedLocalRing = requires(const R& r, Residue a, Residue b, std::int64_t x) {
  { r.p() } -> std::convertible_to<std::uint64_t>;
  { r.level() } -> std::convertible_to<int>;
  { r.modulus() } -> std::convertible_to<std::uint64_t>;
  { r.reduce(x) } -> std::same_as<Residue>;
  { r.add(a, b) } -> std::same_as<Residue>;
  { r.sub(a, b) } -> std::same_as<Residue>;
  { r.mul(a, b) } -> std::same_as<Residue>;
  { r.neg(a) } -> std::same_as<Residue>;
  { r.is_unit(a) } -> std::same_as<bool>;
  { r.inverse(a) } -> std::same_as<Residue>;
  { r.valuation(a) } -> std::same_as<int>;
  { r.with_level(1) } -> std::same_as<R>;
};

static_assert(TruncatedLocalRing<CoeffRing>);

/// Square matrix with entries in a coefficient ring, stored row-major in
/// the first n*n slots. Unused slots stay zero so defaulted comparison is
/// lexicographic on the flattened entries.
struct Matrix {
  int n = 0;
  std::array<Residue, kMaxDim * kMaxDim> entries{};

  Matrix() = default;
  explicit Matrix(int dim);

  static Matrix zero(int dim) { return Matrix(dim); }
  static Matrix identity(int dim);
  /// Id + c * E_ij (0-based indices).
  static Matrix elementary(int dim, int i, int j, Residue c, const CoeffRing& ring);
  /// Build from row-major values, reducing each into the ring.
  static Matrix from_values(int dim, std::span<const std::int64_t> values,
                            const CoeffRing& ring);
  static Matrix from_values(int dim, std::initializer_list<std::int64_t> values,
                            const CoeffRing& ring);

  Residue& at(int i, int j) noexcept { return entries[static_cast<std::size_t>(i * n + j)]; }
  Residue at(int i, int j) const noexcept {
    return entries[static_cast<std::size_t>(i * n + j)];
  }
  std::span<const Residue> flat() const noexcept {
    return {entries.data(), static_cast<std::size_t>(n * n)};
  }
  bool is_identity() const noexcept;

  friend auto operator<=>(const Matrix&, const Matrix&) = default;
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const noexcept;
};

/// Largest j <= k such that a matrix is congruent to Id mod p^j.
struct CongruenceLevel {
  int j = 0;
  friend auto operator<=>(const CongruenceLevel&, const CongruenceLevel&) = default;
};

/// True when every entry lies in [0, modulus).
bool is_reduced(const Matrix& a, const CoeffRing& ring) noexcept;

Matrix mat_mul(const Matrix& a, const Matrix& b, const CoeffRing& ring);
Matrix mat_add(const Matrix& a, const Matrix& b, const CoeffRing& ring);
Matrix mat_sub(const Matrix& a, const Matrix& b, const CoeffRing& ring);
Matrix mat_scale(const Matrix& a, Residue c, const CoeffRing& ring);
Matrix mat_pow(const Matrix& a, std::uint64_t e, const CoeffRing& ring);

/// Inverse by Gauss-Jordan elimination with unit pivots. Throws NotAUnit
/// when the determinant is divisible by p.
Matrix mat_inverse(const Matrix& a, const CoeffRing& ring);
std::optional<Matrix> try_inverse(const Matrix& a, const CoeffRing& ring);
bool is_invertible(const Matrix& a, const CoeffRing& ring);

/// Entrywise reduction to a lower level of the same prime.
Matrix reduce_to(const Matrix& a, const CoeffRing& target);
/// Reinterpret canonical residues inside a higher level of the same prime.
Matrix reinterpret_in(const Matrix& a, const CoeffRing& target);

CongruenceLevel congruence_level(const Matrix& a, const CoeffRing& ring);

/// |GL_n(Z/p^k)| = p^{(k-1)n^2} * prod_{i<n} (p^n - p^i). Throws
/// StructuralError on 64-bit overflow.
std::uint64_t gl_order(const CoeffRing& ring, int n);

/// Multiplicative order of an element of Id + pM_n. Throws
/// NotInCongruenceSubgroup when the level is 0.
std::uint64_t congruence_element_order(const Matrix& a, const CoeffRing& ring);

/// Every element of GL_n(ring), in lexicographic order of flattened entries.
/// Throws BudgetExceeded if p^{kn^2} exceeds `budget`.
std::vector<Matrix> gl_elements(const CoeffRing& ring, int n,
                                std::uint64_t budget = 50'000'000);

/// Checked integer power; throws StructuralError on overflow.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp);

nlohmann::json matrix_to_json(const Matrix& a, const CoeffRing& ring);

struct RingMatrix {
  CoeffRing ring;
  Matrix matrix;
};
/// Parse {"n","p","k","entries"}. Rejects out-of-range entries.
RingMatrix matrix_from_json(const nlohmann::json& j);

std::string to_string(const Matrix& a);

}  // namespace locsys

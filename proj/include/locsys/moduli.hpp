#pragma once

// Conjugation quotient of the framed variety as a finite groupoid.

#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

#include "locsys/repvar.hpp"

namespace locsys {

using Mass = boost::rational<std::int64_t>;

struct Orbit {
  /// Index (into the input list) of the lexicographically least member.
  std::size_t rep_index = 0;
  Representation representative;
  std::uint64_t size = 0;
  std::uint64_t stabilizer = 0;
  /// Input indices of every member, ascending.
  std::vector<std::size_t> members;
};

struct OrbitGroupoid {
  std::vector<Orbit> orbits;
  std::uint64_t ambient_order = 0;
  std::uint64_t total() const noexcept;
};

/// x_i -> g M_i g^-1. Throws NotAUnit if g is singular.
Representation conjugate_rep(const Matrix& g, const Representation& rep);

struct OrbitOptions {
  /// Sequential sweeps; otherwise each sweep over GL_n is split across
  /// OpenMP threads. Output is identical either way.
  bool deterministic = true;
  /// Largest ambient group for which stabilizers are counted directly;
  /// above it orbit-stabilizer is used.
  std::uint64_t direct_stabilizer_limit = 100'000;
  /// Largest ambient group that will be enumerated at all.
  std::uint64_t ambient_budget = 10'000'000;
};

/// Partition a complete, duplicate-free list of representations into
/// conjugation orbits. Orbits are ordered by rep_index. Throws
/// StructuralError if a conjugate is missing from the list and
/// BudgetExceeded for oversized ambient groups.
OrbitGroupoid orbit_decomposition(const std::vector<Representation>& reps, const CoeffRing& ring,
                                  int n, const OrbitOptions& opts = {});

/// Sum over orbits of 1/|stabilizer|.
Mass groupoid_mass(const OrbitGroupoid& g);

std::string to_string(const Mass& m);

}  // namespace locsys

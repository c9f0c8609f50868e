#pragma once

// Level-by-level lifting of representations from Z/p^k to Z/p^{k+1}.

#include <cstdint>
#include <optional>
#include <vector>

#include "locsys/cohom.hpp"
#include "locsys/repvar.hpp"

namespace locsys {

enum class LiftStatus { Empty, Torsor };

const char* to_string(LiftStatus s) noexcept;

/// All lifts of one representation to the next level. When nonempty the
/// lifts form a torsor under Z^1: every lift is uniquely
/// (Id + p^k c(x_i)) base_lift(x_i) with c in Z^1.
struct LiftFiber {
  LiftStatus status = LiftStatus::Empty;
  std::optional<Representation> base_lift;
  std::vector<ModVector> translation_basis;
  std::size_t z1 = 0;
  /// p^z1 for a torsor, 0 when empty.
  std::uint64_t fiber_size = 0;
  ObstructionVector obstruction;
};

/// Obstruction on the entrywise lift, then the minimal correction.
LiftFiber lift_step(const Representation& rep);

/// (Id + p^k c_i) base_i over Z/p^{k+1} for a flattened cochain c.
Representation translate_lift(const Representation& base, const ModVector& cochain, int k);

/// Every lift in a torsor fiber, ordered by the F_p-coefficients of the
/// translation basis. `parent_level` is k.
std::vector<Representation> fiber_members(const LiftFiber& fiber, int parent_level);

/// Exhaustive count of tuples M_i + p^k D_i (D_i over F_p) that satisfy
/// every relator over Z/p^{k+1}. Parallel over the first generator's
/// corrections. Throws BudgetExceeded if p^{r n^2} > budget.
std::uint64_t count_lifts_bruteforce(const Representation& rep,
                                     std::uint64_t budget = 10'000'000);
std::uint64_t count_lifts_bruteforce_serial(const Representation& rep,
                                            std::uint64_t budget = 10'000'000);

struct TowerFiber {
  std::size_t parent_index = 0;
  LiftStatus status = LiftStatus::Empty;
  std::uint64_t size = 0;
};

struct TowerLevel {
  int k = 0;
  /// One entry per representative of the previous level (empty for the base).
  std::vector<TowerFiber> fibers;
  std::vector<Representation> representatives;
  /// Index into the previous level's representatives.
  std::vector<std::size_t> parents;
  /// Sum of fiber sizes; total number of lifts of the stored parents.
  std::uint64_t total_lifts = 0;
  /// False when some fiber was only sampled, so `representatives` is a
  /// strict subset of the lifts counted.
  bool complete = true;
};

struct LiftTower {
  std::vector<TowerLevel> levels;
  bool complete = true;
};

struct TowerOptions {
  /// Fibers larger than this keep only their base lift.
  std::uint64_t sampling_budget = 4096;
  /// Stop expanding once a level would hold more representatives.
  std::uint64_t level_budget = 1'000'000;
};

/// Lift every root (all at the same level k) up to level `target_level`.
/// Fibers of one level are computed in parallel and assembled in parent
/// order.
LiftTower lift_tower(const std::vector<Representation>& roots, int target_level,
                     const TowerOptions& opts = {});

}  // namespace locsys

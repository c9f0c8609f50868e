#include "locsys/deform.hpp"

#include <atomic>

#include "locsys/errors.hpp"

namespace locsys {

const char* to_string(LiftStatus s) noexcept {
  return s == LiftStatus::Torsor ? "torsor" : "empty";
}

LiftFiber lift_step(const Representation& rep) {
  LiftFiber fiber;
  const auto lift = naive_lift(rep);
  fiber.obstruction = lift_obstruction(rep, lift);
  if (!fiber.obstruction.liftable) return fiber;

  const int k = rep.ring.level();
  const CoeffRing up = rep.ring.with_level(k + 1);
  const Representation naive{rep.pres, up, rep.n, lift};
  fiber.base_lift = translate_lift(naive, *fiber.obstruction.correction, k);
  const auto spaces = cocycle_spaces(rep);
  fiber.translation_basis = spaces.z1_basis;
  fiber.z1 = spaces.z1;
  fiber.fiber_size = checked_pow(rep.ring.p(), fiber.z1);
  fiber.status = LiftStatus::Torsor;
  return fiber;
}

Representation translate_lift(const Representation& base, const ModVector& cochain, int k) {
  const CoeffRing& up = base.ring;
  const std::uint64_t pk = up.p_power(k);
  const auto dim = static_cast<std::size_t>(base.n * base.n);
  Representation out{base.pres, up, base.n, {}};
  for (std::size_t i = 0; i < base.images.size(); ++i) {
    Matrix perturb = Matrix::identity(base.n);
    for (std::size_t e = 0; e < dim; ++e) {
      perturb.entries[e] = up.add(perturb.entries[e], up.mul(pk, cochain[i * dim + e]));
    }
    out.images.push_back(mat_mul(perturb, base.images[i], up));
  }
  return out;
}

std::vector<Representation> fiber_members(const LiftFiber& fiber, int parent_level) {
  std::vector<Representation> out;
  if (fiber.status != LiftStatus::Torsor) return out;
  const Representation& base = *fiber.base_lift;
  const auto dim = static_cast<std::size_t>(base.n * base.n) * base.images.size();
  const CoeffRing field = base.ring.residue_field();
  for_each_combination(fiber.translation_basis, dim, field, [&](const ModVector& c) {
    out.push_back(translate_lift(base, c, parent_level));
  });
  return out;
}

namespace {

// Kernel shared by the serial and parallel brute-force counters.
class LiftCounter {
 public:
  explicit LiftCounter(const Representation& rep)
      : rep_(rep), up_(rep.ring.with_level(rep.ring.level() + 1)) {
    if (!rep.ring.can_lift()) throw StructuralError("count_lifts: p^(k+1) exceeds the modulus cap");
    cells_ = static_cast<std::size_t>(rep.n * rep.n);
    per_generator_ = checked_pow(rep.ring.p(), cells_);
    base_ = naive_lift(rep);
  }

  std::uint64_t per_generator() const noexcept { return per_generator_; }

  /// Count lifts whose first-generator correction has index `first`.
  std::uint64_t count_with_first(std::uint64_t first) const {
    const std::size_t r = base_.size();
    std::vector<Matrix> cur = base_;
    std::vector<std::uint64_t> idx(r, 0);
    idx[0] = first;
    cur[0] = corrected(0, first);
    std::uint64_t count = 0;
    while (true) {
      if (is_representation(*rep_.pres, cur, up_, rep_.n)) ++count;
      std::size_t g = r;
      while (g > 1) {
        --g;
        if (++idx[g] < per_generator_) {
          cur[g] = corrected(g, idx[g]);
          break;
        }
        idx[g] = 0;
        cur[g] = corrected(g, 0);
        if (g == 1) return count;
      }
      if (r <= 1) return count;
    }
  }

 private:
  // base_[g] + p^k * D where D's entries are the base-p digits of `index`.
  Matrix corrected(std::size_t g, std::uint64_t index) const {
    Matrix m = base_[g];
    const std::uint64_t pk = rep_.ring.modulus();
    for (std::size_t e = cells_; e-- > 0;) {
      const std::uint64_t digit = index % rep_.ring.p();
      index /= rep_.ring.p();
      m.entries[e] = up_.add(m.entries[e], up_.mul(pk, digit));
    }
    return m;
  }

  const Representation& rep_;
  CoeffRing up_;
  std::size_t cells_ = 0;
  std::uint64_t per_generator_ = 0;
  std::vector<Matrix> base_;
};

void check_bruteforce_budget(const Representation& rep, std::uint64_t budget) {
  std::uint64_t space = 0;
  try {
    space = checked_pow(rep.ring.p(), static_cast<std::uint64_t>(rep.n * rep.n) *
                                          rep.images.size());
  } catch (const StructuralError&) {
    throw BudgetExceeded("count_lifts_bruteforce: search space overflows 64 bits", 0);
  }
  if (space > budget) {
    throw BudgetExceeded("count_lifts_bruteforce: search space " + std::to_string(space) +
                             " exceeds budget " + std::to_string(budget),
                         0);
  }
}

std::uint64_t count_without_generators(const Representation& rep) {
  return is_representation(*rep.pres, {}, rep.ring.with_level(rep.ring.level() + 1), rep.n) ? 1
                                                                                            : 0;
}

}  // namespace

std::uint64_t count_lifts_bruteforce_serial(const Representation& rep, std::uint64_t budget) {
  check_bruteforce_budget(rep, budget);
  if (rep.images.empty()) return count_without_generators(rep);
  const LiftCounter counter(rep);
  std::uint64_t total = 0;
  for (std::uint64_t f = 0; f < counter.per_generator(); ++f) total += counter.count_with_first(f);
  return total;
}

std::uint64_t count_lifts_bruteforce(const Representation& rep, std::uint64_t budget) {
  check_bruteforce_budget(rep, budget);
  if (rep.images.empty()) return count_without_generators(rep);
  const LiftCounter counter(rep);
  const auto top = static_cast<std::int64_t>(counter.per_generator());
  std::uint64_t total = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : total)
  for (std::int64_t f = 0; f < top; ++f) {
    total += counter.count_with_first(static_cast<std::uint64_t>(f));
  }
  return total;
}

LiftTower lift_tower(const std::vector<Representation>& roots, int target_level,
                     const TowerOptions& opts) {
  LiftTower tower;
  if (roots.empty()) return tower;
  const int base_level = roots.front().ring.level();
  for (const auto& r : roots) {
    if (r.ring != roots.front().ring) throw StructuralError("lift_tower: roots over different rings");
  }
  if (target_level < base_level) throw StructuralError("lift_tower: target below the root level");
  // Validate the cap up front: every intermediate level must be constructible.
  (void)roots.front().ring.with_level(target_level);

  TowerLevel root_level;
  root_level.k = base_level;
  root_level.representatives = roots;
  root_level.total_lifts = roots.size();
  tower.levels.push_back(std::move(root_level));

  for (int k = base_level; k < target_level; ++k) {
    const auto& prev = tower.levels.back();
    const auto count = static_cast<std::int64_t>(prev.representatives.size());
    std::vector<LiftFiber> fibers(static_cast<std::size_t>(count));
    std::vector<std::string> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        fibers[static_cast<std::size_t>(i)] = lift_step(prev.representatives[static_cast<std::size_t>(i)]);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
    for (const auto& e : errors) {
      if (!e.empty()) throw StructuralError("lift_tower: " + e);
    }

    TowerLevel next;
    next.k = k + 1;
    for (std::size_t i = 0; i < fibers.size(); ++i) {
      const auto& fiber = fibers[i];
      next.fibers.push_back({i, fiber.status, fiber.fiber_size});
      next.total_lifts += fiber.fiber_size;
      if (fiber.status != LiftStatus::Torsor) continue;
      if (fiber.fiber_size > opts.sampling_budget ||
          next.representatives.size() + fiber.fiber_size > opts.level_budget) {
        next.complete = false;
        if (next.representatives.size() < opts.level_budget) {
          next.representatives.push_back(*fiber.base_lift);
          next.parents.push_back(i);
        }
        continue;
      }
      for (auto& m : fiber_members(fiber, k)) {
        next.representatives.push_back(std::move(m));
        next.parents.push_back(i);
      }
    }
    if (!prev.complete) next.complete = false;
    tower.complete = tower.complete && next.complete;
    tower.levels.push_back(std::move(next));
  }
  return tower;
}

}  // namespace locsys

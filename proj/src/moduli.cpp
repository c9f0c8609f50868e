#include "locsys/moduli.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_map>

#include "locsys/errors.hpp"

namespace locsys {

namespace {

using TupleKey = std::vector<Residue>;

struct TupleKeyHash {
  std::size_t operator()(const TupleKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (Residue x : k) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

TupleKey key_of(const std::vector<Matrix>& images) {
  TupleKey k;
  for (const auto& m : images) k.insert(k.end(), m.flat().begin(), m.flat().end());
  return k;
}

std::vector<Matrix> conjugate_images(const Matrix& g, const Matrix& g_inv,
                                     const std::vector<Matrix>& images, const CoeffRing& ring) {
  std::vector<Matrix> out;
  out.reserve(images.size());
  for (const auto& m : images) out.push_back(mat_mul(mat_mul(g, m, ring), g_inv, ring));
  return out;
}

}  // namespace

std::uint64_t OrbitGroupoid::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto& o : orbits) t += o.size;
  return t;
}

Representation conjugate_rep(const Matrix& g, const Representation& rep) {
  const Matrix g_inv = mat_inverse(g, rep.ring);
  return {rep.pres, rep.ring, rep.n, conjugate_images(g, g_inv, rep.images, rep.ring)};
}

OrbitGroupoid orbit_decomposition(const std::vector<Representation>& reps, const CoeffRing& ring,
                                  int n, const OrbitOptions& opts) {
  OrbitGroupoid out;
  out.ambient_order = gl_order(ring, n);
  if (out.ambient_order > opts.ambient_budget) {
    throw BudgetExceeded("orbit_decomposition: |GL_" + std::to_string(n) + "(" +
                             ring.to_string() + ")| = " + std::to_string(out.ambient_order) +
                             " exceeds the ambient budget",
                         0);
  }
  const auto group = gl_elements(ring, n);
  std::vector<Matrix> group_inv;
  group_inv.reserve(group.size());
  for (const auto& g : group) group_inv.push_back(mat_inverse(g, ring));

  std::unordered_map<TupleKey, std::size_t, TupleKeyHash> index;
  index.reserve(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].ring != ring || reps[i].n != n) {
      throw StructuralError("orbit_decomposition: representation over a different ring");
    }
    if (!index.emplace(key_of(reps[i].images), i).second) {
      throw StructuralError("orbit_decomposition: duplicate representation at index " +
                            std::to_string(i));
    }
  }

  const bool count_directly = out.ambient_order <= opts.direct_stabilizer_limit;
  const auto gsize = static_cast<std::int64_t>(group.size());
  std::vector<bool> visited(reps.size(), false);
  std::vector<std::size_t> image_of(group.size());

  for (std::size_t seed = 0; seed < reps.size(); ++seed) {
    if (visited[seed]) continue;
    const auto& images = reps[seed].images;
    std::atomic<bool> missing{false};
    auto sweep = [&](std::int64_t gi) {
      const auto g = static_cast<std::size_t>(gi);
      const auto it = index.find(key_of(conjugate_images(group[g], group_inv[g], images, ring)));
      if (it == index.end()) {
        missing = true;
        image_of[g] = reps.size();
      } else {
        image_of[g] = it->second;
      }
    };
    if (opts.deterministic) {
      for (std::int64_t gi = 0; gi < gsize; ++gi) sweep(gi);
    } else {
#pragma omp parallel for schedule(static)
      for (std::int64_t gi = 0; gi < gsize; ++gi) sweep(gi);
    }
    if (missing) {
      throw StructuralError("orbit_decomposition: representation list is not closed under "
                            "conjugation");
    }

    std::vector<std::size_t> members = image_of;
    std::ranges::sort(members);
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto m : members) visited[m] = true;
    const std::size_t least = *std::ranges::min_element(
        members, [&](std::size_t a, std::size_t b) { return reps[a].images < reps[b].images; });
    const std::uint64_t size = members.size();
    const std::uint64_t stabilizer =
        count_directly ? static_cast<std::uint64_t>(std::ranges::count(image_of, seed))
                       : out.ambient_order / size;
    out.orbits.push_back(Orbit{least, reps[least], size, stabilizer, std::move(members)});
  }
  std::ranges::sort(out.orbits, {}, &Orbit::rep_index);
  return out;
}

Mass groupoid_mass(const OrbitGroupoid& g) {
  Mass total(0);
  for (const auto& o : g.orbits) total += Mass(1, static_cast<std::int64_t>(o.stabilizer));
  return total;
}

std::string to_string(const Mass& m) {
  return std::to_string(m.numerator()) + "/" + std::to_string(m.denominator());
}

}  // namespace locsys

#include "locsys/repvar.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <unordered_set>

#include "locsys/errors.hpp"

namespace locsys {

Representation Representation::reduced_to(const CoeffRing& target) const {
  Representation out{pres, target, n, {}};
  out.images.reserve(images.size());
  for (const auto& m : images) out.images.push_back(locsys::reduce_to(m, target));
  return out;
}

RepCheck is_representation(const Presentation& pres, std::span<const Matrix> images,
                           const CoeffRing& ring, int n) {
  if (images.size() != static_cast<std::size_t>(pres.rank())) {
    return {false, "expected " + std::to_string(pres.rank()) + " images, got " +
                       std::to_string(images.size())};
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].n != n) return {false, "image " + std::to_string(i + 1) + " has wrong dimension"};
    if (!is_reduced(images[i], ring)) {
      return {false, "image " + std::to_string(i + 1) + " is not reduced"};
    }
    if (!is_invertible(images[i], ring)) {
      return {false, "image " + std::to_string(i + 1) + " is not invertible"};
    }
  }
  if (images.empty()) {
    for (const auto& w : pres.relators()) {
      if (!w.empty()) return {false, "relator on zero generators is nontrivial"};
    }
    return {true, {}};
  }
  const auto inverses = invert_all(images, ring);
  for (std::size_t i = 0; i < pres.relators().size(); ++i) {
    if (!word_eval(pres.relators()[i], images, inverses, ring).is_identity()) {
      return {false, "relator " + std::to_string(i + 1) + " (" +
                         word_to_string(pres.relators()[i], pres.generator_names()) +
                         ") does not evaluate to Id"};
    }
  }
  return {true, {}};
}

RepCheck is_representation(const Representation& rep) {
  return is_representation(*rep.pres, rep.images, rep.ring, rep.n);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

class RepSearch {
 public:
  RepSearch(const Presentation& pres, const CoeffRing& ring, int n, std::uint64_t budget)
      : pres_(pres), ring_(ring), budget_(budget), elements_(gl_elements(ring, n)) {
    inverses_.reserve(elements_.size());
    for (const auto& m : elements_) inverses_.push_back(mat_inverse(m, ring));
    // Relators indexed by the generator whose assignment completes them.
    checks_at_depth_.resize(static_cast<std::size_t>(std::max(pres.rank(), 1)));
    for (std::size_t i = 0; i < pres.relators().size(); ++i) {
      const int last = pres.relators()[i].max_generator();
      if (last >= 0) checks_at_depth_[static_cast<std::size_t>(last)].push_back(i);
    }
  }

  std::size_t branching() const noexcept { return elements_.size(); }
  bool stopped() const noexcept { return stop_.load(std::memory_order_relaxed); }
  std::uint64_t found() const noexcept { return found_.load(); }

  /// All solutions whose first image is elements_[first], in order.
  std::vector<std::vector<Matrix>> subtree(std::size_t first) {
    std::vector<std::vector<Matrix>> out;
    const auto r = static_cast<std::size_t>(pres_.rank());
    std::vector<Matrix> cur(r), inv(r);
    std::uint64_t local_nodes = 0;
    cur[0] = elements_[first];
    inv[0] = inverses_[first];
    dfs(0, cur, inv, out, local_nodes);
    flush(local_nodes);
    found_ += out.size();
    return out;
  }

 private:
  void flush(std::uint64_t& local_nodes) {
    if (local_nodes == 0) return;
    if (nodes_.fetch_add(local_nodes) + local_nodes > budget_) stop_ = true;
    local_nodes = 0;
  }

  // cur[0..depth] assigned; check relators completed at `depth`, then recurse.
  void dfs(std::size_t depth, std::vector<Matrix>& cur, std::vector<Matrix>& inv,
           std::vector<std::vector<Matrix>>& out, std::uint64_t& local_nodes) {
    if (++local_nodes >= 4096) {
      flush(local_nodes);
    }
    if (stopped()) return;
    for (std::size_t w : checks_at_depth_[depth]) {
      if (!word_eval(pres_.relators()[w], cur, inv, ring_).is_identity()) return;
    }
    if (depth + 1 == cur.size()) {
      out.push_back(cur);
      return;
    }
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      cur[depth + 1] = elements_[e];
      inv[depth + 1] = inverses_[e];
      dfs(depth + 1, cur, inv, out, local_nodes);
      if (stopped()) return;
    }
  }

  const Presentation& pres_;
  CoeffRing ring_;
  std::uint64_t budget_;
  std::vector<Matrix> elements_;
  std::vector<Matrix> inverses_;
  std::vector<std::vector<std::size_t>> checks_at_depth_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<std::uint64_t> found_{0};
  std::atomic<bool> stop_{false};
};

std::vector<Representation> package(const std::shared_ptr<const Presentation>& pres,
                                    const CoeffRing& ring, int n,
                                    std::vector<std::vector<std::vector<Matrix>>>& chunks) {
  std::vector<Representation> out;
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.size();
  out.reserve(total);
  for (auto& c : chunks) {
    for (auto& images : c) out.push_back(Representation{pres, ring, n, std::move(images)});
  }
  return out;
}

std::vector<Representation> enumerate_impl(std::shared_ptr<const Presentation> pres,
                                           const CoeffRing& ring, int n,
                                           const EnumerateOptions& opts, bool parallel) {
  if (!pres) throw StructuralError("enumerate_reps: null presentation");
  if (pres->rank() == 0) {
    std::vector<Representation> out;
    if (is_representation(*pres, {}, ring, n)) out.push_back({pres, ring, n, {}});
    return out;
  }
  RepSearch search(*pres, ring, n, opts.budget);
  const auto top = static_cast<std::int64_t>(search.branching());
  std::vector<std::vector<std::vector<Matrix>>> chunks(static_cast<std::size_t>(top));
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < top; ++i) {
      if (search.stopped()) continue;
      chunks[static_cast<std::size_t>(i)] = search.subtree(static_cast<std::size_t>(i));
    }
  } else {
    for (std::int64_t i = 0; i < top && !search.stopped(); ++i) {
      chunks[static_cast<std::size_t>(i)] = search.subtree(static_cast<std::size_t>(i));
    }
  }
  if (search.stopped()) {
    throw BudgetExceeded("enumerate_reps: more than " + std::to_string(opts.budget) +
                             " partial assignments inspected",
                         search.found());
  }
  return package(pres, ring, n, chunks);
}

}  // namespace

std::vector<Representation> enumerate_reps(std::shared_ptr<const Presentation> pres,
                                           const CoeffRing& ring, int n,
                                           const EnumerateOptions& opts) {
  return enumerate_impl(std::move(pres), ring, n, opts, true);
}

std::vector<Representation> enumerate_reps_serial(std::shared_ptr<const Presentation> pres,
                                                  const CoeffRing& ring, int n,
                                                  const EnumerateOptions& opts) {
  return enumerate_impl(std::move(pres), ring, n, opts, false);
}

// ---------------------------------------------------------------------------
// Framing

FramedMembership framed_membership(const Representation& rep, const std::vector<Word>& gens) {
  FramedMembership out;
  out.member = true;
  const auto inverses = invert_all(rep.images, rep.ring);
  for (const auto& w : gens) {
    if (w.max_generator() >= static_cast<int>(rep.images.size())) {
      throw StructuralError("framed_membership: word uses a generator beyond the rank");
    }
    const Matrix value = rep.images.empty() ? Matrix::identity(rep.n)
                                            : word_eval(w, rep.images, inverses, rep.ring);
    const CongruenceLevel level = congruence_level(value, rep.ring);
    if (level.j < 1) out.member = false;
    out.levels.emplace_back(w, level);
  }
  return out;
}

FramedWitness find_framing_subgroup(const Representation& rep, const SchreierOptions& opts) {
  const MatrixGroup group{rep.ring, rep.n};
  const CoeffRing ring = rep.ring;
  FramedWitness witness;
  witness.subgroup = schreier_subgroup(
      rep.pres->rank(), group, std::span<const Matrix>(rep.images),
      [&ring](const Matrix& m) { return congruence_level(m, ring).j >= 1; }, opts);
  auto membership = framed_membership(rep, witness.subgroup.schreier_generators);
  if (!membership.member) {
    throw StructuralError("find_framing_subgroup: Schreier generator escaped Id + pM_n");
  }
  witness.checked_generators = std::move(membership.levels);
  return witness;
}

std::vector<Matrix> burnside_closure(const std::vector<Matrix>& gens, const CoeffRing& ring,
                                     int n, std::uint64_t bound) {
  for (const auto& g : gens) {
    if (g.n != n) throw StructuralError("burnside_closure: generator dimension mismatch");
    if (congruence_level(g, ring).j < 1) {
      throw NotInCongruenceSubgroup("burnside_closure: generator " + to_string(g) +
                                    " is not congruent to Id mod p");
    }
  }
  if (bound == 0) {
    bound = checked_pow(ring.p(), static_cast<std::uint64_t>((ring.level() - 1) * n * n));
  }
  std::unordered_set<Matrix, MatrixHash> seen{Matrix::identity(n)};
  std::deque<Matrix> frontier{Matrix::identity(n)};
  while (!frontier.empty()) {
    const Matrix x = frontier.front();
    frontier.pop_front();
    for (const auto& g : gens) {
      Matrix y = mat_mul(x, g, ring);
      if (seen.insert(y).second) {
        if (seen.size() > bound) {
          throw BoundExceeded("burnside_closure: closure exceeds bound " + std::to_string(bound));
        }
        frontier.push_back(std::move(y));
      }
    }
  }
  std::vector<Matrix> out(seen.begin(), seen.end());
  std::ranges::sort(out);
  return out;
}

}  // namespace locsys

#pragma once

// The framed representation variety Hom(G, GL_n(Z/p^k)) of a finitely
// presented group: relator checks, exhaustive enumeration, framed
// membership, framing subgroups and congruence-subgroup closures.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "locsys/ring.hpp"
#include "locsys/schreier.hpp"
#include "locsys/words.hpp"

namespace locsys {

/// A tuple (M_1, ..., M_r) in GL_n(ring)^r; whether the relators hold is
/// checked by is_representation, not enforced on construction.
struct Representation {
  std::shared_ptr<const Presentation> pres;
  CoeffRing ring;
  int n;
  std::vector<Matrix> images;

  /// Same images reduced to a lower level.
  Representation reduced_to(const CoeffRing& target) const;
  friend bool operator==(const Representation& a, const Representation& b) {
    return a.ring == b.ring && a.n == b.n && a.images == b.images;
  }
};

struct RepCheck {
  bool ok = false;
  std::string reason;
  explicit operator bool() const noexcept { return ok; }
};

/// True iff every image is invertible of dimension n and every relator
/// evaluates to Id.
RepCheck is_representation(const Presentation& pres, std::span<const Matrix> images,
                           const CoeffRing& ring, int n);
RepCheck is_representation(const Representation& rep);

struct EnumerateOptions {
  /// Maximum number of partial assignments inspected.
  std::uint64_t budget = 100'000'000;
};

/// All representations in lexicographic order of the flattened tuple.
/// Depth-first over generator images; a relator is checked as soon as its
/// last generator is assigned. The top-level choice of M_1 is split across
/// OpenMP threads and results are merged in order. Throws BudgetExceeded.
std::vector<Representation> enumerate_reps(std::shared_ptr<const Presentation> pres,
                                           const CoeffRing& ring, int n,
                                           const EnumerateOptions& opts = {});

/// Single-threaded reference for enumerate_reps.
std::vector<Representation> enumerate_reps_serial(std::shared_ptr<const Presentation> pres,
                                                  const CoeffRing& ring, int n,
                                                  const EnumerateOptions& opts = {});

struct FramedMembership {
  bool member = false;
  /// Congruence level of every tested word, in input order.
  std::vector<std::pair<Word, CongruenceLevel>> levels;
};

/// True iff every word evaluates to Id mod p.
FramedMembership framed_membership(const Representation& rep, const std::vector<Word>& gens);

/// A subgroup U of F_r with generators all mapping into Id + pM_n.
struct FramedWitness {
  SubgroupData subgroup;
  std::vector<std::pair<Word, CongruenceLevel>> checked_generators;
};

/// Takes U = preimage of Id + pM_n under the representation, enumerates
/// its cosets and checks every Schreier generator. Throws IndexOverflow.
FramedWitness find_framing_subgroup(const Representation& rep,
                                    const SchreierOptions& opts = {});

/// Closure of elements of Id + pM_n under multiplication, sorted. The
/// default bound is |Id + pM_n(Z/p^k)| = p^{(k-1)n^2}. Throws
/// NotInCongruenceSubgroup for a bad generator and BoundExceeded if the
/// closure grows past `bound`.
std::vector<Matrix> burnside_closure(const std::vector<Matrix>& gens, const CoeffRing& ring,
                                     int n, std::uint64_t bound = 0);

}  // namespace locsys

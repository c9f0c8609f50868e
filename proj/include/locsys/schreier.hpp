#pragma once

// Reidemeister-Schreier generators for the preimage of a subgroup under a
// homomorphism from a free group to a finite group.

#include <concepts>
#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "locsys/errors.hpp"
#include "locsys/ring.hpp"
#include "locsys/words.hpp"

namespace locsys {

template <class G>
concept FiniteGroup = requires(const G& g, const typename G::Element& a) {
  { g.identity() } -> std::convertible_to<typename G::Element>;
  { g.multiply(a, a) } -> std::convertible_to<typename G::Element>;
  { g.inverse(a) } -> std::convertible_to<typename G::Element>;
} && std::equality_comparable<typename G::Element>;

/// GL_n over a coefficient ring viewed as a FiniteGroup.
struct MatrixGroup {
  using Element = Matrix;
  CoeffRing ring;
  int n;

  Matrix identity() const { return Matrix::identity(n); }
  Matrix multiply(const Matrix& a, const Matrix& b) const { return mat_mul(a, b, ring); }
  Matrix inverse(const Matrix& a) const { return mat_inverse(a, ring); }
};

/// Z/m written additively.
struct CyclicGroup {
  using Element = std::uint64_t;
  std::uint64_t order;

  Element identity() const { return 0; }
  Element multiply(Element a, Element b) const { return (a + b) % order; }
  Element inverse(Element a) const { return (order - a) % order; }
};

/// Coset table and Schreier generators of a finite-index subgroup U of F_r.
struct SubgroupData {
  int rank = 0;
  std::size_t index = 0;
  /// table[c][2*g] = c . x_g and table[c][2*g+1] = c . x_g^-1 (right action).
  std::vector<std::vector<std::size_t>> coset_table;
  /// Coset representatives; prefix-closed, transversal[0] is the empty word.
  std::vector<Word> transversal;
  /// Reduced nontrivial words u x rep(u x)^-1.
  std::vector<Word> schreier_generators;

  std::size_t act(std::size_t coset, Letter l) const {
    return coset_table[coset][static_cast<std::size_t>(2 * l.gen + (l.exp < 0 ? 1 : 0))];
  }
  /// Coset reached from coset 0 by reading w.
  std::size_t coset_of(const Word& w) const {
    std::size_t c = 0;
    for (const auto& l : w.letters()) c = act(c, l);
    return c;
  }
};

struct SchreierOptions {
  /// Letters tried, in order, when growing the transversal breadth first.
  /// Empty means x_1, ..., x_r.
  std::vector<Letter> bfs_letters;
  std::size_t max_index = 100'000;
};

/// Coset enumeration for U = phi^{-1}(S), where phi sends x_i to images[i]
/// and `in_subgroup` decides membership in S. Cosets Ug and Uh coincide iff
/// phi(g) phi(h)^-1 lies in S. Throws IndexOverflow past opts.max_index.
template <FiniteGroup G, class InSubgroup>
SubgroupData schreier_subgroup(int rank, const G& group,
                               std::span<const typename G::Element> images,
                               InSubgroup&& in_subgroup, const SchreierOptions& opts = {}) {
  using Element = typename G::Element;
  if (images.size() != static_cast<std::size_t>(rank)) {
    throw StructuralError("schreier_subgroup: expected " + std::to_string(rank) + " images");
  }
  std::vector<Letter> letters = opts.bfs_letters;
  if (letters.empty()) {
    for (int g = 0; g < rank; ++g) letters.push_back({g, 1});
  }
  std::vector<Element> inverse_images;
  for (const auto& e : images) inverse_images.push_back(group.inverse(e));
  auto image_of = [&](Letter l) -> const Element& {
    const auto g = static_cast<std::size_t>(l.gen);
    return l.exp > 0 ? images[g] : inverse_images[g];
  };

  SubgroupData out;
  out.rank = rank;
  std::vector<Element> coset_elements{group.identity()};
  std::vector<Element> coset_inverses{group.identity()};
  out.transversal.emplace_back();

  auto locate = [&](const Element& y) -> std::size_t {
    for (std::size_t d = 0; d < coset_elements.size(); ++d) {
      if (in_subgroup(group.multiply(y, coset_inverses[d]))) return d;
    }
    return coset_elements.size();
  };

  // Breadth-first transversal: minimal length, first in letter order.
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    for (const auto& l : letters) {
      Element y = group.multiply(coset_elements[c], image_of(l));
      if (locate(y) != coset_elements.size()) continue;
      if (coset_elements.size() >= opts.max_index) {
        throw IndexOverflow("schreier_subgroup: index exceeds " +
                                std::to_string(opts.max_index),
                            opts.max_index);
      }
      out.transversal.push_back(out.transversal[c] * Word({l}));
      coset_inverses.push_back(group.inverse(y));
      coset_elements.push_back(std::move(y));
      queue.push_back(coset_elements.size() - 1);
    }
  }
  out.index = coset_elements.size();

  out.coset_table.assign(out.index, std::vector<std::size_t>(static_cast<std::size_t>(2 * rank)));
  for (std::size_t c = 0; c < out.index; ++c) {
    for (int g = 0; g < rank; ++g) {
      for (int s = 0; s < 2; ++s) {
        const Letter l{g, s == 0 ? 1 : -1};
        const std::size_t d = locate(group.multiply(coset_elements[c], image_of(l)));
        if (d == out.index) {
          throw StructuralError("schreier_subgroup: letters do not reach every coset");
        }
        out.coset_table[c][static_cast<std::size_t>(2 * g + s)] = d;
      }
    }
  }

  for (std::size_t c = 0; c < out.index; ++c) {
    for (int g = 0; g < rank; ++g) {
      const std::size_t d = out.coset_table[c][static_cast<std::size_t>(2 * g)];
      Word w = word_reduce(out.transversal[c] * Word::generator(g) *
                           out.transversal[d].inverse());
      if (!w.empty()) out.schreier_generators.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace locsys

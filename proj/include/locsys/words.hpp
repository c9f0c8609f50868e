#pragma once

// Free-group words, finite presentations, evaluation at matrix tuples and
// Fox free differential calculus.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locsys/ring.hpp"

namespace locsys {

/// One letter x_gen^exp. Generators are 0-based; exp is +1 or -1.
struct Letter {
  int gen = 0;
  int exp = 1;

  Letter inverse() const noexcept { return {gen, -exp}; }
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  static Word generator(int gen) { return Word({Letter{gen, 1}}); }
  static Word power(int gen, int e);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  /// Largest generator index used, or -1 for the empty word.
  int max_generator() const noexcept;

  Word inverse() const;
  bool is_reduced() const noexcept;

  friend Word operator*(const Word& a, const Word& b);
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Freely reduced form; idempotent.
Word word_reduce(const Word& w);

/// Finitely presented group <x_1..x_r | relators>. Relators are stored
/// reduced.
class Presentation {
 public:
  Presentation(std::vector<std::string> generator_names, std::vector<Word> relators);
  /// Free group on r generators named a, b, c, ... (x1, x2, ... past 26).
  static Presentation free(int r);

  int rank() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& generator_names() const noexcept { return names_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }
  bool is_free() const noexcept { return relators_.empty(); }

  /// Canonical text "<a,b | a a b^-1, ...>".
  std::string to_string() const;
  /// Stable 64-bit FNV-1a hash of to_string(), as 16 hex digits.
  std::string hash() const;

 private:
  std::vector<std::string> names_;
  std::vector<Word> relators_;
};

/// Parse whitespace-separated letters such as `a b^-1 c^2`. Throws
/// ParseError with a 1-based column on unknown generators or bad exponents.
Word parse_word(std::string_view text, const std::vector<std::string>& names);
std::string word_to_string(const Word& w, const std::vector<std::string>& names);

/// Left-to-right product of images[gen]^exp. Throws NotAUnit if a needed
/// inverse does not exist.
Matrix word_eval(const Word& w, std::span<const Matrix> images, const CoeffRing& ring);
/// Same, with inverses supplied by the caller.
Matrix word_eval(const Word& w, std::span<const Matrix> images,
                 std::span<const Matrix> inverses, const CoeffRing& ring);

/// Element of the integral group ring of the free group kept as an
/// uncollected list of signed words.
struct FoxTerm {
  int sign = 1;
  Word prefix;
  friend auto operator<=>(const FoxTerm&, const FoxTerm&) = default;
};

struct FoxDerivative {
  std::vector<FoxTerm> terms;
  friend bool operator==(const FoxDerivative&, const FoxDerivative&) = default;
};

/// d w / d x_gen by the product rule; prefixes are reduced.
FoxDerivative fox_derivative(const Word& w, int gen);

/// sum over terms of sign * images(prefix).
Matrix fox_eval(const FoxDerivative& d, std::span<const Matrix> images,
                std::span<const Matrix> inverses, const CoeffRing& ring);

/// Inverses of every image, throwing NotAUnit on the first failure.
std::vector<Matrix> invert_all(std::span<const Matrix> images, const CoeffRing& ring);

}  // namespace locsys

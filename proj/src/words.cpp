#include "locsys/words.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include "locsys/errors.hpp"

namespace locsys {

Word Word::power(int gen, int e) {
  std::vector<Letter> letters(static_cast<std::size_t>(e < 0 ? -e : e),
                              Letter{gen, e < 0 ? -1 : 1});
  return Word(std::move(letters));
}

int Word::max_generator() const noexcept {
  int m = -1;
  for (const auto& l : letters_) m = std::max(m, l.gen);
  return m;
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
  return Word(std::move(out));
}

bool Word::is_reduced() const noexcept {
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    if (letters_[i] == letters_[i - 1].inverse()) return false;
  }
  return true;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> out = a.letters_;
  out.insert(out.end(), b.letters_.begin(), b.letters_.end());
  return Word(std::move(out));
}

Word word_reduce(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.length());
  for (const auto& l : w.letters()) {
    if (!stack.empty() && stack.back() == l.inverse()) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

// ---------------------------------------------------------------------------
// Presentation

Presentation::Presentation(std::vector<std::string> generator_names, std::vector<Word> relators)
    : names_(std::move(generator_names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw StructuralError("presentation: empty generator name");
    if (!seen.insert(n).second) {
      throw StructuralError("presentation: duplicate generator name '" + n + "'");
    }
  }
  relators_.reserve(relators.size());
  for (auto& w : relators) {
    if (w.max_generator() >= rank()) {
      throw StructuralError("presentation: relator references generator beyond rank " +
                            std::to_string(rank()));
    }
    relators_.push_back(word_reduce(w));
  }
}

Presentation Presentation::free(int r) {
  std::vector<std::string> names;
  for (int i = 0; i < r; ++i) {
    names.push_back(r <= 26 ? std::string(1, static_cast<char>('a' + i))
                            : "x" + std::to_string(i + 1));
  }
  return Presentation(std::move(names), {});
}

std::string Presentation::to_string() const {
  std::string out = "<";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) out += ",";
    out += names_[i];
  }
  out += " | ";
  for (std::size_t i = 0; i < relators_.size(); ++i) {
    if (i) out += ", ";
    out += word_to_string(relators_[i], names_);
  }
  out += ">";
  return out;
}

std::string Presentation::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_string()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Text syntax

Word parse_word(std::string_view text, const std::vector<std::string>& names) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    const std::string_view token = text.substr(start, i - start);
    const std::size_t caret = token.find('^');
    const std::string_view name = token.substr(0, caret);
    if (name == "1" && caret == std::string_view::npos) continue;  // explicit identity
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw ParseError("column " + std::to_string(start + 1) + ": unknown generator '" +
                           std::string(name) + "'",
                       0, start + 1);
    }
    int exponent = 1;
    if (caret != std::string_view::npos) {
      const std::string_view digits = token.substr(caret + 1);
      const char* first = digits.data();
      const char* last = digits.data() + digits.size();
      auto [ptr, ec] = std::from_chars(first, last, exponent);
      if (digits.empty() || ec != std::errc{} || ptr != last || exponent == 0) {
        throw ParseError("column " + std::to_string(start + caret + 2) +
                             ": bad exponent in '" + std::string(token) + "'",
                         0, start + caret + 2);
      }
    }
    const int gen = static_cast<int>(it - names.begin());
    const Word piece = Word::power(gen, exponent);
    letters.insert(letters.end(), piece.letters().begin(), piece.letters().end());
  }
  return Word(std::move(letters));
}

std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += names.at(static_cast<std::size_t>(l.gen));
    if (l.exp < 0) out += "^-1";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<Matrix> invert_all(std::span<const Matrix> images, const CoeffRing& ring) {
  std::vector<Matrix> inv;
  inv.reserve(images.size());
  for (const auto& m : images) inv.push_back(mat_inverse(m, ring));
  return inv;
}

Matrix word_eval(const Word& w, std::span<const Matrix> images,
                 std::span<const Matrix> inverses, const CoeffRing& ring) {
  if (images.empty()) throw StructuralError("word_eval: empty image tuple");
  Matrix acc = Matrix::identity(images.front().n);
  for (const auto& l : w.letters()) {
    const auto g = static_cast<std::size_t>(l.gen);
    if (g >= images.size()) throw StructuralError("word_eval: generator out of range");
    acc = mat_mul(acc, l.exp > 0 ? images[g] : inverses[g], ring);
  }
  return acc;
}

Matrix word_eval(const Word& w, std::span<const Matrix> images, const CoeffRing& ring) {
  // Only invert generators that actually occur inverted.
  std::vector<Matrix> inverses(images.begin(), images.end());
  std::vector<bool> done(images.size(), false);
  for (const auto& l : w.letters()) {
    const auto g = static_cast<std::size_t>(l.gen);
    if (l.exp < 0 && g < images.size() && !done[g]) {
      inverses[g] = mat_inverse(images[g], ring);
      done[g] = true;
    }
  }
  for (std::size_t g = 0; g < images.size(); ++g) {
    if (!done[g] && !is_invertible(images[g], ring)) {
      throw NotAUnit("word_eval: image of generator " + std::to_string(g + 1) +
                     " is not invertible");
    }
  }
  return word_eval(w, images, inverses, ring);
}

FoxDerivative fox_derivative(const Word& w, int gen) {
  FoxDerivative d;
  std::vector<Letter> prefix;
  for (const auto& l : w.letters()) {
    if (l.gen == gen) {
      if (l.exp > 0) {
        d.terms.push_back({+1, word_reduce(Word(prefix))});
      } else {
        std::vector<Letter> with_inv = prefix;
        with_inv.push_back(l);
        d.terms.push_back({-1, word_reduce(Word(std::move(with_inv)))});
      }
    }
    prefix.push_back(l);
  }
  return d;
}

Matrix fox_eval(const FoxDerivative& d, std::span<const Matrix> images,
                std::span<const Matrix> inverses, const CoeffRing& ring) {
  Matrix acc = Matrix::zero(images.front().n);
  for (const auto& t : d.terms) {
    const Matrix m = word_eval(t.prefix, images, inverses, ring);
    acc = t.sign > 0 ? mat_add(acc, m, ring) : mat_sub(acc, m, ring);
  }
  return acc;
}

}  // namespace locsys

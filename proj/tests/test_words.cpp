#include <doctest.h>

#include <random>
#include <set>

#include "locsys/errors.hpp"
#include "locsys/repvar.hpp"
#include "locsys/schreier.hpp"
#include "locsys/words.hpp"
#include "oracles.hpp"

using namespace locsys;

namespace {

const std::vector<std::string> kAB{"a", "b"};

Word w(std::string_view text, const std::vector<std::string>& names = kAB) {
  return parse_word(text, names);
}

Word random_word(std::mt19937_64& rng, int rank, std::size_t max_len) {
  std::vector<Letter> letters;
  const std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    letters.push_back({static_cast<int>(rng() % static_cast<std::uint64_t>(rank)), rng() % 2 ? 1 : -1});
  }
  return Word(std::move(letters));
}

Matrix random_unit(std::mt19937_64& rng, int n, const CoeffRing& ring) {
  while (true) {
    Matrix m(n);
    for (int i = 0; i < n * n; ++i) m.entries[static_cast<std::size_t>(i)] = rng() % ring.modulus();
    if (is_invertible(m, ring)) return m;
  }
}

oracle::Word to_oracle(const Word& word) {
  oracle::Word out;
  for (const auto& l : word.letters()) out.emplace_back(l.gen, l.exp);
  return out;
}

oracle::Mat flat(const Matrix& m) {
  oracle::Mat out;
  for (Residue x : m.flat()) out.push_back(static_cast<std::int64_t>(x));
  return out;
}

}  // namespace

TEST_SUITE("freewords") {
  TEST_CASE("word_reduce examples") {
    CHECK(word_reduce(w("a a^-1")).empty());
    CHECK(word_reduce(w("a b b^-1 a")) == w("a a"));
    const Word reduced = w("a b a^-1 b^-1");
    CHECK(word_reduce(reduced) == reduced);
    CHECK(word_reduce(word_reduce(w("b a a^-1 b^-1 a"))) == w("a"));
  }

  TEST_CASE("parse and print") {
    CHECK(w("a^3 b^-2") == Word({{0, 1}, {0, 1}, {0, 1}, {1, -1}, {1, -1}}));
    CHECK(w("1").empty());
    CHECK(w("  ").empty());
    CHECK(word_to_string(w("a b^-1"), kAB) == "a b^-1");
    CHECK(word_to_string(Word(), kAB) == "1");
    const std::vector<std::string> long_names{"x1", "y_2"};
    CHECK(w("x1^2 y_2", long_names) == Word({{0, 1}, {0, 1}, {1, 1}}));
  }

  TEST_CASE("parse errors carry the column") {
    try {
      (void)w("a b c");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.column() == 5);
    }
    try {
      (void)w("a^x");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(w("a^0"), ParseError);
    CHECK_THROWS_AS(w("a^"), ParseError);
  }

  TEST_CASE("presentation basics") {
    const Presentation f2 = Presentation::free(2);
    CHECK(f2.rank() == 2);
    CHECK(f2.is_free());
    CHECK(f2.generator_names() == kAB);
    const Presentation comm(kAB, {w("a b a^-1 b^-1")});
    CHECK(comm.to_string() == "<a,b | a b a^-1 b^-1>");
    CHECK(comm.hash().size() == 16);
    CHECK(comm.hash() == Presentation(kAB, {w("a b a^-1 b^-1")}).hash());
    CHECK(comm.hash() != f2.hash());
    // relators are stored reduced
    const Presentation p(kAB, {w("a b b^-1 a")});
    CHECK(p.relators().front() == w("a a"));
    CHECK_THROWS_AS(Presentation({"a", "a"}, {}), StructuralError);
    CHECK_THROWS_AS(Presentation({"a"}, {Word::generator(1)}), StructuralError);
  }

  TEST_CASE("word_eval examples") {
    const CoeffRing r4(2, 2);
    const std::vector<Matrix> ids{Matrix::identity(2), Matrix::identity(2)};
    CHECK(word_eval(w("a b a^-1 b^-1"), ids, r4).is_identity());
    const std::vector<Matrix> n{Matrix::from_values(2, {1, 2, 0, 1}, r4)};
    CHECK(word_eval(w("a a", {"a"}), n, r4).is_identity());
    const std::vector<Matrix> ab{Matrix::from_values(2, {1, 1, 0, 1}, r4),
                                 Matrix::from_values(2, {1, 0, 1, 1}, r4)};
    // schoolbook oracle: [[3,3],[1,0]]
    CHECK(word_eval(w("a b a^-1 b^-1"), ab, r4) == Matrix::from_values(2, {3, 3, 1, 0}, r4));
  }

  TEST_CASE("word_eval agrees with the oracle and respects reduction") {
    std::mt19937_64 rng(21);
    for (const auto& ring : {CoeffRing(2, 3), CoeffRing(3, 2), CoeffRing(5, 1)}) {
      const auto m = static_cast<std::int64_t>(ring.modulus());
      for (int t = 0; t < 60; ++t) {
        const int n = 1 + static_cast<int>(rng() % 3);
        std::vector<Matrix> images{random_unit(rng, n, ring), random_unit(rng, n, ring),
                                   random_unit(rng, n, ring)};
        const auto inverses = invert_all(images, ring);
        const Word word = random_word(rng, 3, 14);
        const Matrix value = word_eval(word, images, ring);
        CHECK(value == word_eval(word_reduce(word), images, ring));
        CHECK(value == word_eval(word, images, inverses, ring));
        std::vector<oracle::Mat> oi, oinv;
        for (std::size_t i = 0; i < 3; ++i) {
          oi.push_back(flat(images[i]));
          oinv.push_back(flat(inverses[i]));
        }
        CHECK(flat(value) == oracle::eval(to_oracle(word), oi, oinv, n, m));
      }
    }
  }

  TEST_CASE("fox_derivative examples") {
    const std::vector<std::string> x{"x1", "x2"};
    CHECK(fox_derivative(w("x1", x), 0).terms == std::vector<FoxTerm>{{1, Word()}});
    CHECK(fox_derivative(w("x1^2", x), 0).terms ==
          std::vector<FoxTerm>{{1, Word()}, {1, w("x1", x)}});
    CHECK(fox_derivative(w("x1 x2 x1^-1 x2^-1", x), 0).terms ==
          std::vector<FoxTerm>{{1, Word()}, {-1, w("x1 x2 x1^-1", x)}});
    CHECK(fox_derivative(w("x2", x), 0).terms.empty());
  }

  TEST_CASE("fundamental Fox identity on random words") {
    std::mt19937_64 rng(22);
    for (const auto& ring : {CoeffRing(2, 2), CoeffRing(3, 2), CoeffRing(7, 1)}) {
      for (int t = 0; t < 80; ++t) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const int r = 1 + static_cast<int>(rng() % 3);
        std::vector<Matrix> images;
        for (int i = 0; i < r; ++i) images.push_back(random_unit(rng, n, ring));
        const auto inverses = invert_all(images, ring);
        const Word word = random_word(rng, r, 12);
        Matrix rhs = Matrix::zero(n);
        for (int i = 0; i < r; ++i) {
          const Matrix d = fox_eval(fox_derivative(word, i), images, inverses, ring);
          rhs = mat_add(rhs, mat_mul(d, mat_sub(images[static_cast<std::size_t>(i)], Matrix::identity(n), ring), ring), ring);
        }
        CHECK(mat_sub(word_eval(word, images, ring), Matrix::identity(n), ring) == rhs);
      }
    }
  }
}

TEST_SUITE("schreier") {
  TEST_CASE("F_2 onto Z/2 with a -> 1, b -> 0") {
    const std::vector<std::uint64_t> images{1, 0};
    const auto sub = schreier_subgroup(2, CyclicGroup{2}, std::span<const std::uint64_t>(images),
                                       [](std::uint64_t x) { return x == 0; });
    CHECK(sub.index == 2);
    CHECK(sub.transversal == std::vector<Word>{Word(), w("a")});
    CHECK(sub.schreier_generators == std::vector<Word>{w("b"), w("a a"), w("a b a^-1")});
  }

  TEST_CASE("trivial map gives the whole free group") {
    const std::vector<std::uint64_t> images{0, 0, 0};
    const auto sub = schreier_subgroup(3, CyclicGroup{5}, std::span<const std::uint64_t>(images),
                                       [](std::uint64_t x) { return x == 0; });
    CHECK(sub.index == 1);
    CHECK(sub.schreier_generators ==
          std::vector<Word>{Word::generator(0), Word::generator(1), Word::generator(2)});
  }

  TEST_CASE("F_1 onto Z/3") {
    const std::vector<std::uint64_t> images{1};
    const auto sub = schreier_subgroup(1, CyclicGroup{3}, std::span<const std::uint64_t>(images),
                                       [](std::uint64_t x) { return x == 0; });
    CHECK(sub.index == 3);
    CHECK(sub.schreier_generators == std::vector<Word>{Word::power(0, 3)});
  }

  TEST_CASE("index overflow") {
    const std::vector<std::uint64_t> images{1};
    SchreierOptions opts;
    opts.max_index = 4;
    CHECK_THROWS_AS(schreier_subgroup(1, CyclicGroup{7}, std::span<const std::uint64_t>(images),
                                      [](std::uint64_t x) { return x == 0; }, opts),
                    IndexOverflow);
  }

  TEST_CASE("random matrix targets: rank formula, membership and closure") {
    std::mt19937_64 rng(23);
    const CoeffRing f2(2, 1), f3(3, 1);
    for (int t = 0; t < 40; ++t) {
      const CoeffRing& ring = t % 2 ? f3 : f2;
      const int r = 1 + static_cast<int>(rng() % 3);
      std::vector<Matrix> images;
      for (int i = 0; i < r; ++i) images.push_back(random_unit(rng, 2, ring));
      const MatrixGroup group{ring, 2};
      // subgroup: upper triangular matrices
      auto in_sub = [](const Matrix& m) { return m.at(1, 0) == 0; };
      const auto sub = schreier_subgroup(r, group, std::span<const Matrix>(images), in_sub);
      CHECK(sub.schreier_generators.size() == 1 + sub.index * static_cast<std::size_t>(r - 1));
      for (const auto& g : sub.schreier_generators) {
        CHECK(in_sub(word_eval(g, images, ring)));
        CHECK(sub.coset_of(g) == 0);
      }
      // closure of generator images equals image(F_r) intersected with the subgroup
      std::set<Matrix> image_group{Matrix::identity(2)};
      std::vector<Matrix> frontier{Matrix::identity(2)};
      while (!frontier.empty()) {
        const Matrix m = frontier.back();
        frontier.pop_back();
        for (const auto& g : images) {
          const Matrix next = mat_mul(m, g, ring);
          if (image_group.insert(next).second) frontier.push_back(next);
        }
      }
      std::set<Matrix> target;
      for (const auto& m : image_group)
        if (in_sub(m)) target.insert(m);
      std::set<Matrix> generated{Matrix::identity(2)};
      frontier = {Matrix::identity(2)};
      std::vector<Matrix> gen_images;
      for (const auto& g : sub.schreier_generators) gen_images.push_back(word_eval(g, images, ring));
      while (!frontier.empty()) {
        const Matrix m = frontier.back();
        frontier.pop_back();
        for (const auto& g : gen_images) {
          const Matrix next = mat_mul(m, g, ring);
          if (generated.insert(next).second) frontier.push_back(next);
        }
      }
      CHECK(generated == target);
      CHECK(image_group.size() == sub.index * target.size());
    }
  }

  TEST_CASE("transversal order does not change the subgroup") {
    std::mt19937_64 rng(24);
    const CoeffRing ring(3, 1);
    for (int t = 0; t < 20; ++t) {
      const std::vector<Matrix> images{random_unit(rng, 2, ring), random_unit(rng, 2, ring)};
      const MatrixGroup group{ring, 2};
      auto in_sub = [&](const Matrix& m) { return m.is_identity(); };
      const auto first = schreier_subgroup(2, group, std::span<const Matrix>(images), in_sub);
      SchreierOptions opts;
      opts.bfs_letters = {{1, -1}, {0, -1}, {1, 1}, {0, 1}};
      const auto second = schreier_subgroup(2, group, std::span<const Matrix>(images), in_sub, opts);
      CHECK(first.index == second.index);
      CHECK(first.schreier_generators.size() == second.schreier_generators.size());
      for (const auto& g : second.schreier_generators) CHECK(first.coset_of(g) == 0);
      for (const auto& g : first.schreier_generators) CHECK(second.coset_of(g) == 0);
    }
  }
}

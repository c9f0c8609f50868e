#include <doctest.h>

#include <algorithm>
#include <set>

#include "locsys/deform.hpp"
#include "locsys/errors.hpp"
#include "oracles.hpp"

using namespace locsys;

namespace {

std::shared_ptr<const Presentation> make_pres(std::vector<std::string> names,
                                              const std::vector<std::string>& relators) {
  std::vector<Word> words;
  for (const auto& r : relators) words.push_back(parse_word(r, names));
  return std::make_shared<const Presentation>(std::move(names), std::move(words));
}

std::shared_ptr<const Presentation> free_pres(int r) {
  return std::make_shared<const Presentation>(Presentation::free(r));
}

// Units x of Z/m with x^e = 1 and x = root mod m/p.
std::vector<std::int64_t> roots_of_unity(std::int64_t m, int e, std::int64_t p) {
  std::vector<std::int64_t> out;
  for (std::int64_t x = 1; x < m; ++x) {
    if (x % p == 0) continue;
    std::int64_t acc = 1;
    for (int i = 0; i < e; ++i) acc = acc * x % m;
    if (acc == 1) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_SUITE("deform") {
  TEST_CASE("free groups always lift with fiber p^{r n^2}") {
    for (int r = 1; r <= 2; ++r) {
      for (const auto& rep : enumerate_reps(free_pres(r), CoeffRing(2, 1), 2)) {
        const auto fiber = lift_step(rep);
        CHECK(fiber.status == LiftStatus::Torsor);
        CHECK(fiber.fiber_size == checked_pow(2, static_cast<std::uint64_t>(4 * r)));
      }
    }
    const Representation one{free_pres(1), CoeffRing(3, 2), 1, {Matrix::identity(1)}};
    CHECK(count_lifts_bruteforce(one) == 3);
  }

  TEST_CASE("<a | a^2> with rho = 1 over F_2") {
    const auto a2 = make_pres({"a"}, {"a^2"});
    const Representation one{a2, CoeffRing(2, 1), 1, {Matrix::identity(1)}};
    const auto fiber = lift_step(one);
    CHECK(fiber.status == LiftStatus::Torsor);
    CHECK(fiber.fiber_size == 2);
    CHECK(fiber.z1 == 1);
    CHECK(count_lifts_bruteforce(one) == 2);
    std::set<Residue> lifts;
    for (const auto& m : fiber_members(fiber, 1)) lifts.insert(m.images[0].at(0, 0));
    CHECK(lifts == std::set<Residue>{1, 3});
    CHECK(roots_of_unity(4, 2, 2) == std::vector<std::int64_t>{1, 3});
  }

  TEST_CASE("<a | a^2> with rho = -Id over F_3") {
    const auto a2 = make_pres({"a"}, {"a^2"});
    const CoeffRing f3(3, 1);
    const Representation minus{a2, f3, 2, {Matrix::from_values(2, {2, 0, 0, 2}, f3)}};
    std::uint64_t brute = 0;
    oracle::for_each_matrix(2, 3, [&](const oracle::Mat& d) {
      oracle::Mat x{2 + 3 * d[0], 3 * d[1], 3 * d[2], 2 + 3 * d[3]};
      if (oracle::mul(x, x, 2, 9) == oracle::identity(2)) ++brute;
    });
    const auto fiber = lift_step(minus);
    CHECK(fiber.fiber_size == brute);
    CHECK(count_lifts_bruteforce(minus) == brute);
  }

  TEST_CASE("obstructed instances give Empty and zero") {
    // 4 is a cube root of unity mod 9 that does not lift to Z/27
    const auto a3 = make_pres({"a"}, {"a^3"});
    const CoeffRing r9(3, 2);
    CHECK(roots_of_unity(9, 3, 3) == std::vector<std::int64_t>{1, 4, 7});
    CHECK(roots_of_unity(27, 3, 3) == std::vector<std::int64_t>{1, 10, 19});
    const Representation four{a3, r9, 1, {Matrix::from_values(1, {4}, r9)}};
    const auto fiber = lift_step(four);
    CHECK(fiber.status == LiftStatus::Empty);
    CHECK(fiber.fiber_size == 0);
    CHECK_FALSE(fiber.base_lift.has_value());
    CHECK(fiber_members(fiber, 2).empty());
    CHECK(count_lifts_bruteforce(four) == 0);

    // 3 squares to 1 mod 8 but nothing above it squares to 1 mod 16
    const auto a2 = make_pres({"a"}, {"a^2"});
    CHECK(roots_of_unity(16, 2, 2) == std::vector<std::int64_t>{1, 7, 9, 15});
    const Representation three{a2, CoeffRing(2, 3), 1, {Matrix::from_values(1, {3}, CoeffRing(2, 3))}};
    CHECK(lift_step(three).status == LiftStatus::Empty);
    CHECK(count_lifts_bruteforce(three) == 0);
  }

  TEST_CASE("lift_step agrees with brute force on every small instance") {
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> groups{
        {{"a"}, {"a^2"}},
        {{"a"}, {"a^3"}},
        {{"a"}, {"a^4"}},
        {{"a", "b"}, {"a b a^-1 b^-1"}},
        {{"a", "b"}, {"a^2", "b^2", "a b a b"}},
    };
    for (const auto& [names, rels] : groups) {
      const auto pres = make_pres(names, rels);
      for (const auto& [p, k, n] : std::vector<std::tuple<std::uint64_t, int, int>>{
               {2, 1, 2}, {3, 1, 2}, {2, 2, 1}, {2, 3, 1}, {3, 2, 1}, {2, 2, 2}}) {
        const CoeffRing ring(p, k);
        if (pres->rank() == 2 && n == 2 && k == 2) continue;
        for (const auto& rep : enumerate_reps(pres, ring, n)) {
          CAPTURE(pres->to_string());
          CAPTURE(ring.to_string());
          const auto fiber = lift_step(rep);
          const auto brute = count_lifts_bruteforce(rep);
          CHECK(fiber.fiber_size == brute);
          CHECK((fiber.status == LiftStatus::Empty) == (brute == 0));
          if (fiber.status == LiftStatus::Torsor) {
            CHECK(fiber.fiber_size == checked_pow(p, fiber.z1));
          }
        }
      }
    }
  }

  TEST_CASE("fiber members are distinct lifts of the parent") {
    const auto comm = make_pres({"a", "b"}, {"a b a^-1 b^-1"});
    const CoeffRing f2(2, 1);
    const auto reps = enumerate_reps(comm, f2, 2);
    for (const auto& rep : reps) {
      const auto fiber = lift_step(rep);
      if (fiber.status != LiftStatus::Torsor) continue;
      const auto members = fiber_members(fiber, 1);
      CHECK(members.size() == fiber.fiber_size);
      std::set<std::vector<Matrix>> distinct;
      for (const auto& m : members) {
        CHECK(is_representation(m).ok);
        CHECK(m.reduced_to(f2) == rep);
        distinct.insert(m.images);
      }
      CHECK(distinct.size() == members.size());
    }
  }

  TEST_CASE("serial and parallel brute force agree") {
    const auto comm = make_pres({"a", "b"}, {"a b a^-1 b^-1"});
    for (const auto& rep : enumerate_reps(comm, CoeffRing(2, 1), 2)) {
      CHECK(count_lifts_bruteforce(rep) == count_lifts_bruteforce_serial(rep));
    }
    const Representation big{free_pres(2), CoeffRing(3, 1), 2, {Matrix::identity(2), Matrix::identity(2)}};
    CHECK_THROWS_AS(count_lifts_bruteforce(big, 1000), BudgetExceeded);
  }

  TEST_CASE("lift_tower examples") {
    const CoeffRing f2(2, 1);
    const Representation unit{free_pres(1), f2, 1, {Matrix::identity(1)}};
    const auto t = lift_tower({unit}, 3);
    REQUIRE(t.levels.size() == 3);
    CHECK(t.complete);
    for (std::size_t j = 1; j < 3; ++j) {
      for (const auto& f : t.levels[j].fibers) CHECK(f.size == 2);
    }
    CHECK(t.levels[1].total_lifts == 2);
    CHECK(t.levels[2].total_lifts == 4);

    const Representation f2rep{free_pres(2), f2, 2, {Matrix::identity(2), Matrix::identity(2)}};
    const auto t2 = lift_tower({f2rep}, 2);
    REQUIRE(t2.levels.size() == 2);
    CHECK(t2.levels[1].fibers.front().size == 256);
    CHECK(t2.levels[1].total_lifts == 256);

    // <a | a^3>, p = 3, root 1: cube all units of Z/9 and Z/27
    const auto a3 = make_pres({"a"}, {"a^3"});
    const CoeffRing f3(3, 1);
    const Representation root{a3, f3, 1, {Matrix::identity(1)}};
    const auto t3 = lift_tower({root}, 3);
    REQUIRE(t3.levels.size() == 3);
    const auto level2 = roots_of_unity(9, 3, 3);
    CHECK(t3.levels[1].total_lifts == level2.size());
    std::size_t level3 = 0;
    for (auto x : roots_of_unity(27, 3, 3)) level3 += std::ranges::count(level2, x % 9) > 0;
    CHECK(t3.levels[2].total_lifts == level3);
    CHECK(level3 == 3);
  }

  TEST_CASE("tower coherence and framing stability") {
    const auto comm = make_pres({"a", "b"}, {"a b a^-1 b^-1"});
    const CoeffRing f2(2, 1);
    const auto roots = enumerate_reps(comm, f2, 2);
    const auto tower = lift_tower(roots, 3);
    for (std::size_t j = 1; j < tower.levels.size(); ++j) {
      const auto& level = tower.levels[j];
      const auto& prev = tower.levels[j - 1];
      const CoeffRing lower = f2.with_level(prev.k);
      for (std::size_t i = 0; i < level.representatives.size(); ++i) {
        const auto& parent = prev.representatives[level.parents[i]];
        CHECK(level.representatives[i].reduced_to(lower) == parent);
        CHECK(is_representation(level.representatives[i]).ok);
      }
    }
    // framed roots stay framed
    const std::vector<Word> gens{Word::generator(0), Word::generator(1)};
    for (std::size_t i = 0; i < tower.levels[1].representatives.size(); ++i) {
      const auto& parent = roots[tower.levels[1].parents[i]];
      if (framed_membership(parent, gens).member) {
        CHECK(framed_membership(tower.levels[1].representatives[i], gens).member);
      }
    }
  }

  TEST_CASE("sampling keeps counts but only the base lift") {
    const CoeffRing f3(3, 1);
    const Representation rep{free_pres(2), f3, 2, {Matrix::identity(2), Matrix::identity(2)}};
    TowerOptions opts;
    opts.sampling_budget = 10;
    const auto t = lift_tower({rep}, 2, opts);
    CHECK_FALSE(t.complete);
    CHECK(t.levels[1].total_lifts == 6561);
    CHECK(t.levels[1].representatives.size() == 1);
  }
}

#include <algorithm>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "locsys/app.hpp"
#include "locsys/cohom.hpp"
#include "locsys/deform.hpp"
#include "locsys/errors.hpp"
#include "locsys/moduli.hpp"
#include "locsys/repvar.hpp"

namespace locsys::app {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultEnumerateBudget = 1'000'000'000;
constexpr std::uint64_t kDefaultSamplingBudget = 4096;
constexpr std::uint64_t kVerifyBruteforceBudget = 1'000'000;
constexpr std::uint64_t kVerifyNaiveOracleLimit = 100'000;

class Violation : public Error {
 public:
  using Error::Error;
};

json ring_json(const CoeffRing& ring) { return {{"p", ring.p()}, {"k", ring.level()}}; }

json summary_json(const JobConfig& cfg, const CoeffRing& ring, std::size_t count) {
  return {{"count", count},
          {"ring", ring_json(ring)},
          {"n", cfg.n},
          {"presentation", cfg.pres->to_string()},
          {"presentationHash", cfg.pres->hash()}};
}

json images_json(const Representation& rep) {
  json arr = json::array();
  for (const auto& m : rep.images) arr.push_back(matrix_to_json(m, rep.ring));
  return arr;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + '\n';
}

std::vector<Representation> enumerate_for(const JobConfig& cfg, const CoeffRing& ring,
                                          std::uint64_t budget) {
  EnumerateOptions opts;
  opts.budget = budget;
  return enumerate_reps(cfg.pres, ring, cfg.n, opts);
}

void check_hard_cap(const JobConfig& cfg, const CoeffRing& ring) {
  const std::uint64_t cap = hard_cap();
  const std::uint64_t order = gl_order(ring, cfg.n);
  std::uint64_t space = 1;
  for (int i = 0; i < cfg.pres->rank(); ++i) {
    if (space > cap / std::max<std::uint64_t>(order, 1)) {
      space = cap + 1;
      break;
    }
    space *= order;
  }
  if (space > cap) {
    throw BudgetExceeded("search space |GL_" + std::to_string(cfg.n) + "(" + ring.to_string() +
                             ")|^" + std::to_string(cfg.pres->rank()) +
                             " exceeds the hard cap " + std::to_string(cap) +
                             " (set LOCSYS_HARD_CAP to override)",
                         0);
  }
}

// ---------------------------------------------------------------------------

RunResult run_enumerate(const JobConfig& cfg, const CoeffRing& ring) {
  const auto reps = enumerate_for(cfg, ring, cfg.budget.value_or(kDefaultEnumerateBudget));
  RunResult out;
  json list = json::array();
  std::vector<std::string> header{"index"};
  for (const auto& name : cfg.pres->generator_names()) {
    for (int i = 0; i < cfg.n; ++i)
      for (int j = 0; j < cfg.n; ++j) header.push_back(name + "_" + std::to_string(i + 1) + std::to_string(j + 1));
  }
  out.csv = join(header);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    list.push_back({{"index", i}, {"images", images_json(reps[i])}});
    std::vector<std::string> row{std::to_string(i)};
    for (const auto& m : reps[i].images)
      for (Residue x : m.flat()) row.push_back(std::to_string(x));
    out.csv += join(row);
  }
  out.report = {{"summary", summary_json(cfg, ring, reps.size())}, {"representations", list}};
  out.message = "enumerate: " + std::to_string(reps.size()) + " representations";
  return out;
}

RunResult run_cohom(const JobConfig& cfg, const CoeffRing& ring) {
  if (!ring.can_lift()) throw StructuralError("cohom: p^(k+1) exceeds the modulus cap");
  const auto reps = enumerate_for(cfg, ring, cfg.budget.value_or(kDefaultEnumerateBudget));
  const auto count = static_cast<std::int64_t>(reps.size());
  std::vector<json> rows(reps.size());
  std::vector<std::string> csv_rows(reps.size());
  std::vector<std::string> errors(reps.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const auto spaces = cocycle_spaces(reps[idx]);
      const auto obstruction = lift_obstruction(reps[idx], naive_lift(reps[idx]));
      rows[idx] = {{"index", idx},          {"h0", spaces.h0}, {"z1", spaces.z1},
                   {"b1", spaces.b1},       {"h1", spaces.h1},
                   {"obstructionRank", obstruction.rank()}};
      csv_rows[idx] = join({std::to_string(idx), std::to_string(spaces.h0),
                            std::to_string(spaces.z1), std::to_string(spaces.b1),
                            std::to_string(spaces.h1), std::to_string(obstruction.rank())});
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw StructuralError("cohom: " + e);
  }
  RunResult out;
  out.report = {{"summary", summary_json(cfg, ring, reps.size())}, {"representations", rows}};
  out.csv = "index,h0,z1,b1,h1,obstructionRank\n";
  for (const auto& r : csv_rows) out.csv += r;
  out.message = "cohom: " + std::to_string(reps.size()) + " representations";
  return out;
}

RunResult run_orbits(const JobConfig& cfg, const CoeffRing& ring) {
  const auto reps = enumerate_for(cfg, ring, cfg.budget.value_or(kDefaultEnumerateBudget));
  OrbitOptions opts;
  opts.deterministic = cfg.deterministic;
  const auto groupoid = orbit_decomposition(reps, ring, cfg.n, opts);
  const Mass mass = groupoid_mass(groupoid);
  RunResult out;
  json orbits = json::array();
  out.csv = "repIndex,size,stabilizer\n";
  for (const auto& o : groupoid.orbits) {
    orbits.push_back({{"repIndex", o.rep_index}, {"size", o.size}, {"stabilizer", o.stabilizer}});
    out.csv += join({std::to_string(o.rep_index), std::to_string(o.size),
                     std::to_string(o.stabilizer)});
  }
  out.report = {{"summary", summary_json(cfg, ring, reps.size())},
                {"orbitCount", groupoid.orbits.size()},
                {"ambientOrder", groupoid.ambient_order},
                {"mass", to_string(mass)},
                {"orbits", orbits}};
  out.message = "orbits: " + std::to_string(groupoid.orbits.size()) + " orbits, mass " +
                to_string(mass);
  return out;
}

RunResult run_lift(const JobConfig& cfg, const CoeffRing& ring) {
  const int target = cfg.levels > 0 ? cfg.levels : cfg.k + 1;
  if (target < cfg.k) {
    throw ParseError("--levels " + std::to_string(target) + " is below the base level k = " +
                         std::to_string(cfg.k),
                     0, 0);
  }
  (void)ring.with_level(target);
  const auto roots = enumerate_for(cfg, ring, kDefaultEnumerateBudget);
  TowerOptions opts;
  opts.sampling_budget = cfg.budget.value_or(kDefaultSamplingBudget);
  const auto tower = lift_tower(roots, target, opts);

  RunResult out;
  json levels = json::array();
  out.csv = "k,parentIndex,status,size\n";
  for (const auto& level : tower.levels) {
    json fibers = json::array();
    for (const auto& f : level.fibers) {
      fibers.push_back({{"parentIndex", f.parent_index},
                        {"status", to_string(f.status)},
                        {"size", f.size}});
      out.csv += join({std::to_string(level.k), std::to_string(f.parent_index),
                       to_string(f.status), std::to_string(f.size)});
    }
    levels.push_back({{"k", level.k},
                      {"fibers", fibers},
                      {"totalLifts", level.total_lifts},
                      {"representatives", level.representatives.size()},
                      {"complete", level.complete}});
  }
  out.report = {{"summary", summary_json(cfg, ring, roots.size())},
                {"targetLevel", target},
                {"complete", tower.complete},
                {"levels", levels}};
  out.message = "lift: " + std::to_string(roots.size()) + " roots lifted to level " +
                std::to_string(target) + (tower.complete ? "" : " (sampled)");
  return out;
}

// ---------------------------------------------------------------------------
// verify

struct CheckLog {
  json checks = json::array();
  std::string csv = "check,passed,detail\n";
  bool all_passed = true;

  void record(const std::string& name, bool passed, const std::string& detail) {
    checks.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    std::string quoted = detail;
    std::ranges::replace(quoted, ',', ';');
    csv += join({name, passed ? "true" : "false", quoted});
    all_passed = all_passed && passed;
  }

  template <class F>
  void check(const std::string& name, F&& body) {
    try {
      record(name, true, body());
    } catch (const Violation& v) {
      record(name, false, v.what());
    } catch (const BudgetExceeded& e) {
      record(name, true, std::string("skipped: ") + e.what());
    } catch (const std::exception& e) {
      record(name, false, std::string("error: ") + e.what());
    }
  }
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Violation(msg);
}

RunResult run_verify(const JobConfig& cfg, const CoeffRing& ring) {
  const auto reps = enumerate_for(cfg, ring, cfg.budget.value_or(kDefaultEnumerateBudget));
  const Presentation& pres = *cfg.pres;
  const std::uint64_t order = gl_order(ring, cfg.n);
  CheckLog log;

  log.check("gl_order", [&] {
    const auto elements = gl_elements(ring, cfg.n);
    require(elements.size() == order, "gl_elements found " + std::to_string(elements.size()) +
                                          ", formula gives " + std::to_string(order));
    return std::to_string(order) + " elements";
  });

  log.check("relator_soundness", [&] {
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto check = is_representation(reps[i]);
      require(check.ok, "representation " + std::to_string(i) + ": " + check.reason);
    }
    require(std::ranges::is_sorted(reps, {}, &Representation::images),
            "enumeration is not in canonical order");
    return std::to_string(reps.size()) + " representations satisfy every relator";
  });

  if (pres.is_free()) {
    log.check("free_group_count", [&] {
      const std::uint64_t expected = checked_pow(order, static_cast<std::uint64_t>(pres.rank()));
      require(reps.size() == expected, "count " + std::to_string(reps.size()) +
                                           " != gl_order^r = " + std::to_string(expected));
      return "count " + std::to_string(reps.size()) + " = " + std::to_string(order) + "^" +
             std::to_string(pres.rank());
    });
  }

  log.check("completeness", [&] {
    std::uint64_t space = 1;
    for (int i = 0; i < pres.rank(); ++i) {
      space *= order;
      if (space > kVerifyNaiveOracleLimit) {
        throw BudgetExceeded("naive oracle search space too large", 0);
      }
    }
    const auto elements = gl_elements(ring, cfg.n);
    std::vector<std::size_t> idx(static_cast<std::size_t>(pres.rank()), 0);
    std::uint64_t naive = 0;
    std::vector<Matrix> tuple(idx.size());
    for (std::uint64_t t = 0; t < space; ++t) {
      std::uint64_t rest = t;
      for (std::size_t g = idx.size(); g-- > 0;) {
        tuple[g] = elements[rest % elements.size()];
        rest /= elements.size();
      }
      if (is_representation(pres, tuple, ring, cfg.n)) ++naive;
    }
    require(naive == reps.size(), "naive count " + std::to_string(naive) + " != " +
                                      std::to_string(reps.size()));
    return "naive exhaustive count matches";
  });

  log.check("union_decomposition", [&] {
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto witness = find_framing_subgroup(reps[i]);
      require(framed_membership(reps[i], witness.subgroup.schreier_generators).member,
              "representation " + std::to_string(i) + " escapes its framing subgroup");
      if (pres.is_free()) {
        const std::size_t expected = 1 + witness.subgroup.index * static_cast<std::size_t>(pres.rank() - 1);
        require(witness.subgroup.schreier_generators.size() == expected,
                "Nielsen-Schreier rank mismatch for representation " + std::to_string(i));
      }
    }
    return "every representation lies in a framed subdomain";
  });

  log.check("burnside", [&] {
    const std::uint64_t group_size =
        checked_pow(ring.p(), static_cast<std::uint64_t>((ring.level() - 1) * cfg.n * cfg.n));
    const std::uint64_t exponent = ring.p_power(ring.level() - 1);
    std::set<std::vector<Matrix>> seen;
    for (const auto& rep : reps) {
      const auto witness = find_framing_subgroup(rep);
      std::vector<Matrix> gens;
      const auto inverses = invert_all(rep.images, ring);
      for (const auto& w : witness.subgroup.schreier_generators) {
        gens.push_back(word_eval(w, rep.images, inverses, ring));
      }
      std::ranges::sort(gens);
      if (!seen.insert(gens).second) continue;
      const auto closure = burnside_closure(gens, ring, cfg.n);
      require(group_size % closure.size() == 0,
              "closure size " + std::to_string(closure.size()) + " does not divide " +
                  std::to_string(group_size));
      for (const auto& m : closure) {
        require(exponent % congruence_element_order(m, ring) == 0,
                "element order does not divide p^(k-1)");
      }
    }
    return std::to_string(seen.size()) + " distinct closures checked";
  });

  log.check("torsor_fibers", [&] {
    if (!ring.can_lift()) throw BudgetExceeded("ring cannot be lifted", 0);
    std::size_t torsors = 0, empty = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto fiber = lift_step(reps[i]);
      const auto brute = count_lifts_bruteforce(reps[i], kVerifyBruteforceBudget);
      require(brute == fiber.fiber_size, "representation " + std::to_string(i) + ": lift_step " +
                                             std::to_string(fiber.fiber_size) + " vs brute force " +
                                             std::to_string(brute));
      if (fiber.status == LiftStatus::Torsor) {
        ++torsors;
        require(is_representation(*fiber.base_lift).ok, "base lift is not a representation");
        require(fiber.base_lift->reduced_to(ring) == reps[i], "base lift does not reduce to parent");
      } else {
        ++empty;
      }
    }
    return std::to_string(torsors) + " torsors, " + std::to_string(empty) + " obstructed";
  });

  log.check("cohomology_identities", [&] {
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto s = cocycle_spaces(reps[i]);
      require(s.h1 == s.z1 - s.b1 && s.h0 + s.b1 == static_cast<std::size_t>(cfg.n * cfg.n),
              "dimension identity fails for representation " + std::to_string(i));
    }
    return "h1 = z1 - b1 and h0 + b1 = n^2 for every representation";
  });

  OrbitOptions orbit_opts;
  orbit_opts.deterministic = cfg.deterministic;
  std::optional<OrbitGroupoid> groupoid;
  log.check("mass_formula", [&] {
    groupoid = orbit_decomposition(reps, ring, cfg.n, orbit_opts);
    for (const auto& o : groupoid->orbits) {
      require(o.size * o.stabilizer == order, "orbit-stabilizer fails at index " +
                                                  std::to_string(o.rep_index));
    }
    require(groupoid->total() == reps.size(), "orbit sizes do not sum to the count");
    const Mass mass = groupoid_mass(*groupoid);
    const Mass expected(static_cast<std::int64_t>(reps.size()), static_cast<std::int64_t>(order));
    require(mass == expected, "mass " + to_string(mass) + " != " + to_string(expected));
    return "mass " + to_string(mass) + " over " + std::to_string(groupoid->orbits.size()) +
           " orbits";
  });

  log.check("stabilizer_centralizer", [&] {
    if (!groupoid) throw Violation("no orbit data");
    for (const auto& o : groupoid->orbits) {
      const auto units = centralizer_unit_count(o.representative);
      require(units == o.stabilizer, "orbit " + std::to_string(o.rep_index) + ": stabilizer " +
                                         std::to_string(o.stabilizer) + " vs centralizer units " +
                                         std::to_string(units));
    }
    return "stabilizer orders match centralizer unit counts";
  });

  RunResult out;
  out.report = {{"summary", summary_json(cfg, ring, reps.size())},
                {"passed", log.all_passed},
                {"checks", log.checks}};
  out.csv = log.csv;
  out.exit_code = log.all_passed ? kExitOk : kExitViolation;
  out.message = std::string("verify: ") + (log.all_passed ? "all checks passed" : "FAILED");
  return out;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "enumerate") return Command::Enumerate;
  if (name == "lift") return Command::Lift;
  if (name == "cohom") return Command::Cohom;
  if (name == "orbits") return Command::Orbits;
  if (name == "verify") return Command::Verify;
  return std::nullopt;
}

const char* command_name(Command c) noexcept {
  switch (c) {
    case Command::Enumerate: return "enumerate";
    case Command::Lift: return "lift";
    case Command::Cohom: return "cohom";
    case Command::Orbits: return "orbits";
    case Command::Verify: return "verify";
  }
  return "?";
}

std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

RunResult run(const JobConfig& cfg, Command cmd) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(cfg.workers, 1));
#endif
  RunResult failure;
  try {
    if (!cfg.pres) throw ParseError("job has no presentation", 0, 0);
    const CoeffRing ring(cfg.p, cfg.k);
    check_hard_cap(cfg, ring);
    switch (cmd) {
      case Command::Enumerate: return run_enumerate(cfg, ring);
      case Command::Lift: return run_lift(cfg, ring);
      case Command::Cohom: return run_cohom(cfg, ring);
      case Command::Orbits: return run_orbits(cfg, ring);
      case Command::Verify: return run_verify(cfg, ring);
    }
  } catch (const BudgetExceeded& e) {
    failure.exit_code = kExitBudget;
    failure.message = std::string("budget exceeded: ") + e.what() + " (partial count " +
                      std::to_string(e.partial()) + ")";
  } catch (const ParseError& e) {
    failure.exit_code = kExitConfig;
    failure.message = std::string("config error: ") + e.what();
  } catch (const StructuralError& e) {
    failure.exit_code = kExitConfig;
    failure.message = std::string("config error: ") + e.what();
  }
  failure.report = {{"error", failure.message}, {"exitCode", failure.exit_code}};
  return failure;
}

}  // namespace locsys::app

// locsys: batch front end.
//
//   locsys enumerate --config job.toml [--out DIR] [--budget N] [--workers W]
//   locsys lift      --config job.toml --levels K
//   locsys cohom | orbits | verify --config job.toml
//
// Without --out the JSON report goes to stdout. Exit codes: 0 ok, 1 verify
// violation, 2 config error, 3 budget exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "locsys/app.hpp"
#include "locsys/errors.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  int levels = 0;
  std::uint64_t budget = 0;
  int workers = 0;
  bool deterministic = true;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "job file")->required();
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--levels", f.levels, "target level for lift")->check(CLI::PositiveNumber);
  sub->add_option("--budget", f.budget, "search budget")->check(CLI::PositiveNumber);
  sub->add_option("--workers", f.workers, "OpenMP threads")->check(CLI::PositiveNumber);
  sub->add_flag("--deterministic,!--no-deterministic", f.deterministic,
                "sequential orbit closure (default on)");
}

bool write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace locsys::app;

  CLI::App cli{"Finite-level local systems: representation varieties over Z/p^k"};
  cli.require_subcommand(1);
  Flags flags;
  for (const char* name : {"enumerate", "lift", "cohom", "orbits", "verify"}) {
    add_flags(cli.add_subcommand(name), flags);
  }
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const auto cmd = parse_command(cli.get_subcommands().front()->get_name());
  JobConfig cfg;
  try {
    cfg = load_config(flags.config);
  } catch (const locsys::ParseError& e) {
    std::cerr << "locsys: " << flags.config << ": " << e.what() << "\n";
    return kExitConfig;
  }
  if (flags.levels > 0) cfg.levels = flags.levels;
  if (flags.budget > 0) cfg.budget = flags.budget;
  if (flags.workers > 0) cfg.workers = flags.workers;
  // Only an explicit flag overrides the file.
  if (cli.get_subcommands().front()->count("--deterministic") +
          cli.get_subcommands().front()->count("--no-deterministic") >
      0) {
    cfg.deterministic = flags.deterministic;
  }

  const RunResult result = run(cfg, *cmd);
  const std::string json = dump_report(result.report);

  if (flags.out.empty()) {
    std::cout << json;
  } else {
    std::error_code ec;
    const std::filesystem::path dir(flags.out);
    std::filesystem::create_directories(dir, ec);
    const std::string stem = command_name(*cmd);
    if (ec || !write_file(dir / (stem + ".json"), json) ||
        (!result.csv.empty() && !write_file(dir / (stem + ".csv"), result.csv))) {
      std::cerr << "locsys: cannot write to " << flags.out << "\n";
      return kExitConfig;
    }
  }
  std::cerr << "locsys: " << result.message << "\n";
  return result.exit_code;
}

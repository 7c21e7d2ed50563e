// coagtree command line: tree tables, invariant suite, single runs and
// convergence sweeps. Exit codes: 0 ok, 1 check or run failure, 2 bad input.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coagtree/coagtree.hpp"
#include "manifest.hpp"

#ifndef COAGTREE_VERSION
#define COAGTREE_VERSION "dev"
#endif
#ifndef COAGTREE_GOLDEN_DIR
#define COAGTREE_GOLDEN_DIR "data/golden"
#endif

namespace fs = std::filesystem;
using namespace coagtree;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_input = 2;

template <class Writer>
fs::path write_file(const fs::path& dir, const std::string& name, Writer&& w) {
  const auto path = dir / name;
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path.string() + " for writing");
  w(out);
  out.flush();
  if (!out) throw error("write failed for " + path.string());
  return path;
}

ConfigDocument load_with_overrides(const std::string& file, const std::vector<std::string>& sets) {
  auto doc = load_config_document(file);
  for (const auto& s : sets) apply_override(doc, s);
  return doc;
}

int cmd_trees(int max_grade, const fs::path& out) {
  fs::create_directories(out);
  cli::RunManifest manifest("trees", COAGTREE_VERSION, {{"max_grade", max_grade}});
  manifest.add_output(write_file(out, "planar.csv", [&](std::ostream& os) { write_planar_csv(os, max_grade); }));
  manifest.add_output(write_file(out, "nonplanar.csv", [&](std::ostream& os) { write_nonplanar_csv(os, max_grade); }));
  manifest.write(out);
  std::cout << "wrote grades 0.." << max_grade << " to " << out.string() << '\n';
  return exit_ok;
}

int cmd_verify(const fs::path& golden, bool json) {
  const auto results = run_all_checks(golden);
  bool all = true;
  nlohmann::json report = nlohmann::json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    if (json) {
      report.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    } else {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    }
  }
  if (json) std::cout << report.dump(2) << '\n';
  return all ? exit_ok : exit_failure;
}

int cmd_solve(const std::string& config, const std::vector<std::string>& sets, const fs::path& out) {
  const auto doc = load_with_overrides(config, sets);
  const auto cfg = solver_config_from(doc);
  fs::create_directories(out);
  cli::RunManifest manifest("solve", COAGTREE_VERSION, doc.root);
  const auto tr = run(cfg);
  manifest.add_output(write_file(out, "solution.csv", [&](std::ostream& os) { write_csv(os, tr.final_state); }));
  manifest.add_output(write_file(out, "diagnostics.csv", [&](std::ostream& os) { write_trajectory_csv(os, tr); }));
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
    const auto& snap = tr.snapshots[i].second;
    manifest.add_output(write_file(out, name, [&](std::ostream& os) { write_csv(os, snap); }));
  }
  manifest.write(out);
  const auto& first = tr.records.front();
  const auto& last = tr.records.back();
  std::cout << kernel_name(cfg.kernel) << " N=" << cfg.order << " M=" << cfg.steps << " T=" << cfg.horizon
            << ": M0 " << first.m0 << " -> " << last.m0 << ", M1 " << first.m1 << " -> " << last.m1
            << ", transforms " << last.fft_count << '\n';
  if (!tr.m0_increases.empty()) {
    std::cout << "note: M0 grew at " << tr.m0_increases.size() << " step(s), first at step "
              << tr.m0_increases.front() << '\n';
  }
  return exit_ok;
}

int cmd_convergence(const std::string& config, const std::vector<std::string>& sets, const fs::path& out) {
  const auto doc = load_with_overrides(config, sets);
  const auto cfg = sweep_config_from(doc);
  fs::create_directories(out);
  cli::RunManifest manifest("convergence", COAGTREE_VERSION, doc.root);
  const auto result = run_sweep(cfg);
  manifest.add_output(write_file(out, "errors.csv", [&](std::ostream& os) { write_cells_csv(os, result); }));
  manifest.add_output(write_file(out, "slopes.csv", [&](std::ostream& os) { write_slopes_csv(os, result); }));
  manifest.write(out);
  std::cout << "floor " << result.floor << ", reference norm " << result.reference_norm << '\n';
  for (const auto& f : result.fits) {
    std::cout << "N=" << f.order << " slope ";
    if (f.slope) {
      std::cout << *f.slope;
    } else {
      std::cout << "n/a";
    }
    std::cout << " over " << f.steps_used.size() << " point(s)\n";
  }
  bool failed = false;
  for (const auto& c : result.cells) {
    if (!c.ok) {
      std::cout << "cell N=" << c.order << " M=" << c.steps << " failed: " << c.failure << '\n';
      failed = true;
    }
  }
  return failed ? exit_failure : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoluchowski coagulation by binary-tree series"};
  app.set_version_flag("--version", COAGTREE_VERSION);
  app.require_subcommand(1);

  int max_grade = 6;
  std::string out = "out";
  auto* trees = app.add_subcommand("trees", "Write planar and non-planar tree tables");
  trees->add_option("--max-grade", max_grade, "Largest grade")->check(CLI::NonNegativeNumber);
  trees->add_option("--out", out, "Output directory")->required();

  std::string golden = COAGTREE_GOLDEN_DIR;
  bool json = false;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--golden", golden, "Directory with planar.csv and nonplanar.csv");
  verify->add_flag("--json", json, "Machine-readable report");

  std::string config;
  std::vector<std::string> sets;
  auto* solve = app.add_subcommand("solve", "Single run from a config file");
  auto* conv = app.add_subcommand("convergence", "Error sweep over orders and step counts");
  for (auto* sub : {solve, conv}) {
    sub->add_option("--config", config, "TOML or JSON config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--set", sets, "Override a config key, e.g. run.steps=128");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*trees) return cmd_trees(max_grade, out);
    if (*verify) return cmd_verify(golden, json);
    if (*solve) return cmd_solve(config, sets, out);
    if (*conv) return cmd_convergence(config, sets, out);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_input;
  } catch (const resource_limit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_ok;
}

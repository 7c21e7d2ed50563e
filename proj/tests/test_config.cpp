#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "coagtree/config.hpp"

using namespace coagtree;

namespace {

const char* base_toml = R"([grid]
length = 100.0
nodes = 4096   # power of two

[kernel]
type = "power"
lambda = 2.0

[initial]
data = "exp_over_x"

[run]
horizon = 0.5
order = 3
steps = 32
)";

template <class F>
config_error capture(F&& f) {
  try {
    f();
  } catch (const config_error& e) {
    return e;
  }
  ADD_FAILURE() << "expected config_error";
  return config_error("", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST(Toml, ParsesSolverConfig) {
  const auto c = solver_config_from(parse_toml(base_toml));
  EXPECT_EQ(c.grid.size(), 4096u);
  EXPECT_DOUBLE_EQ(c.grid.length(), 100.0);
  EXPECT_DOUBLE_EQ(std::get<kernels::SeparablePower>(c.kernel).lambda, 2.0);
  EXPECT_EQ(c.data, InitialData::exp_over_x);
  EXPECT_EQ(c.order, 3);
  EXPECT_EQ(c.steps, 32);
  EXPECT_DOUBLE_EQ(c.horizon, 0.5);
}

TEST(Toml, ScalarsAndArrays) {
  const auto doc = parse_toml("a = [1, 2, 3]\nb = \"x # y\"\nc = true\nd = -2.5e-1\n[t.u]\ne = 4\n");
  EXPECT_EQ(doc.root["a"], nlohmann::json({1, 2, 3}));
  EXPECT_EQ(doc.root["b"], "x # y");
  EXPECT_EQ(doc.root["c"], true);
  EXPECT_DOUBLE_EQ(doc.root["d"].get<double>(), -0.25);
  EXPECT_EQ(doc.root["t"]["u"]["e"], 4);
  EXPECT_EQ(doc.line_of("t.u.e"), 6u);
}

TEST(Json, ParsesTheSameConfig) {
  const auto doc = parse_json_config(R"({"grid": {"length": 100.0, "nodes": 4096},
    "kernel": {"type": "constant"}, "initial": {"data": "exp"},
    "run": {"horizon": 1.0, "order": 2, "steps": 8}})");
  const auto c = solver_config_from(doc);
  EXPECT_TRUE(std::holds_alternative<kernels::Constant>(c.kernel));
  EXPECT_EQ(c.data, InitialData::exp);
  EXPECT_THROW(parse_json_config("[1, 2]"), config_error);
  EXPECT_THROW(parse_json_config("{"), config_error);
}

TEST(Errors, MissingKernelFieldNamesFieldAndLine) {
  const auto text = replace(base_toml, "lambda = 2.0\n", "");
  const auto e = capture([&] { solver_config_from(parse_toml(text)); });
  EXPECT_EQ(e.field(), "kernel.lambda");
  EXPECT_EQ(e.line(), 5u);
}

TEST(Errors, DuplicateKey) {
  const auto e = capture([] { parse_toml("[run]\norder = 3\norder = 4\n"); });
  EXPECT_EQ(e.field(), "run.order");
  EXPECT_EQ(e.line(), 3u);
}

TEST(Errors, BadValues) {
  EXPECT_EQ(capture([] { parse_toml("a = 1.2.3\n"); }).field(), "a");
  EXPECT_EQ(capture([] { parse_toml("a = [1, 2\n"); }).field(), "a");
  EXPECT_EQ(capture([] { parse_toml("just words\n"); }).line(), 1u);
  const auto e = capture([&] { solver_config_from(parse_toml(replace(base_toml, "order = 3", "order = \"3\""))); });
  EXPECT_EQ(e.field(), "run.order");
  EXPECT_EQ(e.line(), 14u);
  EXPECT_EQ(capture([&] { solver_config_from(parse_toml(replace(base_toml, "4096", "1000"))); }).field(),
            "grid.nodes");
  EXPECT_EQ(capture([&] { solver_config_from(parse_toml(replace(base_toml, "steps = 32", "steps = 0"))); }).field(),
            "run.steps");
}

TEST(Errors, UnknownKernelAndData) {
  EXPECT_EQ(capture([&] { solver_config_from(parse_toml(replace(base_toml, "\"power\"", "\"sum\""))); }).field(),
            "kernel.type");
  EXPECT_EQ(capture([&] { solver_config_from(parse_toml(replace(base_toml, "\"exp_over_x\"", "\"gauss\""))); })
                .field(),
            "initial.data");
}

TEST(Override, ReplacesAndCreatesKeys) {
  auto doc = parse_toml(base_toml);
  apply_override(doc, "run.steps=64");
  apply_override(doc, "kernel.lambda = 1.5");
  apply_override(doc, "run.snapshot_every=8");
  const auto c = solver_config_from(doc);
  EXPECT_EQ(c.steps, 64);
  EXPECT_DOUBLE_EQ(std::get<kernels::SeparablePower>(c.kernel).lambda, 1.5);
  EXPECT_EQ(c.snapshot_every, 8);
  EXPECT_EQ(doc.line_of("run.steps"), 0u);
  EXPECT_THROW(apply_override(doc, "run.steps"), config_error);
  EXPECT_THROW(apply_override(doc, "run..x=1"), config_error);
  EXPECT_THROW(apply_override(doc, "run.steps.x=1"), config_error);
}

TEST(Sweep, ParsesConvergenceSection) {
  std::string text = base_toml;
  text += "\n[convergence]\norders = [1, 2, 3]\nsteps = [8, 16]\nreference = \"exact\"\nworkers = 3\n";
  auto doc = parse_toml(text);
  const auto s = sweep_config_from(doc);
  EXPECT_EQ(s.orders, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(s.steps, (std::vector<int>{8, 16}));
  EXPECT_EQ(s.reference, ReferenceKind::exact);
  EXPECT_EQ(s.workers, 3u);
}

TEST(Sweep, SelfReferenceNeedsOrderAndSteps) {
  std::string text = base_toml;
  text += "\n[convergence]\norders = [1]\nsteps = [8]\nreference = \"self\"\n";
  EXPECT_EQ(capture([&] { sweep_config_from(parse_toml(text)); }).field(), "convergence.reference_order");
  const auto s = sweep_config_from(parse_toml(text + "reference_order = 6\nreference_steps = 256\n"));
  EXPECT_EQ(s.reference, ReferenceKind::self);
  EXPECT_EQ(s.reference_order, 6);
  EXPECT_EQ(s.reference_steps, 256);
  EXPECT_EQ(capture([&] { sweep_config_from(parse_toml(replace(text, "[1]", "[13]"))); }).field(),
            "convergence.orders");
}

TEST(Files, LoadsByExtensionOrContent) {
  const auto dir = std::filesystem::temp_directory_path() / ("coagtree_cfg_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.toml") << base_toml;
  std::ofstream(dir / "b.cfg") << R"({"x": 1})";
  EXPECT_EQ(load_config_document((dir / "a.toml").string()).root["run"]["order"], 3);
  EXPECT_EQ(load_config_document((dir / "b.cfg").string()).root["x"], 1);
  EXPECT_THROW(load_config_document((dir / "missing.toml").string()), config_error);
  std::filesystem::remove_all(dir);
}

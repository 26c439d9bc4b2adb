// Copyright 2026 The viewplan Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "viewplan/config.h"
#include "viewplan/errors.h"
#include "viewplan/io.h"
#include "viewplan/planner.h"
#include "viewplan/scene.h"

namespace viewplan::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Flags {
  std::string config_path;
  std::string scene;
  std::string scenes;
  std::string ply;
  std::optional<int> cameras;
  std::string kernel;
  std::string kernels;
  std::optional<int> n_init;
  std::optional<int> n_iters;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_sigma;
  std::optional<int> realizations;
  std::optional<int> realization;
  std::optional<int> candidates;
  std::string out;
  bool smoke = false;
};

std::vector<std::string> SplitCsv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int ThreadCap() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("VIEWPLAN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

RunConfig BuildConfig(const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw IoError("cannot open config '" + f.config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw DomainError(std::string("malformed config: ") + e.what());
    }
    c = RunConfigFromJson(j);
  }
  if (!f.scene.empty()) c.scene.layout = ParseLayout(f.scene);
  if (!f.scenes.empty()) {
    c.scenes.clear();
    for (const std::string& s : SplitCsv(f.scenes)) c.scenes.push_back(ParseLayout(s));
  }
  if (!f.ply.empty()) c.ply_path = f.ply;
  if (f.cameras) c.cameras = *f.cameras;
  if (!f.kernel.empty()) {
    c.kernel = ParseKernel(f.kernel);
    c.kernels = {c.kernel};
  }
  if (!f.kernels.empty()) {
    c.kernels.clear();
    for (const std::string& k : SplitCsv(f.kernels)) c.kernels.push_back(ParseKernel(k));
  }
  if (f.smoke) ApplySmoke(&c);
  if (f.n_init) c.n_init = *f.n_init;
  if (f.n_iters) c.n_iters = *f.n_iters;
  if (f.seed) c.seed = *f.seed;
  if (f.noise_sigma) c.noise.sigma = *f.noise_sigma;
  if (f.realizations) c.n_realizations = *f.realizations;
  if (f.realization) c.realization = *f.realization;
  if (f.candidates) c.n_candidates = *f.candidates;
  if (!f.out.empty()) c.out_dir = f.out;
  c.threads = ThreadCap();
  return c;
}

fs::path PrepareOutDir(const RunConfig& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void WriteJsonFile(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// The clean scene a plan/baseline run works on: generated, or loaded from PLY
// and treated as a single plant.
struct Workspace {
  std::string name;
  Scene scene;
};

Workspace LoadWorkspace(const RunConfig& c) {
  Workspace w;
  if (!c.ply_path.empty()) {
    w.name = fs::path(c.ply_path).stem().string();
    w.scene.spec = ResolveSceneSpec(c, c.scene.layout);
    w.scene.cloud = ReadPlyFile(c.ply_path);
    w.scene.plants.push_back({0, w.scene.cloud.size(), Point3::Zero(), 0.0, 1.0});
  } else {
    w.scene = GenerateScene(ResolveSceneSpec(c, c.scene.layout));
    w.name = std::string(LayoutName(c.scene.layout));
  }
  return w;
}

json ResolvedJson(RunConfig c, const SceneSpec& scene, const BoConfig& bo) {
  c.scene = scene;
  c.cameras = bo.n_cameras;
  c.space = bo.space;
  return ToJson(c);
}

int GenerateSceneCmd(const RunConfig& c, std::ostream& out) {
  const SceneSpec spec = ResolveSceneSpec(c, c.scene.layout);
  const Scene scene = GenerateScene(spec);
  const NoiseRealization real = SampleRealization(c.noise, scene, c.realization);
  const fs::path dir = PrepareOutDir(c);
  const std::string name(LayoutName(spec.layout));

  WritePlyFile(dir / ("scene_" + name + ".ply"), scene.cloud);
  const std::string noisy_name =
      "scene_" + name + "_noisy_r" + std::to_string(c.realization) + ".ply";
  WritePlyFile(dir / noisy_name, ApplyNoise(scene.cloud, real));

  json sidecar = SceneSidecar(scene, c.noise, real);
  sidecar["files"] = {{"clean", "scene_" + name + ".ply"}, {"noisy", noisy_name}};
  RunConfig resolved = c;
  resolved.scene = spec;
  sidecar["config"] = ToJson(resolved);
  WriteJsonFile(dir / ("scene_" + name + ".json"), sidecar);
  out << "points=" << scene.cloud.size() << " plants=" << scene.plants.size()
      << '\n';
  return kOk;
}

int PlanCmd(const RunConfig& c, std::ostream& out) {
  const Workspace w = LoadWorkspace(c);
  const BoConfig bo = ResolveBoConfig(c, c.scene.layout, w.scene.cloud);
  const NoiseRealization real = SampleRealization(c.noise, w.scene, c.realization);
  const PointCloud noisy = ApplyNoise(w.scene.cloud, real);
  const Objective objective =
      c.resample_noise ? ResampledNoiseObjective(w.scene, c.noise, bo.reward)
                       : FrozenNoiseObjective(noisy, bo.reward);

  RegretTrace trace = RunBo(bo, objective);
  trace.scene = w.name;
  trace.realization = c.realization;

  const fs::path dir = PrepareOutDir(c);
  std::ostringstream csv;
  WriteTraceCsv(csv, trace);
  WriteTextFile(dir / ("trace_" + w.name + ".csv"), csv.str());

  const TraceRecord& best = trace.BestRecord();
  json result = {
      {"scene", w.name},
      {"realization", c.realization},
      {"kernel", KernelName(bo.kernel)},
      {"best_value", best.observed},
      {"best_iteration", best.iteration},
      {"final_simple_regret", trace.FinalRegret()},
      {"observations", trace.records.size()},
      {"incomplete", trace.incomplete},
      {"placement", ToJson(Decode(best.z, bo.space))},
      {"config", ResolvedJson(c, w.scene.spec, bo)},
  };
  if (trace.incomplete) result["error"] = trace.error;
  if (trace.fitted_kernel) {
    result["fitted_kernel"] = ToJson(*trace.fitted_kernel);
    result["noise_variance"] = trace.noise_variance;
  }
  WriteJsonFile(dir / ("placement_" + w.name + ".json"), result);

  out << "final_simple_regret=" << FormatDouble(trace.FinalRegret())
      << " best_reward=" << FormatDouble(best.observed) << '\n';
  return trace.incomplete ? kNumerical : kOk;
}

int BaselineCmd(const RunConfig& c, std::ostream& out) {
  const Workspace w = LoadWorkspace(c);
  const BoConfig bo = ResolveBoConfig(c, c.scene.layout, w.scene.cloud);
  const NoiseRealization real = SampleRealization(c.noise, w.scene, c.realization);
  const PointCloud noisy = ApplyNoise(w.scene.cloud, real);
  const BaselineResult result =
      CircularBaseline(bo, noisy, c.n_candidates, DeriveSeed(c.seed, 0xBA5E));

  json j = ToJson(result, bo.optimum);
  j["scene"] = w.name;
  j["realization"] = c.realization;
  j["config"] = ResolvedJson(c, w.scene.spec, bo);
  const fs::path dir = PrepareOutDir(c);
  WriteJsonFile(dir / ("baseline_" + w.name + ".json"), j);
  out << "baseline_simple_regret="
      << FormatDouble(SimpleRegret(result.best_value(), bo.optimum))
      << " best_reward=" << FormatDouble(result.best_value()) << '\n';
  return kOk;
}

int ExperimentCmd(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<Layout> layouts = c.scenes;
  if (layouts.empty()) layouts.push_back(c.scene.layout);
  const fs::path dir = PrepareOutDir(c);

  std::size_t cells = 0;
  std::size_t failed = 0;
  for (Layout layout : layouts) {
    const ExperimentConfig ec = ResolveExperimentConfig(c, layout);
    const ExperimentReport report = RunExperiment(ec);
    const std::string name(LayoutName(layout));

    std::ostringstream csv;
    WriteExperimentCsv(csv, report);
    WriteTextFile(dir / ("report_" + name + ".csv"), csv.str());

    json summary = ExperimentSummary(report);
    summary["config"] = ResolvedJson(c, ec.scene, ec.bo);
    WriteJsonFile(dir / ("summary_" + name + ".json"), summary);

    for (const ExperimentCell& cell : report.cells) {
      ++cells;
      if (!cell.ok()) {
        ++failed;
        err << name << '/' << cell.method << '/' << cell.realization
            << ": " << cell.error << '\n';
      }
    }
    const std::vector<double> curve =
        report.MeanRegretCurve(std::string(KernelName(ec.bo.kernel)));
    out << name << ": mean_baseline_simple_regret="
        << FormatDouble(report.MeanBaselineRegret());
    for (KernelFamily k : ec.kernels) {
      const std::vector<double> m = report.MeanRegretCurve(std::string(KernelName(k)));
      if (!m.empty()) out << ' ' << KernelName(k) << '=' << FormatDouble(m.back());
    }
    out << '\n';
  }
  return cells > 0 && failed == cells ? kNumerical : kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Camera placement by Bayesian optimization over a noisy point cloud",
               "viewplan"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON run configuration");
    sub->add_option("--scene", f.scene, "Scene layout: single, row3 or grid9");
    sub->add_option("--cameras", f.cameras, "Number of cameras N");
    sub->add_option("--seed", f.seed, "Master seed");
    sub->add_option("--noise-sigma", f.noise_sigma,
                    "Standard deviation of the per-plant motion draw (m)");
    sub->add_option("--out", f.out, "Output directory");
  };

  CLI::App* gen = app.add_subcommand("generate-scene", "Write a procedural scene as PLY + JSON");
  add_common(gen);
  gen->add_option("--realization", f.realization, "Noise realization id to export");

  auto add_bo = [&f](CLI::App* sub) {
    sub->add_option("--ply", f.ply, "Load the clean point cloud from an ASCII PLY");
    sub->add_option("--kernel", f.kernel, "rbf, ard, matern15 or matern25");
    sub->add_option("--init", f.n_init, "Initial design size");
    sub->add_option("--iters", f.n_iters, "BO iterations");
    sub->add_option("--realization", f.realization, "Noise realization id");
    sub->add_option("--candidates", f.candidates, "Circular baseline candidates");
    sub->add_flag("--smoke", f.smoke, "10 initial points, 30 iterations, 1 realization");
  };

  CLI::App* plan = app.add_subcommand("plan", "Optimize a placement with GP-EI");
  add_common(plan);
  add_bo(plan);

  CLI::App* base = app.add_subcommand("baseline", "Best-of-K circular formation");
  add_common(base);
  add_bo(base);

  CLI::App* exp = app.add_subcommand("experiment", "Regret comparison across kernels and realizations");
  add_common(exp);
  add_bo(exp);
  exp->add_option("--scenes", f.scenes, "Comma-separated layouts");
  exp->add_option("--kernels", f.kernels, "Comma-separated kernel menu");
  exp->add_option("--realizations", f.realizations, "Noise realizations per scene");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    const RunConfig config = BuildConfig(f);
    if (gen->parsed()) return GenerateSceneCmd(config, out);
    if (plan->parsed()) return PlanCmd(config, out);
    if (base->parsed()) return BaselineCmd(config, out);
    if (exp->parsed()) return ExperimentCmd(config, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << " (jitter " << e.jitter() << ")\n";
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace viewplan::cli

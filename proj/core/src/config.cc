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

#include "viewplan/config.h"

#include "viewplan/errors.h"
#include "viewplan/io.h"

namespace viewplan {

using nlohmann::json;

int DefaultCameraCount(Layout layout) {
  return layout == Layout::kSingle ? 4 : 6;
}

int DefaultPointsPerPlant(Layout layout) {
  switch (layout) {
    case Layout::kSingle: return 500;
    case Layout::kRow3: return 400;
    case Layout::kGrid9: return 200;
  }
  return 200;
}

void ApplySmoke(RunConfig* config) {
  config->n_init = 10;
  config->n_iters = 30;
  config->n_realizations = 1;
}

json ToJson(const RunConfig& c) {
  json scenes = json::array();
  for (Layout l : c.scenes) scenes.push_back(LayoutName(l));
  json kernels = json::array();
  for (KernelFamily k : c.kernels) kernels.push_back(KernelName(k));
  json j = {{"scene", ToJson(c.scene)},
            {"scenes", scenes},
            {"ply_path", c.ply_path},
            {"noise", ToJson(c.noise)},
            {"reward", ToJson(c.reward)},
            {"cameras", c.cameras},
            {"kernel", KernelName(c.kernel)},
            {"kernels", kernels},
            {"n_init", c.n_init},
            {"n_iters", c.n_iters},
            {"seed", c.seed},
            {"realization", c.realization},
            {"n_realizations", c.n_realizations},
            {"n_candidates", c.n_candidates},
            {"box_margin", c.box_margin},
            {"box_top_margin", c.box_top_margin},
            {"ei", {{"budget", c.ei.budget},
                    {"num_refine", c.ei.num_refine},
                    {"initial_step", c.ei.initial_step},
                    {"min_step", c.ei.min_step},
                    {"max_evals_per_start", c.ei.max_evals_per_start}}},
            {"refit_every", c.refit_every},
            {"resample_noise", c.resample_noise},
            {"optimum", c.optimum},
            {"out_dir", c.out_dir},
            {"threads", c.threads}};
  j["search_space"] = c.space ? ToJson(*c.space) : json(nullptr);
  return j;
}

RunConfig RunConfigFromJson(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  if (j.contains("scene")) c.scene = SceneSpecFromJson(j["scene"]);
  if (j.contains("scenes")) {
    for (const json& s : j["scenes"]) c.scenes.push_back(ParseLayout(s.get<std::string>()));
  }
  c.ply_path = j.value("ply_path", c.ply_path);
  if (j.contains("noise")) c.noise = NoiseModelFromJson(j["noise"]);
  if (j.contains("reward")) c.reward = RewardParamsFromJson(j["reward"]);
  c.cameras = j.value("cameras", c.cameras);
  if (j.contains("kernel")) c.kernel = ParseKernel(j["kernel"].get<std::string>());
  if (j.contains("kernels")) {
    c.kernels.clear();
    for (const json& k : j["kernels"]) c.kernels.push_back(ParseKernel(k.get<std::string>()));
  }
  c.n_init = j.value("n_init", c.n_init);
  c.n_iters = j.value("n_iters", c.n_iters);
  c.seed = j.value("seed", c.seed);
  c.realization = j.value("realization", c.realization);
  c.n_realizations = j.value("n_realizations", c.n_realizations);
  c.n_candidates = j.value("n_candidates", c.n_candidates);
  c.box_margin = j.value("box_margin", c.box_margin);
  c.box_top_margin = j.value("box_top_margin", c.box_top_margin);
  if (j.contains("search_space") && !j["search_space"].is_null()) {
    c.space = SearchSpaceFromJson(j["search_space"]);
  }
  if (j.contains("ei")) {
    const json& e = j["ei"];
    c.ei.budget = e.value("budget", c.ei.budget);
    c.ei.num_refine = e.value("num_refine", c.ei.num_refine);
    c.ei.initial_step = e.value("initial_step", c.ei.initial_step);
    c.ei.min_step = e.value("min_step", c.ei.min_step);
    c.ei.max_evals_per_start = e.value("max_evals_per_start", c.ei.max_evals_per_start);
  }
  c.refit_every = j.value("refit_every", c.refit_every);
  c.resample_noise = j.value("resample_noise", c.resample_noise);
  c.optimum = j.value("optimum", c.optimum);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.threads = j.value("threads", c.threads);
  return c;
}

SceneSpec ResolveSceneSpec(const RunConfig& config, Layout layout) {
  SceneSpec s = config.scene;
  s.layout = layout;
  if (s.points_per_plant == 0) s.points_per_plant = DefaultPointsPerPlant(layout);
  s.Validate();
  return s;
}

BoConfig ResolveBoConfig(const RunConfig& config, Layout layout,
                         const PointCloud& clean_cloud) {
  BoConfig bo;
  bo.n_cameras = config.cameras > 0 ? config.cameras : DefaultCameraCount(layout);
  bo.n_init = config.n_init;
  bo.n_iters = config.n_iters;
  bo.kernel = config.kernel;
  bo.reward = config.reward;
  bo.space = config.space ? *config.space
                          : DefaultSearchSpace(clean_cloud, config.box_margin,
                                               config.box_top_margin);
  bo.seed = config.seed;
  bo.ei = config.ei;
  bo.refit_every = config.refit_every;
  bo.optimum = config.optimum;
  bo.Validate();
  return bo;
}

ExperimentConfig ResolveExperimentConfig(const RunConfig& config, Layout layout) {
  ExperimentConfig e;
  e.scene = ResolveSceneSpec(config, layout);
  e.noise = config.noise;
  e.bo = ResolveBoConfig(config, layout, GenerateScene(e.scene).cloud);
  e.kernels = config.kernels;
  e.n_realizations = config.n_realizations;
  e.n_candidates = config.n_candidates;
  e.master_seed = config.seed;
  e.resample_noise = config.resample_noise;
  e.threads = config.threads;
  e.Validate();
  return e;
}

}  // namespace viewplan

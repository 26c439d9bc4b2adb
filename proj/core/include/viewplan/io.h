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

#ifndef VIEWPLAN_IO_H_
#define VIEWPLAN_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "viewplan/geometry.h"
#include "viewplan/gp.h"
#include "viewplan/planner.h"
#include "viewplan/reward.h"
#include "viewplan/scene.h"

namespace viewplan {

// Shortest round-trippable decimal form of a double.
std::string FormatDouble(double v);

// ASCII PLY with a single vertex element of double x, y, z.
void WritePly(std::ostream& out, const PointCloud& cloud);
void WritePlyFile(const std::filesystem::path& path, const PointCloud& cloud);

// Reads an ASCII PLY vertex element. Extra vertex properties and other
// elements are skipped; binary formats raise IoError.
PointCloud ReadPly(std::istream& in);
PointCloud ReadPlyFile(const std::filesystem::path& path);

nlohmann::json ToJson(const SceneSpec& spec);
SceneSpec SceneSpecFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const NoiseModel& model);
NoiseModel NoiseModelFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const SearchSpace& space);
SearchSpace SearchSpaceFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const RewardParams& params);
RewardParams RewardParamsFromJson(const nlohmann::json& j);

// Per-plant index ranges, seeds and (optionally) the noise that was applied.
nlohmann::json SceneSidecar(const Scene& scene,
                            const std::optional<NoiseModel>& noise = std::nullopt,
                            const std::optional<NoiseRealization>& realization =
                                std::nullopt);

// Positions and viewing directions in metres.
nlohmann::json ToJson(const Placement& placement);
Placement PlacementFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const KernelSpec& spec);
KernelSpec KernelSpecFromJson(const nlohmann::json& j);
// Hyperparameters, output transform and training data.
nlohmann::json ToJson(const GpModel& model);
GpModel GpModelFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const BaselineResult& result, double optimum);

// Column order shared by every regret CSV.
inline constexpr const char* kReportCsvHeader =
    "scene,kernel,realization,iteration,observed,running_best,simple_regret";

void WriteTraceCsv(std::ostream& out, const RegretTrace& trace,
                   bool header = true);

// Per-realization rows for every cell (baseline rows index the circular
// candidates) followed by realization "mean" rows: the mean SR curve of each
// kernel and the mean baseline level repeated over the BO horizon.
void WriteExperimentCsv(std::ostream& out, const ExperimentReport& report);

// Final SR per cell, baseline values, seeds and the resolved config.
nlohmann::json ExperimentSummary(const ExperimentReport& report);

}  // namespace viewplan

#endif  // VIEWPLAN_IO_H_

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

#include "viewplan/io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "viewplan/errors.h"

namespace viewplan {
namespace {

using nlohmann::json;

json VecToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd VecFromJson(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json Point3ToJson(const Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

Point3 Point3FromJson(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw DomainError("expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void WriteRow(std::ostream& out, const std::string& scene,
              const std::string& method, const std::string& realization,
              int iteration, double observed, double best, double regret) {
  out << scene << ',' << method << ',' << realization << ',' << iteration << ','
      << FormatDouble(observed) << ',' << FormatDouble(best) << ','
      << FormatDouble(regret) << '\n';
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void WritePly(std::ostream& out, const PointCloud& cloud) {
  out << "ply\n"
      << "format ascii 1.0\n"
      << "element vertex " << cloud.size() << '\n'
      << "property double x\n"
      << "property double y\n"
      << "property double z\n"
      << "end_header\n";
  for (const Point3& p : cloud) {
    out << FormatDouble(p.x()) << ' ' << FormatDouble(p.y()) << ' '
        << FormatDouble(p.z()) << '\n';
  }
}

void WritePlyFile(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out = OpenForWrite(path);
  WritePly(out, cloud);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

PointCloud ReadPly(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    throw IoError("missing 'ply' magic");
  }

  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> props;  // scalar property names; "list" marks lists
  };
  std::vector<Element> elements;
  bool ascii = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt != "ascii") throw IoError("only ASCII PLY is supported, got " + fmt);
      ascii = true;
    } else if (key == "element") {
      Element e;
      ls >> e.name >> e.count;
      if (!ls) throw IoError("malformed element line: " + line);
      elements.push_back(e);
    } else if (key == "property") {
      if (elements.empty()) throw IoError("property before any element");
      std::string type;
      ls >> type;
      if (type == "list") {
        elements.back().props.push_back("list");
      } else {
        std::string name;
        ls >> name;
        elements.back().props.push_back(name);
      }
    } else if (key == "end_header") {
      break;
    }
  }
  if (!ascii) throw IoError("PLY header has no format line");

  std::vector<Point3> points;
  bool found = false;
  for (const Element& e : elements) {
    const bool is_vertex = e.name == "vertex";
    int ix = -1, iy = -1, iz = -1;
    for (std::size_t k = 0; k < e.props.size(); ++k) {
      if (e.props[k] == "x") ix = static_cast<int>(k);
      if (e.props[k] == "y") iy = static_cast<int>(k);
      if (e.props[k] == "z") iz = static_cast<int>(k);
    }
    if (is_vertex && (ix < 0 || iy < 0 || iz < 0)) {
      throw IoError("vertex element lacks x/y/z properties");
    }
    for (std::size_t row = 0; row < e.count; ++row) {
      if (!std::getline(in, line)) throw IoError("PLY body ended early");
      if (!is_vertex) continue;
      std::istringstream ls(line);
      std::vector<double> vals;
      std::string tok;
      while (ls >> tok) {
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc()) throw IoError("bad number '" + tok + "'");
        vals.push_back(v);
      }
      const auto need = static_cast<std::size_t>(std::max({ix, iy, iz})) + 1;
      if (vals.size() < need) throw IoError("short vertex row: " + line);
      points.emplace_back(vals[ix], vals[iy], vals[iz]);
    }
    found = found || is_vertex;
  }
  if (!found) throw IoError("PLY has no vertex element");
  try {
    return PointCloud(std::move(points));
  } catch (const DomainError& e) {
    throw IoError(e.what());
  }
}

PointCloud ReadPlyFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return ReadPly(in);
}

json ToJson(const SceneSpec& spec) {
  return {{"layout", LayoutName(spec.layout)},
          {"plant_spacing", spec.plant_spacing},
          {"points_per_plant", spec.points_per_plant},
          {"base_height", spec.base_height},
          {"rng_seed", spec.rng_seed}};
}

SceneSpec SceneSpecFromJson(const json& j) {
  SceneSpec s;
  s.layout = ParseLayout(j.value("layout", std::string(LayoutName(s.layout))));
  s.plant_spacing = j.value("plant_spacing", s.plant_spacing);
  s.points_per_plant = j.value("points_per_plant", s.points_per_plant);
  s.base_height = j.value("base_height", s.base_height);
  s.rng_seed = j.value("rng_seed", s.rng_seed);
  return s;
}

json ToJson(const NoiseModel& m) {
  return {{"kind", "motion"},
          {"sigma", m.sigma},
          {"direction", Point3ToJson(m.direction)},
          {"rng_seed", m.rng_seed},
          {"shared_draw", m.shared_draw}};
}

NoiseModel NoiseModelFromJson(const json& j) {
  NoiseModel m;
  if (j.value("kind", std::string("motion")) != "motion") {
    throw DomainError("only motion noise is implemented");
  }
  m.sigma = j.value("sigma", m.sigma);
  if (j.contains("direction")) m.direction = Point3FromJson(j["direction"]).normalized();
  m.rng_seed = j.value("rng_seed", m.rng_seed);
  m.shared_draw = j.value("shared_draw", m.shared_draw);
  return m;
}

json ToJson(const SearchSpace& s) {
  return {{"lower", Point3ToJson(s.lower)}, {"upper", Point3ToJson(s.upper)}};
}

SearchSpace SearchSpaceFromJson(const json& j) {
  SearchSpace s;
  s.lower = Point3FromJson(j.at("lower"));
  s.upper = Point3FromJson(j.at("upper"));
  s.Validate();
  return s;
}

json ToJson(const RewardParams& p) {
  return {{"fov", p.fov}, {"theta_match", p.theta_match}};
}

RewardParams RewardParamsFromJson(const json& j) {
  RewardParams p;
  p.fov = j.value("fov", p.fov);
  p.theta_match = j.value("theta_match", p.theta_match);
  p.Validate();
  return p;
}

json SceneSidecar(const Scene& scene, const std::optional<NoiseModel>& noise,
                  const std::optional<NoiseRealization>& realization) {
  json plants = json::array();
  for (const PlantRange& p : scene.plants) {
    plants.push_back({{"begin", p.begin},
                      {"end", p.end},
                      {"anchor", Point3ToJson(p.anchor)},
                      {"rotation", p.rotation},
                      {"scale", p.scale}});
  }
  json j = {{"scene", ToJson(scene.spec)},
            {"point_count", scene.cloud.size()},
            {"plants", plants}};
  if (noise) j["noise"] = ToJson(*noise);
  if (realization) {
    j["realization"] = {{"id", realization->realization_id},
                        {"plant_draws", realization->draws}};
  }
  return j;
}

json ToJson(const Placement& placement) {
  json cams = json::array();
  for (const CameraPose& c : placement) {
    cams.push_back({{"position", Point3ToJson(c.position())},
                    {"orientation", Point3ToJson(c.orientation())}});
  }
  return {{"cameras", cams}};
}

Placement PlacementFromJson(const json& j) {
  std::vector<CameraPose> cams;
  for (const json& c : j.at("cameras")) {
    cams.emplace_back(Point3FromJson(c.at("position")),
                      Point3FromJson(c.at("orientation")));
  }
  return Placement(std::move(cams));
}

json ToJson(const KernelSpec& spec) {
  return {{"family", KernelName(spec.family)},
          {"output_variance", spec.output_variance},
          {"lengthscales", VecToJson(spec.lengthscales)}};
}

KernelSpec KernelSpecFromJson(const json& j) {
  KernelSpec s;
  s.family = ParseKernel(j.at("family").get<std::string>());
  s.output_variance = j.at("output_variance").get<double>();
  s.lengthscales = VecFromJson(j.at("lengthscales"));
  s.Validate();
  return s;
}

json ToJson(const GpModel& model) {
  json inputs = json::array();
  for (Eigen::Index i = 0; i < model.size(); ++i) {
    inputs.push_back(VecToJson(model.inputs().row(i).transpose()));
  }
  return {{"kernel", ToJson(model.kernel())},
          {"noise_variance", model.noise_variance()},
          {"output_shift", model.transform().shift},
          {"output_scale", model.transform().scale},
          {"jitter", model.jitter()},
          {"inputs", inputs},
          {"outputs", VecToJson(model.outputs())}};
}

GpModel GpModelFromJson(const json& j) {
  const json& rows = j.at("inputs");
  const Eigen::VectorXd outputs = VecFromJson(j.at("outputs"));
  if (rows.empty()) throw DomainError("GP model JSON has no training inputs");
  const auto dim = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd inputs(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::VectorXd r = VecFromJson(rows[i]);
    if (r.size() != dim) throw DomainError("ragged GP training inputs");
    inputs.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  OutputTransform t{j.at("output_shift").get<double>(),
                    j.at("output_scale").get<double>()};
  return GpModel(KernelSpecFromJson(j.at("kernel")),
                 j.at("noise_variance").get<double>(), std::move(inputs),
                 outputs, t);
}

json ToJson(const BaselineResult& result, double optimum) {
  json cands = json::array();
  for (const CircularCandidate& c : result.candidates) {
    cands.push_back({{"radius", c.radius}, {"height", c.height}, {"value", c.value}});
  }
  return {{"best_index", result.best_index},
          {"best_value", result.best_value()},
          {"best_simple_regret", SimpleRegret(result.best_value(), optimum)},
          {"best_placement", ToJson(result.best().placement)},
          {"values", result.values()},
          {"candidates", cands}};
}

void WriteTraceCsv(std::ostream& out, const RegretTrace& trace, bool header) {
  if (header) out << kReportCsvHeader << '\n';
  const std::string kernel(KernelName(trace.kernel));
  const std::string realization = std::to_string(trace.realization);
  for (const TraceRecord& r : trace.records) {
    WriteRow(out, trace.scene, kernel, realization, r.iteration, r.observed,
             r.running_best, r.simple_regret);
  }
}

void WriteExperimentCsv(std::ostream& out, const ExperimentReport& report) {
  const std::string scene(LayoutName(report.config.scene.layout));
  const double optimum = report.config.bo.optimum;
  out << kReportCsvHeader << '\n';
  for (const ExperimentCell& cell : report.cells) {
    const std::string realization = std::to_string(cell.realization);
    if (cell.baseline) {
      double best = -std::numeric_limits<double>::infinity();
      int i = 0;
      for (const CircularCandidate& c : cell.baseline->candidates) {
        best = std::max(best, c.value);
        WriteRow(out, scene, cell.method, realization, ++i, c.value, best,
                 SimpleRegret(best, optimum));
      }
    } else if (cell.trace) {
      RegretTrace t = *cell.trace;
      t.scene = scene;
      WriteTraceCsv(out, t, false);
    }
  }

  const int horizon = report.config.bo.n_init + report.config.bo.n_iters;
  for (KernelFamily k : report.config.kernels) {
    const std::string method(KernelName(k));
    std::vector<double> observed(static_cast<std::size_t>(horizon), 0.0);
    std::vector<double> best(static_cast<std::size_t>(horizon), 0.0);
    std::vector<double> regret(static_cast<std::size_t>(horizon), 0.0);
    std::vector<int> count(static_cast<std::size_t>(horizon), 0);
    for (const ExperimentCell& cell : report.cells) {
      if (cell.method != method || !cell.ok() || !cell.trace) continue;
      for (const TraceRecord& r : cell.trace->records) {
        const auto i = static_cast<std::size_t>(r.iteration - 1);
        if (i >= observed.size()) continue;
        observed[i] += r.observed;
        best[i] += r.running_best;
        regret[i] += r.simple_regret;
        ++count[i];
      }
    }
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (count[i] == 0) continue;
      WriteRow(out, scene, method, "mean", static_cast<int>(i) + 1,
               observed[i] / count[i], best[i] / count[i], regret[i] / count[i]);
    }
  }

  double base_best = 0.0;
  int n = 0;
  for (const ExperimentCell& cell : report.cells) {
    if (!cell.baseline || !cell.ok()) continue;
    base_best += cell.baseline->best_value();
    ++n;
  }
  if (n > 0) {
    base_best /= n;
    for (int i = 1; i <= horizon; ++i) {
      WriteRow(out, scene, kBaselineMethod, "mean", i, base_best, base_best,
               SimpleRegret(base_best, optimum));
    }
  }
}

json ExperimentSummary(const ExperimentReport& report) {
  const ExperimentConfig& c = report.config;
  json cells = json::array();
  for (const ExperimentCell& cell : report.cells) {
    json jc = {{"method", cell.method}, {"realization", cell.realization},
               {"ok", cell.ok()}};
    if (!cell.ok()) jc["error"] = cell.error;
    if (cell.baseline) {
      jc["final_simple_regret"] = cell.FinalRegret(c.bo.optimum);
      jc["best_value"] = cell.baseline->best_value();
      jc["baseline_values"] = cell.baseline->values();
    } else if (cell.trace && !cell.trace->records.empty()) {
      jc["final_simple_regret"] = cell.trace->FinalRegret();
      jc["best_value"] = cell.trace->BestValue();
      jc["seed"] = cell.trace->seed;
      jc["observations"] = cell.trace->records.size();
      jc["incomplete"] = cell.trace->incomplete;
      if (cell.trace->fitted_kernel) {
        jc["fitted_kernel"] = ToJson(*cell.trace->fitted_kernel);
        jc["noise_variance"] = cell.trace->noise_variance;
      }
    }
    cells.push_back(std::move(jc));
  }
  json kernels = json::array();
  for (KernelFamily k : c.kernels) kernels.push_back(KernelName(k));
  return {{"scene", ToJson(c.scene)},
          {"noise", ToJson(c.noise)},
          {"reward", ToJson(c.bo.reward)},
          {"search_space", ToJson(c.bo.space)},
          {"n_cameras", c.bo.n_cameras},
          {"n_init", c.bo.n_init},
          {"n_iters", c.bo.n_iters},
          {"kernels", kernels},
          {"n_realizations", c.n_realizations},
          {"n_candidates", c.n_candidates},
          {"master_seed", c.master_seed},
          {"resample_noise", c.resample_noise},
          {"optimum", c.bo.optimum},
          {"mean_baseline_simple_regret", report.MeanBaselineRegret()},
          {"cells", cells}};
}

}  // namespace viewplan

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

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "viewplan/errors.h"
#include "viewplan/planner.h"

namespace viewplan {
namespace {

using nlohmann::json;

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.0), "0");
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(-2.5), "-2.5");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

TEST(PlyTest, HeaderAndLosslessRoundTrip) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Point3> pts;
  for (int i = 0; i < 200; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  pts.emplace_back(std::numeric_limits<double>::min(), 1e300, -0.0);
  const PointCloud cloud(pts);

  std::stringstream ss;
  WritePly(ss, cloud);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("ply\nformat ascii 1.0\nelement vertex 201\n", 0), 0u);
  EXPECT_NE(text.find("property double x\nproperty double y\nproperty double z\n"),
            std::string::npos);
  const PointCloud back = ReadPly(ss);
  ASSERT_EQ(back.size(), cloud.size());
  for (std::size_t k = 0; k < back.size(); ++k) ASSERT_EQ(back[k], cloud[k]);
}

TEST(PlyTest, ReadsForeignLayout) {
  std::istringstream in(
      "ply\r\nformat ascii 1.0\ncomment made elsewhere\n"
      "element vertex 2\nproperty float z\nproperty float x\nproperty uchar red\n"
      "property float y\nelement face 1\nproperty list uchar int vertex_indices\n"
      "end_header\n3 1 255 2\n6 4 0 5\n3 0 1 1\n");
  const PointCloud cloud = ReadPly(in);
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud[0], Point3(1, 2, 3));
  EXPECT_EQ(cloud[1], Point3(4, 5, 6));
}

TEST(PlyTest, MalformedInputIsIoError) {
  const char* bad[] = {
      "",
      "not a ply\n",
      "ply\nformat binary_little_endian 1.0\nelement vertex 1\nproperty float x\n"
      "property float y\nproperty float z\nend_header\n",
      "ply\nformat ascii 1.0\nelement vertex 2\nproperty double x\nproperty double y\n"
      "property double z\nend_header\n1 2 3\n",
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty double x\nproperty double y\n"
      "end_header\n1 2\n",
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty double x\nproperty double y\n"
      "property double z\nend_header\n1 two 3\n",
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty double x\nproperty double y\n"
      "property double z\nend_header\n1 2\n",
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(ReadPly(in), IoError) << text;
  }
  EXPECT_THROW(ReadPlyFile("/nonexistent/dir/cloud.ply"), IoError);
  EXPECT_THROW(WritePlyFile("/nonexistent/dir/cloud.ply", PointCloud()), IoError);
}

TEST(JsonTest, ConfigTypesRoundTrip) {
  SceneSpec spec{Layout::kGrid9, 1.25, 123, 0.8, 99};
  const SceneSpec s2 = SceneSpecFromJson(ToJson(spec));
  EXPECT_EQ(s2.layout, spec.layout);
  EXPECT_EQ(s2.plant_spacing, 1.25);
  EXPECT_EQ(s2.points_per_plant, 123);
  EXPECT_EQ(s2.base_height, 0.8);
  EXPECT_EQ(s2.rng_seed, 99u);

  NoiseModel noise;
  noise.sigma = 0.3;
  noise.direction = Vector3(0, 1, 0);
  noise.shared_draw = true;
  const NoiseModel n2 = NoiseModelFromJson(ToJson(noise));
  EXPECT_EQ(n2.sigma, 0.3);
  EXPECT_EQ(n2.direction, noise.direction);
  EXPECT_TRUE(n2.shared_draw);

  SearchSpace box;
  box.lower = Point3(-1, -2, 0);
  box.upper = Point3(3, 4, 5);
  const SearchSpace b2 = SearchSpaceFromJson(ToJson(box));
  EXPECT_EQ(b2.lower, box.lower);
  EXPECT_EQ(b2.upper, box.upper);

  RewardParams rp;
  rp.fov = 1.0;
  EXPECT_EQ(RewardParamsFromJson(ToJson(rp)).fov, 1.0);

  EXPECT_THROW(SearchSpaceFromJson(json{{"lower", {0, 0}}, {"upper", {1, 1, 1}}}),
               DomainError);
}

TEST(JsonTest, PlacementAndModelRoundTrip) {
  const Placement p({CameraPose(Point3(1, 2, 3), Vector3(0, 0, -1)),
                     CameraPose(Point3(0.1, 0.2, 0.3), Vector3(1, 1, 0))});
  const Placement p2 = PlacementFromJson(ToJson(p));
  ASSERT_EQ(p2.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(p2[i].position(), p[i].position());
    EXPECT_NEAR((p2[i].orientation() - p[i].orientation()).norm(), 0.0, 1e-15);
  }

  Eigen::MatrixXd x(3, 2);
  x << 0.1, 0.2, 0.5, 0.5, 0.9, 0.3;
  const Eigen::Vector3d y(0.2, 0.8, 0.1);
  KernelSpec k;
  k.family = KernelFamily::kArdRbf;
  k.lengthscales = Eigen::Vector2d(0.3, 0.7);
  const GpModel gp(k, 1e-3, x, y, OutputTransform::Standardize(y));
  const GpModel gp2 = GpModelFromJson(ToJson(gp));
  const Eigen::Vector2d z(0.4, 0.6);
  EXPECT_EQ(gp2.Predict(z).mean, gp.Predict(z).mean);
  EXPECT_EQ(gp2.Predict(z).variance, gp.Predict(z).variance);
  EXPECT_EQ(gp2.kernel().lengthscales, k.lengthscales);
}

TEST(CsvTest, TraceRowsFollowSchema) {
  RegretTrace trace;
  trace.scene = "single";
  trace.kernel = KernelFamily::kMatern25;
  trace.realization = 2;
  for (int i = 0; i < 3; ++i) {
    TraceRecord r;
    r.iteration = i + 1;
    r.observed = 0.1 * (i + 1);
    r.running_best = r.observed;
    r.simple_regret = 1.0 - r.observed;
    trace.records.push_back(r);
  }
  std::ostringstream out;
  WriteTraceCsv(out, trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kReportCsvHeader);
  std::getline(in, line);
  EXPECT_EQ(line, "single,matern25,2,1,0.1,0.1,0.9");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

}  // namespace
}  // namespace viewplan

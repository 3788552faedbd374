// Copyright 2026 The qamut Authors
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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qamut/trajectory.hpp"
#include "support.hpp"

namespace qamut {
namespace {

using testing::pedal_spec;

TEST(SignalSpec, CountsSamplesInclusiveOfBothEnds) {
  const SignalSpec s = pedal_spec();
  EXPECT_EQ(s.sample_count(), 1001u);
  EXPECT_DOUBLE_EQ(s.max_step(), 0.005);
  EXPECT_DOUBLE_EQ(s.range(), 1.0);
  EXPECT_DOUBLE_EQ(s.time_at(250), 2.5);
}

TEST(SignalSpec, RejectsInvalidFields) {
  SignalSpec s = pedal_spec();
  s.r_max = s.r_min;
  EXPECT_THROW(s.validate(), SpecificationError);
  s = pedal_spec();
  s.sample_period = 0.0;
  EXPECT_THROW(s.validate(), SpecificationError);
  s = pedal_spec();
  s.max_rate = -1.0;
  EXPECT_THROW(s.validate(), SpecificationError);
  s = pedal_spec();
  s.duration = 10.005;
  EXPECT_THROW(s.validate(), SpecificationError);
  EXPECT_NO_THROW(pedal_spec().validate());
}

TEST(FindViolation, ReportsBoundAndRateBreaches) {
  const SignalSpec s = pedal_spec();
  Trajectory t = testing::constant_case(s, 0.5).input;
  EXPECT_TRUE(is_valid(t));

  t.values[10] = 1.2;
  auto v = find_violation(t);
  ASSERT_TRUE(v);
  EXPECT_NE(v->find("index 10"), std::string::npos);

  t = testing::constant_case(s, 0.5).input;
  t.values[20] = 0.51;
  v = find_violation(t);
  ASSERT_TRUE(v);
  EXPECT_NE(v->find("step"), std::string::npos);

  t = testing::constant_case(s, 0.5).input;
  t.values.pop_back();
  EXPECT_FALSE(is_valid(t));
}

TEST(FitTrajectory, TwoKnotsGiveALinearRampAtTheRateLimit) {
  const SignalSpec s = pedal_spec();
  const std::vector<ControlPoint> pts{{0.0, 0.0}, {2.0, 1.0}};
  const Trajectory t = fit_trajectory(pts, s);
  ASSERT_EQ(t.size(), 1001u);
  for (std::size_t k = 0; k <= 200; ++k)
    EXPECT_NEAR(t[k], 0.005 * static_cast<double>(k), 1e-12) << k;
  for (std::size_t k = 200; k < t.size(); ++k) EXPECT_DOUBLE_EQ(t[k], 1.0);
  EXPECT_TRUE(is_valid(t));
}

TEST(FitTrajectory, HoldsTheEndKnotsOutsideTheirSpan) {
  const SignalSpec s = pedal_spec();
  const std::vector<ControlPoint> pts{{1.0, 0.3}, {3.0, 0.6}};
  const Trajectory t = fit_trajectory(pts, s);
  for (std::size_t k = 0; k <= 100; ++k) EXPECT_DOUBLE_EQ(t[k], 0.3);
  for (std::size_t k = 300; k < t.size(); ++k) EXPECT_DOUBLE_EQ(t[k], 0.6);
}

TEST(FitTrajectory, RejectsRateInfeasibleKnots) {
  const std::vector<ControlPoint> pts{{0.0, 0.0}, {0.5, 1.0}};
  try {
    fit_trajectory(pts, pedal_spec());
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("rate bound"), std::string::npos);
  }
}

TEST(FitTrajectory, RejectsMalformedControlPoints) {
  const SignalSpec s = pedal_spec();
  EXPECT_THROW(fit_trajectory(std::vector<ControlPoint>{}, s),
               SpecificationError);
  EXPECT_THROW(
      fit_trajectory(std::vector<ControlPoint>{{2.0, 0.5}, {1.0, 0.5}}, s),
      SpecificationError);
  EXPECT_THROW(
      fit_trajectory(std::vector<ControlPoint>{{0.0, 0.5}, {0.001, 0.5}}, s),
      SpecificationError);
  EXPECT_THROW(fit_trajectory(std::vector<ControlPoint>{{0.0, 1.5}}, s),
               SpecificationError);
  EXPECT_THROW(fit_trajectory(std::vector<ControlPoint>{{11.0, 0.5}}, s),
               SpecificationError);
}

TEST(FitTrajectory, RandomKnotsAlwaysYieldValidInterpolants) {
  const SignalSpec s = pedal_spec();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto pts = generate_control_points(s, 2 + seed % 15, rng);
    const Trajectory t = fit_trajectory(pts, s);
    ASSERT_FALSE(find_violation(t)) << "seed " << seed << ": "
                                    << *find_violation(t);
    for (const ControlPoint& p : pts) {
      const auto k =
          static_cast<std::size_t>(std::llround(p.time / s.sample_period));
      EXPECT_DOUBLE_EQ(t[k], p.value) << "seed " << seed;
    }
  }
}

TEST(FitTrajectory, MonotoneKnotsGiveMonotoneSegments) {
  const SignalSpec s = pedal_spec();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    std::vector<ControlPoint> pts{{0.0, 0.0}};
    double v = 0.0;
    for (int k = 1; k <= 5; ++k) {
      v = std::min(1.0, v + rng.uniform(0.0, 0.5 * 2.0));
      pts.push_back({2.0 * k, v});
    }
    const Trajectory t = fit_trajectory(pts, s);
    for (std::size_t k = 1; k < t.size(); ++k)
      ASSERT_GE(t[k], t[k - 1]) << "seed " << seed << " index " << k;
  }
}

TEST(GenerateControlPoints, SpansTheDurationWithDistinctInstants) {
  const SignalSpec s = pedal_spec();
  Rng rng(4);
  const auto pts = generate_control_points(s, 10, rng);
  ASSERT_EQ(pts.size(), 10u);
  EXPECT_DOUBLE_EQ(pts.front().time, 0.0);
  EXPECT_DOUBLE_EQ(pts.back().time, s.duration);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_GT(pts[i].time, pts[i - 1].time);
    EXPECT_LE(std::abs(pts[i].value - pts[i - 1].value),
              s.max_rate * (pts[i].time - pts[i - 1].time) + 1e-12);
  }
  EXPECT_THROW(generate_control_points(s, 1, rng), SpecificationError);
  EXPECT_THROW(generate_control_points(s, 2000, rng), SpecificationError);
}

TEST(GenerateSuite, IsSeededAndNamesCasesInOrder) {
  const SignalSpec s = pedal_spec();
  Rng a(11), b(11), c(12);
  const TestSuite sa = generate_suite(s, 5, 10, a);
  const TestSuite sb = generate_suite(s, 5, 10, b);
  const TestSuite sc = generate_suite(s, 5, 10, c);
  ASSERT_EQ(sa.size(), 5u);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    EXPECT_EQ(sa.cases[i].id, case_id(i));
    EXPECT_EQ(sa.cases[i].input, sb.cases[i].input);
    EXPECT_TRUE(is_valid(sa.cases[i].input));
  }
  EXPECT_NE(sa.cases[0].input, sc.cases[0].input);
  EXPECT_EQ(case_id(7), "tc-007");
  EXPECT_EQ(case_id(1234), "tc-1234");
  EXPECT_NO_THROW(sa.validate());
  Rng d(0);
  EXPECT_THROW(generate_suite(s, 0, 10, d), SpecificationError);
}

TEST(TestSuite, RejectsDuplicateIdsAndMixedGrids) {
  const SignalSpec s = pedal_spec();
  TestSuite suite{{testing::constant_case(s, 0.1, "a"),
                   testing::constant_case(s, 0.2, "a")}};
  EXPECT_THROW(suite.validate(), SpecificationError);

  SignalSpec other = s;
  other.sample_period = 0.02;
  TestCase tc = testing::constant_case(s, 0.1, "b");
  tc.fixed_inputs["gear"] = testing::constant_case(other, 1.0).input;
  suite = {{tc}};
  EXPECT_THROW(suite.validate(), SpecificationError);
}

TEST(Slice, ClampsTheWindowAtBothEnds) {
  EXPECT_EQ(clamped_window(10, 0, 3), (std::pair<std::size_t, std::size_t>{0, 3}));
  EXPECT_EQ(clamped_window(10, 9, 3), (std::pair<std::size_t, std::size_t>{6, 9}));
  EXPECT_EQ(clamped_window(10, 5, 2), (std::pair<std::size_t, std::size_t>{3, 7}));

  Trajectory t{pedal_spec(), std::vector<double>(1001)};
  for (std::size_t k = 0; k < t.size(); ++k) t.values[k] = static_cast<double>(k);
  const auto sl = slice(t, 1, 2);
  EXPECT_EQ(sl, (std::vector<double>{0, 1, 2, 3}));
  EXPECT_THROW(slice(t, 1001, 2), ShapeError);
}

}  // namespace
}  // namespace qamut

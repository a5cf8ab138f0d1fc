// Copyright 2026 The slerev Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "slerev/loewner.hpp"
#include "slerev/sle_sampler.hpp"

namespace slerev {
namespace {

SamplerConfig short_config(double T, double dt_max) {
  SamplerConfig config;
  config.T = T;
  config.dt_max = dt_max;
  return config;
}

TEST(SampleDriving, PlainDrivingIsScaledBrownianMotion) {
  SleParams p;
  p.kappa = 3.0;
  const auto config = short_config(1.0, 1e-2);
  double sum_sq = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(21, i);
    const auto path = sample_driving(p, config, rng);
    const double z = path.w.back() / std::sqrt(p.kappa * path.times.back());
    sum_sq += z * z;
  }
  const double variance = sum_sq / n;
  EXPECT_GE(variance, 0.9);
  EXPECT_LE(variance, 1.1);
}

TEST(SampleDriving, NonHittingForcePointIsNotSwallowed) {
  SleParams p;
  p.kappa = 2.0;
  // Partial sum 0 against the hitting bound -1.
  p.right.points = {{1.0, 0.0}};
  const auto config = short_config(5.0, 1e-3);
  int survived = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(22, i);
    const auto chain = path_to_chain(sample_driving(p, config, rng));
    survived += hull_swallow_time(chain, boundary_point(1.0)) ? 0 : 1;
  }
  EXPECT_GE(survived, 0.99 * n);
}

TEST(SampleDriving, CriticalWeightedClusterIsNeverSwallowed) {
  // At kappa = 4 the cluster {0^-, -1} sums exactly to the hitting bound 0.
  SleParams p;
  p.kappa = 4.0;
  p.left.degenerate_weight = 1.0;
  p.left.points = {{-1.0, -1.0}};
  const auto config = short_config(5.0, 1e-3);
  std::size_t redraws = 0;
  for (int i = 0; i < 200; ++i) {
    CounterRng rng(25, i);
    const auto path = sample_driving(p, config, rng);
    redraws += path.floor_redraws;
    EXPECT_FALSE(hull_swallow_time(path_to_chain(path), BoundaryPoint{-1.0, Side::kLeft}));
  }
  EXPECT_GT(redraws, 0U);
}

TEST(SampleDriving, PassivePointsShrinkTheStep) {
  SleParams p;
  p.kappa = 4.0;
  p.right.points = {{0.5, 0.0}};
  const auto config = short_config(1.0, 1e-3);
  for (int i = 0; i < 20; ++i) {
    CounterRng rng(26, i);
    const auto path = sample_driving(p, config, rng);
    // The second half of a bridge split keeps the length chosen before the split.
    std::size_t stale = 0;
    for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
      double gap = path.w[k] - path.v_left[0][k];
      for (const auto& v : path.v_right) {
        gap = std::min(gap, v[k] - path.w[k]);
      }
      const double bound = std::max(config.gamma * gap * gap, config.dt_max * config.dt_floor_ratio);
      // Differences of capacities lose digits once dt is far below t.
      const double slack = 1e-15 * path.times[k + 1];
      stale += path.times[k + 1] - path.times[k] > bound * (1 + 1e-9) + slack ? 1 : 0;
    }
    EXPECT_LE(stale, path.bridge_splits);
  }
}

TEST(SampleDriving, StepCapGrowsWithCapacityNearTheBase) {
  SleParams p;
  p.kappa = 2.0;
  auto config = short_config(1.0, 1e-3);
  config.epsilon0 = 1.0;
  CounterRng rng(27, 0);
  const auto path = sample_driving(p, config, rng);
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    const double t = path.times[k];
    const double cap = config.dt_max * std::min(1.0, std::max(t / config.dt_ramp, 1.0 / 64));
    ASSERT_LE(path.times[k + 1] - t, cap * (1 + 1e-9));
  }
  EXPECT_NEAR(path.times[1], config.dt_max / 64, 1e-15);
  config.dt_ramp = 0.0;
  CounterRng again(27, 0);
  EXPECT_NEAR(sample_driving(p, config, again).times[1], config.dt_max, 1e-15);
}

TEST(SampleDriving, OrderingHoldsAtEveryStep) {
  SleParams p;
  p.kappa = 2.5;
  p.left.degenerate_weight = 0.5;
  p.left.points = {{-0.5, -0.7}, {-2.0, 1.0}};
  p.right.points = {{0.3, 0.4}, {1.0, -0.6}};
  const auto config = short_config(3.0, 1e-3);
  for (int i = 0; i < 20; ++i) {
    CounterRng rng(23, i);
    const auto path = sample_driving(p, config, rng);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      for (std::size_t j = 0; j < path.v_left.size(); ++j) {
        ASSERT_LE(path.v_left[j][k], j == 0 ? path.w[k] : path.v_left[j - 1][k]);
      }
      for (std::size_t j = 0; j < path.v_right.size(); ++j) {
        ASSERT_GE(path.v_right[j][k], j == 0 ? path.w[k] : path.v_right[j - 1][k]);
      }
    }
  }
}

TEST(SampleDriving, StepsRespectTheBounds) {
  SleParams p;
  p.kappa = 2.0;
  p.right.degenerate_weight = 1.0;
  auto config = short_config(2.0, 1e-3);
  CounterRng rng(24, 0);
  const auto path = sample_driving(p, config, rng);
  EXPECT_NEAR(path.times.back(), 2.0, 1e-12);
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    const double dt = path.times[k] - path.times[k - 1];
    EXPECT_LE(dt, 1e-3 * (1 + 1e-9));
    EXPECT_GT(dt, 0.0);
  }
  // The weighted point starts next to W, so the first steps are tiny.
  EXPECT_LT(path.times[1], 1e-6);
}

TEST(SampleDriving, SameStreamSamePath) {
  SleParams p;
  p.kappa = 2.0;
  p.right.points = {{1.0, 1.0}};
  const auto config = short_config(1.0, 1e-3);
  CounterRng a(25, 7);
  CounterRng b(25, 7);
  CounterRng c(25, 8);
  const auto pa = sample_driving(p, config, a);
  const auto pb = sample_driving(p, config, b);
  const auto pc = sample_driving(p, config, c);
  EXPECT_EQ(pa.w, pb.w);
  EXPECT_EQ(pa.times, pb.times);
  EXPECT_NE(pa.w, pc.w);
  EXPECT_EQ(pa.stream, 7U);
}

TEST(SampleDriving, MalformedParamsThrow) {
  SleParams p;
  p.right.points = {{-1.0, 1.0}};
  CounterRng rng(1, 1);
  EXPECT_THROW((void)sample_driving(p, short_config(1.0, 1e-3), rng), InvalidParamsError);
  SleParams ok;
  auto bad = short_config(1.0, 1e-3);
  bad.dt_max = -1.0;
  EXPECT_THROW((void)sample_driving(ok, bad, rng), InvalidParamsError);
}

TEST(DetectThreshold, NonnegativeWeightsNeverStop) {
  SleParams p;
  p.kappa = 2.0;
  p.right.points = {{1.0, 1.0}};
  CounterRng rng(26, 0);
  const auto path = sample_driving(p, short_config(2.0, 1e-3), rng);
  EXPECT_FALSE(path.stopped_at.has_value());
  EXPECT_FALSE(detect_threshold(path, p).has_value());
}

TEST(DetectThreshold, DistantClusterNeverReached) {
  SleParams p;
  p.kappa = 2.0;
  p.right.points = {{1000.0, -3.0}};
  CounterRng rng(27, 0);
  const auto path = sample_driving(p, short_config(1.0, 1e-3), rng);
  EXPECT_FALSE(path.stopped_at.has_value());
  EXPECT_FALSE(detect_threshold(path, p).has_value());
}

TEST(DetectThreshold, QualifyingClusterStopsThePath) {
  // Below the continuation bound: the sampler accepts well-formed input and records the stop.
  SleParams p;
  p.kappa = 2.0;
  p.right.degenerate_weight = -2.5;
  int stopped = 0;
  for (int i = 0; i < 50; ++i) {
    CounterRng rng(28, i);
    const auto path = sample_driving(p, short_config(1.0, 1e-3), rng);
    if (path.stopped_at) {
      ++stopped;
      EXPECT_EQ(detect_threshold(path, p), path.stopped_at);
      EXPECT_EQ(*path.stopped_at, path.times.back());
    }
  }
  EXPECT_GT(stopped, 40);
}

TEST(DetectThreshold, MinusOnePointNineIsAboveTheThreshold) {
  // A single point of weight -1.9 never forms a cluster of weight <= -2, so no path stops.
  SleParams p;
  p.kappa = 2.0;
  p.right.degenerate_weight = -1.9;
  int stopped = 0;
  for (int i = 0; i < 100; ++i) {
    CounterRng rng(29, i);
    stopped += sample_driving(p, short_config(10.0, 1e-2), rng).stopped_at ? 1 : 0;
  }
  RecordProperty("stopped_fraction", std::to_string(stopped / 100.0));
  EXPECT_EQ(stopped, 0);
}

TEST(PathToChain, EmptyPathGivesEmptyChain) {
  DrivingPath path;
  EXPECT_TRUE(path_to_chain(path).empty());
  path.times = {0.0};
  path.w = {0.0};
  EXPECT_TRUE(path_to_chain(path).empty());
}

TEST(PathToChain, ConstantPathReproducesTheSlit) {
  DrivingPath path;
  for (int k = 0; k <= 100; ++k) {
    path.times.push_back(k * 0.01);
    path.w.push_back(0.0);
  }
  const auto chain = path_to_chain(path);
  EXPECT_NEAR(forward_map(chain, Complex{1.0, 0.0}).real(), std::sqrt(5.0), 1e-10);
}

TEST(PathToChain, CapacityRoundTrip) {
  SleParams p;
  p.kappa = 2.0;
  CounterRng rng(30, 0);
  const auto path = sample_driving(p, short_config(3.0, 1e-3), rng);
  const auto chain = path_to_chain(path);
  EXPECT_EQ(chain.size(), path.steps());
  EXPECT_NEAR(chain.total_capacity(), path.times.back(), 1e-12 * path.times.back());
}

TEST(MappedOutParams, RecentresAtTheDriving) {
  SleParams p;
  p.kappa = 2.0;
  p.right.points = {{1.0, 1.0}};
  CounterRng rng(31, 0);
  const auto path = sample_driving(p, short_config(0.5, 1e-3), rng);
  const std::size_t k = path.steps() / 2;
  const auto mapped = mapped_out_params(path, p, k, 1e-3);
  // The base point has moved off the driving value and becomes an ordinary point of weight 0.
  ASSERT_EQ(mapped.right.points.size(), 2U);
  EXPECT_NEAR(mapped.right.points[0].location, path.v_right[0][k] - path.w[k], 1e-12);
  EXPECT_DOUBLE_EQ(mapped.right.points[0].weight, 0.0);
  EXPECT_NEAR(mapped.right.points[1].location, path.v_right[1][k] - path.w[k], 1e-12);
  EXPECT_DOUBLE_EQ(mapped.right.points[1].weight, 1.0);
  EXPECT_TRUE(validate_params(mapped).ok());
}

TEST(DefaultEpsilon, ScalesWithTheNearestPoint) {
  SleParams p;
  EXPECT_DOUBLE_EQ(default_epsilon0(p), 1e-4);
  p.right.points = {{0.5, 0.0}};
  p.left.points = {{-0.25, 0.0}};
  EXPECT_DOUBLE_EQ(default_epsilon0(p), 0.25e-4);
}

}  // namespace
}  // namespace slerev

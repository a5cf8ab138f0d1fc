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

#include "slerev/geometry.hpp"
#include "slerev/sle_sampler.hpp"

namespace slerev {
namespace {

LoewnerChain sampled_chain(const SleParams& p, double T, std::uint64_t stream) {
  SamplerConfig config;
  config.T = T;
  config.dt_max = 1e-3;
  CounterRng rng(41, stream);
  return path_to_chain(sample_driving(p, config, rng));
}

SleParams one_right_point(double x) {
  SleParams p;
  p.kappa = 2.0;
  p.right.points = {{x, 1.0}};
  return p;
}

TEST(ApplyJ, FixedPointAndArithmetic) {
  CurveTrace trace;
  trace.points = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  trace.times = {0.0, 1.0, 2.0};
  const auto mapped = apply_j(trace);
  ASSERT_EQ(mapped.size(), 2U);
  EXPECT_LE(std::abs(mapped.points[0] - Complex(0.0, 1.0)), 1e-15);
  EXPECT_LE(std::abs(mapped.points[1] - Complex(-0.5, 0.5)), 1e-15);
  EXPECT_EQ(mapped.times, (std::vector<double>{1.0, 2.0}));
}

TEST(ApplyJ, IsAnInvolution) {
  const auto trace = trace_curve(sampled_chain(SleParams{}, 2.0, 0));
  const auto twice = apply_j(apply_j(trace));
  ASSERT_EQ(twice.size(), trace.size() - 1);
  for (std::size_t k = 0; k < twice.size(); ++k) {
    EXPECT_LE(std::abs(twice.points[k] - trace.points[k + 1]), 1e-14 * std::abs(trace.points[k + 1]));
  }
}

TEST(ReverseCurve, VerticalSegment) {
  CurveTrace trace;
  for (int k = 0; k <= 4; ++k) {
    trace.points.emplace_back(0.0, 0.5 * k);
    trace.times.push_back(k * k / 16.0);
  }
  const auto reversed = reverse_curve(trace);
  EXPECT_EQ(reversed.source_points, 5U);
  ASSERT_EQ(reversed.points.size(), 4U);
  const std::vector<double> heights{0.5, 2.0 / 3.0, 1.0, 2.0};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(reversed.points[k].real(), 0.0, 1e-15);
    EXPECT_NEAR(reversed.points[k].imag(), heights[k], 1e-15);
  }
}

TEST(ReverseCurve, EndpointsSwapAndDoubleReversalRestores) {
  const auto trace = trace_curve(sampled_chain(SleParams{}, 4.0, 1));
  const auto reversed = reverse_curve(trace);
  EXPECT_LT(std::abs(reversed.points.front()), std::abs(reversed.points.back()));
  CurveTrace as_trace;
  as_trace.points = reversed.points;
  as_trace.times.assign(reversed.points.size(), 0.0);
  const auto back = reverse_curve(as_trace);
  ASSERT_EQ(back.points.size(), trace.size() - 1);
  for (std::size_t k = 0; k < back.points.size(); ++k) {
    EXPECT_LE(std::abs(back.points[k] - trace.points[k + 1]), 1e-14 * std::abs(trace.points[k + 1]));
  }
}

TEST(ComponentWeightFactor, VerticalLineOracle) {
  const auto chain = LoewnerChain::constant(0.0, 100.0, 1000);
  TruncationPolicy policy;
  policy.T = 100.0;
  const auto record = component_weight_factor(chain, one_right_point(1.0), 1, Side::kRight, policy);
  const double r = std::sqrt(401.0);
  EXPECT_NEAR(record.factor, (1.0 / r) / (r - 20.0), 1e-10);
  EXPECT_NEAR(record.factor, 1.99875, 1e-4);
  EXPECT_GT(record.truncation_error, 0.0);
  EXPECT_EQ(record.xi, ExtendedPoint::infinity(Side::kRight));
  EXPECT_EQ(record.sigma, ExtendedPoint::zero(Side::kRight));
}

TEST(ComponentWeightFactor, DoublingConvergesTowardTwo) {
  const auto chain = LoewnerChain::constant(0.0, 800.0, 800);
  double previous_gap = std::numeric_limits<double>::infinity();
  double previous_diff = std::numeric_limits<double>::infinity();
  double previous = weight_factor_at(chain, 1.0, Side::kRight, 50.0);
  for (const double T : {100.0, 200.0, 400.0, 800.0}) {
    const double f = weight_factor_at(chain, 1.0, Side::kRight, T);
    EXPECT_LT(std::abs(f - 2.0), previous_gap);
    EXPECT_LT(std::abs(f - previous), previous_diff);
    previous_gap = std::abs(f - 2.0);
    previous_diff = std::abs(f - previous);
    previous = f;
  }
  TruncationPolicy policy;
  policy.T = 100.0;
  policy.relative_tolerance = 1e-12;
  const auto record = component_weight_factor(chain, one_right_point(1.0), 1, Side::kRight, policy);
  EXPECT_DOUBLE_EQ(record.capacity, 800.0);
  EXPECT_NEAR(record.truncation_error, previous_diff / previous, 1e-12);
}

TEST(ComponentWeightFactor, EmptyChainGivesOne) {
  TruncationPolicy policy;
  const auto record = component_weight_factor(LoewnerChain{}, one_right_point(1.0), 1, Side::kRight, policy);
  EXPECT_DOUBLE_EQ(record.factor, 1.0);
  EXPECT_DOUBLE_EQ(record.truncation_error, 0.0);
}

TEST(ComponentWeightFactor, DilationInvariance) {
  SleParams p;
  p.kappa = 2.0;
  p.left.degenerate_weight = 1.0;
  p.left.points = {{-1.0, -1.0}};
  for (std::uint64_t stream = 0; stream < 5; ++stream) {
    const auto chain = sampled_chain(p, 4.0, stream);
    SleParams scaled = p;
    scaled.left.points[0].location = -2.0;
    TruncationPolicy policy;
    policy.T = 1.0;
    TruncationPolicy scaled_policy = policy;
    scaled_policy.T = 4.0;
    const auto a = component_weight_factor(chain, p, 1, Side::kLeft, policy);
    const auto b = component_weight_factor(chain.dilated(2.0), scaled, 1, Side::kLeft, scaled_policy);
    EXPECT_LE(std::abs(a.factor - b.factor) / a.factor, 1e-8);
  }
}

TEST(ComponentWeightFactor, MirrorSymmetry) {
  const auto chain = sampled_chain(SleParams{}, 2.0, 3);
  LoewnerChain reflected;
  for (const auto& step : chain.steps()) {
    reflected.append(step.dt, -step.w);
  }
  EXPECT_NEAR(weight_factor_at(chain, 1.5, Side::kRight, 2.0), weight_factor_at(reflected, -1.5, Side::kLeft, 2.0),
              1e-12);
}

TEST(ComponentWeightFactor, SwallowedPointThrows) {
  LoewnerChain chain;
  for (int k = 0; k < 1000; ++k) {
    chain.append(0.001, k < 100 ? 0.0 : 2.0);
  }
  TruncationPolicy policy;
  policy.T = 1.0;
  EXPECT_THROW((void)component_weight_factor(chain, one_right_point(1.0), 1, Side::kRight, policy),
               SwallowedPointError);
}

TEST(ComponentWeightFactor, LocatesSigmaAfterABoundaryTouch) {
  // Driving jumps to 1.5 at capacity 0.2: [0, sqrt(1.45)] is swallowed, 3 survives.
  LoewnerChain chain;
  for (int k = 0; k < 1000; ++k) {
    chain.append(0.001, k < 200 ? 0.0 : 1.5);
  }
  TruncationPolicy policy;
  policy.T = 1.0;
  policy.locate_sigma = true;
  const auto record = component_weight_factor(chain, one_right_point(3.0), 1, Side::kRight, policy);
  EXPECT_EQ(record.sigma.kind, ExtendedPoint::Kind::kFinite);
  EXPECT_NEAR(record.sigma.value, std::sqrt(1.45), 1e-6);
  EXPECT_TRUE(hull_swallow_time(chain, {record.sigma.value * 0.999, Side::kRight}).has_value());
  EXPECT_FALSE(hull_swallow_time(chain, {record.sigma.value * 1.001 + 1e-9, Side::kRight}).has_value());
}

TEST(ComponentWeightFactor, FiniteWhenTheCurveNearlyPinchesOffThePoint) {
  // Stream 443 of seed 1 passes within 1e-3 of -1; the images of -1 and 0^- then agree to
  // machine precision and a difference of images would give 0/0.
  SleParams p;
  p.kappa = 2.0;
  p.left.degenerate_weight = 1.0;
  p.left.points = {{-1.0, -1.0}};
  SamplerConfig config;
  config.T = 25.0;
  config.dt_max = 1e-3;
  CounterRng rng(1, 2 * 443 + 1);
  const auto chain = path_to_chain(sample_driving(p, config, rng));
  TruncationPolicy policy;
  policy.T = 6.25;
  const auto record = component_weight_factor(chain, p, 1, Side::kLeft, policy);
  EXPECT_TRUE(std::isfinite(record.factor));
  EXPECT_GT(record.factor, 0.0);
}

TEST(NormalizedMap, SendsTheMarkedPointToPlusOrMinusOne) {
  const auto chain = sampled_chain(SleParams{}, 1.0, 4);
  for (const double x : {-2.0, 1.5}) {
    const auto map = normalized_map(chain, x, 1.0);
    EXPECT_NEAR(map.value(Complex{x, 0.0}).real(), x > 0 ? 1.0 : -1.0, 1e-10);
    EXPECT_GT(std::abs(map.value(Complex{1e8, 1.0})), 1e6);
    EXPECT_GT(map.derivative(x), 0.0);
  }
}

TEST(ChainRuleCheck, IdentityInner) {
  const auto chain = sampled_chain(SleParams{}, 1.0, 5);
  NormalizedMap identity{[](Complex z) { return z; }, [](double) { return 1.0; }, 1.5};
  const auto outer = normalized_map(chain, 1.5, 1.0);
  EXPECT_LE(chain_rule_check(outer, identity, 1.5), 1e-12);
}

TEST(ChainRuleCheck, ClosedFormQuadrantMaps) {
  NormalizedMap inner{[](Complex z) { return z * z; }, [](double x) { return 2.0 * x; }, 2.0};
  NormalizedMap outer{[](Complex w) { return (w / 4.0) * (w / 4.0); }, [](double y) { return y / 8.0; }, 4.0};
  EXPECT_LE(chain_rule_check(outer, inner, 2.0), 1e-10);
}

TEST(ChainRuleCheck, NestedSampledHulls) {
  for (std::uint64_t stream = 0; stream < 5; ++stream) {
    const auto first = sampled_chain(SleParams{}, 1.0, 10 + stream);
    const double T1 = first.total_capacity();
    const auto inner = normalized_map(first, 2.0, T1);
    const double a = boundary_image(first, {0.0, Side::kRight}, T1);
    const double b = forward_map(first, Complex{2.0, 0.0}, T1).real();
    const double scale = 1.0 / (b - a);
    // A second hull grown from the image of the tip, in the normalized coordinates of the first.
    const double tip = scale * (first[first.size() - 1].w - a);
    const auto second = sampled_chain(SleParams{}, 0.05, 20 + stream).affine_image(1.0, tip);
    const auto outer = normalized_map(second, inner.value(Complex{2.0, 0.0}).real(), second.total_capacity(),
                                      {0.0, Side::kRight});
    EXPECT_LE(chain_rule_check(outer, inner, 2.0), 1e-4);
  }
}

TEST(ChainRuleCheck, IncompatibleNestingThrows) {
  NormalizedMap inner{[](Complex z) { return z * z; }, [](double x) { return 2.0 * x; }, 2.0};
  NormalizedMap outer{[](Complex w) { return w; }, [](double) { return 1.0; }, 3.0};
  EXPECT_THROW((void)chain_rule_check(outer, inner, 2.0), std::invalid_argument);
}

}  // namespace
}  // namespace slerev

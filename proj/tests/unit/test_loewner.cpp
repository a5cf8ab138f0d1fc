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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "slerev/loewner.hpp"

namespace slerev {
namespace {

Complex slit(Complex z, double w, double t) { return w + upper_sqrt((z - w) * (z - w) + 4.0 * t); }

LoewnerChain random_chain(std::uint64_t seed, std::size_t n, double dt, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  LoewnerChain chain;
  double w = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double step = dt * jitter(gen);
    chain.append(step, w);
    w += scale * std::sqrt(2.0 * step) * normal(gen);
  }
  return chain;
}

std::vector<Complex> grid_points() {
  std::vector<Complex> z;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      z.emplace_back(-4.5 + i, 0.05 + 0.6 * j);
    }
  }
  return z;
}

TEST(UpperSqrt, SquaresBackIntoTheUpperHalfPlane) {
  for (const Complex z : {Complex{3, 4}, Complex{-3, 4}, Complex{3, -4}, Complex{-3, -4}, Complex{-1, 0},
                          Complex{-1, -0.0}, Complex{4, 0}, Complex{0, -2}}) {
    const Complex r = upper_sqrt(z);
    EXPECT_GE(r.imag(), 0.0);
    EXPECT_NEAR(std::abs(r * r - z), 0.0, 1e-14);
  }
  EXPECT_EQ(upper_sqrt(Complex{4.0, 0.0}), Complex(2.0, 0.0));
  EXPECT_EQ(upper_sqrt(Complex{-4.0, 0.0}), Complex(0.0, 2.0));
}

TEST(ForwardMap, VerticalSlitAtOne) {
  const auto chain = LoewnerChain::constant(0.0, 1.0, 1);
  EXPECT_NEAR(forward_map(chain, Complex{1.0, 0.0}).real(), 2.2360680, 1e-7);
}

TEST(ForwardMap, TimeZeroIsIdentity) {
  const auto chain = random_chain(1, 50, 0.01);
  const Complex z{0.3, 0.7};
  EXPECT_EQ(forward_map(chain, z, 0.0), z);
}

TEST(ForwardMap, TipMapsToDriving) {
  const auto chain = LoewnerChain::constant(0.0, 1.0, 1);
  EXPECT_LT(std::abs(forward_map(chain, Complex{0.0, 2.0})), 1e-12);
}

TEST(ForwardMap, SwallowedPointThrows) {
  const auto chain = LoewnerChain::constant(0.0, 1.0, 4);
  EXPECT_THROW((void)forward_map(chain, Complex{0.0, 0.5}), SwallowedPointError);
  EXPECT_NO_THROW((void)forward_map(chain, Complex{1e-9, 0.5}));
  EXPECT_THROW((void)forward_map(chain, Complex{0.0, 0.5}, 2.0), std::out_of_range);
}

TEST(ForwardMap, ConstantDrivingMatchesClosedFormForAnyPartition) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (const double w : {0.0, 0.7, -1.3}) {
    LoewnerChain chain;
    for (int k = 0; k < 37; ++k) {
      chain.append(u(gen) / 37.0, w);
    }
    const double t = chain.total_capacity();
    double worst = 0.0;
    for (const Complex z : grid_points()) {
      const Complex exact = slit(z, w, t);
      worst = std::max(worst, std::abs(forward_map(chain, z) - exact) / std::abs(exact));
    }
    EXPECT_LE(worst, 1e-10) << "w = " << w;
  }
}

TEST(ForwardMap, PartialLastStepMatchesClosedForm) {
  const auto chain = LoewnerChain::constant(0.25, 1.0, 8);
  const Complex z{0.4, 0.3};
  EXPECT_LE(std::abs(forward_map(chain, z, 0.37) - slit(z, 0.25, 0.37)), 1e-12);
}

TEST(ForwardMap, ConcatenationComposes) {
  const auto first = random_chain(4, 200, 0.005);
  auto second = random_chain(5, 300, 0.004).affine_image(1.0, first[first.size() - 1].w);
  const auto both = first.concatenated(second);
  EXPECT_NEAR(both.total_capacity(), first.total_capacity() + second.total_capacity(), 1e-12);
  for (const Complex z : grid_points()) {
    if (z.imag() < 1.5) {
      continue;
    }
    const Complex direct = forward_map(both, z);
    const Complex composed = forward_map(second, forward_map(first, z));
    EXPECT_LE(std::abs(direct - composed) / std::abs(direct), 1e-10);
  }
}

TEST(ForwardMap, HydrodynamicNormalization) {
  const auto chain = random_chain(6, 1000, 0.001);
  const double t = chain.total_capacity();
  for (int k = 0; k < 8; ++k) {
    const Complex z = std::polar(1e4, 0.1 + 0.37 * k);
    const Complex g = forward_map(chain, z);
    EXPECT_LE(std::abs(g - z - 2.0 * t / z), 1e-4);
  }
}

TEST(ForwardMapDerivative, VerticalSlitAtTwo) {
  const auto chain = LoewnerChain::constant(0.0, 1.0, 10);
  const auto image = forward_map_derivative(chain, 2.0, 1.0);
  EXPECT_NEAR(image.value, std::sqrt(8.0), 1e-12);
  EXPECT_NEAR(image.derivative, 0.7071068, 1e-7);
}

TEST(ForwardMapDerivative, TimeZero) {
  const auto chain = random_chain(7, 10, 0.01);
  const auto image = forward_map_derivative(chain, -1.5, 0.0);
  EXPECT_EQ(image.value, -1.5);
  EXPECT_EQ(image.derivative, 1.0);
}

TEST(ForwardMapDerivative, MonotoneOnEachSide) {
  const auto chain = random_chain(8, 2000, 0.0005);
  double previous = -std::numeric_limits<double>::infinity();
  for (const double x : {-5.0, -3.0, -2.0, 2.0, 3.0, 5.0}) {
    const double g = forward_map_derivative(chain, x, chain.total_capacity()).value;
    EXPECT_GT(g, previous);
    previous = g;
  }
}

TEST(ForwardMapDerivative, MatchesCentredDifferences) {
  const auto chain = random_chain(9, 2000, 0.0005);
  const double t = chain.total_capacity();
  const double h = 1e-5;
  for (const double x : {-4.0, -2.5, 2.5, 4.0}) {
    const double d = forward_map_derivative(chain, x, t).derivative;
    const double fd = (forward_map(chain, Complex{x + h, 0.0}, t).real() -
                       forward_map(chain, Complex{x - h, 0.0}, t).real()) /
                      (2.0 * h);
    EXPECT_LE(std::abs(d - fd) / d, 1e-6) << "x = " << x;
  }
}

TEST(ForwardMapRelative, AgreesWithSubtraction) {
  const auto chain = random_chain(16, 2000, 1e-3);
  const double t = chain.total_capacity();
  for (const double x : {-3.0, -0.7, 0.4, 2.5}) {
    const BoundaryPoint point = boundary_point(x);
    const BoundaryPoint anchor{0.0, point.side};
    const auto rel = forward_map_relative(chain, point, anchor, t);
    const auto direct = forward_map_derivative(chain, point, t);
    EXPECT_NEAR(rel.value, direct.value, 1e-12 * std::abs(direct.value));
    EXPECT_NEAR(rel.log_derivative, std::log(direct.derivative), 1e-10);
    EXPECT_NEAR(rel.log_separation, std::log(std::abs(direct.value - boundary_image(chain, anchor, t))), 1e-8);
  }
  EXPECT_THROW((void)forward_map_relative(chain, boundary_point(1.0), {2.0, Side::kRight}, t), std::invalid_argument);
}

TEST(ForwardMapRelative, SeparationSurvivesMergedImages) {
  // Parking the driving just right of the image of 0^- squeezes (-1, 0^-) twice exponentially.
  LoewnerChain chain;
  chain.append(0.25, 0.0);
  const BoundaryPoint anchor{0.0, Side::kLeft};
  for (int k = 0; k < 6; ++k) {
    chain.append(1.0, boundary_image(chain, anchor, chain.total_capacity()) + 1e-12);
  }
  const double t = chain.total_capacity();
  const auto rel = forward_map_relative(chain, boundary_point(-1.0), anchor, t);
  EXPECT_LT(rel.log_separation, std::log(1e-30));
  EXPECT_TRUE(std::isfinite(rel.log_derivative));
  EXPECT_EQ(forward_map_derivative(chain, boundary_point(-1.0), t).value, boundary_image(chain, anchor, t));
}

TEST(BoundaryImage, HullSidesOfAVerticalSlit) {
  const auto chain = LoewnerChain::constant(0.0, 1.0, 16);
  EXPECT_NEAR(boundary_image(chain, {0.0, Side::kRight}, 1.0), 2.0, 1e-12);
  EXPECT_NEAR(boundary_image(chain, {0.0, Side::kLeft}, 1.0), -2.0, 1e-12);
}

TEST(HullSwallowTime, VerticalSlitNeverSwallowsOne) {
  const auto chain = LoewnerChain::constant(0.0, 5.0, 500);
  EXPECT_FALSE(hull_swallow_time(chain, boundary_point(1.0)).has_value());
}

TEST(HullSwallowTime, BasePointIsSwallowedAtOnce) {
  const auto chain = random_chain(10, 100, 0.01);
  const auto t = hull_swallow_time(chain, {0.0, Side::kRight});
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(*t, 0.0);
}

TEST(HullSwallowTime, FarPointSurvivesShortChain) {
  const auto chain = random_chain(11, 100, 0.001);
  EXPECT_FALSE(hull_swallow_time(chain, boundary_point(50.0)).has_value());
  EXPECT_FALSE(hull_swallow_time(chain, boundary_point(-50.0)).has_value());
}

TEST(HullSwallowTime, DrivingJumpingPastAPointSwallowsIt) {
  // g_{0.1}(1) = sqrt(1.4) < 2, so the jump to 2 leaves 1 behind.
  LoewnerChain chain;
  for (int k = 0; k < 100; ++k) {
    chain.append(0.001, 0.0);
  }
  for (int k = 0; k < 100; ++k) {
    chain.append(0.001, 2.0);
  }
  const auto t = hull_swallow_time(chain, boundary_point(1.0));
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 0.1, 1e-12);
  EXPECT_FALSE(hull_swallow_time(chain, boundary_point(1.0), 0.05).has_value());
}

TEST(HullSwallowTime, LinearDrivingNeverCatchesUp) {
  // g - w relaxes towards 2 / speed but stays positive.
  LoewnerChain chain;
  for (int k = 0; k < 1000; ++k) {
    chain.append(0.001, 3.0 * k * 0.001);
  }
  EXPECT_FALSE(hull_swallow_time(chain, boundary_point(1.0)).has_value());
}

TEST(TraceCurve, ZeroDrivingTracesTheSlit) {
  const auto chain = LoewnerChain::constant(0.0, 1.0, 10000);
  const TipTracer tracer(chain);
  for (std::size_t k = 0; k <= chain.size(); k += 497) {
    const Complex tip = tracer.tip(k);
    EXPECT_LE(std::abs(tip - Complex{0.0, 2.0 * std::sqrt(chain.start_time(k))}), 1e-6) << "k = " << k;
  }
  const auto trace = trace_curve(chain);
  EXPECT_EQ(trace.points.front(), Complex(0.0, 0.0));
  for (std::size_t k = 0; k < trace.size(); ++k) {
    EXPECT_LE(std::abs(trace.points[k] - Complex{0.0, 2.0 * std::sqrt(trace.times[k])}), 1e-6);
  }
}

TEST(TraceCurve, EmptyChainIsTheOrigin) {
  const auto trace = trace_curve(LoewnerChain{});
  ASSERT_EQ(trace.size(), 1U);
  EXPECT_EQ(trace.points[0], Complex(0.0, 0.0));
}

double min_nonadjacent_distance(const std::vector<Complex>& p) {
  const auto segment_distance = [](Complex a, Complex b, Complex z) {
    const Complex d = b - a;
    const double s = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(a + s * d - z);
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < p.size(); ++j) {
      best = std::min({best, segment_distance(p[i], p[i + 1], p[j]), segment_distance(p[j], p[j + 1], p[i])});
    }
  }
  return best;
}

TEST(TraceCurve, LinearDrivingBendsToItsSideAndStaysSimple) {
  for (const double c : {0.5, -0.5}) {
    LoewnerChain chain;
    for (int k = 0; k < 2000; ++k) {
      chain.append(5e-4, c * k * 5e-4);
    }
    TraceOptions options;
    options.mode = TraceOptions::Mode::kEveryStep;
    const auto trace = trace_curve(chain, options);
    EXPECT_GT(c * trace.points.back().real(), 0.0);
    std::vector<Complex> sub;
    for (std::size_t k = 0; k < trace.size(); k += 20) {
      sub.push_back(trace.points[k]);
    }
    EXPECT_GT(min_nonadjacent_distance(sub), 0.0);
  }
}

TEST(TraceCurve, TimesIncreaseAndPointsStayInTheHalfPlane) {
  const auto chain = random_chain(12, 20000, 5e-4);
  const auto trace = trace_curve(chain);
  for (std::size_t k = 1; k < trace.size(); ++k) {
    EXPECT_GT(trace.times[k], trace.times[k - 1]);
    EXPECT_GE(trace.points[k].imag(), 0.0);
  }
}

TEST(TipTracer, FarFieldBlocksAgreeWithExactUnzipping) {
  const auto chain = random_chain(13, 40000, 5e-4);
  const TipTracer exact(chain);
  const TipTracer fast(chain, 2.5);
  double worst = 0.0;
  for (std::size_t k = 1; k <= chain.size(); k += 333) {
    const Complex a = exact.tip(k);
    worst = std::max(worst, std::abs(fast.tip(k) - a) / std::abs(a));
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(TraceCurve, AdaptiveResolutionIsRelative) {
  const auto chain = random_chain(14, 20000, 5e-4);
  TraceOptions options;
  options.relative_resolution = 0.02;
  const auto trace = trace_curve(chain, options);
  std::vector<double> starts(chain.size() + 1);
  for (std::size_t k = 0; k <= chain.size(); ++k) {
    starts[k] = chain.start_time(k);
  }
  const auto index_of = [&](double t) {
    return std::lower_bound(starts.begin(), starts.end(), t * (1.0 - 1e-12)) - starts.begin();
  };
  std::size_t coarse = 0;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const double scale = std::min(std::abs(trace.points[k]), std::abs(trace.points[k - 1]));
    const bool too_far = std::abs(trace.points[k] - trace.points[k - 1]) > 0.02 * scale * 1.0001;
    // Only pairs one step apart may exceed the resolution.
    coarse += too_far && index_of(trace.times[k]) - index_of(trace.times[k - 1]) > 1 ? 1 : 0;
  }
  EXPECT_EQ(coarse, 0U);
  EXPECT_LT(trace.size(), chain.size());
}

TEST(LoewnerChain, AffineImageConjugatesTheMaps) {
  const auto chain = random_chain(15, 500, 0.002);
  const auto scaled = chain.affine_image(2.0, 0.5);
  EXPECT_NEAR(scaled.total_capacity(), 4.0 * chain.total_capacity(), 1e-12);
  const Complex z{0.3, 1.7};
  const Complex lhs = forward_map(scaled, 2.0 * z + 0.5);
  const Complex rhs = 2.0 * forward_map(chain, z) + 0.5;
  EXPECT_LE(std::abs(lhs - rhs) / std::abs(rhs), 1e-12);
}

TEST(LoewnerChain, RejectsNonPositiveSteps) {
  EXPECT_THROW(LoewnerChain({{0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(LoewnerChain({{-1.0, 1.0}}), std::invalid_argument);
}

}  // namespace
}  // namespace slerev

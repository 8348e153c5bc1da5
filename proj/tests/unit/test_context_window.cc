// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>

#include "ctxmask/context_window.h"
#include "ctxmask/errors.h"
#include "doctest.h"
#include "test_util.h"

using namespace ctxmask;

namespace {

WindowedEstimates RandomEstimates(Rng& rng, std::size_t frames, std::size_t w,
                                  std::size_t bins) {
  WindowedEstimates est{w, bins, {}};
  for (std::size_t k = 0; k + w <= frames; ++k)
    est.estimates.emplace_back(w, bins, testutil::RandomVector(rng, w * bins, 0.0, 1.0));
  return est;
}

// Enumerates every (window, position) pair and keeps those landing on t.
RealGrid BruteForceCombine(const WindowedEstimates& est, std::size_t frames) {
  RealGrid out(frames, est.bins);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < est.bins; ++f) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t k = 0; k < est.estimates.size(); ++k)
        for (std::size_t j = 0; j < est.window; ++j)
          if (k + j == t) {
            sum += est.estimates[k](j, f);
            ++n;
          }
      out(t, f) = sum / static_cast<double>(n);
    }
  }
  return out;
}

// Counts with 1-based frame index s: s in the warm-up, w in steady state,
// T - s + 1 in the tail, all capped by the number of windows.
std::size_t ExpectedCount(std::size_t t, std::size_t frames, std::size_t w) {
  const std::size_t s = t + 1;
  return std::min({s, w, frames - s + 1, frames - w + 1});
}

// Stub that returns its input clipped to [0, 1], whole windows out.
class ClipEstimator final : public MaskEstimator {
 public:
  ClipEstimator(std::size_t w, std::size_t w_out, std::size_t bins)
      : w_(w), w_out_(w_out), bins_(bins) {}
  std::size_t input_context() const override { return w_; }
  std::size_t output_context() const override { return w_out_; }
  std::size_t bins() const override { return bins_; }
  nn::Tensor EstimateWindows(const nn::Tensor& in) const override {
    auto out = nn::Tensor::Zeros(w_out_, in.bins(), in.frames());
    const std::size_t first = w_ - w_out_;
    for (std::size_t c = 0; c < w_out_; ++c)
      for (std::size_t f = 0; f < in.bins(); ++f)
        for (std::size_t k = 0; k < in.frames(); ++k)
          out.at(c, f, k) = std::clamp(in.at(first + c, f, k), 0.0, 1.0);
    return out;
  }

 private:
  std::size_t w_, w_out_, bins_;
};

}  // namespace

TEST_CASE("combine equals the brute-force average for all small sizes") {
  Rng rng(1);
  for (std::size_t frames = 1; frames <= 32; ++frames)
    for (std::size_t w = 1; w <= frames; ++w) {
      const auto est = RandomEstimates(rng, frames, w, 3);
      const RatioMask got = Combine(est, frames, w);
      const RealGrid want = BruteForceCombine(est, frames);
      for (std::size_t i = 0; i < want.size(); ++i)
        REQUIRE(std::abs(got.grid().values()[i] - want.values()[i]) <= 1e-15);
      for (std::size_t t = 0; t < frames; ++t)
        REQUIRE(WindowsCovering(t, frames, w).count() == ExpectedCount(t, frames, w));
    }
}

TEST_CASE("window counts across the three regimes") {
  const std::size_t expected[] = {1, 2, 3, 3, 2, 1};
  for (std::size_t t = 0; t < 6; ++t) CHECK(WindowsCovering(t, 6, 3).count() == expected[t]);
  CHECK(WindowsCovering(0, 5, 1).count() == 1);
  CHECK(WindowsCovering(2, 5, 5).count() == 1);
}

TEST_CASE("combine of w=1 is the identity") {
  Rng rng(2);
  const auto est = RandomEstimates(rng, 10, 1, 4);
  const RatioMask m = Combine(est, 10, 1);
  for (std::size_t t = 0; t < 10; ++t)
    for (std::size_t f = 0; f < 4; ++f) CHECK(m(t, f) == est.estimates[t](0, f));
}

TEST_CASE("combine of constants is constant and stays within contributor range") {
  WindowedEstimates est{4, 2, {}};
  for (int k = 0; k < 7; ++k) est.estimates.emplace_back(4, 2, 0.375);
  const RatioMask flat = Combine(est, 10, 4);
  for (double v : flat.grid().values()) CHECK(v == 0.375);

  Rng rng(3);
  const auto r = RandomEstimates(rng, 20, 5, 3);
  const auto m = Combine(r, 20, 5);
  for (std::size_t t = 0; t < 20; ++t) {
    const auto cover = WindowsCovering(t, 20, 5);
    for (std::size_t f = 0; f < 3; ++f) {
      double lo = 1.0, hi = 0.0;
      for (std::size_t k = cover.first; k < cover.last; ++k) {
        lo = std::min(lo, r.estimates[k](t - k, f));
        hi = std::max(hi, r.estimates[k](t - k, f));
      }
      CHECK(m(t, f) >= lo);
      CHECK(m(t, f) <= hi);
    }
  }
}

TEST_CASE("combine rejects inconsistent inputs") {
  Rng rng(4);
  const auto est = RandomEstimates(rng, 8, 3, 2);
  CHECK_THROWS_AS(Combine(est, 9, 3), UsageError);
  CHECK_THROWS_AS(Combine(est, 8, 4), UsageError);
  CHECK_THROWS_AS(Combine(est, 2, 3), UsageError);
}

TEST_CASE("framing") {
  RealGrid x(5, 2);
  for (std::size_t t = 0; t < 5; ++t) x(t, 0) = x(t, 1) = double(t);
  const auto wins = FrameWindows(x, 3);
  REQUIRE(wins.size() == 3);
  CHECK(wins[2](0, 0) == 2.0);
  CHECK(wins[2](2, 1) == 4.0);
  const auto stacked = StackWindows(x, 3);
  CHECK(stacked.shape() == std::vector<std::size_t>{3, 2, 3});
  CHECK(stacked.at(1, 0, 2) == 3.0);
  CHECK_THROWS_WITH_AS(FrameWindows(x, 6), doctest::Contains("shorter than window"), UsageError);
  CHECK(FrameWindows(x, 5).size() == 1);
}

TEST_CASE("context configuration") {
  CHECK_NOTHROW(ContextWindowConfig(8, 8));
  CHECK_NOTHROW(ContextWindowConfig(8, 1));
  CHECK_THROWS_AS(ContextWindowConfig(8, 4), UsageError);
  CHECK_THROWS_AS(ContextWindowConfig(0, 1), UsageError);
  CHECK(ContextWindowConfig(8, 8).sliding());
  CHECK_FALSE(ContextWindowConfig(1, 1).sliding());
}

TEST_CASE("latency is (w - 1) hops") {
  CHECK(LatencySeconds(1, 0.004) == 0.0);
  CHECK(LatencySeconds(3, 0.004) == doctest::Approx(0.008).epsilon(1e-15));
  CHECK(LatencySeconds(8, 0.004) == doctest::Approx(0.028).epsilon(1e-15));
  CHECK_THROWS_AS(LatencySeconds(0, 0.004), UsageError);
}

TEST_CASE("sliding inference with a clipping stub equals combine of the framed inputs") {
  Rng rng(5);
  RealGrid features(12, 4, testutil::RandomVector(rng, 48, -0.5, 1.5));
  const ClipEstimator stub(4, 4, 4);
  const RatioMask got = RunSlidingInference(stub, features, {4, 4});

  WindowedEstimates est{4, 4, {}};
  for (auto win : FrameWindows(features, 4)) {
    for (double& v : win.values()) v = std::clamp(v, 0.0, 1.0);
    est.estimates.push_back(std::move(win));
  }
  CHECK(got == Combine(est, 12, 4));
}

TEST_CASE("last-frame inference") {
  Rng rng(6);
  RealGrid features(10, 3, testutil::RandomVector(rng, 30, 0.0, 1.0));
  // A whole-window model used in last-frame mode reproduces its input: the
  // warm-up comes from window 0, the rest from each window's newest frame.
  const ClipEstimator whole(4, 4, 3);
  CHECK(RunSlidingInference(whole, features, {4, 1}).grid() == features);

  const ClipEstimator single(4, 1, 3);
  const RatioMask m = RunSlidingInference(single, features, {4, 1});
  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t t = 0; t < 3; ++t) CHECK(m(t, f) == features(3, f));
    for (std::size_t t = 3; t < 10; ++t) CHECK(m(t, f) == features(t, f));
  }
  CHECK_THROWS_AS(RunSlidingInference(single, features, {4, 4}), UsageError);
  CHECK_THROWS_AS(RunSlidingInference(single, features, {3, 1}), UsageError);
}

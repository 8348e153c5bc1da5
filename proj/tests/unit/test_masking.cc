// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>

#include "ctxmask/errors.h"
#include "ctxmask/masking.h"
#include "doctest.h"
#include "test_util.h"

using namespace ctxmask;

namespace {

ComplexSpectrogram Single(std::complex<double> v) { return ComplexSpectrogram(1, 1, v); }

double Irm(std::complex<double> s, std::complex<double> n, double beta) {
  return IdealRatioMask(Single(s), Single(n), CompressionBeta(beta))(0, 0);
}

}  // namespace

TEST_CASE("ratio mask spot values") {
  CHECK(Irm(2.0, 0.0, 0.5) == 1.0);
  CHECK(Irm(1.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(Irm(std::sqrt(3.0), 1.0, 0.5) - std::sqrt(0.75)) < 1e-12);
  CHECK(std::abs(Irm(std::sqrt(3.0), 1.0, 0.5) - 0.8660254037844386) < 1e-12);
  // Phase plays no part.
  CHECK(Irm({0.0, 1.0}, {-1.0, 0.0}, 1.0) == doctest::Approx(0.5));
  CHECK(Irm(0.0, 0.0, 0.5) == 0.0);
  CHECK(Irm(0.0, 3.0, 0.5) == 0.0);
}

TEST_CASE("ratio mask stays in [0, 1] and grows as beta shrinks") {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const std::complex<double> s(rng.Uniform(-3, 3), rng.Uniform(-3, 3));
    const std::complex<double> n(rng.Uniform(-3, 3), rng.Uniform(-3, 3));
    const double lo = Irm(s, n, 1.0), hi = Irm(s, n, 0.3);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(hi >= lo);
  }
}

TEST_CASE("beta and mask validation") {
  CHECK_THROWS_AS(CompressionBeta(0.0), UsageError);
  CHECK_THROWS_AS(CompressionBeta(1.5), UsageError);
  CHECK_NOTHROW(CompressionBeta(1.0));
  CHECK_THROWS_AS(RatioMask(RealGrid(1, 2, std::vector<double>{0.5, 1.2})), UsageError);
  CHECK_THROWS_AS(RatioMask(RealGrid(1, 1, std::vector<double>{NAN})), UsageError);
  CHECK_THROWS_AS(IdealRatioMask(ComplexSpectrogram(2, 3), ComplexSpectrogram(3, 2)), UsageError);
}

TEST_CASE("applying a mask scales magnitude and keeps phase") {
  ComplexSpectrogram y(1, 2, std::vector<std::complex<double>>{{3.0, 4.0}, {-1.0, 0.0}});
  const RatioMask m(RealGrid(1, 2, std::vector<double>{0.5, 0.0}));
  const auto s = ApplyMask(m, y);
  CHECK(std::abs(s(0, 0)) == doctest::Approx(2.5));
  CHECK(std::arg(s(0, 0)) == doctest::Approx(std::arg(y(0, 0))));
  CHECK(s(0, 1) == std::complex<double>(0.0, 0.0));
  const RatioMask ones(1, 2, 1.0);
  CHECK(ApplyMask(ones, y) == y);
}

TEST_CASE("compressed mse value and zero at the target") {
  MagnitudeSpectrogram est(1, 2, std::vector<double>{1.0, 0.0});
  MagnitudeSpectrogram tgt(1, 2, std::vector<double>{0.0, 1.0});
  CHECK(CompressedMse(est, tgt).loss == doctest::Approx(2.0));
  CHECK(CompressedMse(tgt, tgt).loss == 0.0);
  MagnitudeSpectrogram neg(1, 2, std::vector<double>{-1.0, 0.0});
  CHECK_THROWS_AS(CompressedMse(neg, tgt), UsageError);
}

TEST_CASE("compressed mse gradient matches finite differences") {
  Rng rng(5);
  MagnitudeSpectrogram est(3, 4, testutil::RandomVector(rng, 12, 0.1, 2.0));
  MagnitudeSpectrogram tgt(3, 4, testutil::RandomVector(rng, 12, 0.0, 2.0));
  const auto report = CompressedMse(est, tgt);
  const double h = 1e-6;
  for (std::size_t i = 0; i < est.size(); ++i) {
    auto plus = est, minus = est;
    plus.values()[i] += h;
    minus.values()[i] -= h;
    const double fd = (CompressedMse(plus, tgt).loss - CompressedMse(minus, tgt).loss) / (2 * h);
    CHECK(report.gradient.values()[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("flat loss agrees with the grid loss") {
  Rng rng(6);
  const auto e = testutil::RandomVector(rng, 30, 0.0, 1.0);
  const auto t = testutil::RandomVector(rng, 30, 0.0, 1.0);
  std::vector<double> g(30);
  const double flat = CompressedMseFlat(e, t, 0.3, g);
  const auto grid = CompressedMse(MagnitudeSpectrogram(5, 6, e), MagnitudeSpectrogram(5, 6, t));
  CHECK(flat == doctest::Approx(grid.loss).epsilon(1e-15));
  for (std::size_t i = 0; i < 30; ++i) CHECK(g[i] == doctest::Approx(grid.gradient.values()[i]));
  CHECK(CompressedMseFlat(e, t, 0.3, {}) == flat);
}

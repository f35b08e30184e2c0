#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "dbs/signal/beta.hpp"
#include "dbs/signal/error_index.hpp"
#include "dbs/signal/fft.hpp"
#include "dbs/signal/psd.hpp"
#include "dbs/signal/rms.hpp"

namespace dbs::signal {
namespace {

std::vector<Complex> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += x[j] * Complex(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> sine(double f, double fs, std::size_t n, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * f * i / fs);
  return x;
}

double mean_square(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

double total(const Psd& p) {
  double s = 0.0;
  for (double v : p.values) s += v;
  return s * p.df;
}

TEST(Fft, ImpulseIsFlat) {
  std::vector<double> x(8, 0.0);
  x[0] = 1.0;
  for (const auto& b : fft_radix2(x).bins) {
    EXPECT_NEAR(b.real(), 1.0, 1e-15);
    EXPECT_NEAR(b.imag(), 0.0, 1e-15);
  }
}

TEST(Fft, ConstantIsDcOnly) {
  const auto s = fft_radix2(std::vector<double>(8, 1.0));
  EXPECT_NEAR(std::abs(s.bins[0] - Complex(8.0, 0.0)), 0.0, 1e-12);
  for (std::size_t k = 1; k < 8; ++k) EXPECT_NEAR(std::abs(s.bins[k]), 0.0, 1e-12);
}

TEST(Fft, MatchesNaiveDft) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(1024);
  for (double& v : x) v = u(rng);
  const auto fast = fft_radix2(x).bins;
  const auto slow = naive_dft(x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    num = std::max(num, std::abs(fast[k] - slow[k]));
    den += std::norm(slow[k]);
  }
  EXPECT_LT(num / std::sqrt(den), 1e-9);
}

TEST(Fft, RejectsNonPowerOfTwo) {
  try {
    fft_radix2(std::vector<double>(12, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPowerOfTwo);
  }
  const Radix2Plan plan(8);
  std::vector<Complex> wrong(4);
  EXPECT_THROW(plan.forward(wrong), Error);
}

TEST(Psd, ZeroSignal) {
  const Psd p = psd(std::vector<double>(64, 0.0), 100.0);
  for (double v : p.values) EXPECT_EQ(v, 0.0);
}

TEST(Psd, SineAtBinCentre) {
  const double fs = 1024.0;
  const std::size_t n = 1024;
  const Psd p = psd(sine(64.0, fs, n), fs);
  EXPECT_NEAR(p.values[64] * p.df, 0.5, 1e-12);
  EXPECT_NEAR(total(p), 0.5, 1e-12);
}

TEST(Psd, ParsevalOnNoise) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.2, 1.0);
  std::vector<double> x(4096);
  for (double& v : x) v = g(rng);
  EXPECT_NEAR(total(psd(x, 1000.0)), mean_square(x), 1e-9 * mean_square(x));
  // Zero padding keeps the identity with the unpadded normalisation.
  std::vector<double> shorter(x.begin(), x.begin() + 3000);
  EXPECT_NEAR(total(padded_periodogram(shorter, 1000.0, 4096)), mean_square(shorter), 1e-9);
}

TEST(Psd, SegmentAveragerMatchesSingleSegment) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(256);
  for (double& v : x) v = g(rng);
  SegmentAverager avg(256, 50.0);
  avg.push(std::span<const double>(x).subspan(0, 100));
  avg.push(std::span<const double>(x).subspan(100));
  const Psd a = avg.average();
  const Psd b = psd(x, 50.0);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-12);
  EXPECT_EQ(avg.segments(), 1u);
  EXPECT_EQ(avg.accumulator_capacity(), 129u);
}

TEST(Psd, SegmentAveragerNeedsOneSegment) {
  SegmentAverager avg(64, 1.0);
  avg.push(std::vector<double>(63, 1.0));
  try {
    avg.average();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(Beta, ZeroSignal) { EXPECT_EQ(beta_power(std::vector<double>(1000, 0.0), 1000.0).value, 0.0); }

TEST(Beta, TwentyHzIsInBand) {
  const double fs = 100000.0;
  const auto x = sine(20.0, fs, 100000);
  const Psd p = estimate_psd(x, fs, BetaMethod::bulk());
  EXPECT_GE(band_power(p, kBetaLowHz, kBetaHighHz) / non_dc_power(p), 0.95);
}

TEST(Beta, FiftyHzIsOutOfBand) {
  const double fs = 100000.0;
  const auto x = sine(50.0, fs, 100000);
  const Psd p = estimate_psd(x, fs, BetaMethod::bulk());
  EXPECT_LT(band_power(p, kBetaLowHz, kBetaHighHz) / non_dc_power(p), 0.01);
}

TEST(Beta, RestingOffsetDoesNotLeak) {
  const double fs = 100000.0;
  auto x = sine(50.0, fs, 100000);
  for (double& v : x) v -= 65.0;
  const Psd p = estimate_psd(x, fs, BetaMethod::bulk());
  EXPECT_LT(band_power(p, kBetaLowHz, kBetaHighHz) / non_dc_power(p), 0.01);
}

TEST(Beta, ChunkedErrors) {
  const std::vector<double> x(1000, 1.0);
  try {
    beta_power(x, 1000.0, BetaMethod::chunked(100));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPowerOfTwo);
  }
  try {
    beta_power(x, 1000.0, BetaMethod::chunked(1024));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SegmentTooLong);
  }
}

TEST(Lfp, MeanOfTraces) {
  const std::vector<double> a{1.0, 2.0, 3.0};
  EXPECT_EQ(lfp_from_traces({a}), a);
  EXPECT_EQ(lfp_from_traces(Traces(10, a)), a);
  const auto z = lfp_from_traces({{1.0, 1.0}, {-1.0, -1.0}});
  EXPECT_EQ(z, (std::vector<double>{0.0, 0.0}));
  try {
    lfp_from_traces({{1.0}, {1.0, 2.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(RegionBeta, PathsAgreeForIdenticalInputs) {
  const auto x = sine(20.0, 1000.0, 2000);
  const double one_a = region_beta_power({x}, 1000.0, RegionPath::LfpFirst).value;
  const double one_b = region_beta_power({x}, 1000.0, RegionPath::PerNeuronMean).value;
  EXPECT_NEAR(one_a, one_b, 1e-12);
  const double many_a = region_beta_power(Traces(4, x), 1000.0, RegionPath::LfpFirst).value;
  const double many_b = region_beta_power(Traces(4, x), 1000.0, RegionPath::PerNeuronMean).value;
  EXPECT_NEAR(many_a, many_b, 1e-12);
}

TEST(RegionBeta, AntiphaseCancelsOnlyInLfp) {
  const auto x = sine(20.0, 1000.0, 2000);
  auto y = x;
  for (double& v : y) v = -v;
  EXPECT_NEAR(region_beta_power({x, y}, 1000.0, RegionPath::LfpFirst).value, 0.0, 1e-20);
  EXPECT_GT(region_beta_power({x, y}, 1000.0, RegionPath::PerNeuronMean).value, 0.1);
}

TEST(RmsSeries, KnownValues) {
  EXPECT_DOUBLE_EQ(rms_of_series(std::vector<double>{3.0, -3.0, 3.0, -3.0}, 0.01), 3.0);
  EXPECT_DOUBLE_EQ(rms_of_series(std::vector<double>{0.0, 2.0}, 1.0), std::sqrt(2.0));
  EXPECT_THROW(rms_of_series(std::vector<double>{}, 0.01), Error);
}

TEST(ErrorIndexTest, PerfectRelay) {
  const std::vector<double> onsets{10.0, 100.0, 200.0};
  EXPECT_EQ(error_index({{12.0, 105.0, 220.0}}, onsets).value, 0.0);
}

TEST(ErrorIndexTest, NoSpikesAllMissed) {
  const std::vector<double> onsets{10.0, 100.0, 200.0};
  const auto ei = error_index({{}, {}}, onsets);
  EXPECT_EQ(ei.value, 1.0);
  EXPECT_EQ(ei.missed, 6u);
}

TEST(ErrorIndexTest, HandCount) {
  std::vector<double> onsets;
  std::vector<double> spikes;
  for (int i = 0; i < 10; ++i) {
    onsets.push_back(100.0 * i);
    spikes.push_back(100.0 * i + 5.0);
  }
  spikes.push_back(307.0);
  spikes.push_back(310.0);
  const auto ei = error_index({spikes}, onsets);
  EXPECT_EQ(ei.spurious, 2u);
  EXPECT_EQ(ei.missed, 0u);
  EXPECT_DOUBLE_EQ(ei.value, 0.2);
}

TEST(ErrorIndexTest, SpikeOutsideWindowIsSpurious) {
  const std::vector<double> onsets{10.0};
  const auto ei = error_index({{5.0, 12.0, 50.0}}, onsets);
  EXPECT_EQ(ei.spurious, 2u);
  EXPECT_EQ(ei.missed, 0u);
}

TEST(ErrorIndexTest, NoPulses) {
  try {
    error_index({{1.0}}, std::vector<double>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoPulses);
  }
}

}  // namespace
}  // namespace dbs::signal

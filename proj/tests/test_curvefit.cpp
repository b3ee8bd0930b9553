#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "strokepath/curvefit.hpp"

using namespace strokepath;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double sse(const CubicCurve& c, const std::vector<double>& y, const std::vector<double>& z) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = z[i] - oracle::eval_expanded(c.a, c.b, c.c, c.d, y[i]);
    s += r * r;
  }
  return s;
}

}  // namespace

TEST(FitCubic, ConstantData) {
  const auto y = linspace(-0.1, 0.1, 50);
  const std::vector<double> z(y.size(), 0.5);
  const auto c = fit_cubic(as_vector(y), as_vector(z));
  EXPECT_NEAR(c.a, 0.0, 1e-9);
  EXPECT_NEAR(c.b, 0.0, 1e-10);
  EXPECT_NEAR(c.c, 0.0, 1e-11);
  EXPECT_NEAR(c.d, 0.5, 1e-12);
  EXPECT_NEAR(c.rms_residual, 0.0, 1e-12);
  EXPECT_EQ(c.y_min, -0.1);
  EXPECT_EQ(c.y_max, 0.1);
}

TEST(FitCubic, RecoversExactCubic) {
  const auto y = linspace(-0.1, 0.1, 100);
  std::vector<double> z;
  for (double v : y) z.push_back(oracle::eval_expanded(2.0, -1.0, 0.3, 0.45, v));
  const auto c = fit_cubic(as_vector(y), as_vector(z));
  EXPECT_NEAR(c.a, 2.0, 1e-8);
  EXPECT_NEAR(c.b, -1.0, 1e-9);
  EXPECT_NEAR(c.c, 0.3, 1e-10);
  EXPECT_NEAR(c.d, 0.45, 1e-11);
  EXPECT_LT(c.rms_residual, 1e-12);
}

TEST(FitCubic, MatchesQuadPrecisionOracleOnNoisyData) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 1e-3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto truth = oracle::random_back_curve(rng);
    const auto y = linspace(truth.y_min, truth.y_max, 241);
    std::vector<double> z;
    for (double v : y) z.push_back(oracle::eval_expanded(truth.a, truth.b, truth.c, truth.d, v) + noise(rng));
    const auto fit = fit_cubic(as_vector(y), as_vector(z));
    const auto ref = oracle::normal_equations_cubic(y, z);
    for (double v : y) {
      const double expected = static_cast<double>(oracle::eval_quad(ref, v));
      EXPECT_NEAR(eval_cubic(fit, v), expected, 1e-9);
    }
  }
}

TEST(FitCubic, ResidualIsLocallyMinimal) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 2e-3);
  const auto y = linspace(-0.12, 0.08, 120);
  std::vector<double> z;
  for (double v : y) z.push_back(oracle::eval_expanded(3.0, 0.5, -0.1, 0.6, v) + noise(rng));
  const auto fit = fit_cubic(as_vector(y), as_vector(z));
  const double best = sse(fit, y, z);
  const double steps[4] = {1e-2, 1e-3, 1e-4, 1e-5};
  for (int k = 0; k < 4; ++k) {
    for (double sign : {-1.0, 1.0}) {
      auto moved = fit;
      double* field[4] = {&moved.a, &moved.b, &moved.c, &moved.d};
      *field[k] += sign * steps[k];
      EXPECT_GT(sse(moved, y, z), best);
    }
  }
  EXPECT_NEAR(fit.rms_residual, std::sqrt(best / static_cast<double>(y.size())), 1e-15);
}

TEST(FitCubic, TranslationEquivariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 1e-3);
  const auto y = linspace(-0.1, 0.1, 80);
  std::vector<double> z;
  for (double v : y) z.push_back(oracle::eval_expanded(-4.0, 1.0, 0.2, 0.5, v) + noise(rng));
  const double shift = 0.07;
  std::vector<double> shifted;
  for (double v : y) shifted.push_back(v + shift);
  const auto f = fit_cubic(as_vector(y), as_vector(z));
  const auto g = fit_cubic(as_vector(shifted), as_vector(z));
  for (double v : y) {
    EXPECT_NEAR(eval_cubic(g, v + shift), eval_cubic(f, v), 1e-9);
  }
}

TEST(FitCubic, UnorderedInputGivesSameCurve) {
  const auto y = linspace(-0.1, 0.1, 30);
  std::vector<double> z;
  for (double v : y) z.push_back(oracle::eval_expanded(1.0, 2.0, 0.1, 0.5, v) + 1e-4 * std::sin(40 * v));
  auto yr = y;
  auto zr = z;
  std::reverse(yr.begin(), yr.end());
  std::reverse(zr.begin(), zr.end());
  const auto a = fit_cubic(as_vector(y), as_vector(z));
  const auto b = fit_cubic(as_vector(yr), as_vector(zr));
  EXPECT_EQ(a.y_min, b.y_min);
  EXPECT_EQ(a.y_max, b.y_max);
  for (double v : y) EXPECT_NEAR(eval_cubic(a, v), eval_cubic(b, v), 1e-12);
}

TEST(FitCubic, SingularInputs) {
  auto code = [](const std::vector<double>& y, const std::vector<double>& z) {
    try {
      fit_cubic(as_vector(y), as_vector(z));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::empty_input;
  };
  EXPECT_EQ(code({0.0, 0.1, 0.2}, {1, 1, 1}), ErrorCode::singular_fit);
  EXPECT_EQ(code({0.0, 0.1, 0.1, 0.2, 0.2}, {1, 1, 1, 1, 1}), ErrorCode::singular_fit);
  EXPECT_EQ(code({0.0, 0.1, 0.2, 0.3}, {1, 1, 1}), ErrorCode::invalid_input);
  EXPECT_EQ(code({0.0, 0.1, 0.2, std::nan("")}, {1, 1, 1, 1}), ErrorCode::invalid_input);
}

TEST(FitCubic, FromProfile) {
  BackProfile p;
  p.x_fixed = 0.01;
  p.y = Eigen::VectorXd::LinSpaced(20, -0.1, 0.1);
  p.z = p.y.unaryExpr([](double v) { return oracle::eval_expanded(0, 1.0, 0, 0.5, v); });
  const auto c = fit_cubic(p);
  EXPECT_NEAR(c.b, 1.0, 1e-9);
  p.y[3] = p.y[2];
  EXPECT_THROW(fit_cubic(p), Error);
}

TEST(EvalCubic, HandValues) {
  const CubicCurve c{2.0, -1.0, 0.3, 0.45, -0.1, 0.1, 0.0};
  EXPECT_NEAR(eval_cubic(c, 0.1), 0.002 - 0.01 + 0.03 + 0.45, 1e-15);
  EXPECT_NEAR(eval_cubic(c, 0.1), 0.472, 1e-15);
  EXPECT_NEAR(eval_cubic(c, -0.1), -0.002 - 0.01 - 0.03 + 0.45, 1e-15);
  EXPECT_EQ(eval_cubic(c, 0.0), 0.45);
  EXPECT_NEAR(derivative(c, 0.1), 0.06 - 0.2 + 0.3, 1e-15);
  EXPECT_NEAR(second_derivative(c, 0.1), 1.2 - 2.0, 1e-15);
}

TEST(EvalCubic, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < 50; ++i) {
    const auto c = oracle::random_back_curve(rng);
    const double y = u(rng);
    const double h = 1e-5;
    const double fd = (oracle::eval_expanded(c.a, c.b, c.c, c.d, y + h) -
                       oracle::eval_expanded(c.a, c.b, c.c, c.d, y - h)) / (2 * h);
    EXPECT_NEAR(derivative(c, y), fd, 1e-8);
    EXPECT_NEAR(eval_cubic(c, y), oracle::eval_expanded(c.a, c.b, c.c, c.d, y), 1e-15);
  }
}

TEST(EvalCubic, ScalarTemplate) {
  const CubicCurveT<float> c{1.0f, 0.0f, 0.0f, 0.5f, -0.1f, 0.1f, 0.0f};
  EXPECT_FLOAT_EQ(eval_cubic(c, 0.1f), 0.501f);
}

TEST(CurveFile, RoundTripIsLossless) {
  std::mt19937_64 rng(1);
  const CurveRecord rec{oracle::random_back_curve(rng), -0.0123456789012345};
  std::stringstream buf;
  write_curve(buf, rec);
  EXPECT_EQ(read_curve(buf), rec);
}

TEST(CurveFile, Errors) {
  std::istringstream missing("a=1\nb=0\nc=0\nd=0.5\ny_min=-0.1\n");
  EXPECT_THROW(read_curve(missing), Error);
  std::istringstream bad_domain("a=1\nb=0\nc=0\nd=0.5\ny_min=0.1\ny_max=-0.1\n");
  EXPECT_THROW(read_curve(bad_domain), Error);
  EXPECT_THROW(load_curve("/nonexistent/curve.txt"), Error);
}

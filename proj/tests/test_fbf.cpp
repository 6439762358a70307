#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "ifbf/convex.hpp"
#include "ifbf/fbf.hpp"
#include "ifbf/operators.hpp"
#include "oracles.hpp"

using namespace ifbf;

namespace {

ForwardOp rotation_generator() {
  Matrix m(2, 2, {0, 1, -1, 0});
  return make_skew(m);
}

FbfParams plain_params(double lambda, double sigma = 0.125) {
  FbfParams p;
  p.sigma = sigma;
  p.lambda_const = lambda;
  p.lambda_min = std::min(lambda, 1e-6);
  return p;
}

}  // namespace

TEST(StepBoundGeneral, DirectSubstitution) {
  EXPECT_DOUBLE_EQ(step_bound_general(1.0, 0.0, 0.0, 0.125), std::sqrt(0.5 / 2.5));
  EXPECT_DOUBLE_EQ(step_bound_general(2.0, 0.0, 0.0, 0.125), std::sqrt(0.5 / 2.5) / 2.0);
  EXPECT_NEAR(step_bound_general(1.0, 0.0, 0.0, 0.125), 0.44721, 1e-5);
}

TEST(StepBoundGeneral, PolynomialsEvaluatedIndependently) {
  const double a1 = 0.01, a2 = 0.01, sigma = 0.05;
  const double num = 1.0 - 12.0 * a2 * a2 - 9.0 * (a1 + a2) - 4.0 * sigma;
  const double den = 12.0 * a2 * a2 + 8.0 * (a1 + a2) + 4.0 * sigma + 2.0;
  EXPECT_NEAR(num, 0.6188, 1e-12);
  EXPECT_NEAR(den, 2.3612, 1e-12);
  EXPECT_DOUBLE_EQ(step_bound_general(1.0, a1, a2, sigma), std::sqrt(num / den));
  EXPECT_NEAR(step_bound_general(1.0, a1, a2, sigma), 0.51192, 1e-5);
}

TEST(StepBoundGeneral, RejectsViolatedHypothesis) {
  try {
    step_bound_general(1.0, 0.1, 0.1, 0.2);
    FAIL() << "expected parameter_error";
  } catch (const parameter_error& e) {
    EXPECT_NE(std::string(e.what()).find("12*alpha2^2 + 9*(alpha1+alpha2) + 4*sigma"),
              std::string::npos);
  }
  EXPECT_THROW(step_bound_general(-1.0, 0.0, 0.0, 0.125), parameter_error);
  EXPECT_THROW(step_bound_general(1.0, 0.0, 0.0, 0.0), parameter_error);
}

TEST(StepBoundNoInertia2, PaperReduction) {
  const double sigma = (1.0 - 0.81) / (2.0 * 1.81);
  EXPECT_NEAR(step_bound_no_inertia2(1.0, 0.0, sigma), 0.9, 1e-15);
}

TEST(StepBoundNoInertia2, DirectSubstitution) {
  EXPECT_DOUBLE_EQ(step_bound_no_inertia2(1.0, 0.0, 0.25), std::sqrt(0.5 / 1.5));
  EXPECT_NEAR(step_bound_no_inertia2(1.0, 0.0, 0.25), 0.57735, 1e-5);
  // independent evaluation of the two polynomials
  const double num = 1.0 - 5.0 * 0.02 - 2.0 * 0.1;
  const double den = 4.0 * 0.02 + 2.0 * 0.1 + 1.0;
  EXPECT_DOUBLE_EQ(step_bound_no_inertia2(4.0, 0.02, 0.1), std::sqrt(num / den) / 4.0);
  EXPECT_NEAR(step_bound_no_inertia2(4.0, 0.02, 0.1), 0.18479, 1e-4);
}

TEST(StepBoundNoInertia2, RejectsViolatedHypothesis) {
  try {
    step_bound_no_inertia2(1.0, 0.1, 0.25);
    FAIL() << "expected parameter_error";
  } catch (const parameter_error& e) {
    EXPECT_NE(std::string(e.what()).find("5*alpha1 + 2*sigma"), std::string::npos);
  }
}

TEST(ClassicalTsengParams, PaperSituation) {
  const FbfParams p = classical_tseng_params(1.0, 0.1);
  EXPECT_NEAR(p.sigma, (1.0 - 0.81) / (2.0 * 1.81), 1e-15);
  EXPECT_NEAR(p.sigma, 0.0524862, 1e-7);
  EXPECT_DOUBLE_EQ(p.lambda_min, 0.1);
  EXPECT_EQ(p.alpha1, 0.0);
  EXPECT_EQ(p.alpha2, 0.0);
  EXPECT_NEAR(p.step_bound(1.0), (1.0 - 0.1) / 1.0, 1e-15);
  p.validate();
}

TEST(ClassicalTsengParams, LimitingAndScaledCases) {
  // eps -> 0+ pushes sigma -> 0 and the bound -> 1/beta
  const FbfParams tiny = classical_tseng_params(1.0, 1e-9);
  EXPECT_LT(tiny.sigma, 1e-8);
  EXPECT_NEAR(tiny.step_bound(1.0), 1.0, 1e-8);

  const FbfParams p = classical_tseng_params(2.0, 0.2);
  EXPECT_NEAR(p.sigma, (1.0 - 0.64) / (2.0 * 1.64), 1e-15);
  EXPECT_NEAR(p.sigma, 0.109756, 1e-6);
  EXPECT_DOUBLE_EQ(p.lambda_min, 0.2);
  EXPECT_NEAR(p.step_bound(2.0), (1.0 - 0.2) / 2.0, 1e-15);
  EXPECT_LE(p.lambda_min, p.step_bound(2.0));
}

TEST(ClassicalTsengParams, RejectsOutOfRangeEps) {
  EXPECT_THROW(classical_tseng_params(1.0, 0.0), parameter_error);
  EXPECT_THROW(classical_tseng_params(1.0, 0.5), parameter_error);
  EXPECT_THROW(classical_tseng_params(2.0, 1.0 / 3.0), parameter_error);
  EXPECT_THROW(classical_tseng_params(0.0, 0.1), parameter_error);
}

TEST(FbfParams, ValidationGridAroundTheBoundary) {
  // dyadic caps make the boundary value exact in floating point
  const double a1 = 0.03125, a2 = 0.0625;
  const double boundary_sigma = (1.0 - 12.0 * a2 * a2 - 9.0 * (a1 + a2)) / 4.0;
  ASSERT_EQ(12.0 * a2 * a2 + 9.0 * (a1 + a2) + 4.0 * boundary_sigma, 1.0);

  FbfParams inside;
  inside.alpha1 = a1;
  inside.alpha2 = a2;
  inside.sigma = boundary_sigma * (1.0 - 1e-9);
  inside.validate();

  FbfParams on_boundary = inside;
  on_boundary.sigma = boundary_sigma;
  try {
    on_boundary.validate();
    FAIL() << "boundary point must be rejected";
  } catch (const parameter_error& e) {
    EXPECT_NE(std::string(e.what()).find("12*alpha2^2 + 9*(alpha1+alpha2) + 4*sigma"),
              std::string::npos);
  }

  FbfParams outside = inside;
  outside.sigma = boundary_sigma * (1.0 + 1e-9);
  EXPECT_THROW(outside.validate(), parameter_error);
}

TEST(FbfParams, AdmissibleInertialProximalSetting) {
  // 9*0.05 + 4*0.1 = 0.85 < 1
  FbfParams p;
  p.alpha1 = 0.05;
  p.alpha2 = 0.0;
  p.sigma = 0.1;
  p.validate();
}

TEST(FbfParams, NoInertia2RuleRequiresZeroAlpha2) {
  FbfParams p;
  p.rule = StepBoundRule::no_inertia2;
  p.alpha2 = 0.01;
  p.sigma = 0.1;
  EXPECT_THROW(p.validate(), parameter_error);
}

TEST(FbfParams, ParameterSoundness) {
  // 2 (bound * beta)^2 < 1 - alpha1 - alpha2 for every admissible setting
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  while (tested < 500) {
    const double a1 = 0.1 * u(rng);
    const double a2 = 0.1 * u(rng);
    const double sigma = 0.001 + 0.25 * u(rng);
    const double s = 12 * a2 * a2 + 9 * (a1 + a2) + 4 * sigma;
    if (!(s < 1.0)) continue;
    ++tested;
    const double beta = 0.1 + 5.0 * u(rng);
    const double bound = step_bound_general(beta, a1, a2, sigma);
    EXPECT_LT(2.0 * (bound * beta) * (bound * beta), 1.0 - a1 - a2 + 1e-12);
  }
}

TEST(FbfStep, StationaryWhenBothOperatorsVanish) {
  const MaxMonotoneOp a = zero_monotone(2);
  const ForwardOp b = zero_forward(2);
  FbfParams p = plain_params(1.0);
  p.alpha1 = 0.01;
  p.alpha2 = 0.01;
  p.sigma = 0.05;
  const HVector x{1.0, -2.0};
  FbfState s = FbfState::start(x, x);
  s = fbf_step(a, b, p, s);
  EXPECT_EQ(s.x_curr, x);
  EXPECT_EQ(*s.p_last, x);
}

TEST(FbfStep, RotationContractionFactor) {
  const MaxMonotoneOp a = zero_monotone(2);
  const ForwardOp b = rotation_generator();
  FbfParams p = classical_tseng_params(1.0, 0.1);
  p.lambda_const = 0.5;
  const HVector x{0.3, -1.7};
  FbfState s = FbfState::start(x, x);
  s = fbf_step(a, b, p, s);
  // x_{n+1} = (1 - lambda^2) x - lambda B x, so the norm contracts by
  // sqrt(1 - lambda^2 + lambda^4)
  const HVector expected = (1.0 - 0.25) * x - 0.5 * b(x);
  EXPECT_LE(norm(s.x_curr - expected), 1e-14);
  EXPECT_NEAR(norm(s.x_curr) / norm(x), std::sqrt(1.0 - 0.25 + 0.0625), 1e-12);
  EXPECT_NEAR(std::sqrt(0.8125), 0.90139, 1e-5);
}

TEST(FbfStep, ProximalStepOnAbsoluteValue) {
  const MaxMonotoneOp a = subdifferential_op(prox_l1(1.0), 1);
  const ForwardOp b = zero_forward(1);
  const FbfParams p = plain_params(1.0);
  FbfState s = FbfState::start(HVector{3.0}, HVector{3.0});
  s = fbf_step(a, b, p, s);
  EXPECT_EQ((*s.p_last)[0], 2.0);
  EXPECT_EQ(s.x_curr[0], 2.0);
}

TEST(FbfStep, ExactlyTwoForwardAndOneBackwardEvaluation) {
  auto fwd_count = std::make_shared<int>(0);
  auto res_count = std::make_shared<int>(0);
  const MaxMonotoneOp a = oracles::counting_monotone(zero_monotone(2), res_count);
  const ForwardOp b = oracles::counting_forward(rotation_generator(), fwd_count);
  FbfParams p = plain_params(0.3);
  p.alpha1 = 0.01;
  p.alpha2 = 0.01;
  p.sigma = 0.05;
  FbfState s = FbfState::start(HVector{1.0, 2.0}, HVector{1.0, 2.0});
  fbf_step(a, b, p, s);
  EXPECT_EQ(*fwd_count, 2);
  EXPECT_EQ(*res_count, 1);
}

TEST(FbfStep, CollapsesToClassicalTsengBitwise) {
  const MaxMonotoneOp a = subdifferential_op(prox_l1(0.7), 2);
  const ForwardOp b = rotation_generator();
  const double lam = 0.4;
  const FbfParams p = plain_params(lam);
  std::mt19937_64 rng(31);
  FbfState s = FbfState::start(oracles::random_vector(rng, 2), oracles::random_vector(rng, 2));
  s.x_prev = s.x_curr;  // equal start
  for (int k = 0; k < 20; ++k) {
    // reference classical update, written out independently
    const HVector bx = b(s.x_curr);
    const HVector p_ref = a.resolvent(lam, s.x_curr - lam * bx);
    const HVector x_ref = p_ref + lam * (bx - b(p_ref));
    s = fbf_step(a, b, p, s);
    ASSERT_EQ(*s.p_last, p_ref);
    ASSERT_EQ(s.x_curr, x_ref);
  }
}

TEST(Solve, FixedPointAtStartConvergesImmediately) {
  // 0 in N_[0,1](1) + (1 - 2), so x = 1 is a zero
  const MaxMonotoneOp a = normal_cone(box_set(1, 0.0, 1.0));
  const ForwardOp b = linear_forward(Matrix::identity(1), HVector{-2.0}, 1.0);
  const FbfParams p = classical_tseng_params(1.0, 0.1);
  const SolveReport r = solve(a, b, p, HVector{1.0}, 1e-10, 100);
  EXPECT_EQ(r.termination, Termination::converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.final_residual, 0.0);
}

TEST(Solve, RotationConvergesInPredictedIterationCount) {
  const MaxMonotoneOp a = zero_monotone(2);
  const ForwardOp b = rotation_generator();
  FbfParams p = classical_tseng_params(1.0, 0.1);
  p.lambda_const = 0.5;
  const double tol = 1e-8;
  const SolveReport r = solve(a, b, p, HVector{1.0, 0.0}, tol, 1000);
  ASSERT_EQ(r.termination, Termination::converged);
  // residual_n = 0.5 * rho^(n-1) with rho = sqrt(1 - l^2 + l^4)
  const double rho = std::sqrt(0.8125);
  const long predicted = 1 + static_cast<long>(std::ceil(std::log(tol / 0.5) / std::log(rho)));
  EXPECT_NEAR(static_cast<double>(r.iterations), static_cast<double>(predicted), 1.0);
  EXPECT_LE(r.final_residual, tol);
}

TEST(Solve, RotationNormRatiosMatchClosedForm) {
  for (double lam : {0.1, 0.3, 0.5}) {
    const MaxMonotoneOp a = zero_monotone(2);
    const ForwardOp b = rotation_generator();
    FbfParams p = classical_tseng_params(1.0, 0.05);
    p.lambda_const = lam;
    SolveOptions opts;
    opts.keep_iterates = true;
    const SolveReport r = solve(a, b, p, HVector{1.0, 0.0}, 1e-14, 60, opts);
    const double expected = std::sqrt(1.0 - lam * lam + std::pow(lam, 4));
    for (std::size_t k = 1; k < r.iterates.size(); ++k) {
      ASSERT_NEAR(norm(r.iterates[k]) / norm(r.iterates[k - 1]), expected, 1e-10);
    }
  }
}

TEST(Solve, BoxShiftAgainstBruteForceScan) {
  // brute-force oracle: scan [0,1] for 0 in N_[0,1](x) + x - 2
  double oracle = std::numeric_limits<double>::quiet_NaN();
  const double step = 1e-4;
  for (double x = 0.0; x <= 1.0 + 1e-12; x += step) {
    double dist;
    const double fwd = x - 2.0;
    if (x <= step / 2) {
      // N(0) = (-inf, 0], so N(0) + fwd reaches 0 only if fwd >= 0
      dist = fwd >= 0.0 ? 0.0 : -fwd;
    } else if (x >= 1.0 - step / 2) {
      // N(1) = [0, inf), so N(1) + fwd reaches 0 only if fwd <= 0
      dist = fwd <= 0.0 ? 0.0 : fwd;
    } else {
      dist = std::abs(fwd);
    }
    if (dist <= 1e-9) oracle = x;
  }
  ASSERT_NEAR(oracle, 1.0, 1e-9);

  const MaxMonotoneOp a = normal_cone(box_set(1, 0.0, 1.0));
  const ForwardOp b = linear_forward(Matrix::identity(1), HVector{-2.0}, 1.0);
  const FbfParams p = classical_tseng_params(1.0, 0.1);
  const SolveReport r = solve(a, b, p, HVector{0.0}, 1e-9, 2000);
  ASSERT_EQ(r.termination, Termination::converged);
  EXPECT_NEAR(r.final_p[0], oracle, 1e-6);
}

TEST(Solve, ZeroSetFixedPointStaysPut) {
  const MaxMonotoneOp a = normal_cone(box_set(1, 0.0, 1.0));
  const ForwardOp b = linear_forward(Matrix::identity(1), HVector{-2.0}, 1.0);
  FbfParams p;
  p.alpha1 = 0.02;
  p.alpha2 = 0.02;
  p.sigma = 0.05;
  p.lambda_const = 0.3;
  SolveOptions opts;
  opts.keep_iterates = true;
  const SolveReport r = solve(a, b, p, HVector{1.0}, 1e-300, 50, opts);
  for (const HVector& x : r.iterates) {
    ASSERT_NEAR(x[0], 1.0, 1e-12);
  }
}

TEST(Solve, EqualStartEnforced) {
  const MaxMonotoneOp a = zero_monotone(1);
  const ForwardOp b = zero_forward(1);
  const FbfParams p = plain_params(1.0);
  EXPECT_THROW(solve(a, b, p, HVector{0.0}, HVector{1.0}, 1e-8, 10), parameter_error);
}

TEST(Solve, DistinctStartRequiresZeroFirstInertia) {
  const MaxMonotoneOp a = identity_monotone(1);
  const ForwardOp b = zero_forward(1);
  FbfParams p = plain_params(1.0);
  p.equal_start = false;
  p.alpha1 = 0.02;
  p.alpha2 = 0.0;
  p.sigma = 0.05;
  // default ramp has alpha_{1,1} = 0, so distinct starts are accepted
  const SolveReport ok = solve(a, b, p, HVector{0.0}, HVector{1.0}, 1e-10, 100);
  EXPECT_EQ(ok.termination, Termination::converged);

  FbfParams bad = p;
  bad.alpha1_schedule = [](long) { return 0.02; };  // nonzero at n = 1
  const SolveReport r = solve(a, b, bad, HVector{0.0}, HVector{1.0}, 1e-10, 100);
  EXPECT_EQ(r.termination, Termination::parameter_violation);
  EXPECT_EQ(r.violation_index, 1);
}

TEST(Solve, LambdaScheduleViolationReportsOffendingIteration) {
  const MaxMonotoneOp a = zero_monotone(2);
  const ForwardOp b = rotation_generator();
  FbfParams p;
  p.sigma = 0.125;
  p.lambda_min = 1e-6;
  const double bound = p.step_bound(1.0);
  p.lambda_schedule = [bound](long n) { return n < 5 ? 0.9 * bound : 1.01 * bound; };
  const SolveReport r = solve(a, b, p, HVector{1.0, 0.0}, 1e-12, 100);
  EXPECT_EQ(r.termination, Termination::parameter_violation);
  EXPECT_EQ(r.violation_index, 5);
  EXPECT_NE(r.violation_message.find("exceeds the step bound"), std::string::npos);
  EXPECT_EQ(r.iterations, 4);
}

TEST(Solve, DecreasingInertiaScheduleRejectedUnlessRelaxed) {
  const MaxMonotoneOp a = identity_monotone(1);
  const ForwardOp b = zero_forward(1);
  FbfParams p = plain_params(1.0);
  p.alpha1 = 0.02;
  p.alpha2 = 0.02;
  p.sigma = 0.05;
  p.alpha1_schedule = [](long n) { return n <= 3 ? 0.02 : 0.01; };  // decreasing
  p.alpha2_schedule = [](long n) { return n <= 3 ? 0.0 : 0.01; };   // compensating
  const SolveReport strict = solve(a, b, p, HVector{4.0}, 1e-10, 100);
  EXPECT_EQ(strict.termination, Termination::parameter_violation);
  EXPECT_EQ(strict.violation_index, 4);

  FbfParams relaxed = p;
  relaxed.relaxed_sum_monotonicity = true;  // the sum stays at 0.02
  const SolveReport r = solve(a, b, relaxed, HVector{4.0}, 1e-10, 200);
  EXPECT_EQ(r.termination, Termination::converged);
}

TEST(Solve, PartialSumsAreNondecreasing) {
  const MaxMonotoneOp a = zero_monotone(2);
  const ForwardOp b = rotation_generator();
  FbfParams p = classical_tseng_params(1.0, 0.1);
  p.lambda_const = 0.5;
  const SolveReport r = solve(a, b, p, HVector{1.0, 0.0}, 1e-8, 1000);
  for (std::size_t i = 1; i < r.sq_step_partial_sums.size(); ++i) {
    ASSERT_GE(r.sq_step_partial_sums[i], r.sq_step_partial_sums[i - 1]);
    ASSERT_GE(r.sq_gap_partial_sums[i], r.sq_gap_partial_sums[i - 1]);
  }
}

TEST(InertialProximalPoint, HalvingIterates) {
  // A = d(0.5 |x|^2) has resolvent x / (1 + lambda)
  const MaxMonotoneOp a = identity_monotone(1);
  FbfParams p = plain_params(1.0);
  SolveOptions opts;
  opts.keep_iterates = true;
  const SolveReport r = inertial_proximal_point(a, p, HVector{8.0}, HVector{8.0}, 1e-12, 100, opts);
  ASSERT_EQ(r.termination, Termination::converged);
  ASSERT_GE(r.iterates.size(), 4u);
  EXPECT_EQ(r.iterates[0][0], 8.0);
  EXPECT_EQ(r.iterates[1][0], 4.0);
  EXPECT_EQ(r.iterates[2][0], 2.0);
  EXPECT_EQ(r.iterates[3][0], 1.0);
}

TEST(InertialProximalPoint, ProjectionDynamics) {
  const MaxMonotoneOp a = normal_cone(box_set(1, 2.0, 3.0));
  FbfParams p = plain_params(1.0);
  SolveOptions opts;
  opts.keep_iterates = true;
  const SolveReport r = inertial_proximal_point(a, p, HVector{0.0}, HVector{0.0}, 1e-12, 10, opts);
  ASSERT_EQ(r.termination, Termination::converged);
  // hand-traced: 0 -> P(0) = 2, then stationary
  EXPECT_EQ(r.iterates[0][0], 0.0);
  EXPECT_EQ(r.iterates[1][0], 2.0);
  EXPECT_EQ(r.final_p[0], 2.0);
  EXPECT_EQ(r.iterations, 2);
}

TEST(InertialProximalPoint, MatchesSolveWithZeroForwardBitwise) {
  const MaxMonotoneOp a = subdifferential_op(prox_l1(0.3), 3);
  FbfParams p = plain_params(0.7);
  p.alpha1 = 0.03;
  p.alpha2 = 0.01;
  p.sigma = 0.05;
  const HVector x1{2.0, -1.5, 0.25};
  const SolveReport r1 = inertial_proximal_point(a, p, x1, x1, 1e-10, 200);
  const SolveReport r2 = solve(a, zero_forward(3), p, x1, x1, 1e-10, 200);
  EXPECT_EQ(r1.residual_history, r2.residual_history);
  EXPECT_EQ(r1.final_x, r2.final_x);
  EXPECT_EQ(r1.final_p, r2.final_p);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(SummabilityDiagnostics, GeometricDecayIsConsistent) {
  SolveReport r;
  double ssum = 0.0, gsum = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const double stepv = std::pow(0.9, n);
    ssum += stepv * stepv;
    gsum += stepv * stepv;
    r.sq_step_partial_sums.push_back(ssum);
    r.sq_gap_partial_sums.push_back(gsum);
  }
  const SummabilitySummary s = summability_diagnostics(r);
  // geometric series arithmetic: tail fraction ~ 0.81^100
  const double q = 0.81;
  const double expected = (std::pow(q, 101) * (1 - std::pow(q, 100)) / (1 - q)) /
                          (q * (1 - std::pow(q, 200)) / (1 - q));
  EXPECT_NEAR(s.step_last_half_fraction, expected, 1e-12);
  EXPECT_NEAR(s.step_last_half_fraction, 7.1e-10, 2e-10);
  EXPECT_TRUE(s.consistent);
}

TEST(SummabilityDiagnostics, ConstantStepsFlaggedInconsistent) {
  SolveReport r;
  for (int n = 1; n <= 200; ++n) {
    r.sq_step_partial_sums.push_back(static_cast<double>(n));
    r.sq_gap_partial_sums.push_back(static_cast<double>(n));
  }
  const SummabilitySummary s = summability_diagnostics(r);
  EXPECT_NEAR(s.step_last_half_fraction, 0.5, 1e-12);
  EXPECT_FALSE(s.consistent);
}

TEST(SummabilityDiagnostics, SingleIterationTriviallyConsistent) {
  SolveReport r;
  r.sq_step_partial_sums.push_back(1.0);
  r.sq_gap_partial_sums.push_back(1.0);
  const SummabilitySummary s = summability_diagnostics(r);
  EXPECT_EQ(s.step_last_half_fraction, 0.0);
  EXPECT_TRUE(s.consistent);
}

TEST(Solve, DeterministicGivenIdenticalInputs) {
  const MaxMonotoneOp a = subdifferential_op(prox_l1(0.5), 2);
  const ForwardOp b = rotation_generator();
  FbfParams p;
  p.alpha1 = 0.01;
  p.alpha2 = 0.01;
  p.sigma = 0.05;
  const SolveReport r1 = solve(a, b, p, HVector{1.0, 2.0}, 1e-10, 500);
  const SolveReport r2 = solve(a, b, p, HVector{1.0, 2.0}, 1e-10, 500);
  EXPECT_EQ(r1.residual_history, r2.residual_history);
  EXPECT_EQ(r1.final_x, r2.final_x);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pdcov/penalty.hpp"

using namespace pdcov;

namespace {

PenaltySpec random_spec(std::mt19937_64& rng, PenaltyFamily family) {
  std::uniform_real_distribution<double> lam(0.05, 2.0), a(2.1, 6.0), q(0.1, 0.9);
  return {family, lam(rng), a(rng), q(rng)};
}

constexpr PenaltyFamily kFamilies[] = {PenaltyFamily::Hard, PenaltyFamily::Soft, PenaltyFamily::Scad,
                                       PenaltyFamily::Lq};

}  // namespace

TEST_SUITE("penalty") {
  TEST_CASE("family names round trip") {
    for (PenaltyFamily f : kFamilies) CHECK(parse_penalty_family(to_string(f)) == f);
    CHECK_THROWS_AS(parse_penalty_family("mcp"), Error);
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS(PenaltySpec::soft(-1.0).validate(), Error);
    CHECK_THROWS_AS(PenaltySpec::scad(1.0, 2.0).validate(), Error);
    CHECK_THROWS_AS(PenaltySpec::lq(1.0, 1.0).validate(), Error);
    CHECK_THROWS_AS(PenaltySpec::lq(1.0, 0.0).validate(), Error);
    CHECK_NOTHROW(PenaltySpec::scad(1.0).validate());
    CHECK(PenaltySpec::scad(1.0).scad_a == 3.7);
    CHECK(PenaltySpec::lq(1.0).q == 0.5);
    CHECK(PenaltySpec::hard(1.0).with_lambda(3.0).lambda == 3.0);
  }

  TEST_CASE("penalty_value examples") {
    CHECK(penalty_value(PenaltySpec::soft(1.0), -3.0) == 3.0);
    CHECK(penalty_value(PenaltySpec::scad(1.0, 3.7), 10.0) == doctest::Approx(2.35));
    CHECK(penalty_value(PenaltySpec::hard(2.0), 0.0) == 0.0);
    CHECK(penalty_value(PenaltySpec::hard(2.0), 0.3) == doctest::Approx(2.0));
  }

  TEST_CASE("penalty_value is even, zero at the origin and continuous for scad") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> xs(-4.0, 4.0);
    for (PenaltyFamily f : kFamilies) {
      const PenaltySpec spec = random_spec(rng, f);
      CHECK(penalty_value(spec, 0.0) == 0.0);
      for (int k = 0; k < 50; ++k) {
        const double x = xs(rng);
        CHECK(penalty_value(spec, x) == penalty_value(spec, -x));
        CHECK(penalty_value(spec, x) >= 0.0);
      }
    }
    const PenaltySpec scad = PenaltySpec::scad(0.7, 3.2);
    for (double knot : {0.7, 0.7 * 3.2}) {
      CHECK(penalty_value(scad, knot - 1e-9) == doctest::Approx(penalty_value(scad, knot + 1e-9)).epsilon(1e-7));
    }
  }

  TEST_CASE("threshold examples") {
    CHECK(threshold(PenaltySpec::hard(1.0), 0.5) == 0.0);
    CHECK(threshold(PenaltySpec::hard(1.0), 1.5) == 1.5);
    CHECK(threshold(PenaltySpec::hard(1.0), 1.0) == 0.0);
    CHECK(threshold(PenaltySpec::soft(1.0), -2.5) == -1.5);
    CHECK(threshold(PenaltySpec::scad(1.0, 3.7), 3.0) == doctest::Approx(44.0 / 17.0).epsilon(1e-14));
    CHECK(threshold(PenaltySpec::lq(1.0, 0.5), 0.9) == 0.0);
    CHECK(threshold(PenaltySpec::lq(1.0, 0.5), 1.0) == 0.0);

    const double beta = 2.0 / 3.0;
    const double alpha = (1.0 / 3.0) * std::sqrt(2.0 / 3.0) / 0.5;
    CHECK(lq_alpha(1.0, 0.5) == doctest::Approx(alpha).epsilon(1e-14));
    CHECK(lq_beta(1.0, 0.5) == doctest::Approx(beta).epsilon(1e-14));
    const double want = oracle::lq_bisection(alpha, 0.5, 2.0, beta);
    CHECK(want == doctest::Approx(1.797).epsilon(1e-3));
    CHECK(std::abs(threshold(PenaltySpec::lq(1.0, 0.5), 2.0) - want) < 1e-10);
    CHECK(std::abs(threshold(PenaltySpec::lq(1.0, 0.5), -2.0) + want) < 1e-10);
  }

  TEST_CASE("lambda = 0 is the identity map") {
    for (PenaltyFamily f : kFamilies) {
      const PenaltySpec spec{f, 0.0, 3.7, 0.5};
      for (double x : {-2.0, -0.1, 0.0, 0.3, 5.0}) CHECK(threshold(spec, x) == x);
    }
  }

  TEST_CASE("lq alpha scaling puts the 0 / beta tie exactly at |x| = lambda") {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 50; ++k) {
      const PenaltySpec spec = random_spec(rng, PenaltyFamily::Lq);
      const double lam = spec.lambda, beta = lq_beta(lam, spec.q);
      const double at_zero = 0.5 * lam * lam;
      const double at_beta = 0.5 * (beta - lam) * (beta - lam) + penalty_value(spec, beta);
      CHECK(std::abs(at_zero - at_beta) < 1e-12 * std::max(1.0, at_zero));
    }
  }

  TEST_CASE("threshold matches the grid prox oracle") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> xs(-4.0, 4.0);
    for (PenaltyFamily f : kFamilies) {
      CAPTURE(to_string(f));
      for (int k = 0; k < 100; ++k) {
        const PenaltySpec spec = random_spec(rng, f);
        const double x = xs(rng);
        const oracle::ScalarMin ref = oracle::prox_grid(spec, x);
        const double t = threshold(spec, x);
        const double value = 0.5 * (t - x) * (t - x) + penalty_value(spec, t);
        CAPTURE(x);
        CAPTURE(spec.lambda);
        CHECK(std::abs(t - ref.z) < 1e-3);
        CHECK(value <= ref.value + 1e-6);
      }
    }
  }

  TEST_CASE("weighted_threshold matches the weighted grid prox oracle") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> xs(-4.0, 4.0), log_w(std::log(0.2), std::log(30.0));
    for (PenaltyFamily f : kFamilies) {
      CAPTURE(to_string(f));
      for (int k = 0; k < 100; ++k) {
        const PenaltySpec spec = random_spec(rng, f);
        const double x = xs(rng), w = std::exp(log_w(rng));
        const oracle::ScalarMin ref = oracle::prox_grid(spec, x, w);
        const double t = weighted_threshold(spec, x, w);
        const double value = 0.5 * w * (t - x) * (t - x) + penalty_value(spec, t);
        CAPTURE(x);
        CAPTURE(w);
        CHECK(std::abs(t - ref.z) < 1e-3);
        CHECK(value <= ref.value + 1e-6);
      }
    }
    CHECK(weighted_threshold(PenaltySpec::soft(1.0), 2.0, 2.0) == 1.5);
    CHECK_THROWS_AS(weighted_threshold(PenaltySpec::soft(1.0), 2.0, 0.0), Error);
  }

  TEST_CASE("shrinkage, sign consistency and oddness") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> xs(-5.0, 5.0);
    for (PenaltyFamily f : kFamilies) {
      for (int k = 0; k < 300; ++k) {
        const PenaltySpec spec = random_spec(rng, f);
        const double x = xs(rng);
        const double t = threshold(spec, x);
        CHECK(std::abs(t) <= std::abs(x));
        CHECK((t == 0.0 || std::signbit(t) == std::signbit(x)));
        CHECK(threshold(spec, -x) == -t);
        if (f != PenaltyFamily::Scad && std::abs(x) <= spec.lambda) CHECK(t == 0.0);
        if (f != PenaltyFamily::Hard) CHECK(std::abs(t - x) <= spec.lambda + 1e-12);
        if (f == PenaltyFamily::Hard && std::abs(x) > spec.lambda) CHECK(t == x);
        if (f == PenaltyFamily::Scad && std::abs(x) > spec.scad_a * spec.lambda) CHECK(t == x);
      }
    }
  }

  TEST_CASE("threshold is nondecreasing beyond lambda") {
    std::mt19937_64 rng(26);
    for (PenaltyFamily f : kFamilies) {
      const PenaltySpec spec = random_spec(rng, f);
      double prev = 0.0;
      for (double x = spec.lambda * 1.0001; x < 6.0; x += 1e-3) {
        const double t = threshold(spec, x);
        CHECK(t >= prev);
        prev = t;
      }
    }
  }

  TEST_CASE("lq_newton") {
    const double alpha = lq_alpha(1.0, 0.5), beta = lq_beta(1.0, 0.5);
    const double eta = lq_newton(alpha, 0.5, 2.0, beta);
    const double h = alpha * 0.5 * std::pow(eta, -0.5) + eta - 2.0;
    CHECK(std::abs(h) < 1e-12);
    CHECK(eta > beta);
    CHECK(eta <= 2.0);
    CHECK(lq_newton(1e-14, 0.5, 3.0, 1e-3) == doctest::Approx(3.0).epsilon(1e-10));

    std::mt19937_64 rng(27);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      const PenaltySpec spec = random_spec(rng, PenaltyFamily::Lq);
      const double x = spec.lambda * (1.0 + 3.0 * u(rng)) + 1e-9;
      const double a = lq_alpha(spec.lambda, spec.q), b = lq_beta(spec.lambda, spec.q);
      const double r = lq_newton(a, spec.q, x, b);
      CHECK(std::abs(a * spec.q * std::pow(r, spec.q - 1.0) + r - x) < 1e-12 * std::max(1.0, x));
      CHECK(std::abs(r - oracle::lq_bisection(a, spec.q, x, b)) < 1e-9);
    }
    // No root between beta and |x| when |x| < lambda.
    CHECK_THROWS_AS(lq_newton(alpha, 0.5, 0.5, beta), Error);
  }

  TEST_CASE("apply_offdiag_threshold") {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.3, 0.3, 1.0;
    const SymMat s(m);
    CHECK(apply_offdiag_threshold(s, PenaltySpec::hard(0.5)).mat() == Eigen::Matrix2d::Identity());
    CHECK(apply_offdiag_threshold(s, PenaltySpec::soft(0.0)).mat() == s.mat());
    for (PenaltyFamily f : kFamilies) {
      const PenaltySpec spec{f, 0.4, 3.7, 0.5};
      CHECK(apply_offdiag_threshold(SymMat::identity(4), spec).mat() == Eigen::MatrixXd::Identity(4, 4));
    }
    Eigen::MatrixXd big(3, 3);
    big << 5.0, 2.0, -0.1, 2.0, 4.0, 0.7, -0.1, 0.7, 3.0;
    const SymMat out = apply_offdiag_threshold(SymMat(big), PenaltySpec::soft(0.5));
    CHECK(out(0, 0) == 5.0);
    CHECK(out(0, 1) == 1.5);
    CHECK(out(0, 2) == 0.0);
    CHECK(out(2, 1) == doctest::Approx(0.2));
  }
}

#include "reactopt/relaxed.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "support/oracles.hpp"

using namespace reactopt;

namespace {

ModelParams fig_a_params() {
  ModelParams p;
  p.k11 = 1.0;
  p.k22 = 1.0;
  p.k12 = 0.1;
  p.k21 = 0.1;
  p.k_s = 1.0;
  return p;
}

// Brute-force maximization of the density over a chi grid.
double grid_max(const ModelParams& params, const RelaxedPoint& p, int points) {
  double best = -1e300;
  for (int i = 0; i < points; ++i) {
    const double chi = static_cast<double>(i) / (points - 1);
    best = std::max(best, W_pointwise(params, p, chi));
  }
  return best;
}

ModelParams random_params(std::mt19937& rng) {
  ModelParams p;
  p.k11 = oracles::uniform(rng, 0.05, 10.0);
  p.k22 = oracles::uniform(rng, 0.05, 10.0);
  p.k12 = oracles::uniform(rng, 0.01, 1.0);
  p.k21 = oracles::uniform(rng, 0.01, 1.0);
  p.k_s = oracles::uniform(rng, 0.1, 10.0);
  return p;
}

RelaxedPoint random_point(std::mt19937& rng) {
  return RelaxedPoint{oracles::uniform(rng, -1.0, 1.0),
                      oracles::uniform(rng, -1.0, 1.0),
                      {oracles::uniform(rng, -2.0, 2.0), oracles::uniform(rng, -2.0, 2.0)},
                      {oracles::uniform(rng, -2.0, 2.0), oracles::uniform(rng, -2.0, 2.0)},
                      oracles::uniform(rng, -2.0, 2.0)};
}

}  // namespace

TEST_CASE("W_pointwise: pure-phase limits and the pure reaction term") {
  const ModelParams p = fig_a_params();
  RelaxedPoint q{1.0, 0.0, {1.5, 0.0}, {0.0, 0.7}, 0.0};
  const double x1 = dot(q.xi1, q.xi1), x2 = dot(q.xi2, q.xi2);
  CHECK(W_pointwise(p, q, 0.0) ==
        doctest::Approx(0.5 * (p.k12 * x1 + p.k22 * x2)).epsilon(1e-14));
  q.lambda = 0.3;
  CHECK(W_pointwise(p, q, 1.0) ==
        doctest::Approx(0.5 * (p.k11 * x1 + p.k21 * x2) - 0.3).epsilon(1e-14));

  RelaxedPoint pure{2.0, 1.0, {}, {}, 0.0};  // k_v = k_s (v1-v2)^2 = 1
  CHECK(W_pointwise(p, pure, 0.5) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("chi_star: symmetric point and the reference gradient") {
  const ModelParams p = fig_a_params();
  RelaxedPoint q{1.0, 0.0, {}, {}, 0.0};
  CHECK(chi_star(p, q) == doctest::Approx(0.5).epsilon(1e-14));

  q.xi1 = {1.0, 0.0};
  CHECK(chi_star(p, q) == doctest::Approx(0.95).epsilon(1e-14));
  // The grid oracle confirms the interior maximizer.
  const double best = grid_max(p, q, 20001);
  CHECK(W_pointwise(p, q, chi_star(p, q)) >= best - 1e-12);
}

TEST_CASE("chi_star: negative stationary point falls in R0") {
  const ModelParams p = fig_a_params();
  const RelaxedPoint q{1.0, 0.0, {}, {}, 1.0};  // lambda = 1, k_v = 1
  CHECK(chi_star(p, q) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(region_classify(p, q) == Region::R0);
  // Boundary maximum at chi = 0 per the grid oracle.
  CHECK(W_pointwise(p, q, 0.0) == doctest::Approx(grid_max(p, q, 20001)));
}

TEST_CASE("chi_star: degenerate reaction is an error") {
  const ModelParams p = fig_a_params();
  const RelaxedPoint q{0.7, 0.7, {1.0, 0.0}, {}, 0.0};
  CHECK_THROWS_AS(chi_star(p, q), DegenerateReaction);
}

TEST_CASE("region_classify: strict interior, closed R1, k_v = 0 fallback") {
  const ModelParams p = fig_a_params();
  CHECK(region_classify(p, {1.0, 0.0, {}, {}, 0.0}) == Region::R);

  // S - 2 lambda = k_v exactly: |xi1|^2 = k_v / dk1 with dk1 = 0.9.
  RelaxedPoint boundary{1.0, 0.0, {std::sqrt(1.0 / 0.9), 0.0}, {}, 0.0};
  const double s = gradient_contrast(p, boundary);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  boundary.xi1.x = std::sqrt(1.0 / 0.9) * (1.0 + 1e-12);
  CHECK(region_classify(p, boundary) == Region::R1);

  CHECK(region_classify(p, {1.0, 0.0, {}, {}, 1.0}) == Region::R0);  // fig 2(c)

  const RelaxedPoint degenerate{0.5, 0.5, {1.0, 0.0}, {}, 0.0};
  CHECK(region_classify(p, degenerate) == Region::R1);  // S > 0, k_v = 0
  const RelaxedPoint degenerate_down{0.5, 0.5, {}, {1.0, 0.0}, 0.0};
  CHECK(region_classify(p, degenerate_down) == Region::R0);
}

TEST_CASE("W_bar: reference values") {
  const ModelParams p = fig_a_params();
  const WbarValue center = W_bar(p, {1.0, 0.0, {}, {}, 0.0});
  CHECK(center.region == Region::R);
  CHECK(center.value == doctest::Approx(1.0 / 8.0).epsilon(1e-14));

  // Large positive multiplier drives the maximizer to chi = 0; the
  // grid oracle agrees (W(0) = 0 beats W(1) = -10).
  const WbarValue forced0 = W_bar(p, {1.0, 0.0, {}, {}, 10.0});
  CHECK(forced0.region == Region::R0);
  CHECK(forced0.value == 0.0);
  CHECK(grid_max(p, {1.0, 0.0, {}, {}, 10.0}, 20001) == 0.0);

  // Large negative multiplier forces chi = 1.
  const WbarValue forced1 = W_bar(p, {1.0, 0.0, {}, {}, -10.0});
  CHECK(forced1.region == Region::R1);
  CHECK(forced1.value == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("W_bar: envelope over random points") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const ModelParams p = random_params(rng);
    const RelaxedPoint q = random_point(rng);
    const WbarValue w = W_bar(p, q);
    const double kv = reaction_curvature(p, q);
    const double scale = std::max({1.0, std::abs(w.value), kv});

    for (int i = 0; i < 100; ++i) {
      const double chi = oracles::uniform(rng, 0.0, 1.0);
      CHECK(w.value >= W_pointwise(p, q, chi) - 1e-12 * scale);
    }
    // Equality at the classified maximizer, same arithmetic path.
    double chosen = 0.0;
    if (w.region == Region::R1) chosen = 1.0;
    if (w.region == Region::R) chosen = chi_star(p, q);
    CHECK(w.value == W_pointwise(p, q, chosen));

    // Brute-force grid maximum within the quadrature gap.
    const double best = grid_max(p, q, 10000);
    CHECK(w.value >= best - 1e-12 * scale);
    CHECK(best >= w.value - 1e-8 * scale);
  }
}

TEST_CASE("W_bar: closed form agrees in the mixed region") {
  std::mt19937 rng(77);
  int mixed = 0;
  while (mixed < 200) {
    const ModelParams p = random_params(rng);
    const RelaxedPoint q = random_point(rng);
    if (reaction_curvature(p, q) < 1e-8) continue;
    if (region_classify(p, q) != Region::R) continue;
    ++mixed;
    const WbarValue w = W_bar(p, q);
    const double closed = W_bar_closed_form(p, q);
    CHECK(closed ==
          doctest::Approx(w.value).epsilon(1e-11).scale(std::max(1.0, std::abs(w.value))));
  }
}

TEST_CASE("W_bar: continuous across the region boundaries") {
  const ModelParams p = fig_a_params();
  // R/R1 boundary at |xi1|^2 = k_v/dk1; R/R0 at dk2|xi2|^2 = -k_v.
  const double x1 = std::sqrt(1.0 / 0.9);
  const double x2 = std::sqrt(1.0 / 0.9);
  for (const double eps : {-1e-9, 0.0, 1e-9}) {
    RelaxedPoint up{1.0, 0.0, {x1 + eps, 0.0}, {}, 0.0};
    const double interior = W_pointwise(p, up, std::clamp(chi_star(p, up), 0.0, 1.0));
    const double edge = W_pointwise(p, up, 1.0);
    CHECK(std::abs(interior - edge) < 1e-8);

    RelaxedPoint down{1.0, 0.0, {}, {x2 + eps, 0.0}, 0.0};
    const double interior0 =
        W_pointwise(p, down, std::clamp(chi_star(p, down), 0.0, 1.0));
    const double edge0 = W_pointwise(p, down, 0.0);
    CHECK(std::abs(interior0 - edge0) < 1e-8);
  }
}

TEST_CASE("W concave in chi; clamped stationary point is the argmax") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams p = random_params(rng);
    const RelaxedPoint q = random_point(rng);
    const double a = oracles::uniform(rng, 0.0, 1.0);
    const double b = oracles::uniform(rng, 0.0, 1.0);
    const double lhs = W_pointwise(p, q, 0.5 * (a + b));
    const double rhs = 0.5 * (W_pointwise(p, q, a) + W_pointwise(p, q, b));
    CHECK(lhs >= rhs - 1e-12 * std::max(1.0, std::abs(lhs)));

    const double kv = reaction_curvature(p, q);
    if (kv > 1e-8) {
      const double clamped = std::clamp(chi_star(p, q), 0.0, 1.0);
      // Fine grid argmax sits within one grid cell of the clamp.
      const int points = 100001;
      double best = -1e300;
      int best_i = 0;
      for (int i = 0; i < points; ++i) {
        const double chi = static_cast<double>(i) / (points - 1);
        const double w = W_pointwise(p, q, chi);
        if (w > best) {
          best = w;
          best_i = i;
        }
      }
      CHECK(std::abs(static_cast<double>(best_i) / (points - 1) - clamped) <=
            1.0 / (points - 1) + 1e-12);
    }
  }
}

TEST_CASE("verify_identities: random samples and the reference case") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const ModelParams p = random_params(rng);
    const RelaxedPoint q = random_point(rng);
    if (reaction_curvature(p, q) < 1e-10) continue;
    const auto res = verify_identities(p, q);
    const double scale = std::max(
        {1.0, std::abs(W_pointwise(p, q, chi_star(p, q))), reaction_curvature(p, q)});
    for (double r : res) CHECK(std::abs(r) <= 1e-12 * scale);
  }

  // k_v = 2, xi = 0, lambda = 0: chi* = 1/2 and
  // W(chi*) - W(1) = (k_v/2)(chi* - 1)^2 = 1/4.
  ModelParams p = fig_a_params();
  p.k_s = 2.0;
  const RelaxedPoint q{1.0, 0.0, {}, {}, 0.0};
  CHECK(chi_star(p, q) == doctest::Approx(0.5));
  const double lhs = W_pointwise(p, q, chi_star(p, q)) - W_pointwise(p, q, 1.0);
  CHECK(lhs == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(W_pointwise(p, q, 1.0) - W_pointwise(p, q, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(verify_identities(p, {0.5, 0.5, {}, {}, 0.0}),
                  DegenerateReaction);
}

TEST_CASE("wbar_map: mixed band on the diagonal, pure phases off it") {
  const ModelParams p = fig_a_params();
  const WbarGrid a = wbar_map(p, 1.0, 0.0, 0.0, {41, 2.0});
  const int n = a.grid_points;
  for (int i = 0; i < n; ++i) {
    CHECK(a.region[i * n + i] == Region::R);  // xi1 = xi2
  }
  CHECK(a.region[0 * n + (n - 1)] == Region::R1);  // xi1 = 2, xi2 = 0
  CHECK(a.region[(n - 1) * n + 0] == Region::R0);  // xi1 = 0, xi2 = 2

  // (v1 - v2)^2 = 10 widens the band at every xi2 slice.
  const WbarGrid d = wbar_map(p, std::sqrt(10.0), 0.0, 0.0, {41, 2.0});
  int total_a = 0, total_d = 0;
  for (int j = 0; j < n; ++j) {
    int row_a = 0, row_d = 0;
    for (int i = 0; i < n; ++i) {
      row_a += a.region[j * n + i] == Region::R ? 1 : 0;
      row_d += d.region[j * n + i] == Region::R ? 1 : 0;
    }
    CHECK(row_d >= row_a);
    total_a += row_a;
    total_d += row_d;
  }
  CHECK(total_d > total_a);
}

TEST_CASE("wbar_map: R/R1 boundary location on the xi2 = 0 slice") {
  const ModelParams p = fig_a_params();  // dk1 = 0.9, k_v = 1
  const double boundary = std::sqrt(1.0 / 0.9);
  for (const double frac : {0.9, 0.99}) {
    const RelaxedPoint below{1.0, 0.0, {boundary * frac, 0.0}, {}, 0.0};
    CHECK(region_classify(p, below) == Region::R);
  }
  for (const double frac : {1.01, 1.1}) {
    const RelaxedPoint above{1.0, 0.0, {boundary * frac, 0.0}, {}, 0.0};
    CHECK(region_classify(p, above) == Region::R1);
  }
}

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "blab/error.hpp"
#include "blab/geometry.hpp"
#include "doctest.h"

using namespace blab;

namespace {

// brute midpoint rule for m(B(c, r)) in 2-D, independent of the library quadrature
double disk_measure_brute(double lambda, double cy, double r, int n) {
  double s = 0.0;
  const double h = 2.0 * r / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = -r + (i + 0.5) * h, v = -r + (j + 0.5) * h;
      if (u * u + v * v < r * r && cy + v > 0) s += std::pow(cy + v, 2.0 * lambda);
    }
  return s * h * h;
}

}  // namespace

TEST_CASE("cube measure closed forms") {
  CHECK(cube_measure(SpaceParams(0, 0.5), Box({0.0}, {1.0})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cube_measure(SpaceParams(0, 1.0), Box({1.0}, {2.0})) == doctest::Approx(7.0 / 3).epsilon(1e-15));
  CHECK(cube_measure(SpaceParams(1, 1.0), Box({0.0, 1.0}, {1.0, 3.0})) == doctest::Approx(26.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(Box({1.0}, {0.0}), Error);
}

TEST_CASE("cube measure is additive over children") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int n : {0, 1, 2})
    for (double lambda : {0.3, 0.5, 1.0, 2.0}) {
      const SpaceParams p(n, lambda);
      for (int k : {0, 2, 5}) {
        std::vector<double> x(n + 1);
        for (auto& v : x) v = u(rng);
        const DyadicCube q = DyadicCube::containing(0, std::vector<int>(n + 1, 0), x, k);
        double sum = 0.0;
        for (const auto& c : q.children()) sum += cube_measure(p, c.box());
        CHECK(sum == doctest::Approx(cube_measure(p, q.box())).epsilon(1e-12));
      }
    }
}

TEST_CASE("ball measure") {
  const SpaceParams p(0, 1.0);
  const double c3[] = {3.0}, c1[] = {1.0};
  CHECK(ball_measure(p, c3, 1.0) == doctest::Approx(56.0 / 3).epsilon(1e-14));
  CHECK(ball_measure(p, c1, 2.0) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK_THROWS_AS(ball_measure(p, c1, 0.0), Error);

  // disk of radius 1/2 around (0, 1): int (1 + v)^2 = pi r^2 + pi r^4 / 4
  const SpaceParams q(1, 1.0);
  const double c[] = {0.0, 1.0};
  const double r = 0.5, exact = std::numbers::pi * r * r + std::numbers::pi * std::pow(r, 4) / 4.0;
  CHECK(ball_measure(q, c, r) == doctest::Approx(exact).epsilon(1e-10));

  // disks cut by the boundary against a brute midpoint sum
  for (double lambda : {0.3, 1.0})
    for (double cy : {0.2, 1.0, 1.3}) {
      const SpaceParams s(1, lambda);
      const double x[] = {0.0, cy};
      CHECK(ball_measure(s, x, 1.0) == doctest::Approx(disk_measure_brute(lambda, cy, 1.0, 3000)).epsilon(2e-3));
    }
}

TEST_CASE("ball measure is comparable to the two-term model") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lx(-3.0, 2.0);
  for (int n : {0, 1})
    for (double lambda : {0.3, 1.0}) {
      const SpaceParams p(n, lambda);
      double lo = 1e300, hi = 0.0;
      for (int i = 0; i < 300; ++i) {
        std::vector<double> x(n + 1, 0.5);
        x[n] = std::pow(10.0, lx(rng));
        const double r = std::pow(10.0, lx(rng));
        const double ratio = ball_measure(p, x, r) / ball_measure_model(p, x, r);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      CHECK(lo > 0.1);
      CHECK(hi < 10.0);
    }
}

TEST_CASE("doubling ratio") {
  const SpaceParams p(0, 1.0);
  const double x10[] = {10.0}, x1[] = {1.0};
  CHECK(doubling_ratio(p, x10, 0.01) == doctest::Approx(2.0).epsilon(1e-3));
  // both balls reach the boundary: (201/101)^3
  CHECK(doubling_ratio(p, x1, 100.0) == doctest::Approx(std::pow(201.0 / 101.0, 3)).epsilon(1e-10));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lx(-2.0, 2.0);
  for (int n : {0, 1})
    for (double lambda : {0.3, 2.0}) {
      const SpaceParams s(n, lambda);
      for (int i = 0; i < 50; ++i) {
        std::vector<double> x(n + 1, 0.0);
        x[n] = std::pow(10.0, lx(rng));
        const double d = doubling_ratio(s, x, std::pow(10.0, lx(rng)));
        // the cut-off part of the larger ball carries little mass, so 2^{n+1} is not a lower bound
        CHECK(d > 1.0);
        CHECK(d <= std::pow(2.0, n + 1 + 2 * lambda) * (1 + 1e-8));
      }
    }
}

TEST_CASE("dyadic cubes") {
  const SpaceParams p(0, 0.5);
  const auto sys = build_systems(p, 3, 0.5, 0, 3, Box({0.0}, {1.0}));
  const auto k1 = sys.cubes(0, 1);
  REQUIRE(k1.size() == 2);
  CHECK(k1[0].box() == Box({0.0}, {0.5}));
  CHECK(k1[1].box() == Box({0.5}, {1.0}));

  const double x[] = {0.3};
  CHECK(sys.containing_cube(0, x, 1).box() == Box({0.0}, {0.5}));
  CHECK(sys.containing_cube(0, x, 2).box() == Box({0.25}, {0.5}));
  const double edge[] = {0.5};
  CHECK(sys.containing_cube(0, edge, 1).box().lo[0] == 0.5);
  const double outside[] = {5.0};
  CHECK_THROWS_AS(sys.containing_cube(0, outside, 1), Error);

  // nesting and parents across all systems
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SpaceParams q(1, 1.0);
  const auto sys2 = build_systems(q, 9, 0.5, 0, 6, Box({0.0, 0.0}, {1.0, 1.0}));
  for (int i = 0; i < 200; ++i) {
    const double y[] = {u(rng), u(rng)};
    const int nu = i % 9;
    for (int k = 0; k < 6; ++k) {
      const auto a = sys2.containing_cube(nu, y, k), b = sys2.containing_cube(nu, y, k + 1);
      CHECK(a.contains(y));
      CHECK(b.parent() == a);
      CHECK(a.is_ancestor_of(b));
      for (int j = 0; j < 2; ++j) {
        CHECK(b.box().lo[j] >= a.box().lo[j]);
        CHECK(b.box().hi[j] <= a.box().hi[j]);
      }
    }
  }
}

TEST_CASE("cubes of a generation tile the window") {
  const SpaceParams p(1, 1.0);
  const auto sys = build_systems(p, 9, 0.5, 0, 4, Box({0.0, 0.0}, {1.0, 1.0}));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int nu : {0, 4, 8}) {
    const auto cubes = sys.cubes(nu, 3);
    for (int i = 0; i < 500; ++i) {
      const double y[] = {u(rng), u(rng)};
      int hits = 0;
      for (const auto& c : cubes) hits += c.contains(y);
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("adjacent systems contain small balls well") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.2, 3.0), t(0.0, 1.0);
  for (int n : {0, 1}) {
    const SpaceParams p(n, 1.0);
    int kappa = n == 0 ? 3 : 9;
    const auto sys = build_systems(p, kappa, 0.5, 0, 8, Box(std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 4.0)));
    int found = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
      std::vector<double> x(n + 1);
      for (auto& v : x) v = u(rng);
      const int k = 1 + static_cast<int>(t(rng) * 5);
      const double r = std::ldexp(1.0, -k - 3) * (1.0 + t(rng));
      const auto q = sys.well_containing_cube(x, r);
      if (!q) continue;
      ++found;
      double far = 0.0;
      for (int j = 0; j <= n; ++j) {
        CHECK(q->box().lo[j] <= std::max(0.0, x[j] - r));
        CHECK(q->box().hi[j] >= x[j] + r);
        far += std::pow(std::max(x[j] - q->box().lo[j], q->box().hi[j] - x[j]), 2);
      }
      CHECK(std::sqrt(far) <= sys.adjacency_constant() * r);
    }
    CHECK(found == trials);
  }
}

TEST_CASE("parent to child measure ratio is bounded") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int n : {0, 1})
    for (double lambda : {0.3, 1.0, 2.0}) {
      const SpaceParams p(n, lambda);
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        std::vector<double> x(n + 1);
        for (auto& v : x) v = u(rng);
        const auto q = DyadicCube::containing(0, std::vector<int>(n + 1, 0), x, 1 + i % 8);
        for (const auto& c : q.children()) worst = std::max(worst, cube_measure(p, q.box()) / cube_measure(p, c.box()));
      }
      // at the boundary the bottom child carries 2^{-(n+1+2 lambda)} of the parent
      CHECK(worst <= std::pow(2.0, n + 1 + 2 * lambda) * (1 + 1e-12));
    }
}

TEST_CASE("whitney decomposition") {
  for (int n : {0, 1}) {
    const SpaceParams p(n, 1.0);
    const DyadicCube w = DyadicCube::containing(0, std::vector<int>(n + 1, 0), std::vector<double>(n + 1, 0.5), 0);
    const int depth = n == 0 ? 6 : 3;
    const auto boxes = whitney_decompose(p, w, depth);
    const auto k = whitney_constants(n);
    REQUIRE(!boxes.empty());
    for (const auto& b : boxes) {
      CHECK(b.q.side() == b.q_hat.side());
      CHECK(b.distance_to_diagonal() >= k.c1 * b.side() * (1 - 1e-12));
      CHECK(b.distance_to_diagonal() <= k.c2 * b.side() * (1 + 1e-12));
    }
    for (std::size_t i = 0; i < boxes.size(); ++i)
      for (std::size_t j = i + 1; j < boxes.size(); ++j)
        if (boxes_touch(boxes[i], boxes[j])) {
          const double r = boxes[i].side() / boxes[j].side();
          CHECK(r >= 0.25);
          CHECK(r <= 4.0);
        }

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double finest = std::ldexp(1.0, -depth);
    for (int s = 0; s < (n == 0 ? 100000 : 20000); ++s) {
      std::vector<double> x(n + 1), y(n + 1);
      for (int j = 0; j <= n; ++j) {
        x[j] = u(rng);
        y[j] = u(rng);
      }
      int hits = 0;
      for (const auto& b : boxes) hits += b.q.contains(x) && b.q_hat.contains(y);
      if (hits == 0)
        CHECK(distance(x, y) / std::sqrt(2.0) <= k.collar_factor * finest);
      else
        CHECK(hits == 1);
    }
  }
}

TEST_CASE("corner subcubes") {
  const DyadicCube q = DyadicCube::containing(0, {0, 0}, std::vector<double>{0.5, 1.5}, 0);
  REQUIRE(q.box() == Box({0.0, 1.0}, {1.0, 2.0}));
  const int plus[] = {1, 1}, minus[] = {-1, -1};
  const auto [a, b] = corner_subcubes(q, plus);
  CHECK(a.box() == Box({0.75, 1.75}, {1.0, 2.0}));
  CHECK(b.box() == Box({0.0, 1.0}, {0.25, 1.25}));
  const auto [c, d] = corner_subcubes(q, minus);
  CHECK(c == b);
  CHECK(d == a);

  // every sign pattern, every corner pair, on shifted systems as well
  const SpaceParams p(1, 1.0);
  const auto sys = build_systems(p, 9, 0.5, 0, 4, Box({0.0, 0.0}, {4.0, 4.0}));
  for (int nu = 0; nu < 9; ++nu) {
    const auto q2 = sys.containing_cube(nu, std::vector<double>{1.7, 2.2}, 2);
    for (int s0 : {-1, 1})
      for (int s1 : {-1, 1}) {
        const int sg[] = {s0, s1};
        const auto [aa, bb] = corner_subcubes(q2, sg);
        CHECK(aa.generation() == 4);
        CHECK(q2.is_ancestor_of(aa));
        CHECK(q2.is_ancestor_of(bb));
        double worst = 1e300;
        for (int ca = 0; ca < 4; ++ca)
          for (int cb = 0; cb < 4; ++cb) {
            double m = 1e300;
            for (int j = 0; j < 2; ++j) {
              const double xa = (ca >> j & 1) ? aa.box().hi[j] : aa.box().lo[j];
              const double xb = (cb >> j & 1) ? bb.box().hi[j] : bb.box().lo[j];
              m = std::min(m, sg[j] * (xa - xb));
            }
            worst = std::min(worst, m);
          }
        CHECK(worst >= q2.side() / 2 - 1e-15);
      }
  }
}

TEST_CASE("cube CSV export") {
  const SpaceParams p(0, 1.0);
  const auto sys = build_systems(p, 1, 0.5, 0, 2, Box({0.0}, {1.0}));
  const auto cubes = sys.cubes(0, 1);
  std::ostringstream os;
  write_cubes_csv(os, p, cubes);
  const std::string s = os.str();
  CHECK(s.rfind("system,k,m1,lo1,hi1,measure\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "blab/error.hpp"
#include "blab/operators.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace blab;

namespace {

Symbol symbol(const std::string& kind, const SpaceParams& p) {
  SymbolSpec s;
  s.kind = kind;
  return make_symbol(s, p);
}

}  // namespace

TEST_CASE("weighted grid") {
  const SpaceParams p(0, 1.0);
  const WeightedGrid g(p, Box({0.0}, {1.0}), 2);
  REQUIRE(g.size() == 2);
  CHECK(g.weight(0) == doctest::Approx(1.0 / 24).epsilon(1e-15));
  CHECK(g.weight(1) == doctest::Approx(7.0 / 24).epsilon(1e-15));
  CHECK(g.total_weight() == doctest::Approx(1.0 / 3).epsilon(1e-15));

  const SpaceParams q(1, 0.5);
  const WeightedGrid a(q, Box({-1.0, 0.0}, {1.0, 2.0}), 4);
  const WeightedGrid b = a.refined();
  CHECK(b.size() == 4 * a.size());
  CHECK(b.total_weight() == doctest::Approx(a.total_weight()).epsilon(1e-14));
  CHECK(a.total_weight() == doctest::Approx(cube_measure(q, a.box())).epsilon(1e-14));
  for (std::size_t i = 0; i < a.size(); ++i) {
    double children = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (a.cell(i).contains(b.node(j))) children += b.weight(j);
    CHECK(children == doctest::Approx(a.weight(i)).epsilon(1e-13));
    const Box c = a.cell(i);
    for (int j = 0; j < 2; ++j) {
      CHECK(a.node(i)[j] > c.lo[j]);
      CHECK(a.node(i)[j] < c.hi[j]);
    }
  }
  // first coordinate is the slowest index
  CHECK(a.cell_index(1) == std::vector<int>{0, 1});
}

TEST_CASE("commutator matrix") {
  const SpaceParams p(0, 1.0);
  const RieszKernel k(p, 1);
  const WeightedGrid g(p, Box({0.0}, {4.0}), 64);
  SymbolSpec cs;
  cs.kind = "constant";
  const auto zero = commutator_matrix(make_symbol(cs, p), g, k);
  CHECK(zero.matrix.norm() == 0.0);
  for (double s : singular_values(zero)) CHECK(s == 0.0);

  const Symbol b1 = symbol("bump", p), b2 = symbol("sine-window", p);
  const Symbol sum("sum", 1, [&](Coords x) { return b1(x) + b2(x); }, nullptr, std::nullopt);
  const CommutatorAssembler asm64(g, k);
  const auto m1 = asm64.commutator(b1), m2 = asm64.commutator(b2), ms = asm64.commutator(sum);
  CHECK((ms.matrix - m1.matrix - m2.matrix).cwiseAbs().maxCoeff() <= 1e-14 * ms.matrix.cwiseAbs().maxCoeff());
  CHECK(m1.matrix.diagonal().norm() == 0.0);
  CHECK(m1.diagonal_policy == "zero");

  // entries against direct kernel evaluation
  for (std::size_t i : {3u, 17u, 40u})
    for (std::size_t j : {0u, 21u, 63u}) {
      if (i == j) continue;
      const double direct = std::sqrt(g.weight(i) * g.weight(j)) * (b1(g.node(i)) - b1(g.node(j))) * k(g.node(i), g.node(j));
      CHECK(m1.matrix(i, j) == doctest::Approx(direct).epsilon(1e-12));
    }

  // the top singular value settles under refinement
  const double s64 = singular_values(m1).front();
  const double s256 = singular_values(commutator_matrix(b1, WeightedGrid(p, g.box(), 256), k)).front();
  CHECK(std::abs(s64 - s256) <= 0.1 * s256);

  CHECK_THROWS_AS(CommutatorAssembler(WeightedGrid(p, g.box(), 64), k, 32), Error);
}

TEST_CASE("lattice reuse in higher dimension matches direct assembly") {
  const SpaceParams p(1, 0.7);
  for (int ell : {1, 2}) {
    const RieszKernel k(p, ell);
    const WeightedGrid g(p, Box({0.0, 0.0}, {2.0, 2.0}), 6);
    const Symbol b = symbol("bump", p);
    const auto m = commutator_matrix(b, g, k);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (i == j) continue;
        const double d = std::sqrt(g.weight(i) * g.weight(j)) * (b(g.node(i)) - b(g.node(j))) * k(g.node(i), g.node(j));
        worst = std::max(worst, std::abs(m.matrix(i, j) - d));
      }
    CHECK(worst <= 1e-12 * m.matrix.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("singular values") {
  const auto id = singular_values(Eigen::MatrixXd::Identity(5, 5));
  for (double s : id) CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  Eigen::VectorXd u(4), v(3);
  u << 1, 2, 3, 4;
  v << -1, 0.5, 2;
  const auto r1 = singular_values(Eigen::MatrixXd(u * v.transpose()));
  CHECK(r1[0] == doctest::Approx(u.norm() * v.norm()).epsilon(1e-14));
  CHECK(r1[1] <= 1e-14);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd a(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) a(i, j) = n01(rng);
  const auto s = singular_values(a);
  double sq = 0.0;
  for (double x : s) sq += x * x;
  CHECK(sq == doctest::Approx(a.squaredNorm()).epsilon(1e-10));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1]);

  // orthogonal factors on either side leave the spectrum alone
  Eigen::MatrixXd z(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) z(i, j) = n01(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ();
  const auto left = singular_values(Eigen::MatrixXd(q * a)), right = singular_values(Eigen::MatrixXd(a * q));
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(std::abs(left[i] - s[i]) <= 1e-10 * s[0]);
    CHECK(std::abs(right[i] - s[i]) <= 1e-10 * s[0]);
  }
  Eigen::MatrixXd bad = a;
  bad(3, 3) = std::nan("");
  CHECK_THROWS_AS(singular_values(bad), Error);
}

TEST_CASE("Schatten-Lorentz norms") {
  const std::vector<double> ones(6, 1.0);
  CHECK(schatten_lorentz(ones, {1, 1}) == doctest::Approx(6.0));
  const std::vector<double> s{3.0, 2.0, 0.5};
  CHECK(schatten_lorentz(s, {2, 2}) == doctest::Approx(std::sqrt(9 + 4 + 0.25)));
  std::vector<double> decay;
  for (int k = 1; k <= 50; ++k) decay.push_back(1 / std::sqrt(k));
  CHECK(schatten_lorentz(decay, {2, LorentzParams::infinity()}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Hilbert-Schmidt consistency") {
  for (double lambda : {0.5, 1.0}) {
    const SpaceParams p(0, lambda);
    const RieszKernel k(p, 1);
    const Symbol b = symbol("bump", p);
    for (int res : {64, 128}) {
      const WeightedGrid g(p, Box({0.0}, {4.0}), res);
      const double hs = schatten_lorentz(singular_values(commutator_matrix(b, g, k)), {2, 2});
      const double direct = std::sqrt(hilbert_schmidt_direct(b, g, k, 4));
      CHECK(hs == doctest::Approx(direct).epsilon(0.02));
    }
  }
  // n = 1: p = 2 is the cut-off index, so both versions keep growing with the resolution
  const SpaceParams p(1, 1.0);
  const RieszKernel k(p, 2);
  const Symbol b = symbol("bump", p);
  double last_hs = 0.0, last_direct = 0.0;
  for (int res : {6, 12}) {
    const WeightedGrid g(p, Box({-2.0, 0.0}, {2.0, 4.0}), res);
    const double hs = schatten_lorentz(singular_values(commutator_matrix(b, g, k)), {2, 2});
    const double direct = std::sqrt(hilbert_schmidt_direct(b, g, k, 4));
    CHECK(hs > last_hs);
    CHECK(direct > last_direct);
    CHECK(direct >= hs);
    last_hs = hs;
    last_direct = direct;
  }
}

TEST_CASE("matrix export round trip") {
  const SpaceParams p(0, 1.0);
  const WeightedGrid g(p, Box({0.0}, {4.0}), 16);
  const auto op = commutator_matrix(symbol("bump", p), g, RieszKernel(p, 1));
  const auto dir = std::filesystem::temp_directory_path() / "blab_export_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "m.bin").string();
  write_matrix(path, op);
  CHECK(std::filesystem::file_size(path) == 16 * 16 * 8);
  const Eigen::MatrixXd back = read_matrix(path, 16, 16);
  CHECK(back == op.matrix);
  std::ifstream is(path + ".json");
  const auto meta = nlohmann::json::parse(is);
  CHECK(meta["rows"] == 16);
  CHECK(meta["layout"] == "row-major");
  CHECK(meta["byte_order"] == "little");
  CHECK(meta["diagonal_policy"] == "zero");
  std::ostringstream os;
  write_singular_values_csv(os, std::vector<double>{2.0, 1.0});
  CHECK(os.str() == "index,value\n1,2\n2,1\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("NWO coefficients") {
  const SpaceParams p(0, 1.0);
  const RieszKernel k(p, 1);
  const DyadicCube q = DyadicCube::containing(0, {0}, std::vector<double>{1.3}, 2);
  const PartnerResult partner = find_partner_cube(k, q);
  NwoSpec spec;
  spec.order = 2;
  spec.depth = 3;
  const NwoTable t = nwo_coefficients(k, q, partner.q_hat, NwoMode::kernel, spec);
  REQUIRE(t.max_by_offset.size() == 7);
  for (std::size_t i = 1; i < t.max_by_offset.size(); ++i) CHECK(t.max_by_offset[i] < t.max_by_offset[0]);
  CHECK(nwo_decay_slope(t, 0, 4) < 0.0);
  const NwoTable inv = nwo_coefficients(k, q, partner.q_hat, NwoMode::inverse_kernel, spec);
  CHECK(inv.max_by_offset[0] > 0.0);
  CHECK(std::isfinite(inv.tail_max));

  // the kernel changes sign on Q x Q, so the inverse is refused
  CHECK_THROWS_AS(nwo_coefficients(k, q, q, NwoMode::inverse_kernel, spec), Error);

  CHECK(nwo_mode_from_string("inverse-kernel") == NwoMode::inverse_kernel);
  CHECK(to_string(NwoMode::kernel) == "kernel");
  CHECK_THROWS_AS(nwo_mode_from_string("other"), Error);
  std::ostringstream os;
  write_nwo_csv(os, t);
  CHECK(os.str().find("k1,k2") != std::string::npos);
}

TEST_CASE("trace pairing") {
  const SpaceParams p(0, 1.0);
  const RieszKernel k(p, 1);
  const DyadicCube q(0, {0}, 0, {1}), q_hat(0, {0}, 0, {3});
  SymbolSpec cs;
  cs.kind = "constant";
  const TracePairing zero = trace_pairing(make_symbol(cs, p), q, q_hat, k);
  CHECK(zero.trace == 0.0);
  CHECK(zero.mo_q == 0.0);

  // b(x) = x: the sign is -1 on Q, the trace is the centroid gap
  const Symbol lin("x", 1, [](Coords x) { return x[0]; }, nullptr, std::nullopt);
  const TracePairing t = trace_pairing(lin, q, q_hat, k);
  CHECK(t.hat_average == doctest::Approx(525.0 / 148).epsilon(1e-12));
  CHECK(t.trace == doctest::Approx(525.0 / 148 - 45.0 / 28).epsilon(1e-12));
  CHECK(t.trace_via_kernel == doctest::Approx(t.trace).epsilon(1e-10));
  CHECK(t.mo_q <= 2 * std::abs(t.trace));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(1.0, 3.0), r(0.3, 1.0);
  double worst = 0.0;
  const DyadicCube q2 = DyadicCube::containing(0, {0}, std::vector<double>{1.6}, 1);
  const DyadicCube h2 = find_partner_cube(k, q2).q_hat;
  for (int i = 0; i < 50; ++i) {
    SymbolSpec s;
    s.kind = "bump";
    s.center = {c(rng)};
    s.radius = r(rng);
    const TracePairing tp = trace_pairing(make_symbol(s, p), q2, h2, k);
    if (tp.mo_q == 0.0) continue;
    worst = std::max(worst, tp.mo_q / (std::abs(tp.trace) + tp.mo_hat));
  }
  CHECK(worst <= 2.0 + 1e-9);
}

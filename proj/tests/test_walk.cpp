#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;
using oracle::kPi;

namespace {

const Complex kI{0.0, 1.0};

double max_diff(const CoinMatrix& m, const Eigen::Matrix2cd& e) {
  double d = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) d = std::max(d, std::abs(m.m[a][b] - e(a, b)));
  return d;
}

double max_prob_diff(const Distribution& a, const Distribution& b) {
  double d = 0.0;
  const int lo = std::min(a.begin_x(), b.begin_x());
  const int hi = std::max(a.end_x(), b.end_x());
  for (int x = lo; x < hi; ++x) d = std::max(d, std::abs(a.at(x) - b.at(x)));
  return d;
}

CoinVector random_coin(std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  CoinVector v{Complex{g(gen), g(gen)}, Complex{g(gen), g(gen)}};
  const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  return {v[0] / n, v[1] / n};
}

WalkState random_state(std::mt19937_64& gen, int lo, int hi) {
  std::vector<CoinVector> amps;
  for (int x = lo; x <= hi; ++x) amps.push_back(random_coin(gen));
  return WalkState(lo, amps).normalized();
}

}  // namespace

TEST_CASE("coin_matrix special angles") {
  const CoinMatrix id = coin_matrix(0.0);
  CHECK(max_diff(id, Eigen::Matrix2cd::Identity()) < 1e-15);

  Eigen::Matrix2cd isx;
  isx << 0, kI, kI, 0;
  CHECK(max_diff(coin_matrix(kPi), isx) < 1e-15);

  const CoinVector out = coin_matrix(kPi / 2) * CoinVector{0.0, 1.0};
  CHECK(std::abs(out[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(out[0] - kI / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("coin_matrix matches the Pauli expansion and is unitary") {
  for (double theta : {-2.3, -0.4, 0.7, 1.9, 5.0}) {
    for (double axis : {0.0, 0.6, -1.3, kPi / 2}) {
      const CoinMatrix m = coin_matrix(theta, axis);
      CHECK(max_diff(m, oracle::rotation(theta / 2, axis)) < 1e-14);
      Eigen::Matrix2cd e;
      e << m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1];
      CHECK((e.adjoint() * e - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
    }
  }
}

TEST_CASE("two-domain profile assigns the boundary site to theta_plus") {
  const auto p = CoinProfile::two_domain(-0.3, 0.5, 2);
  CHECK(*p.angle(1, 1) == -0.3);
  CHECK(*p.angle(2, 1) == 0.5);
  CHECK(*p.angle(-40, 7) == -0.3);
  CHECK(CoinProfile::homogeneous(0.2).angle(9, 3) == 0.2);
  CHECK_FALSE(CoinProfile::per_step_table({}).angle(0, 1).has_value());
}

TEST_CASE("apply_coin") {
  SUBCASE("identity coin leaves the state unchanged") {
    std::mt19937_64 gen(3);
    const WalkState s = random_state(gen, -3, 2);
    CHECK(max_abs_diff(apply_coin(s, CoinProfile::homogeneous(0.0), 1), s) == 0.0);
  }
  SUBCASE("balanced coin on |0>|1>") {
    const WalkState s = apply_coin(WalkState::localized(0, {0.0, 1.0}),
                                   CoinProfile::homogeneous(kPi / 2), 1);
    CHECK(std::abs(s.at(0)[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.at(0)[0] - kI / std::sqrt(2.0)) < 1e-15);
  }
  SUBCASE("two domains rotate each site by its own angle") {
    std::mt19937_64 gen(11);
    const WalkState s = random_state(gen, -1, 0);
    const auto profile = CoinProfile::two_domain(-kPi / 4, kPi / 4);
    const WalkState out = apply_coin(s, profile, 1);
    for (int x : {-1, 0}) {
      const double theta = x < 0 ? -kPi / 4 : kPi / 4;
      const Eigen::Vector2cd v = oracle::rotation(theta / 2) * Eigen::Vector2cd(s.at(x)[0], s.at(x)[1]);
      CHECK(std::abs(out.at(x)[0] - v(0)) < 1e-15);
      CHECK(std::abs(out.at(x)[1] - v(1)) < 1e-15);
    }
  }
  SUBCASE("full convention doubles the rotation") {
    std::mt19937_64 gen(12);
    const WalkState s = random_state(gen, 0, 0);
    const WalkState a = apply_coin(s, CoinProfile::homogeneous(0.3, AngleConvention::Full), 1);
    const WalkState b = apply_coin(s, CoinProfile::homogeneous(0.6), 1);
    CHECK(max_abs_diff(a, b) < 1e-15);
  }
  SUBCASE("missing table entry on a populated site") {
    CoinProfile::Table t{{{1, 0}, 0.3}};
    const auto profile = CoinProfile::per_step_table(t);
    WalkState s(0, {{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}});
    CHECK_THROWS_WITH(apply_coin(s, profile, 1), doctest::Contains("profile incomplete"));
    // Empty sites need no entry.
    CHECK_NOTHROW(apply_coin(WalkState(0, {{1.0, 0.0}, {0.0, 0.0}}), profile, 1));
  }
}

TEST_CASE("apply_shift") {
  const WalkState zero = WalkState::localized(0, {1.0, 0.0});
  CHECK(max_abs_diff(apply_shift(zero, WalkKind::Unidirectional), zero) == 0.0);

  const WalkState one = apply_shift(WalkState::localized(0, {0.0, 1.0}), WalkKind::Unidirectional);
  CHECK(one.at(1)[1] == Complex(1.0));
  CHECK(one.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));

  const double h = 1.0 / std::sqrt(2.0);
  const WalkState both = apply_shift(WalkState::localized(0, {h, h}), WalkKind::Bidirectional);
  CHECK(both.at(-1)[0] == Complex(h));
  CHECK(both.at(1)[1] == Complex(h));
  CHECK(both.at(0)[0] == Complex(0.0));
  CHECK(both.at(-1)[1] == Complex(0.0));
}

TEST_CASE("step examples") {
  const WalkState start = WalkState::localized(0, {0.0, 1.0});
  const auto dists = evolve(start, CoinProfile::homogeneous(0.0), WalkKind::Unidirectional, 3);
  REQUIRE(dists.size() == 4);
  for (int t = 0; t <= 3; ++t) {
    CHECK(dists[t].at(t) == doctest::Approx(1.0));
    CHECK(dists[t].step() == t);
  }

  const auto one = evolve(start, CoinProfile::homogeneous(kPi / 2), WalkKind::Unidirectional, 1);
  CHECK(one[1].at(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(one[1].at(1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("evolve t = 0 returns the initial marginal") {
  const auto d = evolve(initial_state(NamedInitial::PhiCo), CoinProfile::homogeneous(1.0),
                        WalkKind::Bidirectional, 0);
  REQUIRE(d.size() == 1);
  CHECK(d[0].at(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS(evolve(initial_state(NamedInitial::PhiCo), CoinProfile::homogeneous(1.0),
                      WalkKind::Bidirectional, -1));
}

TEST_CASE("evolution matches a dense-matrix oracle") {
  const int t = 9;
  for (auto conv : {AngleConvention::Half, AngleConvention::Full}) {
    for (auto kind : {WalkKind::Bidirectional, WalkKind::Unidirectional}) {
      for (auto name : {NamedInitial::PhiCo, NamedInitial::PhiCe}) {
        const auto profile = CoinProfile::two_domain(-kPi / 4, kPi / 4, 0, conv);
        const WalkState init = initial_state(name);
        const double factor = conv == AngleConvention::Full ? 1.0 : 0.5;
        oracle::DenseWalk dense{t + 2, kind == WalkKind::Bidirectional,
                                [&](int x, int) {
                                  return oracle::rotation(factor * (x < 0 ? -kPi / 4 : kPi / 4));
                                }};
        Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dense.dim());
        psi0(dense.idx(0, 0)) = init.at(0)[0];
        psi0(dense.idx(0, 1)) = init.at(0)[1];
        const auto ref = dense.run(psi0, t);
        const auto got = evolve(init, profile, kind, t);
        double worst = 0.0;
        for (int s = 0; s <= t; ++s)
          for (int x = -dense.L; x <= dense.L; ++x)
            worst = std::max(worst, std::abs(got[s].at(x) - ref[s][x + dense.L]));
        CHECK(worst < 1e-12);
      }
    }
  }
}

TEST_CASE("per-step table drives a step-dependent coin") {
  CoinProfile::Table table;
  for (int s = 1; s <= 4; ++s)
    for (int x = -5; x <= 5; ++x) table[{s, x}] = 0.3 * s - 0.1 * x;
  const auto profile = CoinProfile::per_step_table(table);
  oracle::DenseWalk dense{7, true, [](int x, int s) { return oracle::rotation((0.3 * s - 0.1 * x) / 2); }};
  const WalkState init = initial_state(NamedInitial::PhiCe);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dense.dim());
  psi0(dense.idx(0, 0)) = init.at(0)[0];
  psi0(dense.idx(0, 1)) = init.at(0)[1];
  const auto ref = dense.run(psi0, 4);
  const auto got = evolve(init, profile, WalkKind::Bidirectional, 4);
  for (int x = -7; x <= 7; ++x) CHECK(std::abs(got[4].at(x) - ref[4][x + 7]) < 1e-13);
}

TEST_CASE("named initial states") {
  const WalkState co = initial_state(NamedInitial::PhiCo);
  const WalkState ce = initial_state(NamedInitial::PhiCe);
  CHECK(std::abs(co.norm_squared() - 1.0) < 1e-12);
  CHECK(std::abs(ce.norm_squared() - 1.0) < 1e-12);
  CHECK(std::abs(inner(co, ce)) < 1e-12);
  const double n = std::sqrt(4.0 - 2.0 * std::sqrt(2.0));
  CHECK(std::abs(co.at(0)[0] - 1.0 / n) < 1e-15);
  CHECK(std::abs(co.at(0)[1] - kI * (std::sqrt(2.0) - 1.0) / n) < 1e-15);
  CHECK(std::abs(ce.at(0)[1] - 1.0 / n) < 1e-15);
  CHECK(std::abs(ce.at(0)[0] - kI * (std::sqrt(2.0) - 1.0) / n) < 1e-15);

  const WalkState custom = initial_state(WalkState::localized(0, {2.0, 0.0}));
  CHECK(custom.at(0)[0] == Complex(1.0));
  CHECK_THROWS_WITH(initial_state(WalkState::localized(0, {0.0, 0.0})),
                    doctest::Contains("zero norm"));
}

TEST_CASE("convert_uni_to_bi") {
  const auto a = convert_uni_to_bi(Distribution(0, {1.0}, 0), 0);
  CHECK(a.at(0) == 1.0);
  const auto b = convert_uni_to_bi(Distribution(0, {0.0, 1.0, 0.0}, 2), 2);
  CHECK(b.at(0) == 1.0);
  const auto c = convert_uni_to_bi(Distribution(0, {0.25, 0.0, 0.0, 0.75}, 3), 3);
  CHECK(c.at(-3) == 0.25);
  CHECK(c.at(3) == 0.75);
  CHECK(c.total() == 1.0);
  CHECK_THROWS_WITH(convert_uni_to_bi(Distribution(0, {0.0, 0.0, 0.0, 1.0}, 2), 2),
                    doctest::Contains("not a step-t unidirectional distribution"));
  CHECK_THROWS(convert_uni_to_bi(Distribution(-1, {0.5, 0.5}), 1));
  // Zero entries outside [0, t] are tolerated.
  CHECK_NOTHROW(convert_uni_to_bi(Distribution(-1, {0.0, 1.0, 0.0, 0.0}), 1));
}

TEST_CASE("map_profile_bi_to_uni") {
  SUBCASE("homogeneous stays homogeneous") {
    const auto m = map_profile_bi_to_uni(CoinProfile::homogeneous(0.7), 5);
    for (const auto& [key, v] : m.table()) CHECK(v == 0.7);
    CHECK(m.table().size() == 15u);
  }
  SUBCASE("boundary advances one site every two steps") {
    const auto m = map_profile_bi_to_uni(CoinProfile::two_domain(-kPi / 4, kPi / 4), 4);
    // First x with the positive angle, per step.
    std::vector<int> first;
    for (int s = 1; s <= 4; ++s) {
      int x = 0;
      while (x < s && *m.angle(x, s) < 0) ++x;
      first.push_back(x);
    }
    // theta_b(2x - s + 1) >= 0  <=>  x >= (s - 1) / 2
    CHECK(first == std::vector<int>{0, 1, 1, 2});
  }
  SUBCASE("keeps the convention and axis") {
    const auto m = map_profile_bi_to_uni(
        CoinProfile::two_domain(-0.2, 0.4, 0, AngleConvention::Full, 0.3), 3);
    CHECK(m.convention() == AngleConvention::Full);
    CHECK(m.axis() == 0.3);
  }
}

TEST_CASE("mapped unidirectional walk reproduces the bidirectional walk") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_int_distribution<int> boundary(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto conv = trial % 2 ? AngleConvention::Full : AngleConvention::Half;
    const auto profile = CoinProfile::two_domain(angle(gen), angle(gen), boundary(gen), conv,
                                                 angle(gen));
    const WalkState init = WalkState::localized(0, random_coin(gen));
    const int t = 6;
    const auto bi = evolve(init, profile, WalkKind::Bidirectional, t);
    const auto uni = evolve(init, map_profile_bi_to_uni(profile, t), WalkKind::Unidirectional, t);
    double worst = 0.0;
    for (int s = 0; s <= t; ++s)
      worst = std::max(worst, max_prob_diff(convert_uni_to_bi(uni[s], s), bi[s]));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("unitarity and light cone") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (auto kind : {WalkKind::Unidirectional, WalkKind::Bidirectional}) {
    const auto profile = CoinProfile::two_domain(angle(gen), angle(gen), 1);
    WalkState s = WalkState::localized(0, random_coin(gen));
    for (int t = 1; t <= 15; ++t) {
      s = step(s, profile, kind, t);
      CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
      const Distribution d = s.marginal(t);
      for (int x = d.begin_x(); x < d.end_x(); ++x) {
        if (d.at(x) == 0.0) continue;
        if (kind == WalkKind::Unidirectional) {
          CHECK((x >= 0 && x <= t));
        } else {
          CHECK((x >= -t && x <= t));
          CHECK((x + t) % 2 == 0);
        }
      }
    }
  }
}

TEST_CASE("linearity") {
  std::mt19937_64 gen(8);
  const auto profile = CoinProfile::two_domain(-0.9, 0.4, 0, AngleConvention::Full);
  const WalkState a = random_state(gen, -2, 1);
  const WalkState b = random_state(gen, 0, 3);
  const Complex alpha{0.3, -0.8}, beta{-0.5, 0.2};
  const auto sa = evolve_states(a, profile, WalkKind::Bidirectional, 7);
  const auto sb = evolve_states(b, profile, WalkKind::Bidirectional, 7);
  const auto sc = evolve_states(alpha * a + beta * b, profile, WalkKind::Bidirectional, 7);
  for (int t = 0; t <= 7; ++t) CHECK(max_abs_diff(sc[t], alpha * sa[t] + beta * sb[t]) <= 1e-12);
}

TEST_CASE("adjoint step reverses the walk") {
  std::mt19937_64 gen(9);
  for (auto kind : {WalkKind::Unidirectional, WalkKind::Bidirectional}) {
    const auto profile = CoinProfile::two_domain(-1.1, 0.6, 0, AngleConvention::Half, 0.4);
    const WalkState init = random_state(gen, -1, 1);
    WalkState s = init;
    for (int t = 1; t <= 8; ++t) s = step(s, profile, kind, t);
    for (int t = 8; t >= 1; --t) s = step_adjoint(s, profile, kind, t);
    CHECK(max_abs_diff(s, init) <= 1e-12);
  }
}

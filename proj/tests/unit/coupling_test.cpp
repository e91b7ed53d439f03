#include <cmath>
#include <random>

#include "doctest.h"
#include "srnorder/coupling.hpp"
#include "unit/helpers.hpp"

using namespace srnorder;

namespace {

KineticsPair kinetics(std::vector<Rational> kx, std::vector<Rational> ky) { return {std::move(kx), std::move(ky)}; }

AffineRelation relation(std::vector<IntVector> rows, std::size_t d, IntVector c = {}) {
  PreorderMatrix m{std::move(rows), d};
  if (c.empty()) return AffineRelation::from_matrix(m);
  return AffineRelation::with_offset(m, std::move(c));
}

Rational moved(const std::vector<CoupledTransition>& ts, Move move) {
  Rational s = 0;
  for (const auto& t : ts)
    if (t.move == move) s += t.rate;
  return s;
}

}  // namespace

TEST_CASE("relation membership") {
  const auto rel = relation({{1}}, 1, {1});
  CHECK(rel.contains({3}, {2}));
  CHECK(rel.contains({0}, {5}));
  CHECK_FALSE(rel.contains({4}, {2}));
  CHECK_FALSE(rel.contains({-1}, {0}));
  CHECK(relation({}, 2).contains({7, 0}, {0, 9}));
  CHECK_THROWS_AS(AffineRelation::with_offset(PreorderMatrix{{{1}}, 1}, {}), std::invalid_argument);
}

TEST_CASE("identical kinetics on the diagonal couple synchronously") {
  const auto net = net_of("S <-> P");
  const auto k = kinetics({1, 2}, {1, 2});
  for (const auto& rel : {relation({{-1, 0}}, 2), relation({{1, 0}, {-1, 0}}, 2)}) {
    const auto ts = coupled_rates(net, k, rel, {{3, 2}, {3, 2}});
    REQUIRE(ts.size() == 2);
    for (const auto& t : ts) CHECK(t.move == Move::Both);
  }
  const auto eq = coupled_rates(net, k, relation({{1, 0}, {-1, 0}}, 2), {{3, 2}, {3, 2}});
  for (const auto& t : eq) CHECK(t.tag == CaseTag::Case6);
}

TEST_CASE("affine relation example at x = y + 1") {
  const auto net = load_fixture("pcc").network;
  const auto rel = relation({{1}}, 1, {1});
  const auto k = kinetics({1, 1, 2}, {3, 1, 1});
  const auto ts = coupled_rates(net, k, rel, {{3}, {2}});
  // xi = +1: a = 1 + 3 = 4, b = 3 + 2 = 5, case 4.
  Rational up_y = 0, up_both = 0;
  for (const auto& t : ts) {
    if (net.distinct_vectors()[t.vector_index] != IntVector{1}) continue;
    CHECK(t.tag == CaseTag::Case4);
    if (t.move == Move::Y) up_y += t.rate;
    if (t.move == Move::Both) up_both += t.rate;
  }
  CHECK(up_y == 1);
  CHECK(up_both == 4);
  // Violating the derived inequality makes case 4 need a negative rate.
  CHECK_THROWS_AS(coupled_rates(net, kinetics({3, 1, 2}, {3, 1, 1}), rel, {{3}, {2}}), HypothesisViolation);
  try {
    coupled_rates(net, kinetics({3, 1, 2}, {3, 1, 1}), rel, {{3}, {2}});
  } catch (const HypothesisViolation& e) {
    CHECK(e.xi() == IntVector{1});
    CHECK(e.state().x == State{3});
  }
}

TEST_CASE("outside the relation the components move independently") {
  const auto net = load_fixture("pcc").network;
  const auto k = kinetics({1, 1, 2}, {3, 1, 1});
  const auto ts = coupled_rates(net, k, relation({{1}}, 1, {1}), {{5}, {0}});
  CHECK(moved(ts, Move::Both) == 0);
  CHECK(moved(ts, Move::X) == 1 + 5 + 2 * 20);
  CHECK(moved(ts, Move::Y) == 3);
  for (const auto& t : ts) CHECK(t.tag == CaseTag::Outside);
}

TEST_CASE("simulation guards and determinism") {
  const auto parsed = load_fixture("rev");
  const auto rel = relation({{-1, 0}}, 2);
  const auto zero = simulate_coupled(parsed.network, *parsed.kinetics, rel, {3, 0}, {3, 0}, 0.0, 5);
  CHECK(zero.events.empty());
  CHECK(zero.terminated_by == Termination::TMax);
  const auto a = simulate_coupled(parsed.network, *parsed.kinetics, rel, {3, 0}, {3, 0}, 20.0, 42);
  const auto b = simulate_coupled(parsed.network, *parsed.kinetics, rel, {3, 0}, {3, 0}, 20.0, 42);
  CHECK(export_trajectory(a) == export_trajectory(b));
  CHECK(export_trajectory(a).rfind("0\t3,0\t3,0\t-\t-\n", 0) == 0);
  CHECK_FALSE(a.events.empty());
  const auto capped = simulate_coupled(parsed.network, *parsed.kinetics, rel, {3, 0}, {3, 0}, 1e9, 1, 10);
  CHECK(capped.events.size() == 10);
  CHECK(capped.terminated_by == Termination::MaxEvents);
  CHECK_THROWS_AS(simulate_coupled(parsed.network, *parsed.kinetics, rel, {0, 3}, {3, 0}, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("reversible reaction keeps X_S >= Y_S along trajectories") {
  const auto parsed = load_fixture("rev");
  const auto rel = relation({{-1, 0}}, 2);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto t = simulate_coupled(parsed.network, *parsed.kinetics, rel, {3, 0}, {3, 0}, 10.0, seed);
    CHECK(t.relation_violations == 0);
    double last = 0;
    for (const auto& e : t.events) {
      CHECK(e.time > last);
      last = e.time;
      CHECK(e.state.x[0] >= e.state.y[0]);
      CHECK(e.state.x[1] <= e.state.y[1]);
    }
  }
}

TEST_CASE("plain SSA") {
  const auto net = net_of("0 -> A\nA -> 0");
  const auto none = simulate_ssa(net, {0, 0}, {4}, 10.0, 1);
  CHECK(none.events.empty());
  CHECK(none.terminated_by == Termination::Absorbed);

  const auto mm = load_fixture("mm").network;
  const auto stuck = simulate_ssa(mm, {1, 1, 1}, {5, 0, 0, 0}, 10.0, 1);
  CHECK(stuck.events.empty());
  CHECK(stuck.terminated_by == Termination::Absorbed);

  const auto walk = simulate_ssa(net, {1, 1}, {2}, 5.0, 9);
  CHECK(state_at(walk, 0.0) == State{2});
  if (!walk.events.empty()) CHECK(state_at(walk, 5.0) == walk.events.back().state);
}

TEST_CASE("birth process event count has mean kappa T") {
  const auto net = net_of("0 -> A");
  EnsembleOptions opt;
  opt.trajectories = 4000;
  opt.t_max = 5;
  opt.seed = 3;
  opt.checkpoints = {5.0};
  const auto samples = run_ssa_ensemble(net, {2}, {0}, opt);
  const auto m = moments(samples[0].states);
  const double sigma = std::sqrt(10.0 / 4000.0);
  CHECK(std::abs(m[0].mean - 10.0) < 4 * sigma);
}

TEST_CASE("ensembles do not depend on the worker count") {
  const auto parsed = load_fixture("sis");
  const auto rel = relation({{-1, 0}}, 2);
  EnsembleOptions opt;
  opt.trajectories = 64;
  opt.t_max = 3;
  opt.checkpoints = {1, 3};
  const auto one = run_coupled_ensemble(parsed.network, *parsed.kinetics, rel, {6, 2}, {6, 2}, opt);
  opt.workers = 3;
  const auto three = run_coupled_ensemble(parsed.network, *parsed.kinetics, rel, {6, 2}, {6, 2}, opt);
  CHECK(one.x_samples[1].states == three.x_samples[1].states);
  CHECK(one.y_samples[0].states == three.y_samples[0].states);
  CHECK(one.events == three.events);
  CHECK(one.relation_violations == 0);
  // Trajectory 0 of an ensemble is the single trajectory with the same seed.
  const auto single = simulate_coupled(parsed.network, *parsed.kinetics, rel, {6, 2}, {6, 2}, 3, opt.seed);
  CHECK(state_at(single, 1).x == one.x_samples[0].states[0]);
}

TEST_CASE("class box enumeration matches brute force") {
  const auto net = load_fixture("mm").network;
  const auto c = conservation_basis(net);
  const State anchor{2, 1, 1, 0};
  const auto box = class_box(net, anchor, 3);
  std::vector<State> brute;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int e = 0; e <= 3; ++e)
        for (int f = 0; f <= 3; ++f) {
          const State z{a, b, e, f};
          bool same = true;
          for (const auto& row : c.rows) same = same && dot(row, z) == dot(row, anchor);
          if (same) brute.push_back(z);
        }
  CHECK(box == brute);
  CHECK(class_box(load_fixture("erg").network, {0, 0}, 2).size() == 9);
}

TEST_CASE("box oracle on SIS") {
  const auto parsed = load_fixture("sis");
  const auto rel = relation({{-1, 0}}, 2);
  const auto ok = oracle_check_conditions(parsed.network, *parsed.kinetics, rel, 8, {4, 4});
  CHECK(ok.violation_count == 0);
  CHECK(ok.related_pairs > 0);
  const auto bad =
      oracle_check_conditions(parsed.network, kinetics({3, 2}, {2, 1}), rel, 8, {4, 4}, 2);
  CHECK(bad.violation_count >= 1);
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations[0].condition == 'a');
  const auto capped = oracle_check_conditions(parsed.network, kinetics({3, 2}, {2, 1}), rel, 8, {4, 4}, 1, 2);
  CHECK(capped.violations.size() == 2);
  CHECK(capped.violation_count == bad.violation_count);
  const auto everything = oracle_check_conditions(parsed.network, kinetics({3, 2}, {2, 1}), relation({}, 2), 8, {4, 4});
  CHECK(everything.violation_count == 0);
}

TEST_CASE("marginal rate identity") {
  const auto parsed = load_fixture("sis");
  const auto rel = relation({{-1, 0}}, 2);
  CHECK(marginal_rate_identity(parsed.network, *parsed.kinetics, rel, {{{1, 1}, {0, 2}}}));
  CHECK(marginal_rate_identity(parsed.network, *parsed.kinetics, rel, {{{5, 0}, {0, 3}}}));
  std::mt19937 rng(5);
  std::vector<CoupledState> sample;
  while (sample.size() < 200) {
    const std::int64_t n = 1 + rng() % 10, xs = rng() % (n + 1), ys = rng() % (n + 1);
    if (xs >= ys) sample.push_back({{xs, n - xs}, {ys, n - ys}});
  }
  CHECK(marginal_rate_identity(parsed.network, *parsed.kinetics, rel, sample));
  CHECK_FALSE(marginal_rate_identity(parsed.network, kinetics({3, 2}, {2, 1}), rel, {{{2, 2}, {2, 2}}}));
}

TEST_CASE("moments") {
  const auto m = moments({{1}, {3}});
  CHECK(m[0].mean == doctest::Approx(2.0));
  CHECK(m[0].standard_error == doctest::Approx(1.0));
  CHECK(moments({}).empty());
}

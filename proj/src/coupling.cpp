#include "srnorder/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "srnorder/linalg.hpp"

namespace srnorder {

AffineRelation AffineRelation::from_matrix(const PreorderMatrix& m) {
  return with_offset(m, IntVector(m.size(), 0));
}

AffineRelation AffineRelation::with_offset(const PreorderMatrix& m, IntVector c) {
  if (c.size() != m.size()) throw std::invalid_argument("offset length must equal the number of rows");
  for (const auto& row : m.rows)
    if (row.size() != m.cols) throw std::invalid_argument("relation row has wrong length");
  return AffineRelation{m.rows, std::move(c), m.cols};
}

namespace {

bool non_negative(const State& s) {
  return std::all_of(s.begin(), s.end(), [](std::int64_t v) { return v >= 0; });
}

State shifted(const State& s, std::span<const std::int64_t> xi) {
  State out = s;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += xi[j];
  return out;
}

std::string join(std::span<const std::int64_t> v) {
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(v[j]);
  }
  return out;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double holding_time(std::mt19937_64& rng, double total) { return -std::log1p(-uniform01(rng)) / total; }

template <class Fn>
void parallel_for(std::size_t workers, std::size_t count, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count == 0 ? 1 : count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : threads) t.join();
}

}  // namespace

bool AffineRelation::contains(const State& x, const State& y) const {
  if (x.size() != dimension || y.size() != dimension) throw std::invalid_argument("state has wrong length");
  if (!non_negative(x) || !non_negative(y)) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < dimension; ++j) s += m[i][j] * (x[j] - y[j]);
    if (s > c[i]) return false;
  }
  return true;
}

std::string to_string(CaseTag tag) {
  if (tag == CaseTag::Outside) return "outside";
  return std::to_string(static_cast<int>(tag));
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::TMax: return "t_max";
    case Termination::MaxEvents: return "max_events";
    case Termination::Absorbed: return "absorbed";
  }
  return "?";
}

HypothesisViolation::HypothesisViolation(CoupledState state, IntVector xi, std::string condition)
    : std::runtime_error("hypothesis violated at x=(" + join(state.x) + ") y=(" + join(state.y) +
                         ") xi=(" + join(xi) + "): " + condition),
      state_(std::move(state)),
      xi_(std::move(xi)),
      condition_(std::move(condition)) {}

CouplingModel::CouplingModel(const ReactionNetwork& net, KineticsPair kinetics, AffineRelation rel)
    : net_(net), kinetics_(std::move(kinetics)), rel_(std::move(rel)) {
  if (kinetics_.kx.size() != net.reaction_count() || kinetics_.ky.size() != net.reaction_count())
    throw std::invalid_argument("kinetics must give one constant per reaction");
  if (rel_.dimension != net.dimension()) throw std::invalid_argument("relation dimension mismatch");
  for (auto* k : {&kinetics_.kx, &kinetics_.ky})
    for (auto& q : *k) q.canonicalize();
  const auto& vectors = net.distinct_vectors();
  groups_.resize(vectors.size());
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto it = std::find(vectors.begin(), vectors.end(), net.reaction(r).xi);
    groups_[static_cast<std::size_t>(it - vectors.begin())].push_back(r);
  }
}

Rational CouplingModel::group_rate(const std::vector<Rational>& k, const State& s, std::size_t group) const {
  Rational total = 0;
  for (std::size_t r : groups_[group]) {
    if (k[r] == 0) continue;
    mpz_class product = 1;
    const auto& src = net_.reaction(r).source.coefficients;
    for (std::size_t j = 0; j < src.size() && product != 0; ++j)
      if (src[j] != 0) product *= falling_factorial(s[j], src[j]);
    if (product != 0) total += k[r] * Rational(product);
  }
  return total;
}

Rational CouplingModel::rate_x(const State& x, std::size_t k) const { return group_rate(kinetics_.kx, x, k); }
Rational CouplingModel::rate_y(const State& y, std::size_t k) const { return group_rate(kinetics_.ky, y, k); }

std::vector<CoupledTransition> CouplingModel::rates(const CoupledState& w) const {
  const auto& vectors = net_.distinct_vectors();
  std::vector<CoupledTransition> out;
  auto emit = [&](std::size_t k, Move move, CaseTag tag, Rational rate) {
    if (rate == 0) return;
    const auto& xi = vectors[k];
    CoupledState target = w;
    if (move != Move::Y) target.x = shifted(w.x, xi);
    if (move != Move::X) target.y = shifted(w.y, xi);
    out.push_back({std::move(target), std::move(rate), move, tag, k});
  };

  const bool related = rel_.contains(w.x, w.y);
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const auto& xi = vectors[k];
    Rational a = rate_x(w.x, k);
    Rational b = rate_y(w.y, k);
    if (!related) {
      emit(k, Move::X, CaseTag::Outside, std::move(a));
      emit(k, Move::Y, CaseTag::Outside, std::move(b));
      continue;
    }
    const State x1 = shifted(w.x, xi);
    const State y1 = shifted(w.y, xi);
    const bool in_x = rel_.contains(x1, w.y);
    const bool in_y = rel_.contains(w.x, y1);
    const bool in_both = rel_.contains(x1, y1);
    auto fail = [&](const std::string& condition) { throw HypothesisViolation(w, xi, condition); };

    if (in_x && in_y && in_both) {
      emit(k, Move::X, CaseTag::Case1, std::move(a));
      emit(k, Move::Y, CaseTag::Case1, std::move(b));
    } else if (in_x && !in_y && in_both) {
      if (a < b) fail("case 2 needs q^X >= q^Y (condition b)");
      emit(k, Move::X, CaseTag::Case2, a - b);
      emit(k, Move::Both, CaseTag::Case2, std::move(b));
    } else if (in_x && !in_y && !in_both) {
      if (b != 0) fail("case 3 drops positive q^Y (condition c)");
      emit(k, Move::X, CaseTag::Case3, std::move(a));
    } else if (!in_x && in_y && in_both) {
      if (b < a) fail("case 4 needs q^X <= q^Y (condition a)");
      emit(k, Move::Y, CaseTag::Case4, b - a);
      emit(k, Move::Both, CaseTag::Case4, std::move(a));
    } else if (!in_x && in_y && !in_both) {
      if (a != 0) fail("case 5 drops positive q^X (condition c)");
      emit(k, Move::Y, CaseTag::Case5, std::move(b));
    } else if (!in_x && !in_y && in_both) {
      if (a != b) fail("case 6 needs q^X = q^Y (conditions a and b)");
      emit(k, Move::Both, CaseTag::Case6, std::move(a));
    } else if (!in_x && !in_y && !in_both) {
      if (a != 0 || b != 0) fail("case 7 drops positive rate (conditions a, b, c)");
    } else {
      fail("case 8 reached with both successors in E (condition c)");
    }
  }
  return out;
}

std::vector<CoupledTransition> coupled_rates(const ReactionNetwork& net, const KineticsPair& kinetics,
                                             const AffineRelation& rel, const CoupledState& w) {
  return CouplingModel(net, kinetics, rel).rates(w);
}

namespace {

// Runs one coupled trajectory; `on_event` sees each jump before it is applied.
template <class OnEvent>
CoupledTrajectory run_coupled(const CouplingModel& model, const State& x0, const State& y0, double t_max,
                              std::mt19937_64& rng, std::uint64_t max_events, bool record,
                              OnEvent&& on_event) {
  if (!model.relation().contains(x0, y0)) throw std::invalid_argument("initial pair is not in the relation");
  CoupledTrajectory traj;
  traj.initial = {x0, y0};
  CoupledState w = traj.initial;
  double t = 0;
  std::uint64_t events = 0;
  std::vector<double> weights;
  while (true) {
    if (events >= max_events) {
      traj.terminated_by = Termination::MaxEvents;
      break;
    }
    auto transitions = model.rates(w);
    weights.clear();
    double total = 0;
    for (const auto& tr : transitions) {
      weights.push_back(tr.rate.get_d());
      total += weights.back();
    }
    if (transitions.empty() || total <= 0) {
      traj.terminated_by = Termination::Absorbed;
      break;
    }
    const double dt = holding_time(rng, total);
    if (t + dt > t_max) {
      traj.terminated_by = Termination::TMax;
      break;
    }
    t += dt;
    double pick = uniform01(rng) * total;
    std::size_t chosen = 0;
    while (chosen + 1 < transitions.size() && pick >= weights[chosen]) pick -= weights[chosen++];
    auto& tr = transitions[chosen];
    on_event(t, w);
    w = std::move(tr.target);
    ++events;
    if (!model.relation().contains(w.x, w.y)) ++traj.relation_violations;
    if (record)
      traj.events.push_back({t, w, tr.tag, model.network().distinct_vectors()[tr.vector_index], tr.move});
  }
  on_event(std::numeric_limits<double>::infinity(), w);
  return traj;
}

}  // namespace

CoupledTrajectory simulate_coupled(const ReactionNetwork& net, const KineticsPair& kinetics,
                                   const AffineRelation& rel, const State& x0, const State& y0,
                                   double t_max, std::uint64_t seed, std::uint64_t max_events) {
  if (x0.size() != net.dimension() || y0.size() != net.dimension())
    throw std::invalid_argument("initial state has wrong length");
  if (t_max < 0) throw std::invalid_argument("t_max must be non-negative");
  const CouplingModel model(net, kinetics, rel);
  auto rng = make_rng(seed, 0);
  return run_coupled(model, x0, y0, t_max, rng, max_events, true, [](double, const CoupledState&) {});
}

std::string export_trajectory(const CoupledTrajectory& trajectory) {
  std::ostringstream out;
  out.precision(17);
  out << 0.0 << '\t' << join(trajectory.initial.x) << '\t' << join(trajectory.initial.y) << "\t-\t-\n";
  for (const auto& e : trajectory.events)
    out << e.time << '\t' << join(e.state.x) << '\t' << join(e.state.y) << '\t' << to_string(e.tag) << '\t'
        << join(e.xi) << '\n';
  return out.str();
}

namespace {

template <class OnEvent>
SsaTrajectory run_ssa(const ReactionNetwork& net, const std::vector<double>& k, const State& x0, double t_max,
                      std::mt19937_64& rng, std::uint64_t max_events, bool record, OnEvent&& on_event) {
  SsaTrajectory traj;
  traj.initial = x0;
  State x = x0;
  double t = 0;
  std::uint64_t events = 0;
  std::vector<double> a(net.reaction_count());
  while (true) {
    if (events >= max_events) {
      traj.terminated_by = Termination::MaxEvents;
      break;
    }
    double total = 0;
    for (std::size_t r = 0; r < a.size(); ++r) {
      double p = k[r];
      const auto& src = net.reaction(r).source.coefficients;
      for (std::size_t j = 0; j < src.size() && p != 0; ++j)
        for (std::int64_t i = 0; i < src[j]; ++i) p *= static_cast<double>(x[j] - i);
      a[r] = std::max(p, 0.0);
      total += a[r];
    }
    if (total <= 0) {
      traj.terminated_by = Termination::Absorbed;
      break;
    }
    const double dt = holding_time(rng, total);
    if (t + dt > t_max) {
      traj.terminated_by = Termination::TMax;
      break;
    }
    t += dt;
    double pick = uniform01(rng) * total;
    std::size_t r = 0;
    while (r + 1 < a.size() && pick >= a[r]) pick -= a[r++];
    while (a[r] == 0) --r;  // rounding can overshoot onto a trailing zero propensity
    on_event(t, x);
    x = shifted(x, net.reaction(r).xi);
    ++events;
    if (record) traj.events.push_back({t, x, r});
  }
  on_event(std::numeric_limits<double>::infinity(), x);
  return traj;
}

std::vector<double> to_doubles(const std::vector<Rational>& constants) {
  std::vector<double> out;
  for (const auto& c : constants) {
    if (c < 0) throw std::invalid_argument("rate constants must be non-negative");
    out.push_back(c.get_d());
  }
  return out;
}

// Records the state in force at each checkpoint time.
struct CheckpointRecorder {
  const std::vector<double>& times;
  std::size_t next = 0;
  template <class S, class Sink>
  void advance(double event_time, const S& current, Sink&& sink) {
    while (next < times.size() && times[next] < event_time) sink(next++, current);
  }
};

}  // namespace

SsaTrajectory simulate_ssa(const ReactionNetwork& net, const std::vector<Rational>& constants, const State& x0,
                           double t_max, std::uint64_t seed, std::uint64_t max_events) {
  if (constants.size() != net.reaction_count()) throw std::invalid_argument("one constant per reaction");
  if (x0.size() != net.dimension() || !non_negative(x0)) throw std::invalid_argument("invalid initial state");
  auto rng = make_rng(seed, 0);
  return run_ssa(net, to_doubles(constants), x0, t_max, rng, max_events, true, [](double, const State&) {});
}

State state_at(const SsaTrajectory& trajectory, double t) {
  State s = trajectory.initial;
  for (const auto& e : trajectory.events) {
    if (e.time > t) break;
    s = e.state;
  }
  return s;
}

CoupledState state_at(const CoupledTrajectory& trajectory, double t) {
  CoupledState s = trajectory.initial;
  for (const auto& e : trajectory.events) {
    if (e.time > t) break;
    s = e.state;
  }
  return s;
}

std::vector<SpeciesMoments> moments(const std::vector<State>& states) {
  if (states.empty()) return {};
  const std::size_t d = states.front().size();
  const double n = static_cast<double>(states.size());
  std::vector<SpeciesMoments> out(d);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0;
    for (const auto& s : states) sum += static_cast<double>(s[j]);
    const double mean = sum / n;
    double ss = 0;
    for (const auto& s : states) ss += (static_cast<double>(s[j]) - mean) * (static_cast<double>(s[j]) - mean);
    const double variance = states.size() > 1 ? ss / (n - 1) : 0.0;
    out[j] = {mean, std::sqrt(variance / n)};
  }
  return out;
}

CoupledEnsemble run_coupled_ensemble(const ReactionNetwork& net, const KineticsPair& kinetics,
                                     const AffineRelation& rel, const State& x0, const State& y0,
                                     const EnsembleOptions& options) {
  const CouplingModel model(net, kinetics, rel);
  auto times = options.checkpoints;
  std::sort(times.begin(), times.end());
  const std::size_t n = options.trajectories;

  CoupledEnsemble out;
  out.trajectories = n;
  for (double t : times) {
    out.x_samples.push_back({t, std::vector<State>(n)});
    out.y_samples.push_back({t, std::vector<State>(n)});
  }
  std::vector<CoupledTrajectory> summaries(n);
  std::vector<std::size_t> event_counts(n, 0);
  std::vector<std::exception_ptr> errors(n);
  parallel_for(options.workers, n, [&](std::size_t i) {
    try {
      auto rng = make_rng(options.seed, i);
      CheckpointRecorder recorder{times};
      std::size_t events = 0;
      summaries[i] = run_coupled(model, x0, y0, options.t_max, rng, options.max_events, false,
                                 [&](double t, const CoupledState& w) {
                                   recorder.advance(t, w, [&](std::size_t c, const CoupledState& s) {
                                     out.x_samples[c].states[i] = s.x;
                                     out.y_samples[c].states[i] = s.y;
                                   });
                                   if (std::isfinite(t)) ++events;
                                 });
      event_counts[i] = events;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.relation_violations += summaries[i].relation_violations;
    out.events += event_counts[i];
    switch (summaries[i].terminated_by) {
      case Termination::TMax: ++out.terminated_t_max; break;
      case Termination::MaxEvents: ++out.terminated_max_events; break;
      case Termination::Absorbed: ++out.terminated_absorbed; break;
    }
  }
  return out;
}

std::vector<CheckpointSample> run_ssa_ensemble(const ReactionNetwork& net, const std::vector<Rational>& constants,
                                               const State& x0, const EnsembleOptions& options) {
  if (constants.size() != net.reaction_count()) throw std::invalid_argument("one constant per reaction");
  const auto k = to_doubles(constants);
  auto times = options.checkpoints;
  std::sort(times.begin(), times.end());
  const std::size_t n = options.trajectories;
  std::vector<CheckpointSample> out;
  for (double t : times) out.push_back({t, std::vector<State>(n)});
  parallel_for(options.workers, n, [&](std::size_t i) {
    auto rng = make_rng(options.seed, i);
    CheckpointRecorder recorder{times};
    run_ssa(net, k, x0, options.t_max, rng, options.max_events, false, [&](double t, const State& x) {
      recorder.advance(t, x, [&](std::size_t c, const State& s) { out[c].states[i] = s; });
    });
  });
  return out;
}

std::vector<State> class_box(const ReactionNetwork& net, const State& anchor, std::int64_t radius) {
  const std::size_t d = net.dimension();
  if (anchor.size() != d || !non_negative(anchor)) throw std::invalid_argument("anchor must be a non-negative state");
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  const ConservationBasis c = conservation_basis(net);

  // Solve C z = C anchor for the pivot coordinates in terms of the free ones.
  RationalMatrix aug(c.rows.size(), d + 1);
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) aug(i, j) = static_cast<long>(c.rows[i][j]);
    aug(i, d) = static_cast<long>(dot(c.rows[i], anchor));
  }
  const RrefResult r = rref(aug);
  std::vector<bool> is_pivot(d, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < d; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);

  double size = 1;
  for (std::size_t i = 0; i < free_cols.size(); ++i) size *= static_cast<double>(radius + 1);
  if (size > 5e7) throw std::invalid_argument("box too large to enumerate");

  std::vector<State> out;
  State z(d, 0);
  std::vector<std::int64_t> digits(free_cols.size(), 0);
  while (true) {
    for (std::size_t f = 0; f < free_cols.size(); ++f) z[free_cols[f]] = digits[f];
    bool ok = true;
    for (std::size_t i = 0; i < r.pivots.size() && ok; ++i) {
      Rational v = r.reduced(i, d);
      for (std::size_t f : free_cols) v -= r.reduced(i, f) * static_cast<long>(z[f]);
      ok = v.get_den() == 1 && v >= 0 && v <= radius;
      if (ok) z[r.pivots[i]] = v.get_num().get_si();
    }
    if (ok) out.push_back(z);
    std::size_t f = 0;
    while (f < digits.size() && ++digits[f] > radius) digits[f++] = 0;
    if (f == digits.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

OracleReport oracle_check_conditions(const ReactionNetwork& net, const KineticsPair& kinetics,
                                     const AffineRelation& rel, std::int64_t box_radius, const State& anchor,
                                     std::size_t workers, std::size_t max_recorded) {
  const CouplingModel model(net, kinetics, rel);
  const auto states = class_box(net, anchor, box_radius);
  const auto& vectors = net.distinct_vectors();

  struct Shard {
    std::size_t pairs = 0;
    std::size_t count = 0;
    std::vector<OracleViolation> found;
  };
  std::vector<Shard> shards(states.size());
  parallel_for(workers, states.size(), [&](std::size_t i) {
    const State& x = states[i];
    Shard& shard = shards[i];
    std::vector<Rational> qx(vectors.size());
    for (std::size_t k = 0; k < vectors.size(); ++k) qx[k] = model.rate_x(x, k);
    for (const State& y : states) {
      if (!rel.contains(x, y)) continue;
      ++shard.pairs;
      for (std::size_t k = 0; k < vectors.size(); ++k) {
        const State x1 = shifted(x, vectors[k]);
        const State y1 = shifted(y, vectors[k]);
        const Rational qy = model.rate_y(y, k);
        auto report = [&](char condition) {
          ++shard.count;
          if (shard.found.size() < max_recorded) shard.found.push_back({condition, {x, y}, vectors[k], qx[k], qy});
        };
        if (!rel.contains(x1, y) && qx[k] > qy) report('a');
        if (!rel.contains(x, y1) && qx[k] < qy) report('b');
        if (!rel.contains(x1, y1) && non_negative(x1) && non_negative(y1)) report('c');
      }
    }
  });

  OracleReport report;
  report.states = states.size();
  for (auto& shard : shards) {
    report.related_pairs += shard.pairs;
    report.violation_count += shard.count;
    for (auto& v : shard.found)
      if (report.violations.size() < max_recorded) report.violations.push_back(std::move(v));
  }
  return report;
}

bool marginal_rate_identity(const ReactionNetwork& net, const KineticsPair& kinetics, const AffineRelation& rel,
                            const std::vector<CoupledState>& sample_states) {
  const CouplingModel model(net, kinetics, rel);
  const std::size_t n_vectors = net.distinct_vectors().size();
  for (const auto& w : sample_states) {
    std::vector<CoupledTransition> transitions;
    try {
      transitions = model.rates(w);
    } catch (const HypothesisViolation&) {
      return false;
    }
    std::vector<Rational> moved_x(n_vectors), moved_y(n_vectors);
    for (const auto& tr : transitions) {
      if (tr.move != Move::Y) moved_x[tr.vector_index] += tr.rate;
      if (tr.move != Move::X) moved_y[tr.vector_index] += tr.rate;
    }
    for (std::size_t k = 0; k < n_vectors; ++k)
      if (moved_x[k] != model.rate_x(w.x, k) || moved_y[k] != model.rate_y(w.y, k)) return false;
  }
  return true;
}

}  // namespace srnorder

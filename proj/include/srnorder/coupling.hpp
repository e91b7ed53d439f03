#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "srnorder/network.hpp"
#include "srnorder/order_check.hpp"

namespace srnorder {

/// Binary relation x rho y iff x, y >= 0 and M (x - y) <= c componentwise.
/// An empty M relates every pair of non-negative states.
struct AffineRelation {
  std::vector<IntVector> m;
  IntVector c;  // one entry per row of m
  std::size_t dimension = 0;

  static AffineRelation from_matrix(const PreorderMatrix& m);
  static AffineRelation with_offset(const PreorderMatrix& m, IntVector c);

  bool contains(const State& x, const State& y) const;
};

struct CoupledState {
  State x;
  State y;

  friend bool operator==(const CoupledState&, const CoupledState&) = default;
};

/// Which component(s) a coupled transition moves.
enum class Move { X, Y, Both };

/// Case of the coupling table; Outside when the current pair is not related.
enum class CaseTag { Outside = 0, Case1, Case2, Case3, Case4, Case5, Case6, Case7 };

std::string to_string(CaseTag tag);

struct CoupledTransition {
  CoupledState target;
  Rational rate;
  Move move = Move::X;
  CaseTag tag = CaseTag::Outside;
  std::size_t vector_index = 0;  // into net.distinct_vectors()
};

/// Raised when the coupling table cannot be applied at a related pair.
class HypothesisViolation : public std::runtime_error {
 public:
  HypothesisViolation(CoupledState state, IntVector xi, std::string condition);
  const CoupledState& state() const { return state_; }
  const IntVector& xi() const { return xi_; }
  const std::string& condition() const { return condition_; }

 private:
  CoupledState state_;
  IntVector xi_;
  std::string condition_;
};

/// Precomputed coupled generator for one network, kinetics pair and relation.
class CouplingModel {
 public:
  CouplingModel(const ReactionNetwork& net, KineticsPair kinetics, AffineRelation rel);

  /// Outgoing transitions of the coupled chain from w, zero rates omitted.
  /// At a related pair every distinct reaction vector is classified into the
  /// case table; the rates a = q^X(x, x+xi), b = q^Y(y, y+xi) are exact.
  /// Throws HypothesisViolation when the table needs a negative rate (case 2
  /// with a < b, case 4 with b < a), case 6 has a != b, case 8 is reached, or
  /// a case without a move for one component drops positive rate of it.
  std::vector<CoupledTransition> rates(const CoupledState& w) const;

  /// q^X(x, x+xi) for distinct vector k (exact).
  Rational rate_x(const State& x, std::size_t k) const;
  Rational rate_y(const State& y, std::size_t k) const;

  const ReactionNetwork& network() const { return net_; }
  const AffineRelation& relation() const { return rel_; }
  const KineticsPair& kinetics() const { return kinetics_; }

 private:
  Rational group_rate(const std::vector<Rational>& k, const State& s, std::size_t group) const;

  const ReactionNetwork& net_;
  KineticsPair kinetics_;
  AffineRelation rel_;
  std::vector<std::vector<std::size_t>> groups_;  // reactions per distinct vector
};

std::vector<CoupledTransition> coupled_rates(const ReactionNetwork& net, const KineticsPair& kinetics,
                                             const AffineRelation& rel, const CoupledState& w);

enum class Termination { TMax, MaxEvents, Absorbed };

std::string to_string(Termination t);

struct CoupledEvent {
  double time = 0;
  CoupledState state;  // state after the jump
  CaseTag tag = CaseTag::Outside;
  IntVector xi;
  Move move = Move::X;
};

struct CoupledTrajectory {
  CoupledState initial;
  std::vector<CoupledEvent> events;
  Termination terminated_by = Termination::TMax;
  std::size_t relation_violations = 0;  // visited pairs outside the relation
};

inline constexpr std::uint64_t kDefaultMaxEvents = 1'000'000;

/// Exact SSA on the coupled generator. Deterministic for a fixed seed.
CoupledTrajectory simulate_coupled(const ReactionNetwork& net, const KineticsPair& kinetics,
                                   const AffineRelation& rel, const State& x0, const State& y0,
                                   double t_max, std::uint64_t seed,
                                   std::uint64_t max_events = kDefaultMaxEvents);

/// "t<TAB>x<TAB>y<TAB>case<TAB>xi" lines, vectors comma-separated; the first
/// line is the initial state with case and xi set to "-".
std::string export_trajectory(const CoupledTrajectory& trajectory);

struct SsaEvent {
  double time = 0;
  State state;  // state after the jump
  std::size_t reaction = 0;
};

struct SsaTrajectory {
  State initial;
  std::vector<SsaEvent> events;
  Termination terminated_by = Termination::TMax;
};

/// Gillespie direct method for one parameterization.
SsaTrajectory simulate_ssa(const ReactionNetwork& net, const std::vector<Rational>& constants,
                           const State& x0, double t_max, std::uint64_t seed,
                           std::uint64_t max_events = kDefaultMaxEvents);

/// State of a trajectory at time t (the last state entered at or before t).
State state_at(const SsaTrajectory& trajectory, double t);
CoupledState state_at(const CoupledTrajectory& trajectory, double t);

struct EnsembleOptions {
  std::size_t trajectories = 1000;
  std::uint64_t seed = 1;
  double t_max = 10;
  std::uint64_t max_events = kDefaultMaxEvents;
  std::vector<double> checkpoints;
  std::size_t workers = 1;
};

/// Per-checkpoint sample of one component over the ensemble.
struct CheckpointSample {
  double time = 0;
  std::vector<State> states;  // indexed by trajectory
};

struct SpeciesMoments {
  double mean = 0;
  double standard_error = 0;
};

/// Sample mean and standard error per species.
std::vector<SpeciesMoments> moments(const std::vector<State>& states);

struct CoupledEnsemble {
  std::size_t trajectories = 0;
  std::size_t relation_violations = 0;
  std::size_t events = 0;
  std::size_t terminated_t_max = 0;
  std::size_t terminated_max_events = 0;
  std::size_t terminated_absorbed = 0;
  std::vector<CheckpointSample> x_samples;
  std::vector<CheckpointSample> y_samples;
};

/// Independent coupled trajectories; trajectory i uses a stream derived from
/// (seed, i), so results do not depend on the worker count.
CoupledEnsemble run_coupled_ensemble(const ReactionNetwork& net, const KineticsPair& kinetics,
                                     const AffineRelation& rel, const State& x0, const State& y0,
                                     const EnsembleOptions& options);

/// Plain SSA ensemble sampled at the checkpoints.
std::vector<CheckpointSample> run_ssa_ensemble(const ReactionNetwork& net,
                                               const std::vector<Rational>& constants,
                                               const State& x0, const EnsembleOptions& options);

/// Non-negative states z with C z = C anchor and every coordinate <= radius.
std::vector<State> class_box(const ReactionNetwork& net, const State& anchor, std::int64_t radius);

struct OracleViolation {
  char condition = 'a';  // 'a', 'b' or 'c'
  CoupledState state;
  IntVector xi;
  Rational qx;  // q^X(x, x+xi), zero outside E
  Rational qy;
};

struct OracleReport {
  std::size_t states = 0;          // box states in the anchor's class
  std::size_t related_pairs = 0;   // (x, y) in the relation, both in the box
  std::size_t violation_count = 0;
  std::vector<OracleViolation> violations;  // at most max_recorded, in scan order
};

/// Brute-force check of conditions (a), (b), (c) of the pathwise comparison
/// theorem for every related pair in the box and every distinct reaction
/// vector. E is the non-negative orthant, so successor membership is exact.
OracleReport oracle_check_conditions(const ReactionNetwork& net, const KineticsPair& kinetics,
                                     const AffineRelation& rel, std::int64_t box_radius,
                                     const State& anchor, std::size_t workers = 1,
                                     std::size_t max_recorded = std::numeric_limits<std::size_t>::max());

/// Checks that at every sampled related pair the coupled generator moves the
/// X component to x + xi at total rate q^X(x, x+xi), and likewise for Y.
/// A HypothesisViolation counts as failure.
bool marginal_rate_identity(const ReactionNetwork& net, const KineticsPair& kinetics,
                            const AffineRelation& rel, const std::vector<CoupledState>& sample_states);

}  // namespace srnorder

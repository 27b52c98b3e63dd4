#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace drinv {

struct Outcome {
  int next = 0;
  double prob = 0.0;
};

// Finite MDP with sparse transition rows and expected rewards R(s, a).
struct ExplicitMDP {
  int num_states = 0;
  int num_actions = 0;
  std::vector<std::vector<std::vector<Outcome>>> transitions;  // [s][a]
  std::vector<std::vector<double>> reward;                     // [s][a]
  double gamma = 0.9;

  // Every row sums to 1 within 1e-12, indices in range, rewards finite.
  void validate() const;
};

// States are (base state, pending a_1, ..., a_k); a_1 is executed next.
struct AugmentedMDP {
  ExplicitMDP mdp;
  int base_states = 0;
  int base_actions = 0;
  int delay = 0;

  int encode(int base, std::span<const int> pending) const;
  int base_of(int state) const;
  std::vector<int> pending_of(int state) const;
  std::string describe(int state) const;
};

inline constexpr std::size_t kDefaultAugmentedCap = 100000;

// ((s, a_1..a_k), a) -> ((s', a_2..a_k, a)) with s' ~ P(s, a_1, .) and reward
// R(s, a_1). Throws SizeError when |S| * |A|^k exceeds `cap`.
AugmentedMDP enumerate_augmented(const ExplicitMDP& mdp, int delay,
                                 std::size_t cap = kDefaultAugmentedCap);

struct MdpSolution {
  std::vector<double> value;
  std::vector<std::vector<double>> q;
  std::vector<int> policy;  // greedy, lowest index on ties
  int iterations = 0;
};

// Stops once the sup-norm Bellman residual is below tol (1 - gamma) / (2 gamma),
// which bounds the value error by tol.
MdpSolution value_iteration(const ExplicitMDP& mdp, double gamma, double tol);

// One product, on-hand capacity 5, order 0/1/2 units (arriving before demand),
// deterministic demand of 1 per step, reward sales - 0.1 holding - 0.5 unmet,
// gamma 0.9. Overflow above capacity is discarded.
ExplicitMDP tiny_inventory_mdp();

// Tabular Q-values over discrete (augmented) states; rows default to zero.
class QTable {
 public:
  QTable() = default;
  QTable(int num_states, int num_actions);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double& at(int s, int a);
  double at(int s, int a) const;
  std::span<const double> row(int s) const;
  int greedy(int s) const;

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> values_;
};

QTable table_from(const MdpSolution& solution);

struct PolicyMismatch {
  int state = 0;
  int learned_action = 0;
  int optimal_action = 0;
  double margin = 0.0;
};

struct CertificationReport {
  int delay = 0;
  std::size_t states_total = 0;
  std::size_t states_checked = 0;       // visited >= min_visits
  std::size_t states_ambiguous = 0;     // optimal margin <= 2 * max_q_error
  std::vector<PolicyMismatch> mismatches;
  // Learned greedy actions whose exact value falls short of optimal by more
  // than the tie tolerance; `margin` holds the shortfall. Catches flips on
  // ambiguous states too, while exact ties are never counted.
  std::vector<PolicyMismatch> suboptimal;
  double max_q_error = 0.0;
  double value_span = 0.0;
  bool passed() const { return mismatches.empty(); }
  bool within_tolerance(double fraction) const { return max_q_error <= fraction * value_span; }
};

// Compares greedy actions over states visited at least `min_visits` times.
// A disagreement counts only when the optimal action wins by more than
// 2 * max |Q_learned - Q*| over the checked states.
CertificationReport certify(const QTable& learned, const MdpSolution& exact,
                            std::span<const long> visit_counts, long min_visits,
                            double tie_tolerance = 1e-8);

void write_report_text(std::ostream& out, const CertificationReport& report,
                       const AugmentedMDP& mdp);
void write_report_csv(std::ostream& out, const CertificationReport& report, const AugmentedMDP& mdp,
                      const QTable& learned, const MdpSolution& exact,
                      std::span<const long> visit_counts, long min_visits);

}  // namespace drinv

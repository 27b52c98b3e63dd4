#include "drinv/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "drinv/error.hpp"

namespace drinv {

void ExplicitMDP::validate() const {
  require(num_states >= 1 && num_actions >= 1, "ExplicitMDP: empty state or action set");
  require(transitions.size() == static_cast<std::size_t>(num_states) &&
              reward.size() == static_cast<std::size_t>(num_states),
          "ExplicitMDP: tables sized inconsistently with num_states");
  require(gamma >= 0.0 && gamma < 1.0, "ExplicitMDP: gamma must be in [0,1)");
  for (int s = 0; s < num_states; ++s) {
    require(transitions[s].size() == static_cast<std::size_t>(num_actions) &&
                reward[s].size() == static_cast<std::size_t>(num_actions),
            "ExplicitMDP: tables sized inconsistently with num_actions");
    for (int a = 0; a < num_actions; ++a) {
      require(std::isfinite(reward[s][a]), "ExplicitMDP: non-finite reward");
      double total = 0.0;
      for (const auto& o : transitions[s][a]) {
        require(o.next >= 0 && o.next < num_states, "ExplicitMDP: successor out of range");
        require(o.prob >= 0.0, "ExplicitMDP: negative probability");
        total += o.prob;
      }
      if (std::abs(total - 1.0) > 1e-12)
        throw ContractViolation("ExplicitMDP: row (" + std::to_string(s) + "," + std::to_string(a) +
                                ") sums to " + std::to_string(total));
    }
  }
}

int AugmentedMDP::encode(int base, std::span<const int> pending) const {
  require(pending.size() == static_cast<std::size_t>(delay), "AugmentedMDP::encode: wrong pending length");
  require(base >= 0 && base < base_states, "AugmentedMDP::encode: base state out of range");
  int index = base;
  for (int a : pending) {
    require(a >= 0 && a < base_actions, "AugmentedMDP::encode: action out of range");
    index = index * base_actions + a;
  }
  return index;
}

int AugmentedMDP::base_of(int state) const {
  for (int j = 0; j < delay; ++j) state /= base_actions;
  return state;
}

std::vector<int> AugmentedMDP::pending_of(int state) const {
  std::vector<int> pending(static_cast<std::size_t>(delay));
  for (int j = delay; j-- > 0;) {
    pending[static_cast<std::size_t>(j)] = state % base_actions;
    state /= base_actions;
  }
  return pending;
}

std::string AugmentedMDP::describe(int state) const {
  std::ostringstream os;
  os << "(s=" << base_of(state) << "; pending=[";
  const auto pending = pending_of(state);
  for (std::size_t j = 0; j < pending.size(); ++j) os << (j ? "," : "") << pending[j];
  os << "])";
  return os.str();
}

AugmentedMDP enumerate_augmented(const ExplicitMDP& mdp, int delay, std::size_t cap) {
  mdp.validate();
  require(delay >= 0, "enumerate_augmented: delay must be >= 0");
  double count = static_cast<double>(mdp.num_states);
  for (int j = 0; j < delay; ++j) count *= mdp.num_actions;
  if (count > static_cast<double>(cap))
    throw SizeError("enumerate_augmented: " + std::to_string(static_cast<long double>(count)) +
                    " augmented states exceed cap " + std::to_string(cap));

  AugmentedMDP out;
  out.base_states = mdp.num_states;
  out.base_actions = mdp.num_actions;
  out.delay = delay;
  if (delay == 0) {
    out.mdp = mdp;
    return out;
  }

  const int n = static_cast<int>(count);
  const int A = mdp.num_actions;
  int tail_size = 1;  // A^(k-1), the number of (a_2..a_k) suffixes
  for (int j = 1; j < delay; ++j) tail_size *= A;

  out.mdp.num_states = n;
  out.mdp.num_actions = A;
  out.mdp.gamma = mdp.gamma;
  out.mdp.transitions.assign(static_cast<std::size_t>(n), {});
  out.mdp.reward.assign(static_cast<std::size_t>(n), {});
  for (int s = 0; s < n; ++s) {
    const int pending_index = s % (tail_size * A);
    const int base = s / (tail_size * A);
    const int executed = pending_index / tail_size;
    const int tail = pending_index % tail_size;
    auto& rows = out.mdp.transitions[static_cast<std::size_t>(s)];
    rows.resize(static_cast<std::size_t>(A));
    out.mdp.reward[static_cast<std::size_t>(s)].assign(static_cast<std::size_t>(A),
                                                       mdp.reward[base][executed]);
    for (int a = 0; a < A; ++a) {
      for (const auto& o : mdp.transitions[base][executed])
        rows[a].push_back({(o.next * tail_size + tail) * A + a, o.prob});
    }
  }
  return out;
}

MdpSolution value_iteration(const ExplicitMDP& mdp, double gamma, double tol) {
  mdp.validate();
  require(gamma >= 0.0 && gamma < 1.0, "value_iteration: gamma must be in [0,1)");
  require(tol > 0.0, "value_iteration: tol must be > 0");
  const auto S = static_cast<std::size_t>(mdp.num_states);
  const auto A = static_cast<std::size_t>(mdp.num_actions);
  const double threshold =
      gamma == 0.0 ? std::numeric_limits<double>::infinity() : tol * (1.0 - gamma) / (2.0 * gamma);

  MdpSolution sol;
  sol.value.assign(S, 0.0);
  sol.q.assign(S, std::vector<double>(A, 0.0));
  std::vector<double> next(S);
  for (;;) {
    double residual = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < A; ++a) {
        double q = mdp.reward[s][a];
        for (const auto& o : mdp.transitions[s][a]) q += gamma * o.prob * sol.value[o.next];
        sol.q[s][a] = q;
        best = std::max(best, q);
      }
      next[s] = best;
      residual = std::max(residual, std::abs(best - sol.value[s]));
    }
    sol.value.swap(next);
    ++sol.iterations;
    if (residual < threshold) break;
  }
  // Q and the policy from the final value estimate.
  sol.policy.assign(S, 0);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      double q = mdp.reward[s][a];
      for (const auto& o : mdp.transitions[s][a]) q += gamma * o.prob * sol.value[o.next];
      sol.q[s][a] = q;
    }
    sol.policy[s] = static_cast<int>(std::max_element(sol.q[s].begin(), sol.q[s].end()) - sol.q[s].begin());
  }
  return sol;
}

ExplicitMDP tiny_inventory_mdp() {
  constexpr int kCapacity = 5;
  constexpr int kDemand = 1;
  ExplicitMDP mdp;
  mdp.num_states = kCapacity + 1;
  mdp.num_actions = 3;
  mdp.gamma = 0.9;
  mdp.transitions.assign(static_cast<std::size_t>(mdp.num_states), {});
  mdp.reward.assign(static_cast<std::size_t>(mdp.num_states), {});
  for (int s = 0; s <= kCapacity; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a) {
      const int available = std::min(kCapacity, s + a);
      const int sales = std::min(kDemand, available);
      const int holding = available - sales;
      const int unmet = kDemand - sales;
      mdp.transitions[s].push_back({{holding, 1.0}});
      mdp.reward[s].push_back(sales - 0.1 * holding - 0.5 * unmet);
    }
  }
  return mdp;
}

QTable::QTable(int num_states, int num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      values_(static_cast<std::size_t>(num_states) * static_cast<std::size_t>(num_actions), 0.0) {
  require(num_states >= 1 && num_actions >= 1, "QTable: empty table");
}

double& QTable::at(int s, int a) {
  require(s >= 0 && s < num_states_ && a >= 0 && a < num_actions_, "QTable: index out of range");
  return values_[static_cast<std::size_t>(s) * num_actions_ + a];
}

double QTable::at(int s, int a) const { return const_cast<QTable*>(this)->at(s, a); }

std::span<const double> QTable::row(int s) const {
  require(s >= 0 && s < num_states_, "QTable: state out of range");
  return {values_.data() + static_cast<std::size_t>(s) * num_actions_,
          static_cast<std::size_t>(num_actions_)};
}

int QTable::greedy(int s) const {
  const auto r = row(s);
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

QTable table_from(const MdpSolution& solution) {
  require(!solution.q.empty(), "table_from: empty solution");
  QTable t(static_cast<int>(solution.q.size()), static_cast<int>(solution.q.front().size()));
  for (std::size_t s = 0; s < solution.q.size(); ++s)
    for (std::size_t a = 0; a < solution.q[s].size(); ++a)
      t.at(static_cast<int>(s), static_cast<int>(a)) = solution.q[s][a];
  return t;
}

namespace {

double optimal_margin(const std::vector<double>& q, int best) {
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < q.size(); ++a)
    if (static_cast<int>(a) != best) second = std::max(second, q[a]);
  return q.size() == 1 ? std::numeric_limits<double>::infinity() : q[static_cast<std::size_t>(best)] - second;
}

}  // namespace

CertificationReport certify(const QTable& learned, const MdpSolution& exact,
                            std::span<const long> visit_counts, long min_visits, double tie_tolerance) {
  const auto S = exact.q.size();
  if (static_cast<std::size_t>(learned.num_states()) != S || visit_counts.size() != S ||
      (S > 0 && static_cast<std::size_t>(learned.num_actions()) != exact.q.front().size()))
    throw ContractViolation("certify: learned table, exact solution and visit counts disagree on indexing");

  CertificationReport report;
  report.states_total = S;
  const auto [lo, hi] = std::minmax_element(exact.value.begin(), exact.value.end());
  report.value_span = *hi - *lo;

  std::vector<int> checked;
  for (std::size_t s = 0; s < S; ++s) {
    if (visit_counts[s] < min_visits) continue;
    checked.push_back(static_cast<int>(s));
    for (std::size_t a = 0; a < exact.q[s].size(); ++a)
      report.max_q_error = std::max(
          report.max_q_error, std::abs(learned.at(static_cast<int>(s), static_cast<int>(a)) - exact.q[s][a]));
  }
  report.states_checked = checked.size();

  for (int s : checked) {
    const auto& q = exact.q[static_cast<std::size_t>(s)];
    const int best = exact.policy[static_cast<std::size_t>(s)];
    const int mine = learned.greedy(s);
    const double shortfall = q[static_cast<std::size_t>(best)] - q[static_cast<std::size_t>(mine)];
    if (shortfall > tie_tolerance) report.suboptimal.push_back({s, mine, best, shortfall});
    const double margin = optimal_margin(q, best);
    if (margin <= 2.0 * report.max_q_error) {
      ++report.states_ambiguous;
      continue;
    }
    if (mine != best) report.mismatches.push_back({s, mine, best, margin});
  }
  return report;
}

void write_report_text(std::ostream& out, const CertificationReport& r, const AugmentedMDP& mdp) {
  out << "delay " << r.delay << ": " << (r.passed() ? "PASS" : "FAIL") << '\n'
      << "  augmented states     " << r.states_total << '\n'
      << "  checked (visited)    " << r.states_checked << '\n'
      << "  ambiguous (margin)   " << r.states_ambiguous << '\n'
      << "  mismatches           " << r.mismatches.size() << '\n'
      << "  suboptimal greedy    " << r.suboptimal.size() << '\n'
      << "  max |Q - Q*|         " << r.max_q_error << '\n'
      << "  value span           " << r.value_span << '\n';
  for (const auto& m : r.mismatches) {
    out << "  mismatch at state " << m.state << ' ' << mdp.describe(m.state) << ": learned action "
        << m.learned_action << ", optimal action " << m.optimal_action << " (margin " << m.margin << ")\n";
  }
  for (const auto& m : r.suboptimal) {
    out << "  suboptimal at state " << m.state << ' ' << mdp.describe(m.state) << ": learned action "
        << m.learned_action << " loses " << m.margin << " against action " << m.optimal_action << '\n';
  }
}

void write_report_csv(std::ostream& out, const CertificationReport& r, const AugmentedMDP& mdp,
                      const QTable& learned, const MdpSolution& exact,
                      std::span<const long> visit_counts, long min_visits) {
  out << "delay,state,base_state,pending,visits,optimal_action,learned_action,margin,max_abs_q_error,status\n";
  for (std::size_t s = 0; s < exact.q.size(); ++s) {
    const int si = static_cast<int>(s);
    double err = 0.0;
    for (std::size_t a = 0; a < exact.q[s].size(); ++a)
      err = std::max(err, std::abs(learned.at(si, static_cast<int>(a)) - exact.q[s][a]));
    const double margin = optimal_margin(exact.q[s], exact.policy[s]);
    std::string status;
    if (visit_counts[s] < min_visits)
      status = "unvisited";
    else if (std::any_of(r.suboptimal.begin(), r.suboptimal.end(),
                         [&](const PolicyMismatch& m) { return m.state == si; }))
      status = "suboptimal";
    else if (margin <= 2.0 * r.max_q_error)
      status = "ambiguous";
    else
      status = learned.greedy(si) == exact.policy[s] ? "match" : "mismatch";
    std::string pending;
    for (int a : mdp.pending_of(si)) pending += (pending.empty() ? "" : " ") + std::to_string(a);
    out << r.delay << ',' << s << ',' << mdp.base_of(si) << ',' << pending << ',' << visit_counts[s]
        << ',' << exact.policy[s] << ',' << learned.greedy(si) << ',' << margin << ',' << err << ','
        << status << '\n';
  }
}

}  // namespace drinv

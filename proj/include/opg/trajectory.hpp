#pragma once

#include <Eigen/Dense>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace opg {

using State = Eigen::VectorXd;

/// One rollout of H decision steps: states s_0..s_H (H+1 of them, the last
/// being the terminal state), actions a_0..a_{H-1} and rewards r_0..r_{H-1}.
struct Trajectory {
  std::vector<State> states;
  std::vector<double> actions;
  std::vector<double> rewards;

  int horizon() const { return static_cast<int>(actions.size()); }

  double total_reward() const {
    return std::accumulate(rewards.begin(), rewards.end(), 0.0);
  }

  bool consistent() const {
    return states.size() == actions.size() + 1 && rewards.size() == actions.size();
  }
};

/// A batch of independent rollouts from one behavior policy, all sharing the
/// same horizon.
struct Dataset {
  std::vector<Trajectory> trajectories;

  int size() const { return static_cast<int>(trajectories.size()); }
  int horizon() const { return trajectories.empty() ? 0 : trajectories.front().horizon(); }
  const Trajectory& operator[](int i) const { return trajectories[i]; }
};

namespace detail {

inline std::string format_state(const State& s) {
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i < s.size(); ++i) {
    if (i > 0) out << ';';
    out << s(i);
  }
  return out.str();
}

inline State parse_state(const std::string& text) {
  std::vector<double> parts;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) parts.push_back(std::stod(item));
  State s(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) s(static_cast<int>(i)) = parts[i];
  return s;
}

}  // namespace detail

/// Debug CSV with columns (traj_id, t, s, a, r); the terminal state appears
/// as a row with empty action/reward fields. Multi-dimensional states pack
/// components with ';'.
inline void write_csv(const Dataset& data, std::ostream& out) {
  out << "traj_id,t,s,a,r\n";
  out.precision(17);
  for (int i = 0; i < data.size(); ++i) {
    const Trajectory& traj = data[i];
    for (int t = 0; t <= traj.horizon(); ++t) {
      out << i << ',' << t << ',' << detail::format_state(traj.states[t]) << ',';
      if (t < traj.horizon()) {
        out << traj.actions[t] << ',' << traj.rewards[t];
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
}

inline Dataset read_csv(std::istream& in) {
  Dataset data;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset csv: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id_text, t_text, s_text, a_text, r_text;
    std::getline(row, id_text, ',');
    std::getline(row, t_text, ',');
    std::getline(row, s_text, ',');
    std::getline(row, a_text, ',');
    std::getline(row, r_text, ',');
    const std::size_t id = std::stoul(id_text);
    if (id >= data.trajectories.size()) data.trajectories.resize(id + 1);
    Trajectory& traj = data.trajectories[id];
    traj.states.push_back(detail::parse_state(s_text));
    if (!a_text.empty()) {
      traj.actions.push_back(std::stod(a_text));
      traj.rewards.push_back(std::stod(r_text));
    }
  }
  for (const Trajectory& traj : data.trajectories) {
    if (!traj.consistent()) throw std::runtime_error("dataset csv: inconsistent trajectory");
  }
  return data;
}

}  // namespace opg

// Copyright 2026 The svrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svrl/eval.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "svrl/errors.hpp"

namespace svrl {
namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void record(TrialReport& report, const World& world, WheelCommand cmd, const StepResult& step) {
  report.trajectory.push_back({world.elapsed(), world.rover.x, world.rover.y, world.rover.heading, cmd.left,
                               cmd.right, step.reward, step.outcome});
  report.total_reward += step.reward;
  ++report.steps;
  report.outcome = step.outcome;
}

}  // namespace

PolicyController::PolicyController(const PolicyNetwork& policy, bool stochastic, std::uint64_t seed)
    : policy_(policy), stochastic_(stochastic), rng_(seed) {}

WheelCommand PolicyController::act(const Tensor& observation, RecurrentState& state) {
  PolicyOutput out = policy_.forward(observation, state);
  state = std::move(out.state);
  ActionVec action = out.mean;
  if (stochastic_)
    for (int k = 0; k < kActionDim; ++k) action[k] += std::exp(out.log_std[k]) * rng_.normal();
  return WheelCommand::clamped(action[0], action[1]);
}

const char* controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Ppo: return "ppo";
    case ControllerKind::P: return "p";
    case ControllerKind::Random: return "random";
  }
  return "p";
}

ControllerKind parse_controller(std::string_view name) {
  for (ControllerKind k : {ControllerKind::Ppo, ControllerKind::P, ControllerKind::Random})
    if (name == controller_name(k)) return k;
  throw ConfigError("unknown controller '" + std::string(name) + "' (expected ppo, p or random)");
}

TrialReport run_episode(VisuomotorController& controller, NetKind kind, const EnvSpec& spec, std::uint64_t seed) {
  World world = generate_episode(seed, spec.world);
  TrialReport report;
  report.seed = seed;
  RecurrentState state = controller.initial_state();
  WheelCommand previous{};
  while (!is_terminal(world.outcome)) {
    // The only view of the world a learned controller gets.
    const Tensor obs = observe_for(kind, world, spec, previous);
    const WheelCommand cmd = controller.act(obs, state);
    const StepResult step = control_step(world, cmd, spec.reward);
    record(report, world, cmd, step);
    previous = cmd;
  }
  report.final_goal_distance = world.goal_distance();
  return report;
}

TrialReport run_episode(GoalSeekingController& controller, const EnvSpec& spec, std::uint64_t seed) {
  World world = generate_episode(seed, spec.world);
  TrialReport report;
  report.seed = seed;
  while (!is_terminal(world.outcome)) {
    const WheelCommand cmd = controller.act(world.rover, world.goal);
    const StepResult step = control_step(world, cmd, spec.reward);
    record(report, world, cmd, step);
  }
  report.final_goal_distance = world.goal_distance();
  return report;
}

TrialReport run_episode(OpenLoopController& controller, const EnvSpec& spec, std::uint64_t seed) {
  World world = generate_episode(seed, spec.world);
  TrialReport report;
  report.seed = seed;
  while (!is_terminal(world.outcome)) {
    const WheelCommand cmd = controller.act();
    const StepResult step = control_step(world, cmd, spec.reward);
    record(report, world, cmd, step);
  }
  report.final_goal_distance = world.goal_distance();
  return report;
}

TrialBatch run_trials(const ControllerSpec& controller, const EnvSpec& spec, int n_trials,
                      std::uint64_t base_seed) {
  if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
  spec.validate();
  if (controller.kind == ControllerKind::Ppo) {
    if (!controller.policy) throw ConfigError("ppo controller requires a policy checkpoint");
    check_network_compatible(controller.policy->config(), spec);
  }
  if (controller.kind == ControllerKind::P) controller.p.validate();

  TrialBatch batch;
  batch.reports.reserve(n_trials);
  for (int i = 0; i < n_trials; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    TrialReport report;
    switch (controller.kind) {
      case ControllerKind::Ppo: {
        PolicyController c(*controller.policy, controller.stochastic, controller.seed + i);
        report = run_episode(c, controller.policy->config().kind, spec, seed);
        break;
      }
      case ControllerKind::P: {
        PController c(controller.p);
        report = run_episode(c, spec, seed);
        break;
      }
      case ControllerKind::Random: {
        RandomController c(controller.seed + i);
        report = run_episode(c, spec, seed);
        break;
      }
    }
    report.trial = i;
    batch.reports.push_back(std::move(report));
  }
  batch.summary = summarize(controller_name(controller.kind), batch.reports);
  return batch;
}

SummaryTable summarize(std::string controller, const std::vector<TrialReport>& reports) {
  SummaryTable table;
  table.controller = std::move(controller);
  table.trials = static_cast<int>(reports.size());
  if (reports.empty()) return table;
  int s = 0, c = 0, f = 0, t = 0;
  for (const TrialReport& r : reports) {
    switch (r.outcome) {
      case Outcome::Success: ++s; break;
      case Outcome::Collision: ++c; break;
      case Outcome::Fall: ++f; break;
      case Outcome::Timeout: ++t; break;
      case Outcome::Running: break;
    }
  }
  const double n = static_cast<double>(reports.size());
  table.success = 100.0 * s / n;
  table.collision = 100.0 * c / n;
  table.fall = 100.0 * f / n;
  table.timeout = 100.0 * t / n;
  return table;
}

std::string format_summary_table(const std::vector<SummaryTable>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %7s %9s %10s %7s %9s\n", "controller", "trials", "success", "collision",
                "fall", "timeout");
  out << line;
  for (const SummaryTable& r : rows) {
    std::snprintf(line, sizeof(line), "%-12s %7d %8.1f%% %9.1f%% %6.1f%% %8.1f%%\n", r.controller.c_str(), r.trials,
                  r.success, r.collision, r.fall, r.timeout);
    out << line;
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryTable>& rows) {
  std::ostringstream out;
  out << "controller,trials,success,collision,fall,timeout\n";
  for (const SummaryTable& r : rows)
    out << r.controller << ',' << r.trials << ',' << exact(r.success) << ',' << exact(r.collision) << ','
        << exact(r.fall) << ',' << exact(r.timeout) << '\n';
  return out.str();
}

std::string trajectory_csv_header() { return "trial,seed,t,x,y,heading,left,right,reward,outcome"; }

void write_trajectories(const std::vector<TrialReport>& reports, std::ostream& out) {
  out << trajectory_csv_header() << '\n';
  for (const TrialReport& r : reports)
    for (const TrajectoryStep& s : r.trajectory)
      out << r.trial << ',' << r.seed << ',' << exact(s.t) << ',' << exact(s.x) << ',' << exact(s.y) << ','
          << exact(s.heading) << ',' << exact(s.left) << ',' << exact(s.right) << ',' << exact(s.reward) << ','
          << outcome_name(s.outcome) << '\n';
}

void export_trajectories(const std::vector<TrialReport>& reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_trajectories(reports, out);
  if (!out) throw IoError("short write to '" + path + "'");
}

std::vector<TrialReport> import_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != trajectory_csv_header())
    throw ConfigError("'" + path + "' does not start with the trajectory header");
  std::vector<TrialReport> reports;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 10 columns");
    auto num = [&](int i) {
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0')
        throw ConfigError(path + ":" + std::to_string(line_no) + ": bad number '" + cells[i] + "'");
      return v;
    };
    const int trial = std::stoi(cells[0]);
    const std::uint64_t seed = std::stoull(cells[1]);
    if (reports.empty() || reports.back().trial != trial) {
      TrialReport r;
      r.trial = trial;
      r.seed = seed;
      reports.push_back(r);
    }
    TrialReport& r = reports.back();
    TrajectoryStep step{num(2), num(3), num(4), num(5), num(6), num(7), num(8), parse_outcome(cells[9])};
    r.trajectory.push_back(step);
    r.total_reward += step.reward;
    r.steps = static_cast<int>(r.trajectory.size());
    r.outcome = step.outcome;
  }
  return reports;
}

ReplayResult replay_trajectories(const std::vector<TrialReport>& reports, const EnvSpec& spec) {
  ReplayResult result;
  for (const TrialReport& r : reports) {
    ++result.trials;
    World world = generate_episode(r.seed, spec.world);
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      const TrajectoryStep& rec = r.trajectory[i];
      auto fail = [&](const std::string& what) {
        result.identical = false;
        result.first_mismatch = "trial " + std::to_string(r.trial) + " step " + std::to_string(i) + ": " + what;
        return result;
      };
      if (is_terminal(world.outcome)) return fail("episode already terminated");
      const StepResult step = control_step(world, {rec.left, rec.right}, spec.reward);
      ++result.steps;
      if (world.elapsed() != rec.t) return fail("clock " + exact(world.elapsed()) + " != " + exact(rec.t));
      if (world.rover.x != rec.x || world.rover.y != rec.y || world.rover.heading != rec.heading)
        return fail("pose differs");
      if (step.reward != rec.reward) return fail("reward " + exact(step.reward) + " != " + exact(rec.reward));
      if (step.outcome != rec.outcome)
        return fail(std::string("outcome ") + outcome_name(step.outcome) + " != " + outcome_name(rec.outcome));
    }
    if (!r.trajectory.empty() && !is_terminal(world.outcome)) {
      result.identical = false;
      result.first_mismatch = "trial " + std::to_string(r.trial) + ": recording ends before the episode";
      return result;
    }
  }
  return result;
}

}  // namespace svrl

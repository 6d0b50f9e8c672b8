#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "thinflow/harness/config.hpp"
#include "thinflow/harness/export.hpp"
#include "thinflow/jump.hpp"

namespace thinflow {

struct SweepMetrics {
  double eps = 0.0;
  std::vector<double> l2_error;   // one per snapshot
  double flux = 0.0;              // t = 0
  double extension = 0.0;         // t = 0
  double measure = 0.0;
  double moment_rate = 0.0;
  double support_radius = 0.0;    // at T
};

struct ResultBundle {
  std::string config_hash;
  Table conservation;
  Table convergence;
  Table family;
  Table jump;
  nlohmann::json fits;
  nlohmann::json metadata;
  std::vector<SweepMetrics> metrics;

  // Writes conservation.csv, convergence.csv, family.csv, jump.csv, fits.json, metadata.json.
  void write(const std::filesystem::path& dir) const;
};

struct ExperimentArtifacts {
  Trajectory limit;
  std::vector<Trajectory> eps_runs;
};

// Runs the limit problem and every member of the sweep, computes all tables, and writes them
// to cfg.output when write is set. Solver errors are rethrown with the run index.
ResultBundle run_experiment(const RunConfig& cfg, bool write = true, ExperimentArtifacts* artifacts = nullptr);

// Index of the recorded state at time t (record stride 1).
std::size_t snapshot_index(const Trajectory& traj, double t);

// Conservation rows for one run.
void append_conservation(Table& table, const std::string& run, double eps, const Trajectory& traj);

}  // namespace thinflow

#pragma once

#include <string>
#include <vector>

#include "subharmonic/config.hpp"
#include "subharmonic/markov.hpp"

namespace subharmonic {

struct RunOptions {
  std::string out_dir = ".";
  int workers = 1;
  bool resume = false;  ///< scans keep rows already present in their output CSV
};

struct RunReport {
  int points = 0;   ///< grid points or records produced
  int failed = 0;   ///< points whose computation raised an error
  int resumed = 0;  ///< points taken from an earlier run
  std::vector<std::string> files;
};

/// floquet-spectrum, nocc-map, poincare, averaged-equilibria,
/// resonance-region, chaos-bounds, gap-scan.
const std::vector<std::string>& command_names();

/// Validates the whole config before any computation; ConfigError on
/// problems. Per-point failures are counted in the report, not thrown.
RunReport run_command(const std::string& name, const ConfigNode& config, const RunOptions& options);

struct QuantumSettings {
  int dim = 300;
  PropagatorSettings propagator;
  DecomposeSettings decompose;
  BathSpec bath;
};

struct QuantumPoint {
  Propagator propagator;
  FloquetDecomposition decomp;
  SteadyState steady;
};

/// Propagator, Floquet decomposition, golden-rule rates and steady state.
QuantumPoint solve_quantum_point(const NormalizedModel& model, const FockOperators& ops,
                                 const QuantumSettings& settings);

}  // namespace subharmonic

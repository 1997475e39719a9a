#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "biot/experiments.hpp"

namespace biot {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// "# key=value" lines, used as a preamble in CSV files.
void write_config_comment(const ConfigEntries& cfg, std::ostream& out);
/// A two-column markdown table of the configuration.
void write_config_markdown(const ConfigEntries& cfg, std::ostream& out);

/// Shortest round-trip representation of a double.
std::string format_double(double v);

void write_convergence_csv(const std::vector<ConvergenceCell>& cells, std::ostream& out);
/// One block per K, energy and pressure error rows, one column per N.
void write_convergence_markdown(const std::vector<ConvergenceCell>& cells, std::ostream& out);

void write_bench_csv(const std::vector<BenchCell>& cells, std::ostream& out);
/// One block per sweep, one row per preconditioner, one column per point.
void write_bench_markdown(const std::vector<BenchCell>& cells, std::ostream& out);

/// Pressure per triangle with its centroid.
void write_pressure_csv(const Mesh& mesh, const Vec& p, std::ostream& out);

}  // namespace biot

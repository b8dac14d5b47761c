#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "zitterdyn/dynamics.hpp"
#include "zitterdyn/energy.hpp"
#include "zitterdyn/spectrum.hpp"
#include "zitterdyn/trajectory.hpp"

namespace zitterdyn {

inline constexpr const char* kVersionStamp = "zitterdyn 0.1.0";

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Writes a header row then one line per record, numbers with 17 significant digits,
/// CRLF line ends, fields quoted when needed. Returns the number of data rows.
/// Throws InvalidArgument for a record whose width differs from the schema or an
/// unwritable path.
std::size_t export_csv(const std::vector<std::vector<double>>& records, const std::vector<std::string>& schema,
                       const std::string& path);

/// Parses what export_csv writes (also accepts LF line ends).
CsvTable read_csv(const std::string& path);

std::vector<std::string> trajectory_schema();
std::vector<std::string> energy_schema(int n_terms);

/// Rows (t, x, v, a, r, residual): r from the light-cone solve at t and the
/// equation-of-motion residual of (emission at t_r, reception at t); NaN where the
/// past light cone leaves the trajectory.
std::vector<std::vector<double>> trajectory_records(const TrajectoryHistory& trajectory, const ModelParams& params);

/// Rows (beta, bdot, E_exact, E_rel, Q_closed, Q_series_N, defect) over the grid.
std::vector<std::vector<double>> energy_records(const std::vector<double>& betas, const std::vector<double>& bdots,
                                                const ModelParams& params, int n_terms);

nlohmann::json to_json(const RootSet& roots, const ModelParams& params);
RootSet rootset_from_json(const nlohmann::json& j);

/// Serializes with a fixed indent and a trailing newline.
void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

}  // namespace zitterdyn

#pragma once

#include "sit/analysis.hpp"
#include "sit/sim.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace sit {

// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

// Header `t,F,Ms,u,V` (reduced) or `t,F,Ms,E,M,u,V` (full); one row per
// recorded sample, 17 significant digits, CRLF line ends.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

// Reads the format written above. Termination and step metadata are not part
// of the file and come back as defaults.
Trajectory read_trajectory_csv(std::istream& is);

// Header `check,grid,pass,worst_value,witness_F,witness_Ms`.
void write_audit_csv(std::span<const AuditReport> reports, std::ostream& os);

}  // namespace sit

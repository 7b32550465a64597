#pragma once
#include <string>

#include "solver.hpp"

namespace ik6rp {

// Chain file schema:
// { "name": "...", "joints": [ { "type": "R"|"P", "theta_deg": number|"*",
//                                "d": number|"*", "a": number, "alpha_deg": number } x6 ] }
// "*" marks the joint variable and must match the type.
ChainSpec parse_chain_json(const std::string& json_text);
ChainSpec parse_chain_file(const std::string& path);
std::string emit_chain_json(const ChainSpec& chain);

struct ParsedPose {
  StudyPoint pose;
  double correction = 0.0;  // Study residual of the raw input, removed by the repair
};

// Accepts "x0,x1,...,y3" (8 values), or a row-major homogeneous matrix with 12 or 16
// values. Eight-tuples slightly off the quadric (printed-precision input) are repaired
// by the minimal-norm adjustment of the dual part; residuals above pose_tol are errors.
ParsedPose parse_pose(const std::string& text, double pose_tol = 1e-3);

// Degeneracy / family-selection report for the `check` command.
std::string check_report_text(const ChainSpec& chain);
std::string check_report_json(const ChainSpec& chain);

// Solution rendering. JSON output is byte-stable across runs (timing excluded);
// the table includes the timing footer.
std::string solutions_json(const ChainSpec& chain, const SolveResult& result);
std::string solutions_table(const ChainSpec& chain, const SolveResult& result);
std::string fk_pose_string(const StudyPoint& pose);

}  // namespace ik6rp

#pragma once

#include <string>
#include <vector>

#include "knapcrack/formulations.hpp"
#include "knapcrack/pipeline.hpp"

namespace knapcrack {

// Text format: "m n", then m rows of A, then the m entries of b. Lines
// starting with '#' are comments. Throws ParseError.
LdeSystem parse_system(const std::string& text);
std::string format_system(const LdeSystem& sys, const std::vector<std::string>& comments = {});

std::string read_text_file(const std::string& path);  // IoFailure when unreadable
void write_text_file(const std::string& path, const std::string& contents);
LdeSystem read_system(const std::string& path);

std::string outcome_to_json(const AttackOutcome& outcome);
// Inverse of outcome_to_json; throws ParseError.
AttackOutcome outcome_from_json(const std::string& text);

// Grid lines "m,n,algo,dag,M,t_max,count,seed"; blank lines, '#' comments
// and a header line starting with "m," are skipped.
std::vector<BenchCell> parse_grid(const std::string& text);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace knapcrack

#pragma once

// Command-line front end. Subcommands: evolve, fronts, scaling, edge.
// Exit status: 0 success, 2 configuration error, 3 numerical guard violation.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace qwalk::cli {

int run(int argc, char** argv);

// Flat `key = value` lines ('#' starts a comment). Throws ConfigError on
// malformed lines or a missing file.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// A number or a multiple of pi, e.g. "0.3", "pi/2", "5pi/12", "-pi".
double parse_angle(const std::string& text);

// Comma-separated list of parse_angle values.
std::vector<double> parse_angle_list(const std::string& text);

// %.17g, '.' decimal separator regardless of locale.
std::string format_number(double x);

// Runs body(i) for i in [0, n) on `jobs` worker threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace qwalk::cli

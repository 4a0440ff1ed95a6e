#pragma once

#include <string>

#include "certnn/network.hpp"
#include "certnn/pipeline.hpp"

namespace certnn {

// JSON with deterministic field order throughout, so identical objects
// serialize byte-for-byte. Parse errors and dimension inconsistencies throw
// std::runtime_error with the offending key in the message.

std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);
Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);

std::string problem_to_json(const ProblemSpec& spec);
ProblemSpec problem_from_json(const std::string& text);
ProblemSpec load_problem(const std::string& path);
void save_problem(const ProblemSpec& spec, const std::string& path);

std::string report_to_json(const RunReport& report);
void save_report(const RunReport& report, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace certnn

#ifndef COMPDIST_TOOLS_COMMANDS_HPP
#define COMPDIST_TOOLS_COMMANDS_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "output.hpp"

namespace compdist_cli {

// Runs `command` from its resolved config. When row_filter is set, only
// those row indices are produced (in filter order); this is how `check`
// revalidates sampled rows without a full rerun. svg_out, when non-null,
// receives a rendered plot for commands that have one.
TableDoc run_command(const std::string& command, const json& config,
                     const std::vector<std::size_t>* row_filter = nullptr,
                     std::string* svg_out = nullptr,
                     std::vector<json>* stream_records = nullptr);

// Revalidates a stored document: recomputes three sampled rows from the
// embedded config and compares them cell by cell. Returns an empty string
// on success, else a description of the first mismatch.
std::string check_stored_doc(const std::string& path);

std::vector<double> parse_grid(const std::string& spec);

}  // namespace compdist_cli

#endif

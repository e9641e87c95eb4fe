#pragma once

#include <string>

#include "flexdes/cli/config.hpp"
#include "flexdes/domain.hpp"

namespace flexdes::cli {

/// Rounds to 12 significant digits, the precision used by every emitted
/// JSON number; golden comparisons run at 1e-9 relative.
double snap12(double v);

std::string tree_to_json(const ScenarioTree& tree);
ScenarioTree tree_from_json(const std::string& text);

std::string design_result_to_json(const DesignResult& r, const std::string& objective,
                                  const std::string& market_mode);

/// Write-temp-rename; replaces atomically on POSIX filesystems.
void write_text_atomic(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// FNV-1a of a byte string, hex-encoded; used for manifest content hashes.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace flexdes::cli

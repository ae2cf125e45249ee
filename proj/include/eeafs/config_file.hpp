#ifndef EEAFS_CONFIG_FILE_HPP
#define EEAFS_CONFIG_FILE_HPP

#include <filesystem>
#include <iosfwd>

#include "eeafs/scenario.hpp"

namespace eeafs {

// Key-value sections: [scenario], [fs], and one [loop.N] per loop.
// See docs/scenario_schema.md. Throws ConfigError on any problem.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

void write_config(std::ostream& out, const ScenarioConfig& cfg);

} // namespace eeafs

#endif

#ifndef XORCAST_CONFIG_HPP
#define XORCAST_CONFIG_HPP

#include <map>
#include <string>

#include "xorcast/sim.hpp"

namespace xorcast {

/// Sectioned key-value config text: `[section]` headers, `key = value`
/// lines, `#` comments. Sections: run, traffic, channel, algorithm. All
/// keys are optional; defaults follow the simulated scenario (300 kbps
/// link, three 70 kbps flows, 100 ms budget, 4 ms mean delay).
RunConfig parse_config_text(const std::string& text);

RunConfig load_config(const std::string& path);

}  // namespace xorcast

#endif

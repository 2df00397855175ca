#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace scandict {

// Plain key=value configuration: one pair per line, '#' starts a comment, blank lines ignored,
// whitespace around keys and values trimmed. Later duplicates win. Throws ParseError.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

ConfigEntries parse_config(std::istream& in);
ConfigEntries load_config(const std::string& path);

// Turns entries into "--key=value" arguments.
std::vector<std::string> config_as_flags(const ConfigEntries& entries);

} // namespace scandict

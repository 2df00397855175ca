#include "scandict/config.hpp"

#include <fstream>
#include <istream>

#include "scandict/grid.hpp"

namespace scandict {

namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ConfigEntries parse_config(std::istream& in)
{
    ConfigEntries out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(number) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("config line " + std::to_string(number) + ": empty key");
        }
        if (key.rfind("--", 0) == 0) {
            key.erase(0, 2);
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

ConfigEntries load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

std::vector<std::string> config_as_flags(const ConfigEntries& entries)
{
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& [key, value] : entries) {
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

} // namespace scandict

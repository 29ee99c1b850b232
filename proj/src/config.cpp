#include "epidd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace epidd {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out)
{
    const auto t = trim(s);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size() && !t.empty();
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin)
{
    Config c;
    c.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(no) + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find_first_of(" \t") != std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(no) + ": malformed key '" + key + "'");
        if (c.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(no) + ": duplicate key '" + key + "' (first on line " +
                              std::to_string(c.entries_[key].line) + ")");
        c.entries_[key] = {value, no};
    }
    return c;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value)
{
    auto& e = entries_[key];
    e.value = value;
}

void Config::bad_value(const std::string& key, const std::string& expected) const
{
    const auto& e = entries_.at(key);
    const std::string where = e.line > 0 ? origin_ + ":" + std::to_string(e.line) + ": " : "";
    throw ConfigError(where + "key '" + key + "' expects " + expected + ", got '" + e.value + "'");
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const
{
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    double v = 0.0;
    if (!parse_double(it->second.value, v)) bad_value(key, "a number");
    return v;
}

int Config::get_int(const std::string& key, int fallback) const
{
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto& s = it->second.value;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) bad_value(key, "an integer");
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string s = it->second.value;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    bad_value(key, "a boolean");
}

std::vector<double> Config::get_doubles(const std::string& key) const
{
    std::vector<double> out;
    auto it = entries_.find(key);
    if (it == entries_.end()) return out;
    std::string s = it->second.value;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        double v = 0.0;
        if (!parse_double(tok, v)) bad_value(key, "a list of numbers");
        out.push_back(v);
    }
    return out;
}

void Config::check_keys(const std::set<std::string>& known, const std::vector<std::string>& prefixes) const
{
    for (const auto& [key, e] : entries_) {
        if (known.count(key)) continue;
        const bool prefixed = std::any_of(prefixes.begin(), prefixes.end(),
                                          [&](const std::string& p) { return key.rfind(p, 0) == 0; });
        if (prefixed) continue;
        const std::string where = e.line > 0 ? origin_ + ":" + std::to_string(e.line) + ": " : "";
        throw ConfigError(where + "unknown key '" + key + "'");
    }
}

std::vector<std::string> Config::keys() const
{
    std::vector<std::string> k;
    for (const auto& [key, e] : entries_) k.push_back(key);
    return k;
}

}  // namespace epidd

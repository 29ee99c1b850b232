#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace epidd {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat `key = value` file. Keys may be dotted (`model.beta_central`); `#`
// starts a comment.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;

    // Throws on any key outside `known` or outside a known prefix such as "bc.".
    void check_keys(const std::set<std::string>& known, const std::vector<std::string>& prefixes = {}) const;
    std::vector<std::string> keys() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries_;
    std::string origin_;

    [[noreturn]] void bad_value(const std::string& key, const std::string& expected) const;
};

}  // namespace epidd

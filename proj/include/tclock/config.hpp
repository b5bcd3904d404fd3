#ifndef TCLOCK_CONFIG_HPP
#define TCLOCK_CONFIG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tclock/errors.hpp"

namespace tclock {

// Run configuration files are line-oriented:
//   [section]
//   key = value        # trailing comments allowed
// Unknown keys are rejected against each command's schema, so typos fail
// loudly instead of silently running defaults.

class RunConfig {
public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    /// Comma-separated list of numbers; an empty value yields an empty list.
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    /// Reject keys not in the schema (map section -> allowed keys).
    void validate_schema(const std::map<std::string, std::set<std::string>>& schema) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::string origin_;

    const Entry* find(const std::string& section, const std::string& key) const;
    const Entry& require(const std::string& section, const std::string& key) const;
};

} // namespace tclock

#endif

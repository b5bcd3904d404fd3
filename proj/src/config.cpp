#include "tclock/config.hpp"

#include <fstream>
#include <sstream>

namespace tclock {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

RunConfig RunConfig::parse_string(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.origin_ = origin;
    std::stringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
            cfg.sections_[section]; // sections may legitimately stay empty
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": key '" + key + "' outside any [section]");
        if (cfg.sections_[section].count(key))
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                              key + "' in [" + section + "]");
        cfg.sections_[section][key] = Entry{value, line_no};
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

const RunConfig::Entry* RunConfig::find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

const RunConfig::Entry& RunConfig::require(const std::string& section,
                                           const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e)
        throw ConfigError(origin_ + ": missing required key '" + key + "' in [" + section + "]");
    return *e;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
    return require(section, key).value;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    try {
        size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                          "' is not a number: '" + e.value + "'");
    }
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

int RunConfig::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    const double v = get_double(section, key);
    const int i = static_cast<int>(v);
    if (i != v)
        throw ConfigError(origin_ + ": key '" + key + "' must be an integer");
    return i;
}

std::vector<double> RunConfig::get_list(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        try {
            size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": bad list entry '" + t +
                              "' for key '" + key + "'");
        }
    }
    return out;
}

void RunConfig::validate_schema(const std::map<std::string, std::set<std::string>>& schema) const {
    for (const auto& [section, keys] : sections_) {
        const auto it = schema.find(section);
        if (it == schema.end())
            throw ConfigError(origin_ + ": unknown section [" + section + "]");
        for (const auto& [key, entry] : keys) {
            if (!it->second.count(key))
                throw ConfigError(origin_ + ":" + std::to_string(entry.line) +
                                  ": unknown key '" + key + "' in [" + section + "]");
        }
    }
}

} // namespace tclock

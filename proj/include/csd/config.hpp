#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "csd/common.hpp"

namespace csd::io {

/// Flat key-value run configuration. Sources, in override order: built-in
/// defaults, then a `key = value` config file, then explicit command-line
/// flags. Unknown keys are rejected; a duplicate key in the file wins with a
/// warning. Every run echoes its fully-resolved config next to its outputs.
class RunConfig {
  public:
    static const std::set<std::string>& known_keys();

    /// Built-in defaults for one command (simulate | probe | convergence | selftest).
    static RunConfig defaults(const std::string& command);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    const std::string& command() const { return command_; }

    std::string gets(const std::string& key) const;
    int geti(const std::string& key) const;
    double getd(const std::string& key) const;
    bool getb(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;
    std::uint64_t getu64(const std::string& key) const;

    /// Merge `key = value` lines from a file (comments start with '#').
    void merge_file(const std::string& path);

    /// Per-command semantic checks; throws ConfigError naming the offending key.
    void validate() const;

    /// Write the resolved configuration, sorted by key.
    void echo(const std::string& path) const;

    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::string command_;
    std::map<std::string, std::string> kv_;
    std::vector<std::string> warnings_;
};

}  // namespace csd::io

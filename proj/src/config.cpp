#include "csd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace csd::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

const std::set<std::string>& RunConfig::known_keys() {
    static const std::set<std::string> keys = {
        // shared
        "n", "length", "seed", "outdir",
        // simulate / convergence
        "dt", "t_final", "mass", "s", "snapshot_stride", "integrator", "picard_iters",
        "picard_steps", "theorem_regime", "blowup_threshold", "data", "data_band_lo",
        "data_band_hi", "data_annulus", "data_norm", "gaussian_width",
        // probe
        "probe", "trials", "scales", "a", "q", "r", "alpha", "interval", "time_samples", "s1",
        "s2", "s3",
        // convergence
        "levels",
        // selftest
        "sizes",
    };
    return keys;
}

RunConfig RunConfig::defaults(const std::string& command) {
    RunConfig c;
    c.command_ = command;
    c.set("length", "6.283185307179586");
    c.set("seed", "12345");
    c.set("outdir", "out");
    if (command == "simulate" || command == "convergence") {
        c.set("n", "128");
        c.set("dt", "0.001");
        c.set("t_final", "1.0");
        c.set("mass", "0.0");
        c.set("s", "0.45");
        c.set("snapshot_stride", "0");
        c.set("integrator", "exprk4");
        c.set("picard_iters", "8");
        c.set("picard_steps", "64");
        c.set("theorem_regime", "true");
        c.set("blowup_threshold", "1e12");
        c.set("data", "random_hs");
        c.set("data_band_lo", "2");
        c.set("data_band_hi", "8");
        c.set("data_annulus", "0");
        c.set("data_norm", "1.0");
        c.set("gaussian_width", "0.5");
        if (command == "convergence") c.set("levels", "3");
    } else if (command == "probe") {
        c.set("n", "256");
        c.set("s", "0.3");
        c.set("a", "0");
        c.set("q", "4");
        c.set("r", "2");
        c.set("alpha", "0.5");
        c.set("interval", "1.0");
        c.set("time_samples", "64");
        c.set("trials", "100");
        c.set("scales", "1,2,4,8,16,32,64");
        c.set("probe", "");
        c.set("s1", "-1");
        c.set("s2", "-1");
        c.set("s3", "-1");
    } else if (command == "selftest") {
        c.set("sizes", "32,64");
    } else {
        throw ConfigError("unknown command: " + command);
    }
    return c;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ConfigError("unknown config key: " + key);
    kv_[key] = value;
}

std::string RunConfig::gets(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing required config key: " + key);
    return it->second;
}

int RunConfig::geti(const std::string& key) const {
    const std::string v = gets(key);
    try {
        std::size_t pos = 0;
        const long r = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return int(r);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
    }
}

double RunConfig::getd(const std::string& key) const {
    const std::string v = gets(key);
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
    }
}

bool RunConfig::getb(const std::string& key) const {
    const std::string v = gets(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected boolean, got '" + v + "'");
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
    const std::string v = gets(key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': expected number list, got '" + v + "'");
        }
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::uint64_t RunConfig::getu64(const std::string& key) const {
    const std::string v = gets(key);
    try {
        std::size_t pos = 0;
        const std::uint64_t r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected unsigned integer, got '" + v + "'");
    }
}

void RunConfig::merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        if (seen.count(key))
            warnings_.push_back("duplicate key '" + key + "' in " + path + "; last occurrence wins");
        seen.insert(key);
        set(key, value);  // throws on unknown key
    }
}

void RunConfig::validate() const {
    if (command_ == "simulate" || command_ == "convergence") {
        const int n = geti("n");
        if (n < 4 || (n & (n - 1)) != 0) throw ConfigError("config key 'n': must be a power of two >= 4");
        if (!(getd("dt") > 0.0)) throw ConfigError("config key 'dt': must be positive");
        if (!(getd("t_final") > 0.0)) throw ConfigError("config key 't_final': must be positive");
        if (!(getd("length") > 0.0)) throw ConfigError("config key 'length': must be positive");
        const double s = getd("s");
        if (getb("theorem_regime") && !(s > 0.25 && s < 1.0))
            throw ConfigError("config key 's': value " + gets("s") +
                              " outside (1/4, 1); theorem-regime mode rejects it");
        const std::string integ = gets("integrator");
        if (integ != "exprk4" && integ != "picard")
            throw ConfigError("config key 'integrator': expected exprk4 or picard");
        const std::string data = gets("data");
        if (data != "random_hs" && data != "gaussian")
            throw ConfigError("config key 'data': expected random_hs or gaussian");
        if (geti("picard_iters") < 1) throw ConfigError("config key 'picard_iters': must be >= 1");
    } else if (command_ == "probe") {
        const int n = geti("n");
        if (n < 4 || (n & (n - 1)) != 0) throw ConfigError("config key 'n': must be a power of two >= 4");
        if (geti("trials") < 1) throw ConfigError("config key 'trials': must be >= 1");
        if (geti("time_samples") < 2) throw ConfigError("config key 'time_samples': must be >= 2");
        get_list("scales");
    }
}

void RunConfig::echo(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "# resolved configuration (command = " << command_ << ")\n";
    for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
}

}  // namespace csd::io

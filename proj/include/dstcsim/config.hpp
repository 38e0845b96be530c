#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "dstcsim/buffers.hpp"
#include "dstcsim/common.hpp"
#include "dstcsim/selection.hpp"
#include "dstcsim/signal_model.hpp"

namespace dstcsim {

enum class RelayDetector { Rake, Mmse, Perfect };
enum class DestDetector { Rake, Mmse, Ml };

struct SnrSweep {
    double min_db = 0.0;
    double max_db = 20.0;
    double step_db = 2.0;

    std::vector<double> points() const {
        std::vector<double> out;
        for (double s = min_db; s <= max_db + 1e-9; s += step_db)
            out.push_back(s);
        return out;
    }
};

struct SimConfig {
    int users = 3;
    int relays = 6;
    int chips = 16;
    int symbols_per_packet = 1000;

    int buffer_size = 6;  // J
    DynamicBufferPolicy buffer_policy;
    bool buffered = true;

    SelectionStrategy selection = SelectionStrategy::Exhaustive;
    RelayDetector relay_detector = RelayDetector::Mmse;
    DestDetector dest_detector = DestDetector::Rake;
    ChannelLaw channel_law = ChannelLaw::UniformRing;

    SnrSweep snr;
    long packets = 200;  // delivered packets per sweep point
    std::uint64_t seed = 1;

    bool channel_estimation = false;
    int pilots = 16;

    std::string out = "results.csv";
    std::string svg;  // empty: no plot
    int threads = 0;  // 0: hardware default

    void validate() const {
        if (users < 1)
            throw ConfigError("config: users must be >= 1");
        if (relays < 2)
            throw ConfigError("config: relays must be >= 2");
        if (chips < 1)
            throw ConfigError("config: chips must be >= 1");
        if (symbols_per_packet < 1)
            throw ConfigError("config: symbols must be >= 1");
        if (buffer_size < 1)
            throw ConfigError("config: buffer-size must be >= 1");
        buffer_policy.validate();
        if (snr.step_db <= 0.0)
            throw ConfigError("config: snr step must be > 0");
        if (snr.min_db > snr.max_db)
            throw ConfigError("config: snr min must be <= max");
        if (packets < 1)
            throw ConfigError("config: packets must be >= 1");
        if (channel_estimation && pilots < 1)
            throw ConfigError("config: pilots must be >= 1 with channel estimation");
        if (channel_estimation && pilots < users)
            throw ConfigError("config: pilots must be >= users for the least-squares estimate");
        if (dest_detector == DestDetector::Ml && users > 8)
            throw ConfigError("config: joint ML destination supports at most 8 users");
        if (selection == SelectionStrategy::None && relays % 2 != 0)
            throw ConfigError("config: selection=none needs an even relay count");
    }
};

inline double snr_db_to_noise_var(double snr_db) {
    return std::pow(10.0, -snr_db / 10.0);
}

// ---- enum <-> string -------------------------------------------------------

inline SelectionStrategy parse_selection(const std::string& s) {
    if (s == "exhaustive") return SelectionStrategy::Exhaustive;
    if (s == "greedy") return SelectionStrategy::Greedy;
    if (s == "random") return SelectionStrategy::Random;
    if (s == "none") return SelectionStrategy::None;
    throw ConfigError("config: unknown selection '" + s + "'");
}

inline RelayDetector parse_relay_detector(const std::string& s) {
    if (s == "rake") return RelayDetector::Rake;
    if (s == "mmse") return RelayDetector::Mmse;
    if (s == "perfect") return RelayDetector::Perfect;
    throw ConfigError("config: unknown relay detector '" + s + "'");
}

inline DestDetector parse_dest_detector(const std::string& s) {
    if (s == "rake") return DestDetector::Rake;
    if (s == "mmse") return DestDetector::Mmse;
    if (s == "ml") return DestDetector::Ml;
    throw ConfigError("config: unknown destination detector '" + s + "'");
}

inline BufferMode parse_buffer_mode(const std::string& s) {
    if (s == "fixed") return BufferMode::Fixed;
    if (s == "snr" || s == "snr-driven") return BufferMode::SnrDriven;
    if (s == "power" || s == "power-driven") return BufferMode::PowerDriven;
    throw ConfigError("config: unknown buffer mode '" + s + "'");
}

inline ChannelLaw parse_channel_law(const std::string& s) {
    if (s == "uniform") return ChannelLaw::UniformRing;
    if (s == "rayleigh") return ChannelLaw::ComplexGaussian;
    throw ConfigError("config: unknown channel law '" + s + "'");
}

// "a:b:c" -> sweep a..b step c; "a" -> the single point a
inline SnrSweep parse_snr(const std::string& s) {
    SnrSweep sweep;
    const std::size_t c1 = s.find(':');
    try {
        if (c1 == std::string::npos) {
            sweep.min_db = sweep.max_db = std::stod(s);
            sweep.step_db = 1.0;
            return sweep;
        }
        const std::size_t c2 = s.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw ConfigError("config: snr expects 'min:max:step' or a single value");
        sweep.min_db = std::stod(s.substr(0, c1));
        sweep.max_db = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
        sweep.step_db = std::stod(s.substr(c2 + 1));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config: bad snr value '" + s + "'");
    }
    return sweep;
}

// ---- key = value config files ----------------------------------------------

inline std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for '" + key + "': '" + value + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "off" || value == "false" || value == "0" || value == "no")
        return false;
    throw ConfigError("config: bad boolean for '" + key + "': '" + value + "'");
}

// Applies one key. Flag names double as file keys; buffer.* aliases cover the
// buffer policy block.
inline void apply_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "users") cfg.users = static_cast<int>(parse_long(key, value));
    else if (key == "relays") cfg.relays = static_cast<int>(parse_long(key, value));
    else if (key == "chips") cfg.chips = static_cast<int>(parse_long(key, value));
    else if (key == "symbols") cfg.symbols_per_packet = static_cast<int>(parse_long(key, value));
    else if (key == "buffer-size" || key == "buffer.J") cfg.buffer_size = static_cast<int>(parse_long(key, value));
    else if (key == "buffer-mode" || key == "buffer.mode") cfg.buffer_policy.mode = parse_buffer_mode(value);
    else if (key == "buffer.Jmin") cfg.buffer_policy.j_min = static_cast<int>(parse_long(key, value));
    else if (key == "buffer.Jmax") cfg.buffer_policy.j_max = static_cast<int>(parse_long(key, value));
    else if (key == "buffer.gamma") cfg.buffer_policy.gamma = parse_double(key, value);
    else if (key == "buffer.d1") cfg.buffer_policy.d1 = static_cast<int>(parse_long(key, value));
    else if (key == "buffer.d2") cfg.buffer_policy.d2 = static_cast<int>(parse_long(key, value));
    else if (key == "buffer.d3") cfg.buffer_policy.d3 = static_cast<int>(parse_long(key, value));
    else if (key == "buffers") cfg.buffered = parse_bool(key, value);
    else if (key == "selection") cfg.selection = parse_selection(value);
    else if (key == "relay-detector") cfg.relay_detector = parse_relay_detector(value);
    else if (key == "dest-detector") cfg.dest_detector = parse_dest_detector(value);
    else if (key == "channel-law") cfg.channel_law = parse_channel_law(value);
    else if (key == "snr") cfg.snr = parse_snr(value);
    else if (key == "packets") cfg.packets = parse_long(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "channel-estimation") cfg.channel_estimation = parse_bool(key, value);
    else if (key == "pilots") cfg.pilots = static_cast<int>(parse_long(key, value));
    else if (key == "out") cfg.out = value;
    else if (key == "svg") cfg.svg = value;
    else if (key == "threads") cfg.threads = static_cast<int>(parse_long(key, value));
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

inline void apply_config_file(SimConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    for (const auto& [key, value] : read_key_values(in))
        apply_key(cfg, key, value);
}

}  // namespace dstcsim

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qprior {

/// Runtime configuration: flat `key = value` file, overridden by flags.
/// QPRIOR_CONFIG names the default config path.
struct Config {
    double q_min = 0.5;
    double q_max = 500.0;
    std::string pb_convention = "sqrt";  // sqrt | printed
    double pb_printed_delta = 1e-6;
    double rel_tol_1d = 1e-10;
    double rel_tol_3d = 1e-8;
    double rel_tol_4d = 1e-5;
    double kl_rel_tol = 1e-7;
    long max_evals = 100000000L;
    std::string out_dir = ".";
    std::uint64_t seed = 12345;

    void validate() const {
        if (!(q_min < q_max)) throw std::invalid_argument("config: q_min must be < q_max");
        if (!(q_min > 0.0)) throw std::invalid_argument("config: q_min must be > 0");
        if (!(rel_tol_1d > 0.0 && rel_tol_3d > 0.0 && rel_tol_4d > 0.0 && kl_rel_tol > 0.0))
            throw std::invalid_argument("config: tolerances must be > 0");
        if (pb_convention != "sqrt" && pb_convention != "printed")
            throw std::invalid_argument("config: pb_convention must be sqrt or printed");
    }

    void set(const std::string& key, const std::string& value) {
        if (key == "q_min") q_min = std::stod(value);
        else if (key == "q_max") q_max = std::stod(value);
        else if (key == "pb_convention") pb_convention = value;
        else if (key == "pb_printed_delta") pb_printed_delta = std::stod(value);
        else if (key == "rel_tol_1d") rel_tol_1d = std::stod(value);
        else if (key == "rel_tol_3d") rel_tol_3d = std::stod(value);
        else if (key == "rel_tol_4d") rel_tol_4d = std::stod(value);
        else if (key == "kl_rel_tol") kl_rel_tol = std::stod(value);
        else if (key == "max_evals") max_evals = std::stol(value);
        else if (key == "out_dir") out_dir = value;
        else if (key == "seed") seed = static_cast<std::uint64_t>(std::stoull(value));
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline Config load_config_file(const std::string& path, Config base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config: expected key = value, got '" + line + "'");
        base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    base.validate();
    return base;
}

/// Loads QPRIOR_CONFIG when set, otherwise defaults.
inline Config load_config_from_env() {
    if (const char* path = std::getenv("QPRIOR_CONFIG")) return load_config_file(path);
    return {};
}

}  // namespace qprior

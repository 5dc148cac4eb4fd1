#pragma once

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "procap/dataset_io.hpp"

namespace procap::test {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string data_path(const std::string& name) {
    return std::string(PROCAP_TEST_DATA_DIR) + "/" + name;
}

inline Dataset load_table2() { return parse_dataset(read_file(data_path("table2.csv"))); }

// PCAP_SEED pins every simulation-based test; the default keeps runs
// reproducible when the variable is unset.
inline std::uint64_t test_seed() {
    if (const char* env = std::getenv("PCAP_SEED")) return std::strtoull(env, nullptr, 10);
    return 987654321ULL;
}

inline std::mt19937_64 seeded_rng(std::uint64_t salt = 0) {
    return std::mt19937_64(test_seed() + salt);
}

} // namespace procap::test

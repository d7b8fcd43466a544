#pragma once

#include <string>
#include <vector>

#include "plum/core_data.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(PLUM_DATA_DIR) + "/" + name; }

inline plum::CoreDataset load(const std::string& name) {
    std::vector<std::string> warnings;
    return plum::read_dataset_file(data_path(name), {}, warnings);
}

inline plum::CoreDataset hp1c() { return load("hp1c.csv"); }
inline plum::CoreDataset table2() { return load("table2.csv"); }

/// True age of the simulated core.
inline double true_age(double x) { return x * x / 3.0 + x / 2.0; }

}  // namespace fixtures

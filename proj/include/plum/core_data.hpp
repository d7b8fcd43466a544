#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace plum {

/// One core slice covering (depth_bottom - thickness, depth_bottom].
struct Measurement {
    double depth_bottom = 0.0;  // cm
    double thickness = 1.0;     // cm
    double density = 0.0;       // g/cm^2 per slice
    double total_pb = 0.0;      // Bq/kg
    double sigma = 0.0;         // Bq/kg

    double depth_top() const { return depth_bottom - thickness; }

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// A direct observation of the supported 210Pb concentration.
struct SupportedDatum {
    double value = 0.0;  // Bq/kg
    double sigma = 0.0;  // Bq/kg

    friend bool operator==(const SupportedDatum&, const SupportedDatum&) = default;
};

struct CoreDataset {
    std::vector<Measurement> measurements;  // strictly increasing depth_bottom
    std::vector<SupportedDatum> supported;
    std::string label;

    double deepest() const;

    friend bool operator==(const CoreDataset&, const CoreDataset&) = default;
};

struct ParseOptions {
    double default_thickness = 1.0;
    std::string label;
};

/// Parses the measurement CSV. Columns are matched by header name
/// (depth_cm, pb210_bqkg, sigma_bqkg, density, optional thickness_cm; the
/// short forms depth, pb210, sigma, thickness are accepted too). Rows are
/// sorted by depth and the result is validated. Non-fatal findings such as
/// sampling gaps are appended to `warnings`.
CoreDataset parse_dataset(std::string_view csv_text, const ParseOptions& options,
                          std::vector<std::string>& warnings);
CoreDataset parse_dataset(std::string_view csv_text, const ParseOptions& options = {});

/// Parses a `value_bqkg,sigma_bqkg` CSV.
std::vector<SupportedDatum> parse_supported(std::string_view csv_text);

/// Writes the measurement CSV with an explicit thickness column. Values are
/// printed in shortest round-trip form, so parse(serialize(ds)) == ds.
std::string serialize_dataset(const CoreDataset& ds);
std::string serialize_supported(const std::vector<SupportedDatum>& supported);

/// Checks every Measurement/CoreDataset invariant; throws InputError.
void validate(const CoreDataset& ds);

struct SplitDataset {
    CoreDataset chronology;                  // carries the tail as its supported data
    std::vector<SupportedDatum> supported;
};

/// Moves the deepest `n_tail` measurements into supported-activity data.
SplitDataset split_supported(const CoreDataset& ds, std::size_t n_tail);

struct SupportedEstimate {
    double mean = 0.0;
    double sd = 0.0;
    bool degenerate = false;  // fewer than two values; sd reported as 0
};

/// Unweighted mean and sample standard deviation of the supported data.
SupportedEstimate tail_supported_estimate(const std::vector<SupportedDatum>& supported);

CoreDataset read_dataset_file(const std::string& path, const ParseOptions& options,
                              std::vector<std::string>& warnings);
std::vector<SupportedDatum> read_supported_file(const std::string& path);

}  // namespace plum

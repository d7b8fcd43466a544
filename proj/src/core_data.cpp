#include "plum/core_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "plum/error.hpp"
#include "text_util.hpp"

namespace plum {

namespace {

// Depth comparisons tolerate representation noise in decimal input.
constexpr double kDepthEps = 1e-9;

struct ColumnMap {
    std::size_t depth, pb, sigma, density;
    std::optional<std::size_t> thickness;
    std::size_t width;
};

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::initializer_list<std::string_view> names) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        for (auto name : names) {
            if (header[i] == name) return i;
        }
    }
    return std::nullopt;
}

ColumnMap map_columns(const std::vector<std::string>& header, std::size_t line) {
    auto require = [&](std::initializer_list<std::string_view> names) {
        auto idx = find_column(header, names);
        if (!idx) throw ParseError(line, "missing column '" + std::string(*names.begin()) + "'");
        return *idx;
    };
    ColumnMap map{};
    map.depth = require({"depth_cm", "depth"});
    map.pb = require({"pb210_bqkg", "pb210"});
    map.sigma = require({"sigma_bqkg", "sigma"});
    map.density = require({"density", "density_gcm2"});
    map.thickness = find_column(header, {"thickness_cm", "thickness"});
    map.width = header.size();
    return map;
}

double field(const std::vector<std::string>& cells, std::size_t idx, std::size_t line,
             std::string_view name) {
    auto value = detail::parse_double(cells[idx]);
    if (!value) {
        throw ParseError(line, "cannot parse " + std::string(name) + " value '" + cells[idx] + "'");
    }
    return *value;
}

std::string fmt(double v) { return detail::format_double(v); }

}  // namespace

double CoreDataset::deepest() const {
    return measurements.empty() ? 0.0 : measurements.back().depth_bottom;
}

void validate(const CoreDataset& ds) {
    if (ds.measurements.empty()) throw InputError("dataset has no measurements");
    for (const auto& m : ds.measurements) {
        const std::string at = " at depth " + fmt(m.depth_bottom);
        if (!std::isfinite(m.depth_bottom) || !std::isfinite(m.total_pb)) {
            throw InputError("non-finite value" + at);
        }
        if (!(m.thickness > 0.0)) throw InputError("thickness must be positive" + at);
        if (!(m.sigma > 0.0)) throw InputError("sigma must be positive" + at);
        if (!(m.density > 0.0)) throw InputError("density must be positive" + at);
        if (m.depth_top() < -kDepthEps) throw InputError("slice extends above the surface" + at);
    }
    for (std::size_t i = 1; i < ds.measurements.size(); ++i) {
        const auto& prev = ds.measurements[i - 1];
        const auto& cur = ds.measurements[i];
        if (std::abs(cur.depth_bottom - prev.depth_bottom) <= kDepthEps) {
            throw InputError("duplicate depth " + fmt(cur.depth_bottom));
        }
        if (cur.depth_bottom < prev.depth_bottom) {
            throw InputError("measurements are not ordered by depth");
        }
        if (cur.depth_top() < prev.depth_bottom - kDepthEps) {
            throw InputError("slice ending at " + fmt(cur.depth_bottom) +
                             " overlaps the slice ending at " + fmt(prev.depth_bottom));
        }
    }
    for (const auto& s : ds.supported) {
        if (!(s.sigma > 0.0)) throw InputError("supported datum sigma must be positive");
        if (!std::isfinite(s.value)) throw InputError("supported datum value is not finite");
    }
}

CoreDataset parse_dataset(std::string_view csv_text, const ParseOptions& options,
                          std::vector<std::string>& warnings) {
    if (!(options.default_thickness > 0.0)) throw InputError("default thickness must be positive");

    auto lines = detail::csv_records(csv_text);
    if (lines.empty()) throw ParseError(1, "empty file: a header row is required");

    const auto& [header_line, header] = lines.front();
    const ColumnMap cols = map_columns(header, header_line);

    CoreDataset ds;
    ds.label = options.label;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [line, cells] = lines[r];
        if (cells.size() != cols.width) {
            throw ParseError(line, "expected " + std::to_string(cols.width) + " fields, found " +
                                       std::to_string(cells.size()));
        }
        Measurement m;
        m.depth_bottom = field(cells, cols.depth, line, "depth");
        m.total_pb = field(cells, cols.pb, line, "pb210");
        m.sigma = field(cells, cols.sigma, line, "sigma");
        m.density = field(cells, cols.density, line, "density");
        m.thickness = cols.thickness ? field(cells, *cols.thickness, line, "thickness")
                                     : options.default_thickness;
        if (!(m.sigma > 0.0)) throw ParseError(line, "sigma must be positive");
        if (!(m.density > 0.0)) throw ParseError(line, "density must be positive");
        if (!(m.thickness > 0.0)) throw ParseError(line, "thickness must be positive");
        ds.measurements.push_back(m);
    }
    if (ds.measurements.empty()) throw ParseError(header_line, "no data rows after the header");

    std::stable_sort(ds.measurements.begin(), ds.measurements.end(),
                     [](const Measurement& a, const Measurement& b) {
                         return a.depth_bottom < b.depth_bottom;
                     });
    validate(ds);

    for (std::size_t i = 1; i < ds.measurements.size(); ++i) {
        const double gap = ds.measurements[i].depth_top() - ds.measurements[i - 1].depth_bottom;
        if (gap > kDepthEps) {
            warnings.push_back("unsampled gap of " + fmt(gap) + " cm between " +
                               fmt(ds.measurements[i - 1].depth_bottom) + " and " +
                               fmt(ds.measurements[i].depth_top()) + " cm");
        }
    }
    return ds;
}

CoreDataset parse_dataset(std::string_view csv_text, const ParseOptions& options) {
    std::vector<std::string> ignored;
    return parse_dataset(csv_text, options, ignored);
}

std::vector<SupportedDatum> parse_supported(std::string_view csv_text) {
    auto lines = detail::csv_records(csv_text);
    if (lines.empty()) throw ParseError(1, "empty file: a header row is required");
    const auto& [header_line, header] = lines.front();
    auto value_col = find_column(header, {"value_bqkg", "value"});
    auto sigma_col = find_column(header, {"sigma_bqkg", "sigma"});
    if (!value_col) throw ParseError(header_line, "missing column 'value_bqkg'");
    if (!sigma_col) throw ParseError(header_line, "missing column 'sigma_bqkg'");

    std::vector<SupportedDatum> out;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [line, cells] = lines[r];
        if (cells.size() != header.size()) {
            throw ParseError(line, "expected " + std::to_string(header.size()) + " fields");
        }
        SupportedDatum d{field(cells, *value_col, line, "value"),
                         field(cells, *sigma_col, line, "sigma")};
        if (!(d.sigma > 0.0)) throw ParseError(line, "sigma must be positive");
        out.push_back(d);
    }
    if (out.empty()) throw ParseError(header_line, "no supported data rows");
    return out;
}

std::string serialize_dataset(const CoreDataset& ds) {
    std::string out = "depth_cm,pb210_bqkg,sigma_bqkg,density,thickness_cm\n";
    for (const auto& m : ds.measurements) {
        out += fmt(m.depth_bottom) + ',' + fmt(m.total_pb) + ',' + fmt(m.sigma) + ',' +
               fmt(m.density) + ',' + fmt(m.thickness) + '\n';
    }
    return out;
}

std::string serialize_supported(const std::vector<SupportedDatum>& supported) {
    std::string out = "value_bqkg,sigma_bqkg\n";
    for (const auto& s : supported) out += fmt(s.value) + ',' + fmt(s.sigma) + '\n';
    return out;
}

SplitDataset split_supported(const CoreDataset& ds, std::size_t n_tail) {
    const std::size_t n = ds.measurements.size();
    if (n_tail < 1 || n_tail >= n) {
        throw InputError("supported tail must be between 1 and " + std::to_string(n - 1) +
                         " for " + std::to_string(n) + " measurements, got " +
                         std::to_string(n_tail));
    }
    SplitDataset out;
    out.chronology.label = ds.label;
    out.chronology.measurements.assign(ds.measurements.begin(),
                                       ds.measurements.end() - static_cast<std::ptrdiff_t>(n_tail));
    for (auto it = ds.measurements.end() - static_cast<std::ptrdiff_t>(n_tail);
         it != ds.measurements.end(); ++it) {
        out.supported.push_back({it->total_pb, it->sigma});
    }
    out.chronology.supported = ds.supported;
    out.chronology.supported.insert(out.chronology.supported.end(), out.supported.begin(),
                                    out.supported.end());
    return out;
}

SupportedEstimate tail_supported_estimate(const std::vector<SupportedDatum>& supported) {
    if (supported.empty()) throw InputError("no supported data to estimate from");
    const double n = static_cast<double>(supported.size());
    const double mean =
        std::accumulate(supported.begin(), supported.end(), 0.0,
                        [](double acc, const SupportedDatum& s) { return acc + s.value; }) / n;
    if (supported.size() == 1) return {mean, 0.0, true};
    double ss = 0.0;
    for (const auto& s : supported) ss += (s.value - mean) * (s.value - mean);
    return {mean, std::sqrt(ss / (n - 1.0)), false};
}

CoreDataset read_dataset_file(const std::string& path, const ParseOptions& options,
                              std::vector<std::string>& warnings) {
    auto text = detail::read_file(path);
    ParseOptions opts = options;
    if (opts.label.empty()) opts.label = path;
    return parse_dataset(text, opts, warnings);
}

std::vector<SupportedDatum> read_supported_file(const std::string& path) {
    return parse_supported(detail::read_file(path));
}

}  // namespace plum

#include "plum/crs.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "plum/error.hpp"
#include "plum/physics.hpp"
#include "plum/stats.hpp"
#include "text_util.hpp"

namespace plum {

namespace {

constexpr std::size_t kTailFitSlices = 4;

// Integral over a gap of length g of an exponential running from density a to b.
double log_mean_inventory(double a, double b, double g) {
    if (std::abs(a - b) <= 1e-12 * std::max(a, b)) return g * a;
    return g * (b - a) / std::log(b / a);
}

// Least-squares decay rate of ln(inventory per cm) against slice mid-depth,
// returning the extrapolated inventory below `bottom`, or nullopt when the
// profile is not decaying.
std::optional<double> exponential_tail(const std::vector<double>& mids,
                                       const std::vector<double>& log_density, double bottom) {
    const std::size_t n = mids.size();
    if (n < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += mids[i];
        my += log_density[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (mids[i] - mx) * (log_density[i] - my);
        sxx += (mids[i] - mx) * (mids[i] - mx);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    const double slope = sxy / sxx;
    if (!(slope < 0.0)) return std::nullopt;
    const double density_at_bottom = std::exp(my + slope * (bottom - mx));
    return density_at_bottom / -slope;
}

CrsPointAges point_ages(const std::vector<Measurement>& ms, const std::vector<double>& conc,
                        double supported, bool extrapolate) {
    const std::size_t n = ms.size();
    std::vector<double> slice(n, 0.0);
    std::vector<bool> kept(n, false);
    CrsPointAges out;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = (conc[i] - supported) * ms[i].density;
        if (a > 0.0) {
            slice[i] = a;
            kept[i] = true;
        } else {
            out.dropped_depths.push_back(ms[i].depth_bottom);
        }
    }

    // gap[i]: interpolated inventory between slice i and slice i + 1
    std::vector<double> gap(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double g = ms[i + 1].depth_top() - ms[i].depth_bottom;
        if (g > 1e-9 && kept[i] && kept[i + 1]) {
            gap[i] = log_mean_inventory(slice[i] / ms[i].thickness,
                                        slice[i + 1] / ms[i + 1].thickness, g);
        }
    }

    std::optional<std::size_t> last;
    for (std::size_t i = n; i-- > 0;) {
        if (kept[i]) {
            last = i;
            break;
        }
    }
    if (!last) return out;
    out.terminal_depth = ms[*last].depth_bottom;

    if (extrapolate) {
        std::vector<double> mids, logs;
        for (std::size_t i = *last + 1; i-- > 0 && mids.size() < kTailFitSlices;) {
            if (!kept[i]) continue;
            mids.push_back(ms[i].depth_bottom - 0.5 * ms[i].thickness);
            logs.push_back(std::log(slice[i] / ms[i].thickness));
        }
        if (auto tail = exponential_tail(mids, logs, ms[*last].depth_bottom)) {
            out.tail_inventory = *tail;
            out.extrapolated = true;
            out.terminal_depth.reset();
        }
    }

    // below[i] = inventory strictly below the bottom of slice i
    std::vector<double> below(n, 0.0);
    double acc = out.tail_inventory;
    for (std::size_t i = n; i-- > 0;) {
        below[i] = acc;
        acc += slice[i] + (i > 0 ? gap[i - 1] : 0.0);
    }
    out.a0 = acc;

    const DecayConstants decay;
    for (std::size_t i = 0; i < n; ++i) {
        if (!kept[i] || !(below[i] > 0.0)) continue;
        out.depths.push_back(ms[i].depth_bottom);
        out.ages.push_back(std::log(out.a0 / below[i]) / decay.lambda);
    }
    return out;
}

std::vector<double> concentrations(const CoreDataset& ds) {
    std::vector<double> c;
    c.reserve(ds.measurements.size());
    for (const auto& m : ds.measurements) c.push_back(m.total_pb);
    return c;
}

}  // namespace

CrsPointAges crs_point_ages(const CoreDataset& ds, double supported_mean, bool extrapolate) {
    if (ds.measurements.empty()) throw InputError("dataset has no measurements");
    return point_ages(ds.measurements, concentrations(ds), supported_mean, extrapolate);
}

CrsResult crs_ages(const CoreDataset& ds, double supported_mean, double supported_sd,
                   std::size_t n_mc, std::uint64_t seed, bool extrapolate) {
    validate(ds);
    if (!(supported_mean >= 0.0)) throw InputError("supported mean must be non-negative");
    if (!(supported_sd >= 0.0)) throw InputError("supported sd must be non-negative");

    const auto base = crs_point_ages(ds, supported_mean, extrapolate);
    const std::size_t retained = ds.measurements.size() - base.dropped_depths.size();
    if (retained == 0) {
        throw InfeasibleError("no unsupported activity: every sample is at or below the supported level");
    }
    if (base.depths.empty()) {
        throw InfeasibleError("no unsupported activity profile: fewer than two samples above background");
    }

    CrsResult result;
    result.supported_mean = supported_mean;
    result.supported_sd = supported_sd;
    result.a0 = base.a0;
    result.supply = DecayConstants{}.lambda * base.a0 * kArealActivityFactor;
    result.dropped_depths = base.dropped_depths;
    result.terminal_depth = base.terminal_depth;
    result.extrapolated = base.extrapolated;
    result.n_mc = n_mc;
    result.seed = seed;
    for (double d : base.dropped_depths) {
        result.warnings.push_back("sample at " + detail::format_double(d) +
                                  " cm has no unsupported activity and was dropped");
    }
    if (extrapolate && !base.extrapolated) {
        result.warnings.push_back("deepest samples do not decay; no tail extrapolation applied");
    }

    std::map<double, std::size_t> index;
    for (std::size_t i = 0; i < base.depths.size(); ++i) index.emplace(base.depths[i], i);
    std::vector<std::vector<double>> samples(base.depths.size());

    std::vector<double> conc(ds.measurements.size());
    for (std::size_t r = 0; r < n_mc; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> z(0.0, 1.0);
        const double supported = supported_mean + supported_sd * z(rng);
        for (std::size_t i = 0; i < conc.size(); ++i) {
            conc[i] = ds.measurements[i].total_pb + ds.measurements[i].sigma * z(rng);
        }
        const auto rep = point_ages(ds.measurements, conc, supported, extrapolate);
        for (std::size_t i = 0; i < rep.depths.size(); ++i) {
            if (auto it = index.find(rep.depths[i]); it != index.end()) {
                samples[it->second].push_back(rep.ages[i]);
            }
        }
    }

    for (std::size_t i = 0; i < base.depths.size(); ++i) {
        CrsRecord rec;
        rec.depth = base.depths[i];
        rec.age = base.ages[i];
        rec.replicates = samples[i].size();
        if (samples[i].empty()) {
            rec.age_mean = rec.age_lo95 = rec.age_hi95 = rec.age;
        } else {
            const auto s = summarize_sample(samples[i]);
            rec.age_mean = s.mean;
            rec.age_sd = s.sd;
            rec.age_lo95 = s.lo;
            rec.age_hi95 = s.hi;
        }
        result.records.push_back(rec);
    }
    return result;
}

}  // namespace plum

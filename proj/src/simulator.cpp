#include "plum/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "plum/error.hpp"
#include "plum/physics.hpp"
#include "text_util.hpp"

namespace plum {

SimulationSpec SimulationSpec::defaults() {
    SimulationSpec spec;
    for (int d = 1; d <= 30; ++d) {
        spec.depths.push_back(d);
        spec.sigmas.push_back(reference_sigma(d));
    }
    return spec;
}

double SimulationSpec::density(double x) const {
    return density_b0 - density_b1 * std::cos(std::numbers::pi * x / density_period);
}

double SimulationSpec::mean_density(double top, double bottom) const {
    const double w = std::numbers::pi / density_period;
    return density_b0 -
           density_b1 * (std::sin(w * bottom) - std::sin(w * top)) / (w * (bottom - top));
}

double SimulationSpec::sigma_at(std::size_t i) const {
    if (sigmas.size() == 1) return sigmas.front();
    return sigmas.at(i);
}

double reference_sigma(double depth) {
    if (depth <= 1.0) return 10.0;
    if (depth <= 8.0) return 9.0;
    if (depth <= 15.0) return 8.0;
    if (depth <= 22.0) return 7.0;
    if (depth <= 29.0) return 6.0;
    return 5.0;
}

double simulated_concentration(const SimulationSpec& spec, double top, double bottom) {
    const double areal = unsupported_activity(spec.phi, spec.true_age(top), spec.true_age(bottom));
    return spec.p_s + areal / (spec.mean_density(top, bottom) * (bottom - top));
}

namespace {

void check_spec(const SimulationSpec& spec) {
    if (!(spec.phi > 0.0)) throw InputError("simulated supply must be positive");
    if (!(spec.p_s >= 0.0)) throw InputError("simulated supported level must be non-negative");
    if (!(spec.thickness > 0.0)) throw InputError("slice thickness must be positive");
    if (spec.depths.empty()) throw InputError("no depths to simulate");
    if (!(spec.density_period > 0.0)) throw InputError("density period must be positive");
    if (!(spec.density_b0 - std::abs(spec.density_b1) > 0.0)) {
        throw InputError("density function is not positive over the core");
    }
    if (spec.sigmas.size() != 1 && spec.sigmas.size() != spec.depths.size()) {
        throw InputError("need one sigma or one per depth");
    }
    for (double s : spec.sigmas) {
        if (!(s > 0.0)) throw InputError("sigma must be positive");
    }
    double deepest = 0.0;
    for (double d : spec.depths) deepest = std::max(deepest, d);
    // t' is linear, so positivity at both ends covers the whole range
    const double top = std::max(0.0, spec.depths.front() - spec.thickness);
    for (double x : {top, deepest}) {
        if (2.0 * spec.age_q2 * x + spec.age_q1 < 0.0) {
            throw InputError("age function is not monotone over the simulated range");
        }
    }
    if (!(spec.true_age(deepest) > spec.true_age(top))) {
        throw InputError("age function is not increasing over the simulated range");
    }
}

}  // namespace

CoreDataset simulate(const SimulationSpec& spec) {
    check_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    CoreDataset ds;
    ds.label = "simulated (seed " + std::to_string(spec.seed) + ")";
    for (std::size_t i = 0; i < spec.depths.size(); ++i) {
        const double bottom = spec.depths[i];
        const double top = bottom - spec.thickness;
        if (top < 0.0) throw InputError("slice above the core top");
        Measurement m;
        m.depth_bottom = bottom;
        m.thickness = spec.thickness;
        m.sigma = spec.sigma_at(i);
        m.total_pb = simulated_concentration(spec, top, bottom);
        if (spec.add_noise) m.total_pb += m.sigma * noise(rng);
        m.density = spec.mean_density(top, bottom) * spec.thickness / kArealActivityFactor;
        ds.measurements.push_back(m);
    }
    validate(ds);
    return ds;
}

Scenario Scenario::parse(const std::vector<std::string>& tokens) {
    std::vector<std::string> parts;
    for (const auto& t : tokens) {
        std::stringstream ss(t);
        std::string piece;
        while (std::getline(ss, piece, ':')) {
            if (!piece.empty()) parts.push_back(piece);
        }
    }
    if (parts.empty()) throw InputError("empty scenario");
    const std::string& name = parts.front();
    auto number = [&](std::size_t idx) {
        if (idx >= parts.size()) throw InputError("scenario '" + name + "' needs more arguments");
        auto v = detail::parse_double(parts[idx]);
        if (!v) throw InputError("bad scenario argument '" + parts[idx] + "'");
        return *v;
    };
    auto expect = [&](std::size_t n) {
        if (parts.size() != n) throw InputError("scenario '" + name + "' takes " +
                                                std::to_string(n - 1) + " argument(s)");
    };
    auto count = [&](std::size_t idx) {
        const double v = number(idx);
        if (!(v >= 1.0) || v != std::floor(v)) throw InputError("scenario count must be a positive integer");
        return static_cast<std::size_t>(v);
    };

    Scenario s;
    if (name == "full") {
        expect(1);
    } else if (name == "odd_depths") {
        expect(1);
        s.kind = Kind::OddDepths;
    } else if (name == "top_n") {
        expect(2);
        s.kind = Kind::TopN;
        s.count = count(1);
    } else if (name == "drop_bottom") {
        expect(2);
        s.kind = Kind::DropBottom;
        s.count = count(1);
    } else if (name == "skip_range") {
        expect(3);
        s.kind = Kind::SkipRange;
        s.lo = number(1);
        s.hi = number(2);
        if (s.hi < s.lo) throw InputError("skip_range needs lo <= hi");
    } else {
        throw InputError("unknown scenario '" + name +
                         "' (expected full, odd_depths, top_n, drop_bottom or skip_range)");
    }
    return s;
}

std::string Scenario::name() const {
    switch (kind) {
    case Kind::Full: return "full";
    case Kind::OddDepths: return "odd_depths";
    case Kind::TopN: return "top_n:" + std::to_string(count);
    case Kind::DropBottom: return "drop_bottom:" + std::to_string(count);
    case Kind::SkipRange:
        return "skip_range:" + detail::format_double(lo) + ":" + detail::format_double(hi);
    }
    return "full";
}

CoreDataset scenario_filter(const CoreDataset& ds, const Scenario& scenario) {
    CoreDataset out;
    out.label = ds.label;
    out.supported = ds.supported;
    const auto& ms = ds.measurements;
    switch (scenario.kind) {
    case Scenario::Kind::Full:
        out.measurements = ms;
        break;
    case Scenario::Kind::OddDepths:
        for (const auto& m : ms) {
            const double r = std::round(m.depth_bottom);
            if (std::abs(m.depth_bottom - r) < 1e-9 && std::fmod(std::abs(r), 2.0) == 1.0) {
                out.measurements.push_back(m);
            }
        }
        break;
    case Scenario::Kind::TopN:
        out.measurements.assign(ms.begin(), ms.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min(scenario.count, ms.size())));
        break;
    case Scenario::Kind::DropBottom:
        if (scenario.count < ms.size()) {
            out.measurements.assign(ms.begin(),
                                    ms.end() - static_cast<std::ptrdiff_t>(scenario.count));
        }
        break;
    case Scenario::Kind::SkipRange:
        for (const auto& m : ms) {
            if (m.depth_bottom < scenario.lo - 1e-9 || m.depth_bottom > scenario.hi + 1e-9) {
                out.measurements.push_back(m);
            }
        }
        break;
    }
    if (out.measurements.empty()) throw InputError("scenario '" + scenario.name() + "' leaves no data");
    return out;
}

}  // namespace plum

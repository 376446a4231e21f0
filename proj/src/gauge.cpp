#include "fuelgauge/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace fuelgauge {

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr double kHoursPerMonth = 720.0;

void set_soc(GaugeState& s, double soc) {
    s.soc = std::clamp(soc, 0.0, 100.0);
    s.dod = 100.0 - s.soc;
}

void set_dod(GaugeState& s, double dod) {
    s.dod = std::clamp(dod, 0.0, 100.0);
    s.soc = 100.0 - s.dod;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void GaugeConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(std::string("invalid gauge config: ") + what);
        }
    };
    require(q_rated > 0.0, "q_rated must be positive");
    require(sample_period > 0.0, "sample_period must be positive");
    require(self_discharge_per_month >= 0.0 && self_discharge_per_month <= 1.0,
            "self_discharge_per_month must lie in [0, 1]");
    require(idle_current_threshold >= 0.0, "idle_current_threshold must be non-negative");
    require(taper_current > idle_current_threshold, "taper_current must exceed idle_current_threshold");
    require(rest_time_for_ocv >= 0.0, "rest_time_for_ocv must be non-negative");
    require(coulombic_efficiency > 0.0 && coulombic_efficiency <= 1.0, "coulombic_efficiency must lie in (0, 1]");
}

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::Charge: return "charge";
        case Mode::Discharge: return "discharge";
        case Mode::OpenCircuit: return "open_circuit";
    }
    return "unknown";
}

Mode mode_from_string(std::string_view text) {
    if (text == "charge") return Mode::Charge;
    if (text == "discharge") return Mode::Discharge;
    if (text == "open_circuit") return Mode::OpenCircuit;
    throw std::invalid_argument("unknown mode: " + std::string(text));
}

NonMonotonicTime::NonMonotonicTime(double previous, double current)
    : std::runtime_error("sample time " + format_double(current) + " s does not advance past " +
                         format_double(previous) + " s") {}

double q_per_hour(const GaugeConfig& config, double capacity_mah) {
    return config.self_discharge_per_month * capacity_mah / kHoursPerMonth;
}

GaugeState initialize(double ocv, double temp_c, const GaugeConfig& config, const OcvTable& table) {
    config.validate();
    GaugeState s;
    set_soc(s, soc_from_ocv(ocv, temp_c, table));
    s.q_rated_est = config.q_rated;
    s.initialized = true;
    return s;
}

GaugeState initialize_with_fallback(double ocv, double temp_c, const GaugeConfig& config, const OcvTable& table) {
    try {
        return initialize(ocv, temp_c, config, table);
    } catch (const OcvOutOfRange& e) {
        GaugeState s;
        set_soc(s, e.side() == OcvOutOfRange::Side::Below ? 0.0 : 100.0);
        s.q_rated_est = config.q_rated;
        s.initialized = true;
        s.coarse = true;
        return s;
    }
}

Mode classify_mode(const Sample& sample, const GaugeConfig& config) {
    if (std::abs(sample.i_bat) <= config.idle_current_threshold) {
        return Mode::OpenCircuit;
    }
    return sample.i_bat > 0.0 ? Mode::Charge : Mode::Discharge;
}

GaugeState apply_self_discharge_compensation(const GaugeState& state) {
    if (state.q_oc == 0.0 && state.storage_seconds == 0.0) {
        return state;
    }
    GaugeState s = state;
    s.q_lost += s.q_oc;
    s.q_gained = std::max(0.0, s.q_gained - s.q_oc);
    set_soc(s, s.soc - s.q_oc / s.q_rated_est * 100.0);
    s.q_oc = 0.0;
    s.storage_seconds = 0.0;
    return s;
}

bool detect_full(const Sample& sample, const GaugeConfig& config) {
    return sample.v_bat >= config.full_voltage && sample.i_bat > 0.0 && sample.i_bat <= config.taper_current;
}

bool detect_empty(const Sample& sample, const GaugeConfig& config) {
    return sample.v_bat <= config.empty_cutoff_voltage;
}

GaugeState recalibrate_full(const GaugeState& state) {
    GaugeState s = state;
    set_soc(s, 100.0);
    s.q_gained = 0.0;
    s.q_lost = 0.0;
    s.full_anchor = true;
    s.coarse = false;
    return s;
}

GaugeState recalibrate_empty(const GaugeState& state) {
    GaugeState s = state;
    if (s.full_anchor && s.q_lost > 0.0) {
        s.q_rated_est = s.q_lost;
    }
    set_soc(s, 0.0);
    s.q_lost = 0.0;
    s.q_gained = 0.0;
    s.full_anchor = false;
    s.coarse = false;
    return s;
}

GaugeState step(const GaugeState& state, const Sample& sample, const GaugeConfig& config) {
    if (!state.initialized) {
        throw GaugeNotInitialized();
    }
    double dt = config.sample_period;
    if (state.last_time) {
        dt = sample.t - *state.last_time;
        if (!(dt > 0.0)) {
            throw NonMonotonicTime(*state.last_time, sample.t);
        }
    }

    const Mode mode = classify_mode(sample, config);
    GaugeState s = state;
    if (s.mode == Mode::OpenCircuit && mode != Mode::OpenCircuit) {
        s = apply_self_discharge_compensation(s);
    }

    switch (mode) {
        case Mode::Charge: {
            const double gained = config.coulombic_efficiency * delta_q(sample.i_bat, dt);
            s.q_gained += gained;
            s.full_anchor = false;
            set_soc(s, s.soc + gained / s.q_rated_est * 100.0);
            break;
        }
        case Mode::Discharge: {
            const double lost = -delta_q(sample.i_bat, dt);
            s.q_lost += lost;
            set_dod(s, s.dod + lost / s.q_rated_est * 100.0);
            break;
        }
        case Mode::OpenCircuit: {
            s.storage_seconds += dt;
            const double per_hour = q_per_hour(config, s.q_rated_est);
            while (s.storage_seconds >= kSecondsPerHour) {
                s.q_oc += per_hour;
                s.storage_seconds -= kSecondsPerHour;
            }
            break;
        }
    }
    s.mode = mode;
    s.last_time = sample.t;

    if (mode == Mode::Charge && detect_full(sample, config)) {
        s = recalibrate_full(s);
    } else if (mode == Mode::Discharge && detect_empty(sample, config)) {
        s = recalibrate_empty(s);
    }
    return s;
}

double alpha(double temp_c) {
    if (temp_c < -10.0) return 0.5;
    if (temp_c < 5.0) return 0.6;
    if (temp_c < 25.0) return 0.8;
    if (temp_c < 45.0) return 1.0;
    return 0.9;
}

double reported_soc(const GaugeState& state, double temp_c) {
    if (!state.initialized) {
        throw GaugeNotInitialized();
    }
    return std::clamp(alpha(temp_c) * state.soc, 0.0, 100.0);
}

void write_snapshot(std::ostream& out, const GaugeState& state) {
    out << "mode=" << to_string(state.mode) << '\n'
        << "soc=" << format_double(state.soc) << '\n'
        << "dod=" << format_double(state.dod) << '\n'
        << "q_gained=" << format_double(state.q_gained) << '\n'
        << "q_lost=" << format_double(state.q_lost) << '\n'
        << "q_oc=" << format_double(state.q_oc) << '\n'
        << "storage_seconds=" << format_double(state.storage_seconds) << '\n'
        << "q_rated_est=" << format_double(state.q_rated_est) << '\n'
        << "initialized=" << (state.initialized ? 1 : 0) << '\n'
        << "full_anchor=" << (state.full_anchor ? 1 : 0) << '\n'
        << "coarse=" << (state.coarse ? 1 : 0) << '\n'
        << "last_time=" << (state.last_time ? format_double(*state.last_time) : std::string("none")) << '\n';
}

GaugeState read_snapshot(std::istream& in) {
    std::map<std::string, std::string, std::less<>> fields;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("snapshot line without '=': " + line);
        }
        fields[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto get = [&](std::string_view key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw std::invalid_argument("snapshot missing key: " + std::string(key));
        }
        return it->second;
    };
    auto number = [&](std::string_view key) {
        const std::string& text = get(key);
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument("snapshot value for " + std::string(key) + " is not a number: " + text);
        }
        return v;
    };
    auto flag = [&](std::string_view key, bool fallback) {
        if (fields.find(key) == fields.end()) {
            return fallback;
        }
        return number(key) != 0.0;
    };

    GaugeState s;
    s.mode = mode_from_string(get("mode"));
    s.soc = number("soc");
    s.dod = number("dod");
    s.q_gained = number("q_gained");
    s.q_lost = number("q_lost");
    s.q_oc = number("q_oc");
    s.storage_seconds = number("storage_seconds");
    s.q_rated_est = number("q_rated_est");
    s.initialized = flag("initialized", false);
    s.full_anchor = flag("full_anchor", false);
    s.coarse = flag("coarse", false);
    if (auto it = fields.find("last_time"); it != fields.end() && it->second != "none") {
        s.last_time = number("last_time");
    }
    if (s.soc < 0.0 || s.soc > 100.0 || s.soc + s.dod != 100.0) {
        throw std::invalid_argument("snapshot violates 0 <= soc <= 100 and soc + dod = 100");
    }
    return s;
}

}  // namespace fuelgauge

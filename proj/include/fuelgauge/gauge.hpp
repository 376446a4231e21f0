#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fuelgauge/sample.hpp"
#include "fuelgauge/soc_ocv_map.hpp"

namespace fuelgauge {

struct GaugeConfig {
    double q_rated = 4400.0;                 // mAh
    double sample_period = 1.0;              // s
    double self_discharge_per_month = 0.05;  // fraction of capacity lost per 720 h
    double idle_current_threshold = 1.0;     // mA, |I| at or below counts as open circuit
    double taper_current = 10.0;             // mA, end-of-charge current
    double full_voltage = 4.2;               // V, CV setpoint
    double empty_cutoff_voltage = 3.3;       // V
    double rest_time_for_ocv = 1800.0;       // s
    double coulombic_efficiency = 1.0;       // applied to charge only

    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;
};

enum class Mode { Charge, Discharge, OpenCircuit };

[[nodiscard]] std::string_view to_string(Mode mode);
[[nodiscard]] Mode mode_from_string(std::string_view text);

struct GaugeState {
    Mode mode = Mode::OpenCircuit;
    double soc = 0.0;              // %
    double dod = 100.0;            // %, always 100 - soc
    double q_gained = 0.0;         // mAh charged since the last anchor
    double q_lost = 0.0;           // mAh removed since the last anchor
    double q_oc = 0.0;             // mAh of pending self-discharge loss
    double storage_seconds = 0.0;  // sub-hour open-circuit remainder
    double q_rated_est = 0.0;      // mAh, releasable capacity
    bool initialized = false;
    bool full_anchor = false;  // a full recalibration has been seen and q_lost counts from it
    bool coarse = false;       // SOC came from the out-of-range fallback
    std::optional<double> last_time;

    friend bool operator==(const GaugeState&, const GaugeState&) = default;
};

class NonMonotonicTime : public std::runtime_error {
public:
    NonMonotonicTime(double previous, double current);
};

class GaugeNotInitialized : public std::logic_error {
public:
    GaugeNotInitialized() : std::logic_error("gauge state used before initialization") {}
};

/// Hourly self-discharge loss in mAh for a given capacity.
[[nodiscard]] double q_per_hour(const GaugeConfig& config, double capacity_mah);

/// Builds a state from a rested terminal voltage. Propagates OcvOutOfRange.
[[nodiscard]] GaugeState initialize(double ocv, double temp_c, const GaugeConfig& config, const OcvTable& table);

/// As initialize(), but a reading outside the allowed segments starts the
/// gauge at 0 % (below) or 100 % (above) and marks the state coarse.
[[nodiscard]] GaugeState initialize_with_fallback(double ocv, double temp_c, const GaugeConfig& config,
                                                  const OcvTable& table);

[[nodiscard]] Mode classify_mode(const Sample& sample, const GaugeConfig& config);

/// Rectangle-rule charge over one interval, signed, in mAh.
[[nodiscard]] constexpr double delta_q(double i_ma, double dt_s) { return i_ma * dt_s / 3600.0; }

/// One Coulomb-counting update. Leaving open circuit first books the pending
/// self-discharge; full and empty recalibration are applied after the update.
[[nodiscard]] GaugeState step(const GaugeState& state, const Sample& sample, const GaugeConfig& config);

/// Moves the accumulated storage loss into q_lost and out of q_gained and the SOC.
[[nodiscard]] GaugeState apply_self_discharge_compensation(const GaugeState& state);

[[nodiscard]] bool detect_full(const Sample& sample, const GaugeConfig& config);
[[nodiscard]] bool detect_empty(const Sample& sample, const GaugeConfig& config);

[[nodiscard]] GaugeState recalibrate_full(const GaugeState& state);

/// Anchors SOC to 0. After a full anchor with uninterrupted discharge the
/// charge removed since full becomes the new releasable capacity.
[[nodiscard]] GaugeState recalibrate_empty(const GaugeState& state);

/// Temperature weighting coefficient, five bands plus the extended top band.
[[nodiscard]] double alpha(double temp_c);

[[nodiscard]] double reported_soc(const GaugeState& state, double temp_c);

/// key=value snapshot, one field per line, 17 significant digits.
void write_snapshot(std::ostream& out, const GaugeState& state);
[[nodiscard]] GaugeState read_snapshot(std::istream& in);

}  // namespace fuelgauge

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fuelgauge/cell_sim.hpp"
#include "fuelgauge/frontend.hpp"
#include "fuelgauge/gauge.hpp"

namespace fuelgauge {

class ScenarioInvalid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CcCvChargePhase {
    double i_cc;     // mA
    double v_cv;     // V
    double i_taper;  // mA
};

struct DischargePhase {
    double i;         // mA, positive
    double v_cutoff;  // V
};

struct StoragePhase {
    double hours;
};

struct SetTemperaturePhase {
    double temp_c;
};

using Phase = std::variant<CcCvChargePhase, DischargePhase, StoragePhase, SetTemperaturePhase>;

struct Scenario {
    std::vector<Phase> phases;
    double initial_soc = 0.0;  // % of the temperature-limited true capacity

    GaugeConfig gauge;
    OcvTable table = OcvTable::default_table();

    // Simulated pack; defaults to two parallel cells totalling 4400 mAh.
    double cell_capacity = 4400.0;
    double cell_r_internal = 0.05;
    double initial_temperature = 25.0;
    CellModel cell_model;

    AdcModel adc;
    SenseCircuit sense;
    double adc_noise_lsb = 0.0;  // RMS channel noise, in LSBs

    double storage_sample_period = 60.0;  // s between open-circuit samples in storage

    /// Throws ScenarioInvalid.
    void validate() const;
};

/// Line format: `#` comments, one directive per line.
///   cc_cv_charge <i_cc_mA> <v_cv_V> <i_taper_mA>
///   discharge <i_mA> <v_cutoff_V>
///   storage <hours>
///   temperature <degC>
///   initial_soc <pct>
///   set <key> <value>
/// Throws ScenarioInvalid with the offending line number.
[[nodiscard]] Scenario parse_scenario(std::istream& in);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// 1C CC-CV charge of the 4400 mAh pack from empty to a 10 mA taper.
[[nodiscard]] Scenario default_scenario();

struct RunRow {
    double time;
    Mode mode;
    double i_meas;        // mA
    double v_meas;        // V
    double temp_meas;     // degC
    double soc_true;      // %
    double soc_est;       // %
    double soc_reported;  // %
    double dod;           // %
    double err;           // soc_est - soc_true, percentage points
    double capacity;      // mAh the gauge believes is stored
    double q_rated_est;   // mAh
    double compensation;  // SOC points removed by self-discharge compensation at this step
};

struct ErrorSummary {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double final_value = 0.0;
};

[[nodiscard]] ErrorSummary summarize(const std::vector<double>& errors);

struct RunReport {
    std::vector<RunRow> rows;
    ErrorSummary soc_error;
    GaugeState initial_state;
    GaugeState final_state;
    CellState final_cell;
};

struct RunOptions {
    bool ideal_measurement = false;  // exact currents and voltages
    std::uint64_t seed = 0;          // channel-noise generator
};

[[nodiscard]] RunReport run(const Scenario& scenario, const RunOptions& options = {});

struct CompareReport {
    RunReport ideal;
    RunReport quantized;
    std::vector<double> cap_err;  // % of rated capacity, per sample
    ErrorSummary capacity_error;
};

/// Runs the scenario with exact measurements and again through the
/// measurement frontend. Rows pair up one-to-one.
[[nodiscard]] CompareReport compare(const Scenario& scenario, const RunOptions& quantized_options = {});

void write_run_csv(std::ostream& out, const RunReport& report);
void write_compare_csv(std::ostream& out, const CompareReport& report);

}  // namespace fuelgauge

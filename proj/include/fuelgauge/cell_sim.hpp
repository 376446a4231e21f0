#pragma once

#include <utility>
#include <vector>

#include "fuelgauge/soc_ocv_map.hpp"

namespace fuelgauge {

/// Released-capacity fraction versus temperature, linear between anchors and
/// clamped outside them.
class CapacityFactorCurve {
public:
    /// Anchors are (degC, fraction); any order, fractions in (0, 1].
    explicit CapacityFactorCurve(std::vector<std::pair<double, double>> anchors);

    /// (-10, 0.6), (5, 0.8), (25, 1.0), (45, 0.95), (60, 0.9)
    [[nodiscard]] static const CapacityFactorCurve& standard();

    [[nodiscard]] double operator()(double temp_c) const;
    [[nodiscard]] const std::vector<std::pair<double, double>>& anchors() const { return anchors_; }

private:
    std::vector<std::pair<double, double>> anchors_;
};

/// Ground-truth state of the simulated pack.
struct CellState {
    double q_true = 0.0;        // mAh stored
    double q_capacity = 4400.0;  // mAh at 25 degC
    double r_internal = 0.05;   // ohm
    double temp = 25.0;         // degC
};

/// Fixed properties of the simulated chemistry.
struct CellModel {
    OcvTable table = OcvTable::default_table();
    CapacityFactorCurve capacity_factor = CapacityFactorCurve::standard();
    double self_discharge_per_month = 0.05;
    double cv_time_constant = 600.0;  // s, CV-phase current decay
};

[[nodiscard]] double capacity_bound(const CellState& cell, const CellModel& model);
[[nodiscard]] double true_soc(const CellState& cell, const CellModel& model);
[[nodiscard]] double open_circuit_voltage(const CellState& cell, const CellModel& model);

/// Builds a cell holding `soc` percent of its temperature-limited capacity.
[[nodiscard]] CellState cell_at_soc(double soc, double q_capacity, double r_internal, double temp_c,
                                    const CellModel& model);

struct CellStep {
    CellState cell;
    double v_terminal;  // V
};

/// Integrates `i_ma` over `dt_s` (charge clamped to [0, bound]) and returns the
/// loaded terminal voltage OCV + I*R. A cell driven empty under load collapses
/// to the table floor voltage.
[[nodiscard]] CellStep apply_current(const CellState& cell, const CellModel& model, double i_ma, double dt_s);

[[nodiscard]] CellState advance_storage(const CellState& cell, const CellModel& model, double hours);

/// Changes ambient temperature; charge above the new bound is clipped.
[[nodiscard]] CellState set_temperature(const CellState& cell, const CellModel& model, double temp_c);

/// One ground-truth observation emitted by a scenario generator.
struct CellSample {
    double t;          // s
    double i_true;     // mA, positive charging
    double v_terminal;  // V
    double temp;       // degC
    double soc_true;   // %
};

struct CellRun {
    CellState cell;
    std::vector<CellSample> samples;
};

struct CcCvProfile {
    double i_cc;     // mA
    double v_cv;     // V
    double i_taper;  // mA
};

/// Constant current until the terminal voltage reaches v_cv (or the cell is
/// full), then an exponentially decaying current with the terminal held at
/// v_cv. The last sample is the first with current <= i_taper.
[[nodiscard]] CellRun cc_cv_charge(const CellState& cell, const CellModel& model, const CcCvProfile& profile,
                                   double dt_s, double t0);

/// Draws `i_ma` until the terminal voltage drops to v_cutoff or the cell is empty.
[[nodiscard]] CellRun constant_current_discharge(const CellState& cell, const CellModel& model, double i_ma,
                                                 double v_cutoff, double dt_s, double t0);

}  // namespace fuelgauge

#pragma once

namespace fuelgauge {

/// One timestamped measurement as seen by the gauge.
/// Positive current charges the battery.
struct Sample {
    double t;      // s
    double i_bat;  // mA
    double v_bat;  // V
    double temp;   // degC

    friend bool operator==(const Sample&, const Sample&) = default;
};

}  // namespace fuelgauge

#pragma once

#include <cstdint>

#include "fuelgauge/sample.hpp"

namespace fuelgauge {

/// Converter with round-to-nearest-even codes spanning [0, (2^bits - 1) * lsb].
struct AdcModel {
    int bits = 10;
    double lsb = 0.001;  // V

    [[nodiscard]] std::int64_t max_code() const { return (std::int64_t{1} << bits) - 1; }
    [[nodiscard]] double full_scale() const { return static_cast<double>(max_code()) * lsb; }

    /// Throws std::invalid_argument unless 1 <= bits <= 32 and lsb > 0.
    void validate() const;
};

struct SenseCircuit {
    double r_sens = 0.1;  // ohm, in series with the battery

    void validate() const;
};

/// Code for `v` before saturation.
[[nodiscard]] std::int64_t adc_code(double v, const AdcModel& adc);

/// Voltage represented by a code; exact when 1/lsb is an integer.
[[nodiscard]] double code_voltage(std::int64_t code, const AdcModel& adc);

/// Saturating quantizer.
[[nodiscard]] double quantize(double v, const AdcModel& adc);

/// Current through the sense resistor in mA from its two terminal voltages,
/// each converted on its own channel.
[[nodiscard]] double sense_current(double v_packplus, double v_bat, const SenseCircuit& circuit, const AdcModel& adc);

/// I^2 R loss in the sense resistor, watts.
[[nodiscard]] double sense_dissipation(double i_ma, const SenseCircuit& circuit);

/// Worst-case per-sample current error: two half-LSB channel errors.
[[nodiscard]] double current_resolution(const SenseCircuit& circuit, const AdcModel& adc);

/// Optional additive channel noise in volts (applied before conversion).
struct ChannelNoise {
    double pack_plus = 0.0;
    double bat = 0.0;
};

/// Builds the Sample the gauge sees from the simulated cell outputs. The
/// battery-side channels are assumed to be level-shifted into the converter
/// window, so only the LSB resolution applies to them, not the code span.
/// Temperature goes through a 1 degC thermistor reading.
[[nodiscard]] Sample measure(double t, double v_terminal, double i_true, double temp_c, const SenseCircuit& circuit,
                             const AdcModel& adc, ChannelNoise noise = {});

/// Exact passthrough used for the high-precision reference run.
[[nodiscard]] Sample measure_ideal(double t, double v_terminal, double i_true, double temp_c);

[[nodiscard]] double ntc_reading(double temp_c);

}  // namespace fuelgauge

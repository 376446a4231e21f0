#include "fuelgauge/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuelgauge {

namespace {

// Returns N when lsb == 1/N for integer N, else 0.
double integral_reciprocal(double lsb) {
    const double inv = 1.0 / lsb;
    const double rounded = std::nearbyint(inv);
    return (rounded >= 1.0 && std::abs(inv - rounded) <= 1e-9 * rounded) ? rounded : 0.0;
}

}  // namespace

void AdcModel::validate() const {
    if (bits < 1 || bits > 32 || !(lsb > 0.0) || !std::isfinite(lsb)) {
        throw std::invalid_argument("ADC model needs 1 <= bits <= 32 and lsb > 0");
    }
}

void SenseCircuit::validate() const {
    if (!(r_sens > 0.0)) {
        throw std::invalid_argument("sense resistor must be positive");
    }
}

std::int64_t adc_code(double v, const AdcModel& adc) {
    // Default floating-point rounding is to-nearest with ties to even.
    if (const double n = integral_reciprocal(adc.lsb); n > 0.0) {
        return static_cast<std::int64_t>(std::nearbyint(v * n));
    }
    return static_cast<std::int64_t>(std::nearbyint(v / adc.lsb));
}

double code_voltage(std::int64_t code, const AdcModel& adc) {
    if (const double n = integral_reciprocal(adc.lsb); n > 0.0) {
        return static_cast<double>(code) / n;
    }
    return static_cast<double>(code) * adc.lsb;
}

double quantize(double v, const AdcModel& adc) {
    return code_voltage(std::clamp<std::int64_t>(adc_code(v, adc), 0, adc.max_code()), adc);
}

namespace {

double current_from_codes(std::int64_t high, std::int64_t low, const SenseCircuit& circuit, const AdcModel& adc) {
    // mV per code divided by ohms gives mA per code.
    return static_cast<double>(high - low) * (code_voltage(1, adc) * 1000.0) / circuit.r_sens;
}

}  // namespace

double sense_current(double v_packplus, double v_bat, const SenseCircuit& circuit, const AdcModel& adc) {
    const auto high = std::clamp<std::int64_t>(adc_code(v_packplus, adc), 0, adc.max_code());
    const auto low = std::clamp<std::int64_t>(adc_code(v_bat, adc), 0, adc.max_code());
    return current_from_codes(high, low, circuit, adc);
}

double sense_dissipation(double i_ma, const SenseCircuit& circuit) {
    const double amps = i_ma / 1000.0;
    return amps * amps * circuit.r_sens;
}

double current_resolution(const SenseCircuit& circuit, const AdcModel& adc) {
    return adc.lsb * 1000.0 / circuit.r_sens;
}

double ntc_reading(double temp_c) { return std::nearbyint(temp_c); }

Sample measure(double t, double v_terminal, double i_true, double temp_c, const SenseCircuit& circuit,
               const AdcModel& adc, ChannelNoise noise) {
    const double v_packplus = v_terminal + i_true * circuit.r_sens / 1000.0;
    const auto high = adc_code(v_packplus + noise.pack_plus, adc);
    const auto low = adc_code(v_terminal + noise.bat, adc);
    return Sample{t, current_from_codes(high, low, circuit, adc), code_voltage(low, adc), ntc_reading(temp_c)};
}

Sample measure_ideal(double t, double v_terminal, double i_true, double temp_c) {
    return Sample{t, i_true, v_terminal, temp_c};
}

}  // namespace fuelgauge

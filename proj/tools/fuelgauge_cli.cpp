// Command-line harness: scenario runs, ADC comparison, table lookups.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "fuelgauge/harness.hpp"
#include "fuelgauge/soc_ocv_map.hpp"

namespace fg = fuelgauge;

namespace {

constexpr int kExitFailure = 1;

void print_summary(const char* label, const fg::ErrorSummary& s) {
    std::printf("%s max_abs=%.6f mean_abs=%.6f final=%.6f\n", label, s.max_abs, s.mean_abs, s.final_value);
}

bool open_output(std::ofstream& out, const std::string& path) {
    out.open(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << '\n';
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coulomb-counting fuel gauge simulation harness"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool ideal = false;
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write a per-sample CSV trace");
    run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    run_cmd->add_option("--out", out_path, "Output CSV")->required();
    run_cmd->add_option("--seed", seed, "Seed for ADC channel noise");
    run_cmd->add_flag("--ideal", ideal, "Bypass the measurement frontend");

    std::optional<int> adc_bits;
    std::optional<double> lsb_mv;
    auto* compare_cmd = app.add_subcommand("compare", "Compare exact and quantized measurement runs");
    compare_cmd->add_option("--scenario", scenario_path, "Scenario file (default: 1C CC-CV charge, 4400 mAh)");
    compare_cmd->add_option("--out", out_path, "Output CSV")->required();
    compare_cmd->add_option("--adc-bits", adc_bits, "ADC resolution; sets lsb to 1.023 V / (2^N - 1) unless --lsb-mv");
    compare_cmd->add_option("--lsb-mv", lsb_mv, "ADC LSB in millivolts; 0 means exact measurement");
    compare_cmd->add_option("--seed", seed, "Seed for ADC channel noise");

    double ocv = 0.0;
    double temp = 25.0;
    auto* lookup_cmd = app.add_subcommand("soc-lookup", "Evaluate the SOC-OCV map");
    lookup_cmd->add_option("--ocv", ocv, "Open-circuit voltage, V")->required();
    lookup_cmd->add_option("--temp", temp, "Temperature, degC")->required();

    std::string table_path;
    auto* validate_cmd = app.add_subcommand("validate-table", "Check an OCV table file");
    validate_cmd->add_option("--table", table_path, "Table file (default: built-in table)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitFailure;
    }

    try {
        if (*run_cmd) {
            const auto scenario = fg::load_scenario(scenario_path);
            const auto report = fg::run(scenario, fg::RunOptions{ideal, seed});
            std::ofstream out;
            if (!open_output(out, out_path)) return kExitFailure;
            fg::write_run_csv(out, report);
            print_summary("soc_error", report.soc_error);
            std::printf("samples=%zu q_rated_est=%.6f\n", report.rows.size(), report.final_state.q_rated_est);
            return 0;
        }
        if (*compare_cmd) {
            auto scenario = scenario_path.empty() ? fg::default_scenario() : fg::load_scenario(scenario_path);
            fg::RunOptions options{false, seed};
            if (adc_bits) {
                scenario.adc.bits = *adc_bits;
                scenario.adc.lsb = 1.023 / static_cast<double>((std::int64_t{1} << *adc_bits) - 1);
            }
            if (lsb_mv) {
                if (*lsb_mv == 0.0) {
                    options.ideal_measurement = true;
                } else {
                    scenario.adc.lsb = *lsb_mv / 1000.0;
                }
            }
            const auto report = fg::compare(scenario, options);
            std::ofstream out;
            if (!open_output(out, out_path)) return kExitFailure;
            fg::write_compare_csv(out, report);
            print_summary("soc_error_ideal", report.ideal.soc_error);
            print_summary("soc_error_quant", report.quantized.soc_error);
            print_summary("cap_error", report.capacity_error);
            std::printf("samples=%zu\n", report.cap_err.size());
            return 0;
        }
        if (*lookup_cmd) {
            try {
                std::printf("%.2f\n", fg::soc_from_ocv(ocv, temp, fg::OcvTable::default_table()));
                return 0;
            } catch (const fg::OcvOutOfRange& e) {
                std::cerr << "out of range: " << e.what() << '\n';
                return kExitFailure;
            }
        }
        if (*validate_cmd) {
            std::vector<fg::OcvSegment> segments;
            if (table_path.empty()) {
                const auto s = fg::OcvTable::default_table().segments();
                segments.assign(s.begin(), s.end());
            } else {
                std::ifstream in(table_path);
                if (!in) {
                    std::cerr << "error: cannot open " << table_path << '\n';
                    return kExitFailure;
                }
                segments = fg::parse_segments(in);
            }
            bool failed = false;
            for (const auto& d : fg::validate_table(segments)) {
                std::printf("%s: %s\n", d.is_error() ? "error" : "warning", d.message.c_str());
                failed = failed || d.is_error();
            }
            std::printf("%zu segment(s), %s\n", segments.size(), failed ? "invalid" : "ok");
            return failed ? kExitFailure : 0;
        }
    } catch (const fg::ScenarioInvalid& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kExitFailure;
    } catch (const fg::InvalidOcvTable& e) {
        std::cerr << "invalid table: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}

#include "fuelgauge/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace fuelgauge {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void invalid(int line_no, const std::string& what) {
    throw ScenarioInvalid("scenario line " + std::to_string(line_no) + ": " + what);
}

void apply_setting(Scenario& s, const std::string& key, double value, int line_no) {
    if (key == "gauge.q_rated") s.gauge.q_rated = value;
    else if (key == "gauge.sample_period") s.gauge.sample_period = value;
    else if (key == "gauge.self_discharge_per_month") s.gauge.self_discharge_per_month = value;
    else if (key == "gauge.idle_current_threshold") s.gauge.idle_current_threshold = value;
    else if (key == "gauge.taper_current") s.gauge.taper_current = value;
    else if (key == "gauge.full_voltage") s.gauge.full_voltage = value;
    else if (key == "gauge.empty_cutoff_voltage") s.gauge.empty_cutoff_voltage = value;
    else if (key == "gauge.rest_time_for_ocv") s.gauge.rest_time_for_ocv = value;
    else if (key == "gauge.coulombic_efficiency") s.gauge.coulombic_efficiency = value;
    else if (key == "cell.capacity") s.cell_capacity = value;
    else if (key == "cell.r_internal") s.cell_r_internal = value;
    else if (key == "cell.temperature") s.initial_temperature = value;
    else if (key == "cell.self_discharge_per_month") s.cell_model.self_discharge_per_month = value;
    else if (key == "cell.cv_time_constant") s.cell_model.cv_time_constant = value;
    else if (key == "adc.bits") {
        if (value != std::floor(value)) invalid(line_no, "adc.bits must be an integer");
        s.adc.bits = static_cast<int>(value);
    } else if (key == "adc.lsb_mv") s.adc.lsb = value / 1000.0;
    else if (key == "adc.noise_lsb") s.adc_noise_lsb = value;
    else if (key == "sense.r_sens") s.sense.r_sens = value;
    else if (key == "storage.sample_period") s.storage_sample_period = value;
    else invalid(line_no, "unknown setting '" + key + "'");
}

std::vector<double> read_numbers(std::istringstream& fields, std::size_t count, const std::string& directive,
                                 int line_no) {
    std::vector<double> out(count);
    for (auto& v : out) {
        if (!(fields >> v) || !std::isfinite(v)) {
            invalid(line_no, directive + " expects " + std::to_string(count) + " numeric argument(s)");
        }
    }
    std::string extra;
    if (fields >> extra) {
        invalid(line_no, "unexpected trailing field '" + extra + "'");
    }
    return out;
}

double row_capacity(const GaugeState& g) { return g.soc * g.q_rated_est / 100.0; }

}  // namespace

void Scenario::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ScenarioInvalid(what);
    };
    require(!phases.empty(), "scenario has no phases");
    require(initial_soc >= 0.0 && initial_soc <= 100.0, "initial_soc must lie in [0, 100]");
    require(cell_capacity > 0.0, "cell.capacity must be positive");
    require(cell_r_internal >= 0.0, "cell.r_internal must be non-negative");
    require(cell_model.cv_time_constant > 0.0, "cell.cv_time_constant must be positive");
    require(cell_model.self_discharge_per_month >= 0.0, "cell.self_discharge_per_month must be non-negative");
    require(storage_sample_period > 0.0, "storage.sample_period must be positive");
    require(adc_noise_lsb >= 0.0, "adc.noise_lsb must be non-negative");
    try {
        gauge.validate();
        adc.validate();
        sense.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioInvalid(e.what());
    }
    for (std::size_t k = 0; k < phases.size(); ++k) {
        const std::string where = "phase " + std::to_string(k + 1) + ": ";
        std::visit(Overloaded{
                       [&](const CcCvChargePhase& p) {
                           require(p.i_cc > 0.0 && p.i_taper > 0.0, where + "charge currents must be positive");
                           require(p.i_cc >= p.i_taper, where + "i_cc must not be below i_taper");
                           require(p.v_cv > 0.0, where + "v_cv must be positive");
                       },
                       [&](const DischargePhase& p) {
                           require(p.i > 0.0, where + "discharge current must be positive");
                       },
                       [&](const StoragePhase& p) { require(p.hours >= 0.0, where + "hours must be >= 0"); },
                       [&](const SetTemperaturePhase&) {},
                   },
                   phases[k]);
    }
}

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string directive;
        if (!(fields >> directive)) {
            continue;
        }
        if (directive == "cc_cv_charge") {
            const auto v = read_numbers(fields, 3, directive, line_no);
            s.phases.emplace_back(CcCvChargePhase{v[0], v[1], v[2]});
        } else if (directive == "discharge") {
            const auto v = read_numbers(fields, 2, directive, line_no);
            s.phases.emplace_back(DischargePhase{v[0], v[1]});
        } else if (directive == "storage") {
            s.phases.emplace_back(StoragePhase{read_numbers(fields, 1, directive, line_no)[0]});
        } else if (directive == "temperature") {
            s.phases.emplace_back(SetTemperaturePhase{read_numbers(fields, 1, directive, line_no)[0]});
        } else if (directive == "initial_soc") {
            s.initial_soc = read_numbers(fields, 1, directive, line_no)[0];
        } else if (directive == "set") {
            std::string key;
            if (!(fields >> key)) {
                invalid(line_no, "set expects a key and a value");
            }
            apply_setting(s, key, read_numbers(fields, 1, directive, line_no)[0], line_no);
        } else {
            invalid(line_no, "unknown directive '" + directive + "'");
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioInvalid("cannot open scenario file " + path.string());
    }
    return parse_scenario(in);
}

Scenario default_scenario() {
    Scenario s;
    s.initial_soc = 0.0;
    s.phases.emplace_back(CcCvChargePhase{4400.0, 4.2, 10.0});
    return s;
}

ErrorSummary summarize(const std::vector<double>& errors) {
    ErrorSummary out;
    if (errors.empty()) {
        return out;
    }
    double sum = 0.0;
    for (double e : errors) {
        out.max_abs = std::max(out.max_abs, std::abs(e));
        sum += std::abs(e);
    }
    out.mean_abs = sum / static_cast<double>(errors.size());
    out.final_value = errors.back();
    return out;
}

RunReport run(const Scenario& scenario, const RunOptions& options) {
    scenario.validate();
    const CellModel& model = scenario.cell_model;
    const GaugeConfig& config = scenario.gauge;

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, scenario.adc_noise_lsb * scenario.adc.lsb);
    auto observe = [&](const CellSample& cs) {
        if (options.ideal_measurement) {
            return measure_ideal(cs.t, cs.v_terminal, cs.i_true, cs.temp);
        }
        ChannelNoise n;
        if (scenario.adc_noise_lsb > 0.0) {
            n.pack_plus = noise(rng);
            n.bat = noise(rng);
        }
        return measure(cs.t, cs.v_terminal, cs.i_true, cs.temp, scenario.sense, scenario.adc, n);
    };

    RunReport report;
    CellState cell = cell_at_soc(scenario.initial_soc, scenario.cell_capacity, scenario.cell_r_internal,
                                 scenario.initial_temperature, model);

    // The pack starts at equilibrium, so the first reading is a valid OCV.
    double t = 0.0;
    const Sample rested = observe({t, 0.0, open_circuit_voltage(cell, model), cell.temp, true_soc(cell, model)});
    GaugeState gauge = initialize_with_fallback(rested.v_bat, rested.temp, config, scenario.table);
    gauge.last_time = t;
    report.initial_state = gauge;

    std::vector<double> errors;
    auto feed = [&](const CellSample& cs) {
        const Sample sample = observe(cs);
        double compensation = 0.0;
        if (gauge.mode == Mode::OpenCircuit && classify_mode(sample, config) != Mode::OpenCircuit) {
            compensation = gauge.soc - apply_self_discharge_compensation(gauge).soc;
        }
        gauge = step(gauge, sample, config);
        const double err = gauge.soc - cs.soc_true;
        errors.push_back(err);
        report.rows.push_back({sample.t, gauge.mode, sample.i_bat, sample.v_bat, sample.temp, cs.soc_true, gauge.soc,
                               reported_soc(gauge, sample.temp), gauge.dod, err, row_capacity(gauge),
                               gauge.q_rated_est, compensation});
    };
    auto feed_run = [&](const CellRun& r) {
        for (const auto& cs : r.samples) {
            feed(cs);
        }
        cell = r.cell;
        if (!r.samples.empty()) {
            t = r.samples.back().t;
        }
    };

    for (const auto& phase : scenario.phases) {
        std::visit(Overloaded{
                       [&](const CcCvChargePhase& p) {
                           feed_run(cc_cv_charge(cell, model, {p.i_cc, p.v_cv, p.i_taper}, config.sample_period, t));
                       },
                       [&](const DischargePhase& p) {
                           feed_run(constant_current_discharge(cell, model, p.i, p.v_cutoff, config.sample_period, t));
                       },
                       [&](const StoragePhase& p) {
                           const double total = p.hours * 3600.0;
                           const double start = t;
                           double elapsed = 0.0;
                           for (long k = 1; elapsed < total; ++k) {
                               const double next = std::min(static_cast<double>(k) * scenario.storage_sample_period,
                                                            total);
                               cell = advance_storage(cell, model, (next - elapsed) / 3600.0);
                               elapsed = next;
                               t = start + elapsed;
                               feed({t, 0.0, open_circuit_voltage(cell, model), cell.temp, true_soc(cell, model)});
                           }
                       },
                       [&](const SetTemperaturePhase& p) { cell = set_temperature(cell, model, p.temp_c); },
                   },
                   phase);
    }

    report.soc_error = summarize(errors);
    report.final_state = gauge;
    report.final_cell = cell;
    return report;
}

CompareReport compare(const Scenario& scenario, const RunOptions& quantized_options) {
    CompareReport out;
    out.ideal = run(scenario, RunOptions{true, quantized_options.seed});
    out.quantized = run(scenario, quantized_options);
    if (out.ideal.rows.size() != out.quantized.rows.size()) {
        throw std::logic_error("compare: ideal and quantized runs produced different sample counts");
    }
    out.cap_err.reserve(out.ideal.rows.size());
    for (std::size_t k = 0; k < out.ideal.rows.size(); ++k) {
        const double diff = out.quantized.rows[k].capacity - out.ideal.rows[k].capacity;
        out.cap_err.push_back(100.0 * std::abs(diff) / scenario.gauge.q_rated);
    }
    out.capacity_error = summarize(out.cap_err);
    return out;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out << buf;
}

void write_row_prefix(std::ostream& out, const RunRow& r) {
    put(out, r.time);
    out << ',' << to_string(r.mode) << ',';
    put(out, r.i_meas);
    out << ',';
    put(out, r.v_meas);
    out << ',';
    put(out, r.temp_meas);
    out << ',';
    put(out, r.soc_true);
    out << ',';
    put(out, r.soc_est);
    out << ',';
    put(out, r.soc_reported);
    out << ',';
    put(out, r.dod);
    out << ',';
    put(out, r.err);
}

constexpr const char* kRunHeader =
    "time_s,mode,i_meas_mA,v_meas_V,temp_C,soc_true_pct,soc_est_pct,soc_reported_pct,dod_pct,err_pct";

}  // namespace

void write_run_csv(std::ostream& out, const RunReport& report) {
    out << kRunHeader << '\n';
    for (const auto& r : report.rows) {
        write_row_prefix(out, r);
        out << '\n';
    }
}

void write_compare_csv(std::ostream& out, const CompareReport& report) {
    out << kRunHeader << ",cap_ideal_mAh,cap_quant_mAh,cap_err_pct\n";
    for (std::size_t k = 0; k < report.quantized.rows.size(); ++k) {
        write_row_prefix(out, report.quantized.rows[k]);
        out << ',';
        put(out, report.ideal.rows[k].capacity);
        out << ',';
        put(out, report.quantized.rows[k].capacity);
        out << ',';
        put(out, report.cap_err[k]);
        out << '\n';
    }
}

}  // namespace fuelgauge

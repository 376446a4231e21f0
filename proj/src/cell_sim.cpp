#include "fuelgauge/cell_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuelgauge {

CapacityFactorCurve::CapacityFactorCurve(std::vector<std::pair<double, double>> anchors)
    : anchors_(std::move(anchors)) {
    if (anchors_.empty()) {
        throw std::invalid_argument("capacity factor curve needs at least one anchor");
    }
    std::sort(anchors_.begin(), anchors_.end());
    for (std::size_t k = 0; k < anchors_.size(); ++k) {
        const auto [temp, fraction] = anchors_[k];
        if (!(fraction > 0.0 && fraction <= 1.0)) {
            throw std::invalid_argument("capacity fraction must lie in (0, 1]");
        }
        if (k > 0 && anchors_[k - 1].first == temp) {
            throw std::invalid_argument("duplicate capacity factor anchor temperature");
        }
    }
}

const CapacityFactorCurve& CapacityFactorCurve::standard() {
    static const CapacityFactorCurve curve({{-10.0, 0.6}, {5.0, 0.8}, {25.0, 1.0}, {45.0, 0.95}, {60.0, 0.9}});
    return curve;
}

double CapacityFactorCurve::operator()(double temp_c) const {
    if (temp_c <= anchors_.front().first) {
        return anchors_.front().second;
    }
    if (temp_c >= anchors_.back().first) {
        return anchors_.back().second;
    }
    auto hi = std::upper_bound(anchors_.begin(), anchors_.end(), temp_c,
                               [](double t, const std::pair<double, double>& a) { return t < a.first; });
    auto lo = hi - 1;
    const double u = (temp_c - lo->first) / (hi->first - lo->first);
    return lo->second + u * (hi->second - lo->second);
}

double capacity_bound(const CellState& cell, const CellModel& model) {
    return cell.q_capacity * model.capacity_factor(cell.temp);
}

double true_soc(const CellState& cell, const CellModel& model) {
    return 100.0 * cell.q_true / capacity_bound(cell, model);
}

double open_circuit_voltage(const CellState& cell, const CellModel& model) {
    return ocv_from_soc(std::clamp(true_soc(cell, model), 0.0, 100.0), model.table);
}

CellState cell_at_soc(double soc, double q_capacity, double r_internal, double temp_c, const CellModel& model) {
    if (!(q_capacity > 0.0) || r_internal < 0.0 || soc < 0.0 || soc > 100.0) {
        throw std::invalid_argument("cell_at_soc: need q_capacity > 0, r_internal >= 0, 0 <= soc <= 100");
    }
    CellState cell{0.0, q_capacity, r_internal, temp_c};
    cell.q_true = soc / 100.0 * capacity_bound(cell, model);
    return cell;
}

CellStep apply_current(const CellState& cell, const CellModel& model, double i_ma, double dt_s) {
    if (!(dt_s > 0.0)) {
        throw std::invalid_argument("apply_current: dt must be positive");
    }
    CellStep out{cell, 0.0};
    out.cell.q_true = std::clamp(cell.q_true + i_ma * dt_s / 3600.0, 0.0, capacity_bound(cell, model));
    const double drop = i_ma * cell.r_internal / 1000.0;
    if (i_ma < 0.0 && out.cell.q_true <= 0.0) {
        out.v_terminal = model.table.min_voltage() + drop;
    } else {
        out.v_terminal = open_circuit_voltage(out.cell, model) + drop;
    }
    return out;
}

CellState advance_storage(const CellState& cell, const CellModel& model, double hours) {
    if (hours < 0.0) {
        throw std::invalid_argument("advance_storage: hours must be non-negative");
    }
    CellState out = cell;
    const double loss = model.self_discharge_per_month / 720.0 * cell.q_capacity * hours;
    out.q_true = std::max(0.0, cell.q_true - loss);
    return out;
}

CellState set_temperature(const CellState& cell, const CellModel& model, double temp_c) {
    CellState out = cell;
    out.temp = temp_c;
    out.q_true = std::min(out.q_true, capacity_bound(out, model));
    return out;
}

CellRun cc_cv_charge(const CellState& cell, const CellModel& model, const CcCvProfile& profile, double dt_s,
                     double t0) {
    if (!(profile.i_taper > 0.0) || profile.i_cc < profile.i_taper || !(dt_s > 0.0)) {
        throw std::invalid_argument("cc_cv_charge: need i_cc >= i_taper > 0 and dt > 0");
    }
    CellRun run{cell, {}};
    bool constant_voltage = false;
    long cv_steps = 0;
    for (long n = 1;; ++n) {
        const double t = t0 + static_cast<double>(n) * dt_s;
        if (!constant_voltage) {
            const bool full = run.cell.q_true >= capacity_bound(run.cell, model);
            const double v_loaded = open_circuit_voltage(run.cell, model) + profile.i_cc * run.cell.r_internal / 1000.0;
            constant_voltage = full || v_loaded >= profile.v_cv;
        }
        if (!constant_voltage) {
            const auto next = apply_current(run.cell, model, profile.i_cc, dt_s);
            run.cell = next.cell;
            run.samples.push_back({t, profile.i_cc, std::min(next.v_terminal, profile.v_cv), run.cell.temp,
                                   true_soc(run.cell, model)});
            continue;
        }
        ++cv_steps;
        const double i = profile.i_cc * std::exp(-static_cast<double>(cv_steps) * dt_s / model.cv_time_constant);
        run.cell = apply_current(run.cell, model, i, dt_s).cell;
        run.samples.push_back({t, i, profile.v_cv, run.cell.temp, true_soc(run.cell, model)});
        if (i <= profile.i_taper) {
            break;
        }
    }
    return run;
}

CellRun constant_current_discharge(const CellState& cell, const CellModel& model, double i_ma, double v_cutoff,
                                   double dt_s, double t0) {
    if (!(i_ma > 0.0) || !(dt_s > 0.0)) {
        throw std::invalid_argument("constant_current_discharge: need i > 0 and dt > 0");
    }
    CellRun run{cell, {}};
    for (long n = 1;; ++n) {
        const double t = t0 + static_cast<double>(n) * dt_s;
        const auto next = apply_current(run.cell, model, -i_ma, dt_s);
        run.cell = next.cell;
        run.samples.push_back({t, -i_ma, next.v_terminal, run.cell.temp, true_soc(run.cell, model)});
        if (next.v_terminal <= v_cutoff || run.cell.q_true <= 0.0) {
            break;
        }
    }
    return run;
}

}  // namespace fuelgauge

#include <gtest/gtest.h>

#include <random>

#include "fuelgauge/cell_sim.hpp"

using namespace fuelgauge;

namespace {

const CellModel& model() {
    static const CellModel m;
    return m;
}

}  // namespace

TEST(CapacityFactor, AnchorsAndInterpolation) {
    const auto& f = CapacityFactorCurve::standard();
    EXPECT_EQ(f(25.0), 1.0);
    EXPECT_EQ(f(5.0), 0.8);
    EXPECT_EQ(f(-10.0), 0.6);
    EXPECT_EQ(f(45.0), 0.95);
    EXPECT_EQ(f(60.0), 0.9);
    EXPECT_NEAR(f(15.0), 0.9, 1e-12);
    EXPECT_NEAR(f(-2.5), 0.7, 1e-12);
    EXPECT_EQ(f(-40.0), 0.6);
    EXPECT_EQ(f(90.0), 0.9);
}

TEST(CapacityFactor, ContinuousAcrossAnchors) {
    const auto& f = CapacityFactorCurve::standard();
    for (const auto& [temp, fraction] : f.anchors()) {
        EXPECT_NEAR(f(temp - 1e-9), fraction, 1e-9);
        EXPECT_NEAR(f(temp + 1e-9), fraction, 1e-9);
    }
}

TEST(CapacityFactor, RejectsBadAnchors) {
    EXPECT_THROW(CapacityFactorCurve({}), std::invalid_argument);
    EXPECT_THROW(CapacityFactorCurve({{0.0, 1.5}}), std::invalid_argument);
    EXPECT_THROW(CapacityFactorCurve({{0.0, 0.5}, {0.0, 0.6}}), std::invalid_argument);
}

TEST(TrueSoc, Examples) {
    CellState cell{4400.0, 4400.0, 0.05, 25.0};
    EXPECT_EQ(true_soc(cell, model()), 100.0);
    cell.q_true = 0.0;
    EXPECT_EQ(true_soc(cell, model()), 0.0);
    cell.q_true = 2200.0;
    EXPECT_EQ(true_soc(cell, model()), 50.0);
    cell.temp = 5.0;
    cell.q_true = 0.8 * 4400.0;
    EXPECT_NEAR(true_soc(cell, model()), 100.0, 1e-12);
}

TEST(ApplyCurrent, OpenCircuitVoltageAtZeroCurrent) {
    const auto cell = cell_at_soc(37.0, 4400.0, 0.05, 25.0, model());
    const auto step = apply_current(cell, model(), 0.0, 1.0);
    EXPECT_EQ(step.v_terminal, ocv_from_soc(true_soc(cell, model()), model().table));
    EXPECT_EQ(step.cell.q_true, cell.q_true);
}

TEST(ApplyCurrent, ResistiveDropFollowsCurrentSign) {
    const auto cell = cell_at_soc(50.0, 4400.0, 0.05, 25.0, model());
    const auto d = apply_current(cell, model(), -4400.0, 1.0);
    EXPECT_NEAR(d.v_terminal, open_circuit_voltage(d.cell, model()) - 0.22, 1e-12);
    const auto c = apply_current(cell, model(), 4400.0, 1.0);
    EXPECT_NEAR(c.v_terminal, open_circuit_voltage(c.cell, model()) + 0.22, 1e-12);
}

TEST(ApplyCurrent, OneHourAtOneCFillsEmptyPack) {
    auto cell = cell_at_soc(0.0, 4400.0, 0.05, 25.0, model());
    for (int k = 0; k < 3600; ++k) {
        cell = apply_current(cell, model(), 4400.0, 1.0).cell;
    }
    EXPECT_NEAR(cell.q_true, 4400.0, 1e-9);
}

TEST(ApplyCurrent, ClampsAndCollapsesWhenExhausted) {
    const auto cell = cell_at_soc(0.01, 4400.0, 0.05, 25.0, model());
    const auto step = apply_current(cell, model(), -1e6, 1.0);
    EXPECT_EQ(step.cell.q_true, 0.0);
    EXPECT_NEAR(step.v_terminal, 3.3 - 1e6 * 0.05 / 1000.0, 1e-9);
    const auto full = apply_current(cell_at_soc(100.0, 4400.0, 0.05, 25.0, model()), model(), 1e6, 1.0);
    EXPECT_EQ(full.cell.q_true, 4400.0);
    EXPECT_THROW((void)apply_current(cell, model(), 1.0, 0.0), std::invalid_argument);
}

TEST(CellProperty, ChargeConservationWithoutClamping) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> current(-2000.0, 2000.0);
    std::uniform_real_distribution<double> dt(0.1, 5.0);
    auto cell = cell_at_soc(50.0, 4400.0, 0.05, 25.0, model());
    const double start = cell.q_true;
    long double expected = 0.0L;
    for (int k = 0; k < 5000; ++k) {
        const double i = current(rng);
        const double d = dt(rng);
        cell = apply_current(cell, model(), i, d).cell;
        expected += static_cast<long double>(i) * d / 3600.0L;
        ASSERT_GT(cell.q_true, 0.0);
        ASSERT_LT(cell.q_true, 4400.0);
    }
    EXPECT_NEAR(cell.q_true - start, static_cast<double>(expected), 1e-12 * 4400.0 * 5000);
}

TEST(AdvanceStorage, MonthlyLossAndAdditivity) {
    const auto full = cell_at_soc(100.0, 4400.0, 0.05, 25.0, model());
    EXPECT_NEAR(advance_storage(full, model(), 720.0).q_true, 4180.0, 1e-9);
    EXPECT_EQ(advance_storage(full, model(), 0.0).q_true, 4400.0);
    const auto twice = advance_storage(advance_storage(full, model(), 360.0), model(), 360.0);
    EXPECT_NEAR(twice.q_true, advance_storage(full, model(), 720.0).q_true, 1e-9);
    const auto empty = cell_at_soc(1.0, 4400.0, 0.05, 25.0, model());
    EXPECT_EQ(advance_storage(empty, model(), 1e5).q_true, 0.0);
    EXPECT_THROW((void)advance_storage(full, model(), -1.0), std::invalid_argument);
}

TEST(SetTemperature, ClipsChargeAboveColdBound) {
    const auto full = cell_at_soc(100.0, 4400.0, 0.05, 25.0, model());
    const auto cold = set_temperature(full, model(), -10.0);
    EXPECT_NEAR(cold.q_true, 0.6 * 4400.0, 1e-9);
    EXPECT_NEAR(true_soc(cold, model()), 100.0, 1e-9);
}

TEST(CcCvCharge, CcPhaseShorterThanAnHourFromEmpty) {
    const auto empty = cell_at_soc(0.0, 4400.0, 0.05, 25.0, model());
    const auto run = cc_cv_charge(empty, model(), {4400.0, 4.2, 10.0}, 1.0, 0.0);
    long cc_samples = 0;
    for (const auto& s : run.samples) {
        if (s.i_true == 4400.0) ++cc_samples;
    }
    EXPECT_LT(cc_samples, 3600);
    EXPECT_GT(cc_samples, 0);
    EXPECT_LE(run.samples.back().i_true, 10.0);
    EXPECT_GT(run.samples[run.samples.size() - 2].i_true, 10.0);
    EXPECT_NEAR(run.cell.q_true, 4400.0, 1e-9);
    for (std::size_t k = 1; k < run.samples.size(); ++k) {
        ASSERT_GT(run.samples[k].t, run.samples[k - 1].t);
        ASSERT_LE(run.samples[k].v_terminal, 4.2);
    }
}

TEST(CcCvCharge, CvPhaseHoldsSetpointAndDecays) {
    const auto run = cc_cv_charge(cell_at_soc(50.0, 4400.0, 0.05, 25.0, model()), model(), {4400.0, 4.2, 10.0}, 1.0,
                                  0.0);
    bool in_cv = false;
    double prev = 4400.0;
    for (const auto& s : run.samples) {
        if (s.i_true < 4400.0) in_cv = true;
        if (in_cv) {
            ASSERT_EQ(s.v_terminal, 4.2);
            ASSERT_LT(s.i_true, prev);
            prev = s.i_true;
        }
    }
    EXPECT_TRUE(in_cv);
}

TEST(CcCvCharge, TaperEqualToChargeCurrentStopsAtFirstCvSample) {
    const auto full = cell_at_soc(100.0, 4400.0, 0.05, 25.0, model());
    const auto run = cc_cv_charge(full, model(), {500.0, 4.2, 500.0}, 1.0, 10.0);
    ASSERT_EQ(run.samples.size(), 1u);
    EXPECT_EQ(run.samples[0].t, 11.0);
}

TEST(CcCvCharge, LowCurrentChargeStillTerminates) {
    // OCV + I*R never reaches 4.2 V at 100 mA; CV starts once the pack is full.
    const auto run = cc_cv_charge(cell_at_soc(95.0, 4400.0, 0.05, 25.0, model()), model(), {100.0, 4.2, 10.0}, 1.0,
                                  0.0);
    EXPECT_LE(run.samples.back().i_true, 10.0);
    EXPECT_NEAR(true_soc(run.cell, model()), 100.0, 1e-9);
}

TEST(CcCvCharge, RejectsBadProfile) {
    const auto cell = cell_at_soc(0.0, 4400.0, 0.05, 25.0, model());
    EXPECT_THROW((void)cc_cv_charge(cell, model(), {10.0, 4.2, 20.0}, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW((void)cc_cv_charge(cell, model(), {10.0, 4.2, 0.0}, 1.0, 0.0), std::invalid_argument);
}

TEST(Discharge, OneCFromFullTakesAnHour) {
    const auto full = cell_at_soc(100.0, 4400.0, 0.0, 25.0, model());
    const auto run = constant_current_discharge(full, model(), 4400.0, 3.3, 1.0, 0.0);
    EXPECT_NEAR(run.samples.back().t, 3600.0, 1.0);
    EXPECT_EQ(run.cell.q_true, 0.0);
    EXPECT_LE(run.samples.back().v_terminal, 3.3);
}

TEST(Discharge, DurationScalesInverselyWithCurrent) {
    const auto full = cell_at_soc(100.0, 4400.0, 0.0, 25.0, model());
    for (double i : {1100.0, 2200.0, 8800.0}) {
        const auto run = constant_current_discharge(full, model(), i, 3.3, 1.0, 0.0);
        EXPECT_NEAR(run.samples.back().t, 3600.0 * 4400.0 / i, 1.0) << i;
    }
}

TEST(Discharge, HugeCurrentTerminates) {
    const auto full = cell_at_soc(100.0, 4400.0, 0.05, 25.0, model());
    const auto run = constant_current_discharge(full, model(), 1e9, 0.0, 1.0, 0.0);
    EXPECT_EQ(run.samples.size(), 1u);
    EXPECT_EQ(run.cell.q_true, 0.0);
}

TEST(Discharge, InternalResistanceTripsCutoffEarly) {
    const auto full = cell_at_soc(100.0, 4400.0, 0.05, 25.0, model());
    const auto run = constant_current_discharge(full, model(), 4400.0, 3.3, 1.0, 0.0);
    EXPECT_GT(run.cell.q_true, 0.0);
    EXPECT_LE(run.samples.back().v_terminal, 3.3);
}

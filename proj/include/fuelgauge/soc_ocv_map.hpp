#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuelgauge {

/// One linear piece of the SOC-OCV relationship: soc = a * ocv - b on [v_lo, v_hi).
struct OcvSegment {
    double v_lo;  // volts
    double v_hi;  // volts
    double a;     // percent per volt
    double b;     // percent

    [[nodiscard]] double evaluate(double ocv) const { return a * ocv - b; }
};

/// Thrown when an OCV reading falls outside the segments allowed at the
/// current temperature. The initial SOC cannot be trusted from such a reading.
class OcvOutOfRange : public std::runtime_error {
public:
    enum class Side { Below, Above };

    OcvOutOfRange(double ocv, double temp_c, Side side);

    [[nodiscard]] double ocv() const { return ocv_; }
    [[nodiscard]] double temperature() const { return temp_c_; }
    [[nodiscard]] Side side() const { return side_; }

private:
    double ocv_;
    double temp_c_;
    Side side_;
};

class InvalidOcvTable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TableDiagnostic {
    enum class Kind { Contiguity, NonPositiveSlope, EmptyRange, Discontinuity, Empty };

    Kind kind;
    std::size_t segment;  // 0-based index of the segment the diagnostic concerns
    double voltage;       // breakpoint or offending voltage
    double magnitude;     // gap width, slope, or SOC jump (right minus left)
    std::string message;

    /// Discontinuities are reported but do not make a table unusable.
    [[nodiscard]] bool is_error() const { return kind != Kind::Discontinuity; }
};

/// Reports contiguity violations, non-positive slopes and breakpoint jumps.
/// Accepts raw segments so that malformed tables can be inspected.
[[nodiscard]] std::vector<TableDiagnostic> validate_table(std::span<const OcvSegment> segments);

/// Ordered, contiguous piecewise-linear SOC-OCV map. Immutable once built.
class OcvTable {
public:
    /// Throws InvalidOcvTable when validate_table reports any error.
    explicit OcvTable(std::vector<OcvSegment> segments, double reference_temperature_c = 25.0);

    /// The eight-segment 25 degC table compiled into the library.
    [[nodiscard]] static const OcvTable& default_table();

    /// Parses `v_lo v_hi a b` lines; `#` starts a comment.
    [[nodiscard]] static OcvTable parse(std::istream& in);
    [[nodiscard]] static OcvTable load(const std::filesystem::path& path);

    [[nodiscard]] std::span<const OcvSegment> segments() const { return segments_; }
    [[nodiscard]] std::size_t size() const { return segments_.size(); }
    [[nodiscard]] const OcvSegment& operator[](std::size_t i) const { return segments_[i]; }
    [[nodiscard]] double reference_temperature() const { return reference_temperature_; }
    [[nodiscard]] double min_voltage() const { return segments_.front().v_lo; }
    [[nodiscard]] double max_voltage() const { return segments_.back().v_hi; }

private:
    std::vector<OcvSegment> segments_;
    double reference_temperature_;
};

/// Parses segment lines without enforcing table invariants.
[[nodiscard]] std::vector<OcvSegment> parse_segments(std::istream& in);

struct SegmentMask {
    std::size_t first_allowed_index;  // 1-based
};

/// Cold cells shift the low-SOC part of the curve, so the lowest segments are
/// dropped: T >= 15 keeps all, 5 <= T < 15 drops one, T < 5 drops two.
[[nodiscard]] SegmentMask allowed_segments(double temp_c);

/// Index (0-based) of the segment owning `ocv`. Breakpoints belong to the
/// higher segment and the last segment is closed. Throws OcvOutOfRange.
[[nodiscard]] std::size_t segment_for_ocv(double ocv, double temp_c, const OcvTable& table);

/// SOC in percent, clamped to [0, 100]. Throws OcvOutOfRange.
[[nodiscard]] double soc_from_ocv(double ocv, double temp_c, const OcvTable& table);

/// Inverse map used by the cell simulator. SOC space is partitioned by the
/// segment images [a*v_lo - b, a*v_hi - b), lower segment winning overlaps.
/// SOC values in an image gap map to the shared breakpoint; values past the
/// covered range map to the nearest table end.
[[nodiscard]] double ocv_from_soc(double soc, const OcvTable& table);

}  // namespace fuelgauge

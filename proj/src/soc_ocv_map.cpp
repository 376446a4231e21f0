#include "fuelgauge/soc_ocv_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fuelgauge {

namespace {

// Jumps smaller than this are treated as continuous.
constexpr double kContinuityTolerance = 1e-9;

std::string describe(double ocv, double temp_c, OcvOutOfRange::Side side) {
    std::ostringstream os;
    os << "OCV " << ocv << " V is " << (side == OcvOutOfRange::Side::Below ? "below" : "above")
       << " the segments allowed at " << temp_c << " degC";
    return os.str();
}

}  // namespace

OcvOutOfRange::OcvOutOfRange(double ocv, double temp_c, Side side)
    : std::runtime_error(describe(ocv, temp_c, side)), ocv_(ocv), temp_c_(temp_c), side_(side) {}

std::vector<TableDiagnostic> validate_table(std::span<const OcvSegment> segments) {
    std::vector<TableDiagnostic> out;
    if (segments.empty()) {
        out.push_back({TableDiagnostic::Kind::Empty, 0, 0.0, 0.0, "table has no segments"});
        return out;
    }
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& s = segments[k];
        if (!(s.v_lo < s.v_hi)) {
            std::ostringstream os;
            os << "segment " << k + 1 << ": empty voltage range [" << s.v_lo << ", " << s.v_hi << "]";
            out.push_back({TableDiagnostic::Kind::EmptyRange, k, s.v_lo, s.v_hi - s.v_lo, os.str()});
        }
        if (!(s.a > 0.0)) {
            std::ostringstream os;
            os << "segment " << k + 1 << ": non-positive slope a=" << s.a;
            out.push_back({TableDiagnostic::Kind::NonPositiveSlope, k, s.v_lo, s.a, os.str()});
        }
        if (k + 1 == segments.size()) {
            break;
        }
        const auto& next = segments[k + 1];
        if (s.v_hi != next.v_lo) {
            std::ostringstream os;
            os << "segments " << k + 1 << "/" << k + 2 << ": v_hi " << s.v_hi << " != next v_lo " << next.v_lo;
            out.push_back({TableDiagnostic::Kind::Contiguity, k, s.v_hi, next.v_lo - s.v_hi, os.str()});
            continue;
        }
        const double left = s.evaluate(s.v_hi);
        const double right = next.evaluate(next.v_lo);
        const double jump = right - left;
        if (std::abs(jump) > kContinuityTolerance) {
            std::ostringstream os;
            os << "breakpoint " << s.v_hi << " V: segment " << k + 1 << " gives " << left << " %, segment " << k + 2
               << " gives " << right << " % (jump " << jump << ")";
            out.push_back({TableDiagnostic::Kind::Discontinuity, k, s.v_hi, jump, os.str()});
        }
    }
    return out;
}

OcvTable::OcvTable(std::vector<OcvSegment> segments, double reference_temperature_c)
    : segments_(std::move(segments)), reference_temperature_(reference_temperature_c) {
    for (const auto& d : validate_table(segments_)) {
        if (d.is_error()) {
            throw InvalidOcvTable(d.message);
        }
    }
}

const OcvTable& OcvTable::default_table() {
    // 25 degC, eight segments covering [3.3, 4.132] V.
    static const OcvTable table({
        {3.300, 3.452, 26.55, 88.6},
        {3.452, 3.508, 125.0, 431.1},
        {3.508, 3.595, 149.0, 516.1},
        {3.595, 3.676, 344.0, 1225.0},
        {3.676, 3.739, 229.5, 800.9},
        {3.739, 3.967, 111.9, 359.9},
        {3.967, 4.039, 104.8, 332.0},
        {4.039, 4.132, 90.61, 274.7},
    });
    return table;
}

std::vector<OcvSegment> parse_segments(std::istream& in) {
    std::vector<OcvSegment> segments;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        OcvSegment s{};
        if (!(fields >> s.v_lo)) {
            continue;  // blank or comment-only
        }
        std::string extra;
        if (!(fields >> s.v_hi >> s.a >> s.b) || (fields >> extra)) {
            throw InvalidOcvTable("line " + std::to_string(line_no) + ": expected four fields `v_lo v_hi a b`");
        }
        if (!std::isfinite(s.v_lo) || !std::isfinite(s.v_hi) || !std::isfinite(s.a) || !std::isfinite(s.b)) {
            throw InvalidOcvTable("line " + std::to_string(line_no) + ": non-finite value");
        }
        segments.push_back(s);
    }
    return segments;
}

OcvTable OcvTable::parse(std::istream& in) { return OcvTable(parse_segments(in)); }

OcvTable OcvTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidOcvTable("cannot open table file " + path.string());
    }
    return parse(in);
}

SegmentMask allowed_segments(double temp_c) {
    if (temp_c >= 15.0) {
        return {1};
    }
    if (temp_c >= 5.0) {
        return {2};
    }
    return {3};
}

std::size_t segment_for_ocv(double ocv, double temp_c, const OcvTable& table) {
    if (!std::isfinite(ocv)) {
        throw std::invalid_argument("OCV must be finite");
    }
    const auto segs = table.segments();
    const std::size_t first = allowed_segments(temp_c).first_allowed_index - 1;
    if (first >= segs.size()) {
        throw OcvOutOfRange(ocv, temp_c, OcvOutOfRange::Side::Below);
    }
    if (ocv < segs[first].v_lo) {
        throw OcvOutOfRange(ocv, temp_c, OcvOutOfRange::Side::Below);
    }
    if (ocv > segs.back().v_hi) {
        throw OcvOutOfRange(ocv, temp_c, OcvOutOfRange::Side::Above);
    }
    // First segment whose upper bound lies strictly above ocv; the final
    // segment also owns its upper endpoint.
    auto it = std::upper_bound(segs.begin() + static_cast<std::ptrdiff_t>(first), segs.end(), ocv,
                               [](double v, const OcvSegment& s) { return v < s.v_hi; });
    if (it == segs.end()) {
        return segs.size() - 1;
    }
    return static_cast<std::size_t>(it - segs.begin());
}

double soc_from_ocv(double ocv, double temp_c, const OcvTable& table) {
    const auto& seg = table[segment_for_ocv(ocv, temp_c, table)];
    return std::clamp(seg.evaluate(ocv), 0.0, 100.0);
}

double ocv_from_soc(double soc, const OcvTable& table) {
    const auto segs = table.segments();
    const std::size_t last = segs.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
        const auto& s = segs[k];
        const double lo = s.evaluate(s.v_lo);
        const double hi = s.evaluate(s.v_hi);
        if (soc < lo) {
            // Below this image and not claimed by any earlier one: either the
            // bottom of the table or a gap left by an upward breakpoint jump.
            return s.v_lo;
        }
        if (soc < hi || (k == last && soc <= hi)) {
            return (soc + s.b) / s.a;
        }
    }
    return segs.back().v_hi;
}

}  // namespace fuelgauge

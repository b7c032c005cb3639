#pragma once

// File formats and report serialization for the command-line tool.
// Rationals are written as [num, den]; doubles use the shortest decimal that
// round-trips, so every report parses back to the same values.

#include "frameforge/expframe_line.hpp"
#include "frameforge/lca_finite.hpp"
#include "frameforge/numerics.hpp"
#include "frameforge/rational.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <variant>

namespace frameforge::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

Json read_json_file(const std::filesystem::path& path);
/// Throws ValidationError if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

Json rational_json(const Rational& r);
/// Accepts [num, den] or a plain integer; `field` names the value in errors.
Rational parse_rational(const Json& j, const std::string& field);

/// {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
ComplexMatrix parse_matrix(const Json& j);
Json matrix_json(const ComplexMatrix& m);

using LineSpectrum = std::variant<IntervalSpectrum, GridSpectrum>;

/// {"kind": "intervals", "d": [n, d], "intervals": [[[a_n, a_d], [b_n, b_d]], ...]}
/// or {"kind": "grid", "m": 64, "cells": [...]}.
LineSpectrum parse_line_spectrum(const Json& j);
Json line_spectrum_json(const LineSpectrum& s);

/// {"kind": "finite_group", "orders": [...], "lattice_divisors": [...], "cells": [...]};
/// a cell is a list of coordinates, or an integer for rank-1 groups.
GroupSpectrum parse_group_spectrum(const Json& j);
Json group_spectrum_json(const GroupSpectrum& s);

Json element_json(const GroupElement& x);
GroupElement parse_element(const Json& j, std::size_t rank, const std::string& field);

Json frame_report_json(const FrameReport& r);
FrameReport parse_frame_report(const Json& j);

Json group_report_json(const GroupFrameReport& r);
GroupFrameReport parse_group_report(const Json& j);

Json sampling_json(const SamplingSet& s);
SamplingSet parse_sampling(const Json& j);

/// %.17g
std::string format_double(double x);

}  // namespace frameforge::io

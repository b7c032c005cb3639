#include "io.hpp"

#include "frameforge/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace frameforge::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError("expected a JSON object holding field '" + std::string(key) + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing field '" + std::string(key) + "'");
  return *it;
}

std::int64_t as_int(const Json& j, const std::string& name) {
  if (!j.is_number_integer()) throw ValidationError("field '" + name + "' must be an integer");
  return j.get<std::int64_t>();
}

double as_double(const Json& j, const std::string& name) {
  if (!j.is_number()) throw ValidationError("field '" + name + "' must be a number");
  return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& name) {
  if (!j.is_array()) throw ValidationError("field '" + name + "' must be an array");
  return j;
}

std::vector<std::int64_t> int_list(const Json& j, const std::string& name) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < as_array(j, name).size(); ++i)
    out.push_back(as_int(j[i], name + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("input file " + path.string() + " is not valid JSON: " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing output file " + path.string());
}

Json rational_json(const Rational& r) { return Json::array({r.numerator(), r.denominator()}); }

Rational parse_rational(const Json& j, const std::string& name) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_array() || j.size() != 2) throw ValidationError("field '" + name + "' must be [num, den]");
  const auto num = as_int(j[0], name + "[0]");
  const auto den = as_int(j[1], name + "[1]");
  if (den == 0) throw ValidationError("field '" + name + "' has a zero denominator");
  return Rational(num, den);
}

ComplexMatrix parse_matrix(const Json& j) {
  const auto rows = as_int(field(j, "rows"), "rows");
  const auto cols = as_int(field(j, "cols"), "cols");
  if (rows < 1 || cols < 1) throw ValidationError("fields 'rows' and 'cols' must be positive");
  const Json& re = as_array(field(j, "re"), "re");
  const Json& im = as_array(field(j, "im"), "im");
  const auto count = static_cast<std::size_t>(rows * cols);
  if (re.size() != count) throw ValidationError("field 're' has " + std::to_string(re.size()) + " entries, expected rows*cols = " + std::to_string(count));
  if (im.size() != count) throw ValidationError("field 'im' has " + std::to_string(im.size()) + " entries, expected rows*cols = " + std::to_string(count));
  std::vector<Complex> entries(count);
  for (std::size_t i = 0; i < count; ++i) {
    entries[i] = {as_double(re[i], "re[" + std::to_string(i) + "]"), as_double(im[i], "im[" + std::to_string(i) + "]")};
  }
  return ComplexMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

Json matrix_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (const auto& z : m.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

LineSpectrum parse_line_spectrum(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw ValidationError("field 'kind' must be a string");
  const auto k = kind.get<std::string>();
  if (k == "grid") {
    GridSpectrum g;
    g.m = as_int(field(j, "m"), "m");
    for (auto c : int_list(field(j, "cells"), "cells")) {
      if (c < 0) throw ValidationError("field 'cells' has a negative index");
      g.cells.push_back(static_cast<std::size_t>(c));
    }
    try {
      g.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("field 'cells': ") + e.what());
    }
    return g;
  }
  if (k == "intervals") {
    IntervalSpectrum s;
    s.length = j.contains("d") ? parse_rational(j["d"], "d") : Rational{1};
    const Json& ivs = as_array(field(j, "intervals"), "intervals");
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      const std::string name = "intervals[" + std::to_string(i) + "]";
      if (!ivs[i].is_array() || ivs[i].size() != 2) throw ValidationError("field '" + name + "' must be [a, b]");
      s.intervals.emplace_back(parse_rational(ivs[i][0], name + "[0]"), parse_rational(ivs[i][1], name + "[1]"));
    }
    try {
      s.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("field 'intervals': ") + e.what());
    }
    return s;
  }
  throw ValidationError("field 'kind' must be \"grid\" or \"intervals\", got \"" + k + "\"");
}

Json line_spectrum_json(const LineSpectrum& s) {
  if (const auto* g = std::get_if<GridSpectrum>(&s)) return Json{{"kind", "grid"}, {"m", g->m}, {"cells", g->cells}};
  const auto& iv = std::get<IntervalSpectrum>(s);
  Json list = Json::array();
  for (const auto& [a, b] : iv.intervals) list.push_back(Json::array({rational_json(a), rational_json(b)}));
  return Json{{"kind", "intervals"}, {"d", rational_json(iv.length)}, {"intervals", std::move(list)}};
}

GroupElement parse_element(const Json& j, std::size_t rank, const std::string& name) {
  GroupElement x;
  if (j.is_number_integer()) {
    x = {j.get<std::int64_t>()};
  } else {
    x = int_list(j, name);
  }
  if (x.size() != rank) {
    throw ValidationError("field '" + name + "' has " + std::to_string(x.size()) + " coordinates, group rank is " +
                          std::to_string(rank));
  }
  return x;
}

Json element_json(const GroupElement& x) { return Json(x); }

GroupSpectrum parse_group_spectrum(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string() || kind.get<std::string>() != "finite_group") {
    throw ValidationError("field 'kind' must be \"finite_group\"");
  }
  const auto orders = int_list(field(j, "orders"), "orders");
  const auto divisors = int_list(field(j, "lattice_divisors"), "lattice_divisors");
  FiniteAbelianGroup g = [&] {
    try {
      return FiniteAbelianGroup(orders);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("field 'orders': ") + e.what());
    }
  }();
  GroupSpectrum s;
  try {
    s.lattice = BoxSubgroup(g, divisors);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field 'lattice_divisors': ") + e.what());
  }
  const Json& cells = as_array(field(j, "cells"), "cells");
  for (std::size_t i = 0; i < cells.size(); ++i)
    s.cell_reps.push_back(parse_element(cells[i], g.rank(), "cells[" + std::to_string(i) + "]"));
  try {
    s.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field 'cells': ") + e.what());
  }
  return s;
}

Json group_spectrum_json(const GroupSpectrum& s) {
  Json cells = Json::array();
  for (const auto& c : s.cell_reps) cells.push_back(element_json(c));
  return Json{{"kind", "finite_group"},
              {"orders", s.group().orders()},
              {"lattice_divisors", s.lattice.divisors()},
              {"cells", std::move(cells)}};
}

Json frame_report_json(const FrameReport& r) {
  return Json{{"epsilon", r.epsilon},
              {"cardJ", r.cardinality},
              {"budget", r.budget},
              {"density", rational_json(r.density)},
              {"measure", rational_json(r.measure)},
              {"A_exact", r.lower_bound},
              {"B_exact", r.upper_bound},
              {"A_norm", r.lower_normalized},
              {"B_norm", r.upper_normalized},
              {"achieved_a", r.achieved_a},
              {"theoretical_scale", r.theoretical_scale}};
}

FrameReport parse_frame_report(const Json& j) {
  FrameReport r;
  r.epsilon = as_double(field(j, "epsilon"), "epsilon");
  r.cardinality = static_cast<std::size_t>(as_int(field(j, "cardJ"), "cardJ"));
  r.budget = static_cast<std::size_t>(as_int(field(j, "budget"), "budget"));
  r.density = parse_rational(field(j, "density"), "density");
  r.measure = parse_rational(field(j, "measure"), "measure");
  r.lower_bound = as_double(field(j, "A_exact"), "A_exact");
  r.upper_bound = as_double(field(j, "B_exact"), "B_exact");
  r.lower_normalized = as_double(field(j, "A_norm"), "A_norm");
  r.upper_normalized = as_double(field(j, "B_norm"), "B_norm");
  r.achieved_a = as_double(field(j, "achieved_a"), "achieved_a");
  r.theoretical_scale = as_double(field(j, "theoretical_scale"), "theoretical_scale");
  return r;
}

Json group_report_json(const GroupFrameReport& r) {
  return Json{{"epsilon", r.epsilon},
              {"k", r.k},
              {"q", r.q},
              {"M", r.cells_total},
              {"budget", r.budget},
              {"density", rational_json(r.density)},
              {"measure", rational_json(r.measure)},
              {"A_exact", r.lower_bound},
              {"B_exact", r.upper_bound},
              {"A_norm", r.lower_normalized},
              {"B_norm", r.upper_normalized},
              {"achieved_a", r.achieved_a},
              {"theoretical_scale", r.theoretical_scale}};
}

GroupFrameReport parse_group_report(const Json& j) {
  GroupFrameReport r;
  r.epsilon = as_double(field(j, "epsilon"), "epsilon");
  r.k = static_cast<std::size_t>(as_int(field(j, "k"), "k"));
  r.q = static_cast<std::size_t>(as_int(field(j, "q"), "q"));
  r.cells_total = as_int(field(j, "M"), "M");
  r.budget = static_cast<std::size_t>(as_int(field(j, "budget"), "budget"));
  r.density = parse_rational(field(j, "density"), "density");
  r.measure = parse_rational(field(j, "measure"), "measure");
  r.lower_bound = as_double(field(j, "A_exact"), "A_exact");
  r.upper_bound = as_double(field(j, "B_exact"), "B_exact");
  r.lower_normalized = as_double(field(j, "A_norm"), "A_norm");
  r.upper_normalized = as_double(field(j, "B_norm"), "B_norm");
  r.achieved_a = as_double(field(j, "achieved_a"), "achieved_a");
  r.theoretical_scale = as_double(field(j, "theoretical_scale"), "theoretical_scale");
  return r;
}

Json sampling_json(const SamplingSet& s) {
  return Json{{"m", s.m}, {"J", s.offsets}, {"spacing", rational_json(s.spacing)}};
}

SamplingSet parse_sampling(const Json& j) {
  SamplingSet s;
  s.m = as_int(field(j, "m"), "m");
  if (s.m < 1) throw ValidationError("field 'm' must be positive");
  for (auto v : int_list(field(j, "J"), "J")) {
    if (v < 0 || v >= s.m) throw ValidationError("field 'J' has an offset outside [0, m)");
    s.offsets.push_back(static_cast<std::size_t>(v));
  }
  s.spacing = parse_rational(field(j, "spacing"), "spacing");
  if (s.spacing <= Rational{0}) throw ValidationError("field 'spacing' must be positive");
  return s;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace frameforge::io

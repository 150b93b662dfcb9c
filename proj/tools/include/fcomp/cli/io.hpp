#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "fcomp/radar.hpp"

namespace fcomp::cli {

// Measurement file (text):
//
//   # fcomp measurement v1
//   M <Ms*Mc>
//   Ms <int>
//   Mc <int>
//   f0 <Hz>
//   B <Hz>
//   Ts <s>
//   Tc <s>
//   samples
//   <re> <im>        (M lines, index mc*Ms + ms, 17 significant digits)
//
// Scene file (text):
//
//   # fcomp scene v1
//   K <count>
//   <r> <v> <alpha_re> <alpha_im>   (K lines)

struct MeasurementFile {
  RadarConfig radar;
  Measurement measurement{1, 1};
};

void write_measurement(std::ostream& out, const RadarConfig& cfg, const Measurement& y);
MeasurementFile read_measurement(std::istream& in);

void write_scene(std::ostream& out, const Scene& scene);
Scene read_scene(std::istream& in);

/// Writes `content` to `path` through a temporary file and a rename, so no
/// partial file is left behind on failure. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// printf("%.<digits>g").
std::string format_number(double x, int digits);

}  // namespace fcomp::cli

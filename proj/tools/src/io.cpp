#include "fcomp/cli/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fcomp/errors.hpp"

namespace fcomp::cli {
namespace {

constexpr const char* kMeasurementMagic = "# fcomp measurement v1";
constexpr const char* kSceneMagic = "# fcomp scene v1";

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw ValidationError(std::string(what) + ": unexpected end of file");
}

void expect_magic(std::istream& in, const char* magic, const char* what) {
  if (next_line(in, what) != magic) throw ValidationError(std::string(what) + ": missing '" + magic + "' header");
}

}  // namespace

std::string format_number(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

void write_measurement(std::ostream& out, const RadarConfig& cfg, const Measurement& y) {
  if (y.ms() != cfg.ms_count || y.mc() != cfg.mc_count)
    throw ValidationError("measurement file: shape does not match the radar config");
  out << kMeasurementMagic << '\n'
      << "M " << y.size() << '\n'
      << "Ms " << cfg.ms_count << '\n'
      << "Mc " << cfg.mc_count << '\n'
      << "f0 " << format_number(cfg.f0, 17) << '\n'
      << "B " << format_number(cfg.bandwidth, 17) << '\n'
      << "Ts " << format_number(cfg.ts, 17) << '\n'
      << "Tc " << format_number(cfg.tc, 17) << '\n'
      << "samples\n";
  for (Index m = 0; m < y.size(); ++m)
    out << format_number(y.samples()[m].real(), 17) << ' ' << format_number(y.samples()[m].imag(), 17) << '\n';
}

MeasurementFile read_measurement(std::istream& in) {
  constexpr const char* what = "measurement file";
  expect_magic(in, kMeasurementMagic, what);

  std::map<std::string, double> header;
  for (;;) {
    const std::string line = next_line(in, what);
    if (line == "samples") break;
    std::istringstream ss(line);
    std::string key;
    double value = 0.0;
    if (!(ss >> key >> value)) throw ValidationError("measurement file: malformed header line '" + line + "'");
    header[key] = value;
  }
  for (const char* key : {"M", "Ms", "Mc", "f0", "B", "Ts", "Tc"})
    if (!header.contains(key)) throw ValidationError(std::string("measurement file: missing header key ") + key);

  MeasurementFile file;
  file.radar.ms_count = static_cast<int>(header["Ms"]);
  file.radar.mc_count = static_cast<int>(header["Mc"]);
  file.radar.f0 = header["f0"];
  file.radar.bandwidth = header["B"];
  file.radar.ts = header["Ts"];
  file.radar.tc = header["Tc"];
  file.radar.validate();
  const Index m = static_cast<Index>(header["M"]);
  if (m != file.radar.sample_count()) throw ValidationError("measurement file: M differs from Ms * Mc");

  Eigen::VectorXcd samples(m);
  for (Index i = 0; i < m; ++i) {
    std::istringstream ss(next_line(in, what));
    double re = 0.0, im = 0.0;
    if (!(ss >> re >> im)) throw ValidationError("measurement file: malformed sample " + std::to_string(i));
    samples[i] = Complex(re, im);
  }
  std::string extra;
  while (in >> extra) throw ValidationError("measurement file: more than M samples");
  file.measurement = Measurement(file.radar.ms_count, file.radar.mc_count, std::move(samples));
  return file;
}

void write_scene(std::ostream& out, const Scene& scene) {
  out << kSceneMagic << '\n' << "K " << scene.size() << '\n';
  for (const Target& t : scene)
    out << format_number(t.r, 17) << ' ' << format_number(t.v, 17) << ' ' << format_number(t.alpha.real(), 17) << ' '
        << format_number(t.alpha.imag(), 17) << '\n';
}

Scene read_scene(std::istream& in) {
  constexpr const char* what = "scene file";
  expect_magic(in, kSceneMagic, what);
  std::istringstream head(next_line(in, what));
  std::string key;
  long long k = -1;
  if (!(head >> key >> k) || key != "K" || k < 0) throw ValidationError("scene file: expected 'K <count>'");
  Scene scene;
  for (long long i = 0; i < k; ++i) {
    std::istringstream ss(next_line(in, what));
    Target t;
    double re = 0.0, im = 0.0;
    if (!(ss >> t.r >> t.v >> re >> im)) throw ValidationError("scene file: malformed target " + std::to_string(i));
    t.alpha = Complex(re, im);
    scene.push_back(t);
  }
  return scene;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fcomp::cli

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scanplan/core/error.hpp"
#include "scanplan/core/types.hpp"

namespace scanplan {

enum class CloudFormat { kPlyAscii, kXyzCsv };

namespace detail {

/// Shortest round-trip decimal form of a double (std::to_chars).
inline std::string dtos(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc()) return false;
  for (const char* p = res.ptr; p != last; ++p)
    if (*p != ' ' && *p != '\t' && *p != '\r') return false;
  return true;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

/// Whitespace tokenizer for PLY header/data lines.
inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline std::string chomp(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  return line;
}

}  // namespace detail

/// Reads a CSV point file, one "x,y,z" triple per line. Units are taken as
/// millimeters verbatim. Blank lines are ignored; anything else malformed
/// raises ParseError naming the offending line.
inline PointCloud load_xyz_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  PointCloud cloud;
  cloud.source = path;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = detail::chomp(raw);
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 3)
      throw ParseError(path, lineno, "expected 3 comma-separated values, got " +
                                         std::to_string(fields.size()));
    Vec3 p;
    for (int c = 0; c < 3; ++c)
      if (!detail::parse_double(fields[c], p[c]))
        throw ParseError(path, lineno, "bad number '" + std::string(fields[c]) + "'");
    if (!p.allFinite()) throw ParseError(path, lineno, "non-finite coordinate");
    cloud.points.push_back(p);
  }
  if (cloud.empty()) throw ParseError(path, lineno, "empty cloud: file has no points");
  return cloud;
}

inline void save_xyz_csv(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& p : cloud.points)
    out << detail::dtos(p.x()) << ',' << detail::dtos(p.y()) << ',' << detail::dtos(p.z())
        << '\n';
  if (!out) throw IoError("write failed: " + path);
}

/// Reads an ASCII PLY file. The vertex element must provide x, y, z;
/// trailing per-vertex properties (normals, colors) are tolerated and
/// ignored. Other elements are skipped line by line.
inline PointCloud load_ply_ascii(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string raw;
  int lineno = 0;
  auto next_line = [&](std::string& line) {
    if (!std::getline(in, raw)) return false;
    ++lineno;
    line = detail::chomp(raw);
    return true;
  };

  std::string line;
  if (!next_line(line) || line != "ply") throw ParseError(path, 1, "missing 'ply' magic");

  struct Element {
    std::string name;
    long count = 0;
    int property_count = 0;
    int x = -1, y = -1, z = -1;
  };
  std::vector<Element> elements;
  bool ascii = false;
  bool header_done = false;
  while (next_line(line)) {
    const auto tok = detail::tokens(line);
    if (tok.empty() || tok[0] == "comment") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii")
        throw ParseError(path, lineno, "only ascii PLY is supported");
      ascii = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError(path, lineno, "malformed element line");
      Element e;
      e.name = tok[1];
      try {
        e.count = std::stol(tok[2]);
      } catch (const std::exception&) {
        throw ParseError(path, lineno, "bad element count '" + tok[2] + "'");
      }
      elements.push_back(e);
    } else if (tok[0] == "property") {
      if (elements.empty()) throw ParseError(path, lineno, "property before element");
      Element& e = elements.back();
      if (tok.size() >= 2 && tok[1] == "list") {
        e.property_count += 1;  // a list is one (variable-width) column
      } else {
        if (tok.size() != 3) throw ParseError(path, lineno, "malformed property line");
        if (tok[2] == "x") e.x = e.property_count;
        if (tok[2] == "y") e.y = e.property_count;
        if (tok[2] == "z") e.z = e.property_count;
        e.property_count += 1;
      }
    } else if (tok[0] == "end_header") {
      header_done = true;
      break;
    } else {
      throw ParseError(path, lineno, "unexpected header line '" + tok[0] + "'");
    }
  }
  if (!header_done) throw ParseError(path, lineno, "missing end_header");
  if (!ascii) throw ParseError(path, lineno, "missing format line");

  PointCloud cloud;
  cloud.source = path;
  for (const auto& e : elements) {
    if (e.name == "vertex") {
      if (e.x < 0 || e.y < 0 || e.z < 0)
        throw ParseError(path, lineno, "vertex element lacks x/y/z properties");
      for (long i = 0; i < e.count; ++i) {
        if (!next_line(line)) throw ParseError(path, lineno, "unexpected end of file");
        const auto tok = detail::tokens(line);
        if (static_cast<int>(tok.size()) < e.property_count)
          throw ParseError(path, lineno, "vertex line has too few values");
        Vec3 p;
        const int cols[3] = {e.x, e.y, e.z};
        for (int c = 0; c < 3; ++c)
          if (!detail::parse_double(tok[cols[c]], p[c]))
            throw ParseError(path, lineno, "bad number '" + tok[cols[c]] + "'");
        cloud.points.push_back(p);
      }
    } else {
      for (long i = 0; i < e.count; ++i)
        if (!next_line(line)) throw ParseError(path, lineno, "unexpected end of file");
    }
  }
  if (cloud.empty()) throw ParseError(path, lineno, "empty cloud: PLY has no vertices");
  return cloud;
}

inline void save_ply_ascii(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "end_header\n";
  for (const auto& p : cloud.points)
    out << detail::dtos(p.x()) << ' ' << detail::dtos(p.y()) << ' ' << detail::dtos(p.z())
        << '\n';
  if (!out) throw IoError("write failed: " + path);
}

/// PLY with positions and unit normals (nx, ny, nz).
inline void save_ply_ascii(const std::string& path, const FeatureCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "property double nx\nproperty double ny\nproperty double nz\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    const Vec3& n = cloud.normals[i];
    out << detail::dtos(p.x()) << ' ' << detail::dtos(p.y()) << ' ' << detail::dtos(p.z())
        << ' ' << detail::dtos(n.x()) << ' ' << detail::dtos(n.y()) << ' '
        << detail::dtos(n.z()) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

inline PointCloud load_cloud(const std::string& path, CloudFormat format) {
  switch (format) {
    case CloudFormat::kPlyAscii:
      return load_ply_ascii(path);
    case CloudFormat::kXyzCsv:
      return load_xyz_csv(path);
  }
  throw InvalidInput("unknown cloud format");
}

inline void save_cloud(const std::string& path, const PointCloud& cloud, CloudFormat format) {
  switch (format) {
    case CloudFormat::kPlyAscii:
      save_ply_ascii(path, cloud);
      return;
    case CloudFormat::kXyzCsv:
      save_xyz_csv(path, cloud);
      return;
  }
  throw InvalidInput("unknown cloud format");
}

/// Segmentation debug output: positions colored by region label.
/// label < 0 marks points outside every region (drawn gray).
inline void write_labeled_ply(const std::string& path, const std::vector<Vec3>& positions,
                              const std::vector<int>& labels) {
  if (positions.size() != labels.size())
    throw InvalidInput("labeled ply: positions/labels size mismatch");
  static constexpr unsigned char kPalette[][3] = {
      {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},  {245, 130, 48},
      {145, 30, 180}, {70, 240, 240},  {240, 50, 230}, {210, 245, 60}, {250, 190, 212},
      {0, 128, 128},  {220, 190, 255}, {170, 110, 40}, {255, 250, 200}, {128, 0, 0},
      {170, 255, 195}, {128, 128, 0},  {255, 215, 180}, {0, 0, 128},   {128, 128, 128}};
  constexpr int kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << positions.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "property int label\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Vec3& p = positions[i];
    int r = 100, g = 100, b = 100;
    if (labels[i] >= 0) {
      const auto& c = kPalette[labels[i] % kPaletteSize];
      r = c[0];
      g = c[1];
      b = c[2];
    }
    out << detail::dtos(p.x()) << ' ' << detail::dtos(p.y()) << ' ' << detail::dtos(p.z())
        << ' ' << r << ' ' << g << ' ' << b << ' ' << labels[i] << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace scanplan

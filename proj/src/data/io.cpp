// Copyright 2026 The seedcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seedcomp/data/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "seedcomp/core/errors.hpp"

namespace seedcomp::data {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, std::size_t line_no, const char* format) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(std::string(format) + " line " + std::to_string(line_no) +
                     ": bad number '" + tok + "'");
  }
  return v;
}

void put_point(std::ostream& os, const Vec3& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
  os << buf;
}

std::string lower_extension(const fs::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path.string());
  return is;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot write " + path.string());
  return os;
}

}  // namespace

PointCloud parse_xyz(std::istream& is) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 3) {
      throw ParseError("xyz line " + std::to_string(line_no) + ": expected 3 values, got " +
                       std::to_string(tok.size()));
    }
    cloud.push_back({parse_number(tok[0], line_no, "xyz"), parse_number(tok[1], line_no, "xyz"),
                     parse_number(tok[2], line_no, "xyz")});
  }
  if (cloud.empty()) throw ParseError("xyz: no points");
  return cloud;
}

void format_xyz(std::ostream& os, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) put_point(os, cloud[i]);
}

PointCloud parse_ply(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    if (!std::getline(is, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("ply line " + std::to_string(line_no) + ": " + why);
  };

  if (!next() || line != "ply") throw fail("missing 'ply' signature");
  std::size_t vertices = 0;
  bool in_vertex = false, seen_vertex = false, ascii = false;
  std::vector<std::string> props;
  while (true) {
    if (!next()) throw fail("unterminated header");
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") throw fail("only ascii PLY is supported");
      ascii = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw fail("malformed element line");
      in_vertex = tok[1] == "vertex";
      if (in_vertex) {
        if (seen_vertex) throw fail("duplicate vertex element");
        seen_vertex = true;
        vertices = static_cast<std::size_t>(parse_number(tok[2], line_no, "ply"));
      } else if (!seen_vertex) {
        throw fail("elements before the vertex element are not supported");
      }
    } else if (tok[0] == "property") {
      if (tok.size() < 3) throw fail("malformed property line");
      if (in_vertex) {
        if (tok[1] == "list") throw fail("list properties on vertices are not supported");
        props.push_back(tok.back());
      }
    } else {
      throw fail("unknown header keyword '" + tok[0] + "'");
    }
  }
  if (!ascii) throw fail("missing format line");
  if (!seen_vertex) throw fail("no vertex element");
  std::size_t col[3];
  const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    auto it = std::find(props.begin(), props.end(), names[a]);
    if (it == props.end()) throw fail(std::string("vertex property '") + names[a] + "' missing");
    col[a] = static_cast<std::size_t>(it - props.begin());
  }
  PointCloud cloud;
  cloud.reserve(vertices);
  while (cloud.size() < vertices) {
    if (!next()) throw fail("expected " + std::to_string(vertices) + " vertices");
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != props.size()) {
      throw fail("expected " + std::to_string(props.size()) + " values, got " +
                 std::to_string(tok.size()));
    }
    cloud.push_back({parse_number(tok[col[0]], line_no, "ply"),
                     parse_number(tok[col[1]], line_no, "ply"),
                     parse_number(tok[col[2]], line_no, "ply")});
  }
  if (cloud.empty()) throw fail("no points");
  return cloud;
}

void format_ply(std::ostream& os, const PointCloud& cloud) {
  os << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
     << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  format_xyz(os, cloud);
}

PointCloud read_xyz(const fs::path& path) {
  auto is = open_in(path);
  try {
    return parse_xyz(is);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_xyz(const fs::path& path, const PointCloud& cloud) {
  auto os = open_out(path);
  format_xyz(os, cloud);
}

PointCloud read_ply(const fs::path& path) {
  auto is = open_in(path);
  try {
    return parse_ply(is);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_ply(const fs::path& path, const PointCloud& cloud) {
  auto os = open_out(path);
  format_ply(os, cloud);
}

PointCloud read_cloud(const fs::path& path) {
  return lower_extension(path) == ".ply" ? read_ply(path) : read_xyz(path);
}

void write_cloud(const fs::path& path, const PointCloud& cloud) {
  if (lower_extension(path) == ".ply") {
    write_ply(path, cloud);
  } else {
    write_xyz(path, cloud);
  }
}

std::vector<ShapePair> read_dataset(const fs::path& root, const std::string& split) {
  const auto dir = root / split;
  if (!fs::is_directory(dir)) throw ParseError("dataset split not found: " + dir.string());
  const std::string suffix = "_partial.xyz";
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      ids.push_back(name.substr(0, name.size() - suffix.size()));
    }
  }
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw ParseError("dataset split is empty: " + dir.string());
  std::vector<ShapePair> pairs;
  for (const auto& id : ids) {
    const auto gt = dir / (id + "_gt.xyz");
    if (!fs::exists(gt)) throw ParseError("missing ground truth " + gt.string());
    pairs.push_back({id, read_xyz(dir / (id + suffix)), read_xyz(gt)});
  }
  return pairs;
}

void write_dataset(const fs::path& root, const std::string& split,
                   const std::vector<ShapePair>& pairs) {
  const auto dir = root / split;
  fs::create_directories(dir);
  for (const auto& p : pairs) {
    write_xyz(dir / (p.id + "_partial.xyz"), p.partial);
    write_xyz(dir / (p.id + "_gt.xyz"), p.gt);
  }
}

std::vector<PointCloud> read_cloud_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = lower_extension(entry.path());
    if (entry.is_regular_file() && (ext == ".xyz" || ext == ".ply")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PointCloud> out;
  for (const auto& f : files) out.push_back(read_cloud(f));
  return out;
}

}  // namespace seedcomp::data

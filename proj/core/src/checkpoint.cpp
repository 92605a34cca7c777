// Copyright 2026 The pmrlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pmrlab/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pmrlab/errors.hpp"

namespace pmrlab {

namespace {

constexpr char kMagic[] = "pmrckpt";
constexpr int kVersion = 1;

void write_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoFailure("value formatting failed");
  out.append(buf, ptr);
}

double read_double(std::string_view& rest, const std::string& path) {
  size_t start = rest.find_first_not_of(' ');
  if (start == std::string_view::npos) {
    throw CorruptCheckpoint(path + ": short row");
  }
  rest.remove_prefix(start);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc()) throw CorruptCheckpoint(path + ": bad value");
  rest.remove_prefix(static_cast<size_t>(ptr - rest.data()));
  return v;
}

}  // namespace

void save_checkpoint(const ParamStore& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  out << kMagic << ' ' << kVersion << '\n';
  std::string line;
  for (const ParamEntry& e : params.entries()) {
    out << "param " << e.name << ' ' << e.value.rows() << ' '
        << e.value.cols() << '\n';
    for (int r = 0; r < e.value.rows(); ++r) {
      line.clear();
      const double* row = e.value.row(r);
      for (int c = 0; c < e.value.cols(); ++c) {
        if (c > 0) line.push_back(' ');
        write_double(line, row[c]);
      }
      line.push_back('\n');
      out << line;
    }
  }
  if (!out) throw IoFailure("write failed: " + path);
}

void load_checkpoint(ParamStore& params, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingCheckpoint("checkpoint not found: " + path);
  std::string line;
  if (!std::getline(in, line)) throw CorruptCheckpoint(path + ": empty file");
  {
    std::istringstream header(line);
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != kMagic || version != kVersion) {
      throw CorruptCheckpoint(path + ": not a version-1 checkpoint");
    }
  }
  for (ParamEntry& e : params.entries()) {
    if (!std::getline(in, line)) {
      throw CorruptCheckpoint(path + ": missing parameter " + e.name);
    }
    std::istringstream header(line);
    std::string tag, name;
    int rows = 0, cols = 0;
    header >> tag >> name >> rows >> cols;
    if (tag != "param" || header.fail()) {
      throw CorruptCheckpoint(path + ": bad parameter header");
    }
    if (name != e.name) {
      throw ShapeMismatch(path + ": expected parameter " + e.name +
                          ", found " + name);
    }
    if (rows != e.value.rows() || cols != e.value.cols()) {
      throw ShapeMismatch(path + ": shape mismatch for " + e.name);
    }
    for (int r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) {
        throw CorruptCheckpoint(path + ": truncated parameter " + e.name);
      }
      std::string_view rest(line);
      double* row = e.value.row(r);
      for (int c = 0; c < cols; ++c) row[c] = read_double(rest, path);
      if (rest.find_first_not_of(' ') != std::string_view::npos) {
        throw CorruptCheckpoint(path + ": trailing data in row");
      }
    }
  }
  if (std::getline(in, line) && !line.empty()) {
    throw CorruptCheckpoint(path + ": trailing data after parameters");
  }
}

PolicyConfig checkpoint_policy_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingCheckpoint("checkpoint not found: " + path);
  std::string line;
  if (!std::getline(in, line)) throw CorruptCheckpoint(path + ": empty file");
  PolicyConfig cfg{0, 0};
  while (std::getline(in, line)) {
    if (line.rfind("param ", 0) != 0) continue;
    std::istringstream header(line);
    std::string tag, name;
    int rows = 0, cols = 0;
    header >> tag >> name >> rows >> cols;
    if (header.fail()) throw CorruptCheckpoint(path + ": bad parameter header");
    if (name == "embed") cfg.embed = cols;
    if (name == "out_W") cfg.hidden = cols;
  }
  if (cfg.embed <= 0 || cfg.hidden <= 0) {
    throw CorruptCheckpoint(path + ": policy dimensions not present");
  }
  return cfg;
}

}  // namespace pmrlab

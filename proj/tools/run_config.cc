// tools/run_config.cc

// Copyright 2026  srak authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "run_config.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "srak/common/error.h"

namespace srak {
namespace cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ValidationError("config: bad number for " + key + ": '" + value + "'");
  }
  if (used != value.size())
    throw ValidationError("config: trailing junk after " + key + ": '" + value + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw ValidationError("config: bad integer for " + key + ": '" + value + "'");
  }
  if (used != value.size())
    throw ValidationError("config: trailing junk after " + key + ": '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  const long long v = parse_int(key, value);
  if (v < 0) throw ValidationError("config: " + key + " must be >= 0");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ValidationError("config: " + key + " expects 0/1/true/false, got '" + value + "'");
}

void apply_pair(RunConfig& cfg, const std::string& section, const std::string& key,
                const std::string& value) {
  if (section == "corpus") {
    if (key == "seed") cfg.corpus_seed = parse_u64(key, value);
    else if (key == "speakers") cfg.speakers = static_cast<int>(parse_int(key, value));
    else if (key == "utterances") cfg.utterances = static_cast<int>(parse_int(key, value));
    else if (key == "test_fraction") cfg.test_fraction = parse_double(key, value);
    else throw ValidationError("config: unknown key [corpus] " + key);
    return;
  }
  if (section == "train") {
    if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "learning_rate") cfg.learning_rate = parse_double(key, value);
    else if (key == "epochs") cfg.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "batch_size") cfg.batch_size = static_cast<int>(parse_int(key, value));
    else if (key == "frame_len") cfg.frame_len = parse_int(key, value);
    else if (key == "hop") cfg.hop = parse_int(key, value);
    else if (key == "frames_per_utterance")
      cfg.frames_per_utterance = static_cast<int>(parse_int(key, value));
    else throw ValidationError("config: unknown key [train] " + key);
    return;
  }
  if (section == "attack") {
    if (key == "lambda_phn") cfg.lambda_phn = parse_double(key, value);
    else if (key == "lambda_norm") cfg.lambda_norm = parse_double(key, value);
    else if (key == "margin") cfg.margin = parse_double(key, value);
    else if (key == "target") cfg.target = static_cast<int>(parse_int(key, value));
    else throw ValidationError("config: unknown key [attack] " + key);
    return;
  }
  if (section == "eval") {
    if (key == "target") cfg.eval_target = static_cast<int>(parse_int(key, value));
    else if (key == "spectrum") cfg.spectrum = parse_bool(key, value);
    else if (key == "bands") cfg.bands = static_cast<int>(parse_int(key, value));
    else throw ValidationError("config: unknown key [eval] " + key);
    return;
  }
  throw ValidationError("config: unknown section [" + section + "]");
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("config: bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("config: empty key at line " + std::to_string(lineno));
    if (section.empty())
      throw ValidationError("config: key before any section at line " + std::to_string(lineno));
    apply_pair(cfg, section, key, value);
  }
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_effective_config(const RunConfig& cfg, std::ostream& os) {
  os << "[corpus]\n";
  os << "seed = " << cfg.corpus_seed << "\n";
  os << "speakers = " << cfg.speakers << "\n";
  os << "utterances = " << cfg.utterances << "\n";
  os << "test_fraction = " << num(cfg.test_fraction) << "\n";
  os << "\n[train]\n";
  os << "seed = " << cfg.seed << "\n";
  os << "learning_rate = " << num(cfg.learning_rate) << "\n";
  os << "epochs = " << cfg.epochs << "\n";
  os << "batch_size = " << cfg.batch_size << "\n";
  os << "frame_len = " << cfg.frame_len << "\n";
  os << "hop = " << cfg.hop << "\n";
  os << "frames_per_utterance = " << cfg.frames_per_utterance << "\n";
  os << "\n[attack]\n";
  os << "lambda_phn = " << num(cfg.lambda_phn) << "\n";
  os << "lambda_norm = " << num(cfg.lambda_norm) << "\n";
  os << "margin = " << num(cfg.margin) << "\n";
  os << "target = " << cfg.target << "\n";
  os << "\n[eval]\n";
  os << "target = " << cfg.eval_target << "\n";
  os << "spectrum = " << (cfg.spectrum ? 1 : 0) << "\n";
  os << "bands = " << cfg.bands << "\n";
}

void echo_config(const RunConfig& cfg, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/config.txt";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  write_effective_config(cfg, out);
  if (!out) throw IoError("write failed: " + path);
}

std::string data_root() {
  const char* env = std::getenv("SRAK_DATA_ROOT");
  if (env != nullptr && env[0] != '\0') return env;
  return ".";
}

}  // namespace cli
}  // namespace srak

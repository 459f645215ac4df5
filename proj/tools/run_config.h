// tools/run_config.h

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

#ifndef SRAK_TOOLS_RUN_CONFIG_H_
#define SRAK_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <string>

namespace srak {
namespace cli {

// Merged view of config-file values and command-line overrides. Every field
// has a default; the command line wins over the file; the effective values
// are echoed into every output location.
struct RunConfig {
  // [corpus]
  std::uint64_t corpus_seed = 7;
  int speakers = 20;
  int utterances = 40;
  double test_fraction = 0.2;

  // [train]
  std::uint64_t seed = 7;
  double learning_rate = 3e-4;
  int epochs = 10;
  int batch_size = 64;
  std::int64_t frame_len = 3200;
  std::int64_t hop = 160;
  int frames_per_utterance = 6;

  // [attack]
  double lambda_phn = 1.0;
  double lambda_norm = 1000.0;
  double margin = 0.01;
  int target = -1;

  // [eval]
  int eval_target = -1;
  bool spectrum = false;
  int bands = 8;
};

// UTF-8 `key = value` lines with `#` comments under [corpus], [train],
// [attack], [eval]. Unknown sections or keys and malformed values are
// validation errors; an unreadable file is an I/O error.
void apply_config_file(RunConfig& cfg, const std::string& path);

void write_effective_config(const RunConfig& cfg, std::ostream& os);

// Writes the echo next to the outputs: <dir>/config.txt.
void echo_config(const RunConfig& cfg, const std::string& dir);

// $SRAK_DATA_ROOT, or "." when unset. Default corpus and run locations
// hang off this so short commands work out of the box.
std::string data_root();

}  // namespace cli
}  // namespace srak

#endif  // SRAK_TOOLS_RUN_CONFIG_H_

// tests/test_cli.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "srak/models/attacker.h"
#include "srak/trainer/checkpoint.h"

#ifndef SRAK_CLI_PATH
#error "SRAK_CLI_PATH must point at the srak binary"
#endif

using namespace srak;
namespace fs = std::filesystem;

namespace {

int run_raw(const std::string& cmd, std::string* out = nullptr) {
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(p != nullptr);
  std::string text;
  char buf[1024];
  while (std::fgets(buf, sizeof(buf), p) != nullptr) text += buf;
  const int status = pclose(p);
  if (out != nullptr) *out = text;
  if (!WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  return run_raw(std::string(SRAK_CLI_PATH) + " " + args, out);
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One corpus and one pair of classifier checkpoints, built once through the
// binary itself.
struct CliWorld {
  std::string dir = "srak_cli_tmp";
  std::string corpus = dir + "/corpus";
  std::string speaker = dir + "/speaker.ckpt";
  std::string phoneme = dir + "/phoneme.ckpt";
};

const CliWorld& world() {
  static const CliWorld w = [] {
    CliWorld v;
    fs::remove_all(v.dir);
    fs::create_directories(v.dir);
    REQUIRE(run_cli("corpus --seed 5 --speakers 3 --utterances 6 --out " + v.corpus) == 0);
    REQUIRE(run_cli("pretrain --model speaker --corpus " + v.corpus + " --epochs 2 --batch 8 --out " +
                    v.speaker) == 0);
    REQUIRE(run_cli("pretrain --model phoneme --corpus " + v.corpus + " --epochs 1 --batch 8 --out " +
                    v.phoneme) == 0);
    return v;
  }();
  return w;
}

std::string first_wav(const std::string& corpus_dir) {
  for (const auto& e : fs::recursive_directory_iterator(corpus_dir))
    if (e.path().extension() == ".wav") return e.path().string();
  REQUIRE(false);
  return "";
}

}  // namespace

TEST_CASE("corpus command builds once and refuses to overwrite") {
  const CliWorld& w = world();
  CHECK(fs::exists(w.corpus + "/manifest.txt"));
  CHECK(fs::exists(w.corpus + "/config.txt"));

  std::string out;
  CHECK(run_cli("corpus --seed 5 --speakers 3 --utterances 6 --out " + w.corpus, &out) == 1);
  CHECK(out.find("--force") != std::string::npos);
  CHECK(run_cli("corpus --seed 5 --speakers 3 --utterances 6 --force --out " + w.corpus) == 0);

  CHECK(run_cli("corpus --speakers 1 --out " + w.dir + "/one") == 1);
}

TEST_CASE("pretrain writes the requested kind and rejects unknown models") {
  const CliWorld& w = world();
  const trainer::Checkpoint spk = trainer::load_checkpoint(w.speaker);
  CHECK(spk.kind == "speaker");
  const trainer::Checkpoint phn = trainer::load_checkpoint(w.phoneme);
  CHECK(phn.kind == "phoneme");
  CHECK(fs::exists(w.speaker + ".metrics.txt"));
  CHECK(fs::exists(w.speaker + ".config.txt"));

  CHECK(run_cli("pretrain --model foo --corpus " + w.corpus) == 1);
  CHECK(run_cli("pretrain --model speaker --corpus " + w.dir + "/absent --out " + w.dir +
                "/x.ckpt") == 2);
}

TEST_CASE("attack-train merges config file under command line flags") {
  const CliWorld& w = world();
  const std::string cfg_path = w.dir + "/attack.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "# overrides\n[attack]\nmargin = 0.02\nlambda_norm = 5\n\n[train]\nepochs = 1\n";
  }
  const std::string out = w.dir + "/a_cfg.ckpt";
  REQUIRE(run_cli("attack-train --config " + cfg_path + " --lambda-norm 250 --batch 8 --corpus " +
                  w.corpus + " --speaker " + w.speaker + " --phoneme " + w.phoneme + " --out " +
                  out) == 0);
  const std::string echo = read_bytes(out + ".config.txt");
  CHECK(echo.find("lambda_norm = 250") != std::string::npos);  // flag beats file
  CHECK(echo.find("margin = 0.02") != std::string::npos);      // file beats default
  CHECK(echo.find("epochs = 1") != std::string::npos);
  CHECK(fs::exists(out + ".metrics.txt"));

  CHECK(run_cli("attack-train --lambda-norm -1 --corpus " + w.corpus + " --speaker " + w.speaker +
                " --phoneme " + w.phoneme + " --out " + w.dir + "/neg.ckpt") == 1);
  CHECK(run_cli("attack-train --config " + w.dir + "/missing.cfg --out " + w.dir + "/m.ckpt") ==
        2);
}

TEST_CASE("evaluate writes reports plus requested extras") {
  const CliWorld& w = world();
  const std::string atk = w.dir + "/a_eval.ckpt";
  REQUIRE(run_cli("attack-train --epochs 1 --batch 8 --corpus " + w.corpus + " --speaker " +
                  w.speaker + " --phoneme " + w.phoneme + " --out " + atk) == 0);

  const std::string out_dir = w.dir + "/eval";
  std::string text;
  REQUIRE(run_cli("evaluate --corpus " + w.corpus + " --attacker " + atk + " --speaker " +
                  w.speaker + " --no-rtf --out " + out_dir, &text) == 0);
  CHECK(text.find("ser ") != std::string::npos);
  CHECK(text.find("ptr ") == std::string::npos);
  CHECK(fs::exists(out_dir + "/report.txt"));
  CHECK(fs::exists(out_dir + "/report.dat"));
  CHECK(fs::exists(out_dir + "/config.txt"));
  CHECK_FALSE(fs::exists(out_dir + "/spectrum.dat"));

  CHECK(run_cli("evaluate --corpus " + w.corpus + " --attacker " + atk + " --speaker " +
                w.speaker + " --out " + out_dir) == 1);

  REQUIRE(run_cli("evaluate --corpus " + w.corpus + " --attacker " + atk + " --speaker " +
                  w.speaker + " --no-rtf --force --target 1 --spectrum --out " + out_dir,
                  &text) == 0);
  CHECK(text.find("ptr ") != std::string::npos);
  CHECK(fs::exists(out_dir + "/spectrum.dat"));
  const std::string machine = read_bytes(out_dir + "/report.dat");
  CHECK(machine.find("timing rtf=0\n") != std::string::npos);
  CHECK(machine.find("target=1") != std::string::npos);
}

TEST_CASE("infer keeps identity bytes and reports infinite snr") {
  const CliWorld& w = world();
  const std::string ident = w.dir + "/identity.ckpt";
  {
    models::AttackerNet net = models::attacker_init(0);
    trainer::save_checkpoint(trainer::attacker_to_checkpoint(net), ident);
  }
  const std::string wav = first_wav(w.corpus);
  const std::string out = w.dir + "/adv.wav";
  std::string text;
  REQUIRE(run_cli("infer --attacker " + ident + " --in " + wav + " --out " + out, &text) == 0);
  CHECK(text.find("snr_db inf") != std::string::npos);
  CHECK(read_bytes(out) == read_bytes(wav));

  CHECK(run_cli("infer --attacker " + ident + " --in " + wav + " --out " + out) == 1);
  CHECK(run_cli("infer --attacker " + ident + " --in " + w.dir + "/nope.wav --out " + w.dir +
                "/n.wav") == 2);
  CHECK(run_cli("infer --attacker " + ident) == 1);  // --in is required
}

TEST_CASE("seed-fixed commands are byte reproducible") {
  const CliWorld& w = world();
  const std::string a1 = w.dir + "/rep1.ckpt";
  const std::string a2 = w.dir + "/rep2.ckpt";
  const std::string common = " --epochs 1 --batch 8 --seed 40 --corpus " + w.corpus +
                             " --speaker " + w.speaker + " --phoneme " + w.phoneme + " --out ";
  REQUIRE(run_cli("attack-train" + common + a1) == 0);
  REQUIRE(run_cli("attack-train" + common + a2) == 0);
  CHECK(read_bytes(a1) == read_bytes(a2));
  CHECK(read_bytes(a1 + ".metrics.txt") == read_bytes(a2 + ".metrics.txt"));

  const std::string e1 = w.dir + "/rep_eval1";
  const std::string e2 = w.dir + "/rep_eval2";
  const std::string eval_common = "evaluate --no-rtf --corpus " + w.corpus + " --attacker " + a1 +
                                  " --speaker " + w.speaker + " --out ";
  REQUIRE(run_cli(eval_common + e1) == 0);
  REQUIRE(run_cli(eval_common + e2) == 0);
  CHECK(read_bytes(e1 + "/report.dat") == read_bytes(e2 + "/report.dat"));
}

TEST_CASE("data root env var supplies the default locations") {
  const CliWorld& w = world();
  const std::string root = w.dir + "/rootenv";
  fs::remove_all(root);
  REQUIRE(run_raw("SRAK_DATA_ROOT=" + root + " " + SRAK_CLI_PATH +
                  " corpus --speakers 2 --utterances 3") == 0);
  CHECK(fs::exists(root + "/corpus/manifest.txt"));
}

TEST_CASE("help shows paper defaults and bare invocation is a usage error") {
  std::string text;
  CHECK(run_cli("attack-train --help", &text) == 0);
  CHECK(text.find("--lambda-norm") != std::string::npos);
  CHECK(text.find("[1000]") != std::string::npos);
  CHECK(text.find("[0.01]") != std::string::npos);
  CHECK(text.find("[0.0003]") != std::string::npos);
  CHECK(run_cli("evaluate --help", &text) == 0);
  CHECK(text.find("--spectrum") != std::string::npos);
  CHECK(run_cli("", &text) == 1);
  CHECK(run_cli("frobnicate", &text) == 1);
}

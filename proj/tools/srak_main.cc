// tools/srak_main.cc

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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "run_config.h"
#include "srak/audio/wav.h"
#include "srak/common/error.h"
#include "srak/corpus/builder.h"
#include "srak/eval/metrics.h"
#include "srak/eval/report.h"
#include "srak/models/attacker.h"
#include "srak/models/speaker.h"
#include "srak/trainer/checkpoint.h"
#include "srak/trainer/dataset.h"
#include "srak/trainer/trainer.h"

namespace srak {
namespace cli {
namespace {

namespace fs = std::filesystem;

void guard_overwrite(const std::string& path, bool force) {
  if (!force && fs::exists(path))
    throw ValidationError(path + " exists; pass --force to overwrite");
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// Sidecar echo for file outputs; directory outputs use echo_config directly.
void echo_beside(const RunConfig& cfg, const std::string& out_file) {
  const std::string path = out_file + ".config.txt";
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path);
  write_effective_config(cfg, os);
}

template <class T>
void take(CLI::Option* opt, T& dst, const T& src) {
  if (opt != nullptr && opt->count() > 0) dst = src;
}

trainer::TrainConfig to_train_config(const RunConfig& cfg) {
  trainer::TrainConfig t;
  t.seed = cfg.seed;
  t.learning_rate = static_cast<float>(cfg.learning_rate);
  t.epochs = cfg.epochs;
  t.batch_size = cfg.batch_size;
  t.frame_len = cfg.frame_len;
  t.hop = cfg.hop;
  t.frames_per_utterance = cfg.frames_per_utterance;
  t.attack.lambda_phn = static_cast<float>(cfg.lambda_phn);
  t.attack.lambda_norm = static_cast<float>(cfg.lambda_norm);
  t.attack.margin_m = static_cast<float>(cfg.margin);
  t.attack.target = cfg.target;
  return t;
}

trainer::UtteranceStore load_corpus_dir(const std::string& dir) {
  const corpus::CorpusManifest manifest = corpus::load_manifest(dir + "/manifest.txt");
  return trainer::load_store(manifest, dir);
}

// ---- corpus ----

struct CorpusArgs {
  CLI::App* cmd = nullptr;
  std::string config_path;
  std::string out;
  bool force = false;
  std::uint64_t seed = 0;
  int speakers = 0;
  int utterances = 0;
  double test_fraction = 0.0;
  CLI::Option *seed_o = nullptr, *speakers_o = nullptr, *utterances_o = nullptr,
              *fraction_o = nullptr;
};

void setup_corpus(CLI::App& app, CorpusArgs& a, const RunConfig& d) {
  a.cmd = app.add_subcommand("corpus", "Synthesize a deterministic speaker corpus");
  a.cmd->add_option("--config", a.config_path, "Config file (key = value, sectioned)");
  a.out = data_root() + "/corpus";
  a.cmd->add_option("--out", a.out, "Corpus directory")->capture_default_str();
  a.cmd->add_flag("--force", a.force, "Overwrite an existing corpus");
  a.seed = d.corpus_seed;
  a.seed_o = a.cmd->add_option("--seed", a.seed, "Corpus seed")->capture_default_str();
  a.speakers = d.speakers;
  a.speakers_o =
      a.cmd->add_option("--speakers", a.speakers, "Number of speakers")->capture_default_str();
  a.utterances = d.utterances;
  a.utterances_o = a.cmd->add_option("--utterances", a.utterances, "Utterances per speaker")
                       ->capture_default_str();
  a.test_fraction = d.test_fraction;
  a.fraction_o = a.cmd->add_option("--test-fraction", a.test_fraction,
                                   "Held-out fraction per speaker")
                     ->capture_default_str();
}

int run_corpus(const CorpusArgs& a) {
  RunConfig cfg;
  if (!a.config_path.empty()) apply_config_file(cfg, a.config_path);
  take(a.seed_o, cfg.corpus_seed, a.seed);
  take(a.speakers_o, cfg.speakers, a.speakers);
  take(a.utterances_o, cfg.utterances, a.utterances);
  take(a.fraction_o, cfg.test_fraction, a.test_fraction);

  guard_overwrite(a.out + "/manifest.txt", a.force);
  corpus::CorpusConfig cc;
  cc.seed = cfg.corpus_seed;
  cc.num_speakers = cfg.speakers;
  cc.utterances_per_speaker = cfg.utterances;
  cc.test_fraction = cfg.test_fraction;
  cc.out_dir = a.out;
  const corpus::CorpusManifest manifest = corpus::build_corpus(cc);
  echo_config(cfg, a.out);
  std::printf("corpus %s entries %zu\n", a.out.c_str(), manifest.entries.size());
  return 0;
}

// ---- pretrain ----

struct PretrainArgs {
  CLI::App* cmd = nullptr;
  std::string config_path;
  std::string model;
  std::string corpus_dir;
  std::string out;
  bool force = false;
  std::uint64_t seed = 0;
  double lr = 0.0;
  int epochs = 0;
  int batch = 0;
  int fpu = 0;
  CLI::Option *out_o = nullptr, *seed_o = nullptr, *lr_o = nullptr, *epochs_o = nullptr,
              *batch_o = nullptr, *fpu_o = nullptr;
};

void setup_pretrain(CLI::App& app, PretrainArgs& a, const RunConfig& d) {
  a.cmd = app.add_subcommand("pretrain", "Train a speaker or phoneme classifier from scratch");
  a.cmd->add_option("--config", a.config_path, "Config file (key = value, sectioned)");
  a.cmd->add_option("--model", a.model, "Which classifier to train")
      ->required()
      ->check(CLI::IsMember({"speaker", "phoneme"}));
  a.corpus_dir = data_root() + "/corpus";
  a.cmd->add_option("--corpus", a.corpus_dir, "Corpus directory")->capture_default_str();
  a.out_o = a.cmd->add_option("--out", a.out, "Checkpoint path (default <data root>/runs/<model>.ckpt)");
  a.cmd->add_flag("--force", a.force, "Overwrite an existing checkpoint");
  a.seed = d.seed;
  a.seed_o = a.cmd->add_option("--seed", a.seed, "Training seed")->capture_default_str();
  a.lr = d.learning_rate;
  a.lr_o = a.cmd->add_option("--lr", a.lr, "Adam learning rate")->capture_default_str();
  a.epochs = d.epochs;
  a.epochs_o = a.cmd->add_option("--epochs", a.epochs, "Training epochs")->capture_default_str();
  a.batch = d.batch_size;
  a.batch_o = a.cmd->add_option("--batch", a.batch, "Frames per batch")->capture_default_str();
  a.fpu = d.frames_per_utterance;
  a.fpu_o = a.cmd->add_option("--frames-per-utterance", a.fpu,
                              "Frames sampled per utterance per epoch")
                ->capture_default_str();
}

int run_pretrain(const PretrainArgs& a) {
  RunConfig cfg;
  if (!a.config_path.empty()) apply_config_file(cfg, a.config_path);
  take(a.seed_o, cfg.seed, a.seed);
  take(a.lr_o, cfg.learning_rate, a.lr);
  take(a.epochs_o, cfg.epochs, a.epochs);
  take(a.batch_o, cfg.batch_size, a.batch);
  take(a.fpu_o, cfg.frames_per_utterance, a.fpu);

  std::string out = a.out;
  if (a.out_o->count() == 0) out = data_root() + "/runs/" + a.model + ".ckpt";
  guard_overwrite(out, a.force);
  ensure_parent_dir(out);

  const corpus::CorpusManifest manifest = corpus::load_manifest(a.corpus_dir + "/manifest.txt");
  const trainer::UtteranceStore store = trainer::load_store(manifest, a.corpus_dir);
  const trainer::TrainConfig tc = to_train_config(cfg);

  std::ofstream metrics_os;
  const std::string metrics_path = out + ".metrics.txt";
  if (a.model == "speaker") {
    trainer::PretrainMetrics m;
    const trainer::Checkpoint ckpt =
        trainer::pretrain_speaker(store, manifest.num_speakers, tc, &m);
    trainer::save_checkpoint(ckpt, out);
    metrics_os.open(metrics_path, std::ios::trunc);
    metrics_os << "model speaker\n";
    for (std::size_t i = 0; i < m.epoch_losses.size(); ++i)
      metrics_os << "epoch " << i << " loss " << m.epoch_losses[i] << "\n";
    metrics_os << "train_frame_accuracy " << m.train_frame_accuracy << "\n";
    metrics_os << "test_frame_accuracy " << m.test_frame_accuracy << "\n";
    metrics_os << "test_sentence_accuracy " << m.test_sentence_accuracy << "\n";
    std::printf("checkpoint %s\ntest_sentence_accuracy %.4f\n", out.c_str(),
                m.test_sentence_accuracy);
  } else {
    trainer::PhonemeMetrics m;
    const trainer::Checkpoint ckpt = trainer::pretrain_phoneme(store, tc, &m);
    trainer::save_checkpoint(ckpt, out);
    metrics_os.open(metrics_path, std::ios::trunc);
    metrics_os << "model phoneme\n";
    for (std::size_t i = 0; i < m.epoch_losses.size(); ++i)
      metrics_os << "epoch " << i << " loss " << m.epoch_losses[i] << "\n";
    metrics_os << "test_frame_error_rate " << m.test_frame_error_rate << "\n";
    std::printf("checkpoint %s\ntest_frame_error_rate %.4f\n", out.c_str(),
                m.test_frame_error_rate);
  }
  if (!metrics_os) throw IoError("cannot write " + metrics_path);
  echo_beside(cfg, out);
  return 0;
}

// ---- attack-train ----

struct AttackArgs {
  CLI::App* cmd = nullptr;
  std::string config_path;
  std::string corpus_dir;
  std::string speaker_ckpt;
  std::string phoneme_ckpt;
  std::string out;
  bool force = false;
  std::uint64_t seed = 0;
  double lr = 0.0, lambda_phn = 0.0, lambda_norm = 0.0, margin = 0.0;
  int epochs = 0, batch = 0, fpu = 0, target = -1;
  CLI::Option *seed_o = nullptr, *lr_o = nullptr, *epochs_o = nullptr, *batch_o = nullptr,
              *fpu_o = nullptr, *lphn_o = nullptr, *lnorm_o = nullptr, *margin_o = nullptr,
              *target_o = nullptr;
};

void setup_attack(CLI::App& app, AttackArgs& a, const RunConfig& d) {
  a.cmd = app.add_subcommand("attack-train",
                             "Train the residual attacker against frozen classifiers");
  a.cmd->add_option("--config", a.config_path, "Config file (key = value, sectioned)");
  a.corpus_dir = data_root() + "/corpus";
  a.cmd->add_option("--corpus", a.corpus_dir, "Corpus directory")->capture_default_str();
  a.speaker_ckpt = data_root() + "/runs/speaker.ckpt";
  a.cmd->add_option("--speaker", a.speaker_ckpt, "Frozen speaker checkpoint")
      ->capture_default_str();
  a.phoneme_ckpt = data_root() + "/runs/phoneme.ckpt";
  a.cmd->add_option("--phoneme", a.phoneme_ckpt, "Frozen phoneme checkpoint")
      ->capture_default_str();
  a.out = data_root() + "/runs/attacker.ckpt";
  a.cmd->add_option("--out", a.out, "Attacker checkpoint path")->capture_default_str();
  a.cmd->add_flag("--force", a.force, "Overwrite an existing checkpoint");
  a.seed = d.seed;
  a.seed_o = a.cmd->add_option("--seed", a.seed, "Training seed")->capture_default_str();
  a.lr = d.learning_rate;
  a.lr_o = a.cmd->add_option("--lr", a.lr, "Adam learning rate")->capture_default_str();
  a.epochs = d.epochs;
  a.epochs_o = a.cmd->add_option("--epochs", a.epochs, "Training epochs")->capture_default_str();
  a.batch = d.batch_size;
  a.batch_o = a.cmd->add_option("--batch", a.batch, "Frames per batch")->capture_default_str();
  a.fpu = d.frames_per_utterance;
  a.fpu_o = a.cmd->add_option("--frames-per-utterance", a.fpu,
                              "Frames sampled per utterance per epoch")
                ->capture_default_str();
  a.lambda_phn = d.lambda_phn;
  a.lphn_o = a.cmd->add_option("--lambda-phn", a.lambda_phn, "Phoneme loss weight")
                 ->capture_default_str();
  a.lambda_norm = d.lambda_norm;
  a.lnorm_o = a.cmd->add_option("--lambda-norm", a.lambda_norm, "Perturbation norm weight")
                  ->capture_default_str();
  a.margin = d.margin;
  a.margin_o =
      a.cmd->add_option("--margin", a.margin, "Hinge margin on the norm loss")
          ->capture_default_str();
  a.target = d.target;
  a.target_o = a.cmd->add_option("--target", a.target,
                                 "Target speaker id (-1 for non-targeted)")
                   ->capture_default_str();
}

int run_attack(const AttackArgs& a) {
  RunConfig cfg;
  if (!a.config_path.empty()) apply_config_file(cfg, a.config_path);
  take(a.seed_o, cfg.seed, a.seed);
  take(a.lr_o, cfg.learning_rate, a.lr);
  take(a.epochs_o, cfg.epochs, a.epochs);
  take(a.batch_o, cfg.batch_size, a.batch);
  take(a.fpu_o, cfg.frames_per_utterance, a.fpu);
  take(a.lphn_o, cfg.lambda_phn, a.lambda_phn);
  take(a.lnorm_o, cfg.lambda_norm, a.lambda_norm);
  take(a.margin_o, cfg.margin, a.margin);
  take(a.target_o, cfg.target, a.target);

  guard_overwrite(a.out, a.force);
  ensure_parent_dir(a.out);

  const corpus::CorpusManifest manifest = corpus::load_manifest(a.corpus_dir + "/manifest.txt");
  const trainer::UtteranceStore store = trainer::load_store(manifest, a.corpus_dir);
  const trainer::Checkpoint spk = trainer::load_checkpoint(a.speaker_ckpt, "speaker");
  const trainer::Checkpoint phn = trainer::load_checkpoint(a.phoneme_ckpt, "phoneme");

  trainer::AttackMetrics m;
  const trainer::Checkpoint ckpt = trainer::train_attacker(store, spk, phn, to_train_config(cfg), &m);
  trainer::save_checkpoint(ckpt, a.out);

  const std::string metrics_path = a.out + ".metrics.txt";
  std::ofstream metrics_os(metrics_path, std::ios::trunc);
  metrics_os << "model attacker\n";
  for (std::size_t i = 0; i < m.epoch_mean_total.size(); ++i)
    metrics_os << "epoch " << i << " mean_total " << m.epoch_mean_total[i] << "\n";
  if (!m.batches.empty()) {
    const losses::LossBreakdown& last = m.batches.back();
    metrics_os << "last_batch l_spk " << last.l_spk << " l_phn " << last.l_phn << " l_norm "
               << last.l_norm << " l_total " << last.l_total << "\n";
  }
  metrics_os << "max_identity_rel_dev " << m.max_identity_rel_dev << "\n";
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(m.frozen_hash_before));
  metrics_os << "frozen_hash_before " << hex << "\n";
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(m.frozen_hash_after));
  metrics_os << "frozen_hash_after " << hex << "\n";
  if (!metrics_os) throw IoError("cannot write " + metrics_path);
  echo_beside(cfg, a.out);
  std::printf("checkpoint %s\nfinal_epoch_mean_total %.6f\n", a.out.c_str(),
              m.epoch_mean_total.empty() ? 0.0 : m.epoch_mean_total.back());
  return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
  CLI::App* cmd = nullptr;
  std::string config_path;
  std::string corpus_dir;
  std::string attacker_ckpt;
  std::string speaker_ckpt;
  std::string out;
  bool force = false;
  bool spectrum = false;
  bool no_rtf = false;
  int target = -1;
  int bands = 0;
  CLI::Option *target_o = nullptr, *spectrum_o = nullptr, *bands_o = nullptr;
};

void setup_evaluate(CLI::App& app, EvaluateArgs& a, const RunConfig& d) {
  a.cmd = app.add_subcommand("evaluate", "Measure an attacker on the corpus test split");
  a.cmd->add_option("--config", a.config_path, "Config file (key = value, sectioned)");
  a.corpus_dir = data_root() + "/corpus";
  a.cmd->add_option("--corpus", a.corpus_dir, "Corpus directory")->capture_default_str();
  a.attacker_ckpt = data_root() + "/runs/attacker.ckpt";
  a.cmd->add_option("--attacker", a.attacker_ckpt, "Attacker checkpoint")->capture_default_str();
  a.speaker_ckpt = data_root() + "/runs/speaker.ckpt";
  a.cmd->add_option("--speaker", a.speaker_ckpt, "Speaker checkpoint")->capture_default_str();
  a.out = data_root() + "/runs/eval";
  a.cmd->add_option("--out", a.out, "Report directory")->capture_default_str();
  a.cmd->add_flag("--force", a.force, "Overwrite existing reports");
  a.cmd->add_flag("--no-rtf", a.no_rtf, "Skip the wall-clock timing pass");
  a.target = d.eval_target;
  a.target_o = a.cmd->add_option("--target", a.target,
                                 "Report PTR against this speaker id")
                   ->capture_default_str();
  a.spectrum_o = a.cmd->add_flag("--spectrum", a.spectrum,
                                 "Also write per-band perturbation energy");
  a.bands = d.bands;
  a.bands_o = a.cmd->add_option("--bands", a.bands, "Spectrum band count")->capture_default_str();
}

int run_evaluate(const EvaluateArgs& a) {
  RunConfig cfg;
  if (!a.config_path.empty()) apply_config_file(cfg, a.config_path);
  take(a.target_o, cfg.eval_target, a.target);
  if (a.spectrum_o->count() > 0) cfg.spectrum = true;
  take(a.bands_o, cfg.bands, a.bands);

  guard_overwrite(a.out + "/report.txt", a.force);

  const corpus::CorpusManifest manifest = corpus::load_manifest(a.corpus_dir + "/manifest.txt");
  const trainer::UtteranceStore store = trainer::load_store(manifest, a.corpus_dir);
  models::AttackerNet attacker =
      trainer::attacker_from_checkpoint(trainer::load_checkpoint(a.attacker_ckpt, "attacker"));
  models::SpeakerNet speaker =
      trainer::speaker_from_checkpoint(trainer::load_checkpoint(a.speaker_ckpt, "speaker"));

  eval::EvalOptions options;
  options.target = cfg.eval_target;
  options.with_rtf = !a.no_rtf;
  const eval::MetricsReport report = eval::evaluate_attack(attacker, speaker, store.test, options);

  fs::create_directories(a.out);
  {
    std::ofstream os(a.out + "/report.txt", std::ios::trunc);
    eval::write_report_text(report, os);
    if (!os) throw IoError("cannot write " + a.out + "/report.txt");
  }
  {
    std::ofstream os(a.out + "/report.dat", std::ios::trunc);
    eval::write_report_machine(report, os);
    if (!os) throw IoError("cannot write " + a.out + "/report.dat");
  }
  if (cfg.spectrum) {
    const eval::BandEnergy bands = eval::perturbation_spectrum(attacker, store.test, cfg.bands);
    std::ofstream os(a.out + "/spectrum.dat", std::ios::trunc);
    eval::write_band_energy(bands, os);
    if (!os) throw IoError("cannot write " + a.out + "/spectrum.dat");
  }
  echo_config(cfg, a.out);
  eval::write_report_text(report, std::cout);
  return 0;
}

// ---- infer ----

struct InferArgs {
  CLI::App* cmd = nullptr;
  std::string attacker_ckpt;
  std::string in_path;
  std::string out_path;
  bool force = false;
  CLI::Option* out_o = nullptr;
};

void setup_infer(CLI::App& app, InferArgs& a) {
  a.cmd = app.add_subcommand("infer", "Perturb one WAV file of any length");
  a.attacker_ckpt = data_root() + "/runs/attacker.ckpt";
  a.cmd->add_option("--attacker", a.attacker_ckpt, "Attacker checkpoint")->capture_default_str();
  a.cmd->add_option("--in", a.in_path, "Input WAV (16 kHz mono PCM16)")->required();
  a.out_o = a.cmd->add_option("--out", a.out_path, "Output WAV (default <in>.adv.wav)");
  a.cmd->add_flag("--force", a.force, "Overwrite an existing output file");
}

int run_infer(const InferArgs& a) {
  std::string out = a.out_path;
  if (a.out_o->count() == 0) out = a.in_path + ".adv.wav";
  guard_overwrite(out, a.force);

  models::AttackerNet attacker =
      trainer::attacker_from_checkpoint(trainer::load_checkpoint(a.attacker_ckpt, "attacker"));
  const audio::Waveform w = audio::load_wav(a.in_path, 16000);
  const audio::Waveform adv = eval::attack_waveform(attacker, w);
  ensure_parent_dir(out);
  audio::save_wav(adv, out);

  const eval::Snr s = eval::snr(w.samples, adv.samples);
  if (s.is_infinite)
    std::printf("%s snr_db inf\n", out.c_str());
  else
    std::printf("%s snr_db %.2f\n", out.c_str(), s.db);
  return 0;
}

}  // namespace
}  // namespace cli
}  // namespace srak

int main(int argc, char** argv) {
  using namespace srak;
  using namespace srak::cli;

  CLI::App app{
      "srak: trains a residual perturbation network against a frozen speaker classifier "
      "and measures the attack (data root from $SRAK_DATA_ROOT, default \".\")"};
  app.require_subcommand(1);

  const RunConfig defaults;
  CorpusArgs corpus_args;
  PretrainArgs pretrain_args;
  AttackArgs attack_args;
  EvaluateArgs evaluate_args;
  InferArgs infer_args;
  setup_corpus(app, corpus_args, defaults);
  setup_pretrain(app, pretrain_args, defaults);
  setup_attack(app, attack_args, defaults);
  setup_evaluate(app, evaluate_args, defaults);
  setup_infer(app, infer_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (corpus_args.cmd->parsed()) return run_corpus(corpus_args);
    if (pretrain_args.cmd->parsed()) return run_pretrain(pretrain_args);
    if (attack_args.cmd->parsed()) return run_attack(attack_args);
    if (evaluate_args.cmd->parsed()) return run_evaluate(evaluate_args);
    if (infer_args.cmd->parsed()) return run_infer(infer_args);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  }
  return 0;
}

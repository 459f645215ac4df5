// core/src/trainer/trainer.cc

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

#include "srak/trainer/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "srak/audio/normalize.h"
#include "srak/common/error.h"
#include "srak/common/rng.h"
#include "srak/grad/adam.h"
#include "srak/grad/ops.h"
#include "srak/models/init.h"
#include "srak/models/logits.h"

namespace srak {
namespace trainer {

namespace {

using grad::Tensor;

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_g17(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt_g17(v[i]);
  }
  return s;
}

std::string hex_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Tensor cross_entropy(const Tensor& logits, const std::vector<std::int64_t>& labels) {
  Tensor lsm = grad::log_softmax(logits);
  Tensor picked = grad::pick_rows(lsm, labels);
  return grad::mul_scalar(grad::reduce_mean(picked), -1.0f);
}

void common_metadata(Checkpoint& ckpt, const TrainConfig& cfg) {
  ckpt.metadata["seed"] = std::to_string(cfg.seed);
  ckpt.metadata["learning_rate"] = fmt_g17(cfg.learning_rate);
  ckpt.metadata["epochs"] = std::to_string(cfg.epochs);
  ckpt.metadata["batch_size"] = std::to_string(cfg.batch_size);
  ckpt.metadata["frame_len"] = std::to_string(cfg.frame_len);
  ckpt.metadata["hop"] = std::to_string(cfg.hop);
  ckpt.metadata["frames_per_utterance"] = std::to_string(cfg.frames_per_utterance);
}

Rng epoch_rng(const TrainConfig& cfg, int epoch) {
  return Rng(mix_seed(mix_seed(cfg.seed, 0x1EA4ULL), static_cast<std::uint64_t>(epoch)));
}

// Per-frame peak magnitudes; zero peaks pass through as scale 1.
void frame_scales(const Tensor& frames, std::vector<float>* scale, std::vector<float>* inv) {
  const std::int64_t b = frames.dim(0), n = frames.dim(1);
  scale->assign(static_cast<std::size_t>(b), 1.0f);
  inv->assign(static_cast<std::size_t>(b), 1.0f);
  const auto& data = frames.data_vector();
  for (std::int64_t i = 0; i < b; ++i) {
    float p = audio::peak_scale(data.data() + i * n, n);
    if (p > 0.0f) {
      (*scale)[static_cast<std::size_t>(i)] = p;
      (*inv)[static_cast<std::size_t>(i)] = 1.0f / p;
    }
  }
}

}  // namespace

void validate_train_config(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0f)) throw ValidationError("learning_rate must be positive");
  if (cfg.epochs <= 0) throw ValidationError("epochs must be positive");
  if (cfg.batch_size <= 0) throw ValidationError("batch_size must be positive");
  if (cfg.frame_len != models::kFrameLen)
    throw ValidationError("frame_len must match the classifier frame length");
  if (cfg.hop <= 0) throw ValidationError("hop must be positive");
  if (cfg.frames_per_utterance <= 0)
    throw ValidationError("frames_per_utterance must be positive");
}

Checkpoint pretrain_speaker(const UtteranceStore& store, int num_speakers,
                            const TrainConfig& cfg, PretrainMetrics* metrics) {
  validate_train_config(cfg);
  models::SpeakerNet net = models::speaker_init(cfg.seed, num_speakers);
  grad::Adam adam(models::speaker_parameters(net), cfg.learning_rate);

  PretrainMetrics local;
  PretrainMetrics& m = metrics ? *metrics : local;
  m = PretrainMetrics{};

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng = epoch_rng(cfg, epoch);
    const auto refs =
        sample_epoch_frames(store.train, cfg.frame_len, cfg.hop, cfg.frames_per_utterance, rng);
    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t at = 0; at + static_cast<std::size_t>(cfg.batch_size) <= refs.size();
         at += static_cast<std::size_t>(cfg.batch_size)) {
      Tensor frames = gather_frames(store.train, refs.data() + at, cfg.batch_size, cfg.frame_len);
      std::vector<std::int64_t> labels(static_cast<std::size_t>(cfg.batch_size));
      for (int i = 0; i < cfg.batch_size; ++i)
        labels[static_cast<std::size_t>(i)] =
            store.train[static_cast<std::size_t>(refs[at + static_cast<std::size_t>(i)].utterance)]
                .speaker_id;
      Tensor logits = models::speaker_forward(net, frames, /*train=*/true);
      Tensor loss = cross_entropy(logits, labels);
      const double value = loss.item();
      if (!std::isfinite(value)) throw NumericError("speaker pretraining loss is not finite");
      adam.zero_grad();
      loss.backward();
      adam.step();
      loss_sum += value;
      ++batches;
    }
    if (batches == 0) throw ValidationError("train split yields no full batch");
    m.epoch_losses.push_back(loss_sum / batches);
  }

  m.train_frame_accuracy = speaker_frame_accuracy(net, store.train);
  m.test_frame_accuracy = speaker_frame_accuracy(net, store.test);
  m.test_sentence_accuracy = speaker_sentence_accuracy(net, store.test);

  Checkpoint ckpt = speaker_to_checkpoint(net);
  common_metadata(ckpt, cfg);
  ckpt.metadata["epoch_losses"] = join_g17(m.epoch_losses);
  ckpt.metadata["train_frame_accuracy"] = fmt_g17(m.train_frame_accuracy);
  ckpt.metadata["test_frame_accuracy"] = fmt_g17(m.test_frame_accuracy);
  ckpt.metadata["test_sentence_accuracy"] = fmt_g17(m.test_sentence_accuracy);
  return ckpt;
}

Checkpoint pretrain_phoneme(const UtteranceStore& store, const TrainConfig& cfg,
                            PhonemeMetrics* metrics) {
  validate_train_config(cfg);
  models::PhonemeNet net = models::phoneme_init(cfg.seed, corpus::kNumPhonemes);
  grad::Adam adam(models::phoneme_parameters(net), cfg.learning_rate);

  PhonemeMetrics local;
  PhonemeMetrics& m = metrics ? *metrics : local;
  m = PhonemeMetrics{};

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng = epoch_rng(cfg, epoch);
    const auto refs =
        sample_epoch_frames(store.train, cfg.frame_len, cfg.hop, cfg.frames_per_utterance, rng);
    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t at = 0; at + static_cast<std::size_t>(cfg.batch_size) <= refs.size();
         at += static_cast<std::size_t>(cfg.batch_size)) {
      Tensor frames = gather_frames(store.train, refs.data() + at, cfg.batch_size, cfg.frame_len);
      std::vector<std::int64_t> labels(static_cast<std::size_t>(cfg.batch_size));
      for (int i = 0; i < cfg.batch_size; ++i) {
        const auto& ref = refs[at + static_cast<std::size_t>(i)];
        labels[static_cast<std::size_t>(i)] = center_phoneme(
            store.train[static_cast<std::size_t>(ref.utterance)], ref.offset, cfg.frame_len);
      }
      Tensor scores = models::phoneme_scores(net, frames, /*train=*/true);
      Tensor loss = cross_entropy(scores, labels);
      const double value = loss.item();
      if (!std::isfinite(value)) throw NumericError("phoneme pretraining loss is not finite");
      adam.zero_grad();
      loss.backward();
      adam.step();
      loss_sum += value;
      ++batches;
    }
    if (batches == 0) throw ValidationError("train split yields no full batch");
    m.epoch_losses.push_back(loss_sum / batches);
  }

  m.test_frame_error_rate = phoneme_frame_error_rate(net, store.test);

  Checkpoint ckpt = phoneme_to_checkpoint(net);
  common_metadata(ckpt, cfg);
  ckpt.metadata["epoch_losses"] = join_g17(m.epoch_losses);
  ckpt.metadata["test_frame_error_rate"] = fmt_g17(m.test_frame_error_rate);
  return ckpt;
}

Checkpoint train_attacker(const UtteranceStore& store, const Checkpoint& speaker_ckpt,
                          const Checkpoint& phoneme_ckpt, const TrainConfig& cfg,
                          AttackMetrics* metrics) {
  validate_train_config(cfg);
  models::SpeakerNet spk = speaker_from_checkpoint(speaker_ckpt);
  models::PhonemeNet phn = phoneme_from_checkpoint(phoneme_ckpt);
  losses::validate_config(cfg.attack, spk.num_speakers);
  models::set_trainable(models::speaker_parameters(spk), false);
  models::set_trainable(models::phoneme_parameters(phn), false);

  AttackMetrics local;
  AttackMetrics& m = metrics ? *metrics : local;
  m = AttackMetrics{};

  auto frozen_tensors = [&spk, &phn]() {
    auto all = speaker_to_checkpoint(spk).tensors;
    auto more = phoneme_to_checkpoint(phn).tensors;
    all.insert(all.end(), more.begin(), more.end());
    return all;
  };
  m.frozen_hash_before = parameter_hash(frozen_tensors());

  models::AttackerNet net = models::attacker_init(cfg.seed);
  grad::Adam adam(models::attacker_parameters(net), cfg.learning_rate);

  const float lambda_phn = cfg.attack.lambda_phn;
  const float lambda_norm = cfg.attack.lambda_norm;
  std::size_t batch_index = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng = epoch_rng(cfg, epoch);
    const auto refs =
        sample_epoch_frames(store.train, cfg.frame_len, cfg.hop, cfg.frames_per_utterance, rng);
    double total_sum = 0.0;
    int batches = 0;
    for (std::size_t at = 0; at + static_cast<std::size_t>(cfg.batch_size) <= refs.size();
         at += static_cast<std::size_t>(cfg.batch_size)) {
      Tensor s_raw = gather_frames(store.train, refs.data() + at, cfg.batch_size, cfg.frame_len);
      std::vector<int> y(static_cast<std::size_t>(cfg.batch_size));
      for (int i = 0; i < cfg.batch_size; ++i)
        y[static_cast<std::size_t>(i)] =
            store.train[static_cast<std::size_t>(refs[at + static_cast<std::size_t>(i)].utterance)]
                .speaker_id;

      std::vector<float> scale, inv_scale;
      frame_scales(s_raw, &scale, &inv_scale);
      Tensor s_norm = grad::row_scale(s_raw, inv_scale);
      Tensor x = grad::reshape(s_norm, {cfg.batch_size, 1, cfg.frame_len});
      Tensor adv_norm = models::attacker_forward(net, x, /*train=*/true);
      Tensor s_adv =
          grad::row_scale(grad::reshape(adv_norm, {cfg.batch_size, cfg.frame_len}), scale);

      Tensor logits = models::speaker_forward(spk, s_adv, /*train=*/false);
      Tensor spk_loss = cfg.attack.target >= 0
                            ? losses::l_spk_targeted(logits, cfg.attack.target)
                            : losses::l_spk_nontargeted(logits, y);
      Tensor p_clean = models::phoneme_forward(phn, s_raw, /*train=*/false);
      Tensor p_adv = models::phoneme_forward(phn, s_adv, /*train=*/false);
      Tensor phn_loss = losses::l_phn(p_clean, p_adv);
      Tensor nrm_loss = losses::l_norm(s_raw, s_adv, cfg.attack.margin_m);

      losses::LossBreakdown bd;
      Tensor total = losses::l_total(spk_loss, phn_loss, nrm_loss, cfg.attack, &bd);
      if (!std::isfinite(bd.l_total)) {
        std::ostringstream os;
        os << "attack training loss is not finite at batch " << batch_index
           << ": l_spk=" << bd.l_spk << " l_phn=" << bd.l_phn << " l_norm=" << bd.l_norm
           << " l_total=" << bd.l_total;
        throw NumericError(os.str());
      }
      const double recomposed = bd.l_spk + static_cast<double>(lambda_phn) * bd.l_phn +
                                static_cast<double>(lambda_norm) * bd.l_norm;
      const double dev =
          std::abs(bd.l_total - recomposed) / std::max(1.0, std::abs(bd.l_total));
      m.max_identity_rel_dev = std::max(m.max_identity_rel_dev, dev);
      if (dev > 1e-6) {
        std::ostringstream os;
        os << "loss decomposition identity violated at batch " << batch_index << ": total "
           << bd.l_total << " vs recomposed " << recomposed;
        throw NumericError(os.str());
      }

      adam.zero_grad();
      total.backward();
      adam.step();

      m.batches.push_back(bd);
      total_sum += bd.l_total;
      ++batches;
      ++batch_index;
    }
    if (batches == 0) throw ValidationError("train split yields no full batch");
    m.epoch_mean_total.push_back(total_sum / batches);
  }

  m.frozen_hash_after = parameter_hash(frozen_tensors());
  if (m.frozen_hash_after != m.frozen_hash_before)
    throw NumericError("frozen classifier parameters changed during attack training");

  Checkpoint ckpt = attacker_to_checkpoint(net);
  common_metadata(ckpt, cfg);
  ckpt.metadata["lambda_phn"] = fmt_g17(cfg.attack.lambda_phn);
  ckpt.metadata["lambda_norm"] = fmt_g17(cfg.attack.lambda_norm);
  ckpt.metadata["margin_m"] = fmt_g17(cfg.attack.margin_m);
  ckpt.metadata["target"] = std::to_string(cfg.attack.target);
  ckpt.metadata["epoch_mean_losses"] = join_g17(m.epoch_mean_total);
  ckpt.metadata["max_identity_rel_dev"] = fmt_g17(m.max_identity_rel_dev);
  ckpt.metadata["frozen_hash_before"] = hex_u64(m.frozen_hash_before);
  ckpt.metadata["frozen_hash_after"] = hex_u64(m.frozen_hash_after);
  return ckpt;
}

int classify_sentence(models::SpeakerNet& net, const std::vector<float>& samples) {
  const std::int64_t len = static_cast<std::int64_t>(samples.size());
  const std::int64_t positions = frame_positions(len, models::kFrameLen, kEvalHop);
  if (positions == 0) throw ValidationError("utterance shorter than one classifier frame");
  std::vector<float> data(static_cast<std::size_t>(positions * models::kFrameLen));
  for (std::int64_t p = 0; p < positions; ++p)
    std::copy(samples.begin() + p * kEvalHop, samples.begin() + p * kEvalHop + models::kFrameLen,
              data.begin() + p * models::kFrameLen);
  Tensor frames = Tensor::from_vector({positions, models::kFrameLen}, std::move(data));
  Tensor logits = models::speaker_forward(net, frames, /*train=*/false);
  return models::sentence_decision(models::extract_logits(logits));
}

double speaker_sentence_accuracy(models::SpeakerNet& net,
                                 const std::vector<corpus::Utterance>& utts) {
  if (utts.empty()) throw ValidationError("empty utterance set");
  int correct = 0;
  for (const auto& utt : utts)
    if (classify_sentence(net, utt.waveform.samples) == utt.speaker_id) ++correct;
  return static_cast<double>(correct) / static_cast<double>(utts.size());
}

double speaker_frame_accuracy(models::SpeakerNet& net,
                              const std::vector<corpus::Utterance>& utts) {
  const auto refs = all_frames(utts, models::kFrameLen, kEvalHop);
  constexpr int kChunk = 256;
  std::int64_t correct = 0;
  for (std::size_t at = 0; at < refs.size(); at += kChunk) {
    const int n = static_cast<int>(std::min<std::size_t>(kChunk, refs.size() - at));
    Tensor frames = gather_frames(utts, refs.data() + at, n, models::kFrameLen);
    Tensor logits = models::speaker_forward(net, frames, /*train=*/false);
    const auto rows = models::extract_logits(logits);
    for (int i = 0; i < n; ++i)
      if (rows[static_cast<std::size_t>(i)].first ==
          utts[static_cast<std::size_t>(refs[at + static_cast<std::size_t>(i)].utterance)]
              .speaker_id)
        ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(refs.size());
}

double phoneme_frame_error_rate(models::PhonemeNet& net,
                                const std::vector<corpus::Utterance>& utts) {
  const auto refs = all_frames(utts, models::kFrameLen, kEvalHop);
  constexpr int kChunk = 256;
  std::int64_t correct = 0;
  for (std::size_t at = 0; at < refs.size(); at += kChunk) {
    const int n = static_cast<int>(std::min<std::size_t>(kChunk, refs.size() - at));
    Tensor frames = gather_frames(utts, refs.data() + at, n, models::kFrameLen);
    Tensor scores = models::phoneme_scores(net, frames, /*train=*/false);
    const auto rows = models::extract_logits(scores);
    for (int i = 0; i < n; ++i) {
      const auto& ref = refs[at + static_cast<std::size_t>(i)];
      if (rows[static_cast<std::size_t>(i)].first ==
          center_phoneme(utts[static_cast<std::size_t>(ref.utterance)], ref.offset,
                         models::kFrameLen))
        ++correct;
    }
  }
  return 1.0 - static_cast<double>(correct) / static_cast<double>(refs.size());
}

}  // namespace trainer
}  // namespace srak

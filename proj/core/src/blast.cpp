/* Copyright 2026 The Muzzleprint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "muzzleprint/blast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "muzzleprint/error.hpp"

namespace muzzleprint {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kUnreviewed: return "unreviewed";
    case Verdict::kShot: return "shot";
    case Verdict::kNoShot: return "noshot";
  }
  return "";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  for (Verdict v : {Verdict::kUnreviewed, Verdict::kShot, Verdict::kNoShot}) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

AudioClip cnn_slice_from(const AudioClip& clip) {
  const AudioClip head = slice_clip(clip, 0.0, dsp::kCnnSliceSeconds);
  const AudioClip at_rate = resample(head, dsp::kCnnSampleRate);
  return slice_clip(at_rate, 0.0, dsp::kCnnSliceSeconds);
}

CandidateEvent::CandidateEvent(std::string id, double time_s, double peak_s,
                               AudioClip svm_slice, dsp::SnrReport snr)
    : id_(std::move(id)),
      time_s_(time_s),
      peak_s_(peak_s),
      svm_slice_(std::move(svm_slice)),
      cnn_slice_(cnn_slice_from(svm_slice_)),
      snr_(snr) {}

void CandidateEvent::review(Verdict verdict) {
  if (verdict == Verdict::kUnreviewed) {
    throw Error(ErrorCode::kArgument, "cannot review an event back to unreviewed");
  }
  if (verdict_ != Verdict::kUnreviewed) {
    throw Error(ErrorCode::kConflict, "event " + id_ + " was already reviewed");
  }
  verdict_ = verdict;
}

std::string slice_file_name(double time_s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08lld.wav",
                static_cast<long long>(std::llround(time_s * 1000.0)));
  return buf;
}

std::vector<CandidateEvent> detect_abrupt_changes(const AudioClip& clip,
                                                  const DetectorConfig& cfg,
                                                  std::string_view source) {
  if (clip.duration() < kMinDetectSeconds) {
    throw Error(ErrorCode::kSize, "clip of " + std::to_string(clip.duration()) +
                                      " s is shorter than 0.4 s");
  }
  const int rate = clip.sample_rate();
  const auto variance = dsp::moving_variance(clip, cfg.variance_window_s);
  const auto peaks =
      dsp::find_peaks(variance, cfg.min_prominence, cfg.min_separation_s, rate);

  const std::size_t window = seconds_to_samples(cfg.variance_window_s, rate);
  const std::size_t noise_len = seconds_to_samples(cfg.noise_window_s, rate);
  const auto x = clip.samples();

  std::vector<CandidateEvent> events;
  events.reserve(peaks.size());
  for (std::size_t peak : peaks) {
    const std::size_t search_begin = peak + 1 >= window ? peak + 1 - window : 0;
    const std::size_t noise_begin =
        search_begin >= noise_len ? search_begin - noise_len : 0;
    double noise_energy = 0.0;
    for (std::size_t i = noise_begin; i < search_begin; ++i) {
      noise_energy += static_cast<double>(x[i]) * x[i];
    }
    const double noise_rms =
        search_begin > noise_begin
            ? std::sqrt(noise_energy / static_cast<double>(search_begin - noise_begin))
            : 0.0;
    const double gate = cfg.onset_gate * noise_rms;

    std::size_t onset = search_begin;
    for (std::size_t i = search_begin; i <= peak; ++i) {
      if (std::abs(static_cast<double>(x[i])) > gate) {
        onset = i;
        break;
      }
    }

    const double time_s = static_cast<double>(onset) / rate;
    const double peak_s = static_cast<double>(peak) / rate;
    std::string id(source);
    id += '_';
    id += std::to_string(std::llround(time_s * 1000.0));
    events.emplace_back(std::move(id), time_s, peak_s,
                        slice_clip(clip, time_s, dsp::kSnrBlastSeconds),
                        dsp::snr_db(clip, time_s));
  }
  return events;
}

dsp::Spectrogram training_image_for(const AudioClip& onset_aligned) {
  const AudioClip slice = onset_aligned.sample_rate() == dsp::kCnnSampleRate &&
                                  onset_aligned.size() == 4800
                              ? onset_aligned
                              : cnn_slice_from(onset_aligned);
  return dsp::power_spectrogram(slice, dsp::kCnnConfig);
}

dsp::Spectrogram extract_training_image(const CandidateEvent& event) {
  return dsp::power_spectrogram(event.cnn_slice(), dsp::kCnnConfig);
}

void write_candidate_store(const fs::path& dir,
                           const std::vector<CandidateEvent>& events) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kFile, "cannot create " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".wav") fs::remove(entry.path());
  }

  std::ofstream out(dir / "candidates.jsonl", std::ios::trunc);
  if (!out) throw Error(ErrorCode::kFile, "cannot write candidates.jsonl in " + dir.string());
  for (const auto& e : events) {
    const std::string slice = slice_file_name(e.time_s());
    write_wav_file(dir / slice, e.svm_slice());
    json rec = {{"id", e.id()},
                {"time_s", e.time_s()},
                {"peak_s", e.peak_s()},
                {"snr_db", e.snr().snr_db},
                {"blast_power", e.snr().blast_power},
                {"similarity", e.similarity ? json(*e.similarity) : json(nullptr)},
                {"verdict", to_string(e.verdict())},
                {"slice", slice}};
    out << rec.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kFile, "short write in " + dir.string());
}

std::vector<CandidateEvent> read_candidate_store(const fs::path& dir) {
  std::ifstream in(dir / "candidates.jsonl");
  if (!in) {
    throw Error(ErrorCode::kFile, "no candidates.jsonl in " + dir.string());
  }
  std::vector<CandidateEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json rec = json::parse(line);
      dsp::SnrReport snr;
      snr.snr_db = rec.at("snr_db").get<double>();
      snr.blast_power = rec.value("blast_power", 0.0);
      snr.reference_power = dsp::kSnrReferencePower;
      const double time_s = rec.at("time_s").get<double>();
      const std::string slice = rec.value("slice", slice_file_name(time_s));
      CandidateEvent e(rec.at("id").get<std::string>(), time_s,
                       rec.value("peak_s", time_s), read_wav_file(dir / slice), snr);
      if (rec.contains("similarity") && rec["similarity"].is_number()) {
        e.similarity = rec["similarity"].get<double>();
      }
      const auto verdict = parse_verdict(rec.value("verdict", "unreviewed"));
      if (!verdict) throw Error(ErrorCode::kValidation, "bad verdict");
      if (*verdict != Verdict::kUnreviewed) e.review(*verdict);
      events.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kValidation, (dir / "candidates.jsonl").string() +
                                              " line " + std::to_string(line_no) +
                                              ": " + ex.what());
    }
  }
  return events;
}

}  // namespace muzzleprint

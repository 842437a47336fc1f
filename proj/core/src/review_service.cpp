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

#include "muzzleprint/review_service.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "muzzleprint/error.hpp"

namespace muzzleprint::review {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kSessionFile = "session.json";
constexpr const char* kModelFile = "svm_model.json";

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kFile, "cannot write " + tmp.string());
    out << text << '\n';
    if (!out) throw Error(ErrorCode::kFile, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

json view_json(const CandidateView& v) {
  return {{"id", v.id},
          {"time_s", v.time_s},
          {"snr_db", v.snr_db},
          {"similarity", v.similarity ? json(*v.similarity) : json(nullptr)},
          {"predicted", v.predicted ? json(to_string(*v.predicted)) : json(nullptr)},
          {"verdict", to_string(v.verdict)}};
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kLocked:
      return 409;
    case ErrorCode::kArgument:
    case ErrorCode::kValidation:
    case ErrorCode::kDecode:
      return 400;
    case ErrorCode::kDegenerateData:
      return 422;
    default:
      return 500;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send_json(res, status, {{"error", code}, {"message", message}});
}

void send_error(httplib::Response& res, const Error& e) {
  send_error(res, http_status(e.code()), to_string(e.code()), e.what());
}

}  // namespace

ReviewSession::ReviewSession(ProjectLayout project, svm::SvmTrainConfig cfg)
    : project_(std::move(project)), cfg_(cfg) {
  // One store per source recording under candidates/, or a single store
  // directly in it.
  std::vector<fs::path> stores;
  if (fs::exists(project_.candidates() / "candidates.jsonl")) stores.push_back(project_.candidates());
  if (fs::is_directory(project_.candidates())) {
    for (const auto& entry : fs::directory_iterator(project_.candidates())) {
      if (entry.is_directory() && fs::exists(entry.path() / "candidates.jsonl")) {
        stores.push_back(entry.path());
      }
    }
  }
  std::sort(stores.begin(), stores.end());
  for (const fs::path& dir : stores) {
    for (CandidateEvent& e : read_candidate_store(dir)) events_.push_back(std::move(e));
  }
  std::map<std::string, int> seen;
  for (const CandidateEvent& e : events_) {
    if (seen[e.id()]++) throw Error(ErrorCode::kConflict, "duplicate candidate id " + e.id());
  }
  training_set_ = svm::load_training_set(project_.trainset());
  for (CandidateEvent& e : events_) {
    if (e.verdict() != Verdict::kUnreviewed) continue;
    for (const auto& s : training_set_.samples()) {
      if (s.id == e.id()) {
        e.review(s.verdict);
        e.similarity = s.similarity;
        break;
      }
    }
  }
  const fs::path session = project_.trainset() / kSessionFile;
  if (fs::exists(session)) {
    try {
      iteration_ = json::parse(read_text(session)).at("iteration").get<std::uint64_t>();
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kValidation, session.string() + ": " + ex.what());
    }
  }
  const fs::path model = project_.trainset() / kModelFile;
  if (fs::exists(model)) {
    model_ = svm::svm_model_from_json(read_text(model));
    rescore_locked();
  }
}

CandidateView ReviewSession::view(const CandidateEvent& e) const {
  CandidateView v;
  v.id = e.id();
  v.time_s = e.time_s();
  v.snr_db = e.snr().snr_db;
  v.similarity = e.similarity;
  if (e.similarity) v.predicted = svm::classify_similarity(*e.similarity);
  v.verdict = e.verdict();
  return v;
}

const CandidateEvent& ReviewSession::find(const std::string& id) const {
  for (const CandidateEvent& e : events_) {
    if (e.id() == id) return e;
  }
  throw Error(ErrorCode::kNotFound, "unknown candidate " + id);
}

std::vector<CandidateView> ReviewSession::candidates(std::optional<Verdict> state) const {
  std::shared_lock lock(state_mutex_);
  std::vector<CandidateView> out;
  for (const CandidateEvent& e : events_) {
    if (!state || e.verdict() == *state) out.push_back(view(e));
  }
  std::sort(out.begin(), out.end(), [](const CandidateView& a, const CandidateView& b) {
    if (a.similarity.has_value() != b.similarity.has_value()) return a.similarity.has_value();
    if (a.similarity && *a.similarity != *b.similarity) return *a.similarity > *b.similarity;
    return a.id < b.id;
  });
  return out;
}

CandidateView ReviewSession::candidate(const std::string& id) const {
  std::shared_lock lock(state_mutex_);
  return view(find(id));
}

std::vector<std::uint8_t> ReviewSession::audio(const std::string& id) const {
  std::shared_lock lock(state_mutex_);
  return encode_wav(find(id).svm_slice());
}

dsp::Spectrogram ReviewSession::spectrogram(const std::string& id) const {
  std::shared_lock lock(state_mutex_);
  return extract_training_image(find(id));
}

void ReviewSession::submit_verdict(const std::string& id, Verdict verdict) {
  if (verdict == Verdict::kUnreviewed) {
    throw Error(ErrorCode::kArgument, "verdict must be shot or noshot");
  }
  std::unique_lock lock(state_mutex_);
  auto it = std::find_if(events_.begin(), events_.end(),
                         [&](const CandidateEvent& e) { return e.id() == id; });
  if (it == events_.end()) throw Error(ErrorCode::kNotFound, "unknown candidate " + id);
  if (it->verdict() != Verdict::kUnreviewed || training_set_.contains(id)) {
    throw Error(ErrorCode::kConflict, "candidate " + id + " already has a verdict");
  }
  svm::TrainingSample sample{id, svm::featurize(*it), verdict, it->similarity};
  svm::append_training_sample(project_.trainset(), sample, it->svm_slice());
  training_set_.add(std::move(sample));
  it->review(verdict);
}

std::optional<std::unique_lock<std::mutex>> ReviewSession::try_lock_retrain() {
  std::unique_lock lock(retrain_mutex_, std::try_to_lock);
  if (!lock.owns_lock()) return std::nullopt;
  return lock;
}

RetrainResult ReviewSession::retrain() {
  std::unique_lock retrain_lock(retrain_mutex_, std::try_to_lock);
  if (!retrain_lock.owns_lock()) {
    throw Error(ErrorCode::kLocked, "a retrain is already in progress");
  }
  svm::TrainingSet snapshot;
  {
    std::shared_lock lock(state_mutex_);
    snapshot = training_set_;
  }
  const svm::LinearSvmModel model = snapshot.train(cfg_);

  std::unique_lock lock(state_mutex_);
  model_ = model;
  ++iteration_;
  fs::create_directories(project_.trainset());
  write_text(project_.trainset() / kModelFile, svm::to_json(model));
  save_session_locked();
  rescore_locked();
  RetrainResult r;
  r.iteration = iteration_;
  r.trainset_size = training_set_.size();
  r.rescored = static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(),
                    [](const CandidateEvent& e) { return e.verdict() == Verdict::kUnreviewed; }));
  return r;
}

void ReviewSession::rescore_locked() {
  if (!model_) return;
  for (CandidateEvent& e : events_) {
    if (e.verdict() == Verdict::kUnreviewed) {
      e.similarity = svm::similarity_index(*model_, svm::featurize(e));
    }
  }
}

void ReviewSession::save_session_locked() const {
  write_text(project_.trainset() / kSessionFile, json{{"iteration", iteration_}}.dump());
}

SessionInfo ReviewSession::info() const {
  std::shared_lock lock(state_mutex_);
  SessionInfo s;
  s.iteration = iteration_;
  s.trainset_size = training_set_.size();
  s.candidates = events_.size();
  for (const CandidateEvent& e : events_) {
    switch (e.verdict()) {
      case Verdict::kUnreviewed:
        ++s.unreviewed;
        break;
      case Verdict::kShot:
        ++s.shots;
        break;
      case Verdict::kNoShot:
        ++s.noshots;
        break;
    }
  }
  s.has_model = model_.has_value();
  return s;
}

struct ReviewServer::Impl {
  ReviewSession& session;
  ServerOptions options;
  httplib::Server server;
  int bound_port = -1;

  Impl(ReviewSession& s, ServerOptions o) : session(s), options(std::move(o)) { routes(); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const Error& e) {
            send_error(res, e);
          } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
          } catch (...) {
            send_error(res, 500, "internal", "unknown failure");
          }
        });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      const bool missing = res.status == 404;
      send_error(res, res.status, missing ? "not-found" : "http",
                 missing ? "no route for " + req.method + " " + req.path : "request failed");
      return httplib::Server::HandlerResponse::Handled;
    });
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });

    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}, {"version", options.version}});
    });

    server.Get("/api/session", [this](const httplib::Request&, httplib::Response& res) {
      const SessionInfo s = session.info();
      send_json(res, 200,
                {{"iteration", s.iteration},
                 {"trainset_size", s.trainset_size},
                 {"candidates", s.candidates},
                 {"unreviewed", s.unreviewed},
                 {"shot", s.shots},
                 {"noshot", s.noshots},
                 {"has_model", s.has_model}});
    });

    server.Get("/api/candidates", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<Verdict> state;
      if (req.has_param("state")) {
        const std::string text = req.get_param_value("state");
        if (text != "all") {
          state = parse_verdict(text);
          if (!state) {
            send_error(res, 400, "argument", "state must be unreviewed, shot, noshot or all");
            return;
          }
        }
      }
      json list = json::array();
      for (const CandidateView& v : session.candidates(state)) list.push_back(view_json(v));
      send_json(res, 200, list);
    });

    server.Get(R"(/api/candidates/([^/]+)/audio)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const auto bytes = session.audio(req.matches[1]);
                 res.status = 200;
                 res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
               });

    server.Get(R"(/api/candidates/([^/]+)/spectrogram)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 res.status = 200;
                 res.set_content(dsp::to_json(session.spectrogram(req.matches[1])),
                                 "application/json");
               });

    server.Get(R"(/api/candidates/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, view_json(session.candidate(req.matches[1])));
               });

    server.Post(R"(/api/candidates/([^/]+)/verdict)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const json body = json::parse(req.body, nullptr, false);
                  if (body.is_discarded() || !body.is_object() || !body.contains("verdict") ||
                      !body["verdict"].is_string()) {
                    send_error(res, 400, "argument", R"(body must be {"verdict": "shot"|"noshot"})");
                    return;
                  }
                  const auto verdict = parse_verdict(body["verdict"].get<std::string>());
                  if (!verdict || *verdict == Verdict::kUnreviewed) {
                    send_error(res, 400, "argument", "verdict must be shot or noshot");
                    return;
                  }
                  const std::string id = req.matches[1];
                  session.submit_verdict(id, *verdict);
                  send_json(res, 200, view_json(session.candidate(id)));
                });

    server.Post("/api/retrain", [this](const httplib::Request&, httplib::Response& res) {
      const RetrainResult r = session.retrain();
      send_json(res, 200,
                {{"iteration", r.iteration},
                 {"trainset_size", r.trainset_size},
                 {"rescored", r.rescored}});
    });

    if (!options.static_dir.empty()) {
      if (!server.set_mount_point("/", options.static_dir.string())) {
        throw Error(ErrorCode::kConfiguration,
                    "static directory " + options.static_dir.string() + " does not exist");
      }
    }
  }
};

ReviewServer::ReviewServer(ReviewSession& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind() {
  if (impl_->bound_port >= 0) return impl_->bound_port;
  const std::string& host = impl_->options.host;
  const int port = impl_->options.port;
  if (port < 0 || port > 65535) throw Error(ErrorCode::kConfiguration, "port out of range");
  if (port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->bound_port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->bound_port < 0) {
    throw Error(ErrorCode::kConfiguration,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  return impl_->bound_port;
}

void ReviewServer::listen() {
  bind();
  impl_->server.listen_after_bind();
}

void ReviewServer::stop() {
  if (impl_) impl_->server.stop();
}

bool ReviewServer::running() const { return impl_->server.is_running(); }

}  // namespace muzzleprint::review

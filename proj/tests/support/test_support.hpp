// Copyright 2026 The ckassist Authors
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

#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ckassist/checklist.hpp"
#include "ckassist/ingest.hpp"
#include "ckassist/llm_gateway.hpp"

namespace ckassist::testing {

inline std::filesystem::path source_dir() { return CKASSIST_SOURCE_DIR; }
inline std::filesystem::path fixture_dir() { return source_dir() / "data" / "fixtures"; }
inline std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << content;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("ckassist-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline PaperDocument fixture_paper() {
  return ingest(load_document(fixture_dir() / "paper" / "paper.txt", SourceKind::kPlainText));
}

inline Checklist fixture_checklist() {
  return load_sidecar(fixture_dir() / "paper" / "checklist.sidecar");
}

/// Provider config for tests: no waiting between retries.
inline ProviderConfig fast_config(int max_retries = 3) {
  ProviderConfig cfg;
  cfg.max_retries = max_retries;
  cfg.backoff_initial = std::chrono::milliseconds(0);
  cfg.backoff_max = std::chrono::milliseconds(0);
  return cfg;
}

inline Sleeper no_sleep() {
  return [](std::chrono::milliseconds) {};
}

}  // namespace ckassist::testing

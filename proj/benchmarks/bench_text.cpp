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

#include <benchmark/benchmark.h>

#include <string>

#include "ckassist/ingest.hpp"
#include "ckassist/review.hpp"

namespace {

using namespace ckassist;

void BM_ParseScore(benchmark::State& state) {
  std::string review;
  for (int i = 0; i < 40; ++i) review += "The justification cites section " + std::to_string(i) + " of the paper.\n";
  review += "\nScore: 0.5\n";
  for (auto _ : state) benchmark::DoNotOptimize(parse_score(review));
}
BENCHMARK(BM_ParseScore);

void BM_Ingest(benchmark::State& state) {
  std::string body;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    body += "word";
    body += std::to_string(i % 97);
    body += (i % 19 == 18) ? "-\n" : " ";
  }
  const RawDocument raw{SourceKind::kPdfExtracted, body, ""};
  for (auto _ : state) benchmark::DoNotOptimize(ingest(raw));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(body.size()));
}
BENCHMARK(BM_Ingest)->Arg(5'000)->Arg(20'000)->Unit(benchmark::kMicrosecond);

}  // namespace

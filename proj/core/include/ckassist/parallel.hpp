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

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace ckassist {

/// Runs fn(0..n-1) on at most `parallelism` threads. Returns one slot per
/// index holding the exception that index raised, or null.
std::vector<std::exception_ptr> parallel_for_each(std::size_t n, int parallelism,
                                                  const std::function<void(std::size_t)>& fn);

}  // namespace ckassist

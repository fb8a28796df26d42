// Copyright 2026 The Stacksim Authors
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

#ifndef STACKSIM_UTIL_H_
#define STACKSIM_UTIL_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace stacksim {

// Shortest decimal form that round-trips to the same double. Keeps CSV and
// JSON output byte-stable when a run is repeated.
std::string FormatDouble(double value);
double ParseDouble(std::string_view text);

uint64_t Fnv1a(std::string_view text);
uint64_t SplitMix64(uint64_t x);

// Independent generator for substream `stream` of a base seed.
std::mt19937_64 MakeSubStream(uint64_t seed, uint64_t stream);

// Uniform draw in [0, 1) built from the generator's raw 64-bit output.
// Avoids std::uniform_real_distribution, whose output is
// implementation-defined.
double UniformUnit(std::mt19937_64& rng);

// Samples an index from a probability vector by CDF scan. Falls back to the
// last index with positive mass when rounding leaves the CDF short of the
// drawn point.
int SampleIndex(std::span<const double> probs, std::mt19937_64& rng);

std::string ReadTextFile(const std::string& path);
// Writes via a temporary file and rename so partially written files are
// never observed.
void WriteTextFileAtomic(const std::string& path, std::string_view contents);

}  // namespace stacksim

#endif  // STACKSIM_UTIL_H_

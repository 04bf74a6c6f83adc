// Copyright 2026 The netcausal Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace netcausal {

enum class Errc {
  EmptySource,
  BadIndex,
  NonBinary,
  WrongArity,
  Overflow,
  Mismatch,
  OutOfRange,
  BadVisibility,
  TooLarge,
  InconsistentPlan,
  DimensionMismatch,
  CyclicInput,
  SignalingEve,
  Usage,
  Data,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptySource: return "EmptySource";
    case Errc::BadIndex: return "BadIndex";
    case Errc::NonBinary: return "NonBinary";
    case Errc::WrongArity: return "WrongArity";
    case Errc::Overflow: return "Overflow";
    case Errc::Mismatch: return "Mismatch";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::BadVisibility: return "BadVisibility";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InconsistentPlan: return "InconsistentPlan";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::CyclicInput: return "CyclicInput";
    case Errc::SignalingEve: return "SignalingEve";
    case Errc::Usage: return "Usage";
    case Errc::Data: return "Data";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace netcausal

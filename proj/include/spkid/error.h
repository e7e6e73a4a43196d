// include/spkid/error.h

// Copyright 2026 The spkid Authors
//
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

#ifndef SPKID_ERROR_H_
#define SPKID_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace spkid {

enum class ErrorCode {
  kUnsupportedFormat = 1,
  kCorruptFile,
  kEmptyAudio,
  kEmptyFrame,
  kEmptySequence,
  kSignalTooShort,
  kFrameTooShort,
  kBadFftSize,
  kTooManyBins,
  kDimensionMismatch,
  kBadCoefficientCount,
  kAllSilent,
  kEmptyData,
  kBadRadius,
  kBadRatios,
  kBadWidth,
  kSolveFailure,
  kDuplicateSpeaker,
  kSampleRateMismatch,
  kEmptyFeatures,
  kEmptyDatabase,
  kIoFailure,
  kVersionMismatch,
  kCorruptDatabase,
  kManifestParse,
  kInvalidConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the
// CLI maps them onto distinct exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spkid

#endif  // SPKID_ERROR_H_

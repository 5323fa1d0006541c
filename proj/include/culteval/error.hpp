// Copyright 2026 The culteval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace culteval {

// Base for every error raised by the library. Callers that only care about
// "did it work" catch this; finer types exist where recovery differs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or record.
class InputError : public Error {
 public:
  using Error::Error;
};

// A judge or scorer answer that does not fit the expected grammar.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Backend could not be reached or returned a transport-level failure.
// These are retried by the judge client.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

// Backend answered, but the payload is not a text completion.
class MalformedPayload : public Error {
 public:
  using Error::Error;
};

// Judge interaction failed for good (retries or repair exhausted).
class JudgeError : public Error {
 public:
  using Error::Error;
};

}  // namespace culteval

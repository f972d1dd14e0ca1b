// Copyright 2026 The raindrop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
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

namespace raindrop {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raster dimensions do not agree (or a sequence mixes frame sizes).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A parameter is outside its documented domain (even kernel, bad fraction, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid input data (empty sequence, bad counts, bad manifest).
class InputError : public Error {
public:
    using Error::Error;
};

/// Malformed JSON or schema violation; message carries the location.
class ParseError : public Error {
public:
    using Error::Error;
};

/// File could not be read, decoded, or written; message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace raindrop

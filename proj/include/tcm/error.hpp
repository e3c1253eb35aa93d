// Copyright 2026 The tcmsim Authors
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

#include <stdexcept>
#include <string>

namespace tcm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes disagree (or a requested dimension exceeds the cap).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Grid side does not divide the matrix dimension, or a block is missing.
class PartitionError : public Error {
  public:
    using Error::Error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Eigen-decomposition did not converge.
class EigenError : public Error {
  public:
    using Error::Error;
};

/// A Cannon worker failed; the whole multiplication is discarded.
class WorkerError : public Error {
  public:
    using Error::Error;
};

/// Trace of the density matrix left the accepted band during a trajectory.
class AccuracyError : public Error {
  public:
    using Error::Error;
};

/// A speedup table was requested without a serial timing to divide by.
class BaselineError : public Error {
  public:
    using Error::Error;
};

}  // namespace tcm

// SPDX-License-Identifier: Apache-2.0
//
// rwsim - line-of-sight massive MIMO deployment simulator for indoor rooms
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace rwsim
{

// Invalid parameters or configuration (bad JSON, out-of-range values, layouts that do not fit).
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Coincident points or other geometry that has no defined direction.
class GeometryError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Quadrature failures, singular Gram matrices, too many discarded draws.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError
{
public:
    SingularMatrixError(const std::string &what, double condition)
        : NumericalError(what), condition_(condition) {}

    // Estimated 1-norm condition number of the offending matrix (inf when the factorization failed).
    double condition() const { return condition_; }

private:
    double condition_;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace rwsim

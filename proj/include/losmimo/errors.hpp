// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO channel modelling and capacity analysis
// Copyright (C) 2026 The losmimo authors
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

#ifndef LOSMIMO_ERRORS_HPP
#define LOSMIMO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace losmimo
{
    // Bad parameters: non-positive counts or lengths, out-of-range ranks, empty lists.
    class InvalidArgument : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Coincident or intersecting antennas, or an expansion evaluated outside its domain.
    class DegenerateGeometry : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Operation requires an array type the layout does not have (e.g. rotation search on a URA).
    class UnsupportedArchetype : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    // Spectrum with no positive gain; nothing to allocate power to.
    class NoSignal : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Phase sampled too coarsely to unwrap (more than pi between successive samples).
    class NyquistViolation : public std::runtime_error
    {
    public:
        NyquistViolation(const std::string &what, std::size_t step_index)
            : std::runtime_error(what), step_index_(step_index) {}
        std::size_t step_index() const noexcept { return step_index_; }

    private:
        std::size_t step_index_;
    };
}

#endif

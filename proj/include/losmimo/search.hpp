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

#ifndef LOSMIMO_SEARCH_HPP
#define LOSMIMO_SEARCH_HPP

#include <cmath>
#include <utility>

namespace losmimo
{
    struct ScalarOptimum
    {
        double x;
        double value;
    };

    // Golden-section search for the maximum of a function assumed unimodal on [lo, hi].
    // Stops once the bracket is narrower than `tolerance`; returns the better of the two interior probes.
    template <typename F>
    ScalarOptimum golden_section_maximize(F &&f, double lo, double hi, double tolerance, int max_iterations = 200)
    {
        const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = f(c), fd = f(d);
        for (int i = 0; i < max_iterations && (b - a) > tolerance; ++i)
        {
            if (fc >= fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
        }
        return fc >= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};
    }
}

#endif

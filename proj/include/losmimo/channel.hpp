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

#ifndef LOSMIMO_CHANNEL_HPP
#define LOSMIMO_CHANNEL_HPP

#include "losmimo/geometry.hpp"

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace losmimo
{
    enum class WavefrontModel
    {
        SPHERICAL, // exact distances
        FRESNEL,   // second order in transverse offsets, first order along the link axis
        PLANAR     // first order; unit rank
    };

    std::string_view to_string(WavefrontModel m);
    std::optional<WavefrontModel> parse_wavefront_model(std::string_view name); // "spherical", "fresnel", "planar"

    // D(n, m): distance from transmit antenna m to receive antenna n, size [N_r, N_t]
    using DistanceMatrix = Eigen::MatrixXd;

    struct ChannelMatrix
    {
        Eigen::MatrixXcd entries; // unit-modulus responses, size [N_r, N_t]
        double wavelength_m = 0.0;
        WavefrontModel model = WavefrontModel::SPHERICAL;
        DistanceMatrix distances; // exact geometry the channel was derived from

        Eigen::Index n_r() const { return entries.rows(); }
        Eigen::Index n_t() const { return entries.cols(); }
    };

    DistanceMatrix distance_matrix(const LinkScene &scene);

    // Entry (n, m) = exp(-j 2 pi D(n, m) / lambda), with D taken exactly or from its expansion
    // about the centroid distance along the link axis.
    ChannelMatrix channel_matrix(const LinkScene &scene, WavefrontModel model);

    enum class Validity
    {
        PLANAR_OK,
        SPHERICAL_REQUIRED
    };

    std::string_view to_string(Validity v);

    // Planar wavefronts hold while L_t L_r < 4 lambda D. Advisory only.
    Validity classify_validity(double tx_aperture_m, double rx_aperture_m, double wavelength_m, double distance_m);
    Validity classify_validity(const LinkScene &scene);

    // Unwrap a sampled phase sequence, adding multiples of 2 pi wherever successive samples jump by more than pi
    std::vector<double> unwrap_phase(std::span<const double> wrapped);

    struct PolynomialFit
    {
        std::vector<double> coefficients; // c0 + c1 x + c2 x^2 + ...
        double r_squared = 0.0;

        double operator()(double x) const;
    };

    // Least-squares polynomial fit with its coefficient of determination (clamped to [0, 1])
    PolynomialFit fit_polynomial(std::span<const double> x, std::span<const double> y, int degree);

    struct PhaseProfile
    {
        std::vector<double> displacements_m;
        std::vector<double> phase_rad; // unwrapped
        PolynomialFit quadratic;
        PolynomialFit linear;

        double c2() const { return quadratic.coefficients[2]; }
        double r2_quadratic() const { return quadratic.r_squared; }
        double r2_linear() const { return linear.r_squared; }
    };

    // Phase seen by a receive antenna stepped `n_steps` times from `rx_start` along `step_direction`,
    // i.e. a synthetic ULA built by mechanical displacement. Displacements start at 0.
    // Throws NyquistViolation when the path length changes by lambda/2 or more between two samples.
    PhaseProfile phase_profile(const Vec3 &tx_point, const Vec3 &rx_start, double step_m, int n_steps,
                               const Vec3 &step_direction, double wavelength_m);
}

#endif

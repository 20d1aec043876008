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

#include "losmimo/channel.hpp"
#include "losmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace losmimo
{
    namespace
    {
        constexpr double kTwoPi = 2.0 * std::numbers::pi;
        constexpr double kMinDistance = 1e-9;

        // x - round(x): an odd function, so reversed geometry yields bit-identical phases
        double reduce_cycles(double x) { return x - std::round(x); }

        std::complex<double> phasor(double cycles) { return std::polar(1.0, -kTwoPi * reduce_cycles(cycles)); }

        // Pairwise offsets relative to the centroid vector: r_n - t_m = c + delta(n, m)
        struct PairGeometry
        {
            Vec3 centroid_vector;
            double centroid_distance;
            std::vector<Vec3> rx_offsets;
            std::vector<Vec3> tx_offsets;

            Vec3 delta(std::size_t n, std::size_t m) const { return rx_offsets[n] - tx_offsets[m]; }
        };

        PairGeometry pair_geometry(const LinkScene &scene)
        {
            PairGeometry g;
            g.centroid_vector = scene.rx_pose().translation - scene.tx_pose().translation;
            g.centroid_distance = scene.separation_m();
            for (const auto &p : scene.rx().positions())
                g.rx_offsets.push_back(scene.rx_pose().rotation * p);
            for (const auto &p : scene.tx().positions())
                g.tx_offsets.push_back(scene.tx_pose().rotation * p);
            return g;
        }
    }

    std::string_view to_string(WavefrontModel m)
    {
        switch (m)
        {
        case WavefrontModel::SPHERICAL:
            return "spherical";
        case WavefrontModel::FRESNEL:
            return "fresnel";
        case WavefrontModel::PLANAR:
            return "planar";
        }
        return "spherical";
    }

    std::optional<WavefrontModel> parse_wavefront_model(std::string_view name)
    {
        if (name == "spherical")
            return WavefrontModel::SPHERICAL;
        if (name == "fresnel")
            return WavefrontModel::FRESNEL;
        if (name == "planar")
            return WavefrontModel::PLANAR;
        return std::nullopt;
    }

    std::string_view to_string(Validity v)
    {
        return v == Validity::PLANAR_OK ? "planar" : "spherical";
    }

    DistanceMatrix distance_matrix(const LinkScene &scene)
    {
        const PairGeometry g = pair_geometry(scene);
        const auto n_r = Eigen::Index(g.rx_offsets.size());
        const auto n_t = Eigen::Index(g.tx_offsets.size());
        DistanceMatrix d(n_r, n_t);
        for (Eigen::Index n = 0; n < n_r; ++n)
            for (Eigen::Index m = 0; m < n_t; ++m)
            {
                d(n, m) = (g.centroid_vector + g.delta(std::size_t(n), std::size_t(m))).norm();
                if (!(d(n, m) > kMinDistance))
                    throw DegenerateGeometry("transmit antenna " + std::to_string(m) + " and receive antenna " +
                                             std::to_string(n) + " coincide");
            }
        return d;
    }

    ChannelMatrix channel_matrix(const LinkScene &scene, WavefrontModel model)
    {
        ChannelMatrix h;
        h.wavelength_m = scene.wavelength_m();
        h.model = model;
        h.distances = distance_matrix(scene);

        const PairGeometry g = pair_geometry(scene);
        const double lambda = scene.wavelength_m();
        const double dc = g.centroid_distance;
        const Vec3 axis = g.centroid_vector / dc;
        const double base = reduce_cycles(dc / lambda);
        const auto n_r = Eigen::Index(g.rx_offsets.size());
        const auto n_t = Eigen::Index(g.tx_offsets.size());
        h.entries.resize(n_r, n_t);

        switch (model)
        {
        case WavefrontModel::SPHERICAL:
            for (Eigen::Index n = 0; n < n_r; ++n)
                for (Eigen::Index m = 0; m < n_t; ++m)
                {
                    const Vec3 delta = g.delta(std::size_t(n), std::size_t(m));
                    // |c + delta| - |c| without cancellation
                    const double excess = (2.0 * g.centroid_vector.dot(delta) + delta.squaredNorm()) /
                                          (h.distances(n, m) + dc);
                    h.entries(n, m) = phasor(base + excess / lambda);
                }
            break;

        case WavefrontModel::FRESNEL:
            for (Eigen::Index n = 0; n < n_r; ++n)
                for (Eigen::Index m = 0; m < n_t; ++m)
                {
                    const Vec3 delta = g.delta(std::size_t(n), std::size_t(m));
                    const double along = axis.dot(delta);
                    if (!(dc + along > 0.0))
                        throw DegenerateGeometry("antenna pair separation has no positive projection on the link axis");
                    const double across2 = (delta - along * axis).squaredNorm();
                    h.entries(n, m) = phasor(base + (along + across2 / (2.0 * dc)) / lambda);
                }
            break;

        case WavefrontModel::PLANAR:
        {
            Eigen::VectorXcd a(n_r);
            Eigen::VectorXcd b(n_t);
            for (Eigen::Index n = 0; n < n_r; ++n)
                a(n) = std::polar(1.0, -kTwoPi * reduce_cycles(axis.dot(g.rx_offsets[std::size_t(n)]) / lambda));
            for (Eigen::Index m = 0; m < n_t; ++m)
                b(m) = std::polar(1.0, kTwoPi * reduce_cycles(axis.dot(g.tx_offsets[std::size_t(m)]) / lambda));
            for (Eigen::Index n = 0; n < n_r; ++n)
                for (Eigen::Index m = 0; m < n_t; ++m)
                {
                    if (!(dc + axis.dot(g.delta(std::size_t(n), std::size_t(m))) > 0.0))
                        throw DegenerateGeometry("antenna pair separation has no positive projection on the link axis");
                    h.entries(n, m) = phasor(base) * (a(n) * b(m));
                }
            break;
        }
        }
        return h;
    }

    Validity classify_validity(double tx_aperture_m, double rx_aperture_m, double wavelength_m, double distance_m)
    {
        return tx_aperture_m * rx_aperture_m < 4.0 * wavelength_m * distance_m ? Validity::PLANAR_OK
                                                                               : Validity::SPHERICAL_REQUIRED;
    }

    Validity classify_validity(const LinkScene &scene)
    {
        const Vec3 axis = scene.link_axis();
        return classify_validity(broadside_projected_aperture(scene.tx(), scene.tx_pose().rotation, axis),
                                 broadside_projected_aperture(scene.rx(), scene.rx_pose().rotation, axis),
                                 scene.wavelength_m(), scene.separation_m());
    }

    std::vector<double> unwrap_phase(std::span<const double> wrapped)
    {
        std::vector<double> out(wrapped.begin(), wrapped.end());
        for (std::size_t k = 1; k < out.size(); ++k)
        {
            double step = wrapped[k] - wrapped[k - 1];
            step -= kTwoPi * std::round(step / kTwoPi);
            out[k] = out[k - 1] + step;
        }
        return out;
    }

    double PolynomialFit::operator()(double x) const
    {
        double y = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
            y = y * x + *it;
        return y;
    }

    PolynomialFit fit_polynomial(std::span<const double> x, std::span<const double> y, int degree)
    {
        if (degree < 0)
            throw InvalidArgument("polynomial degree must be non-negative");
        if (x.size() != y.size() || x.size() < std::size_t(degree + 1))
            throw InvalidArgument("need at least degree + 1 samples of matching length");

        // fit in t = (x - mid) / half_range for conditioning, then expand back
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        const double mid = 0.5 * (*lo + *hi);
        const double half = *hi > *lo ? 0.5 * (*hi - *lo) : 1.0;
        const auto rows = Eigen::Index(x.size());
        Eigen::MatrixXd v(rows, degree + 1);
        Eigen::VectorXd rhs(rows);
        for (Eigen::Index i = 0; i < rows; ++i)
        {
            const double t = (x[std::size_t(i)] - mid) / half;
            double p = 1.0;
            for (int k = 0; k <= degree; ++k, p *= t)
                v(i, k) = p;
            rhs(i) = y[std::size_t(i)];
        }
        const Eigen::VectorXd a = v.colPivHouseholderQr().solve(rhs);

        // sum_k a_k ((x - mid)/half)^k  ->  sum_j c_j x^j  (binomial expansion)
        PolynomialFit fit;
        fit.coefficients.assign(std::size_t(degree + 1), 0.0);
        for (int k = 0; k <= degree; ++k)
        {
            const double ak = a(k) / std::pow(half, k);
            double binom = 1.0;
            for (int j = 0; j <= k; ++j)
            {
                fit.coefficients[std::size_t(j)] += ak * binom * std::pow(-mid, k - j);
                binom = binom * double(k - j) / double(j + 1);
            }
        }

        double mean = 0.0;
        for (double yi : y)
            mean += yi;
        mean /= double(y.size());
        double ss_tot = 0.0, ss_res = 0.0;
        const Eigen::VectorXd fitted = v * a;
        for (Eigen::Index i = 0; i < rows; ++i)
        {
            ss_tot += (rhs(i) - mean) * (rhs(i) - mean);
            ss_res += (rhs(i) - fitted(i)) * (rhs(i) - fitted(i));
        }
        fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
        return fit;
    }

    PhaseProfile phase_profile(const Vec3 &tx_point, const Vec3 &rx_start, double step_m, int n_steps,
                               const Vec3 &step_direction, double wavelength_m)
    {
        if (!(step_m > 0.0) || !std::isfinite(step_m))
            throw InvalidArgument("step must be positive");
        if (n_steps < 3)
            throw InvalidArgument("phase profile needs at least 3 samples");
        if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m))
            throw InvalidArgument("wavelength must be positive");
        if (!(step_direction.norm() > 0.0) || !step_direction.allFinite())
            throw InvalidArgument("step direction must be a non-zero vector");
        const Vec3 dir = step_direction.normalized();

        PhaseProfile profile;
        std::vector<double> distance(static_cast<std::size_t>(n_steps));
        std::vector<double> wrapped(static_cast<std::size_t>(n_steps));
        profile.displacements_m.resize(std::size_t(n_steps));
        for (int k = 0; k < n_steps; ++k)
        {
            const double x = double(k) * step_m;
            const double d = (rx_start + x * dir - tx_point).norm();
            if (!(d > kMinDistance))
                throw DegenerateGeometry("synthetic receive position " + std::to_string(k) + " coincides with the transmitter");
            if (k > 0 && std::abs(d - distance[std::size_t(k - 1)]) >= 0.5 * wavelength_m)
                throw NyquistViolation("phase changes by pi or more between samples " + std::to_string(k - 1) +
                                           " and " + std::to_string(k),
                                       std::size_t(k));
            profile.displacements_m[std::size_t(k)] = x;
            distance[std::size_t(k)] = d;
            wrapped[std::size_t(k)] = -kTwoPi * reduce_cycles(d / wavelength_m);
        }
        profile.phase_rad = unwrap_phase(wrapped);
        profile.quadratic = fit_polynomial(profile.displacements_m, profile.phase_rad, 2);
        profile.linear = fit_polynomial(profile.displacements_m, profile.phase_rad, 1);
        return profile;
    }
}

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

#include "losmimo/geometry.hpp"
#include "losmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace losmimo
{
    namespace
    {
        void require_positive(double value, const char *name)
        {
            if (!(value > 0.0) || !std::isfinite(value))
                throw InvalidArgument(std::string(name) + " must be positive and finite");
        }

        void require_positive(int value, const char *name)
        {
            if (value < 1)
                throw InvalidArgument(std::string(name) + " must be a positive integer");
        }

        double max_pairwise_distance(std::span<const Vec3> points)
        {
            double d = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i)
                for (std::size_t j = i + 1; j < points.size(); ++j)
                    d = std::max(d, (points[i] - points[j]).norm());
            return d;
        }

        Vec3 centroid(std::span<const Vec3> points)
        {
            Vec3 c = Vec3::Zero();
            for (const auto &p : points)
                c += p;
            return c / double(points.size());
        }
    }

    double wavelength_from_frequency(double frequency_hz)
    {
        require_positive(frequency_hz, "frequency");
        return kSpeedOfLight / frequency_hz;
    }

    std::string_view to_string(Archetype a)
    {
        switch (a)
        {
        case Archetype::ULA:
            return "ULA";
        case Archetype::URA:
            return "URA";
        case Archetype::UCA:
            return "UCA";
        case Archetype::AOSA:
            return "AOSA";
        case Archetype::CUSTOM:
            return "CUSTOM";
        }
        return "CUSTOM";
    }

    ArrayLayout::ArrayLayout(std::vector<Vec3> positions, Archetype archetype, double aperture_m,
                             double pitch_m, int n_subarrays)
        : positions_(std::move(positions)), archetype_(archetype), aperture_m_(aperture_m),
          pitch_m_(pitch_m), n_subarrays_(n_subarrays)
    {
        if (positions_.empty())
            throw InvalidArgument("array layout needs at least one element");
        if (!(aperture_m_ >= 0.0) || !std::isfinite(aperture_m_))
            throw InvalidArgument("aperture must be non-negative and finite");
        if (n_subarrays_ < 1 || positions_.size() % std::size_t(n_subarrays_) != 0)
            throw InvalidArgument("subarray count must divide the element count");

        double scale = 0.0;
        for (const auto &p : positions_)
        {
            if (!p.allFinite())
                throw InvalidArgument("element positions must be finite");
            scale = std::max(scale, p.cwiseAbs().maxCoeff());
        }
        Vec3 sum = Vec3::Zero();
        for (const auto &p : positions_)
            sum += p;
        if (sum.cwiseAbs().maxCoeff() / double(positions_.size()) > 1e-12 * scale)
            throw InvalidArgument("element positions must be centred on the origin");

        for (std::size_t i = 0; i < positions_.size(); ++i)
            for (std::size_t j = i + 1; j < positions_.size(); ++j)
                if (!((positions_[i] - positions_[j]).norm() > 0.0))
                    throw InvalidArgument("element positions must be pairwise distinct");
    }

    ArrayLayout ArrayLayout::scaled(double factor) const
    {
        require_positive(factor, "scale factor");
        std::vector<Vec3> p = positions_;
        for (auto &v : p)
            v *= factor;
        return ArrayLayout(std::move(p), archetype_, aperture_m_ * factor, pitch_m_ * factor, n_subarrays_);
    }

    ArrayLayout build_ula(int n, double spacing_m)
    {
        require_positive(n, "element count");
        require_positive(spacing_m, "spacing");
        std::vector<Vec3> p(std::size_t(n), Vec3::Zero());
        const double mid = 0.5 * double(n - 1);
        for (int i = 0; i < n; ++i)
            p[std::size_t(i)].x() = (double(i) - mid) * spacing_m;
        return ArrayLayout(std::move(p), Archetype::ULA, double(n) * spacing_m, spacing_m);
    }

    ArrayLayout build_ura(int n_side, double spacing_m)
    {
        require_positive(n_side, "side count");
        require_positive(spacing_m, "spacing");
        std::vector<Vec3> p;
        p.reserve(std::size_t(n_side) * std::size_t(n_side));
        const double mid = 0.5 * double(n_side - 1);
        for (int ix = 0; ix < n_side; ++ix)
            for (int iy = 0; iy < n_side; ++iy)
                p.emplace_back((double(ix) - mid) * spacing_m, (double(iy) - mid) * spacing_m, 0.0);
        return ArrayLayout(std::move(p), Archetype::URA, double(n_side) * spacing_m, spacing_m);
    }

    ArrayLayout build_uca(int n, double diameter_m, double phase_offset_rad)
    {
        require_positive(n, "element count");
        require_positive(diameter_m, "diameter");
        if (!std::isfinite(phase_offset_rad))
            throw InvalidArgument("phase offset must be finite");
        std::vector<Vec3> p;
        p.reserve(std::size_t(n));
        if (n == 1)
            p.emplace_back(Vec3::Zero()); // a lone element is its own centroid
        else
        {
            const double r = 0.5 * diameter_m;
            for (int k = 0; k < n; ++k)
            {
                const double a = phase_offset_rad + 2.0 * std::numbers::pi * double(k) / double(n);
                p.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
            }
        }
        return ArrayLayout(std::move(p), Archetype::UCA, diameter_m, diameter_m);
    }

    ArrayLayout build_aosa(int n_total, int n_subarrays, double subarray_spacing_m, double element_spacing_m)
    {
        require_positive(n_total, "element count");
        require_positive(n_subarrays, "subarray count");
        require_positive(subarray_spacing_m, "subarray spacing");
        require_positive(element_spacing_m, "element spacing");
        if (n_total % n_subarrays != 0)
            throw InvalidArgument("subarray count must divide the element count");
        if (element_spacing_m >= subarray_spacing_m)
            throw InvalidArgument("element spacing must be smaller than the subarray spacing");
        const int per = n_total / n_subarrays;
        if (n_subarrays > 1 && double(per - 1) * element_spacing_m >= subarray_spacing_m)
            throw InvalidArgument("subarray extent must be smaller than the subarray spacing");

        std::vector<Vec3> p;
        p.reserve(std::size_t(n_total));
        const double mid_sub = 0.5 * double(n_subarrays - 1);
        const double mid_el = 0.5 * double(per - 1);
        for (int s = 0; s < n_subarrays; ++s)
        {
            const double c = (double(s) - mid_sub) * subarray_spacing_m;
            for (int e = 0; e < per; ++e)
                p.emplace_back(c + (double(e) - mid_el) * element_spacing_m, 0.0, 0.0);
        }
        return ArrayLayout(std::move(p), Archetype::AOSA, double(n_subarrays) * subarray_spacing_m,
                           subarray_spacing_m, n_subarrays);
    }

    ArrayLayout build_custom(std::vector<Vec3> positions)
    {
        if (positions.empty())
            throw InvalidArgument("array layout needs at least one element");
        const Vec3 c = centroid(positions);
        for (auto &p : positions)
            p -= c;
        const double aperture = max_pairwise_distance(positions);
        return ArrayLayout(std::move(positions), Archetype::CUSTOM, aperture, aperture);
    }

    double aperture_from_positions(const ArrayLayout &layout)
    {
        const auto &p = layout.positions();
        const std::size_t n = p.size();
        switch (layout.archetype())
        {
        case Archetype::ULA:
            return n >= 2 ? double(n) * (p[1] - p[0]).norm() : layout.pitch_m();
        case Archetype::URA:
        {
            const auto side = std::size_t(std::llround(std::sqrt(double(n))));
            return side >= 2 ? double(side) * (p[1] - p[0]).norm() : layout.pitch_m();
        }
        case Archetype::UCA:
            return n >= 2 ? 2.0 * p[0].norm() : layout.pitch_m();
        case Archetype::AOSA:
        {
            const auto r = std::size_t(layout.n_subarrays());
            if (r < 2)
                return layout.pitch_m();
            const std::size_t per = n / r;
            const Vec3 c0 = centroid(std::span<const Vec3>(p.data(), per));
            const Vec3 c1 = centroid(std::span<const Vec3>(p.data() + per, per));
            return double(r) * (c1 - c0).norm();
        }
        case Archetype::CUSTOM:
            return max_pairwise_distance(p);
        }
        return layout.aperture_m();
    }

    RigidPose::RigidPose(const Mat3 &rotation_, const Vec3 &translation_)
        : rotation(rotation_), translation(translation_)
    {
        if (!rotation.allFinite() || !translation.allFinite())
            throw InvalidArgument("pose must be finite");
        const double orth = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
        if (orth > 1e-12 || std::abs(rotation.determinant() - 1.0) > 1e-12)
            throw InvalidArgument("pose rotation must be orthonormal with determinant +1");
    }

    RigidPose RigidPose::compose(const RigidPose &inner) const
    {
        return RigidPose(rotation * inner.rotation, rotation * inner.translation + translation);
    }

    Mat3 link_plane_rotation(double angle_rad)
    {
        if (angle_rad == 0.0)
            return Mat3::Identity();
        const double c = std::cos(angle_rad);
        const double s = std::sin(angle_rad);
        Mat3 r;
        r << c, 0.0, -s,
            0.0, 1.0, 0.0,
            s, 0.0, c;
        return r;
    }

    RigidPose rotate_in_link_plane(const ArrayLayout &, double angle_rad)
    {
        if (!std::isfinite(angle_rad))
            throw InvalidArgument("rotation angle must be finite");
        return RigidPose(link_plane_rotation(angle_rad), Vec3::Zero());
    }

    LinkScene::LinkScene(ArrayLayout tx, ArrayLayout rx, RigidPose tx_pose, RigidPose rx_pose,
                         double separation_m, double wavelength_m)
        : tx_(std::move(tx)), rx_(std::move(rx)), tx_pose_(std::move(tx_pose)), rx_pose_(std::move(rx_pose)),
          separation_m_(separation_m), wavelength_m_(wavelength_m)
    {
        require_positive(separation_m_, "separation");
        require_positive(wavelength_m_, "wavelength");
        const double d = (rx_pose_.translation - tx_pose_.translation).norm();
        if (std::abs(d - separation_m_) > 1e-9 * separation_m_)
            throw InvalidArgument("posed centroids are not separated by the scene distance");
    }

    LinkScene LinkScene::facing(ArrayLayout tx, ArrayLayout rx, double separation_m, double wavelength_m,
                                double tx_angle_rad, double rx_angle_rad)
    {
        require_positive(separation_m, "separation");
        RigidPose tx_pose = rotate_in_link_plane(tx, tx_angle_rad);
        RigidPose rx_pose = rotate_in_link_plane(rx, rx_angle_rad);
        rx_pose.translation = Vec3(0.0, 0.0, separation_m);
        return LinkScene(std::move(tx), std::move(rx), std::move(tx_pose), std::move(rx_pose),
                         separation_m, wavelength_m);
    }

    Vec3 LinkScene::link_axis() const
    {
        return (rx_pose_.translation - tx_pose_.translation) / separation_m_;
    }

    std::vector<Vec3> LinkScene::posed_tx() const
    {
        std::vector<Vec3> out;
        out.reserve(tx_.element_count());
        for (const auto &p : tx_.positions())
            out.push_back(tx_pose_.apply(p));
        return out;
    }

    std::vector<Vec3> LinkScene::posed_rx() const
    {
        std::vector<Vec3> out;
        out.reserve(rx_.element_count());
        for (const auto &p : rx_.positions())
            out.push_back(rx_pose_.apply(p));
        return out;
    }

    LinkScene LinkScene::swapped() const
    {
        return LinkScene(rx_, tx_, rx_pose_, tx_pose_, separation_m_, wavelength_m_);
    }

    LinkScene LinkScene::with_wavelength(double wavelength_m) const
    {
        return LinkScene(tx_, rx_, tx_pose_, rx_pose_, separation_m_, wavelength_m);
    }

    LinkScene LinkScene::with_layouts(ArrayLayout tx, ArrayLayout rx) const
    {
        return LinkScene(std::move(tx), std::move(rx), tx_pose_, rx_pose_, separation_m_, wavelength_m_);
    }

    LinkScene LinkScene::with_rotations(const Mat3 &tx_rotation, const Mat3 &rx_rotation) const
    {
        return LinkScene(tx_, rx_, RigidPose(tx_rotation, tx_pose_.translation),
                         RigidPose(rx_rotation, rx_pose_.translation), separation_m_, wavelength_m_);
    }

    LinkScene LinkScene::with_rx_translation(const Vec3 &translation) const
    {
        const double d = (translation - tx_pose_.translation).norm();
        return LinkScene(tx_, rx_, tx_pose_, RigidPose(rx_pose_.rotation, translation), d, wavelength_m_);
    }

    double broadside_projected_aperture(const ArrayLayout &layout, const Mat3 &rotation, const Vec3 &link_axis)
    {
        const Mat3 projector = Mat3::Identity() - link_axis * link_axis.transpose();
        switch (layout.archetype())
        {
        case Archetype::ULA:
        case Archetype::AOSA:
            return layout.aperture_m() * (projector * rotation.col(0)).norm();
        case Archetype::URA:
        case Archetype::UCA:
            return layout.aperture_m() * std::sqrt(std::abs(link_axis.dot(rotation.col(2))));
        case Archetype::CUSTOM:
        {
            std::vector<Vec3> projected;
            projected.reserve(layout.element_count());
            for (const auto &p : layout.positions())
                projected.push_back(projector * (rotation * p));
            return max_pairwise_distance(projected);
        }
        }
        return layout.aperture_m();
    }

    double channel_parameter(const LinkScene &scene)
    {
        const double lambda = scene.wavelength_m();
        const double distance = scene.separation_m();
        if (!(lambda > 0.0) || !(distance > 0.0))
            throw InvalidArgument("wavelength and distance must be positive");
        const Vec3 axis = scene.link_axis();
        const double lt = broadside_projected_aperture(scene.tx(), scene.tx_pose().rotation, axis);
        const double lr = broadside_projected_aperture(scene.rx(), scene.rx_pose().rotation, axis);
        const auto n_min = double(std::min(scene.tx().element_count(), scene.rx().element_count()));
        return lt * lr / (lambda * distance * n_min);
    }
}

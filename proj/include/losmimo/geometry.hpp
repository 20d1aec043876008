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

#ifndef LOSMIMO_GEOMETRY_HPP
#define LOSMIMO_GEOMETRY_HPP

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace losmimo
{
    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;

    inline constexpr double kSpeedOfLight = 299792458.0; // [m/s]

    // Wavelength in [m] for a carrier frequency in [Hz]
    double wavelength_from_frequency(double frequency_hz);

    enum class Archetype
    {
        ULA,
        URA,
        UCA,
        AOSA,
        CUSTOM
    };

    std::string_view to_string(Archetype a);

    // Ordered antenna positions in a local frame centred on the array centroid.
    //
    // Aperture conventions (broadside, unrotated):
    //   ULA   n * spacing
    //   URA   n_side * spacing (side of the square)
    //   UCA   diameter of the circle through the element centres
    //   AOSA  n_subarrays * subarray spacing
    //   CUSTOM  largest pairwise element distance
    //
    // `pitch_m` keeps the construction length (spacing, diameter or subarray spacing) so the
    // aperture of single-element and single-cluster layouts can still be reproduced.
    class ArrayLayout
    {
    public:
        ArrayLayout(std::vector<Vec3> positions, Archetype archetype, double aperture_m,
                    double pitch_m = 0.0, int n_subarrays = 1);

        const std::vector<Vec3> &positions() const noexcept { return positions_; }
        Archetype archetype() const noexcept { return archetype_; }
        double aperture_m() const noexcept { return aperture_m_; }
        double pitch_m() const noexcept { return pitch_m_; }
        int n_subarrays() const noexcept { return n_subarrays_; }
        std::size_t element_count() const noexcept { return positions_.size(); }

        // Same layout with every length multiplied by `factor` (> 0)
        ArrayLayout scaled(double factor) const;

    private:
        std::vector<Vec3> positions_;
        Archetype archetype_;
        double aperture_m_;
        double pitch_m_;
        int n_subarrays_;
    };

    ArrayLayout build_ula(int n, double spacing_m);
    ArrayLayout build_ura(int n_side, double spacing_m);
    ArrayLayout build_uca(int n, double diameter_m, double phase_offset_rad = 0.0);
    ArrayLayout build_aosa(int n_total, int n_subarrays, double subarray_spacing_m, double element_spacing_m);

    // Arbitrary positions; translated so that the centroid sits at the origin
    ArrayLayout build_custom(std::vector<Vec3> positions);

    // Aperture recomputed from the element positions with the archetype's convention
    double aperture_from_positions(const ArrayLayout &layout);

    struct RigidPose
    {
        Mat3 rotation = Mat3::Identity();
        Vec3 translation = Vec3::Zero();

        RigidPose() = default;
        RigidPose(const Mat3 &rotation, const Vec3 &translation);

        Vec3 apply(const Vec3 &p) const { return rotation * p + translation; }
        RigidPose compose(const RigidPose &inner) const; // this * inner
    };

    // Rotation of the local x-axis towards the link axis (+z) inside the x-z plane.
    // 0 is broadside, pi/2 is endfire. The returned pose has no translation.
    RigidPose rotate_in_link_plane(const ArrayLayout &layout, double angle_rad);
    Mat3 link_plane_rotation(double angle_rad);

    // Two posed arrays facing each other across a distance, at one wavelength.
    class LinkScene
    {
    public:
        LinkScene(ArrayLayout tx, ArrayLayout rx, RigidPose tx_pose, RigidPose rx_pose,
                  double separation_m, double wavelength_m);

        // tx centroid at the origin, rx centroid at (0, 0, separation); each array rotated in the link plane
        static LinkScene facing(ArrayLayout tx, ArrayLayout rx, double separation_m, double wavelength_m,
                                double tx_angle_rad = 0.0, double rx_angle_rad = 0.0);

        const ArrayLayout &tx() const noexcept { return tx_; }
        const ArrayLayout &rx() const noexcept { return rx_; }
        const RigidPose &tx_pose() const noexcept { return tx_pose_; }
        const RigidPose &rx_pose() const noexcept { return rx_pose_; }
        double separation_m() const noexcept { return separation_m_; }
        double wavelength_m() const noexcept { return wavelength_m_; }

        // Unit vector from the tx centroid to the rx centroid
        Vec3 link_axis() const;

        std::vector<Vec3> posed_tx() const;
        std::vector<Vec3> posed_rx() const;

        // Receive and transmit roles exchanged
        LinkScene swapped() const;

        LinkScene with_wavelength(double wavelength_m) const;
        LinkScene with_layouts(ArrayLayout tx, ArrayLayout rx) const;
        LinkScene with_rotations(const Mat3 &tx_rotation, const Mat3 &rx_rotation) const;
        LinkScene with_rx_translation(const Vec3 &translation) const;

    private:
        ArrayLayout tx_;
        ArrayLayout rx_;
        RigidPose tx_pose_;
        RigidPose rx_pose_;
        double separation_m_;
        double wavelength_m_;
    };

    // Aperture seen from the link axis when the array is posed with `rotation`
    double broadside_projected_aperture(const ArrayLayout &layout, const Mat3 &rotation, const Vec3 &link_axis);

    // eta = (projected tx aperture)(projected rx aperture) / (lambda D N_min)
    double channel_parameter(const LinkScene &scene);
}

#endif

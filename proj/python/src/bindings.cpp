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

#include "losmimo/capacity.hpp"
#include "losmimo/channel.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/geometry.hpp"
#include "losmimo/optimize.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

namespace py = pybind11;
using namespace losmimo;

namespace
{
    Eigen::MatrixX3d to_matrix(const std::vector<Vec3> &points)
    {
        Eigen::MatrixX3d m(Eigen::Index(points.size()), 3);
        for (std::size_t i = 0; i < points.size(); ++i)
            m.row(Eigen::Index(i)) = points[i].transpose();
        return m;
    }

    std::vector<Vec3> from_matrix(const Eigen::MatrixX3d &m)
    {
        std::vector<Vec3> points;
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            points.emplace_back(m.row(i).transpose());
        return points;
    }

    GainSpectrum spectrum_from(const std::vector<double> &gains, std::optional<int> n_t, std::optional<int> n_r)
    {
        if (n_t && n_r)
            return GainSpectrum(gains, *n_t, *n_r);
        return GainSpectrum(gains);
    }

    py::dict report_dict(const RateReport &r)
    {
        py::dict d;
        d["snr_db"] = r.snr_db;
        d["snr_linear"] = r.snr_linear;
        d["se_bpshz"] = r.spectral_efficiency_bpshz;
        d["ub_bpshz"] = r.upper_bound_bpshz;
        d["ub_integer_bpshz"] = r.integer_bound_bpshz;
        d["active_rank"] = r.active_rank;
        d["allocation"] = r.allocation.fractions;
        return d;
    }

    py::list plan_list(const ArchitecturePlan &plan)
    {
        py::list out;
        for (const auto &e : plan.entries)
        {
            py::dict d = report_dict(e.report);
            d["snr_db"] = e.snr_db;
            d["config_descriptor"] = e.descriptor;
            d["config_value"] = e.config_value;
            out.append(d);
        }
        return out;
    }

    SweepVariable parse_variable(const std::string &name)
    {
        for (auto v : {SweepVariable::SNR_DB, SweepVariable::ETA, SweepVariable::FREQUENCY_HZ, SweepVariable::ROTATION_RAD,
                       SweepVariable::TILT_RAD, SweepVariable::OFFSET_M})
            if (to_string(v) == name)
                return v;
        throw InvalidArgument("unknown sweep variable '" + name + "' (snr, eta, freq, rotation, tilt, offset)");
    }
}

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Line-of-sight MIMO channel models, capacity and reconfigurable array architectures";

    py::register_exception<DegenerateGeometry>(m, "DegenerateGeometry", PyExc_ValueError);
    py::register_exception<UnsupportedArchetype>(m, "UnsupportedArchetype", PyExc_TypeError);
    py::register_exception<NoSignal>(m, "NoSignal", PyExc_ValueError);
    py::register_exception<NyquistViolation>(m, "NyquistViolation", PyExc_ArithmeticError);

    py::enum_<Archetype>(m, "Archetype")
        .value("ULA", Archetype::ULA)
        .value("URA", Archetype::URA)
        .value("UCA", Archetype::UCA)
        .value("AOSA", Archetype::AOSA)
        .value("CUSTOM", Archetype::CUSTOM);

    py::enum_<WavefrontModel>(m, "WavefrontModel")
        .value("SPHERICAL", WavefrontModel::SPHERICAL)
        .value("FRESNEL", WavefrontModel::FRESNEL)
        .value("PLANAR", WavefrontModel::PLANAR);

    py::enum_<Validity>(m, "Validity")
        .value("PLANAR_OK", Validity::PLANAR_OK)
        .value("SPHERICAL_REQUIRED", Validity::SPHERICAL_REQUIRED);

    py::class_<ArrayLayout>(m, "ArrayLayout")
        .def_property_readonly("positions", [](const ArrayLayout &a) { return to_matrix(a.positions()); })
        .def_property_readonly("archetype", &ArrayLayout::archetype)
        .def_property_readonly("aperture_m", &ArrayLayout::aperture_m)
        .def_property_readonly("element_count", &ArrayLayout::element_count)
        .def_property_readonly("n_subarrays", &ArrayLayout::n_subarrays)
        .def("scaled", &ArrayLayout::scaled, py::arg("factor"))
        .def("__repr__", [](const ArrayLayout &a) {
            return "<ArrayLayout " + std::string(to_string(a.archetype())) + " n=" + std::to_string(a.element_count()) +
                   " aperture=" + std::to_string(a.aperture_m()) + " m>";
        });

    m.def("build_ula", &build_ula, py::arg("n"), py::arg("spacing_m"));
    m.def("build_ura", &build_ura, py::arg("n_side"), py::arg("spacing_m"));
    m.def("build_uca", &build_uca, py::arg("n"), py::arg("diameter_m"), py::arg("phase_offset_rad") = 0.0);
    m.def("build_aosa", &build_aosa, py::arg("n_total"), py::arg("n_subarrays"), py::arg("subarray_spacing_m"),
          py::arg("element_spacing_m"));
    m.def("build_custom", [](const Eigen::MatrixX3d &p) { return build_custom(from_matrix(p)); }, py::arg("positions"),
          "Layout from an (N, 3) array of positions; recentred on its centroid");

    py::class_<LinkScene>(m, "LinkScene")
        .def_static("facing", &LinkScene::facing, py::arg("tx"), py::arg("rx"), py::arg("separation_m"),
                    py::arg("wavelength_m"), py::arg("tx_angle_rad") = 0.0, py::arg("rx_angle_rad") = 0.0)
        .def_property_readonly("tx", &LinkScene::tx)
        .def_property_readonly("rx", &LinkScene::rx)
        .def_property_readonly("separation_m", &LinkScene::separation_m)
        .def_property_readonly("wavelength_m", &LinkScene::wavelength_m)
        .def_property_readonly("link_axis", &LinkScene::link_axis)
        .def_property_readonly("posed_tx", [](const LinkScene &s) { return to_matrix(s.posed_tx()); })
        .def_property_readonly("posed_rx", [](const LinkScene &s) { return to_matrix(s.posed_rx()); })
        .def("swapped", &LinkScene::swapped)
        .def("with_wavelength", &LinkScene::with_wavelength, py::arg("wavelength_m"))
        .def("with_rx_translation", &LinkScene::with_rx_translation, py::arg("translation"));

    m.def("channel_parameter", &channel_parameter, py::arg("scene"));
    m.def("distance_matrix", &distance_matrix, py::arg("scene"));
    m.def("channel_matrix", [](const LinkScene &s, WavefrontModel model) { return channel_matrix(s, model).entries; },
          py::arg("scene"), py::arg("model") = WavefrontModel::SPHERICAL);
    m.def("classify_validity", py::overload_cast<double, double, double, double>(&classify_validity),
          py::arg("tx_aperture_m"), py::arg("rx_aperture_m"), py::arg("wavelength_m"), py::arg("distance_m"));
    m.def("classify_validity", py::overload_cast<const LinkScene &>(&classify_validity), py::arg("scene"));

    m.def(
        "phase_profile",
        [](const Vec3 &tx, const Vec3 &start, double step, int n, const Vec3 &dir, double lambda) {
            const auto p = phase_profile(tx, start, step, n, dir, lambda);
            py::dict d;
            d["displacements_m"] = p.displacements_m;
            d["phase_rad"] = p.phase_rad;
            d["quadratic"] = p.quadratic.coefficients;
            d["linear"] = p.linear.coefficients;
            d["r2_quadratic"] = p.r2_quadratic();
            d["r2_linear"] = p.r2_linear();
            return d;
        },
        py::arg("tx_point"), py::arg("rx_start"), py::arg("step_m"), py::arg("n_steps"), py::arg("step_direction"),
        py::arg("wavelength_m"));

    m.def("db_to_linear", &db_to_linear, py::arg("db"));
    m.def("linear_to_db", &linear_to_db, py::arg("linear"));
    m.def("gain_spectrum", [](const Eigen::MatrixXcd &h) { return gain_spectrum(h).gains(); }, py::arg("h"),
          "Squared singular values of a channel matrix, descending");
    m.def(
        "waterfilling",
        [](const std::vector<double> &g, double snr, std::optional<int> n_t, std::optional<int> n_r) {
            const auto w = waterfilling(spectrum_from(g, n_t, n_r), snr);
            py::dict d;
            d["allocation"] = w.allocation.fractions;
            d["se_bpshz"] = w.spectral_efficiency_bpshz;
            d["active_rank"] = w.active_rank;
            return d;
        },
        py::arg("gains"), py::arg("snr_linear"), py::arg("n_t") = py::none(), py::arg("n_r") = py::none());
    m.def(
        "uniform_rate",
        [](const std::vector<double> &g, double snr, int rank) { return uniform_rate(GainSpectrum(g), snr, rank); },
        py::arg("gains"), py::arg("snr_linear"), py::arg("rank"));
    m.def("polarized_rate", py::overload_cast<int, int, double, double>(&polarized_rate), py::arg("n_t"), py::arg("n_r"),
          py::arg("rank"), py::arg("snr_linear"));
    m.def("capacity_upper_bound", &capacity_upper_bound, py::arg("n_t"), py::arg("n_r"), py::arg("snr_linear"));
    m.def("integer_capacity_bound", &integer_capacity_bound, py::arg("n_t"), py::arg("n_r"), py::arg("snr_linear"));
    m.def(
        "rate_report",
        [](const Eigen::MatrixXcd &h, double snr) { return report_dict(rate_report(gain_spectrum(h), snr)); },
        py::arg("h"), py::arg("snr_linear"));

    m.def(
        "optimize_rotation",
        [](const LinkScene &s, double snr, WavefrontModel model, bool independent) {
            const auto r = optimize_rotation(s, snr, model, independent ? RotationMode::INDEPENDENT : RotationMode::SYMMETRIC);
            py::dict d = report_dict(r.report);
            d["tx_angle_rad"] = r.tx_angle_rad;
            d["rx_angle_rad"] = r.rx_angle_rad;
            return d;
        },
        py::arg("scene"), py::arg("snr_linear"), py::arg("model") = WavefrontModel::FRESNEL, py::arg("independent") = false);
    m.def(
        "fixed_angle_plan",
        [](const LinkScene &s, const std::vector<double> &angles, const std::vector<double> &snr_db, WavefrontModel model) {
            return plan_list(fixed_angle_plan(s, angles, snr_db, model));
        },
        py::arg("scene"), py::arg("angles_rad"), py::arg("snr_grid_db"), py::arg("model") = WavefrontModel::FRESNEL);
    m.def(
        "select_fixed_angles",
        [](const LinkScene &s, int k, const std::vector<double> &snr_db, WavefrontModel model) {
            const auto sel = select_fixed_angles(s, k, snr_db, model);
            py::dict d;
            d["angles_rad"] = sel.angles_rad;
            d["worst_relative_gap"] = sel.worst_relative_gap;
            return d;
        },
        py::arg("scene"), py::arg("k"), py::arg("snr_grid_db"), py::arg("model") = WavefrontModel::FRESNEL);
    m.def(
        "aosa_schedule",
        [](int n, const LinkScene &s, const std::vector<double> &snr_db, WavefrontModel model, std::optional<double> e) {
            return plan_list(aosa_schedule(n, s, snr_db, model, e));
        },
        py::arg("n_total"), py::arg("scene_template"), py::arg("snr_grid_db"), py::arg("model") = WavefrontModel::FRESNEL,
        py::arg("element_spacing_m") = py::none());
    m.def(
        "sweep",
        [](const std::string &variable, const std::vector<double> &grid, const LinkScene &scene, WavefrontModel model,
           double snr_db, unsigned threads) {
            std::vector<SweepPoint> points;
            {
                py::gil_scoped_release release;
                points = sweep(SweepSpec{parse_variable(variable), grid, scene, model, snr_db}, threads);
            }
            py::list out;
            for (const auto &p : points)
            {
                py::dict d = p.report ? report_dict(*p.report) : py::dict();
                d["x_value"] = p.x_value;
                d["snr_db"] = p.snr_db;
                d["config_descriptor"] = p.descriptor;
                if (!p.report)
                    d["error"] = p.error;
                out.append(d);
            }
            return out;
        },
        py::arg("variable"), py::arg("grid"), py::arg("scene"), py::arg("model") = WavefrontModel::FRESNEL,
        py::arg("snr_db") = 10.0, py::arg("threads") = 0u);
}

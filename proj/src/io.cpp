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

#include "losmimo/io.hpp"
#include "losmimo/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace losmimo::io
{
    using nlohmann::json;

    namespace
    {
        std::string join_fractions(const PowerAllocation &a)
        {
            std::string out;
            for (std::size_t i = 0; i < a.fractions.size(); ++i)
            {
                if (i > 0)
                    out += ';';
                out += format_double(a.fractions[i]);
            }
            return out;
        }

        json report_json(const RateReport &r)
        {
            return json{{"snr_db", r.snr_db},
                        {"se_bpshz", r.spectral_efficiency_bpshz},
                        {"ub_bpshz", r.upper_bound_bpshz},
                        {"ub_integer_bpshz", r.integer_bound_bpshz},
                        {"active_rank", r.active_rank},
                        {"allocation", r.allocation.fractions}};
        }

        // descriptors end up in an unquoted CSV field
        std::string csv_safe(std::string s)
        {
            std::replace(s.begin(), s.end(), ',', ';');
            std::replace(s.begin(), s.end(), '\n', ' ');
            return s;
        }
    }

    std::string format_double(double x)
    {
        // no signed zeros in tables
        return fmt::format("{:.17g}", x == 0.0 ? 0.0 : x);
    }

    void write_channel_csv(std::ostream &os, const ChannelMatrix &h)
    {
        os << "n,m,re,im\n";
        for (Eigen::Index n = 0; n < h.n_r(); ++n)
            for (Eigen::Index m = 0; m < h.n_t(); ++m)
                os << (n + 1) << ',' << (m + 1) << ',' << format_double(h.entries(n, m).real()) << ','
                   << format_double(h.entries(n, m).imag()) << '\n';
    }

    std::string channel_sidecar_json(const ChannelMatrix &h)
    {
        const json j{{"n_r", h.n_r()}, {"n_t", h.n_t()}, {"wavelength_m", h.wavelength_m}, {"model", to_string(h.model)}};
        return j.dump(2) + "\n";
    }

    std::string channel_to_json(const ChannelMatrix &h)
    {
        json re = json::array(), im = json::array();
        for (Eigen::Index n = 0; n < h.n_r(); ++n)
        {
            json row_re = json::array(), row_im = json::array();
            for (Eigen::Index m = 0; m < h.n_t(); ++m)
            {
                row_re.push_back(h.entries(n, m).real());
                row_im.push_back(h.entries(n, m).imag());
            }
            re.push_back(std::move(row_re));
            im.push_back(std::move(row_im));
        }
        const json j{{"n_r", h.n_r()}, {"n_t", h.n_t()}, {"wavelength_m", h.wavelength_m},
                     {"model", to_string(h.model)}, {"re", std::move(re)}, {"im", std::move(im)}};
        return j.dump(2) + "\n";
    }

    ChannelMatrix channel_from_json(std::string_view text)
    {
        try
        {
            const json j = json::parse(text);
            ChannelMatrix h;
            const auto n_r = j.at("n_r").get<Eigen::Index>();
            const auto n_t = j.at("n_t").get<Eigen::Index>();
            h.wavelength_m = j.at("wavelength_m").get<double>();
            const auto model = parse_wavefront_model(j.at("model").get<std::string>());
            if (!model)
                throw InvalidArgument("unknown wavefront model in channel JSON");
            h.model = *model;
            const json &re = j.at("re");
            const json &im = j.at("im");
            if (Eigen::Index(re.size()) != n_r || Eigen::Index(im.size()) != n_r)
                throw InvalidArgument("channel JSON row count does not match n_r");
            h.entries.resize(n_r, n_t);
            for (Eigen::Index n = 0; n < n_r; ++n)
            {
                if (Eigen::Index(re[std::size_t(n)].size()) != n_t || Eigen::Index(im[std::size_t(n)].size()) != n_t)
                    throw InvalidArgument("channel JSON column count does not match n_t");
                for (Eigen::Index m = 0; m < n_t; ++m)
                    h.entries(n, m) = {re[std::size_t(n)][std::size_t(m)].get<double>(),
                                       im[std::size_t(n)][std::size_t(m)].get<double>()};
            }
            return h;
        }
        catch (const json::exception &e)
        {
            throw InvalidArgument(std::string("malformed channel JSON: ") + e.what());
        }
    }

    void write_phase_profile_csv(std::ostream &os, const PhaseProfile &profile)
    {
        os << "displacement_m,phase_rad,quadratic_fit_rad,linear_fit_rad\n";
        for (std::size_t k = 0; k < profile.displacements_m.size(); ++k)
        {
            const double x = profile.displacements_m[k];
            os << format_double(x) << ',' << format_double(profile.phase_rad[k]) << ','
               << format_double(profile.quadratic(x)) << ',' << format_double(profile.linear(x)) << '\n';
        }
    }

    std::string phase_profile_summary_json(const PhaseProfile &profile, double c2_predicted)
    {
        const json j{{"c2_fitted", profile.c2()},
                     {"c2_predicted", c2_predicted},
                     {"r2_quadratic", profile.r2_quadratic()},
                     {"r2_linear", profile.r2_linear()}};
        return j.dump(2) + "\n";
    }

    void write_rate_reports_csv(std::ostream &os, std::span<const RateReport> reports)
    {
        os << "snr_db,se_bpshz,ub_bpshz,active_rank,allocation\n";
        for (const auto &r : reports)
            os << format_double(r.snr_db) << ',' << format_double(r.spectral_efficiency_bpshz) << ','
               << format_double(r.upper_bound_bpshz) << ',' << r.active_rank << ',' << join_fractions(r.allocation)
               << '\n';
    }

    std::string rate_reports_json(std::span<const RateReport> reports)
    {
        json arr = json::array();
        for (const auto &r : reports)
            arr.push_back(report_json(r));
        return arr.dump(2) + "\n";
    }

    std::vector<TableRow> table_rows(std::span<const SweepPoint> points)
    {
        std::vector<TableRow> rows;
        rows.reserve(points.size());
        for (const auto &p : points)
            rows.push_back({p.x_value, p.snr_db, p.report,
                            p.report ? p.descriptor : p.descriptor + ";error=" + p.error});
        return rows;
    }

    std::vector<TableRow> table_rows(const ArchitecturePlan &plan)
    {
        std::vector<TableRow> rows;
        rows.reserve(plan.entries.size());
        for (const auto &e : plan.entries)
            rows.push_back({e.snr_db, e.snr_db, e.report, e.descriptor});
        return rows;
    }

    void write_table_csv(std::ostream &os, std::span<const TableRow> rows)
    {
        os << "x_value,snr_db,se_bpshz,ub_bpshz,active_rank,config_descriptor\n";
        for (const auto &r : rows)
        {
            os << format_double(r.x_value) << ',' << format_double(r.snr_db) << ',';
            if (r.report)
                os << format_double(r.report->spectral_efficiency_bpshz) << ','
                   << format_double(r.report->upper_bound_bpshz) << ',' << r.report->active_rank;
            else
                os << "nan,nan,0";
            os << ',' << csv_safe(r.config_descriptor) << '\n';
        }
    }

    std::string table_json(std::span<const TableRow> rows)
    {
        json arr = json::array();
        for (const auto &r : rows)
        {
            json o{{"x_value", r.x_value}, {"snr_db", r.snr_db}, {"config_descriptor", r.config_descriptor}};
            if (r.report)
            {
                o["se_bpshz"] = r.report->spectral_efficiency_bpshz;
                o["ub_bpshz"] = r.report->upper_bound_bpshz;
                o["active_rank"] = r.report->active_rank;
            }
            else
            {
                o["se_bpshz"] = nullptr;
                o["ub_bpshz"] = nullptr;
                o["active_rank"] = 0;
            }
            arr.push_back(std::move(o));
        }
        return arr.dump(2) + "\n";
    }
}

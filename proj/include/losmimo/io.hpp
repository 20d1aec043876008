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

#ifndef LOSMIMO_IO_HPP
#define LOSMIMO_IO_HPP

#include "losmimo/capacity.hpp"
#include "losmimo/channel.hpp"
#include "losmimo/optimize.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace losmimo::io
{
    // 17 significant digits, as every floating-point field is written
    std::string format_double(double x);

    // CSV `n,m,re,im` with 1-based indices, row-major
    void write_channel_csv(std::ostream &os, const ChannelMatrix &h);
    // {n_r, n_t, wavelength_m, model}
    std::string channel_sidecar_json(const ChannelMatrix &h);
    // sidecar fields plus `re` and `im` as nested row arrays
    std::string channel_to_json(const ChannelMatrix &h);
    ChannelMatrix channel_from_json(std::string_view text);

    // CSV `displacement_m,phase_rad,quadratic_fit_rad,linear_fit_rad`
    void write_phase_profile_csv(std::ostream &os, const PhaseProfile &profile);
    // {c2_fitted, c2_predicted, r2_quadratic, r2_linear}
    std::string phase_profile_summary_json(const PhaseProfile &profile, double c2_predicted);

    // CSV `snr_db,se_bpshz,ub_bpshz,active_rank,allocation` (allocation fractions joined by ';')
    void write_rate_reports_csv(std::ostream &os, std::span<const RateReport> reports);
    // array of {snr_db, se_bpshz, ub_bpshz, ub_integer_bpshz, active_rank, allocation[]}
    std::string rate_reports_json(std::span<const RateReport> reports);

    struct TableRow
    {
        double x_value = 0.0;
        double snr_db = 0.0;
        std::optional<RateReport> report;
        std::string config_descriptor;
    };

    std::vector<TableRow> table_rows(std::span<const SweepPoint> points);
    std::vector<TableRow> table_rows(const ArchitecturePlan &plan); // x_value = snr_db

    // CSV `x_value,snr_db,se_bpshz,ub_bpshz,active_rank,config_descriptor`; failed rows carry nan and `error=...`
    void write_table_csv(std::ostream &os, std::span<const TableRow> rows);
    std::string table_json(std::span<const TableRow> rows);
}

#endif

// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace MIMO precoding and power-leakage analysis for lens antenna arrays
// Copyright (C) 2026 beamsim contributors
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

#include <armadillo>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "beamsim/channel.hpp"
#include "beamsim/precoders.hpp"

namespace beamsim {

// Complex matrices are serialized as {rows, cols, data} with data holding interleaved
// re/im entries in column-major order, so any JSON reader can rebuild them bit-for-bit.

inline nlohmann::json cx_mat_to_json(const arma::cx_mat &m)
{
    nlohmann::json j;
    j["rows"] = m.n_rows;
    j["cols"] = m.n_cols;
    std::vector<double> data;
    data.reserve(2 * m.n_elem);
    for (arma::uword c = 0; c < m.n_cols; ++c)
        for (arma::uword r = 0; r < m.n_rows; ++r) {
            data.push_back(m(r, c).real());
            data.push_back(m(r, c).imag());
        }
    j["data"] = std::move(data);
    return j;
}

inline arma::cx_mat cx_mat_from_json(const nlohmann::json &j)
{
    const auto rows = j.at("rows").get<arma::uword>();
    const auto cols = j.at("cols").get<arma::uword>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != 2 * rows * cols)
        throw std::invalid_argument("cx_mat_from_json: data length mismatch");
    arma::cx_mat m(rows, cols);
    std::size_t i = 0;
    for (arma::uword c = 0; c < cols; ++c)
        for (arma::uword r = 0; r < rows; ++r) {
            m(r, c) = {data[i], data[i + 1]};
            i += 2;
        }
    return m;
}

inline nlohmann::json geometry_to_json(const ArrayGeometry &g)
{
    nlohmann::json j;
    if (g.is_upa()) {
        j["kind"] = "upa";
        j["n1"] = g.n1();
        j["n2"] = g.n2();
    } else {
        j["kind"] = "ula";
        j["n"] = g.size();
    }
    return j;
}

inline ArrayGeometry geometry_from_json(const nlohmann::json &j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "ula")
        return ArrayGeometry::ula(j.at("n").get<arma::uword>());
    if (kind == "upa")
        return ArrayGeometry::upa(j.at("n1").get<arma::uword>(), j.at("n2").get<arma::uword>());
    throw std::invalid_argument("geometry_from_json: kind must be 'ula' or 'upa'");
}

inline nlohmann::json channel_to_json(const MultiuserChannel &ch)
{
    nlohmann::json j;
    j["geometry"] = geometry_to_json(ch.geometry);
    nlohmann::json users = nlohmann::json::array();
    for (const auto &u : ch.params) {
        nlohmann::json ju;
        ju["mu"] = u.mu;
        nlohmann::json cl = nlohmann::json::array();
        for (const auto &c : u.clusters) {
            cl.push_back({{"mean_az", c.mean_aod.az},
                          {"mean_el", c.mean_aod.el},
                          {"spread_az", c.spread_az},
                          {"spread_el", c.spread_el},
                          {"num_paths", c.num_paths}});
        }
        ju["clusters"] = std::move(cl);
        users.push_back(std::move(ju));
    }
    j["users"] = std::move(users);
    j["h"] = cx_mat_to_json(ch.h);
    j["hb"] = cx_mat_to_json(ch.hb);
    if (!ch.grid_centers.empty())
        j["grid_centers"] = ch.grid_centers;
    return j;
}

inline MultiuserChannel channel_from_json(const nlohmann::json &j)
{
    MultiuserChannel ch;
    ch.geometry = geometry_from_json(j.at("geometry"));
    for (const auto &ju : j.at("users")) {
        UserChannelParams u;
        u.mu = ju.at("mu").get<double>();
        for (const auto &jc : ju.at("clusters")) {
            ClusterSpec c(SpatialDirection(jc.at("mean_az").get<double>(),
                                           jc.at("mean_el").get<double>()),
                          jc.at("spread_az").get<double>(), jc.at("spread_el").get<double>(),
                          jc.at("num_paths").get<arma::uword>());
            u.clusters.push_back(c);
        }
        ch.params.push_back(std::move(u));
    }
    ch.h = cx_mat_from_json(j.at("h"));
    ch.hb = cx_mat_from_json(j.at("hb"));
    if (j.contains("grid_centers"))
        ch.grid_centers = j.at("grid_centers").get<std::vector<arma::uword>>();
    return ch;
}

inline nlohmann::json precoder_to_json(const PrecoderPair &p)
{
    nlohmann::json j;
    j["scheme"] = std::string(scheme_name(p.scheme));
    j["assignment"] = {{"per_user", p.assignment.per_user}};
    j["p_rf"] = cx_mat_to_json(p.p_rf);
    j["p_bb"] = cx_mat_to_json(p.p_bb);
    return j;
}

inline PrecoderPair precoder_from_json(const nlohmann::json &j)
{
    PrecoderPair p;
    const auto s = j.at("scheme").get<std::string>();
    if (s == "ba")
        p.scheme = Scheme::BA;
    else if (s == "sb")
        p.scheme = Scheme::SB;
    else if (s == "mbmrf")
        p.scheme = Scheme::MBMRF;
    else if (s == "ideal")
        p.scheme = Scheme::IDEAL;
    else
        throw std::invalid_argument("precoder_from_json: unknown scheme");
    p.assignment.per_user =
        j.at("assignment").at("per_user").get<std::vector<std::vector<arma::uword>>>();
    p.p_rf = cx_mat_from_json(j.at("p_rf"));
    p.p_bb = cx_mat_from_json(j.at("p_bb"));
    return p;
}

inline void write_json_file(const nlohmann::json &j, const std::string &path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("write_json_file: cannot open " + path);
    os << j.dump(2) << "\n";
}

inline nlohmann::json read_json_file(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("read_json_file: cannot open " + path);
    nlohmann::json j;
    is >> j;
    return j;
}

} // namespace beamsim

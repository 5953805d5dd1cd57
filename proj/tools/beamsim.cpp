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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "beamsim/bounds.hpp"
#include "beamsim/harness.hpp"
#include "beamsim/leakage.hpp"

namespace {

beamsim::ArrayGeometry parse_geometry(const std::string &spec)
{
    // ula:<N> or upa:<N1>x<N2>
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--geometry", "expected ula:<N> or upa:<N1>x<N2>");
    const std::string kind = spec.substr(0, colon);
    const std::string dims = spec.substr(colon + 1);
    try {
        if (kind == "ula")
            return beamsim::ArrayGeometry::ula(std::stoul(dims));
        if (kind == "upa") {
            const auto x = dims.find('x');
            if (x == std::string::npos)
                throw std::invalid_argument("missing 'x'");
            return beamsim::ArrayGeometry::upa(std::stoul(dims.substr(0, x)),
                                               std::stoul(dims.substr(x + 1)));
        }
    } catch (const std::exception &e) {
        throw CLI::ValidationError("--geometry", e.what());
    }
    throw CLI::ValidationError("--geometry", "kind must be 'ula' or 'upa'");
}

std::ostream &open_output(std::ofstream &file, const std::string &path)
{
    if (path.empty() || path == "-")
        return std::cout;
    file.open(path);
    if (!file)
        throw std::runtime_error("cannot open output file: " + path);
    return file;
}

int cmd_simulate(const std::string &config_path, const std::string &out_path,
                 const std::string &format, std::optional<std::uint64_t> seed,
                 std::optional<unsigned> threads, const std::string &summary_path)
{
    auto cfg = beamsim::config_from_json(beamsim::read_json_file(config_path));
    if (seed)
        cfg.seed = *seed;
    if (threads)
        cfg.threads = *threads;

    const auto records = beamsim::run_experiment(cfg);

    std::ofstream file;
    std::ostream &os = open_output(file, out_path);
    if (format == "csv")
        beamsim::emit_csv(records, os);
    else if (format == "json")
        os << beamsim::records_to_json(records, cfg).dump(2) << "\n";
    else
        throw std::runtime_error("format must be csv or json");

    if (!summary_path.empty()) {
        std::ofstream sf;
        std::ostream &ss = open_output(sf, summary_path);
        beamsim::emit_summary_csv(beamsim::summarize(records), ss);
    }
    return 0;
}

int cmd_leakage(const std::string &geometry_spec, unsigned sweep_offsets,
                const std::string &out_path)
{
    const auto g = parse_geometry(geometry_spec);
    std::ofstream file;
    std::ostream &os = open_output(file, out_path);

    const beamsim::LensTransform lens(g);
    std::string label = g.is_upa() ? std::to_string(g.n1()) + "x" + std::to_string(g.n2())
                                   : std::to_string(g.size());
    os << "geometry,offset_cells,eta\n";
    // Offset from a grid direction in units of one grid cell, 0 .. 0.5 (the worst case),
    // applied per dimension.
    const auto az_dirs = beamsim::grid_directions(g.n1());
    const auto el_dirs = beamsim::grid_directions(g.n2());
    for (unsigned s = 0; s <= sweep_offsets; ++s) {
        const double frac = 0.5 * static_cast<double>(s) / static_cast<double>(sweep_offsets);
        beamsim::SpatialDirection dir;
        dir.az = az_dirs[g.n1() / 2 - 1] + frac / static_cast<double>(g.n1());
        if (g.is_upa())
            dir.el = el_dirs[g.n2() / 2 - 1] + frac / static_cast<double>(g.n2());
        const arma::cx_vec hb = lens.apply(beamsim::steering_vector(g, dir));
        const auto rep = beamsim::leakage_ratio(hb);
        char line[128];
        std::snprintf(line, sizeof(line), "%s,%.10g,%.10g\n", label.c_str(), frac, rep.eta);
        os << line;
    }
    return 0;
}

int cmd_bounds(const std::string &config_path, const std::string &out_path)
{
    auto cfg = beamsim::config_from_json(beamsim::read_json_file(config_path));
    if (cfg.sweep.kind != beamsim::SweepAxis::Kind::BeamCount)
        throw std::runtime_error("bounds: config must sweep beam_count");
    if (!cfg.scenario.grid_align || cfg.scenario.shadowing.enabled)
        throw std::runtime_error(
            "bounds: config must set channel.grid_align=true and disable shadowing "
            "(the analytical bounds assume grid-aligned clusters and deterministic gains)");
    if (cfg.scenario.geometry.is_upa())
        throw std::runtime_error("bounds: ULA geometry required");

    const auto records = beamsim::run_experiment(cfg);
    const auto rows = beamsim::summarize(records);

    const arma::uword n = cfg.scenario.geometry.size();
    const double mu = cfg.scenario.mu_override
                          ? *cfg.scenario.mu_override
                          : beamsim::large_scale_fading(cfg.scenario.distance_m, 0.0);
    const double sigma2 = beamsim::noise_power(cfg.bandwidth_hz, cfg.noise_psd_dbm_per_hz);
    const double p_t_w = std::pow(10.0, cfg.transmit_power_dbm / 10.0) * 1e-3;
    const long long w = std::llround(cfg.scenario.effective_spread_az() * static_cast<double>(n));

    std::ofstream file;
    std::ostream &os = open_output(file, out_path);
    os << "beam_count,bound_ba_exact,bound_ba_approx,bound_mbmrf_exact,bound_mbmrf_approx,"
          "gap_cap,mean_ba,stderr_ba,mean_mbmrf,stderr_mbmrf\n";
    for (double value : cfg.sweep.values) {
        beamsim::BoundParams p;
        p.n = n;
        p.k = cfg.scenario.num_users;
        p.s0.assign(p.k, 0);
        p.s1.assign(p.k, w);
        p.beams.assign(p.k, static_cast<arma::uword>(value));
        p.mu.assign(p.k, mu);
        p.n_cl.assign(p.k, cfg.scenario.num_clusters);
        p.p_t = p_t_w;
        p.sigma2 = sigma2;

        const auto opt = [](const std::optional<double> &v) {
            if (!v)
                return std::string();
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.12g", *v);
            return std::string(buf);
        };
        std::optional<double> mean_ba, se_ba, mean_mb, se_mb;
        for (const auto &r : rows) {
            if (r.sweep_value != value)
                continue;
            if (r.scheme == beamsim::Scheme::BA) {
                mean_ba = r.mean_sum_rate;
                se_ba = r.stderr_sum_rate;
            } else if (r.scheme == beamsim::Scheme::MBMRF) {
                mean_mb = r.mean_sum_rate;
                se_mb = r.stderr_sum_rate;
            }
        }
        char head[220];
        std::snprintf(head, sizeof(head), "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g", value,
                      beamsim::ba_rate_bound(p, beamsim::BoundMode::Exact),
                      beamsim::ba_rate_bound(p, beamsim::BoundMode::Approx),
                      beamsim::mbmrf_rate_bound(p, beamsim::BoundMode::Exact),
                      beamsim::mbmrf_rate_bound(p, beamsim::BoundMode::Approx),
                      beamsim::rate_gap(p, beamsim::BoundMode::Approx).cap);
        os << head << ',' << opt(mean_ba) << ',' << opt(se_ba) << ',' << opt(mean_mb) << ','
           << opt(se_mb) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    // Trials are parallelized at the harness level; keep the BLAS single threaded.
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"beamspace MIMO link-level simulator (lens antenna arrays)"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_out, sim_format = "csv", sim_summary;
    std::optional<std::uint64_t> sim_seed;
    std::optional<unsigned> sim_threads;
    auto *sim = app.add_subcommand("simulate", "run a Monte Carlo experiment from a config file");
    sim->add_option("--config", sim_config, "experiment config (JSON)")->required();
    sim->add_option("--out", sim_out, "output path ('-' for stdout)")->required();
    sim->add_option("--format", sim_format, "csv|json")->default_val("csv");
    sim->add_option("--seed", sim_seed, "override the master seed");
    sim->add_option("--threads", sim_threads, "worker thread count (0 = hardware)");
    sim->add_option("--summary", sim_summary, "also write a per-point summary CSV here");

    // leakage
    std::string lk_geometry = "ula:256", lk_out;
    unsigned lk_steps = 16;
    auto *lk = app.add_subcommand("leakage", "sweep the single-path leakage ratio vs grid offset");
    lk->add_option("--geometry", lk_geometry, "ula:<N> or upa:<N1>x<N2>")->required();
    lk->add_option("--sweep-offsets", lk_steps, "number of offset steps from 0 to half a cell")
        ->default_val(16);
    lk->add_option("--out", lk_out, "output CSV path (default stdout)");

    // bounds
    std::string bd_config, bd_out;
    auto *bd = app.add_subcommand("bounds",
                                  "analytical sum-rate bounds next to Monte Carlo means");
    bd->add_option("--config", bd_config, "experiment config (JSON, beam_count sweep)")
        ->required();
    bd->add_option("--out", bd_out, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_config, sim_out, sim_format, sim_seed, sim_threads,
                                sim_summary);
        if (lk->parsed())
            return cmd_leakage(lk_geometry, lk_steps, lk_out);
        if (bd->parsed())
            return cmd_bounds(bd_config, bd_out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

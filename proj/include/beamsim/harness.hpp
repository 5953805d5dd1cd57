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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "beamsim/bounds.hpp"
#include "beamsim/channel.hpp"
#include "beamsim/matrix_io.hpp"
#include "beamsim/metrics.hpp"
#include "beamsim/precoders.hpp"
#include "beamsim/rng.hpp"

namespace beamsim {

struct SweepAxis {
    enum class Kind { TransmitPowerDbm, BeamCount };
    Kind kind = Kind::TransmitPowerDbm;
    std::vector<double> values;

    std::string_view name() const
    {
        return kind == Kind::TransmitPowerDbm ? "transmit_power_dbm" : "beam_count";
    }
};

/// How BA/MBMRF beam sets are chosen per trial. Greedy is Algorithm 1; CentralFixed bypasses
/// selection and assigns each user the fixed_beams central elements of its grid-aligned
/// cluster (the deterministic-set regime of the analytical bounds).
enum class BeamSelectionMode { Greedy, CentralFixed };

struct IuiConfig {
    bool enabled = false;
    double eta_min = 1.0;
    double decay = 1.0;
};

struct ExperimentConfig {
    ScenarioConfig scenario;
    double bandwidth_hz = 500e6;
    double noise_psd_dbm_per_hz = -174.0;
    PowerModel power;
    double transmit_power_dbm = 10.0; // used when the sweep axis is beam count
    std::vector<Scheme> schemes = {Scheme::BA, Scheme::SB, Scheme::MBMRF, Scheme::IDEAL};
    BaOptions ba;
    IuiConfig iui;
    BeamSelectionMode selection = BeamSelectionMode::Greedy;
    SweepAxis sweep;
    arma::uword trials = 500;
    std::uint64_t seed = 1;
    arma::uword threads = 0; // 0 = hardware concurrency

    void validate() const
    {
        if (trials < 1)
            throw std::invalid_argument("ExperimentConfig: trials >= 1 required");
        if (sweep.values.empty())
            throw std::invalid_argument("ExperimentConfig: sweep values must be nonempty");
        if (schemes.empty())
            throw std::invalid_argument("ExperimentConfig: no schemes requested");
        if (selection == BeamSelectionMode::CentralFixed) {
            if (!scenario.grid_align)
                throw std::invalid_argument(
                    "ExperimentConfig: central_fixed selection requires grid_align");
            if (scenario.geometry.is_upa())
                throw std::invalid_argument(
                    "ExperimentConfig: central_fixed selection supports ULA only");
        }
    }
};

struct TrialRecord {
    Scheme scheme = Scheme::BA;
    std::string sweep_name;
    double sweep_value = 0.0;
    arma::uword trial = 0;
    double sum_rate = 0.0;
    arma::vec per_user_rate;
    arma::uword b_total = 0;
    double power_w = 0.0;
    double ee = 0.0;
    std::uint64_t channel_hash = 0;
    bool feasible = true;
};

namespace detail {

inline std::uint64_t fnv1a_hash(const double *data, std::size_t count)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const auto *bytes = reinterpret_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < count * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

/// First-come work queue; item order never affects stored results (slots are preassigned).
template <class Fn>
inline void parallel_for(arma::uword n_items, arma::uword n_threads, Fn &&fn)
{
    if (n_threads == 0)
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<arma::uword>(n_threads, n_items);
    if (n_threads <= 1) {
        for (arma::uword i = 0; i < n_items; ++i)
            fn(i);
        return;
    }
    std::atomic<arma::uword> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (arma::uword t = 0; t < n_threads; ++t) {
        workers.emplace_back([&]() {
            while (true) {
                const arma::uword i = next.fetch_add(1);
                if (i >= n_items)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err)
                        err = std::current_exception();
                    next.store(n_items);
                    return;
                }
            }
        });
    }
    for (auto &w : workers)
        w.join();
    if (err)
        std::rethrow_exception(err);
}

/// Fixed beam sets for the bound-comparison regime: the b central elements nearest the
/// cluster's grid center, channel independent.
inline BeamAssignment central_fixed_assignment(const MultiuserChannel &ch, arma::uword b)
{
    if (ch.grid_centers.size() != ch.num_users())
        throw std::invalid_argument("central_fixed_assignment: scenario lacks grid centers");
    const arma::uword n = ch.geometry.size();
    BeamAssignment asgn;
    asgn.per_user.resize(ch.num_users());
    for (arma::uword k = 0; k < ch.num_users(); ++k) {
        const long long mid = static_cast<long long>(ch.grid_centers[k]);
        std::vector<arma::uword> beams;
        long long offset = 0;
        while (beams.size() < b) {
            const long long idx = mid + offset;
            beams.push_back(static_cast<arma::uword>(((idx % static_cast<long long>(n)) +
                                                      static_cast<long long>(n)) %
                                                     static_cast<long long>(n)));
            offset = (offset > 0) ? -offset : (-offset + 1); // mid, mid+1, mid-1, mid+2, ...
        }
        asgn.per_user[k] = std::move(beams);
    }
    return asgn;
}

} // namespace detail

/// Run the configured Monte Carlo experiment. Per sweep point and trial the RNG stream is
/// derived from (seed, sweep index, trial index); every requested scheme sees the same
/// channel realization. Records are ordered by (sweep index, trial, scheme) regardless of
/// the thread schedule. Infeasible scheme runs are flagged, not dropped.
inline std::vector<TrialRecord> run_experiment(const ExperimentConfig &cfg)
{
    cfg.validate();
    const arma::uword n_points = cfg.sweep.values.size();
    const arma::uword n_schemes = cfg.schemes.size();
    const LensTransform lens(cfg.scenario.geometry);
    const arma::uword n = cfg.scenario.geometry.size();
    const arma::uword k_users = cfg.scenario.num_users;

    std::vector<TrialRecord> records(n_points * cfg.trials * n_schemes);

    detail::parallel_for(n_points * cfg.trials, cfg.threads, [&](arma::uword item) {
        const arma::uword si = item / cfg.trials;
        const arma::uword ti = item % cfg.trials;
        const double sweep_value = cfg.sweep.values[si];

        double p_t_w = detail::dbm_to_watts(cfg.transmit_power_dbm);
        BaOptions opts = cfg.ba;
        if (cfg.sweep.kind == SweepAxis::Kind::TransmitPowerDbm)
            p_t_w = detail::dbm_to_watts(sweep_value);
        else
            opts.fixed_beams = static_cast<arma::uword>(sweep_value);

        Rng rng(derive_seed(cfg.seed, si, ti));
        const MultiuserChannel ch = generate_scenario(rng, cfg.scenario, lens);
        const std::uint64_t hash = detail::fnv1a_hash(
            reinterpret_cast<const double *>(ch.hb.memptr()), 2 * ch.hb.n_elem);
        const double sigma2 = noise_power(cfg.bandwidth_hz, cfg.noise_psd_dbm_per_hz);

        // BA and MBMRF share one beam assignment (like-for-like comparison).
        std::optional<BeamAssignment> shared_asgn;
        std::string selection_error;
        const bool needs_selection =
            std::find(cfg.schemes.begin(), cfg.schemes.end(), Scheme::BA) != cfg.schemes.end() ||
            std::find(cfg.schemes.begin(), cfg.schemes.end(), Scheme::MBMRF) != cfg.schemes.end();
        if (needs_selection) {
            try {
                if (cfg.selection == BeamSelectionMode::CentralFixed) {
                    if (!opts.fixed_beams)
                        throw std::invalid_argument(
                            "central_fixed selection requires a beam count (sweep or override)");
                    shared_asgn = detail::central_fixed_assignment(ch, *opts.fixed_beams);
                } else if (cfg.iui.enabled) {
                    shared_asgn = iui_aware_select(ch.geometry, ch.hb, sigma2, cfg.iui.eta_min,
                                                   opts, cfg.iui.decay);
                } else {
                    shared_asgn = select_beams(ch.geometry, ch.hb, opts);
                }
            } catch (const std::exception &e) {
                selection_error = e.what();
            }
        }

        for (arma::uword sc = 0; sc < n_schemes; ++sc) {
            const Scheme scheme = cfg.schemes[sc];
            TrialRecord rec;
            rec.scheme = scheme;
            rec.sweep_name = std::string(cfg.sweep.name());
            rec.sweep_value = sweep_value;
            rec.trial = ti;
            rec.channel_hash = hash;
            try {
                PrecoderPair pair;
                switch (scheme) {
                case Scheme::BA:
                    if (!selection_error.empty())
                        throw std::runtime_error(selection_error);
                    pair = ba_precoder_from_assignment(ch.hb, *shared_asgn, p_t_w);
                    break;
                case Scheme::MBMRF:
                    if (!selection_error.empty())
                        throw std::runtime_error(selection_error);
                    pair = mbmrf_precoder_from_assignment(ch.hb, *shared_asgn, p_t_w);
                    break;
                case Scheme::SB:
                    pair = sb_precoder(ch.hb, p_t_w);
                    break;
                case Scheme::IDEAL:
                    pair = ideal_precoder(ch.hb, p_t_w);
                    break;
                }
                const RateResult rate = sum_rate(ch.hb, pair, sigma2);
                PowerModel pm = cfg.power;
                pm.p_t = p_t_w;
                rec.b_total = pair.assignment.total();
                rec.power_w = power_consumption(scheme, k_users, n, rec.b_total, pm);
                rec.sum_rate = rate.sum_rate;
                rec.per_user_rate = rate.per_user_rate;
                rec.ee = energy_efficiency(rate, rec.power_w);
            } catch (const std::exception &) {
                rec.feasible = false;
                rec.sum_rate = std::numeric_limits<double>::quiet_NaN();
                rec.power_w = std::numeric_limits<double>::quiet_NaN();
                rec.ee = std::numeric_limits<double>::quiet_NaN();
            }
            records[(si * cfg.trials + ti) * n_schemes + sc] = std::move(rec);
        }
    });
    return records;
}

struct SummaryRow {
    Scheme scheme = Scheme::BA;
    std::string sweep_name;
    double sweep_value = 0.0;
    arma::uword count = 0;    // feasible records
    arma::uword excluded = 0; // flagged records
    std::optional<double> mean_sum_rate;
    std::optional<double> stderr_sum_rate;
    std::optional<double> mean_ee;
    std::optional<double> stderr_ee;
    std::optional<double> mean_power_w;
    std::optional<double> mean_b_total;
};

/// Per-(scheme, sweep value) mean and standard error (sample std / sqrt(count)), excluding
/// flagged records. Cells with a single record report no standard error; empty cells report
/// missing means rather than zeros.
inline std::vector<SummaryRow> summarize(const std::vector<TrialRecord> &records)
{
    std::vector<SummaryRow> rows;
    const auto find_row = [&](Scheme s, double v) -> SummaryRow & {
        for (auto &r : rows)
            if (r.scheme == s && r.sweep_value == v)
                return r;
        rows.emplace_back();
        rows.back().scheme = s;
        rows.back().sweep_value = v;
        return rows.back();
    };

    struct Acc {
        double sr = 0, sr2 = 0, ee = 0, ee2 = 0, pw = 0, bt = 0;
    };
    std::vector<Acc> accs;
    for (const auto &rec : records) {
        SummaryRow &row = find_row(rec.scheme, rec.sweep_value);
        row.sweep_name = rec.sweep_name;
        const std::size_t idx = static_cast<std::size_t>(&row - rows.data());
        if (accs.size() <= idx)
            accs.resize(rows.size());
        if (!rec.feasible) {
            ++row.excluded;
            continue;
        }
        ++row.count;
        accs[idx].sr += rec.sum_rate;
        accs[idx].sr2 += rec.sum_rate * rec.sum_rate;
        accs[idx].ee += rec.ee;
        accs[idx].ee2 += rec.ee * rec.ee;
        accs[idx].pw += rec.power_w;
        accs[idx].bt += static_cast<double>(rec.b_total);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        SummaryRow &row = rows[i];
        if (row.count == 0)
            continue;
        const double n = static_cast<double>(row.count);
        row.mean_sum_rate = accs[i].sr / n;
        row.mean_ee = accs[i].ee / n;
        row.mean_power_w = accs[i].pw / n;
        row.mean_b_total = accs[i].bt / n;
        if (row.count >= 2) {
            const double var_sr =
                std::max(0.0, (accs[i].sr2 - n * (*row.mean_sum_rate) * (*row.mean_sum_rate)) /
                                  (n - 1.0));
            const double var_ee =
                std::max(0.0, (accs[i].ee2 - n * (*row.mean_ee) * (*row.mean_ee)) / (n - 1.0));
            row.stderr_sum_rate = std::sqrt(var_sr / n);
            row.stderr_ee = std::sqrt(var_ee / n);
        }
    }
    return rows;
}

namespace detail {

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

/// Trial records as CSV. Columns are fixed: scheme, sweep_name, sweep_value, trial,
/// sum_rate_bpshz, b_total, power_w, ee_bpshz_per_w. Infeasible records appear with nan
/// values. Output is locale independent and byte-stable for a given config and seed.
inline void emit_csv(const std::vector<TrialRecord> &records, std::ostream &os)
{
    os << "scheme,sweep_name,sweep_value,trial,sum_rate_bpshz,b_total,power_w,ee_bpshz_per_w\n";
    for (const auto &r : records) {
        os << scheme_name(r.scheme) << ',' << r.sweep_name << ','
           << detail::format_double(r.sweep_value) << ',' << r.trial << ','
           << detail::format_double(r.sum_rate) << ',' << r.b_total << ','
           << detail::format_double(r.power_w) << ',' << detail::format_double(r.ee) << '\n';
    }
}

inline void emit_summary_csv(const std::vector<SummaryRow> &rows, std::ostream &os)
{
    os << "scheme,sweep_name,sweep_value,count,excluded,mean_sum_rate_bpshz,"
          "stderr_sum_rate_bpshz,mean_ee_bpshz_per_w,stderr_ee_bpshz_per_w,mean_power_w,"
          "mean_b_total\n";
    const auto opt = [](const std::optional<double> &v) {
        return v ? detail::format_double(*v) : std::string();
    };
    for (const auto &r : rows) {
        os << scheme_name(r.scheme) << ',' << r.sweep_name << ','
           << detail::format_double(r.sweep_value) << ',' << r.count << ',' << r.excluded << ','
           << opt(r.mean_sum_rate) << ',' << opt(r.stderr_sum_rate) << ',' << opt(r.mean_ee)
           << ',' << opt(r.stderr_ee) << ',' << opt(r.mean_power_w) << ','
           << opt(r.mean_b_total) << '\n';
    }
}

inline nlohmann::json record_to_json(const TrialRecord &r)
{
    nlohmann::json j;
    j["scheme"] = std::string(scheme_name(r.scheme));
    j["sweep_name"] = r.sweep_name;
    j["sweep_value"] = r.sweep_value;
    j["trial"] = r.trial;
    j["feasible"] = r.feasible;
    j["sum_rate_bpshz"] = r.sum_rate;
    j["per_user_rate_bpshz"] =
        std::vector<double>(r.per_user_rate.begin(), r.per_user_rate.end());
    j["b_total"] = r.b_total;
    j["power_w"] = r.power_w;
    j["ee_bpshz_per_w"] = r.ee;
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(r.channel_hash));
    j["channel_hash"] = hash_hex;
    return j;
}

// --- Config file handling -------------------------------------------------------------

namespace detail {

inline void require_keys(const nlohmann::json &j, const std::vector<std::string> &allowed,
                         const std::string &scope)
{
    if (!j.is_object())
        throw std::invalid_argument("config: " + scope + " must be an object");
    for (const auto &item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw std::invalid_argument("config: unknown key '" + scope + item.key() + "'");
    }
}

inline Scheme scheme_from_string(const std::string &s)
{
    if (s == "ba")
        return Scheme::BA;
    if (s == "sb")
        return Scheme::SB;
    if (s == "mbmrf")
        return Scheme::MBMRF;
    if (s == "ideal")
        return Scheme::IDEAL;
    throw std::invalid_argument("config: unknown scheme '" + s + "'");
}

} // namespace detail

/// Parse an experiment config from JSON. Every field of ExperimentConfig is addressable;
/// unknown keys are errors.
inline ExperimentConfig config_from_json(const nlohmann::json &j)
{
    using detail::require_keys;
    require_keys(j, {"geometry", "num_users", "channel", "bandwidth_hz", "noise_psd_dbm_per_hz",
                     "power_model", "transmit_power_dbm", "schemes", "epsilon", "fixed_beams",
                     "multi_cluster_search", "user_order", "iui", "beam_selection", "sweep",
                     "trials", "seed", "threads"},
                 "");

    ExperimentConfig cfg;
    cfg.scenario.geometry = geometry_from_json(j.at("geometry"));
    cfg.scenario.num_users = j.at("num_users").get<arma::uword>();

    if (j.contains("channel")) {
        const auto &jc = j.at("channel");
        require_keys(jc, {"num_clusters", "num_paths", "spread_az", "spread_el", "distance_m",
                          "shadowing", "min_separation", "grid_align", "mu_override"},
                     "channel.");
        if (jc.contains("num_clusters"))
            cfg.scenario.num_clusters = jc.at("num_clusters").get<arma::uword>();
        if (jc.contains("num_paths"))
            cfg.scenario.num_paths = jc.at("num_paths").get<arma::uword>();
        if (jc.contains("spread_az"))
            cfg.scenario.spread_az = jc.at("spread_az").get<double>();
        if (jc.contains("spread_el"))
            cfg.scenario.spread_el = jc.at("spread_el").get<double>();
        if (jc.contains("distance_m"))
            cfg.scenario.distance_m = jc.at("distance_m").get<double>();
        if (jc.contains("shadowing")) {
            const auto &js = jc.at("shadowing");
            require_keys(js, {"enabled", "value", "interpretation"}, "channel.shadowing.");
            if (js.contains("enabled"))
                cfg.scenario.shadowing.enabled = js.at("enabled").get<bool>();
            if (js.contains("value"))
                cfg.scenario.shadowing.value = js.at("value").get<double>();
            if (js.contains("interpretation")) {
                const auto s = js.at("interpretation").get<std::string>();
                if (s == "variance")
                    cfg.scenario.shadowing.value_is_variance = true;
                else if (s == "stddev")
                    cfg.scenario.shadowing.value_is_variance = false;
                else
                    throw std::invalid_argument(
                        "config: shadowing.interpretation must be 'variance' or 'stddev'");
            }
        }
        if (jc.contains("min_separation"))
            cfg.scenario.min_separation = jc.at("min_separation").get<double>();
        if (jc.contains("grid_align"))
            cfg.scenario.grid_align = jc.at("grid_align").get<bool>();
        if (jc.contains("mu_override"))
            cfg.scenario.mu_override = jc.at("mu_override").get<double>();
    }

    if (j.contains("bandwidth_hz"))
        cfg.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    if (j.contains("noise_psd_dbm_per_hz"))
        cfg.noise_psd_dbm_per_hz = j.at("noise_psd_dbm_per_hz").get<double>();

    if (j.contains("power_model")) {
        const auto &jp = j.at("power_model");
        require_keys(jp, {"p_ref_w", "p_bb_w", "p_rf_w", "p_sw_w", "p_ps_w", "p_t_w",
                          "switch_convention"},
                     "power_model.");
        if (jp.contains("p_ref_w"))
            cfg.power = PowerModel::from_reference(jp.at("p_ref_w").get<double>());
        if (jp.contains("p_bb_w"))
            cfg.power.p_bb = jp.at("p_bb_w").get<double>();
        if (jp.contains("p_rf_w"))
            cfg.power.p_rf = jp.at("p_rf_w").get<double>();
        if (jp.contains("p_sw_w"))
            cfg.power.p_sw = jp.at("p_sw_w").get<double>();
        if (jp.contains("p_ps_w"))
            cfg.power.p_ps = jp.at("p_ps_w").get<double>();
        if (jp.contains("p_t_w"))
            cfg.power.p_t = jp.at("p_t_w").get<double>();
        if (jp.contains("switch_convention")) {
            const auto s = jp.at("switch_convention").get<std::string>();
            if (s == "per_beam")
                cfg.power.convention = PowerModel::SwitchConvention::PerBeam;
            else if (s == "full_crossbar")
                cfg.power.convention = PowerModel::SwitchConvention::FullCrossbar;
            else
                throw std::invalid_argument(
                    "config: switch_convention must be 'per_beam' or 'full_crossbar'");
        }
    }

    if (j.contains("transmit_power_dbm"))
        cfg.transmit_power_dbm = j.at("transmit_power_dbm").get<double>();

    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto &s : j.at("schemes"))
            cfg.schemes.push_back(detail::scheme_from_string(s.get<std::string>()));
    }

    if (j.contains("epsilon"))
        cfg.ba.epsilon = j.at("epsilon").get<double>();
    if (j.contains("fixed_beams") && !j.at("fixed_beams").is_null())
        cfg.ba.fixed_beams = j.at("fixed_beams").get<arma::uword>();
    if (j.contains("multi_cluster_search"))
        cfg.ba.search_all_beams = j.at("multi_cluster_search").get<bool>();
    if (j.contains("user_order")) {
        const auto s = j.at("user_order").get<std::string>();
        if (s == "index")
            cfg.ba.user_order = UserOrder::Index;
        else if (s == "peak_power")
            cfg.ba.user_order = UserOrder::PeakPower;
        else
            throw std::invalid_argument("config: user_order must be 'index' or 'peak_power'");
    }

    if (j.contains("iui")) {
        const auto &ji = j.at("iui");
        require_keys(ji, {"enabled", "eta_min", "decay"}, "iui.");
        if (ji.contains("enabled"))
            cfg.iui.enabled = ji.at("enabled").get<bool>();
        if (ji.contains("eta_min"))
            cfg.iui.eta_min = ji.at("eta_min").get<double>();
        if (ji.contains("decay"))
            cfg.iui.decay = ji.at("decay").get<double>();
    }

    if (j.contains("beam_selection")) {
        const auto s = j.at("beam_selection").get<std::string>();
        if (s == "greedy")
            cfg.selection = BeamSelectionMode::Greedy;
        else if (s == "central_fixed")
            cfg.selection = BeamSelectionMode::CentralFixed;
        else
            throw std::invalid_argument(
                "config: beam_selection must be 'greedy' or 'central_fixed'");
    }

    {
        const auto &js = j.at("sweep");
        require_keys(js, {"axis", "values"}, "sweep.");
        const auto axis = js.at("axis").get<std::string>();
        if (axis == "transmit_power_dbm")
            cfg.sweep.kind = SweepAxis::Kind::TransmitPowerDbm;
        else if (axis == "beam_count")
            cfg.sweep.kind = SweepAxis::Kind::BeamCount;
        else
            throw std::invalid_argument(
                "config: sweep.axis must be 'transmit_power_dbm' or 'beam_count'");
        cfg.sweep.values = js.at("values").get<std::vector<double>>();
    }

    if (j.contains("trials"))
        cfg.trials = j.at("trials").get<arma::uword>();
    if (j.contains("seed"))
        cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads"))
        cfg.threads = j.at("threads").get<arma::uword>();

    cfg.validate();
    return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig &cfg)
{
    nlohmann::json j;
    j["geometry"] = geometry_to_json(cfg.scenario.geometry);
    j["num_users"] = cfg.scenario.num_users;
    nlohmann::json jc;
    jc["num_clusters"] = cfg.scenario.num_clusters;
    jc["num_paths"] = cfg.scenario.num_paths;
    if (cfg.scenario.spread_az)
        jc["spread_az"] = *cfg.scenario.spread_az;
    if (cfg.scenario.spread_el)
        jc["spread_el"] = *cfg.scenario.spread_el;
    jc["distance_m"] = cfg.scenario.distance_m;
    jc["shadowing"] = {{"enabled", cfg.scenario.shadowing.enabled},
                       {"value", cfg.scenario.shadowing.value},
                       {"interpretation",
                        cfg.scenario.shadowing.value_is_variance ? "variance" : "stddev"}};
    if (cfg.scenario.min_separation)
        jc["min_separation"] = *cfg.scenario.min_separation;
    jc["grid_align"] = cfg.scenario.grid_align;
    if (cfg.scenario.mu_override)
        jc["mu_override"] = *cfg.scenario.mu_override;
    j["channel"] = std::move(jc);
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["noise_psd_dbm_per_hz"] = cfg.noise_psd_dbm_per_hz;
    j["power_model"] = {
        {"p_ref_w", cfg.power.p_ref},
        {"p_bb_w", cfg.power.p_bb},
        {"p_rf_w", cfg.power.p_rf},
        {"p_sw_w", cfg.power.p_sw},
        {"p_ps_w", cfg.power.p_ps},
        {"p_t_w", cfg.power.p_t},
        {"switch_convention",
         cfg.power.convention == PowerModel::SwitchConvention::FullCrossbar ? "full_crossbar"
                                                                            : "per_beam"}};
    j["transmit_power_dbm"] = cfg.transmit_power_dbm;
    std::vector<std::string> schemes;
    for (Scheme s : cfg.schemes)
        schemes.emplace_back(scheme_name(s));
    j["schemes"] = schemes;
    j["epsilon"] = cfg.ba.epsilon;
    if (cfg.ba.fixed_beams)
        j["fixed_beams"] = *cfg.ba.fixed_beams;
    j["multi_cluster_search"] = cfg.ba.search_all_beams;
    j["user_order"] = cfg.ba.user_order == UserOrder::Index ? "index" : "peak_power";
    j["iui"] = {{"enabled", cfg.iui.enabled},
                {"eta_min", cfg.iui.eta_min},
                {"decay", cfg.iui.decay}};
    j["beam_selection"] =
        cfg.selection == BeamSelectionMode::Greedy ? "greedy" : "central_fixed";
    j["sweep"] = {{"axis", std::string(cfg.sweep.name())}, {"values", cfg.sweep.values}};
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j;
}

/// Records + reproduction metadata (config, seed, RNG algorithm) as one JSON document.
inline nlohmann::json records_to_json(const std::vector<TrialRecord> &records,
                                      const ExperimentConfig &cfg)
{
    nlohmann::json j;
    j["metadata"] = {{"rng", kRngAlgorithmId},
                     {"seed", cfg.seed},
                     {"config", config_to_json(cfg)}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : records)
        arr.push_back(record_to_json(r));
    j["records"] = std::move(arr);
    return j;
}

} // namespace beamsim

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

#include <algorithm>
#include <armadillo>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "beamsim/arrays.hpp"
#include "beamsim/channel.hpp"

namespace beamsim {

enum class Scheme { BA, SB, MBMRF, IDEAL };

inline std::string_view scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::BA:
        return "ba";
    case Scheme::SB:
        return "sb";
    case Scheme::MBMRF:
        return "mbmrf";
    case Scheme::IDEAL:
        return "ideal";
    }
    return "?";
}

/// Per-user disjoint beam index sets. per_user[k] keeps selection order (seed first).
struct BeamAssignment {
    std::vector<std::vector<arma::uword>> per_user;

    arma::uword total() const
    {
        arma::uword t = 0;
        for (const auto &b : per_user)
            t += b.size();
        return t;
    }

    std::set<arma::uword> global() const
    {
        std::set<arma::uword> g;
        for (const auto &b : per_user)
            g.insert(b.begin(), b.end());
        return g;
    }

    void validate_disjoint() const
    {
        if (global().size() != total())
            throw std::invalid_argument("BeamAssignment: beam sets are not disjoint");
    }
};

/// RF + baseband precoder pair. The RF column magnitudes obey the hardware constraint of the
/// scheme (PSN: 1/sqrt(B_k) on the selected beams, 0 elsewhere).
struct PrecoderPair {
    arma::cx_mat p_rf; // N x N_RF
    arma::cx_mat p_bb; // N_RF x K
    BeamAssignment assignment;
    Scheme scheme = Scheme::BA;
};

enum class UserOrder { Index, PeakPower };

struct BaOptions {
    double epsilon = 0.25;
    // Beam-sweep mode: selection ends when |B_k| reaches this count; the epsilon rule is
    // not applied.
    std::optional<arma::uword> fixed_beams;
    // Multi-cluster generalization: search all unclaimed beams instead of the adjacency set.
    bool search_all_beams = false;
    UserOrder user_order = UserOrder::Index;
};

/// Beams adjacent to `selected` (index difference at most one per dimension, wrap-around),
/// excluding `selected` and `claimed`.
inline std::set<arma::uword> adjacency(const ArrayGeometry &g,
                                       const std::set<arma::uword> &selected,
                                       const std::set<arma::uword> &claimed)
{
    if (selected.empty())
        throw std::invalid_argument("adjacency: selected set must be nonempty");
    std::set<arma::uword> out;
    if (!g.is_upa()) {
        const arma::uword n = g.size();
        for (arma::uword l : selected) {
            out.insert((l + 1) % n);
            out.insert((l + n - 1) % n);
        }
    } else {
        const arma::uword n1 = g.n1(), n2 = g.n2();
        for (arma::uword l : selected) {
            const auto [ia, ie] = g.axes_index(l);
            for (int da = -1; da <= 1; ++da)
                for (int de = -1; de <= 1; ++de) {
                    if (da == 0 && de == 0)
                        continue;
                    const arma::uword na = (ia + n1 + static_cast<arma::uword>(da + 1) - 1) % n1;
                    const arma::uword ne = (ie + n2 + static_cast<arma::uword>(de + 1) - 1) % n2;
                    out.insert(g.flat_index(na, ne));
                }
        }
    }
    for (arma::uword l : selected)
        out.erase(l);
    for (arma::uword l : claimed)
        out.erase(l);
    return out;
}

/// PSN column phases for one user: entries e^{j arg(hk_b)} / sqrt(|beams|) on the selected
/// beams, zero elsewhere, so every rotated gain conj(p_b) * hk_b is real nonnegative and the
/// combined gain attains sum |hk_b| / sqrt(|beams|). The overall phase is anchored at `ref`.
inline arma::cx_vec rotation_phases(const arma::cx_vec &hk, const std::vector<arma::uword> &beams,
                                    arma::uword ref)
{
    if (beams.empty())
        throw std::invalid_argument("rotation_phases: empty beam set");
    if (std::find(beams.begin(), beams.end(), ref) == beams.end())
        throw std::invalid_argument("rotation_phases: ref must be a selected beam");
    if (std::abs(hk(ref)) == 0.0)
        throw std::domain_error("rotation_phases: degenerate (zero) reference element");
    const double mag = 1.0 / std::sqrt(static_cast<double>(beams.size()));
    arma::cx_vec p(hk.n_elem, arma::fill::zeros);
    for (arma::uword b : beams)
        p(b) = std::polar(mag, std::arg(hk(b)));
    return p;
}

namespace detail {

inline std::vector<arma::uword> user_processing_order(const arma::cx_mat &hb,
                                                      const BaOptions &opts)
{
    std::vector<arma::uword> order(hb.n_cols);
    for (arma::uword k = 0; k < hb.n_cols; ++k)
        order[k] = k;
    if (opts.user_order == UserOrder::PeakPower) {
        arma::vec peak(hb.n_cols);
        for (arma::uword k = 0; k < hb.n_cols; ++k)
            peak(k) = arma::abs(hb.col(k)).max();
        std::stable_sort(order.begin(), order.end(),
                         [&](arma::uword a, arma::uword b) { return peak(a) > peak(b); });
    }
    return order;
}

/// argmax of score over `cand`; ties toward the lowest index (set iteration is ordered).
template <class Score>
inline std::optional<arma::uword> argmax_over(const std::set<arma::uword> &cand, Score &&score)
{
    std::optional<arma::uword> best;
    double best_v = -1.0;
    for (arma::uword m : cand) {
        const double v = score(m);
        if (v > best_v) {
            best_v = v;
            best = m;
        }
    }
    return best;
}

/// Shared greedy loop of Algorithm 1. `score(k, m)` ranks candidate beams for user k;
/// `extra_stop(k_pos, m)` is the variant-specific stop test applied before committing a beam.
template <class Score, class ExtraStop>
inline BeamAssignment greedy_select(const ArrayGeometry &g, const arma::cx_mat &hb,
                                    const BaOptions &opts, Score &&score, ExtraStop &&extra_stop)
{
    const arma::uword n = hb.n_rows;
    const arma::uword k_users = hb.n_cols;
    if (k_users > n)
        throw std::invalid_argument("beam selection: K <= N required");
    if (!(opts.epsilon > 0.0 && opts.epsilon < 1.0) && !opts.fixed_beams)
        throw std::invalid_argument("beam selection: epsilon must be in (0, 1)");

    BeamAssignment asgn;
    asgn.per_user.resize(k_users);
    std::set<arma::uword> claimed;
    std::set<arma::uword> all_beams;
    for (arma::uword m = 0; m < n; ++m)
        all_beams.insert(m);

    const auto order = user_processing_order(hb, opts);
    for (arma::uword pos = 0; pos < order.size(); ++pos) {
        const arma::uword k = order[pos];
        const arma::cx_vec hk = hb.col(k);
        if (arma::norm(hk) == 0.0)
            throw std::domain_error("beam selection: zero beamspace channel column");

        std::set<arma::uword> unclaimed = all_beams;
        for (arma::uword c : claimed)
            unclaimed.erase(c);
        const auto seed = argmax_over(unclaimed, [&](arma::uword m) { return score(k, m); });
        if (!seed)
            throw std::runtime_error("beam selection: no unclaimed beam left to seed user");

        std::vector<arma::uword> sel{*seed};
        std::set<arma::uword> sel_set{*seed};
        const double seed_mag = std::abs(hk(*seed));

        while (true) {
            if (opts.fixed_beams && sel.size() >= *opts.fixed_beams)
                break;
            std::set<arma::uword> cand;
            if (opts.search_all_beams) {
                cand = unclaimed;
                for (arma::uword s : sel_set)
                    cand.erase(s);
            } else {
                cand = adjacency(g, sel_set, claimed);
            }
            if (cand.empty())
                break;
            const auto next = argmax_over(cand, [&](arma::uword m) { return score(k, m); });
            const arma::uword l = *next;
            // Test-before-commit: the beam that violates a threshold is examined, not added.
            if (!opts.fixed_beams && std::abs(hk(l)) <= opts.epsilon * seed_mag)
                break;
            if (extra_stop(pos, k, l))
                break;
            sel.push_back(l);
            sel_set.insert(l);
        }

        claimed.insert(sel.begin(), sel.end());
        asgn.per_user[k] = std::move(sel);
    }
    return asgn;
}

} // namespace detail

/// Algorithm 1's greedy beam selection: per user, seed at the strongest unclaimed beam, then
/// repeatedly take the strongest unclaimed adjacent beam until it falls to epsilon times the
/// seed magnitude (or |B_k| hits opts.fixed_beams).
inline BeamAssignment select_beams(const ArrayGeometry &g, const arma::cx_mat &hb,
                                   const BaOptions &opts = {})
{
    return detail::greedy_select(
        g, hb, opts, [&](arma::uword k, arma::uword m) { return std::abs(hb(m, k)); },
        [](arma::uword, arma::uword, arma::uword) { return false; });
}

/// IUI-aware variant: candidates ranked by eta_m = |hb_mk|^2 / (sigma^2 + sum_{i != k} |hb_mi|^2);
/// selection additionally stops when eta drops below eta_min (optionally decayed per processed
/// user: eta_min * decay^position).
inline BeamAssignment iui_aware_select(const ArrayGeometry &g, const arma::cx_mat &hb,
                                       double sigma2, double eta_min, const BaOptions &opts = {},
                                       double eta_min_decay = 1.0)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("iui_aware_select: sigma2 must be positive");
    arma::vec total_power(hb.n_rows, arma::fill::zeros);
    for (arma::uword k = 0; k < hb.n_cols; ++k)
        for (arma::uword m = 0; m < hb.n_rows; ++m)
            total_power(m) += std::norm(hb(m, k));
    const auto eta = [&](arma::uword k, arma::uword m) {
        const double own = std::norm(hb(m, k));
        return own / (sigma2 + (total_power(m) - own));
    };
    return detail::greedy_select(g, hb, opts, eta,
                                 [&](arma::uword pos, arma::uword k, arma::uword m) {
                                     const double thr =
                                         eta_min * std::pow(eta_min_decay, static_cast<double>(pos));
                                     return eta(k, m) < thr;
                                 });
}

namespace detail {

/// Baseband normalization so the per-user power constraint holds with equality:
/// alpha_k = sqrt(P_T / K) / ||P_RF v_k||.
inline void normalize_column(arma::cx_mat &p_bb, const arma::cx_mat &p_rf, const arma::cx_vec &v,
                             arma::uword k, double p_t, arma::uword k_users)
{
    const double nrm = arma::norm(p_rf * v);
    if (nrm == 0.0)
        throw std::domain_error("precoder: zero equivalent channel, cannot normalize");
    p_bb.col(k) = v * (std::sqrt(p_t / static_cast<double>(k_users)) / nrm);
}

} // namespace detail

/// Rotation-based PSN precoder from a given assignment: one RF chain per user, phases aligned
/// by the rotation rule, matched-filter baseband on the equivalent channel P_RF^H * hb.
inline PrecoderPair ba_precoder_from_assignment(const arma::cx_mat &hb,
                                                const BeamAssignment &asgn, double p_t)
{
    const arma::uword n = hb.n_rows;
    const arma::uword k_users = hb.n_cols;
    if (asgn.per_user.size() != k_users)
        throw std::invalid_argument("ba_precoder: assignment/user count mismatch");
    asgn.validate_disjoint();

    PrecoderPair pair;
    pair.scheme = Scheme::BA;
    pair.assignment = asgn;
    pair.p_rf.set_size(n, k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const auto &beams = asgn.per_user[k];
        pair.p_rf.col(k) = rotation_phases(hb.col(k), beams, beams.front());
    }
    const arma::cx_mat hbar = pair.p_rf.t() * hb; // K x K equivalent channel
    pair.p_bb.set_size(k_users, k_users);
    for (arma::uword k = 0; k < k_users; ++k)
        detail::normalize_column(pair.p_bb, pair.p_rf, hbar.col(k), k, p_t, k_users);
    return pair;
}

inline PrecoderPair ba_precoder(const ArrayGeometry &g, const arma::cx_mat &hb, double p_t,
                                const BaOptions &opts = {})
{
    return ba_precoder_from_assignment(hb, select_beams(g, hb, opts), p_t);
}

/// MBMRF from a given assignment: each selected beam feeds its own RF chain (selection matrix
/// entries 1/sqrt(B_k)); the baseband matched filter for user k lives on user k's chain block.
inline PrecoderPair mbmrf_precoder_from_assignment(const arma::cx_mat &hb,
                                                   const BeamAssignment &asgn, double p_t)
{
    const arma::uword n = hb.n_rows;
    const arma::uword k_users = hb.n_cols;
    if (asgn.per_user.size() != k_users)
        throw std::invalid_argument("mbmrf_precoder: assignment/user count mismatch");
    asgn.validate_disjoint();

    PrecoderPair pair;
    pair.scheme = Scheme::MBMRF;
    pair.assignment = asgn;
    const arma::uword b_total = asgn.total();
    pair.p_rf.zeros(n, b_total);
    std::vector<arma::uword> block_start(k_users);
    arma::uword c = 0;
    for (arma::uword k = 0; k < k_users; ++k) {
        block_start[k] = c;
        const auto &beams = asgn.per_user[k];
        const double v = 1.0 / std::sqrt(static_cast<double>(beams.size()));
        for (arma::uword b : beams)
            pair.p_rf(b, c++) = v;
    }
    pair.p_bb.zeros(b_total, k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const auto &beams = asgn.per_user[k];
        arma::cx_vec v(b_total, arma::fill::zeros);
        const double s = 1.0 / std::sqrt(static_cast<double>(beams.size()));
        for (arma::uword i = 0; i < beams.size(); ++i)
            v(block_start[k] + i) = s * hb(beams[i], k); // (Xi_k^H hb_k) entries
        detail::normalize_column(pair.p_bb, pair.p_rf, v, k, p_t, k_users);
    }
    return pair;
}

inline PrecoderPair mbmrf_precoder(const ArrayGeometry &g, const arma::cx_mat &hb, double p_t,
                                   const BaOptions &opts = {})
{
    return mbmrf_precoder_from_assignment(hb, select_beams(g, hb, opts), p_t);
}

/// Single-beam baseline: per user (index order) the strongest unclaimed beam through one RF
/// chain; scalar matched-filter baseband.
inline PrecoderPair sb_precoder(const arma::cx_mat &hb, double p_t)
{
    const arma::uword n = hb.n_rows;
    const arma::uword k_users = hb.n_cols;
    if (k_users > n)
        throw std::runtime_error("sb_precoder: fewer beams than users");

    PrecoderPair pair;
    pair.scheme = Scheme::SB;
    pair.assignment.per_user.resize(k_users);
    pair.p_rf.zeros(n, k_users);
    std::set<arma::uword> claimed;
    for (arma::uword k = 0; k < k_users; ++k) {
        std::optional<arma::uword> best;
        double best_v = -1.0;
        for (arma::uword m = 0; m < n; ++m) {
            if (claimed.count(m))
                continue;
            const double v = std::abs(hb(m, k));
            if (v > best_v) {
                best_v = v;
                best = m;
            }
        }
        if (!best)
            throw std::runtime_error("sb_precoder: fewer unclaimed beams than users");
        claimed.insert(*best);
        pair.assignment.per_user[k] = {*best};
        pair.p_rf(*best, k) = std::polar(1.0, std::arg(hb(*best, k)));
    }
    const arma::cx_mat hbar = pair.p_rf.t() * hb;
    pair.p_bb.zeros(k_users, k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        arma::cx_vec v(k_users, arma::fill::zeros);
        v(k) = hbar(k, k); // scalar MF on the user's own chain
        detail::normalize_column(pair.p_bb, pair.p_rf, v, k, p_t, k_users);
    }
    return pair;
}

/// Fully digital matched filter on the complete beamspace column (the no-power-leakage
/// reference; no hardware constraint).
inline PrecoderPair ideal_precoder(const arma::cx_mat &hb, double p_t)
{
    const arma::uword n = hb.n_rows;
    const arma::uword k_users = hb.n_cols;
    PrecoderPair pair;
    pair.scheme = Scheme::IDEAL;
    pair.assignment.per_user.resize(k_users);
    pair.p_rf = arma::cx_mat(n, n, arma::fill::eye);
    pair.p_bb.set_size(n, k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double nrm = arma::norm(hb.col(k));
        if (nrm == 0.0)
            throw std::domain_error("ideal_precoder: zero beamspace channel column");
        pair.p_bb.col(k) = hb.col(k) * (std::sqrt(p_t / static_cast<double>(k_users)) / nrm);
    }
    return pair;
}

// MultiuserChannel conveniences.
inline PrecoderPair ba_precoder(const MultiuserChannel &ch, double p_t, const BaOptions &opts = {})
{
    return ba_precoder(ch.geometry, ch.hb, p_t, opts);
}
inline PrecoderPair mbmrf_precoder(const MultiuserChannel &ch, double p_t,
                                   const BaOptions &opts = {})
{
    return mbmrf_precoder(ch.geometry, ch.hb, p_t, opts);
}
inline PrecoderPair sb_precoder(const MultiuserChannel &ch, double p_t)
{
    return sb_precoder(ch.hb, p_t);
}
inline PrecoderPair ideal_precoder(const MultiuserChannel &ch, double p_t)
{
    return ideal_precoder(ch.hb, p_t);
}

} // namespace beamsim

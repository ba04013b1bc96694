// SPDX-License-Identifier: Apache-2.0
//
// nearfield: near-field channel modelling and beamforming toolkit
// Copyright (C) 2026 The nearfield authors
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

#include "nearfield/cli.hpp"
#include "nearfield/beamforming.hpp"
#include "nearfield/boundaries.hpp"
#include "nearfield/capacity.hpp"
#include "nearfield/codebook.hpp"
#include "nearfield/csv.hpp"
#include "nearfield/estimation.hpp"
#include "nearfield/parallel.hpp"
#include "nearfield/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace nearfield::cli
{
    namespace
    {
        using json = nlohmann::ordered_json;

        struct Globals
        {
            std::string config;
            std::optional<std::uint64_t> seed;
            std::string out_dir = ".";
            unsigned threads = 1;
        };

        // Everything a subcommand needs once parsing is done.
        struct Context
        {
            const Globals &globals;
            std::optional<ScenarioConfig> scenario;
            RunManifest manifest;
            std::ostream &out;

            std::filesystem::path output(const std::string &name)
            {
                const auto p = std::filesystem::path(globals.out_dir) / name;
                manifest.outputs.push_back(p);
                return p;
            }
        };

        json number(double v)
        {
            if (std::isinf(v))
                return v > 0 ? json("inf") : json("-inf");
            return json(v);
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f)
                throw IoError("cannot open '" + path.string() + "' for writing");
            f << text;
            f.close();
            if (!f)
                throw IoError("failed writing '" + path.string() + "'");
        }

        std::vector<double> linspace(double a, double b, int n)
        {
            detail::require(n >= 1, "grid: point count must be >= 1");
            std::vector<double> v(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
            return v;
        }

        std::vector<double> logspace(double a, double b, int n)
        {
            detail::require(a > 0 && b > 0, "grid: log-spaced bounds must be positive");
            auto v = linspace(std::log(a), std::log(b), n);
            for (auto &x : v)
                x = std::exp(x);
            return v;
        }

        // Array options shared by the array-based subcommands.
        struct ArrayOptions
        {
            long n = 256;
            double spacing = 0; // 0: half wavelength at the center frequency
            double freq = 28e9;
            std::string array = "bs";
        };

        void add_array_options(CLI::App *sub, ArrayOptions &o)
        {
            sub->add_option("--n", o.n, "Element count of the ULA");
            sub->add_option("--spacing", o.spacing, "Element spacing [m] (default half wavelength)");
            sub->add_option("--freq", o.freq, "Carrier frequency [Hz]");
            sub->add_option("--array", o.array, "Array name in the scenario file");
        }

        CarrierConfigd carrier_of(const Context &ctx, double freq)
        {
            if (ctx.scenario)
                return ctx.scenario->carrier;
            CarrierConfigd c;
            c.center_frequency = freq;
            c.validate();
            return c;
        }

        ArrayGeometryd array_of(const Context &ctx, const ArrayOptions &o, const CarrierConfigd &carrier)
        {
            if (ctx.scenario)
                return ctx.scenario->array(o.array);
            const double spacing = o.spacing > 0 ? o.spacing : 0.5 * wavelength(carrier);
            return build_ula<double>(o.n, spacing, o.array);
        }

        json boundary_json(const BoundaryReport &rep)
        {
            json j;
            j["criterion"] = to_string(rep.criterion);
            j["closed_form_m"] = number(rep.closed_form);
            j["numeric_m"] = rep.numeric ? number(*rep.numeric) : json(nullptr);
            j["inputs"] = {{"aperture_m", rep.aperture},
                           {"wavelength_m", rep.wavelength},
                           {"theta_deg", rad2deg(rep.theta)},
                           {"threshold", rep.threshold},
                           {"geometry", rep.geometry}};
            return j;
        }

        // ---- boundary -------------------------------------------------------------------

        struct BoundaryOptions
        {
            std::string mode = "simo";
            double aperture = -1;
            double aperture_rx = 0;
            double freq = 28e9;
            double d1 = -1;
            double theta_deg = 0;
            double floor = 0.95;
            double threshold = kPhaseThreshold;
            ArrayOptions array;
        };

        void run_boundary(Context &ctx, const BoundaryOptions &o)
        {
            const double lambda = speed_of_light<double> / o.freq;
            json j;
            CsvTable table;
            table.header = {"mode", "closed_form_m", "numeric_m", "aperture_m", "wavelength_m", "theta_deg"};
            auto need_aperture = [&] {
                if (o.aperture < 0)
                    throw ConfigError("--aperture", "required for mode '" + o.mode + "'");
            };
            BoundaryReport rep;
            rep.aperture = o.aperture;
            rep.wavelength = lambda;
            rep.threshold = kPhaseThreshold;

            if (o.mode == "simo")
            {
                need_aperture();
                rep.closed_form = rayleigh_distance(o.aperture, lambda);
                j = boundary_json(rep);
            }
            else if (o.mode == "mimo")
            {
                need_aperture();
                rep.closed_form = mimo_rayleigh_distance(o.aperture, o.aperture_rx, lambda);
                j = boundary_json(rep);
                j["inputs"]["aperture_rx_m"] = o.aperture_rx;
            }
            else if (o.mode == "ris")
            {
                need_aperture();
                if (o.d1 <= 0)
                    throw ConfigError("--d1", "required (BS-RIS distance, positive) for mode 'ris'");
                const auto d2 = ris_boundary_d2(o.aperture, lambda, o.d1);
                rep.closed_form = d2 ? *d2 : std::numeric_limits<double>::infinity();
                j = boundary_json(rep);
                j["inputs"]["d1_m"] = o.d1;
                j["rayleigh_m"] = rayleigh_distance(o.aperture, lambda);
                j["unbounded"] = !d2.has_value();
            }
            else if (o.mode == "numeric" || o.mode == "erd")
            {
                CarrierConfigd carrier;
                carrier.center_frequency = o.freq;
                if (ctx.scenario)
                    carrier = ctx.scenario->carrier;
                const ArrayGeometryd geom = array_of(ctx, o.array, carrier);
                const double theta = deg2rad(o.theta_deg);
                rep = o.mode == "numeric"
                          ? numeric_phase_boundary(geom, carrier.center_frequency, theta, o.threshold,
                                                   carrier.propagation_speed)
                          : effective_rayleigh_distance(geom, carrier.center_frequency, theta, o.floor,
                                                        carrier.propagation_speed);
                j = boundary_json(rep);
            }
            else
                throw ConfigError("mode", "expected simo, mimo, ris, numeric or erd; got '" + o.mode + "'");

            table.rows.push_back({o.mode, rep.closed_form, rep.numeric ? *rep.numeric : std::nan(""), rep.aperture,
                                  rep.wavelength, rad2deg(rep.theta)});
            const std::string csv = to_csv(table);
            ctx.out << j.dump(2) << "\n" << csv;
            write_text(ctx.output("boundary.json"), j.dump(2) + "\n");
            emit_csv(table, ctx.output("boundary.csv"));
        }

        // ---- fieldmap -------------------------------------------------------------------

        struct FieldmapOptions
        {
            ArrayOptions array;
            std::string design = "focus";
            double theta_deg = 0;
            double r = 10;
            int angles = 121;
            double theta_min_deg = -60, theta_max_deg = 60;
            int distances = 100;
            double r_min = 1, r_max = 1000;
        };

        void run_fieldmap(Context &ctx, const FieldmapOptions &o)
        {
            const CarrierConfigd carrier = carrier_of(ctx, o.array.freq);
            const ArrayGeometryd geom = array_of(ctx, o.array, carrier);
            const double f = carrier.center_frequency;
            NarrowbandBeamformer bf;
            if (o.design == "focus")
                bf = focus_weights(geom, f, PolarPointd(deg2rad(o.theta_deg), o.r), carrier.propagation_speed);
            else if (o.design == "steer")
                bf = steer_weights(geom, f, deg2rad(o.theta_deg), carrier.propagation_speed);
            else
                throw ConfigError("--design", "expected focus or steer");

            const auto angles_deg = linspace(o.theta_min_deg, o.theta_max_deg, o.angles);
            std::vector<double> angles;
            for (double a : angles_deg)
                angles.push_back(deg2rad(a));
            const auto dists = logspace(o.r_min, o.r_max, o.distances);
            const Eigen::MatrixXd map = gain_map(geom, f, bf.weights, angles, dists, carrier.propagation_speed);

            CsvTable table;
            table.header.push_back("theta_deg\\r_m");
            for (double d : dists)
                table.header.push_back(format_double(d));
            for (std::size_t a = 0; a < angles.size(); ++a)
            {
                std::vector<CsvCell> row{angles_deg[a]};
                for (Eigen::Index d = 0; d < map.cols(); ++d)
                    row.emplace_back(map(static_cast<Eigen::Index>(a), d));
                table.rows.push_back(std::move(row));
            }
            emit_csv(table, ctx.output("fieldmap.csv"));
            ctx.out << "fieldmap: " << angles.size() << " x " << dists.size() << " grid, rayleigh "
                    << format_double(rayleigh_distance(geom.aperture(), carrier.propagation_speed / f)) << " m\n";
        }

        // ---- codebook -------------------------------------------------------------------

        struct CodebookOptions
        {
            ArrayOptions array;
            std::string kind = "polar";
            long angles = 0; // 0: one per antenna
            double mu = 0.5;
            double r_min = 3;
        };

        void run_codebook(Context &ctx, const CodebookOptions &o)
        {
            const CarrierConfigd carrier = carrier_of(ctx, o.array.freq);
            const ArrayGeometryd geom = array_of(ctx, o.array, carrier);
            const long angles = o.angles > 0 ? o.angles : static_cast<long>(geom.size());
            json j;
            std::optional<Codebook> cb;
            if (o.kind == "angular")
                cb.emplace(angular_codebook(geom, carrier.center_frequency, angles, carrier.propagation_speed));
            else if (o.kind == "polar")
            {
                cb.emplace(polar_codebook(geom, carrier.center_frequency, angles, o.mu, o.r_min,
                                          carrier.propagation_speed));
                const auto prof = codebook_coherence_profile(*cb);
                j["max_adjacent_ring_coherence"] = prof.max_adjacent_ring;
                j["max_cross_angle_coherence"] = prof.max_cross_angle;
                j["adjacent_pairs"] = prof.adjacent_pairs;
                j["histogram"] = prof.histogram;
                j["exceeds_target"] = prof.exceeds_target;
            }
            else
                throw ConfigError("--kind", "expected polar or angular");
            j["kind"] = to_string(cb->kind());
            j["codewords"] = cb->size();
            j["antennas"] = cb->antennas();
            j["angles"] = cb->angle_count();
            const auto stem = std::filesystem::path(ctx.globals.out_dir) / "codebook";
            export_codebook(*cb, stem);
            ctx.manifest.outputs.push_back(stem.string() + "_labels.csv");
            ctx.manifest.outputs.push_back(stem.string() + "_entries.csv");
            ctx.out << j.dump(2) << "\n";
        }

        // ---- estimate -------------------------------------------------------------------

        struct EstimateOptions
        {
            std::vector<double> snr_db{20.0};
            std::vector<double> distances;
            long pilots = 0; // 0: N / 4
            long sparsity = 4;
            long trials = 100;
            long angles = 0; // 0: twice the element count
            double stop_residual = -1;
            double mu = 0.5;
            double r_min = 0;  // 0: 0.05 x Rayleigh distance
            std::string array = "bs";
        };

        void run_estimate(Context &ctx, const EstimateOptions &o)
        {
            if (!ctx.scenario)
                throw ConfigError("--config", "the estimate subcommand needs a scenario file");
            const ScenarioConfig &sc = *ctx.scenario;
            const ArrayGeometryd &geom = sc.array(o.array);
            const double f = sc.carrier.center_frequency;
            const double c = sc.carrier.propagation_speed;
            const double rayleigh = rayleigh_distance(geom.aperture(), c / f);
            const double r_min = o.r_min > 0 ? o.r_min : std::max(0.05 * rayleigh, geom.aperture());

            const Eigen::Index angles = o.angles > 0 ? o.angles : 2 * geom.size();
            const Codebook far = angular_codebook(geom, f, angles, c);
            const Codebook polar = polar_codebook(geom, f, angles, o.mu, r_min, c);

            EstimationSweep sweep;
            sweep.distances = o.distances;
            sweep.snrs_db = o.snr_db;
            sweep.pilots = o.pilots > 0 ? o.pilots : std::max<Eigen::Index>(1, geom.size() / 4);
            sweep.sparsity = o.sparsity;
            sweep.stop_residual = o.stop_residual;
            sweep.array = o.array;
            const auto rows = compare_codebooks(sc, far, polar, static_cast<std::size_t>(o.trials), sweep);

            CsvTable table;
            table.header = {"distance_m", "snr_db", "codebook", "mean_nmse_db", "trials"};
            for (const auto &r : rows)
                table.rows.push_back({r.distance_m, r.snr_db, r.codebook, r.mean_nmse_db,
                                      static_cast<std::int64_t>(r.trials)});
            emit_csv(table, ctx.output("nmse.csv"));
            ctx.out << to_csv(table);
        }

        // ---- beamsplit ------------------------------------------------------------------

        struct BeamsplitOptions
        {
            ArrayOptions array;
            double bandwidth = 10e9;
            long subcarriers = 128;
            double theta_deg = 30;
            double r = 10;
            long subarrays = 16;
        };

        void run_beamsplit(Context &ctx, BeamsplitOptions o)
        {
            CarrierConfigd carrier;
            if (ctx.scenario)
                carrier = ctx.scenario->carrier;
            else
            {
                carrier.center_frequency = o.array.freq;
                carrier.bandwidth = o.bandwidth;
                carrier.num_subcarriers = o.subcarriers;
            }
            carrier.validate();
            const ArrayGeometryd geom = array_of(ctx, o.array, carrier);
            const PolarPointd target(deg2rad(o.theta_deg), o.r);

            const auto ps = gain_vs_frequency(geom, carrier, ps_wideband(geom, carrier, target), target);
            const auto ttd = gain_vs_frequency(geom, carrier, ttd_pdf(geom, carrier, target, o.subarrays), target);

            CsvTable table;
            table.header = {"frequency_hz", "ps_gain", "ttd_pdf_gain"};
            double min_ps = 1, min_ttd = 1;
            for (std::size_t m = 0; m < ps.size(); ++m)
            {
                table.rows.push_back({ps[m].frequency, ps[m].gain, ttd[m].gain});
                min_ps = std::min(min_ps, ps[m].gain);
                min_ttd = std::min(min_ttd, ttd[m].gain);
            }
            emit_csv(table, ctx.output("beamsplit.csv"));
            json j{{"subarrays", o.subarrays}, {"min_ps_gain", min_ps}, {"min_ttd_pdf_gain", min_ttd}};
            ctx.out << j.dump(2) << "\n";
        }

        // ---- dof ------------------------------------------------------------------------

        struct DofOptions
        {
            double aperture = 1.5;
            double freq = 28e9;
            double d_min = 0, d_max = 0; // 0: fractions of the MIMO Rayleigh distance
            int points = 40;
            double snr_db = 20;
            double threshold = kDefaultDofThreshold;
        };

        void run_dof(Context &ctx, const DofOptions &o)
        {
            CarrierConfigd carrier = carrier_of(ctx, o.freq);
            const double lambda = wavelength(carrier);
            std::optional<ArrayGeometryd> tx, rx;
            if (ctx.scenario)
            {
                tx.emplace(ctx.scenario->array("bs"));
                rx.emplace(ctx.scenario->array("ue"));
            }
            else
            {
                const long n = std::lround(o.aperture / (0.5 * lambda)) + 1;
                tx.emplace(build_ula<double>(n, 0.5 * lambda, "bs"));
                rx.emplace(build_ula<double>(n, 0.5 * lambda, "ue"));
            }
            const double rmimo = mimo_rayleigh_distance(tx->aperture(), rx->aperture(), lambda);
            const double lo = o.d_min > 0 ? o.d_min : 0.01 * rmimo;
            const double hi = o.d_max > 0 ? o.d_max : 2.0 * rmimo;
            const auto dists = logspace(lo, hi, o.points);
            const auto reports = dof_vs_distance(*tx, *rx, carrier, dists, o.snr_db, o.threshold);

            CsvTable table;
            table.header = {"distance_m", "dof", "capacity_bps_hz", "dof_bound"};
            for (const auto &r : reports)
                table.rows.push_back({r.distance, static_cast<std::int64_t>(r.effective_dof), r.capacity_bps_hz,
                                      dof_upper_bound(tx->aperture(), rx->aperture(), lambda, r.distance)});
            emit_csv(table, ctx.output("dof.csv"));
            ctx.out << to_csv(table);
        }

        // ---- sdma -----------------------------------------------------------------------

        struct SdmaOptions
        {
            ArrayOptions array;
            double theta_deg = 0;
            std::vector<double> r; // empty: scenario users, else 10 m and 50 m
            double snr_db = 10;
        };

        void run_sdma(Context &ctx, const SdmaOptions &o)
        {
            const CarrierConfigd carrier = carrier_of(ctx, o.array.freq);
            const ArrayGeometryd geom = array_of(ctx, o.array, carrier);
            std::vector<PolarPointd> users;
            if (o.r.empty() && ctx.scenario && !ctx.scenario->users.empty())
                users = ctx.scenario->users;
            else
                for (double r : o.r.empty() ? std::vector<double>{10, 50} : o.r)
                    users.emplace_back(deg2rad(o.theta_deg), r);
            const SdmaReport rep =
                sdma_compare(geom, carrier.center_frequency, users, o.snr_db, carrier.propagation_speed);
            json j;
            j["near_field_zf_rate_bps_hz"] = rep.near_field_zf_rate;
            j["far_field_steering_rate_bps_hz"] = rep.far_field_steering_rate;
            j["channel_correlation"] = rep.channel_correlation;
            j["snr_db"] = o.snr_db;
            json ulist = json::array();
            for (const auto &u : users)
                ulist.push_back({{"theta_deg", rad2deg(u.theta())}, {"r_m", u.r()}});
            j["users"] = ulist;
            write_text(ctx.output("sdma.json"), j.dump(2) + "\n");
            ctx.out << j.dump(2) << "\n";
        }
    } // namespace

    std::string manifest_json(const RunManifest &m)
    {
        json j;
        j["subcommand"] = m.subcommand;
        j["config_path"] = m.config_path;
        j["seed"] = m.seed;
        json outs = json::array();
        for (const auto &p : m.outputs)
            outs.push_back(p.string());
        j["outputs"] = outs;
        j["tool_version"] = m.tool_version;
        j["threads"] = m.threads;
        j["wall_clock_seconds"] = m.wall_clock_seconds;
        return j.dump(2) + "\n";
    }

    int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Near-field channel, boundary, codebook and beamforming toolkit", "nearfield"};
        app.set_version_flag("--version", kToolVersion);
        app.require_subcommand(1);
        app.fallthrough();

        Globals g;
        app.add_option("--config", g.config, "Scenario file (YAML)");
        app.add_option("--seed", g.seed, "Override the scenario seed");
        app.add_option("--out-dir", g.out_dir, "Output directory");
        app.add_option("--threads", g.threads, "Worker threads (0 = hardware)");

        BoundaryOptions bo;
        auto *boundary = app.add_subcommand("boundary", "Far/near-field boundary calculators");
        boundary->add_option("mode", bo.mode, "simo | mimo | ris | numeric | erd");
        boundary->add_option("--aperture", bo.aperture, "Array aperture [m] (tx for mimo, RIS for ris)");
        boundary->add_option("--aperture-rx", bo.aperture_rx, "Receive aperture [m] (mimo)");
        boundary->add_option("--freq", bo.freq, "Carrier frequency [Hz]");
        boundary->add_option("--d1", bo.d1, "BS-RIS distance [m] (ris)");
        boundary->add_option("--theta-deg", bo.theta_deg, "Angle off boresight [deg] (numeric, erd)");
        boundary->add_option("--floor", bo.floor, "Gain floor (erd)");
        boundary->add_option("--threshold", bo.threshold, "Phase threshold [rad] (numeric)");
        boundary->add_option("--n", bo.array.n, "ULA element count (numeric, erd)");
        boundary->add_option("--spacing", bo.array.spacing, "ULA spacing [m] (numeric, erd)");
        boundary->add_option("--array", bo.array.array, "Array name in the scenario file");

        FieldmapOptions fo;
        auto *fieldmap = app.add_subcommand("fieldmap", "Narrowband gain over an (angle, distance) grid");
        add_array_options(fieldmap, fo.array);
        fieldmap->add_option("--design", fo.design, "focus | steer");
        fieldmap->add_option("--theta-deg", fo.theta_deg, "Target angle [deg]");
        fieldmap->add_option("--r", fo.r, "Focal distance [m]");
        fieldmap->add_option("--angles", fo.angles, "Angle grid points");
        fieldmap->add_option("--theta-min-deg", fo.theta_min_deg);
        fieldmap->add_option("--theta-max-deg", fo.theta_max_deg);
        fieldmap->add_option("--distances", fo.distances, "Distance grid points (log spaced)");
        fieldmap->add_option("--r-min", fo.r_min);
        fieldmap->add_option("--r-max", fo.r_max);

        CodebookOptions co;
        auto *codebook = app.add_subcommand("codebook", "Build and export an angular or polar codebook");
        add_array_options(codebook, co.array);
        codebook->add_option("--kind", co.kind, "polar | angular");
        codebook->add_option("--angles", co.angles, "Angle count (default: element count)");
        codebook->add_option("--mu", co.mu, "Adjacent-ring coherence target");
        codebook->add_option("--r-min", co.r_min, "Innermost ring bound [m]");

        EstimateOptions eo;
        auto *estimate = app.add_subcommand("estimate", "Monte-Carlo NMSE of OMP with angular vs polar codebooks");
        estimate->add_option("--snr", eo.snr_db, "SNR per measurement [dB] (repeatable)");
        estimate->add_option("--distance", eo.distances, "User distances [m] (default: scenario users)");
        estimate->add_option("--pilots", eo.pilots, "Pilot measurements (default N/4)");
        estimate->add_option("--sparsity", eo.sparsity, "OMP atom budget");
        estimate->add_option("--trials", eo.trials, "Trials per cell");
        estimate->add_option("--angles", eo.angles, "Angle count of both codebooks (default: twice the element count)");
        estimate->add_option("--stop-residual", eo.stop_residual, "OMP residual stop fraction (default: noise level)");
        estimate->add_option("--mu", eo.mu, "Polar codebook coherence target");
        estimate->add_option("--r-min", eo.r_min, "Polar codebook innermost ring bound [m]");
        estimate->add_option("--array", eo.array, "Array name in the scenario file");

        BeamsplitOptions bso;
        auto *beamsplit = app.add_subcommand("beamsplit", "Wideband gain of PS-only vs TTD phase-delay focusing");
        add_array_options(beamsplit, bso.array);
        bso.array.freq = 100e9;
        beamsplit->add_option("--bandwidth", bso.bandwidth, "Bandwidth [Hz]");
        beamsplit->add_option("--subcarriers", bso.subcarriers, "Subcarrier count");
        beamsplit->add_option("--theta-deg", bso.theta_deg, "Target angle [deg]");
        beamsplit->add_option("--r", bso.r, "Target distance [m]");
        beamsplit->add_option("--subarrays", bso.subarrays, "TTD subarray count");

        DofOptions dopt;
        auto *dof = app.add_subcommand("dof", "LoS-MIMO effective DoF and capacity versus distance");
        dof->add_option("--aperture", dopt.aperture, "Aperture of both ULAs [m]");
        dof->add_option("--freq", dopt.freq, "Carrier frequency [Hz]");
        dof->add_option("--d-min", dopt.d_min, "Smallest distance [m]");
        dof->add_option("--d-max", dopt.d_max, "Largest distance [m]");
        dof->add_option("--points", dopt.points, "Distance points (log spaced)");
        dof->add_option("--snr", dopt.snr_db, "SNR [dB]");
        dof->add_option("--threshold", dopt.threshold, "Relative singular-value threshold");

        SdmaOptions so;
        auto *sdma = app.add_subcommand("sdma", "Same-angle multi-user ZF versus far-field steering");
        add_array_options(sdma, so.array);
        sdma->add_option("--theta-deg", so.theta_deg, "Common user angle [deg]");
        sdma->add_option("--r", so.r, "User distances [m] (repeatable; default: scenario users, else 10 and 50)");
        sdma->add_option("--snr", so.snr_db, "SNR [dB]");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &e)
        {
            out << app.help();
            return kOk;
        }
        catch (const CLI::CallForVersion &e)
        {
            out << kToolVersion << "\n";
            return kOk;
        }
        catch (const CLI::ParseError &e)
        {
            err << "error: " << e.what() << "\n\n" << app.help();
            return kConfigFailure;
        }

        const auto start = std::chrono::steady_clock::now();
        try
        {
            set_thread_count(g.threads);
            Context ctx{g, std::nullopt, {}, out};
            ctx.manifest.subcommand = app.get_subcommands().front()->get_name();
            ctx.manifest.config_path = g.config;
            ctx.manifest.threads = thread_count();
            if (!g.config.empty())
            {
                if (!std::filesystem::exists(g.config))
                    throw ConfigError("--config", "file not found: " + g.config);
                ctx.scenario = load_scenario(g.config);
                if (g.seed)
                    ctx.scenario->seed = *g.seed;
                ctx.manifest.seed = ctx.scenario->seed;
            }
            else if (g.seed)
                ctx.manifest.seed = *g.seed;

            std::error_code ec;
            std::filesystem::create_directories(g.out_dir, ec);
            if (ec)
                throw IoError("cannot create output directory '" + g.out_dir + "': " + ec.message());

            const std::string &name = ctx.manifest.subcommand;
            if (name == "boundary")
                run_boundary(ctx, bo);
            else if (name == "fieldmap")
                run_fieldmap(ctx, fo);
            else if (name == "codebook")
                run_codebook(ctx, co);
            else if (name == "estimate")
                run_estimate(ctx, eo);
            else if (name == "beamsplit")
                run_beamsplit(ctx, bso);
            else if (name == "dof")
                run_dof(ctx, dopt);
            else if (name == "sdma")
                run_sdma(ctx, so);

            ctx.manifest.wall_clock_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_text(std::filesystem::path(g.out_dir) / (name + ".manifest.json"), manifest_json(ctx.manifest));
            return kOk;
        }
        catch (const NumericError &e)
        {
            err << "numeric error: " << e.what() << "\n";
            return kNumericFailure;
        }
        catch (const IoError &e)
        {
            err << "io error: " << e.what() << "\n";
            return kNumericFailure;
        }
        catch (const ConfigError &e)
        {
            err << "config error: " << e.what() << "\n";
            return kConfigFailure;
        }
        catch (const Error &e)
        {
            err << "invalid input: " << e.what() << "\n";
            return kConfigFailure;
        }
    }

    int dispatch(int argc, char **argv)
    {
        std::vector<std::string> args(argv + 1, argv + argc);
        return dispatch(args, std::cout, std::cerr);
    }
} // namespace nearfield::cli

// SPDX-License-Identifier: Apache-2.0
//
// mpcx: multipath component extraction for idealized MIMO channel sounders
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

#include "cli.hpp"

#include "mpcx/association.hpp"
#include "mpcx/beamspace.hpp"
#include "mpcx/channel_synth.hpp"
#include "mpcx/extractor.hpp"
#include "mpcx/io.hpp"
#include "mpcx/scenario.hpp"

#include <CLI11.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace mpcx::cli
{
    namespace
    {
        namespace fs = std::filesystem;

        // Bad flag combinations and other invocation mistakes (exit code 1)
        class UsageError : public std::runtime_error
        {
        public:
            using std::runtime_error::runtime_error;
        };

        // Missing artifacts, inconsistent run directories (exit code 2)
        class DataError : public std::runtime_error
        {
        public:
            using std::runtime_error::runtime_error;
        };

        const char *const lock_name = ".mpcx.lock";

        // Exclusive marker held for the duration of one stage
        class RunLock
        {
        public:
            explicit RunLock(const fs::path &dir) : path_(dir / lock_name)
            {
                fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
                if (fd_ < 0)
                {
                    if (errno == EEXIST)
                        throw DataError("Run directory '" + dir.string() + "' is locked by another invocation (remove " +
                                        path_.string() + " if it is stale).");
                    throw DataError("Cannot create lock file " + path_.string() + ": " + std::strerror(errno));
                }
            }
            ~RunLock()
            {
                ::close(fd_);
                std::error_code ec;
                fs::remove(path_, ec);
            }
            RunLock(const RunLock &) = delete;
            RunLock &operator=(const RunLock &) = delete;

        private:
            fs::path path_;
            int fd_ = -1;
        };

        struct Options
        {
            // global
            std::optional<std::uint64_t> seed;
            std::string out_dir = ".";
            bool quiet = false;

            // sounder config
            std::string config_file;
            std::string preset;

            // scenario
            std::string spec_file;

            // synth
            std::string paths_file;
            std::optional<double> noise_power;
            std::optional<double> snr_db;
            bool degrees = false;

            // extract
            std::string response_file;
            std::size_t k_dom = 0;
            std::size_t k_g = 4;
            std::size_t k_up = 2;
            std::size_t oversample = 4;
            std::string final_ls = "true";
            std::size_t sage_sweeps = 0;
            double residual_stop = 1.0e-6;
            bool subgrid = false;

            // associate
            std::string truth_file;
            std::string estimates_file;
            double unmatched_cost = 3.0;

            // report
            std::string run_dir;
        };

        using Clock = std::chrono::steady_clock;

        std::string num(double v) { return io::format_double(v); }

        double to_db(double p) { return 10.0 * std::log10(p); }

        std::string kv(const std::string &key, const std::string &value) { return key + " = " + value + "\n"; }

        fs::path in_dir(const Options &o, const std::string &given, const char *fallback)
        {
            return given.empty() ? fs::path(o.out_dir) / fallback : fs::path(given);
        }

        void prepare_dir(const fs::path &dir)
        {
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec)
                throw DataError("Cannot create output directory '" + dir.string() + "': " + ec.message());
        }

        SounderConfig resolve_config(const Options &o, const fs::path &dir)
        {
            if (!o.preset.empty() && !o.config_file.empty())
                throw UsageError("--config and --preset are mutually exclusive.");
            if (!o.preset.empty())
            {
                try
                {
                    return preset_config(o.preset);
                }
                catch (const DomainError &e)
                {
                    throw UsageError(e.what());
                }
            }
            if (!o.config_file.empty())
                return io::read_sounder_config(o.config_file);
            if (fs::exists(dir / "sounder.cfg"))
                return io::read_sounder_config(dir / "sounder.cfg");
            throw UsageError("No sounder configuration: pass --config FILE or --preset NAME.");
        }

        void write_timing(const fs::path &dir, const std::string &stage, Clock::time_point start)
        {
            const double s = std::chrono::duration<double>(Clock::now() - start).count();
            io::write_file(dir / ("timing_" + stage + ".txt"), kv("stage", stage) + kv("seconds", num(s)));
        }

        std::string config_echo(const SounderConfig &c)
        {
            return io::format_sounder_config(c);
        }

        // --- scenario --------------------------------------------------------------------------

        void cmd_scenario(const Options &o, std::ostream &out)
        {
            const auto start = Clock::now();
            ScenarioSpec spec = read_scenario_spec(o.spec_file);
            if (o.seed)
                spec.seed = *o.seed;
            const fs::path dir = o.out_dir;
            prepare_dir(dir);
            RunLock lock(dir);

            const Scenario sc = generate_scenario(spec);
            io::write_path_csv(dir / "truth.csv", sc.retained);
            io::write_file(dir / "scenario.txt", scenario_sidecar(spec, sc));
            write_timing(dir, "scenario", start);
            if (!o.quiet)
                out << "scenario: " << sc.generated.size() << " paths generated, " << sc.retained.size()
                    << " retained -> " << (dir / "truth.csv").string() << "\n";
        }

        // --- synth -----------------------------------------------------------------------------

        void cmd_synth(const Options &o, std::ostream &out)
        {
            const auto start = Clock::now();
            if (o.noise_power && o.snr_db)
                throw UsageError("--noise-power and --snr-db are mutually exclusive.");
            if (o.noise_power && *o.noise_power < 0.0)
                throw UsageError("--noise-power must be non-negative.");

            const fs::path dir = o.out_dir;
            prepare_dir(dir);
            const SounderConfig cfg = resolve_config(o, dir);
            const fs::path paths_file = in_dir(o, o.paths_file, "truth.csv");
            const PathList paths = io::read_path_csv(paths_file, o.degrees);
            for (std::size_t i = 0; i < paths.size(); ++i)
            {
                try
                {
                    validate_path(paths[i], cfg);
                }
                catch (const DomainError &e)
                {
                    throw DataError(paths_file.string() + ": row " + std::to_string(i + 1) + " (line " +
                                    std::to_string(i + 2) + "): " + e.what());
                }
            }

            RunLock lock(dir);
            FrequencyResponse h = synthesize_response(cfg, paths);
            const double signal_power = response_power(h);
            double noise = 0.0;
            if (o.noise_power)
                noise = *o.noise_power;
            else if (o.snr_db)
                noise = signal_power / static_cast<double>(cfg.n_rx * cfg.n_tx) / std::pow(10.0, *o.snr_db / 10.0);
            const std::uint64_t seed = o.seed.value_or(1);
            h = add_awgn(h, noise, seed);

            io::write_tensor(dir / "response.bin", h.values, io::TensorKind::frequency_response);
            io::write_file(dir / "sounder.cfg", config_echo(cfg));
            if (fs::weakly_canonical(paths_file) != fs::weakly_canonical(dir / "truth.csv"))
                io::write_path_csv(dir / "truth.csv", paths);
            io::write_file(dir / "synth.txt", kv("paths", std::to_string(paths.size())) +
                                                  kv("signal_power", num(signal_power)) +
                                                  kv("noise_power_per_sample", num(noise)) +
                                                  kv("noise_seed", std::to_string(seed)));
            write_timing(dir, "synth", start);
            if (!o.quiet)
                out << "synth: " << paths.size() << " paths, tensor (" << cfg.n_rx << ", " << cfg.n_tx << ", "
                    << cfg.n_freq << ") -> " << (dir / "response.bin").string() << "\n";
        }

        // --- extract ---------------------------------------------------------------------------

        ExtractionConfig extraction_config(const Options &o)
        {
            if (o.k_dom == 0)
                throw UsageError("--kdom must be positive.");
            if (o.k_up > o.k_g)
                throw UsageError("--kup (" + std::to_string(o.k_up) + ") must not exceed --kg (" +
                                 std::to_string(o.k_g) + ").");
            if (o.k_g > o.k_dom)
                throw UsageError("--kg must not exceed --kdom.");
            if (o.oversample == 0)
                throw UsageError("--oversample must be positive.");
            if (o.residual_stop < 0.0)
                throw UsageError("--residual-stop must be non-negative.");

            ExtractionConfig x;
            x.k_dom = o.k_dom;
            x.k_g = o.k_g;
            x.k_up = o.k_up;
            x.grid = GridSpec{o.oversample, o.oversample, o.oversample, 0.0};
            x.residual_stop = o.residual_stop;
            try
            {
                x.final_global_ls = io::parse_bool(o.final_ls, 0, "--final-ls");
            }
            catch (const ParseError &e)
            {
                throw UsageError(e.what());
            }
            x.subgrid_refine = o.subgrid;
            try
            {
                x.validate();
            }
            catch (const DomainError &e)
            {
                throw UsageError(e.what());
            }
            return x;
        }

        void cmd_extract(const Options &o, std::ostream &out)
        {
            const auto start = Clock::now();
            const ExtractionConfig x = extraction_config(o);
            const fs::path dir = o.out_dir;
            prepare_dir(dir);
            const SounderConfig cfg = resolve_config(o, dir);
            const FrequencyResponse h = io::read_response(in_dir(o, o.response_file, "response.bin"), cfg);

            RunLock lock(dir);
            const ExtractionResult res = greedy_ls(h, x);
            PathList est = res.paths;
            std::vector<double> sage_errors;
            if (o.sage_sweeps > 0 && !est.empty())
            {
                SageResult s = sage_refine(h, est, x.grid, o.sage_sweeps);
                est = std::move(s.paths);
                sage_errors = std::move(s.error_per_sweep);
            }

            const double initial = response_power(h);
            const double error = initial > 0.0 ? reconstruction_error(reconstruct(est, cfg), h) : 0.0;

            io::write_path_csv(dir / "estimates.csv", est);
            {
                std::string t = "commit_index,residual_power_db\n0," + num(to_db(initial)) + "\n";
                for (std::size_t i = 0; i < res.trace.residual_power.size(); ++i)
                    t += std::to_string(i + 1) + "," + num(to_db(res.trace.residual_power[i])) + "\n";
                io::write_file(dir / "trace.csv", t);
            }
            {
                std::string t = "commit_index,gain_power_db\n";
                for (std::size_t i = 0; i < res.trace.committed_gain_power.size(); ++i)
                    t += std::to_string(i + 1) + "," + num(to_db(res.trace.committed_gain_power[i])) + "\n";
                io::write_file(dir / "commit_power.csv", t);
            }

            std::string r = config_echo(cfg);
            r += kv("k_dom", std::to_string(x.k_dom)) + kv("k_g", std::to_string(x.k_g)) +
                 kv("k_up", std::to_string(x.k_up)) + kv("oversample", std::to_string(o.oversample)) +
                 kv("final_ls", x.final_global_ls ? "true" : "false") +
                 kv("sage_sweeps", std::to_string(o.sage_sweeps)) + kv("residual_stop", num(x.residual_stop)) +
                 kv("subgrid", x.subgrid_refine ? "true" : "false");
            r += kv("estimated_paths", std::to_string(est.size())) + kv("initial_power", num(initial)) +
                 kv("final_residual_power",
                    num(res.trace.residual_power.empty() ? initial : res.trace.residual_power.back())) +
                 kv("normalized_error", num(error));
            double max_cond = 0.0;
            for (double c : res.trace.ls_condition)
                max_cond = std::max(max_cond, c);
            r += kv("ls_solves", std::to_string(res.trace.ls_condition.size())) +
                 kv("max_ls_condition", num(max_cond));
            for (std::size_t i = 0; i < sage_errors.size(); ++i)
                r += kv("sage_error_sweep_" + std::to_string(i + 1), num(sage_errors[i]));
            r += kv("notes", std::to_string(res.notes.size()));
            for (std::size_t i = 0; i < res.notes.size(); ++i)
                r += kv("note_" + std::to_string(i + 1), res.notes[i]);
            io::write_file(dir / "extract_report.txt", r);
            io::write_file(dir / "sounder.cfg", config_echo(cfg));
            write_timing(dir, "extract", start);

            if (!o.quiet)
                out << "extract: " << est.size() << " paths, normalized error " << num(error) << " -> "
                    << (dir / "estimates.csv").string() << "\n";
        }

        // --- associate -------------------------------------------------------------------------

        std::string association_text(const AssociationResult &a, std::size_t n_phys, std::size_t n_est,
                                     double unmatched_cost)
        {
            std::string r;
            r += kv("unmatched_cost", num(unmatched_cost)) + kv("n_phys", std::to_string(n_phys)) +
                 kv("n_est", std::to_string(n_est)) + kv("k_pa", std::to_string(a.pairs.size())) +
                 kv("pre_pa_cost", num(a.pre_pa_cost)) + kv("post_pa_cost", num(a.post_pa_cost)) +
                 kv("post_over_pre", num(a.pre_pa_cost > 0.0 ? a.post_pa_cost / a.pre_pa_cost : 0.0)) +
                 kv("s_delay", std::to_string(a.bin_sets.delay.size())) +
                 kv("s_aoa", std::to_string(a.bin_sets.aoa.size())) +
                 kv("s_aod", std::to_string(a.bin_sets.aod.size())) +
                 kv("s_joint", std::to_string(a.bin_sets.joint.size())) +
                 kv("unmatched_phys", std::to_string(a.unmatched_phys.size())) +
                 kv("unmatched_est", std::to_string(a.unmatched_est.size()));
            return r;
        }

        std::string pairs_csv(const AssociationResult &a, const PathList &phys, const PathList &est,
                              const ResolutionSpec &res)
        {
            std::vector<char> joint(a.pairs.size(), 0);
            for (std::size_t k : a.bin_sets.joint)
                joint[k] = 1;
            std::string t = "phys_idx,est_idx,cost,delay_err_bins,aoa_err_bins,aod_err_bins,in_joint\n";
            for (std::size_t k = 0; k < a.pairs.size(); ++k)
            {
                const auto &p = a.pairs[k];
                const auto e = axis_errors(phys[p.phys_index], est[p.est_index], res);
                t += std::to_string(p.phys_index) + "," + std::to_string(p.est_index) + "," + num(p.cost) + "," +
                     num(e.delay_bins) + "," + num(e.aoa_bins) + "," + num(e.aod_bins) + "," +
                     (joint[k] ? "1" : "0") + "\n";
            }
            return t;
        }

        void cmd_associate(const Options &o, std::ostream &out)
        {
            const auto start = Clock::now();
            if (!(o.unmatched_cost > 0.0))
                throw UsageError("--unmatched-cost must be positive.");
            const fs::path dir = o.out_dir;
            prepare_dir(dir);
            const SounderConfig cfg = resolve_config(o, dir);
            const PathList phys = io::read_path_csv(in_dir(o, o.truth_file, "truth.csv"));
            const PathList est = io::read_path_csv(in_dir(o, o.estimates_file, "estimates.csv"));
            if (phys.empty() || est.empty())
                throw DataError("associate: truth and estimate lists must both be non-empty.");

            RunLock lock(dir);
            const auto res = ResolutionSpec::from_config(cfg);
            const AssociationResult a = associate(phys, est, res, o.unmatched_cost);
            io::write_file(dir / "association.txt", association_text(a, phys.size(), est.size(), o.unmatched_cost));
            io::write_file(dir / "pairs.csv", pairs_csv(a, phys, est, res));
            write_timing(dir, "associate", start);
            if (!o.quiet)
                out << "associate: K_pa = " << a.pairs.size() << ", |S_joint| = " << a.bin_sets.joint.size()
                    << ", post/pre cost = " << num(a.pre_pa_cost > 0.0 ? a.post_pa_cost / a.pre_pa_cost : 0.0)
                    << "\n";
        }

        // --- report ----------------------------------------------------------------------------

        std::map<std::string, std::string> read_kv_map(const fs::path &file)
        {
            std::map<std::string, std::string> m;
            for (auto &e : io::read_key_values(file))
                m.emplace(e.key, e.value);
            return m;
        }

        const std::string &field(const std::map<std::string, std::string> &m, const std::string &key,
                                 const fs::path &file)
        {
            const auto it = m.find(key);
            if (it == m.end())
                throw DataError("Artifact " + file.string() + " lacks field '" + key + "'.");
            return it->second;
        }

        std::string scatter_csv(const PathList &paths)
        {
            std::string t = "index,delay_s,aod_cycles,aoa_cycles,power_db\n";
            for (std::size_t i = 0; i < paths.size(); ++i)
                t += std::to_string(i) + "," + num(paths[i].delay) + "," + num(paths[i].aod) + "," +
                     num(paths[i].aoa) + "," + num(to_db(paths[i].power())) + "\n";
            return t;
        }

        void cmd_report(const Options &o, std::ostream &out)
        {
            const auto start = Clock::now();
            const fs::path dir = o.run_dir.empty() ? fs::path(o.out_dir) : fs::path(o.run_dir);
            if (!fs::is_directory(dir))
                throw DataError("Run directory '" + dir.string() + "' does not exist.");

            const std::pair<const char *, const char *> needed[] = {
                {"truth.csv", "scenario"},        {"sounder.cfg", "synth"},       {"response.bin", "synth"},
                {"estimates.csv", "extract"},     {"trace.csv", "extract"},       {"extract_report.txt", "extract"},
                {"association.txt", "associate"}, {"pairs.csv", "associate"},
            };
            for (const auto &[file, stage] : needed)
                if (!fs::exists(dir / file))
                    throw DataError(std::string("Missing artifact '") + file + "' from the '" + stage +
                                    "' stage in " + dir.string() + ".");

            RunLock lock(dir);
            const SounderConfig cfg = io::read_sounder_config(dir / "sounder.cfg");
            const PathList truth = io::read_path_csv(dir / "truth.csv");
            const PathList est = io::read_path_csv(dir / "estimates.csv");
            const FrequencyResponse h = io::read_response(dir / "response.bin", cfg);
            const auto xrep = read_kv_map(dir / "extract_report.txt");
            const auto arep = read_kv_map(dir / "association.txt");
            if (truth.empty() || est.empty())
                throw DataError("Run directory holds an empty truth or estimate list.");

            // recomputation from the raw artifacts
            const double initial = response_power(h);
            const double error = initial > 0.0 ? reconstruction_error(reconstruct(est, cfg), h) : 0.0;
            const double um = io::parse_double(field(arep, "unmatched_cost", dir / "association.txt"), 0,
                                               "unmatched_cost");
            const auto res = ResolutionSpec::from_config(cfg);
            const AssociationResult a = associate(truth, est, res, um);
            const std::string atext = association_text(a, truth.size(), est.size(), um);

            std::vector<std::string> mismatches;
            if (field(xrep, "normalized_error", dir / "extract_report.txt") != num(error))
                mismatches.push_back("normalized_error");
            if (field(xrep, "estimated_paths", dir / "extract_report.txt") != std::to_string(est.size()))
                mismatches.push_back("estimated_paths");
            if (io::read_file(dir / "association.txt") != atext)
                mismatches.push_back("association.txt");
            if (io::read_file(dir / "pairs.csv") != pairs_csv(a, truth, est, res))
                mismatches.push_back("pairs.csv");

            const std::size_t os = io::parse_size(field(xrep, "oversample", dir / "extract_report.txt"), 0,
                                                  "oversample");
            const GridSpec spec{os, os, os, 0.0};
            const BeamspaceGrid grid = beamspace_transform(h, spec);
            const PdpMaps maps = pdp_marginals(grid);
            io::write_file(dir / "fig2_truth.csv", scatter_csv(truth));
            io::write_file(dir / "fig3_pdp_aoa_aod.csv",
                           io::format_matrix_csv(maps.aoa_aod, grid.axes.aoa, grid.axes.aod, "aoa_cycles\\aod_cycles"));
            io::write_file(dir / "fig3_pdp_aoa_delay.csv",
                           io::format_matrix_csv(maps.aoa_delay, grid.axes.aoa, grid.axes.delay, "aoa_cycles\\delay_s"));
            io::write_file(dir / "fig4_estimates.csv", scatter_csv(est));
            {
                std::vector<char> joint(a.pairs.size(), 0);
                for (std::size_t k : a.bin_sets.joint)
                    joint[k] = 1;
                std::string t = "pair,phys_idx,est_idx,phys_delay_s,phys_aod_cycles,phys_aoa_cycles,phys_power_db,"
                                "est_delay_s,est_aod_cycles,est_aoa_cycles,est_power_db,in_joint\n";
                std::string e = "pair,delay_err_bins,aoa_err_bins,aod_err_bins,cost\n";
                for (std::size_t k = 0; k < a.pairs.size(); ++k)
                {
                    const auto &p = truth[a.pairs[k].phys_index];
                    const auto &q = est[a.pairs[k].est_index];
                    t += std::to_string(k) + "," + std::to_string(a.pairs[k].phys_index) + "," +
                         std::to_string(a.pairs[k].est_index) + "," + num(p.delay) + "," + num(p.aod) + "," +
                         num(p.aoa) + "," + num(to_db(p.power())) + "," + num(q.delay) + "," + num(q.aod) + "," +
                         num(q.aoa) + "," + num(to_db(q.power())) + "," + (joint[k] ? "1" : "0") + "\n";
                    const auto ae = axis_errors(p, q, res);
                    e += std::to_string(k) + "," + num(ae.delay_bins) + "," + num(ae.aoa_bins) + "," +
                         num(ae.aod_bins) + "," + num(a.pairs[k].cost) + "\n";
                }
                io::write_file(dir / "fig5_associated.csv", t);
                io::write_file(dir / "fig6_errors.csv", e);
            }
            io::write_file(dir / "fig6_residual.csv", io::read_file(dir / "trace.csv"));

            std::string r = config_echo(cfg);
            r += kv("n_p", std::to_string(truth.size())) + kv("k_dom", field(xrep, "k_dom", dir / "extract_report.txt")) +
                 kv("estimated_paths", std::to_string(est.size())) + kv("k_pa", std::to_string(a.pairs.size())) +
                 kv("normalized_error", num(error)) + kv("pre_pa_cost", num(a.pre_pa_cost)) +
                 kv("post_pa_cost", num(a.post_pa_cost)) +
                 kv("post_over_pre", num(a.pre_pa_cost > 0.0 ? a.post_pa_cost / a.pre_pa_cost : 0.0)) +
                 kv("s_delay", std::to_string(a.bin_sets.delay.size())) +
                 kv("s_aoa", std::to_string(a.bin_sets.aoa.size())) +
                 kv("s_aod", std::to_string(a.bin_sets.aod.size())) +
                 kv("s_joint", std::to_string(a.bin_sets.joint.size())) +
                 kv("unmatched_phys", std::to_string(a.unmatched_phys.size())) +
                 kv("unmatched_est", std::to_string(a.unmatched_est.size())) + kv("unmatched_cost", num(um)) +
                 kv("oversample", std::to_string(os));
            std::string consistency = "ok";
            if (!mismatches.empty())
            {
                consistency = "mismatch:";
                for (const auto &m : mismatches)
                    consistency += " " + m;
            }
            r += kv("consistency", consistency);
            io::write_file(dir / "run_report.txt", r);

            // per-stage timing lives apart from the deterministic artifacts
            write_timing(dir, "report", start);
            std::string timing;
            for (const char *stage : {"scenario", "synth", "extract", "associate", "report"})
            {
                const fs::path f = dir / (std::string("timing_") + stage + ".txt");
                if (fs::exists(f))
                    timing += kv(stage, field(read_kv_map(f), "seconds", f));
            }
            io::write_file(dir / "timing_summary.txt", timing);

            if (!o.quiet)
                out << "report: N_p = " << truth.size() << ", K_pa = " << a.pairs.size() << ", normalized error "
                    << num(error) << ", consistency " << consistency << "\n";
            if (!mismatches.empty())
                throw DataError("Run directory artifacts disagree with their recomputation (" + consistency + ").");
        }

        void add_config_flags(CLI::App *sub, Options &o)
        {
            sub->add_option("--config", o.config_file, "Sounder config file (key = value)");
            sub->add_option("--preset", o.preset, "Named sounder preset: paper or desk");
        }
    }

    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        Options o;
        CLI::App app{"Multipath component extraction for idealized MIMO channel sounders", "mpcx"};
        app.require_subcommand(1);
        app.fallthrough();
        app.add_option("--seed", o.seed, "Seed for scenario draws and noise");
        app.add_option("--out-dir", o.out_dir, "Run directory for all artifacts")->capture_default_str();
        app.add_flag("--quiet", o.quiet, "Suppress progress output");

        auto *scenario = app.add_subcommand("scenario", "Generate a clustered ground-truth path list");
        scenario->add_option("spec", o.spec_file, "Scenario spec file")->required();

        auto *synth = app.add_subcommand("synth", "Synthesize the sounder frequency response");
        add_config_flags(synth, o);
        synth->add_option("--paths", o.paths_file, "Path-list CSV (default: <out-dir>/truth.csv)");
        synth->add_option("--noise-power", o.noise_power, "AWGN variance per tensor entry");
        synth->add_option("--snr-db", o.snr_db, "AWGN from per-entry signal power / noise power in dB");
        synth->add_flag("--degrees", o.degrees, "Angle columns hold physical angles in degrees");

        auto *extract = app.add_subcommand("extract", "Greedy-LS extraction (optionally SAGE refined)");
        add_config_flags(extract, o);
        extract->add_option("--response", o.response_file, "Response tensor (default: <out-dir>/response.bin)");
        extract->add_option("--kdom", o.k_dom, "Committed-path budget")->required();
        extract->add_option("--kg", o.k_g, "Candidates detected per iteration")->capture_default_str();
        extract->add_option("--kup", o.k_up, "Candidates committed per iteration")->capture_default_str();
        extract->add_option("--oversample", o.oversample, "Grid oversampling on every axis")->capture_default_str();
        extract->add_option("--final-ls", o.final_ls, "Global LS over all committed paths")->capture_default_str();
        extract->add_option("--sage-sweeps", o.sage_sweeps, "SAGE sweeps after greedy-LS")->capture_default_str();
        extract->add_option("--residual-stop", o.residual_stop, "Stop at residual / initial power")
            ->capture_default_str();
        extract->add_flag("--subgrid", o.subgrid, "Quadratic sub-grid peak refinement");

        auto *assoc = app.add_subcommand("associate", "Optimal truth/estimate association and bin metrics");
        add_config_flags(assoc, o);
        assoc->add_option("--truth", o.truth_file, "Truth CSV (default: <out-dir>/truth.csv)");
        assoc->add_option("--estimates", o.estimates_file, "Estimates CSV (default: <out-dir>/estimates.csv)");
        assoc->add_option("--unmatched-cost", o.unmatched_cost, "Cost per unmatched path")->capture_default_str();

        auto *report = app.add_subcommand("report", "Consolidated run report and plot data");
        report->add_option("run_dir", o.run_dir, "Run directory (default: --out-dir)");

        try
        {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return exit_ok;
        }
        catch (const CLI::CallForAllHelp &)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return exit_ok;
        }
        catch (const CLI::ParseError &e)
        {
            err << "mpcx: " << e.what() << "\n";
            return exit_usage;
        }

        try
        {
            if (scenario->parsed())
                cmd_scenario(o, out);
            else if (synth->parsed())
                cmd_synth(o, out);
            else if (extract->parsed())
                cmd_extract(o, out);
            else if (assoc->parsed())
                cmd_associate(o, out);
            else if (report->parsed())
                cmd_report(o, out);
        }
        catch (const UsageError &e)
        {
            err << "mpcx: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const ParseError &e)
        {
            err << "mpcx: " << e.what() << "\n";
            return exit_data;
        }
        catch (const std::exception &e)
        {
            err << "mpcx: " << e.what() << "\n";
            return exit_data;
        }
        return exit_ok;
    }

    int run(int argc, char **argv)
    {
        std::vector<std::string> args;
        for (int i = 1; i < argc; ++i)
            args.emplace_back(argv[i]);
        return run(args, std::cout, std::cerr);
    }
}

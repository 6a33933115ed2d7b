// Copyright 2026 The condyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "condyn/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "condyn/analysis.hpp"
#include "condyn/io.hpp"
#include "condyn/oracle.hpp"
#include "condyn/trajectories.hpp"

namespace condyn::cli {

namespace {

class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class Stopwatch {
   public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> parse_list(const std::string &text, const char *what) {
    std::vector<double> out;
    std::stringstream ss(text);
    ss.imbue(std::locale::classic());
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error &) {
            throw UsageError(std::string("cannot parse ") + what + " entry '" + item + "'");
        }
    }
    return out;
}

MeasurementAxis parse_axis(const std::string &text) {
    auto v = parse_list(text, "axis");
    if (v.size() != 3) {
        throw UsageError("axis must be given as x,y,z");
    }
    try {
        return {v[0], v[1], v[2]};
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

/// Flags shared by trajectory, ensemble and scaling.
struct TrajectoryFlags {
    double epsilon = 0.01;
    std::string axis1;
    std::string axis2;
    std::int64_t steps = 50000;
    std::uint64_t seed = 1;
    double rho11 = 0.5;
    double rho10_re = 0.0;
    double rho10_im = 0.0;
    std::string mode = "exact";
    std::string out;

    CLI::Option *epsilon_opt = nullptr;
    CLI::Option *axis1_opt = nullptr;
    CLI::Option *axis2_opt = nullptr;

    void add_to(CLI::App *app, bool with_measurement) {
        if (with_measurement) {
            epsilon_opt = app->add_option("--epsilon", epsilon, "z-component of both observers' axes (x = sqrt(1-eps^2))");
            axis1_opt = app->add_option("--axis1", axis1, "observer 1 axis as x,y,z");
            axis2_opt = app->add_option("--axis2", axis2, "observer 2 axis as x,y,z");
            app->add_option("--steps", steps, "number of environment pairs")->capture_default_str();
        }
        app->add_option("--seed", seed, "RNG seed")->capture_default_str();
        app->add_option("--rho11", rho11, "initial population of |1>")->capture_default_str();
        app->add_option("--rho10-re", rho10_re, "initial coherence <1|rho|0>, real part")->capture_default_str();
        app->add_option("--rho10-im", rho10_im, "initial coherence <1|rho|0>, imaginary part")->capture_default_str();
        app->add_option("--mode", mode, "exact | small-eps")->capture_default_str();
    }

    DensityMatrix initial_rho() const {
        try {
            return {rho11, Complex(rho10_re, rho10_im), 1.0 - rho11};
        } catch (const std::invalid_argument &e) {
            throw UsageError(std::string("invalid initial state: ") + e.what());
        }
    }

    TrajectoryConfig config() const {
        TrajectoryConfig c;
        bool explicit_axes = axis1_opt != nullptr && (axis1_opt->count() > 0 || axis2_opt->count() > 0);
        if (explicit_axes) {
            if (epsilon_opt->count() > 0) {
                throw UsageError("--epsilon and --axis1/--axis2 are mutually exclusive");
            }
            if (axis1_opt->count() == 0 || axis2_opt->count() == 0) {
                throw UsageError("explicit axes need both --axis1 and --axis2");
            }
            c.axes = ObserverPair{parse_axis(axis1), parse_axis(axis2)};
        } else {
            c.epsilon = epsilon;
        }
        c.steps = steps;
        c.seed = seed;
        c.initial_rho = initial_rho();
        try {
            c.mode = parse_trajectory_mode(mode);
            c.validate();
        } catch (const ResourceGuard &) {
            throw;
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

std::string with_suffix(const std::string &prefix, const std::string &suffix) { return prefix + suffix; }

void write_manifest(const std::string &prefix, RunManifest manifest, const Stopwatch &clock) {
    manifest.wall_seconds = clock.seconds();
    write_file(with_suffix(prefix, ".manifest.json"), manifest.to_json().dump(2) + "\n");
}

int cmd_trajectory(const TrajectoryFlags &flags, std::ostream &out) {
    Stopwatch clock;
    TrajectoryConfig config = flags.config();
    std::string prefix = flags.out.empty() ? "trajectory" : flags.out;
    Trajectory traj = run_trajectory(config, 0);
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_file(with_suffix(prefix, ".csv"), csv.str());
    write_manifest(prefix, {"trajectory", to_json(config), config.seed}, clock);
    const auto &last = traj.points.back();
    out << "wrote " << prefix << ".csv (" << traj.points.size() << " steps); final A=" << format_double(last.a_sup)
        << " A1=" << format_double(last.a_obs1) << " A2=" << format_double(last.a_obs2) << "\n";
    return kSuccess;
}

std::string settling_histogram_csv(const EnsembleSummary &s, int bins) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    const double width = static_cast<double>(s.config.steps) / bins;
    for (const auto &t : s.trajectories) {
        if (t.settling_step) {
            auto b = static_cast<int>(static_cast<double>(*t.settling_step - 1) / width);
            ++counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
        }
    }
    std::ostringstream csv;
    csv << "bin_lo,bin_hi,count\n";
    for (int b = 0; b < bins; ++b) {
        csv << format_double(b * width) << ',' << format_double((b + 1) * width) << ','
            << std::to_string(counts[static_cast<std::size_t>(b)]) << '\n';
    }
    csv << "censored,censored," << std::to_string(s.settling.censored) << '\n';
    return csv.str();
}

int cmd_ensemble(const TrajectoryFlags &flags, std::int64_t count, SettlingThresholds th, int bins, std::ostream &out) {
    Stopwatch clock;
    TrajectoryConfig config = flags.config();
    if (count < 1) {
        throw UsageError("--count must be at least 1");
    }
    if (bins < 1) {
        throw UsageError("--hist-bins must be at least 1");
    }
    try {
        th.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    std::string prefix = flags.out.empty() ? "ensemble" : flags.out;
    EnsembleSummary s = summarize_ensemble(config, count, th);

    std::ostringstream per;
    per << "index,settling_step,agreement_step,final_agree,final_a_sup,final_a_obs1,final_a_obs2\n";
    for (const auto &t : s.trajectories) {
        per << std::to_string(t.index) << ',' << (t.settling_step ? std::to_string(*t.settling_step) : "") << ','
            << (t.agreement_step ? std::to_string(*t.agreement_step) : "") << ',' << (t.final_agree ? 1 : 0) << ','
            << format_double(t.final_a_sup) << ',' << format_double(t.final_a_obs1) << ','
            << format_double(t.final_a_obs2) << '\n';
    }
    write_file(with_suffix(prefix, ".trajectories.csv"), per.str());

    std::ostringstream curve;
    curve << "step,agree_fraction,mean_a_sup,sd_a_sup\n";
    for (std::size_t i = 0; i < s.agreement.curve.size(); ++i) {
        curve << std::to_string(i + 1) << ',' << format_double(s.agreement.curve[i]) << ','
              << format_double(s.mean_a_sup[i]) << ',' << format_double(s.sd_a_sup[i]) << '\n';
    }
    write_file(with_suffix(prefix, ".agreement.csv"), curve.str());
    write_file(with_suffix(prefix, ".settling_hist.csv"), settling_histogram_csv(s, bins));

    nlohmann::json summary = {
        {"count", count},
        {"thresholds", {{"hi", th.hi}, {"lo", th.lo}}},
        {"settling", to_json(s.settling)},
        {"agreement", to_json(s.agreement, false)},
        {"state_audit", to_json(s.audit)},
    };
    write_file(with_suffix(prefix, ".summary.json"), summary.dump(2) + "\n");

    nlohmann::json cfg = to_json(config);
    cfg["count"] = count;
    cfg["settle_hi"] = th.hi;
    cfg["settle_lo"] = th.lo;
    cfg["hist_bins"] = bins;
    write_manifest(prefix, {"ensemble", cfg, config.seed}, clock);

    out << "ensemble of " << count << ": settled " << s.settling.settled << ", censored " << s.settling.censored;
    if (s.settling.mean_settled) {
        out << ", mean settling steps " << format_double(*s.settling.mean_settled);
    }
    out << ", final agreement " << format_double(s.agreement.fraction_all_agree_final) << "\n";
    return kSuccess;
}

int cmd_scaling(const TrajectoryFlags &flags, const std::string &eps_list, std::int64_t count, std::int64_t cap,
                SettlingThresholds th, bool self_test, std::ostream &out) {
    Stopwatch clock;
    std::string prefix = flags.out.empty() ? "scaling" : flags.out;
    std::vector<std::pair<double, double>> points;
    nlohmann::json per_eps = nlohmann::json::array();
    nlohmann::json cfg;

    if (self_test) {
        // Exact power law c / eps^2 with c = 0.5.
        for (double eps : {0.05, 0.1, 0.2}) {
            points.emplace_back(eps, 0.5 / (eps * eps));
        }
        cfg = {{"self_test", true}};
    } else {
        std::vector<double> epsilons = parse_list(eps_list, "epsilon");
        if (epsilons.size() < 3) {
            throw UsageError("--epsilons needs at least 3 values");
        }
        if (count < 1 || cap < 1) {
            throw UsageError("--count and --steps-cap must be positive");
        }
        TrajectoryConfig base = flags.config();
        cfg = to_json(base);
        cfg["epsilons"] = epsilons;
        cfg["count"] = count;
        cfg["steps_cap"] = cap;
        cfg["settle_hi"] = th.hi;
        cfg["settle_lo"] = th.lo;
        for (double eps : epsilons) {
            if (!(eps > 0.0 && eps <= 1.0)) {
                throw UsageError("epsilons must lie in (0, 1]");
            }
            TrajectoryConfig c = base;
            c.epsilon = eps;
            c.steps = cap;
            EnsembleSummary s = summarize_ensemble(c, count, th);
            if (!s.settling.mean_settled) {
                throw std::runtime_error("no trajectory settled for epsilon " + format_double(eps) +
                                         "; raise --steps-cap");
            }
            points.emplace_back(eps, *s.settling.mean_settled);
            nlohmann::json e = to_json(s.settling);
            e["epsilon"] = eps;
            per_eps.push_back(e);
        }
    }
    ScalingResult r;
    try {
        r = scaling_fit(points);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    nlohmann::json j = to_json(r);
    j["per_epsilon"] = per_eps;
    write_file(with_suffix(prefix, ".json"), j.dump(2) + "\n");
    std::ostringstream dat;
    dat << "# epsilon mean_settling_steps\n";
    for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
        dat << format_double(r.epsilons[i]) << ' ' << format_double(r.mean_settling_steps[i]) << '\n';
    }
    write_file(with_suffix(prefix, ".dat"), dat.str());
    write_manifest(prefix, {"scaling", cfg, flags.seed}, clock);
    out << "fitted exponent " << format_double(r.fitted_exponent) << " (residual " << format_double(r.fit_residual)
        << ")\n";
    return kSuccess;
}

std::string outcome_label(const std::vector<Outcome> &outcomes) {
    std::string s;
    for (Outcome n : outcomes) {
        s += n == Outcome::plus ? '+' : '-';
    }
    return s;
}

void print_rows(std::ostream &out, const std::vector<GhzRow> &rows) {
    for (const auto &r : rows) {
        out << "  " << outcome_label(r.outcomes) << "  p=" << format_double(r.probability)
            << "  system=" << classify_state(r.system_state, 1e-12) << "  " << to_string(r.system_state) << "\n";
    }
}

/// "decisive" if every outcome leaves a pure system state, "uninformative" if every outcome leaves
/// the unconditional mixed state.
std::string informativeness(const std::vector<GhzRow> &rows) {
    bool all_pure = std::all_of(rows.begin(), rows.end(), [](const GhzRow &r) { return purity(r.system_state) > 1 - 1e-12; });
    bool all_mixed = std::all_of(rows.begin(), rows.end(),
                                 [](const GhzRow &r) { return classify_state(r.system_state, 1e-12) == "mixed"; });
    return all_pure ? "decisive" : (all_mixed ? "uninformative" : "partial");
}

int cmd_ghz(const std::string &b1, const std::string &b2, std::ostream &out) {
    GhzBasis basis1;
    std::optional<GhzBasis> basis2;
    try {
        basis1 = parse_ghz_basis(b1);
        if (!b2.empty()) {
            basis2 = parse_ghz_basis(b2);
        }
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    GhzTable t = ghz_scenario(basis1, basis2);
    out << "state (|1>|1>|1> + |0>|0>|0>)/sqrt(2); observer 1 measures E1 in " << to_string(basis1);
    if (basis2) {
        out << ", then observer 2 measures E2 in " << to_string(*basis2);
    }
    out << "\njoint outcomes:\n";
    print_rows(out, t.joint);
    out << "observer 1 alone (" << informativeness(t.observer1) << "):\n";
    print_rows(out, t.observer1);
    if (basis2) {
        out << "observer 2 alone (" << informativeness(t.observer2) << "):\n";
        print_rows(out, t.observer2);
        if (basis1 == GhzBasis::hadamard && *basis2 == GhzBasis::hadamard) {
            bool parity = std::all_of(t.joint.begin(), t.joint.end(), [](const GhzRow &r) {
                std::string expect = r.outcomes[0] == r.outcomes[1] ? "+" : "-";
                return classify_state(r.system_state, 1e-12) == expect;
            });
            out << "parity rule: '++'/'--' -> system '+', '+-'/'-+' -> system '-': " << (parity ? "holds" : "VIOLATED")
                << "\n";
        }
    }
    return kSuccess;
}

int cmd_verify(const VerifyOptions &opts, std::ostream &out) {
    auto results = run_verification(opts);
    bool ok = true;
    out << "verification: " << opts.instances << " random instances, " << opts.steps << " steps, seed " << opts.seed
        << (opts.inject_fault ? " (fault injected)" : "") << "\n";
    for (const auto &r : results) {
        out << "  " << (r.passed() ? "PASS" : "FAIL") << "  " << r.name << "  max deviation "
            << format_double(r.max_deviation) << " (tol " << format_double(r.tolerance) << ")\n";
        ok = ok && r.passed();
    }
    return ok ? kSuccess : kVerificationFailure;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Conditional dynamics of a qubit monitored by two observers through a CNOT environment"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    TrajectoryFlags traj_flags;
    auto *traj = app.add_subcommand("trajectory", "simulate one trajectory, write CSV + manifest");
    traj_flags.add_to(traj, true);
    traj->add_option("--out", traj_flags.out, "output path prefix")->default_str("trajectory");

    TrajectoryFlags ens_flags;
    std::int64_t count = 1000;
    SettlingThresholds th;
    int bins = 50;
    auto *ens = app.add_subcommand("ensemble", "simulate an ensemble, write summaries + manifest");
    ens_flags.add_to(ens, true);
    ens->add_option("--count", count, "number of trajectories")->capture_default_str();
    ens->add_option("--settle-hi", th.hi, "settling entry threshold on |A|")->capture_default_str();
    ens->add_option("--settle-lo", th.lo, "settling exit threshold on |A|")->capture_default_str();
    ens->add_option("--hist-bins", bins, "settling histogram bins")->capture_default_str();
    ens->add_option("--out", ens_flags.out, "output path prefix")->default_str("ensemble");

    TrajectoryFlags sc_flags;
    std::string eps_list;
    std::int64_t sc_count = 1000;
    std::int64_t cap = 20000;
    SettlingThresholds sc_th;
    bool self_test = false;
    auto *sc = app.add_subcommand("scaling", "fit mean settling time against epsilon");
    sc_flags.add_to(sc, false);
    sc->add_option("--epsilons", eps_list, "comma-separated epsilons (at least 3)");
    sc->add_option("--count", sc_count, "trajectories per epsilon")->capture_default_str();
    sc->add_option("--steps-cap", cap, "horizon per trajectory")->capture_default_str();
    sc->add_option("--settle-hi", sc_th.hi, "settling entry threshold on |A|")->capture_default_str();
    sc->add_option("--settle-lo", sc_th.lo, "settling exit threshold on |A|")->capture_default_str();
    sc->add_flag("--self-test", self_test, "fit a synthetic exact power law instead of simulating");
    sc->add_option("--out", sc_flags.out, "output path prefix")->default_str("scaling");

    std::string basis1;
    std::string basis2;
    auto *ghz = app.add_subcommand("ghz", "GHZ thought experiment: joint outcome table");
    ghz->add_option("--basis1", basis1, "z | hadamard")->required();
    ghz->add_option("--basis2", basis2, "z | hadamard (omit: observer 2 does not measure)");

    VerifyOptions vopts;
    auto *ver = app.add_subcommand("verify", "check the exact identities on random instances");
    ver->add_option("--steps", vopts.steps, "enumeration depth (<= 6)")->capture_default_str();
    ver->add_option("--instances", vopts.instances, "random instances")->capture_default_str();
    ver->add_option("--seed", vopts.seed, "instance seed")->capture_default_str();
    ver->add_flag("--inject-fault", vopts.inject_fault, "perturb one side of the oracle comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*traj) {
            return cmd_trajectory(traj_flags, out);
        }
        if (*ens) {
            return cmd_ensemble(ens_flags, count, th, bins, out);
        }
        if (*sc) {
            return cmd_scaling(sc_flags, eps_list, sc_count, cap, sc_th, self_test, out);
        }
        if (*ghz) {
            return cmd_ghz(basis1, basis2, out);
        }
        if (*ver) {
            return cmd_verify(vopts, out);
        }
    } catch (const ResourceGuard &e) {
        err << "error: " << e.what() << "\n";
        return kResourceGuard;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return kUsageError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace condyn::cli

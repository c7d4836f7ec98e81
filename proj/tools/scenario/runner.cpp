#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <span>
#include <vector>

#include "biphoton/counting.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/polarimetry.hpp"
#include "biphoton/spectral_model.hpp"
#include "biphoton/units.hpp"

namespace biphoton::scenario {

namespace {

// Values the model is compared against in the delay and budget reports.
constexpr double kReferenceCalculatedDelayFs = 31.2;
constexpr double kReferenceMeasuredDelayFs = 32.0;
constexpr double kReferenceEfficiency = 1e-10;

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation, 0 for one value
};

Stats stats(const std::vector<double>& v) {
    Stats s;
    if (v.empty()) return s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

std::vector<double> to_radians(const std::vector<double>& degrees) {
    std::vector<double> out;
    out.reserve(degrees.size());
    for (double d : degrees) out.push_back(units::deg(d));
    return out;
}

JointSpectralAmplitude model_jsa(const ScenarioConfig& config) {
    return build_jsa(config.waveguide(), config.spectral_filter(), config.spectral_grid());
}

DelayRange scan_range(const ScenarioConfig& config) {
    return {units::fs(config.run.tau_scan_fs.start), units::fs(config.run.tau_scan_fs.stop)};
}

ResultRecord start_record(const std::string& command, const ScenarioConfig& config) {
    ResultRecord r;
    r.command = command;
    r.config = to_json(config);
    return r;
}

void add_state_scalars(ResultRecord& record, const ResolvedState& rs) {
    if (rs.tau) record.add("tau_fs", units::to_fs(*rs.tau), "fs");
    record.add("coherence_abs", std::abs(rs.coherence), "1");
    record.add("concurrence", concurrence(rs.state), "1");
}

struct FringeCounts {
    std::vector<double> raw;
    std::vector<double> acc;
    std::vector<double> sub;
};

FringeCounts simulate_fringe(const TwoQubitState& state, const DetectorModel& model, double pair_rate,
                             double theta1, const std::vector<double>& theta2, double t, std::uint64_t seed) {
    std::vector<RatePrediction> pred;
    pred.reserve(theta2.size());
    for (double th2 : theta2) pred.push_back(expected_counts(state, model, pair_rate, {theta1, th2}, t).rates);
    const auto raw = simulate_counts(pred, t, derive_seed(seed, 0));
    std::vector<std::uint64_t> acc;
    acc.reserve(theta2.size());
    const std::uint64_t acc_seed = derive_seed(seed, 1);
    for (std::size_t k = 0; k < theta2.size(); ++k) acc.push_back(measure_accidentals(model, t, derive_seed(acc_seed, k)));
    FringeCounts out;
    out.raw.assign(raw.begin(), raw.end());
    out.acc.assign(acc.begin(), acc.end());
    out.sub = subtract_accidentals(std::span<const std::uint64_t>(raw), std::span<const std::uint64_t>(acc));
    return out;
}

}  // namespace

std::string angle_label(double degrees) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", degrees);
    return buf;
}

ResolvedState resolve_state(const ScenarioConfig& config) {
    const double phi = units::deg(config.state.phi_bs_deg);
    const double vz = config.state.population_visibility;
    ResolvedState rs;
    if (config.state.coherence) {
        rs.coherence = std::polar(*config.state.coherence, phi);
    } else {
        const auto jsa = model_jsa(config);
        const double tau = config.state.tau_fs ? units::fs(*config.state.tau_fs)
                                               : optimal_delay(jsa, scan_range(config)).tau;
        const auto overlap = overlap_integral(jsa, {tau});
        if (overlap.magnitude > 1.0 + 1e-10) throw DomainError("overlap magnitude exceeds 1");
        rs.coherence = overlap.v_int * std::polar(1.0, phi);
        rs.tau = tau;
    }
    rs.state = x_state(vz, rs.coherence);
    return rs;
}

ResultRecord run_fringe(const ScenarioConfig& config) {
    auto record = start_record("fringe", config);
    const auto rs = resolve_state(config);
    add_state_scalars(record, rs);

    const auto model = config.detector_model();
    const double t = config.run.integration_time_s;
    const double pair_rate = config.run.pair_rate_per_s;
    const auto theta2_deg = config.run.theta2_deg.values();
    const auto theta2 = to_radians(theta2_deg);
    const double acc_rate = accidental_rate(model);
    record.add("accidental_rate", acc_rate, "1/s");

    for (std::size_t i = 0; i < config.run.theta1_deg.size(); ++i) {
        const double theta1_deg = config.run.theta1_deg[i];
        const double theta1 = units::deg(theta1_deg);
        const std::string label = angle_label(theta1_deg);

        std::vector<double> prob, exp_raw, exp_sub;
        for (double th2 : theta2) {
            const auto e = expected_counts(rs.state, model, pair_rate, {theta1, th2}, t);
            prob.push_back(coincidence_prob(rs.state, {theta1, th2}));
            exp_raw.push_back(e.total());
            exp_sub.push_back(e.total() - e.accidental_counts());
        }
        record.add("visibility_model_theta1_" + label, fit_fringe(theta2, prob).visibility(), "1");
        record.add("visibility_raw_expected_theta1_" + label, fit_fringe(theta2, exp_raw).visibility(), "1");
        record.add("visibility_sub_expected_theta1_" + label, fit_fringe(theta2, exp_sub).visibility(), "1");

        std::vector<double> v_raw, v_sub;
        FringeCounts first;
        for (std::uint64_t r = 0; r < config.run.runs; ++r) {
            const auto seed = derive_seed(derive_seed(config.run.seed, r), i);
            auto counts = simulate_fringe(rs.state, model, pair_rate, theta1, theta2, t, seed);
            v_raw.push_back(fit_fringe(theta2, counts.raw).visibility());
            v_sub.push_back(fit_fringe(theta2, counts.sub).visibility());
            if (r == 0) first = std::move(counts);
        }
        const auto sr = stats(v_raw), ss = stats(v_sub);
        record.add("visibility_raw_mc_theta1_" + label, v_raw.front(), "1");
        record.add("visibility_sub_mc_theta1_" + label, v_sub.front(), "1");
        record.add("visibility_raw_mean_theta1_" + label, sr.mean, "1");
        record.add("visibility_raw_std_theta1_" + label, sr.stddev, "1");
        record.add("visibility_sub_mean_theta1_" + label, ss.mean, "1");
        record.add("visibility_sub_std_theta1_" + label, ss.stddev, "1");

        Table table{"fringe_theta1_" + label, {"theta2_deg", "prob_model", "counts_raw", "counts_acc", "counts_sub"}, {}};
        for (std::size_t k = 0; k < theta2.size(); ++k) {
            table.rows.push_back({theta2_deg[k], prob[k], first.raw[k], first.acc[k], first.sub[k]});
        }
        record.tables.push_back(std::move(table));
    }
    record.add("runs", static_cast<double>(config.run.runs), "1");
    return record;
}

ResultRecord run_delay_scan(const ScenarioConfig& config) {
    auto record = start_record("delay-scan", config);
    const auto disp = config.waveguide();
    const auto jsa = model_jsa(config);
    const DelayResponse response(jsa);

    Table table{"delay_scan", {"tau_fs", "v_int_abs"}, {}};
    for (double tau_fs : config.run.tau_scan_fs.values()) {
        table.rows.push_back({tau_fs, response.at(units::fs(tau_fs)).magnitude});
    }
    record.tables.push_back(std::move(table));

    const double tau = optimal_delay(jsa, scan_range(config)).tau;
    const double tau_fs = units::to_fs(tau);
    const double half_walkoff_fs = units::to_fs(gvm_delta(disp) * disp.length / 2.0);
    record.add("tau_opt_fs", tau_fs, "fs");
    record.add("v_int_abs_at_opt", response.at(tau).magnitude, "1");
    record.add("v_int_abs_at_zero", response.at(0.0).magnitude, "1");
    record.add("half_walkoff_fs", half_walkoff_fs, "fs");
    record.add("reference_calculated_delay_fs", kReferenceCalculatedDelayFs, "fs");
    record.add("reference_measured_delay_fs", kReferenceMeasuredDelayFs, "fs");
    record.add("model_minus_reference_calculated_fs", tau_fs - kReferenceCalculatedDelayFs, "fs");
    record.notes["reference_agreement_required"] = false;
    record.notes["reference_delay_comparison"] =
        "model optimum sits at half the group walk-off; the dispersion term is even in detuning and cancels "
        "in F(W)F*(-W), so the reference 31.2 fs / 32 fs values are shown alongside, not fitted";
    return record;
}

ResultRecord run_chsh(const ScenarioConfig& config) {
    auto record = start_record("chsh", config);
    const auto rs = resolve_state(config);
    add_state_scalars(record, rs);

    const auto model = config.detector_model();
    const auto settings = config.chsh_settings();
    const double t = config.run.integration_time_s;
    const double pair_rate = config.run.pair_rate_per_s;

    record.add("S_model", chsh_S(rs.state, settings), "1");
    record.add("S_model_signed", chsh_signed(rs.state, settings), "1");

    const auto expected = expected_count_table(rs.state, model, pair_rate, settings, t);
    const auto est_expected = chsh_from_counts(expected);
    record.add("S_expected_counts", est_expected.S, "1");
    record.add("sigma_S_expected_counts", est_expected.sigma_S, "1");

    std::vector<double> s_values;
    CountTable first;
    ChshEstimate first_est;
    for (std::uint64_t r = 0; r < config.run.runs; ++r) {
        const auto table = simulate_count_table(rs.state, model, pair_rate, settings, t, derive_seed(config.run.seed, r));
        const auto est = chsh_from_counts(table);
        s_values.push_back(est.S);
        if (r == 0) {
            first = table;
            first_est = est;
        }
    }
    record.add("S", first_est.S, "1");
    record.add("sigma_S", first_est.sigma_S, "1");
    for (std::size_t k = 0; k < 4; ++k) {
        record.add("E" + std::to_string(k + 1), first_est.E[k], "1");
        record.add("sigma_E" + std::to_string(k + 1), first_est.sigma_E[k], "1");
    }
    const auto s = stats(s_values);
    record.add("S_mean", s.mean, "1");
    record.add("S_std", s.stddev, "1");
    record.add("runs", static_cast<double>(config.run.runs), "1");
    record.add("accidental_rate", accidental_rate(model), "1/s");

    Table table{"chsh_counts", {"block", "theta1_deg", "theta2_deg", "counts_expected", "counts"}, {}};
    const auto analyzers = CountTable::analyzer_settings(settings);
    for (std::size_t b = 0; b < 4; ++b) {
        const auto& e = expected.blocks[b];
        const auto& m = first.blocks[b];
        const double ev[4] = {e.same, e.both_perp, e.first_perp, e.second_perp};
        const double mv[4] = {m.same, m.both_perp, m.first_perp, m.second_perp};
        for (std::size_t j = 0; j < 4; ++j) {
            const auto& a = analyzers[4 * b + j];
            table.rows.push_back({static_cast<double>(b + 1), units::to_deg(a.theta1), units::to_deg(a.theta2), ev[j], mv[j]});
        }
    }
    record.tables.push_back(std::move(table));
    return record;
}

ResultRecord run_s_curve(const ScenarioConfig& config) {
    auto record = start_record("s-curve", config);
    const auto rs = resolve_state(config);
    add_state_scalars(record, rs);

    const auto model = config.detector_model();
    const double t = config.run.integration_time_s;
    const double pair_rate = config.run.pair_rate_per_s;
    const auto theta_deg = config.run.s_curve_theta_deg.values();
    const auto theta = to_radians(theta_deg);
    const auto s_model = s_curve(rs.state, theta);

    Table table{"s_curve", {"theta_deg", "s_model", "s_ideal", "s_mc", "sigma_s", "sigma_s_expected"}, {}};
    std::vector<double> coverage;
    for (std::uint64_t r = 0; r < config.run.runs; ++r) {
        const auto base = derive_seed(config.run.seed, r);
        std::size_t inside = 0;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            const auto settings = ChshSettings::canonical(theta[k]);
            const auto est = chsh_from_counts(simulate_count_table(rs.state, model, pair_rate, settings, t, derive_seed(base, k)));
            if (std::abs(est.signed_S - s_model[k]) <= 3.0 * est.sigma_S) ++inside;
            if (r == 0) {
                const auto exp = chsh_from_counts(expected_count_table(rs.state, model, pair_rate, settings, t));
                const double ideal = 3.0 * std::cos(2.0 * theta[k]) - std::cos(6.0 * theta[k]);
                table.rows.push_back({theta_deg[k], s_model[k], ideal, est.signed_S, est.sigma_S, exp.sigma_S});
            }
        }
        coverage.push_back(theta.empty() ? 1.0 : static_cast<double>(inside) / static_cast<double>(theta.size()));
    }
    double s_max = -1e300;
    double theta_at_max = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (s_model[k] > s_max) {
            s_max = s_model[k];
            theta_at_max = theta_deg[k];
        }
    }
    if (!theta.empty()) {
        record.add("S_model_max", s_max, "1");
        record.add("theta_at_S_model_max_deg", theta_at_max, "deg");
    }
    record.add("mc_within_3sigma_fraction", stats(coverage).mean, "1");
    record.add("runs", static_cast<double>(config.run.runs), "1");
    record.tables.push_back(std::move(table));
    return record;
}

ResultRecord run_budget(const ScenarioConfig& config) {
    auto record = start_record("budget", config);
    const auto b = efficiency_budget(config.budget_inputs(), config.budget_detector_model());
    record.add("power_in_guide_mw", b.power_in_guide * 1e3, "mW");
    record.add("detection_factor", b.detection_factor, "1");
    record.add("generated_pair_rate", b.generated_pair_rate, "1/s");
    record.add("pump_photon_rate", b.pump_photon_rate, "1/s");
    record.add("spdc_efficiency", b.spdc_efficiency, "1");
    record.add("reference_efficiency", kReferenceEfficiency, "1");
    if (b.spdc_efficiency > 0.0) {
        record.add("log10_efficiency_ratio", std::log10(b.spdc_efficiency / kReferenceEfficiency), "1");
    }
    return record;
}

ResultRecord run_command(const std::string& command, const ScenarioConfig& config) {
    if (command == "fringe") return run_fringe(config);
    if (command == "delay-scan") return run_delay_scan(config);
    if (command == "chsh") return run_chsh(config);
    if (command == "s-curve") return run_s_curve(config);
    if (command == "budget") return run_budget(config);
    throw ConfigError("unknown command \"" + command + "\"");
}

}  // namespace biphoton::scenario

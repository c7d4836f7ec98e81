#include "biphoton/counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "biphoton/errors.hpp"
#include "biphoton/units.hpp"

namespace biphoton {

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

std::uint64_t poisson_draw(std::mt19937_64& engine, double mean) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return static_cast<std::uint64_t>(dist(engine));
}

}  // namespace

void DetectorModel::validate() const {
    if (!(trigger_rate > 0.0)) throw ConfigError("detector: trigger_rate must be > 0");
    if (!(gate_width > 0.0)) throw ConfigError("detector: gate_width must be > 0");
    if (!(coincidence_window > 0.0)) throw ConfigError("detector: coincidence_window must be > 0");
    if (!in_unit_interval(efficiency_1) || !in_unit_interval(efficiency_2)) {
        throw ConfigError("detector: efficiencies must lie in [0, 1]");
    }
    if (!(singles_rate_1 >= 0.0) || !(singles_rate_2 >= 0.0)) {
        throw ConfigError("detector: singles rates must be >= 0");
    }
    if (!(accidental_calibration >= 0.0)) throw ConfigError("detector: accidental_calibration must be >= 0");
}

double accidental_rate(const DetectorModel& m) {
    if (!(m.trigger_rate > 0.0)) throw DomainError("accidental_rate: trigger rate must be positive");
    const double window = std::min(1.0, 2.0 * m.coincidence_window / m.gate_width);
    return m.accidental_calibration * m.singles_rate_1 * m.singles_rate_2 / m.trigger_rate * window;
}

CountExpectation expected_counts(const TwoQubitState& state, const DetectorModel& model, double pair_rate,
                                 PolarizerPair pair, double integration_time) {
    if (!(pair_rate >= 0.0)) throw DomainError("expected_counts: negative pair rate");
    if (!(integration_time >= 0.0)) throw DomainError("expected_counts: negative integration time");
    // Clamp rounding-level negatives from the projection.
    const double p = std::max(0.0, coincidence_prob(state, pair));
    return {{pair_rate * p, accidental_rate(model)}, integration_time};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<std::uint64_t> simulate_counts(std::span<const RatePrediction> predictions, double integration_time,
                                           std::uint64_t seed) {
    if (!(integration_time >= 0.0)) throw DomainError("simulate_counts: negative integration time");
    std::mt19937_64 engine(seed);
    std::vector<std::uint64_t> out;
    out.reserve(predictions.size());
    for (const auto& p : predictions) out.push_back(poisson_draw(engine, p.total_rate() * integration_time));
    return out;
}

std::uint64_t measure_accidentals(const DetectorModel& model, double integration_time, std::uint64_t seed) {
    if (!(integration_time >= 0.0)) throw DomainError("measure_accidentals: negative integration time");
    std::mt19937_64 engine(seed);
    return poisson_draw(engine, accidental_rate(model) * integration_time);
}

std::vector<double> subtract_accidentals(std::span<const double> raw, std::span<const double> accidentals) {
    if (raw.size() != accidentals.size()) {
        throw ConfigError("subtract_accidentals: " + std::to_string(raw.size()) + " raw values but " +
                          std::to_string(accidentals.size()) + " accidental values");
    }
    std::vector<double> out(raw.size());
    std::transform(raw.begin(), raw.end(), accidentals.begin(), out.begin(), std::minus<>());
    return out;
}

std::vector<double> subtract_accidentals(std::span<const std::uint64_t> raw,
                                         std::span<const std::uint64_t> accidentals) {
    const std::vector<double> r(raw.begin(), raw.end());
    const std::vector<double> a(accidentals.begin(), accidentals.end());
    return subtract_accidentals(r, a);
}

void CountTable::validate() const {
    if (!(integration_time > 0.0)) throw ConfigError("count table: integration_time must be > 0");
    for (const auto& b : blocks) {
        for (double c : {b.same, b.both_perp, b.first_perp, b.second_perp}) {
            if (!(c >= 0.0)) throw ConfigError("count table: counts must be >= 0");
        }
    }
}

std::array<PolarizerPair, 16> CountTable::analyzer_settings(const ChshSettings& settings) {
    std::array<PolarizerPair, 16> out{};
    const auto pairs = settings.pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double a = pairs[i].theta1, b = pairs[i].theta2;
        const double ap = PolarizerPair::perp(a), bp = PolarizerPair::perp(b);
        out[4 * i + 0] = {a, b};
        out[4 * i + 1] = {ap, bp};
        out[4 * i + 2] = {ap, b};
        out[4 * i + 3] = {a, bp};
    }
    return out;
}

namespace {

CountTable table_from_values(const ChshSettings& settings, std::span<const double> values, double t) {
    CountTable table;
    table.settings = settings;
    table.integration_time = t;
    for (std::size_t i = 0; i < 4; ++i) {
        table.blocks[i] = {values[4 * i], values[4 * i + 1], values[4 * i + 2], values[4 * i + 3]};
    }
    return table;
}

std::array<RatePrediction, 16> table_predictions(const TwoQubitState& state, const DetectorModel& model,
                                                 double pair_rate, const ChshSettings& settings) {
    std::array<RatePrediction, 16> out{};
    const auto analyzers = CountTable::analyzer_settings(settings);
    for (std::size_t i = 0; i < analyzers.size(); ++i) {
        out[i] = expected_counts(state, model, pair_rate, analyzers[i], 1.0).rates;
    }
    return out;
}

}  // namespace

CountTable expected_count_table(const TwoQubitState& state, const DetectorModel& model, double pair_rate,
                                const ChshSettings& settings, double integration_time) {
    if (!(integration_time > 0.0)) throw DomainError("expected_count_table: integration time must be > 0");
    const auto rates = table_predictions(state, model, pair_rate, settings);
    std::array<double, 16> values{};
    for (std::size_t i = 0; i < rates.size(); ++i) values[i] = rates[i].total_rate() * integration_time;
    return table_from_values(settings, values, integration_time);
}

CountTable simulate_count_table(const TwoQubitState& state, const DetectorModel& model, double pair_rate,
                                const ChshSettings& settings, double integration_time, std::uint64_t seed) {
    if (!(integration_time > 0.0)) throw DomainError("simulate_count_table: integration time must be > 0");
    const auto rates = table_predictions(state, model, pair_rate, settings);
    const auto counts = simulate_counts(rates, integration_time, seed);
    std::array<double, 16> values{};
    std::copy(counts.begin(), counts.end(), values.begin());
    return table_from_values(settings, values, integration_time);
}

ChshEstimate chsh_from_counts(const CountTable& table) {
    table.validate();
    ChshEstimate out;
    double variance = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& b = table.blocks[i];
        const double d = b.total();
        if (d == 0.0) throw DegenerateInputError("chsh_from_counts: block " + std::to_string(i) + " has no counts");
        const double e = correlation_fraction(b);
        const double plus = b.same + b.both_perp;
        const double minus = b.first_perp + b.second_perp;
        const double var_e = ((1.0 - e) * (1.0 - e) * plus + (1.0 + e) * (1.0 + e) * minus) / (d * d);
        out.E[i] = e;
        out.sigma_E[i] = std::sqrt(var_e);
        out.signed_S += kChshSigns[i] * e;
        variance += var_e;
    }
    out.S = std::abs(out.signed_S);
    out.sigma_S = std::sqrt(variance);
    return out;
}

BudgetResult efficiency_budget(const BudgetInputs& in, const DetectorModel& model) {
    for (double t : {in.objective_transmission, in.facet_transmission, in.modal_overlap,
                     in.collection_transmission_per_arm, model.efficiency_1, model.efficiency_2}) {
        if (!in_unit_interval(t)) throw DomainError("efficiency_budget: transmissions must lie in [0, 1]");
    }
    if (!(in.pump_power_in >= 0.0)) throw DomainError("efficiency_budget: negative pump power");
    if (!(in.measured_cc_rate >= 0.0)) throw DomainError("efficiency_budget: negative coincidence rate");
    if (!(in.pump_wavelength > 0.0)) throw DomainError("efficiency_budget: pump wavelength must be > 0");

    BudgetResult out;
    out.power_in_guide = in.pump_power_in * in.objective_transmission * in.facet_transmission * in.modal_overlap;
    const double t = in.collection_transmission_per_arm;
    out.detection_factor = model.efficiency_1 * model.efficiency_2 * t * t * model.duty_cycle() * 0.5;
    if (!(out.detection_factor > 0.0)) {
        throw DomainError("efficiency_budget: zero detection factor (duty cycle, efficiency or collection)");
    }
    out.generated_pair_rate = in.measured_cc_rate / out.detection_factor;

    const double photon_energy = units::kPlanck * units::kSpeedOfLight / in.pump_wavelength;
    out.pump_photon_rate = out.power_in_guide / photon_energy;
    if (in.measured_cc_rate == 0.0) {
        out.spdc_efficiency = 0.0;
    } else if (!(out.pump_photon_rate > 0.0)) {
        throw DomainError("efficiency_budget: no pump power reaches the waveguide");
    } else {
        out.spdc_efficiency = out.generated_pair_rate / out.pump_photon_rate;
    }
    return out;
}

}  // namespace biphoton

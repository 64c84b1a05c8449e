#include "qfid/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace qfid {

EnsembleKind parse_ensemble(const std::string& name) {
    if (name == "random-dynamical-map") return EnsembleKind::RandomDynamicalMap;
    if (name == "random-unitary-haar") return EnsembleKind::RandomUnitaryHaar;
    if (name == "randomized-unitary") return EnsembleKind::RandomizedUnitary;
    if (name == "randomized-unitary-near-basis") return EnsembleKind::RandomizedUnitaryNearBasis;
    throw std::invalid_argument("unknown ensemble '" + name + "'");
}

std::string ensemble_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::RandomDynamicalMap: return "random-dynamical-map";
        case EnsembleKind::RandomUnitaryHaar: return "random-unitary-haar";
        case EnsembleKind::RandomizedUnitary: return "randomized-unitary";
        case EnsembleKind::RandomizedUnitaryNearBasis: return "randomized-unitary-near-basis";
    }
    throw std::logic_error("ensemble_name: bad kind");
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.n_qubits < 1 || cfg.n_qubits > 5) {
        throw std::invalid_argument("config: n_qubits must be in 1..5");
    }
    if (cfg.realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
    if (cfg.scale_max <= 0) throw std::invalid_argument("config: scale_max must be > 0");
    if (cfg.epsilon_floor <= 0) throw std::invalid_argument("config: epsilon_floor must be > 0");
    if (cfg.phase_spread <= 0) throw std::invalid_argument("config: phase_spread must be > 0");
    if (cfg.basis_tilt < 0) throw std::invalid_argument("config: basis_tilt must be >= 0");
    if (cfg.threads < 0) throw std::invalid_argument("config: threads must be >= 0");
    target_gate(cfg.target, cfg.n_qubits);  // throws on bad gate/qubit combination
}

namespace {

QuantumChannel draw_channel(const ExperimentConfig& cfg, const TargetGate& target, Rng& rng) {
    switch (cfg.ensemble) {
        case EnsembleKind::RandomDynamicalMap:
            return random_dynamical_map(target, cfg.scale_max, rng, cfg.order);
        case EnsembleKind::RandomUnitaryHaar:
            return random_unitary_haar(cfg.dim(), rng);
        case EnsembleKind::RandomizedUnitary:
            return randomized_unitary(cfg.dim(), cfg.scale_max, rng);
        case EnsembleKind::RandomizedUnitaryNearBasis:
            return randomized_unitary_near_basis(cfg.dim(), cfg.phase_spread, cfg.basis_tilt,
                                                 rng);
    }
    throw std::logic_error("draw_channel: bad ensemble");
}

}  // namespace

std::vector<RealizationRecord> run_ensemble(const ExperimentConfig& cfg) {
    validate(cfg);
    const TargetGate target = target_gate(cfg.target, cfg.n_qubits);
    const ReducedStateSet set = pure_set_computational(cfg.dim());
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<RealizationRecord> records(cfg.realizations);
    const auto work = [&](std::size_t idx) {
        Rng rng(cfg.seed, idx);
        const QuantumChannel ch = draw_channel(cfg, target, rng);
        RealizationRecord rec;
        rec.index = idx;
        rec.f_av_exact = average_fidelity_exact(ch, target);
        rec.report = evaluate_set(ch, target, set);
        const double eps_av = 1.0 - rec.f_av_exact;
        rec.skipped = eps_av < cfg.epsilon_floor;
        if (rec.skipped) {
            rec.delta_arith = nan;
            rec.delta_lambda = nan;
        } else {
            rec.delta_arith = ((1.0 - rec.report.f_arith) - eps_av) / eps_av;
            rec.delta_lambda = ((1.0 - rec.report.f_lambda) - eps_av) / eps_av;
        }
        records[idx] = std::move(rec);
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads =
        cfg.threads == 0 ? hw : static_cast<unsigned>(cfg.threads);
    if (n_threads <= 1 || cfg.realizations < 2) {
        for (std::size_t i = 0; i < cfg.realizations; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t idx = next.fetch_add(1);
                    if (idx >= cfg.realizations) return;
                    work(idx);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return records;
}

EstimatorBounds bounds_for(const std::vector<RealizationRecord>& records, Estimator which,
                           double epsilon_floor) {
    EstimatorBounds b;
    b.alpha = std::numeric_limits<double>::infinity();
    b.beta = -std::numeric_limits<double>::infinity();
    double log_under = 0, log_over = 0;
    std::size_t n_under = 0, n_over = 0;
    for (const auto& rec : records) {
        if (rec.skipped) continue;
        const double f_est =
            which == Estimator::Arith ? rec.report.f_arith : rec.report.f_lambda;
        const double eps_est = 1.0 - f_est;
        if (eps_est < epsilon_floor) continue;  // ratio undefined, same floor as delta
        const double r = (1.0 - rec.f_av_exact) / eps_est;
        b.alpha = std::min(b.alpha, r);
        b.beta = std::max(b.beta, r);
        if (r > 1.0) {
            log_under += std::log(r);
            ++n_under;
        } else if (r < 1.0) {
            log_over -= std::log(r);
            ++n_over;
        }
        ++b.used;
    }
    if (b.used == 0) throw std::invalid_argument("bounds_for: empty ensemble");
    b.mean_under_factor = n_under ? std::exp(log_under / static_cast<double>(n_under)) : 1.0;
    b.mean_over_factor = n_over ? std::exp(log_over / static_cast<double>(n_over)) : 1.0;
    b.worst_factor = std::max(1.0 / b.alpha, b.beta);
    return b;
}

Histogram histogram(const std::vector<RealizationRecord>& records, const HistogramSpec& spec,
                    Estimator which) {
    if (spec.negative_bins < 1 || spec.positive_linear_bins < 1 || spec.positive_log_bins < 1 ||
        spec.knee <= 0) {
        throw std::invalid_argument("histogram: bad bin spec");
    }
    std::vector<double> deltas;
    deltas.reserve(records.size());
    for (const auto& rec : records) {
        if (rec.skipped) continue;
        deltas.push_back(which == Estimator::Arith ? rec.delta_arith : rec.delta_lambda);
    }
    if (deltas.empty()) throw std::invalid_argument("histogram: empty ensemble");

    const double max_delta = *std::max_element(deltas.begin(), deltas.end());
    const double top = std::max(spec.knee * 10.0, max_delta * 1.001);

    Histogram h;
    // [-1, 0) linear | [0, knee) linear | [knee, top] log-spaced
    for (Index k = 0; k <= spec.negative_bins; ++k) {
        h.edges.push_back(-1.0 + static_cast<double>(k) / static_cast<double>(spec.negative_bins));
    }
    for (Index k = 1; k <= spec.positive_linear_bins; ++k) {
        h.edges.push_back(spec.knee * static_cast<double>(k) /
                          static_cast<double>(spec.positive_linear_bins));
    }
    const double ratio = top / spec.knee;
    for (Index k = 1; k <= spec.positive_log_bins; ++k) {
        h.edges.push_back(spec.knee *
                          std::pow(ratio, static_cast<double>(k) /
                                              static_cast<double>(spec.positive_log_bins)));
    }
    const std::size_t bins = h.edges.size() - 1;
    std::vector<std::size_t> counts(bins, 0);
    for (const double x : deltas) {
        // last edge is inclusive; deltas below -1 cannot occur
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
        std::size_t bin = it == h.edges.begin()
                              ? 0
                              : std::min(bins - 1, static_cast<std::size_t>(
                                                       std::distance(h.edges.begin(), it) - 1));
        ++counts[bin];
    }
    h.probabilities.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        h.probabilities[k] =
            static_cast<double>(counts[k]) / static_cast<double>(deltas.size());
    }
    return h;
}

EnsembleSummary summarize(const std::vector<RealizationRecord>& records,
                          const HistogramSpec& spec, double epsilon_floor) {
    EnsembleSummary s;
    s.total = records.size();
    for (const auto& rec : records) s.skipped_count += rec.skipped ? 1 : 0;
    s.arith = bounds_for(records, Estimator::Arith, epsilon_floor);
    s.lambda = bounds_for(records, Estimator::Lambda, epsilon_floor);
    s.histogram_arith = histogram(records, spec, Estimator::Arith);
    s.histogram_lambda = histogram(records, spec, Estimator::Lambda);
    return s;
}

// ---------------------------------------------------------------------------
// CSV persistence
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return {buf, ptr};
}

double parse_double(std::string_view sv) {
    if (sv == "nan" || sv == "-nan") return std::numeric_limits<double>::quiet_NaN();
    double out = 0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (ec != std::errc{} || ptr != sv.data() + sv.size()) {
        throw std::runtime_error("CSV: bad float field '" + std::string(sv) + "'");
    }
    return out;
}

}  // namespace

std::string records_csv_header(Index d) {
    std::string h = "index,f_av,f_arith,f_geom,lambda,f_lambda,f_diss";
    for (Index i = 1; i <= d; ++i) h += ",fB_" + std::to_string(i);
    h += ",f_TR,delta_arith,delta_lambda,skipped";
    return h;
}

void write_records_csv(const std::string& path, const std::vector<RealizationRecord>& records) {
    if (records.empty()) throw std::invalid_argument("write_records_csv: no records");
    std::ofstream out(path, std::ios::binary);  // \n line endings everywhere
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const Index d = records.front().report.d;
    out << records_csv_header(d) << '\n';
    for (const auto& rec : records) {
        out << rec.index << ',' << format_double(rec.f_av_exact) << ','
            << format_double(rec.report.f_arith) << ',' << format_double(rec.report.f_geom)
            << ',' << format_double(rec.report.lambda_weight) << ','
            << format_double(rec.report.f_lambda) << ',' << format_double(rec.report.f_diss);
        for (Index i = 0; i <= d; ++i) out << ',' << format_double(rec.report.per_state(i));
        out << ',' << format_double(rec.delta_arith) << ',' << format_double(rec.delta_lambda)
            << ',' << (rec.skipped ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<RealizationRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV: empty file '" + path + "'");

    // infer d from the header column count: 7 fixed + (d+1) fidelities + 3
    std::size_t cols = 1;
    for (const char c : line) cols += (c == ',');
    if (cols < 12) throw std::runtime_error("CSV: malformed header");
    const Index d = static_cast<Index>(cols) - 11;
    if (line != records_csv_header(d)) throw std::runtime_error("CSV: unexpected header");

    std::vector<RealizationRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view sv = line;
        while (true) {
            const auto pos = sv.find(',');
            fields.push_back(sv.substr(0, pos));
            if (pos == std::string_view::npos) break;
            sv.remove_prefix(pos + 1);
        }
        if (fields.size() != cols) throw std::runtime_error("CSV: bad column count");
        RealizationRecord rec;
        std::size_t k = 0;
        rec.index = static_cast<std::size_t>(parse_double(fields[k++]));
        rec.f_av_exact = parse_double(fields[k++]);
        rec.report.d = d;
        rec.report.f_arith = parse_double(fields[k++]);
        rec.report.f_geom = parse_double(fields[k++]);
        rec.report.lambda_weight = parse_double(fields[k++]);
        rec.report.f_lambda = parse_double(fields[k++]);
        rec.report.f_diss = parse_double(fields[k++]);
        rec.report.per_state.resize(d + 1);
        for (Index i = 0; i <= d; ++i) rec.report.per_state(i) = parse_double(fields[k++]);
        rec.delta_arith = parse_double(fields[k++]);
        rec.delta_lambda = parse_double(fields[k++]);
        rec.skipped = fields[k] == "1";
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw std::runtime_error("CSV: no records in '" + path + "'");
    return records;
}

}  // namespace qfid

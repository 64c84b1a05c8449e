// experiment.hpp — Monte Carlo harness over the random channel ensembles:
// per-realization fidelity records, deviation statistics, empirical
// over/underestimation bounds, and deviation histograms, with CSV/JSON
// persistence.

#pragma once

#include "qfid/channels.hpp"
#include "qfid/fidelity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qfid {

enum class EnsembleKind {
    RandomDynamicalMap,
    RandomUnitaryHaar,
    RandomizedUnitary,
    RandomizedUnitaryNearBasis,
};

EnsembleKind parse_ensemble(const std::string& name);
std::string ensemble_name(EnsembleKind kind);

// Deviation histogram layout: linear bins on [-1, 0) for overestimated
// errors, linear bins on [0, knee) and log-spaced bins above the knee for
// underestimated ones (positive deltas are unbounded).
struct HistogramSpec {
    Index negative_bins = 40;
    Index positive_linear_bins = 20;
    double knee = 1.0;
    Index positive_log_bins = 20;
};

struct ExperimentConfig {
    int n_qubits = 2;
    std::string target = "cnot";
    EnsembleKind ensemble = EnsembleKind::RandomDynamicalMap;
    std::size_t realizations = 10000;
    std::uint64_t seed = 0;
    double scale_max = 0.5;
    // near-basis ensemble parameters (see randomized_unitary_near_basis)
    double basis_tilt = 5e-4;
    double phase_spread = 1000.0;
    double epsilon_floor = 1e-9;
    MapOrder order = MapOrder::TargetAfterNoise;
    HistogramSpec histogram;
    int threads = 1;

    Index dim() const { return Index{1} << n_qubits; }
};

void validate(const ExperimentConfig& cfg);

struct RealizationRecord {
    std::size_t index = 0;
    double f_av_exact = 0;
    FidelityReport report;
    double delta_arith = 0;   // (eps_est - eps_av)/eps_av; NaN when skipped
    double delta_lambda = 0;
    bool skipped = false;     // eps_av below the floor: deviation undefined
};

enum class Estimator { Arith, Lambda };

// Empirical bounds on the per-realization gate-error ratio
// r = eps_av / eps_est for one estimator.
struct EstimatorBounds {
    double alpha = 1;              // min r: worst overestimation of the error
    double beta = 1;               // max r: worst underestimation
    double mean_under_factor = 1;  // geometric mean of r over r > 1
    double mean_over_factor = 1;   // geometric mean of 1/r over r < 1
    double worst_factor = 1;       // max(1/alpha, beta)
    std::size_t used = 0;          // records entering the ratio statistics
};

struct Histogram {
    std::vector<double> edges;          // size bins + 1
    std::vector<double> probabilities;  // size bins; sums to 1
};

struct EnsembleSummary {
    EstimatorBounds arith;
    EstimatorBounds lambda;
    std::size_t skipped_count = 0;
    std::size_t total = 0;
    Histogram histogram_arith;
    Histogram histogram_lambda;
};

// Run the configured ensemble; realization k uses Rng(seed, stream = k), so
// records are reproducible and independent of the thread count.
std::vector<RealizationRecord> run_ensemble(const ExperimentConfig& cfg);

// Ratio bounds over the non-skipped records of one estimator.
EstimatorBounds bounds_for(const std::vector<RealizationRecord>& records, Estimator which,
                           double epsilon_floor = 1e-9);

// Normalized deviation histogram for one estimator.
Histogram histogram(const std::vector<RealizationRecord>& records, const HistogramSpec& spec,
                    Estimator which);

// bounds + histograms + skip accounting in one bundle
EnsembleSummary summarize(const std::vector<RealizationRecord>& records,
                          const HistogramSpec& spec, double epsilon_floor = 1e-9);

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

// CSV schema (one row per realization):
//   index,f_av,f_arith,f_geom,lambda,f_lambda,f_diss,fB_1..fB_d,f_TR,
//   delta_arith,delta_lambda,skipped
// Floats are shortest round-trip decimals, so rewriting parsed records
// reproduces the file byte for byte.
void write_records_csv(const std::string& path, const std::vector<RealizationRecord>& records);
std::vector<RealizationRecord> read_records_csv(const std::string& path);

std::string records_csv_header(Index d);

}  // namespace qfid

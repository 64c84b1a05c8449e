#include "qfid/serialize.hpp"

#include <fstream>

namespace qfid {

Json matrix_to_json(const Matrix& m) {
    Json data = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            data.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const auto& data = j.at("data");
    if (rows < 1 || cols < 1 || static_cast<Index>(data.size()) != rows * cols) {
        throw std::invalid_argument("matrix_from_json: shape/data mismatch");
    }
    Matrix m(rows, cols);
    Index k = 0;
    for (Index i = 0; i < rows; ++i) {
        for (Index jj = 0; jj < cols; ++jj, ++k) {
            m(i, jj) = Complex(data[k].at(0).get<double>(), data[k].at(1).get<double>());
        }
    }
    return m;
}

Json channel_to_json(const QuantumChannel& ch) {
    Json mats = Json::array();
    if (ch.rep == ChannelRep::Unitary) {
        mats.push_back(matrix_to_json(ch.u));
    } else {
        for (const auto& e : ch.kraus) mats.push_back(matrix_to_json(e));
    }
    return Json{{"rep", ch.rep == ChannelRep::Unitary ? "unitary" : "kraus"},
                {"d", ch.d},
                {"matrices", std::move(mats)}};
}

QuantumChannel channel_from_json(const Json& j) {
    const std::string rep = j.at("rep").get<std::string>();
    const auto& mats = j.at("matrices");
    if (mats.empty()) throw std::invalid_argument("channel_from_json: no matrices");
    if (rep == "unitary") {
        if (mats.size() != 1) {
            throw std::invalid_argument("channel_from_json: unitary rep needs one matrix");
        }
        return QuantumChannel::unitary(matrix_from_json(mats[0]));
    }
    if (rep == "kraus") {
        std::vector<Matrix> ops;
        ops.reserve(mats.size());
        for (const auto& m : mats) ops.push_back(matrix_from_json(m));
        return QuantumChannel::kraus_list(std::move(ops));
    }
    throw std::invalid_argument("channel_from_json: rep must be 'unitary' or 'kraus'");
}

namespace {

std::string kind_name(SetKind kind) {
    switch (kind) {
        case SetKind::PureSet: return "pure-set";
        case SetKind::MinimalSet: return "minimal-set";
        case SetKind::MubPair: return "mub-pair";
    }
    throw std::logic_error("kind_name: bad kind");
}

SetKind kind_from_name(const std::string& name) {
    if (name == "pure-set") return SetKind::PureSet;
    if (name == "minimal-set") return SetKind::MinimalSet;
    if (name == "mub-pair") return SetKind::MubPair;
    throw std::invalid_argument("unknown state-set kind '" + name + "'");
}

}  // namespace

Json state_set_to_json(const ReducedStateSet& set) {
    Json states = Json::array();
    for (const auto& s : set.states) states.push_back(matrix_to_json(s.rho));
    return Json{{"kind", kind_name(set.kind)},
                {"d", set.d},
                {"basis", matrix_to_json(set.basis)},
                {"states", std::move(states)}};
}

ReducedStateSet state_set_from_json(const Json& j) {
    ReducedStateSet set;
    set.kind = kind_from_name(j.at("kind").get<std::string>());
    set.d = j.at("d").get<Index>();
    set.basis = matrix_from_json(j.at("basis"));
    for (const auto& m : j.at("states")) {
        set.states.push_back(make_density(matrix_from_json(m)));
    }
    return set;
}

Json report_to_json(const FidelityReport& rep) {
    Json per_state = Json::array();
    for (Index i = 0; i < rep.per_state.size(); ++i) per_state.push_back(rep.per_state(i));
    return Json{{"per_state", std::move(per_state)}, {"f_arith", rep.f_arith},
                {"f_geom", rep.f_geom},              {"lambda_weight", rep.lambda_weight},
                {"f_lambda", rep.f_lambda},          {"f_diss", rep.f_diss},
                {"d", rep.d}};
}

Json bounds_report_to_json(const BoundsReport& b) {
    return Json{{"f1", b.f1},
                {"f2", b.f2},
                {"f_pro_lower", b.f_pro_lower},
                {"f_pro_upper", b.f_pro_upper},
                {"f_av_lower", b.f_av_lower},
                {"f_av_upper", b.f_av_upper}};
}

Json verdict_to_json(const UnitarityVerdict& v) {
    Json purities = Json::array();
    for (Index i = 0; i < v.projector_purities.size(); ++i) {
        purities.push_back(v.projector_purities(i));
    }
    return Json{{"is_unitary", v.is_unitary},
                {"projector_purities", std::move(purities)},
                {"orthogonality_residual", v.orthogonality_residual},
                {"tr_purity", v.tr_purity}};
}

Json histogram_to_json(const Histogram& h) {
    return Json{{"edges", h.edges}, {"probabilities", h.probabilities}};
}

Json estimator_bounds_to_json(const EstimatorBounds& b) {
    return Json{{"alpha", b.alpha},
                {"beta", b.beta},
                {"mean_under_factor", b.mean_under_factor},
                {"mean_over_factor", b.mean_over_factor},
                {"worst_factor", b.worst_factor},
                {"used", b.used}};
}

Json summary_to_json(const EnsembleSummary& s) {
    return Json{{"arith", estimator_bounds_to_json(s.arith)},
                {"lambda", estimator_bounds_to_json(s.lambda)},
                {"skipped_count", s.skipped_count},
                {"total", s.total},
                {"histogram",
                 Json{{"arith", histogram_to_json(s.histogram_arith)},
                      {"lambda", histogram_to_json(s.histogram_lambda)}}}};
}

Json config_to_json(const ExperimentConfig& cfg) {
    return Json{{"n_qubits", cfg.n_qubits},
                {"target", cfg.target},
                {"ensemble", ensemble_name(cfg.ensemble)},
                {"realizations", cfg.realizations},
                {"seed", cfg.seed},
                {"scale_max", cfg.scale_max},
                {"basis_tilt", cfg.basis_tilt},
                {"phase_spread", cfg.phase_spread},
                {"epsilon_floor", cfg.epsilon_floor},
                {"order", cfg.order == MapOrder::TargetAfterNoise ? "target-after-noise"
                                                                  : "target-before-noise"}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    Json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace qfid

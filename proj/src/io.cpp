#include "jpm/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace jpm {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                      std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

// --------------------------------- matrices ---------------------------------

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigInvalid("complex entry must be a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

} // namespace

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_to_json(m(r, c)));
    return out;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigInvalid("matrix must be a non-empty array of [re, im] pairs");
    const auto len = j.size();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
    if (d * d != static_cast<Eigen::Index>(len))
        throw ConfigInvalid("matrix length " + std::to_string(len) + " is not a perfect square");
    Matrix m(d, d);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = complex_from_json(j[k++]);
    return m;
}

json complex_vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vector complex_vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigInvalid("vector must be a non-empty array of [re, im] pairs");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j[i]);
    return v;
}

// ---------------------------------- states ----------------------------------

json state_to_json(const SystemState& state) {
    json out;
    if (state.is_pure()) {
        out["kind"] = "pure";
        out["amplitudes"] = complex_vector_to_json(state.amplitudes());
    } else {
        out["kind"] = "mixed";
        out["matrix"] = matrix_to_json(state.matrix());
    }
    return out;
}

SystemState state_from_json(const json& j) {
    const std::string kind = j.value("kind", "");
    if (kind == "pure") {
        if (!j.contains("amplitudes")) throw ConfigInvalid("state: pure state needs 'amplitudes'");
        return SystemState::pure(complex_vector_from_json(j.at("amplitudes")));
    }
    if (kind == "mixed") {
        if (!j.contains("matrix")) throw ConfigInvalid("state: mixed state needs 'matrix'");
        return SystemState::mixed(matrix_from_json(j.at("matrix")));
    }
    throw ConfigInvalid("state: 'kind' must be \"pure\" or \"mixed\"");
}

// ------------------------------ distributions -------------------------------

namespace {

json real_array(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd real_vector_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ConfigInvalid(std::string(what) + " must be a non-empty array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!j[i].is_number()) throw ConfigInvalid(std::string(what) + " entries must be numbers");
        v(i) = j[i].get<double>();
    }
    return v;
}

} // namespace

json distribution_to_json(const PointerDistribution& dist) {
    json components = json::array();
    for (const GaussianComponent& c : dist.components()) {
        components.push_back(
            json{{"weight", c.weight}, {"center", real_array(c.center)}, {"deltas", real_array(c.deltas)}});
    }
    return json{{"components", components}};
}

PointerDistribution distribution_from_json(const json& j) {
    if (!j.contains("components") || !j.at("components").is_array())
        throw ConfigInvalid("distribution: missing 'components' array");
    std::vector<GaussianComponent> components;
    for (const json& cj : j.at("components")) {
        GaussianComponent c;
        if (!cj.contains("weight") || !cj.at("weight").is_number())
            throw ConfigInvalid("distribution component: missing numeric 'weight'");
        c.weight = cj.at("weight").get<double>();
        c.center = real_vector_from_json(cj.at("center"), "distribution component center");
        c.deltas = real_vector_from_json(cj.at("deltas"), "distribution component deltas");
        components.push_back(std::move(c));
    }
    return PointerDistribution(std::move(components));
}

// ------------------------------- resolvability ------------------------------

json resolvability_to_json(const ResolvabilityReport& report) {
    json pairs = json::array();
    for (const PairResolvability& pair : report.pairs) {
        json detectors = json::array();
        for (const DetectorGap& dg : pair.per_detector)
            detectors.push_back(json{{"alpha", dg.alpha}, {"gap", dg.gap}, {"resolved", dg.resolved}});
        pairs.push_back(json{
            {"n", pair.n}, {"m", pair.m}, {"pair_resolved", pair.pair_resolved}, {"detectors", detectors}});
    }
    return json{{"kappa", report.kappa}, {"all_pairs_resolved", report.all_pairs_resolved}, {"pairs", pairs}};
}

json axis_estimate_to_json(const AxisEstimate& estimate, bool test_mode) {
    json out;
    out["e_est"] = json::array({estimate.e_hat.x(), estimate.e_hat.y(), estimate.e_hat.z()});
    out["n_samples"] = estimate.n_samples;
    if (test_mode && estimate.angular_error)
        out["angular_error_deg"] = *estimate.angular_error * 180.0 / 3.14159265358979323846;
    return out;
}

// ----------------------------------- CSV ------------------------------------

std::string readout_csv(const ReadoutBatch& batch, bool test_mode) {
    std::ostringstream out;
    const int n = batch.samples.empty() ? 0 : static_cast<int>(batch.samples.front().x.size());
    out << "sample_id,seed";
    for (int alpha = 1; alpha <= n; ++alpha) out << ",x_" << alpha;
    out << ",classified";
    if (test_mode) out << ",collapsed_index";
    out << '\n';

    for (std::size_t i = 0; i < batch.samples.size(); ++i) {
        const ReadoutSample& sample = batch.samples[i];
        out << i << ',' << batch.seeds[i];
        for (Eigen::Index alpha = 0; alpha < sample.x.size(); ++alpha)
            out << ',' << format_double(sample.x(alpha));
        out << ',';
        if (sample.classified)
            out << *sample.classified;
        else
            out << "ambiguous";
        if (test_mode) out << ',' << sample.collapsed_index;
        out << '\n';
    }
    return out.str();
}

std::string qubit_campaign_csv(const ReadoutBatch& batch, bool test_mode) {
    std::ostringstream out;
    out << "run_id,seed,x1,x2,x3,classified_branch";
    if (test_mode) out << ",collapsed_index";
    out << '\n';
    for (std::size_t i = 0; i < batch.samples.size(); ++i) {
        const ReadoutSample& sample = batch.samples[i];
        out << i << ',' << batch.seeds[i];
        for (Eigen::Index alpha = 0; alpha < 3; ++alpha) out << ',' << format_double(sample.x(alpha));
        out << ',';
        const std::optional<int> sign = branch_sign(sample.classified);
        if (sign)
            out << (*sign > 0 ? "+" : "-");
        else
            out << "ambiguous";
        if (test_mode) out << ',' << sample.collapsed_index;
        out << '\n';
    }
    return out.str();
}

} // namespace jpm

#include "vbs/serialize.hpp"

#include <utility>

namespace vbs {

using nlohmann::json;

json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const ObservableSpec& y) {
    json j;
    j["n_sites"] = y.n_sites;
    if (y.factored) {
        json fs = json::array();
        for (const auto& f : y.factors) fs.push_back(to_json(f));
        j["factors"] = std::move(fs);
    } else {
        j["full"] = to_json(y.full);
    }
    return j;
}

json to_json(const KrausChannel& ch) {
    json ops = json::array();
    for (const auto& k : ch.kraus) ops.push_back(to_json(k));
    return json{{"kraus", std::move(ops)}};
}

json to_json(const HqmmModel& model) {
    json j;
    switch (model.initial_state) {
        case HqmmModel::Functional::Trace: j["initial_state"] = "trace"; break;
        case HqmmModel::Functional::NormalizedTrace: j["initial_state"] = "normalized_trace"; break;
        case HqmmModel::Functional::Density: j["initial_state"] = {{"density", to_json(model.density)}}; break;
    }
    switch (model.hidden.kind) {
        case TransitionExpectation::Kind::RankOneTrace:
            j["hidden"] = {{"rank_one_trace", model.hidden.scale}};
            break;
        case TransitionExpectation::Kind::IsometryConjugation:
            j["hidden"] = {{"isometry", to_json(model.hidden.v)}};
            break;
        case TransitionExpectation::Kind::KrausFamily: {
            json ops = json::array();
            for (const auto& k : model.hidden.family) ops.push_back(to_json(k));
            j["hidden"] = {{"kraus", std::move(ops)}};
            break;
        }
    }
    json ops = json::array();
    for (const auto& k : model.emission.family) ops.push_back(to_json(k));
    j["emission"] = {{"kraus_pairs", std::move(ops)}};
    j["ordering"] = model.ordering == HqmmModel::Ordering::Causal ? "causal" : "conventional";
    return j;
}

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex value must be a two-element numeric array [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
    std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw ParseError("matrix rows must be non-empty arrays");
    std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError("matrix rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
    }
    return m;
}

ObservableSpec observable_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("observable must be a JSON object");
    if (!j.contains("n_sites") || !j["n_sites"].is_number_unsigned())
        throw ParseError("observable needs a positive integer field \"n_sites\"");
    std::size_t n = j["n_sites"].get<std::size_t>();
    bool has_factors = j.contains("factors");
    bool has_full = j.contains("full");
    if (has_factors == has_full)
        throw ParseError("observable needs exactly one of \"factors\" or \"full\"");
    ObservableSpec y;
    y.n_sites = n;
    if (has_factors) {
        if (!j["factors"].is_array()) throw ParseError("\"factors\" must be an array of matrices");
        y.factored = true;
        for (const auto& f : j["factors"]) y.factors.push_back(matrix_from_json(f));
    } else {
        y.factored = false;
        y.full = matrix_from_json(j["full"]);
    }
    y.validate();  // dimension consistency is a domain error, not a parse error
    return y;
}

KrausChannel channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
        throw ParseError("channel needs a non-empty array field \"kraus\"");
    std::vector<ComplexMatrix> ops;
    for (const auto& k : j["kraus"]) ops.push_back(matrix_from_json(k));
    return KrausChannel(std::move(ops));
}

HqmmModel model_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("model must be a JSON object");
    HqmmModel m;

    if (!j.contains("initial_state")) throw ParseError("model needs \"initial_state\"");
    const json& init = j["initial_state"];
    if (init.is_string()) {
        std::string s = init.get<std::string>();
        if (s == "trace") m.initial_state = HqmmModel::Functional::Trace;
        else if (s == "normalized_trace") m.initial_state = HqmmModel::Functional::NormalizedTrace;
        else throw ParseError("initial_state string must be \"trace\" or \"normalized_trace\"");
    } else if (init.is_object() && init.contains("density")) {
        m.initial_state = HqmmModel::Functional::Density;
        m.density = matrix_from_json(init["density"]);
    } else {
        throw ParseError("initial_state must be a mode string or {\"density\": matrix}");
    }

    if (!j.contains("hidden") || !j["hidden"].is_object())
        throw ParseError("model needs an object field \"hidden\"");
    const json& hid = j["hidden"];
    if (hid.contains("rank_one_trace")) {
        if (!hid["rank_one_trace"].is_number())
            throw ParseError("hidden.rank_one_trace must be a number");
        // dimension is pinned by the emission below; patched after parsing it
        m.hidden = TransitionExpectation::rank_one_trace(0, hid["rank_one_trace"].get<double>());
    } else if (hid.contains("isometry")) {
        ComplexMatrix v = matrix_from_json(hid["isometry"]);
        std::size_t d = 0;
        while (d * d < v.rows) ++d;
        if (d * d != v.rows)
            throw std::invalid_argument("hidden isometry must act on a square tensor pair");
        m.hidden = TransitionExpectation::isometry(d, d, std::move(v));
    } else if (hid.contains("kraus")) {
        if (!hid["kraus"].is_array() || hid["kraus"].empty())
            throw ParseError("hidden.kraus must be a non-empty array");
        std::vector<ComplexMatrix> ops;
        for (const auto& k : hid["kraus"]) ops.push_back(matrix_from_json(k));
        m.hidden = TransitionExpectation::kraus_family(std::move(ops));
    } else {
        throw ParseError("hidden must contain \"rank_one_trace\", \"isometry\" or \"kraus\"");
    }

    if (!j.contains("emission") || !j["emission"].is_object() ||
        !j["emission"].contains("kraus_pairs") || !j["emission"]["kraus_pairs"].is_array() ||
        j["emission"]["kraus_pairs"].empty())
        throw ParseError("model needs emission.kraus_pairs as a non-empty array");
    std::vector<ComplexMatrix> ops;
    for (const auto& k : j["emission"]["kraus_pairs"]) ops.push_back(matrix_from_json(k));
    m.emission = TransitionExpectation::kraus_family(std::move(ops));

    if (m.hidden.kind == TransitionExpectation::Kind::RankOneTrace && m.hidden.d_a == 0)
        m.hidden = TransitionExpectation::rank_one_trace(m.emission.d_a, m.hidden.scale);

    if (!j.contains("ordering") || !j["ordering"].is_string())
        throw ParseError("model needs a string field \"ordering\"");
    std::string ord = j["ordering"].get<std::string>();
    if (ord == "causal") m.ordering = HqmmModel::Ordering::Causal;
    else if (ord == "conventional") m.ordering = HqmmModel::Ordering::Conventional;
    else throw ParseError("ordering must be \"causal\" or \"conventional\"");

    m.validate();
    return m;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

}  // namespace vbs

#include "pdm/model_json.hpp"

#include <array>
#include <string_view>

#include "pdm/errors.hpp"

namespace pdm {

namespace {

constexpr std::array<std::string_view, 10> kKeys = {"family", "sign", "omega", "lambda", "xi",
                                                    "beta",   "alpha", "eta",  "A",      "phi"};

double number(const nlohmann::json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw InvalidParameter(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int parse_sign(const nlohmann::json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "+" || s == "plus" || s == "+1") return +1;
        if (s == "-" || s == "minus" || s == "-1") return -1;
    } else if (v.is_number_integer()) {
        const int s = v.get<int>();
        if (s == 1 || s == -1) return s;
    }
    throw InvalidParameter("field 'sign' must be \"+\" or \"-\"");
}

}  // namespace

ModelFamily model_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InvalidParameter("model definition must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        bool known = false;
        for (auto k : kKeys) known = known || k == key;
        if (!known) throw InvalidParameter("unknown model field '" + key + "'");
    }
    if (!doc.contains("family") || !doc["family"].is_string())
        throw InvalidParameter("model definition requires a string 'family'");

    const auto name = doc["family"].get<std::string>();
    ModelFamily f;
    f.family = family_from_string(name);
    if (doc.contains("sign")) f.sign = parse_sign(doc["sign"]);
    if (doc.contains("omega")) f.omega = number(doc, "omega");
    if (doc.contains("lambda")) f.lambda = number(doc, "lambda");
    if (doc.contains("xi")) f.xi = number(doc, "xi");
    if (doc.contains("beta")) f.beta = number(doc, "beta");
    if (doc.contains("alpha")) f.alpha = number(doc, "alpha");
    if (doc.contains("eta")) f.eta = number(doc, "eta");
    if (doc.contains("A")) f.amplitude = number(doc, "A");
    if (doc.contains("phi")) f.phase = number(doc, "phi");
    if (name == "sho") {
        if (f.lambda != 0.0) throw InvalidParameter("'sho' is the lambda = 0 oscillator");
    }
    return f;
}

nlohmann::json model_to_json(const ModelFamily& f) {
    nlohmann::json doc;
    doc["family"] = std::string(to_string(f.family));
    doc["sign"] = f.sign > 0 ? "+" : "-";
    doc["lambda"] = f.lambda;
    doc["xi"] = f.xi;
    doc["eta"] = f.eta;
    doc["A"] = f.amplitude;
    doc["phi"] = f.phase;
    if (f.omega) doc["omega"] = *f.omega;
    if (f.beta) doc["beta"] = *f.beta;
    if (f.alpha) doc["alpha"] = *f.alpha;
    return doc;
}

ModelFamily model_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidParameter(std::string("malformed model JSON: ") + e.what());
    }
    return model_from_json(doc);
}

}  // namespace pdm

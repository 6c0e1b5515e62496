#include "rastab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rastab/errors.hpp"

namespace rastab {
namespace {

using nlohmann::json;

const json &require(const json &obj, const char *key) {
    if (!obj.contains(key)) {
        throw ValidationError(key, "missing");
    }
    return obj.at(key);
}

double as_double(const json &v, const std::string &field) {
    if (!v.is_number()) {
        throw ValidationError(field, "expected a number");
    }
    return v.get<double>();
}

std::uint64_t as_count(const json &v, const std::string &field) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ValidationError(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<double> as_vector(const json &v, const std::string &field) {
    if (!v.is_array()) {
        throw ValidationError(field, "expected an array");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_double(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::array<std::array<double, 2>, 2> as_matrix2(const json &v, const std::string &field) {
    if (!v.is_array() || v.size() != 2) {
        throw ValidationError(field, "expected a 2x2 array");
    }
    std::array<std::array<double, 2>, 2> out{};
    for (std::size_t n = 0; n < 2; ++n) {
        const std::string row = field + "[" + std::to_string(n) + "]";
        const auto values = as_vector(v[n], row);
        if (values.size() != 2) {
            throw ValidationError(row, "expected two entries");
        }
        out[n] = {values[0], values[1]};
    }
    return out;
}

ChannelModel channel_from(const json &doc, ValidationOptions options) {
    if (!doc.is_object()) {
        throw ValidationError("<root>", "expected a JSON object");
    }
    const json &model = require(doc, "model");
    if (!model.is_string()) {
        throw ValidationError("model", "expected a string");
    }
    const std::string name = model.get<std::string>();
    if (name == "mpr2x2") {
        ChannelModel2x2 c;
        c.q_solo = as_matrix2(require(doc, "q_solo"), "q_solo");
        c.q_joint = as_matrix2(require(doc, "q_joint"), "q_joint");
        return validate_channel_2x2(c, options);
    }
    if (name == "collision") {
        CollisionChannel c;
        c.q_solo = as_vector(require(doc, "q_solo"), "q_solo");
        c.m_destinations = as_count(require(doc, "m_destinations"), "m_destinations");
        c.n_sources = doc.contains("n_sources") ? as_count(doc.at("n_sources"), "n_sources") : c.q_solo.size();
        return validate_collision_channel(c);
    }
    throw ValidationError("model", "unknown model '" + name + "' (expected mpr2x2 or collision)");
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError("<document>", std::string("malformed JSON: ") + e.what());
    }
}

} // namespace

ChannelModel parse_channel(std::string_view json_text, ValidationOptions options) {
    return channel_from(parse_json(json_text), options);
}

std::string channel_to_json(const ChannelModel &c) {
    json out;
    if (const auto *mpr = std::get_if<ChannelModel2x2>(&c)) {
        out["model"] = "mpr2x2";
        out["q_solo"] = mpr->q_solo;
        out["q_joint"] = mpr->q_joint;
    } else {
        const auto &cc = std::get<CollisionChannel>(c);
        out["model"] = "collision";
        out["n_sources"] = cc.n_sources;
        out["m_destinations"] = cc.m_destinations;
        out["q_solo"] = cc.q_solo;
    }
    return out.dump();
}

ConfigDocument parse_config(std::string_view json_text) {
    const json doc = parse_json(json_text);
    ConfigDocument out;
    if (doc.is_object() && doc.contains("allow_joint_above_solo")) {
        const json &flag = doc.at("allow_joint_above_solo");
        if (!flag.is_boolean()) {
            throw ValidationError("allow_joint_above_solo", "expected true or false");
        }
        out.allow_joint_above_solo = flag.get<bool>();
    }
    out.channel = channel_from(doc, ValidationOptions{out.allow_joint_above_solo});
    const std::size_t n = source_count(out.channel);

    if (doc.contains("p")) {
        out.p = TransmitPolicy{as_vector(doc.at("p"), "p")};
        validate_policy(*out.p, n);
    }
    if (doc.contains("lambda")) {
        out.lambda = ArrivalRates{as_vector(doc.at("lambda"), "lambda")};
        validate_arrivals(*out.lambda, n);
    }
    if (doc.contains("fixed_lambda")) {
        const json &f = doc.at("fixed_lambda");
        if (f.is_array() && !f.empty() && f[0].is_array()) {
            for (std::size_t i = 0; i < f.size(); ++i) {
                out.fixed_lambda.push_back(as_vector(f[i], "fixed_lambda[" + std::to_string(i) + "]"));
            }
        } else {
            out.fixed_lambda.push_back(as_vector(f, "fixed_lambda"));
        }
        for (std::size_t i = 0; i < out.fixed_lambda.size(); ++i) {
            const std::string field = "fixed_lambda[" + std::to_string(i) + "]";
            if (out.fixed_lambda[i].size() + 1 != n) {
                throw ValidationError(field, "expected " + std::to_string(n - 1) + " entries");
            }
            for (double v : out.fixed_lambda[i]) {
                if (!(v >= 0.0 && v < 1.0)) {
                    throw ValidationError(field, "arrival rate out of range [0,1)");
                }
            }
        }
    }
    if (doc.contains("lambda1_grid")) {
        const json &g = doc.at("lambda1_grid");
        if (g.is_object()) {
            const double from = as_double(require(g, "from"), "lambda1_grid.from");
            const double to = as_double(require(g, "to"), "lambda1_grid.to");
            const std::uint64_t points = as_count(require(g, "points"), "lambda1_grid.points");
            if (points == 0 || to < from || from < 0.0) {
                throw ValidationError("lambda1_grid", "need points >= 1 and 0 <= from <= to");
            }
            for (std::uint64_t i = 0; i < points; ++i) {
                out.lambda1_grid.push_back(points == 1 ? from
                                                       : from + (to - from) * static_cast<double>(i) /
                                                                    static_cast<double>(points - 1));
            }
        } else {
            out.lambda1_grid = as_vector(g, "lambda1_grid");
        }
        for (double v : out.lambda1_grid) {
            if (!(v >= 0.0 && v < 1.0)) {
                throw ValidationError("lambda1_grid", "grid values must lie in [0,1)");
            }
        }
    }
    if (doc.contains("seed")) {
        out.seed = as_count(doc.at("seed"), "seed");
    }
    if (doc.contains("simulation")) {
        const json &s = doc.at("simulation");
        if (!s.is_object()) {
            throw ValidationError("simulation", "expected an object");
        }
        if (s.contains("horizon")) {
            out.simulation.horizon = as_count(s.at("horizon"), "simulation.horizon");
        }
        if (s.contains("warmup")) {
            out.simulation.warmup = as_count(s.at("warmup"), "simulation.warmup");
        }
        if (s.contains("dominant_k")) {
            out.simulation.dominant_k = as_count(s.at("dominant_k"), "simulation.dominant_k");
            if (out.simulation.dominant_k > n) {
                throw ValidationError("simulation.dominant_k", "must lie in 0..N");
            }
        }
        if (s.contains("trace_stride")) {
            out.simulation.trace_stride = as_count(s.at("trace_stride"), "simulation.trace_stride");
        }
        if (s.contains("batches")) {
            out.simulation.batches = as_count(s.at("batches"), "simulation.batches");
        }
    }
    return out;
}

ConfigDocument load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("--config", "cannot open '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

} // namespace rastab

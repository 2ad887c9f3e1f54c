#include "arrkit/nn/serialize.hpp"

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"

namespace arrkit::nn {

nlohmann::json net_to_json(const DenseNet& net) {
    nlohmann::json j;
    j["input_dim"] = net.input_dim();
    auto layers = nlohmann::json::array();
    for (const auto& s : net.layers())
        layers.push_back({{"in", s.in}, {"out", s.out}, {"activation", std::string(activation_name(s.activation))}});
    j["layers"] = layers;
    j["params"] = std::vector<double>(net.params().begin(), net.params().end());
    return j;
}

DenseNet net_from_json(const nlohmann::json& j) {
    try {
        std::vector<LayerSpec> specs;
        std::size_t in = j.at("input_dim").get<std::size_t>();
        for (const auto& l : j.at("layers")) {
            if (l.at("in").get<std::size_t>() != in) throw DataError("model: inconsistent layer dimensions");
            specs.push_back({l.at("out").get<std::size_t>(), parse_activation(l.at("activation").get<std::string>())});
            in = specs.back().out;
        }
        DenseNet net(j.at("input_dim").get<std::size_t>(), specs);
        const auto params = j.at("params").get<std::vector<double>>();
        if (params.size() != net.parameter_count()) throw DataError("model: parameter count mismatch");
        std::copy(params.begin(), params.end(), net.params().begin());
        net.validate();
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model: ") + e.what());
    }
}

nlohmann::json model_header(std::string_view kind) {
    return {{"format", kModelFormat}, {"version", kModelFormatVersion}, {"kind", kind}};
}

void check_model_header(const nlohmann::json& j, std::string_view kind) {
    if (!j.is_object() || j.value("format", "") != kModelFormat) throw DataError("not an arrkit model file");
    if (j.value("version", 0) != kModelFormatVersion)
        throw DataError("unsupported model format version " + std::to_string(j.value("version", 0)));
    if (j.value("kind", "") != kind)
        throw DataError("expected model kind '" + std::string(kind) + "', found '" + j.value("kind", "") + "'");
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

nlohmann::json load_json(const std::filesystem::path& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace arrkit::nn

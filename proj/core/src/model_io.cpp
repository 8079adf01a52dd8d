#include "co2occ/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "co2occ/errors.hpp"

namespace co2occ {

namespace {

const char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; big-endian hosts need a byte swap here");

std::string encode_doubles(const double* data, std::size_t count) {
    return base64_encode(reinterpret_cast<const unsigned char*>(data), count * sizeof(double));
}

std::vector<double> decode_doubles(const std::string& text, std::size_t expected) {
    const std::vector<unsigned char> bytes = base64_decode(text);
    if (bytes.size() != expected * sizeof(double))
        throw DataError("model file: array payload has wrong length");
    std::vector<double> out(expected);
    std::memcpy(out.data(), bytes.data(), bytes.size());
    return out;
}

} // namespace

std::string base64_encode(const unsigned char* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        unsigned int v = data[i] << 16;
        if (i + 1 < len) v |= data[i + 1] << 8;
        if (i + 2 < len) v |= data[i + 2];
        out.push_back(kB64Chars[(v >> 18) & 63]);
        out.push_back(kB64Chars[(v >> 12) & 63]);
        out.push_back(i + 1 < len ? kB64Chars[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? kB64Chars[v & 63] : '=');
    }
    return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
    static int lut[256];
    static bool init = false;
    if (!init) {
        for (int& v : lut) v = -1;
        for (int i = 0; i < 64; ++i) lut[static_cast<unsigned char>(kB64Chars[i])] = i;
        init = true;
    }
    if (text.size() % 4 != 0) throw DataError("base64: length not a multiple of 4");
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int j = 0; j < 4; ++j) {
            const char c = text[i + j];
            if (c == '=') {
                vals[j] = 0;
                ++pad;
            } else {
                vals[j] = lut[static_cast<unsigned char>(c)];
                if (vals[j] < 0 || pad > 0) throw DataError("base64: invalid character");
            }
        }
        const unsigned int v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
        out.push_back((v >> 16) & 0xff);
        if (pad < 2) out.push_back((v >> 8) & 0xff);
        if (pad < 1) out.push_back(v & 0xff);
    }
    return out;
}

std::string model_to_json(const FsElmModel& model) {
    nlohmann::ordered_json j;
    j["schema_version"] = kModelSchemaVersion;
    j["mode"] = model.mode == ModelMode::fs_elm ? "fs_elm" : "standard_elm";
    j["l"] = model.config.l;
    j["s"] = model.config.s;
    j["hidden"] = model.hidden;
    j["gamma"] = model.gamma;
    j["seed"] = model.seed;
    j["targets"] = {{"p", model.targets.p},
                    {"i", model.targets.i},
                    {"d", model.targets.d},
                    {"o", model.targets.o},
                    {"v", model.targets.v}};
    j["scale"] = {{"p", model.scale.p},
                  {"i", model.scale.i},
                  {"d", model.scale.d},
                  {"o", model.scale.o},
                  {"v", model.scale.v}};
    j["clamp_max"] = model.clamp_max;
    j["training_rmse"] = model.training_rmse;
    j["r_rows"] = model.r.rows();
    j["r_cols"] = model.r.cols();
    // Eigen stores column-major; serialize row-major for the documented layout.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> r_rm = model.r;
    j["r"] = encode_doubles(r_rm.data(), static_cast<std::size_t>(r_rm.size()));
    j["b"] = encode_doubles(model.bias.data(), static_cast<std::size_t>(model.bias.size()));
    j["beta"] = encode_doubles(model.beta.data(), static_cast<std::size_t>(model.beta.size()));
    return j.dump(2) + "\n";
}

FsElmModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad model json: ") + e.what());
    }
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion)
        throw DataError("unsupported model schema version " + std::to_string(version));

    FsElmModel model;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "fs_elm")
        model.mode = ModelMode::fs_elm;
    else if (mode == "standard_elm")
        model.mode = ModelMode::standard_elm;
    else
        throw DataError("unknown model mode '" + mode + "'");
    model.config.l = j.at("l").get<int>();
    model.config.s = j.at("s").get<int>();
    model.hidden = j.at("hidden").get<int>();
    model.gamma = j.at("gamma").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    const auto& t = j.at("targets");
    model.targets = {t.at("p"), t.at("i"), t.at("d"), t.at("o"), t.at("v")};
    const auto& s = j.at("scale");
    model.scale = {s.at("p"), s.at("i"), s.at("d"), s.at("o"), s.at("v")};
    model.clamp_max = j.at("clamp_max").get<double>();
    model.training_rmse = j.value("training_rmse", 0.0);

    const Eigen::Index rows = j.at("r_rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("r_cols").get<Eigen::Index>();
    if (rows != model.hidden) throw DataError("model file: r_rows disagrees with hidden count");
    const std::vector<double> r = decode_doubles(j.at("r").get<std::string>(),
                                                 static_cast<std::size_t>(rows * cols));
    model.r = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                             Eigen::RowMajor>>(r.data(), rows, cols);
    const std::vector<double> b =
        decode_doubles(j.at("b").get<std::string>(), static_cast<std::size_t>(rows));
    model.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
    const std::vector<double> beta =
        decode_doubles(j.at("beta").get<std::string>(), static_cast<std::size_t>(rows));
    model.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), rows);
    model.finalize();
    return model;
}

void save_model(const std::string& path, const FsElmModel& model) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << model_to_json(model);
}

FsElmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

} // namespace co2occ

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "co2occ/errors.hpp"
#include "co2occ/fselm.hpp"
#include "co2occ/model_io.hpp"
#include "co2occ/rng.hpp"

using namespace co2occ;

namespace {

std::string enc(const std::string& s) {
    return base64_encode(reinterpret_cast<const unsigned char*>(s.data()), s.size());
}

std::string dec(const std::string& s) {
    const auto bytes = base64_decode(s);
    return std::string(bytes.begin(), bytes.end());
}

FsElmModel tiny_trained_model() {
    const HorizonConfig cfg{4, 2};
    Rng rng(13);
    TrainingSet set;
    for (int k = 0; k < 40; ++k) {
        InputWindow x;
        const double occ = std::floor(rng.uniform(0.0, 5.0));
        for (int i = 0; i <= cfg.l; ++i) x.co2_window.push_back(420.0 + 25.0 * occ + rng.normal());
        for (int i = 0; i < cfg.l; ++i) x.occ_window.push_back(occ);
        for (int i = 0; i <= cfg.l; ++i) x.vent_window.push_back(0.0);
        set.inputs.push_back(std::move(x));
        set.targets.push_back(occ);
    }
    TrainOptions opts;
    opts.hidden = 10;
    opts.candidates = 2;
    opts.threads = 1;
    return train(set, cfg, opts);
}

} // namespace

TEST_CASE("base64 rfc 4648 vectors") {
    CHECK(enc("") == "");
    CHECK(enc("f") == "Zg==");
    CHECK(enc("fo") == "Zm8=");
    CHECK(enc("foo") == "Zm9v");
    CHECK(enc("foob") == "Zm9vYg==");
    CHECK(enc("fooba") == "Zm9vYmE=");
    CHECK(enc("foobar") == "Zm9vYmFy");

    CHECK(dec("Zm9vYmFy") == "foobar");
    CHECK(dec("Zg==") == "f");
    CHECK(dec("") == "");
}

TEST_CASE("base64 rejects malformed input") {
    CHECK_THROWS_AS(base64_decode("abc"), DataError);     // not multiple of 4
    CHECK_THROWS_AS(base64_decode("ab!d"), DataError);    // invalid char
    CHECK_THROWS_AS(base64_decode("Zg=a"), DataError);    // data after padding
}

TEST_CASE("base64 round trips binary payloads") {
    std::string blob;
    for (int i = 0; i < 257; ++i) blob.push_back(static_cast<char>(i * 31 % 256));
    CHECK(dec(enc(blob)) == blob);
}

TEST_CASE("model json round trip preserves predictions bit for bit") {
    const FsElmModel model = tiny_trained_model();
    const std::string json = model_to_json(model);
    const FsElmModel back = model_from_json(json);

    CHECK(back.mode == model.mode);
    CHECK(back.hidden == model.hidden);
    CHECK(back.gamma == model.gamma);
    CHECK(back.seed == model.seed);
    CHECK(back.clamp_max == model.clamp_max);
    CHECK(back.scale.p == model.scale.p);
    CHECK((back.r.array() == model.r.array()).all());
    CHECK((back.bias.array() == model.bias.array()).all());
    CHECK((back.beta.array() == model.beta.array()).all());

    InputWindow x;
    for (int i = 0; i <= model.config.l; ++i) x.co2_window.push_back(480.0 + i);
    for (int i = 0; i < model.config.l; ++i) x.occ_window.push_back(2.0);
    for (int i = 0; i <= model.config.l; ++i) x.vent_window.push_back(1.0);
    CHECK(predict(back, x) == predict(model, x));

    // serialization is stable
    CHECK(model_to_json(back) == json);
}

TEST_CASE("model file save and load") {
    const FsElmModel model = tiny_trained_model();
    const auto path = (std::filesystem::temp_directory_path() / "co2occ_test_model.json").string();
    save_model(path, model);
    const FsElmModel back = load_model(path);
    CHECK(back.training_rmse == model.training_rmse);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_model(path), DataError);
}

TEST_CASE("schema version and shape guards") {
    const FsElmModel model = tiny_trained_model();
    nlohmann::json j = nlohmann::json::parse(model_to_json(model));

    SUBCASE("future schema version is rejected") {
        j["schema_version"] = kModelSchemaVersion + 1;
        CHECK_THROWS_AS(model_from_json(j.dump()), DataError);
    }
    SUBCASE("r_rows must match hidden") {
        j["r_rows"] = model.hidden + 1;
        CHECK_THROWS_AS(model_from_json(j.dump()), DataError);
    }
    SUBCASE("unknown mode is rejected") {
        j["mode"] = "mystery";
        CHECK_THROWS_AS(model_from_json(j.dump()), DataError);
    }
    SUBCASE("truncated payload is rejected") {
        j["beta"] = "Zg==";
        CHECK_THROWS_AS(model_from_json(j.dump()), DataError);
    }
    SUBCASE("not json at all") {
        CHECK_THROWS_AS(model_from_json("][ nope"), DataError);
    }
}

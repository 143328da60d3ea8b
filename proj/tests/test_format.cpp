#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "pkp/generators.hpp"
#include "support/test_helpers.hpp"

using namespace pkp;

namespace {

IpkpInstance sample_ipkp_instance(std::uint64_t seed = 11) {
    SeededRng rng(seed);
    return gen_ipkp(ParameterSet{7, 2, 4, 2, Variant::ipkp}, rng);
}

} // namespace

TEST_CASE("serialize/deserialize round trip is the identity", "[format]") {
    SeededRng rng(8);
    for (Variant v : {Variant::ipkp, Variant::ipkp_star, Variant::pkp, Variant::pkp_star}) {
        const ParameterSet p{11, 2, 5, 1, v};
        const Instance inst = generate(p, rng);
        for (bool with_secret : {false, true}) {
            const std::string text = serialize(inst, with_secret);
            const Instance back = deserialize(text);
            CHECK(serialize(back, with_secret) == text);
            CHECK(instance_params(back) == p);
        }
    }
}

TEST_CASE("homogeneous instances omit C and parse it back as zero", "[format]") {
    SeededRng rng(9);
    const PkpInstance inst = gen_pkp(ParameterSet{5, 1, 4, 1, Variant::pkp}, rng);
    const std::string text = serialize(inst, true);
    CHECK(text.find("\"C\"") == std::string::npos);

    const Instance back = deserialize(text);
    REQUIRE(std::holds_alternative<PkpInstance>(back));
    const auto& pk = std::get<PkpInstance>(back);
    CHECK(pk.as_ipkp().C.is_zero());
    CHECK(pk.A == inst.A);
    CHECK(pk.B == inst.B);
    REQUIRE(pk.secret.has_value());
    CHECK(*pk.secret == *inst.secret);
}

TEST_CASE("secret is only written on request", "[format]") {
    const IpkpInstance inst = sample_ipkp_instance();
    CHECK(serialize(inst, false).find("\"pi\"") == std::string::npos);
    CHECK(serialize(inst, true).find("\"pi\"") != std::string::npos);
    const Instance noSecret = deserialize(serialize(inst, false));
    CHECK_FALSE(std::get<IpkpInstance>(noSecret).secret.has_value());
}

TEST_CASE("entries out of range are rejected with a location", "[format]") {
    const IpkpInstance inst = sample_ipkp_instance();
    auto doc = nlohmann::json::parse(serialize(inst, true));
    doc["A"][0][0] = inst.params.q; // value q is out of [0, q)
    try {
        deserialize(doc.dump());
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        const std::string what = e.what();
        CHECK(what.find("\"A\"") != std::string::npos);
        CHECK(what.find("row 0") != std::string::npos);
        CHECK(what.find("out of [0, q)") != std::string::npos);
    }
}

TEST_CASE("structural problems raise parse errors", "[format]") {
    const IpkpInstance inst = sample_ipkp_instance();
    const auto base = nlohmann::json::parse(serialize(inst, true));

    CHECK_THROWS_AS(deserialize("not json at all"), parse_error);
    CHECK_THROWS_AS(deserialize("{}"), parse_error);

    auto bad = base;
    bad.erase("B");
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);

    bad = base;
    bad["format_version"] = 999;
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);

    bad = base;
    bad["variant"] = "nonsense";
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);

    bad = base;
    bad["A"].erase(0); // wrong row count
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);

    bad = base;
    bad["m"] = 3; // dimension inconsistency with the matrices
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);

    bad = base;
    bad["pi"] = {1, 1, 2, 3}; // not a bijection
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);
}

TEST_CASE("semantic inconsistencies raise parse errors", "[format]") {
    const IpkpInstance inst = sample_ipkp_instance();
    const auto base = nlohmann::json::parse(serialize(inst, true));

    // break the secret: swap two images so A pi B != C
    auto bad = base;
    std::swap(bad["pi"][0], bad["pi"][1]);
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);

    // zero out A so rank(A) != ell
    bad = base;
    for (auto& row : bad["A"])
        for (auto& v : row) v = 0;
    CHECK_THROWS_AS(deserialize(bad.dump()), parse_error);

    // homogeneous variant with a nonzero C
    SeededRng rng(10);
    const PkpInstance hom = gen_pkp(ParameterSet{5, 1, 4, 1, Variant::pkp}, rng);
    auto doc = nlohmann::json::parse(serialize(hom, false));
    doc["C"] = {{1}};
    CHECK_THROWS_AS(deserialize(doc.dump()), parse_error);
    // ... but an explicit zero C is accepted
    doc["C"] = {{0}};
    CHECK(std::holds_alternative<PkpInstance>(deserialize(doc.dump())));
}

TEST_CASE("star instances must satisfy the row constraints on load", "[format]") {
    SeededRng rng(12);
    const Instance inst = generate(ParameterSet{7, 1, 3, 1, Variant::ipkp_star}, rng);
    auto doc = nlohmann::json::parse(serialize(inst, false));
    doc["B"][0][0] = doc["B"][1][0]; // duplicate row
    CHECK_THROWS_AS(deserialize(doc.dump()), parse_error);
}

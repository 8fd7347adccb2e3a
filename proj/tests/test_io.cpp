#include "support.hpp"

#include "seplearn/driver.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace seplearn;
using namespace seplearn::testing;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / ("seplearn_io_" + name);
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST(KripkeJson, ReadsActionAndPlainSuccessors) {
    const auto j = Json::parse(R"({
        "states": [{"id": "s", "label": ["p"], "succ": {"a": ["t"]}},
                   {"id": "t", "label": [], "succ": {"a": ["t"], "b": ["s"]}}],
        "initial": ["s"]})");
    const auto k = kripke_from_json(j);
    EXPECT_EQ(k.size(), 2u);
    EXPECT_EQ(k.actions(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(k.successors(1, "b"), std::vector<std::size_t>{0});
    EXPECT_EQ(k.name(0), "s");
    EXPECT_EQ(k.prop_set("p"), bits_of(2, {0}));

    const auto plain = kripke_from_json(Json::parse(R"({"states": [{"succ": [0]}], "initial": [0]})"));
    EXPECT_EQ(plain.actions(), std::vector<std::string>{kDefaultAction});
    EXPECT_TRUE(plain.nonblocking());
}

TEST(KripkeJson, RoundTrip) {
    Rng rng(101);
    for (int it = 0; it < 100; ++it) {
        const auto k = random_kripke(rng, uniform(rng, 1, 5), {"p", "q"}, it % 2 ? std::vector<std::string>{"a", "b"}
                                                                              : std::vector<std::string>{kDefaultAction},
                                     0.4, it % 3 == 0);
        EXPECT_EQ(kripke_from_json(Json::parse(kripke_to_json(k).dump())), k);
    }
}

TEST(KripkeJson, Diagnostics) {
    try {
        kripke_from_json(Json::parse(R"({"states": [{"id": "s", "succ": ["nope"]}], "initial": ["s"]})"), "m");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MalformedInput);
        EXPECT_NE(std::string(e.what()).find("m/states/0/succ"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
    }
    EXPECT_THROW(kripke_from_json(Json::parse(R"({"states": []})")), Error);
    EXPECT_THROW(kripke_from_json(Json::parse(R"({"states": [{"id": 1}, {"id": 1}], "initial": [1]})")), Error);
    EXPECT_THROW(kripke_from_json(Json::parse(R"({"states": [{}], "initial": []})")), Error);
}

TEST(LassoJson, RoundTrip) {
    Rng rng(102);
    for (int it = 0; it < 100; ++it) {
        const auto w = random_lasso(rng, 6, {"p", "q"}, true);
        EXPECT_EQ(lasso_from_json(lasso_to_json(w)), w);
    }
    EXPECT_THROW(lasso_from_json(Json::parse(R"({"prefix": [], "loop": []})")), Error);
    EXPECT_THROW(lasso_from_json(Json::parse(R"({"prefix": [1]})")), Error);
}

TEST(AutomataJson, RoundTrip) {
    Rng rng(103);
    for (int it = 0; it < 50; ++it) {
        const auto n = random_nfa(rng, uniform(rng, 1, 4), {"a", "b"});
        EXPECT_EQ(nfa_from_json(nfa_to_json(n)), n);
        const auto p = random_parity(rng, uniform(rng, 1, 3), {"a", "b"});
        EXPECT_EQ(parity_from_json(parity_to_json(p)), p);
    }
    EXPECT_THROW(parity_from_json(Json::parse(R"({"alphabet": ["a"], "states": [{}], "initial": [0]})")), Error);
    EXPECT_THROW(nfa_from_json(Json::parse(R"({"states": [{}], "initial": [0]})")), Error);
}

TEST(Files, ParseErrorsCarryLineAndColumn) {
    const auto p = temp_file("bad.json", "{\n  \"logic\": \"ml\",\n  \"positives\": [ ,\n}\n");
    try {
        read_json_file(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MalformedInput);
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
    }
    EXPECT_THROW(read_json_file("/nonexistent/seplearn.json"), Error);
}

TEST(SampleFile, ResolvesFileReferencesAndRoundTrips) {
    const auto model = temp_file("model.json", kripke_to_json(two_state_ml()).dump());
    const auto sample = temp_file("sample.json", R"({"logic": "ml", "fragment": ["p", "<a>>=1"],
        "positives": [{"file": ")" + model.filename().string() + R"("}],
        "negatives": [{"states": [{"label": [], "succ": {"a": [0]}}], "initial": [0]}],
        "options": {"max_k": 2, "budget": 100}})");
    const auto s = load_sample_file(sample);
    EXPECT_EQ(s.logic, "ml");
    ASSERT_EQ(s.positives.size(), 1u);
    EXPECT_EQ(kripke_from_json(s.positives[0]), two_state_ml());
    EXPECT_EQ(s.max_k, 2);
    EXPECT_EQ(s.budget, std::size_t{100});
    const auto again = sample_from_json(Json::parse(sample_to_json(s).dump()));
    EXPECT_EQ(sample_to_json(again), sample_to_json(s));

    const auto r = with_instance(s, [](const auto& inst) { return learn(inst); });
    ASSERT_EQ(r.verdict, Verdict::Separable);
    EXPECT_EQ(render(*r.dag, r.formula), "<a>>=1 p");
}

TEST(SampleFile, Rejections) {
    EXPECT_THROW(sample_from_json(Json::parse(R"({"logic": "tl"})")), Error);
    EXPECT_THROW(sample_from_json(Json::parse(R"({"logic": "ml", "fragment": "most"})")), Error);
    EXPECT_THROW(sample_from_json(Json::parse(R"([1, 2])")), Error);
    const auto s = sample_from_json(Json::parse(R"({"logic": "ml", "fragment": ["p", "EX"],
        "positives": [{"states": [{"label": ["p"]}], "initial": [0]}]})"));
    try {
        with_instance(s, [](const auto& inst) { return learn(inst); });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownOperator);
    }
}

TEST(SampleFile, SignaturesPerLogic) {
    const auto words = sample_from_json(Json::parse(R"({"logic": "ltl-words", "fragment": ["x", "x_bar", "X"],
        "positives": [{"loop": [["x"]]}], "negatives": [{"loop": [["y"]]}]})"));
    EXPECT_TRUE(full_signature(words).has("y_bar"));
    const auto r = with_instance(words, [](const auto& inst) { return learn(inst); });
    EXPECT_EQ(r.verdict, Verdict::Separable);

    const auto ml = sample_from_json(Json::parse(R"({"logic": "ml",
        "positives": [{"states": [{"label": ["p"], "succ": {"a": [1]}}, {"succ": {"a": [0]}}, {}], "initial": [0]}]})"));
    EXPECT_TRUE(full_signature(ml).has("<a>>=3"));
    EXPECT_FALSE(full_signature(ml).has("<a>>=4"));
}

TEST(SampleFile, GeneratedSamplesParseBackIdentically) {
    Nfa a(2, {"a", "b"}, {0}, {1});
    a.add_edge(0, "a", 1);
    a.add_edge(1, "b", 0);
    const std::vector<SampleFile> files{prime_sample_file(2, Lattice::And), prime_sample_file(3, Lattice::Or, 2),
                                        random_ml_sample_file(5), random_ml_sample_file(6),
                                        gadget_sample_file(a, {0}, false), gadget_sample_file(a, {0, 1}, true)};
    for (const auto& f : files) {
        const Json j = sample_to_json(f);
        EXPECT_EQ(sample_to_json(sample_from_json(Json::parse(j.dump(2)))), j);
        EXPECT_NO_THROW(with_instance(f, [](const auto& inst) { return size_bound(inst); }));
    }
    EXPECT_EQ(sample_to_json(random_ml_sample_file(5)), sample_to_json(random_ml_sample_file(5)));
    const auto p = prime_sample_file(2, Lattice::And);
    const auto r = with_instance(p, [](const auto& inst) { return learn(inst); });
    ASSERT_EQ(r.verdict, Verdict::Separable);
    EXPECT_EQ(r.tree_size, 6u);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "wikigap/gateway_mock.hpp"
#include "wikigap/npov.hpp"
#include "wikigap/prompts.hpp"

using namespace wikigap;
using npov::ExemplarSet;
using npov::Mode;

namespace {

ExemplarSet five_pairs() {
    ExemplarSet set;
    for (int i = 0; i < 5; ++i) {
        set.pairs.emplace_back("biased sentence " + std::to_string(i),
                               "neutral sentence " + std::to_string(i));
    }
    return set;
}

size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    size_t count = 0;
    for (size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("zero-shot prompt carries instruction and definitions, no exemplars") {
    std::string p = npov::build_prompt("Some sentence.", Mode::ZeroShot, ExemplarSet{});
    CHECK(p.find(prompts::kNeutralInstruction) != std::string::npos);
    CHECK(p.find(prompts::kFramingDefinition) != std::string::npos);
    CHECK(p.find(prompts::kEpistemologicalDefinition) != std::string::npos);
    CHECK(p.find(prompts::kNeutralOutputDirective) != std::string::npos);
    CHECK(p.find(prompts::kNeutralExamplesHeader) == std::string::npos);
    CHECK(p.find("Some sentence.") != std::string::npos);
}

TEST_CASE("few-shot prompt contains exactly five exemplar pairs") {
    ExemplarSet set = five_pairs();
    std::string p = npov::build_prompt("The query.", Mode::FewShot, set);
    CHECK(p.find(prompts::kNeutralExamplesHeader) != std::string::npos);
    for (const auto& [biased, neutral] : set.pairs) {
        CHECK(p.find(biased) != std::string::npos);
        CHECK(p.find(neutral) != std::string::npos);
    }
    // five exemplar query lines plus the final query line
    CHECK(count_occurrences(p, "Query: ") == 6);
}

TEST_CASE("few-shot with the wrong exemplar count is rejected") {
    ExemplarSet three;
    three.pairs = {{"b1", "n1"}, {"b2", "n2"}, {"b3", "n3"}};
    CHECK_THROWS_AS(npov::build_prompt("q", Mode::FewShot, three), MissingExemplarsError);

    ExemplarSet six = five_pairs();
    six.pairs.emplace_back("b6", "n6");
    CHECK_THROWS_AS(npov::build_prompt("q", Mode::FewShot, six), MissingExemplarsError);
}

TEST_CASE("build_prompt is pure: identical inputs give identical bytes") {
    ExemplarSet set = five_pairs();
    std::string a = npov::build_prompt("query sentence", Mode::FewShot, set);
    std::string b = npov::build_prompt("query sentence", Mode::FewShot, set);
    CHECK(a == b);
}

TEST_CASE("neutralize returns the model's pad span") {
    gateway::ScriptedGenerator gen({"<pad>Some people never listen to their parents.</pad>"});
    auto record = npov::neutralize("Blacks never listen to their parents.", Mode::ZeroShot,
                                   ExemplarSet{}, gen);
    CHECK(record.parse_ok);
    CHECK(record.neutralized == "Some people never listen to their parents.");
    CHECK(record.original == "Blacks never listen to their parents.");
    CHECK(record.exemplars_used == 0);
}

TEST_CASE("missing sentinels twice passes the original through") {
    gateway::ScriptedGenerator gen({"no sentinels here", "still none"});
    auto record = npov::neutralize("Original sentence.", Mode::ZeroShot, ExemplarSet{}, gen);
    CHECK_FALSE(record.parse_ok);
    CHECK(record.neutralized == "Original sentence.");
    CHECK(gen.calls() == 2);  // one retry, then pass-through
}

TEST_CASE("an echoing model yields parse_ok with unchanged text") {
    gateway::ScriptedGenerator gen({"<pad>Original sentence.</pad>"});
    auto record = npov::neutralize("Original sentence.", Mode::ZeroShot, ExemplarSet{}, gen);
    CHECK(record.parse_ok);
    CHECK(record.neutralized == record.original);
}

TEST_CASE("sentinel extraction returns exactly the wrapped payload") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> len(1, 60);
    std::uniform_int_distribution<int> chr(0, 61);
    auto random_payload = [&] {
        static const char alphabet[] =
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ 0123456789";
        int n = len(rng);
        std::string s;
        for (int i = 0; i < n; ++i) s.push_back(alphabet[chr(rng)]);
        if (s.find_first_not_of(' ') == std::string::npos) s = "x" + s;
        return s;
    };
    for (int trial = 0; trial < 200; ++trial) {
        std::string payload = random_payload();
        std::string prefix = trial % 3 == 0 ? "" : "Sure! " + random_payload() + "\n";
        std::string suffix = trial % 2 == 0 ? "" : "\n" + random_payload();
        auto span = npov::extract_pad_span(prefix + "<pad>" + payload + "</pad>" + suffix);
        REQUIRE(span.has_value());
        CHECK(*span == payload);
    }
}

TEST_CASE("pad spans that are absent or empty do not parse") {
    CHECK_FALSE(npov::extract_pad_span("nothing here").has_value());
    CHECK_FALSE(npov::extract_pad_span("<pad>unterminated").has_value());
    CHECK_FALSE(npov::extract_pad_span("</pad>backwards<pad>").has_value());
    CHECK_FALSE(npov::extract_pad_span("<pad></pad>").has_value());
}

TEST_CASE("batch neutralization never drops a sentence") {
    std::vector<std::string> sentences = {"First one.", "Second one.", "Third one."};
    // middle response parses, the others fall back to pass-through
    gateway::ScriptedGenerator gen({"bad", "bad", "<pad>ok</pad>", "bad", "bad"});
    std::vector<npov::NeutralizationRecord> records;
    for (const auto& s : sentences) {
        records.push_back(npov::neutralize(s, Mode::ZeroShot, ExemplarSet{}, gen));
    }
    REQUIRE(records.size() == sentences.size());
    for (size_t i = 0; i < records.size(); ++i) {
        CHECK_FALSE(records[i].neutralized.empty());
        if (!records[i].parse_ok) CHECK(records[i].neutralized == sentences[i]);
    }
}

TEST_CASE("exemplar file round-trips through the loader") {
    namespace fs = std::filesystem;
    fs::path p = fs::temp_directory_path() / "wikigap_exemplars_test.tsv";
    {
        std::ofstream out(p);
        out << "# comment line\n";
        out << "biased one\tneutral one\n";
        out << "biased two\tneutral two\n";
    }
    auto set = npov::load_exemplars(p.string());
    REQUIRE(set.pairs.size() == 2);
    CHECK(set.pairs[0].first == "biased one");
    CHECK(set.pairs[1].second == "neutral two");
    fs::remove(p);

    CHECK_THROWS_AS(npov::load_exemplars("/nonexistent/exemplars.tsv"), IoError);
}

TEST_CASE("the mock generator strips loaded words inside sentinels") {
    gateway::MockGenerator gen;
    gateway::GenerationRequest req;
    req.prompt = npov::build_prompt("She bravely fought the committee.", Mode::ZeroShot,
                                    ExemplarSet{});
    std::string completion = gen.generate(req);
    auto span = npov::extract_pad_span(completion);
    REQUIRE(span.has_value());
    CHECK(span->find("bravely") == std::string::npos);
    CHECK(span->find("fought") != std::string::npos);
}

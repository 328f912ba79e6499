#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "wikigap/gateway_mock.hpp"
#include "wikigap/mapper.hpp"

using namespace wikigap;
using gateway::ProfileId;
using ingest::Article;
using ingest::Section;
using mapping::MappingStatus;
using mapping::SectionMapping;
using mapping::Thresholds;

namespace {

Article make_article(std::vector<std::string> headings, std::vector<std::string> bodies = {}) {
    Article a;
    for (size_t i = 0; i < headings.size(); ++i) {
        Section s;
        s.heading = headings[i];
        if (i < bodies.size()) {
            s.raw_text = bodies[i];
            if (!bodies[i].empty()) s.sentences = {bodies[i]};
        }
        a.sections.push_back(std::move(s));
    }
    return a;
}

std::map<ProfileId, int> dims2() {
    return {{ProfileId::TitleMap, 2},
            {ProfileId::ContentMap, 2},
            {ProfileId::Augment, 2},
            {ProfileId::RagIndex, 2}};
}

// unit vector whose cosine against (1,0) is exactly `sim`
std::vector<double> at_sim(double sim) {
    return {sim, std::sqrt(1.0 - sim * sim)};
}

gateway::Gateway table_gateway(std::shared_ptr<gateway::TableEmbedder> embedder) {
    gateway::Gateway gw;
    gw.embeddings = std::move(embedder);
    gw.translator = std::make_shared<gateway::TableTranslator>();
    gw.generator = std::make_shared<gateway::MockGenerator>();
    return gw;
}

}  // namespace

TEST_CASE("map_titles applies the title threshold") {
    auto embedder = std::make_shared<gateway::TableEmbedder>(dims2());
    embedder->set(ProfileId::TitleMap, "apple", {1.0, 0.0});
    embedder->set(ProfileId::TitleMap, "pear", {0.0, 1.0});
    embedder->set(ProfileId::TitleMap, "fruit", at_sim(0.60));
    embedder->set(ProfileId::TitleMap, "rock", at_sim(0.30));
    auto gw = table_gateway(embedder);

    Article lrl = make_article({"apple"});
    Article hrl = make_article({"fruit", "rock"});
    Thresholds t;

    auto mappings = mapping::map_titles(lrl, hrl, t, gw);
    REQUIRE(mappings.size() == 1);
    CHECK(mappings[0].hrl_heading == "fruit");
    CHECK(mappings[0].title_similarity == doctest::Approx(0.60));
    CHECK(mappings[0].status == MappingStatus::TitleMapped);  // 0.60 >= 0.44

    // best available pair scores only 0.30: below the 0.44 default
    Article lrl2 = make_article({"pear"});
    Article hrl2 = make_article({"rock2"});
    embedder->set(ProfileId::TitleMap, "rock2", {std::sqrt(1.0 - 0.09), 0.3});  // sim vs (0,1)=0.3
    auto rejected = mapping::map_titles(lrl2, hrl2, t, gw);
    REQUIRE(rejected.size() == 1);
    CHECK(rejected[0].title_similarity == doctest::Approx(0.30));
    CHECK(rejected[0].status == MappingStatus::Rejected);
}

TEST_CASE("identical heading text maps at similarity 1") {
    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    Article lrl = make_article({"Career"});
    Article hrl = make_article({"Career", "Other"});
    auto mappings = mapping::map_titles(lrl, hrl, Thresholds{}, gw);
    REQUIRE(mappings.size() == 1);
    CHECK(mappings[0].title_similarity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mappings[0].status == MappingStatus::TitleMapped);
    CHECK(mappings[0].hrl_heading == "Career");
}

TEST_CASE("map_titles equals brute-force argmax with threshold filter") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> n_sections(1, 8);
    std::uniform_int_distribution<int> word(0, 9999);

    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    auto& embedder = *gw.embeddings;
    Thresholds t;

    for (int trial = 0; trial < 25; ++trial) {
        auto heading = [&](const char* side) {
            return std::string(side) + " w" + std::to_string(word(rng)) + " w" +
                   std::to_string(word(rng));
        };
        std::vector<std::string> lrl_headings, hrl_headings;
        int nl = n_sections(rng), nh = n_sections(rng);
        for (int i = 0; i < nl; ++i) lrl_headings.push_back(heading("l"));
        for (int j = 0; j < nh; ++j) hrl_headings.push_back(heading("h"));

        Article lrl = make_article(lrl_headings);
        Article hrl = make_article(hrl_headings);
        auto mappings = mapping::map_titles(lrl, hrl, t, gw);
        REQUIRE(mappings.size() == lrl_headings.size());

        // oracle: per-LRL translated embedding vs each HRL heading, scan argmax
        auto translator = gateway::TableTranslator();
        for (int i = 0; i < nl; ++i) {
            std::string translated =
                translator.translate(lrl_headings[i], gateway::Direction::LrlToHrl);
            auto lv = embedder.embed({translated}, ProfileId::TitleMap)[0];
            int best = 0;
            double best_sim = -2.0;
            for (int j = 0; j < nh; ++j) {
                auto hv = embedder.embed({hrl_headings[j]}, ProfileId::TitleMap)[0];
                double sim = gateway::cosine_similarity(lv, hv);
                if (sim > best_sim) {
                    best_sim = sim;
                    best = j;
                }
            }
            CHECK(mappings[i].hrl_index == best);
            CHECK(mappings[i].title_similarity == doctest::Approx(best_sim).epsilon(1e-12));
            CHECK(mappings[i].status == (best_sim >= t.title_threshold
                                             ? MappingStatus::TitleMapped
                                             : MappingStatus::Rejected));
        }
    }
}

TEST_CASE("raising the title threshold never adds mappings") {
    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    Article lrl = make_article({"alpha beta", "gamma delta", "epsilon", "zeta eta"});
    Article hrl = make_article({"alpha beta", "theta iota", "epsilon kappa"});

    auto mapped_count = [&](double threshold) {
        Thresholds t;
        t.title_threshold = threshold;
        int count = 0;
        for (const auto& m : mapping::map_titles(lrl, hrl, t, gw)) {
            if (m.status != MappingStatus::Rejected) ++count;
        }
        return count;
    };
    int prev = mapped_count(0.0);
    for (double th : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        int now = mapped_count(th);
        CHECK(now <= prev);
        prev = now;
    }
}

TEST_CASE("equal argmax similarity breaks ties to the earliest HRL section") {
    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    Article lrl = make_article({"same words"});
    Article hrl = make_article({"unrelated thing", "same words", "same words"});
    auto first = mapping::map_titles(lrl, hrl, Thresholds{}, gw);
    auto second = mapping::map_titles(lrl, hrl, Thresholds{}, gw);
    REQUIRE(first.size() == 1);
    CHECK(first[0].hrl_index == 1);  // earliest of the two identical candidates
    CHECK(second[0].hrl_index == first[0].hrl_index);
    CHECK(second[0].title_similarity == first[0].title_similarity);
}

TEST_CASE("confirm_content promotes at mean + stddev and not below") {
    auto embedder = std::make_shared<gateway::TableEmbedder>(dims2());
    embedder->set(ProfileId::ContentMap, "lrl high", {1.0, 0.0});
    embedder->set(ProfileId::ContentMap, "hrl high", at_sim(0.97));
    embedder->set(ProfileId::ContentMap, "lrl low", {1.0, 0.0});
    embedder->set(ProfileId::ContentMap, "hrl low", at_sim(0.90));
    auto gw = table_gateway(embedder);
    Thresholds t;  // 0.89 + 0.06 = 0.95

    SectionMapping m;
    m.status = MappingStatus::TitleMapped;

    Section lrl_high{"h", {"lrl high"}, "lrl high"};
    Section hrl_high{"h", {"hrl high"}, "hrl high"};
    auto confirmed = mapping::confirm_content(m, lrl_high, hrl_high, t, gw);
    CHECK(confirmed.status == MappingStatus::ContentConfirmed);
    CHECK(confirmed.content_similarity == doctest::Approx(0.97));

    Section lrl_low{"h", {"lrl low"}, "lrl low"};
    Section hrl_low{"h", {"hrl low"}, "hrl low"};
    auto unconfirmed = mapping::confirm_content(m, lrl_low, hrl_low, t, gw);
    CHECK(unconfirmed.status == MappingStatus::TitleMapped);
    CHECK(unconfirmed.content_similarity == doctest::Approx(0.90));
}

TEST_CASE("identical content on both sides confirms at similarity 1") {
    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    SectionMapping m;
    m.status = MappingStatus::TitleMapped;
    Section s{"h", {"Exactly the same text."}, "Exactly the same text."};
    auto confirmed = mapping::confirm_content(m, s, s, Thresholds{}, gw);
    CHECK(confirmed.status == MappingStatus::ContentConfirmed);
    CHECK(*confirmed.content_similarity == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("an empty side leaves the mapping title-mapped with a note") {
    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    SectionMapping m;
    m.status = MappingStatus::TitleMapped;
    Section empty{"h", {}, ""};
    Section full{"h", {"Some text."}, "Some text."};
    auto out = mapping::confirm_content(m, empty, full, Thresholds{}, gw);
    CHECK(out.status == MappingStatus::TitleMapped);
    CHECK_FALSE(out.note.empty());
    CHECK_FALSE(out.content_similarity.has_value());
}

TEST_CASE("two LRL sections may map to the same HRL section") {
    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    Article lrl = make_article({"shared topic", "shared topic words"});
    Article hrl = make_article({"shared topic", "unrelated"});
    auto mappings = mapping::map_titles(lrl, hrl, Thresholds{}, gw);
    REQUIRE(mappings.size() == 2);
    CHECK(mappings[0].hrl_index == 0);
    CHECK(mappings[1].hrl_index == 0);
}

TEST_CASE("empty articles are rejected") {
    gateway::Gateway gw = gateway::make_mock_gateway(dims2());
    Article empty;
    Article nonempty = make_article({"x"});
    CHECK_THROWS_AS(mapping::map_titles(empty, nonempty, Thresholds{}, gw), EmptyArticleError);
    CHECK_THROWS_AS(mapping::map_titles(nonempty, empty, Thresholds{}, gw), EmptyArticleError);
}

TEST_CASE("recompute_title_threshold is the mean of observed similarities") {
    CHECK(mapping::recompute_title_threshold({0.2, 0.4, 0.9}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(mapping::recompute_title_threshold({}), EmptyInputError);
}

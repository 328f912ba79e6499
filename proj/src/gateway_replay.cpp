#include "wikigap/gateway_replay.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <json.hpp>

namespace wikigap::gateway {

using nlohmann::json;

namespace {

json vectors_to_json(const std::vector<Vector>& vectors) {
    json rows = json::array();
    for (const auto& v : vectors) rows.push_back(v.components);
    return rows;
}

class Recorder {
public:
    explicit Recorder(const std::string& path) : out_(path, std::ios::app) {
        if (!out_) throw IoError("cannot open replay file for writing: " + path);
    }

    void append(const std::string& service, const json& request, const json& response) {
        std::lock_guard<std::mutex> lock(mu_);
        out_ << json{{"service", service}, {"request", request}, {"response", response}}.dump()
             << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
    std::mutex mu_;
};

class RecordingEmbedder : public EmbeddingClient {
public:
    RecordingEmbedder(std::shared_ptr<EmbeddingClient> base, std::shared_ptr<Recorder> rec)
        : base_(std::move(base)), rec_(std::move(rec)) {}

    std::vector<Vector> embed(const std::vector<std::string>& texts, ProfileId profile) override {
        auto out = base_->embed(texts, profile);
        rec_->append("embed", json{{"profile", profile_name(profile)}, {"texts", texts}},
                     json{{"vectors", vectors_to_json(out)}});
        return out;
    }

private:
    std::shared_ptr<EmbeddingClient> base_;
    std::shared_ptr<Recorder> rec_;
};

class RecordingTranslator : public TranslationClient {
public:
    RecordingTranslator(std::shared_ptr<TranslationClient> base, std::shared_ptr<Recorder> rec)
        : base_(std::move(base)), rec_(std::move(rec)) {}

    std::string translate(const std::string& text, Direction direction) override {
        auto out = base_->translate(text, direction);
        rec_->append("translate",
                     json{{"direction", direction_name(direction)}, {"text", text}},
                     json{{"translation", out}});
        return out;
    }

private:
    std::shared_ptr<TranslationClient> base_;
    std::shared_ptr<Recorder> rec_;
};

class RecordingGenerator : public GenerationClient {
public:
    RecordingGenerator(std::shared_ptr<GenerationClient> base, std::shared_ptr<Recorder> rec)
        : base_(std::move(base)), rec_(std::move(rec)) {}

    std::string generate(const GenerationRequest& request) override {
        auto out = base_->generate(request);
        rec_->append("generate",
                     json{{"prompt", request.prompt},
                          {"max_tokens", request.max_tokens},
                          {"temperature", request.temperature}},
                     json{{"completion", out}});
        return out;
    }

private:
    std::shared_ptr<GenerationClient> base_;
    std::shared_ptr<Recorder> rec_;
};

class ReplayStore {
public:
    explicit ReplayStore(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open replay file: " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json entry = json::parse(line, nullptr, false);
            if (entry.is_discarded()) throw ParseError("malformed replay line: " + line);
            std::string key =
                entry["service"].get<std::string>() + "|" + entry["request"].dump();
            entries_[key].push_back(entry["response"]);
        }
    }

    json lookup(const std::string& service, const json& request) {
        std::string key = service + "|" + request.dump();
        std::lock_guard<std::mutex> lock(mu_);
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw RemoteError("replay miss for " + service + " request");
        }
        size_t& cursor = cursors_[key];
        const auto& responses = it->second;
        json out = responses[std::min(cursor, responses.size() - 1)];
        ++cursor;
        return out;
    }

private:
    std::map<std::string, std::vector<json>> entries_;
    std::map<std::string, size_t> cursors_;
    std::mutex mu_;
};

class ReplayEmbedder : public EmbeddingClient {
public:
    explicit ReplayEmbedder(std::shared_ptr<ReplayStore> store) : store_(std::move(store)) {}

    std::vector<Vector> embed(const std::vector<std::string>& texts, ProfileId profile) override {
        if (texts.empty()) return {};
        json res = store_->lookup("embed",
                                  json{{"profile", profile_name(profile)}, {"texts", texts}});
        std::vector<Vector> out;
        for (const auto& row : res["vectors"]) {
            out.push_back(Vector{row.get<std::vector<double>>(), profile});
        }
        return out;
    }

private:
    std::shared_ptr<ReplayStore> store_;
};

class ReplayTranslator : public TranslationClient {
public:
    explicit ReplayTranslator(std::shared_ptr<ReplayStore> store) : store_(std::move(store)) {}

    std::string translate(const std::string& text, Direction direction) override {
        json res = store_->lookup(
            "translate", json{{"direction", direction_name(direction)}, {"text", text}});
        return res["translation"].get<std::string>();
    }

private:
    std::shared_ptr<ReplayStore> store_;
};

class ReplayGenerator : public GenerationClient {
public:
    explicit ReplayGenerator(std::shared_ptr<ReplayStore> store) : store_(std::move(store)) {}

    std::string generate(const GenerationRequest& request) override {
        json res = store_->lookup("generate", json{{"prompt", request.prompt},
                                                   {"max_tokens", request.max_tokens},
                                                   {"temperature", request.temperature}});
        return res["completion"].get<std::string>();
    }

private:
    std::shared_ptr<ReplayStore> store_;
};

}  // namespace

Gateway make_recording_gateway(Gateway base, const std::string& path) {
    auto rec = std::make_shared<Recorder>(path);
    return Gateway{
        std::make_shared<RecordingEmbedder>(base.embeddings, rec),
        std::make_shared<RecordingTranslator>(base.translator, rec),
        std::make_shared<RecordingGenerator>(base.generator, rec),
    };
}

Gateway make_replay_gateway(const std::string& path) {
    auto store = std::make_shared<ReplayStore>(path);
    return Gateway{
        std::make_shared<ReplayEmbedder>(store),
        std::make_shared<ReplayTranslator>(store),
        std::make_shared<ReplayGenerator>(store),
    };
}

}  // namespace wikigap::gateway

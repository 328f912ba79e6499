#include "wikigap/gateway.hpp"

#include <cmath>

namespace wikigap::gateway {

const char* profile_name(ProfileId id) {
    switch (id) {
        case ProfileId::TitleMap: return "title_map";
        case ProfileId::ContentMap: return "content_map";
        case ProfileId::Augment: return "augment";
        case ProfileId::RagIndex: return "rag_index";
    }
    return "?";
}

ProfileId profile_from_name(const std::string& name) {
    if (name == "title_map") return ProfileId::TitleMap;
    if (name == "content_map") return ProfileId::ContentMap;
    if (name == "augment") return ProfileId::Augment;
    if (name == "rag_index") return ProfileId::RagIndex;
    throw ConfigError("unknown embedding profile: " + name);
}

const char* direction_name(Direction d) {
    return d == Direction::LrlToHrl ? "lrl_to_hrl" : "hrl_to_lrl";
}

double norm(const Vector& v) {
    double s = 0.0;
    for (double x : v.components) s += x * x;
    return std::sqrt(s);
}

double cosine_similarity(const Vector& a, const Vector& b) {
    if (a.profile != b.profile || a.components.size() != b.components.size()) {
        throw DimensionMismatchError("cosine_similarity: incompatible vectors");
    }
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) {
        throw ZeroVectorError("cosine_similarity: zero-norm vector");
    }
    double dot = 0.0;
    for (size_t i = 0; i < a.components.size(); ++i) dot += a.components[i] * b.components[i];
    double sim = dot / (na * nb);
    // clamp floating drift so callers can rely on [-1, 1]
    if (sim > 1.0) sim = 1.0;
    if (sim < -1.0) sim = -1.0;
    return sim;
}

}  // namespace wikigap::gateway

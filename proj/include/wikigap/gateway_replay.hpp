#pragma once

#include <string>

#include "wikigap/gateway.hpp"

namespace wikigap::gateway {

// Record/replay of gateway traffic as JSONL, one {service, request, response}
// object per line, keyed by the canonical request JSON. Recording is
// single-writer; replay serves repeated identical requests the recorded
// response (in recorded order, repeating the last).

// Wraps a gateway so every successful call is appended to `path`.
Gateway make_recording_gateway(Gateway base, const std::string& path);

// Serves recorded traffic only; unrecorded requests raise RemoteError.
Gateway make_replay_gateway(const std::string& path);

}  // namespace wikigap::gateway

#pragma once

#include "symdyn/circle.hpp"
#include "symdyn/game.hpp"
#include "symdyn/sft.hpp"

#include <string>
#include <string_view>

namespace symdyn {

// {"map": {"kind": "linear", "m": 2}, "breakpoints": ["0/1", "1/2"], "endpoint_tolerant": false}
// or {"map": {"kind": "piecewise_linear", "nodes": [...], "values": [...]}, ...}
// or {"uniform": {"m": 2, "exponent": 1}}.
MarkovPartition partition_from_json(std::string_view text);
MarkovPartition load_partition(const std::string& path);
std::string partition_to_json(const MarkovPartition& p);

// {"s": int, "matrix": [[0|1, ...], ...]}
std::string transition_system_to_json(const TransitionSystem& ts);
TransitionSystem transition_system_from_json(std::string_view text);

// One header line, one line per move, one strategy line.
std::string transcript_to_jsonl(const GameTranscript& t, int s);
GameTranscript transcript_from_jsonl(std::string_view text, int s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace symdyn

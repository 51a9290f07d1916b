#include "symdyn/io.hpp"

#include "symdyn/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace symdyn {

using nlohmann::json;

namespace {

Rational rat(const json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InputError(std::string(what) + " must be a \"p/q\" string");
}

std::vector<Rational> rats(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rat(e, what));
  return out;
}

json rat_array(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(format_rational(x));
  return a;
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

MarkovPartition partition_from_json(std::string_view text) {
  json j = parse_json(text, "partition");
  try {
    if (j.contains("uniform")) {
      const auto& u = j.at("uniform");
      return MarkovPartition::uniform(u.at("m").get<int>(), u.value("exponent", 1));
    }
    const auto& m = j.at("map");
    const std::string kind = m.at("kind").get<std::string>();
    std::optional<ExpandingCircleMap> map;
    if (kind == "linear") {
      map = ExpandingCircleMap::linear(m.at("m").get<int>());
    } else if (kind == "piecewise_linear" || kind == "piecewise-linear") {
      map = ExpandingCircleMap::piecewise_linear(rats(m.at("nodes"), "nodes"), rats(m.at("values"), "values"));
    } else {
      throw InputError("unknown map kind '" + kind + "'");
    }
    std::optional<bool> tolerant;
    if (j.contains("endpoint_tolerant")) tolerant = j.at("endpoint_tolerant").get<bool>();
    return MarkovPartition::custom(*map, rats(j.at("breakpoints"), "breakpoints"), tolerant);
  } catch (const json::exception& e) {
    throw InputError(std::string("partition: ") + e.what());
  }
}

MarkovPartition load_partition(const std::string& path) { return partition_from_json(read_file(path)); }

std::string partition_to_json(const MarkovPartition& p) {
  json j;
  const auto& map = p.map();
  if (map.kind() == ExpandingCircleMap::Kind::linear) {
    j["map"] = {{"kind", "linear"}, {"m", map.degree()}};
  } else {
    j["map"] = {{"kind", "piecewise_linear"}, {"nodes", rat_array(map.nodes())}, {"values", rat_array(map.values())}};
  }
  j["breakpoints"] = rat_array(p.breakpoints());
  j["endpoint_tolerant"] = p.endpoint_tolerant();
  return j.dump();
}

std::string transition_system_to_json(const TransitionSystem& ts) {
  json j;
  j["s"] = ts.size();
  j["matrix"] = ts.matrix();
  return j.dump();
}

TransitionSystem transition_system_from_json(std::string_view text) {
  json j = parse_json(text, "transition system");
  try {
    auto matrix = j.at("matrix").get<std::vector<std::vector<int>>>();
    if (j.contains("s") && j.at("s").get<int>() != static_cast<int>(matrix.size()))
      throw InputError("\"s\" does not match the matrix size");
    return TransitionSystem(std::move(matrix));
  } catch (const json::exception& e) {
    throw InputError(std::string("transition system: ") + e.what());
  }
}

std::string transcript_to_jsonl(const GameTranscript& t, int s) {
  std::ostringstream out;
  json h;
  h["header"] = {{"white_ratio", format_rational(t.white_ratio)},
                 {"black_ratio", format_rational(t.black_ratio)},
                 {"x0", format_rational(t.x0)},
                 {"seed", t.seed},
                 {"black", to_string(t.black)},
                 {"targets", to_string(t.targets)},
                 {"rounds", t.rounds},
                 {"out_of_theorem", t.out_of_theorem}};
  out << h.dump() << '\n';
  for (const Move& mv : t.moves) {
    json m;
    m["turn"] = mv.turn;
    m["player"] = std::string(1, mv.player);
    m["center"] = format_rational(mv.ball.center);
    m["radius"] = format_rational(mv.ball.radius);
    m["phase"] = to_string(mv.phase);
    if (mv.word) m["word"] = format_word(*mv.word, s);
    out << m.dump() << '\n';
  }
  const StrategyState& st = t.state;
  json g;
  auto opt = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  json gammas = json::array();
  for (const Word& w : st.gamma_truncations) gammas.push_back(format_word(w, s));
  g["strategy"] = {{"phase", to_string(st.phase)},
                   {"P", st.P},
                   {"L0", st.L0},
                   {"J", opt(st.J)},
                   {"L1", opt(st.L1)},
                   {"L", opt(st.L)},
                   {"N0", opt(st.N0)},
                   {"N", opt(st.N)},
                   {"Q", opt(st.Q)},
                   {"eta", format_word(st.eta, s)},
                   {"certificate", format_word(st.current_word, s)},
                   {"pending_extension", format_word(st.pending_extension, s)},
                   {"q_history", st.q_history},
                   {"extension_lengths", st.extension_lengths},
                   {"gamma_truncations", gammas},
                   {"q_window_ok", st.q_window_ok},
                   {"inequality_11", st.inequality_11},
                   {"ladder_fallback", st.ladder_fallback},
                   {"widened_first_step", st.widened_first_step}};
  out << g.dump() << '\n';
  return out.str();
}

GameTranscript transcript_from_jsonl(std::string_view text, int s) {
  GameTranscript t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto opt = [](const json& j, const char* key) -> std::optional<int> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<int>();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = parse_json(line, ("transcript line " + std::to_string(lineno)).c_str());
    try {
      if (j.contains("header")) {
        const auto& h = j.at("header");
        t.white_ratio = rat(h.at("white_ratio"), "white_ratio");
        t.black_ratio = rat(h.at("black_ratio"), "black_ratio");
        t.x0 = rat(h.at("x0"), "x0");
        t.seed = h.value("seed", std::uint64_t{0});
        t.black = parse_black_strategy(h.value("black", std::string("random")));
        t.targets = parse_target_mode(h.value("targets", std::string("all")));
        t.rounds = h.value("rounds", 0);
        t.out_of_theorem = h.value("out_of_theorem", false);
      } else if (j.contains("strategy")) {
        const auto& g = j.at("strategy");
        StrategyState& st = t.state;
        st.phase = parse_phase(g.at("phase").get<std::string>());
        st.P = g.value("P", 0);
        st.L0 = g.value("L0", 0);
        st.J = opt(g, "J");
        st.L1 = opt(g, "L1");
        st.L = opt(g, "L");
        st.N0 = opt(g, "N0");
        st.N = opt(g, "N");
        st.Q = opt(g, "Q");
        st.eta = parse_word(g.value("eta", std::string()), s);
        st.current_word = parse_word(g.value("certificate", std::string()), s);
        st.pending_extension = parse_word(g.value("pending_extension", std::string()), s);
        st.q_history = g.value("q_history", std::vector<int>{});
        st.extension_lengths = g.value("extension_lengths", std::vector<std::size_t>{});
        for (const auto& w : g.value("gamma_truncations", std::vector<std::string>{}))
          st.gamma_truncations.push_back(parse_word(w, s));
        st.q_window_ok = g.value("q_window_ok", true);
        st.inequality_11 = g.value("inequality_11", false);
        st.ladder_fallback = g.value("ladder_fallback", false);
        st.widened_first_step = g.value("widened_first_step", false);
      } else {
        Move mv;
        mv.turn = j.at("turn").get<int>();
        const std::string pl = j.at("player").get<std::string>();
        if (pl != "B" && pl != "W") throw InputError("player must be \"B\" or \"W\"");
        mv.player = pl[0];
        mv.ball = Ball{rat(j.at("center"), "center"), rat(j.at("radius"), "radius")};
        mv.phase = parse_phase(j.value("phase", std::string("filler")));
        if (j.contains("word") && !j.at("word").is_null()) mv.word = parse_word(j.at("word").get<std::string>(), s);
        t.moves.push_back(std::move(mv));
      }
    } catch (const json::exception& e) {
      throw InputError("transcript line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace symdyn

#include "symdyn/avoidance.hpp"
#include "symdyn/circle.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/game.hpp"
#include "symdyn/io.hpp"
#include "symdyn/matching.hpp"
#include "symdyn/oracle.hpp"
#include "symdyn/runner.hpp"
#include "symdyn/sft.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

using namespace symdyn;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInput = 1, kAlarm = 2, kDefect = 3 };

// "uniform:M[:E]" or a JSON file.
MarkovPartition open_partition(const std::string& spec) {
  if (spec.rfind("uniform:", 0) == 0) {
    std::string rest = spec.substr(8);
    auto colon = rest.find(':');
    try {
      int m = std::stoi(rest.substr(0, colon));
      int e = colon == std::string::npos ? 1 : std::stoi(rest.substr(colon + 1));
      if (m < 2 || e < 1) throw InputError("uniform partition needs m >= 2 and exponent >= 1");
      return MarkovPartition::uniform(m, e);
    } catch (const std::logic_error&) {
      throw InputError("malformed partition spec '" + spec + "'");
    }
  }
  return load_partition(spec);
}

std::vector<Word> parse_words(const std::vector<std::string>& texts, const TransitionSystem& ts, const char* what) {
  std::vector<Word> out;
  for (const auto& t : texts) {
    Word w = parse_word(t, ts.size());
    require_valid_word(ts, w, what);
    out.push_back(std::move(w));
  }
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

json words_json(const std::vector<Word>& ws, int s) {
  json a = json::array();
  for (const auto& w : ws) a.push_back(format_word(w, s));
  return a;
}

json partition_summary(const MarkovPartition& p) {
  json j;
  const int s = p.size();
  j["s"] = s;
  json elems = json::array();
  for (Letter i = 1; i <= s; ++i)
    elems.push_back({format_rational(p.element(i).lo), format_rational(p.element(i).hi)});
  j["elements"] = elems;
  j["matrix"] = p.ts().matrix();
  json degen = json::array();
  for (Letter i = 1; i <= s; ++i)
    if (p.ts().degenerate(i)) degen.push_back(i);
  j["degenerate_letters"] = degen;
  j["expansion"] = format_rational(p.map().expansion());
  j["C"] = format_rational(p.distortion_constant());
  j["r"] = format_rational(p.r());
  j["min_diameter"] = format_rational(p.min_diameter());
  j["max_diameter"] = format_rational(p.max_diameter());
  j["endpoint_tolerant"] = p.endpoint_tolerant();
  j["max_block_length"] = max_block_length(p.ts());
  if (p.map().kind() == ExpandingCircleMap::Kind::linear) {
    auto k = strategy_constants(p);
    j["game"] = {{"P", k.P}, {"L0", k.L0}, {"winning_ratio", format_rational(k.winning_ratio)}};
  }
  return j;
}

struct CollectionArgs {
  std::vector<std::string> gammas;
  int q = 0;
  int k = 1;
  std::string variant = "every-position";
  int first_letter = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--gamma", gammas, "forbidden word(s)")->required();
    cmd->add_option("--q", q, "word generation (default: length of gamma minus one)");
    cmd->add_option("--k", k, "deepest level")->check(CLI::PositiveNumber);
    cmd->add_option("--variant", variant, "every-position | strided")->check(CLI::IsMember({"every-position", "strided"}));
    cmd->add_option("--first-letter", first_letter, "fix the first letter (0: free)");
  }

  CollectionSpec spec(const MarkovPartition& p) const {
    CollectionSpec c;
    c.gammas = parse_words(gammas, p.ts(), "gamma");
    c.q = q > 0 ? q : static_cast<int>(c.gammas.front().size()) - 1;
    c.k_max = k;
    c.variant = parse_variant(variant);
    if (first_letter > 0) c.first_letter = first_letter;
    return c;
  }
};

GameParams game_params(const MarkovPartition& p, const std::string& white, const std::string& black_ratio,
                       const std::string& x0, const std::string& black, std::uint64_t seed,
                       const std::string& targets) {
  GameParams g;
  g.white_ratio = white == "auto" ? winning_ratio(p) : parse_rational(white);
  g.black_ratio = parse_rational(black_ratio);
  g.x0 = parse_rational(x0);
  g.black = parse_black_strategy(black);
  g.seed = seed;
  g.targets = parse_target_mode(targets);
  if (g.white_ratio <= 0 || g.white_ratio >= 1) throw InputError("white ratio must lie in (0, 1)");
  if (g.black_ratio <= 0 || g.black_ratio >= 1) throw InputError("black ratio must lie in (0, 1)");
  return g;
}

json report_json(const VerificationReport& r) {
  json j = {{"ok", r.ok()},
            {"ratios", r.ratios_ok},
            {"certificate", r.certificate_ok},
            {"orbit", r.orbit_ok},
            {"neighborhood", r.neighborhood_ok},
            {"q_window", r.q_window_ok},
            {"orbit_iterates", r.orbit_iterates},
            {"neighborhood_left", format_rational(r.neighborhood_left)},
            {"neighborhood_right", format_rational(r.neighborhood_right)},
            {"failures", r.failures}};
  j["failing_turn"] = r.failing_turn ? json(*r.failing_turn) : json(nullptr);
  return j;
}

json game_summary(const GameTranscript& t, const VerificationReport& r) {
  const auto& st = t.state;
  auto opt = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  return {{"white_ratio", format_rational(t.white_ratio)},
          {"black_ratio", format_rational(t.black_ratio)},
          {"x0", format_rational(t.x0)},
          {"seed", t.seed},
          {"black", to_string(t.black)},
          {"rounds", t.rounds},
          {"out_of_theorem", t.out_of_theorem},
          {"phase", to_string(st.phase)},
          {"P", st.P},
          {"L", opt(st.L)},
          {"N", opt(st.N)},
          {"Q", opt(st.Q)},
          {"certificate_length", st.current_word.size()},
          {"q_history", st.q_history},
          {"widened_first_step", st.widened_first_step},
          {"ladder_fallback", st.ladder_fallback},
          {"verification", report_json(r)}};
}

// In-theorem failures are alarms; out-of-theorem ones are expected negatives.
int game_exit(bool ok, bool out_of_theorem) { return ok || out_of_theorem ? kOk : kAlarm; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symdyn: forbidden-word avoidance, tree-like collections and Schmidt games on Markov partitions"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string partition_spec = "uniform:2:1";
  std::string out_path;
  app.add_option("--partition", partition_spec, "partition JSON file, or uniform:M[:E]")->capture_default_str();
  app.add_option("-o,--out", out_path, "output file (default stdout)");

  int rc = kOk;

  // partition
  auto* part = app.add_subcommand("partition", "inspect a Markov partition")->require_subcommand(1);
  part->add_subcommand("validate", "check the Markov properties")->callback([&] {
    auto p = open_partition(partition_spec);
    std::cout << "valid: " << p.size() << " elements" << (p.endpoint_tolerant() ? ", endpoint-tolerant" : "")
              << '\n';
  });
  part->add_subcommand("show", "print partition data as JSON")->callback([&] {
    emit(partition_summary(open_partition(partition_spec)).dump(2) + "\n", out_path);
  });

  // words
  auto* words = app.add_subcommand("words", "valid words and No Matching extensions")->require_subcommand(1);
  int n_letters = 1;
  std::string prefix;
  bool count_only = false;
  auto* enumerate = words->add_subcommand("enumerate", "list valid n-strings");
  enumerate->add_option("--n", n_letters, "generation (words have n+1 letters)")->required();
  enumerate->add_option("--prefix", prefix, "required prefix");
  enumerate->add_flag("--count", count_only, "print only the count");
  enumerate->callback([&] {
    auto p = open_partition(partition_spec);
    if (count_only) {
      std::cout << count_words(p.ts(), n_letters).get_str() << '\n';
      return;
    }
    std::optional<Word> pre;
    if (!prefix.empty()) pre = parse_words({prefix}, p.ts(), "prefix").front();
    std::string text;
    for (const auto& w : enumerate_words(p.ts(), n_letters, pre ? &*pre : nullptr)) text += format_word(w, p.size()) + '\n';
    emit(text, out_path);
  });
  std::vector<std::string> ext_gammas;
  std::string ext_alpha;
  auto* extend = words->add_subcommand("extend", "append letters so no continuation completes a match");
  extend->add_option("--gamma", ext_gammas, "forbidden word(s)")->required();
  extend->add_option("--alpha", ext_alpha, "word to extend")->required();
  extend->callback([&] {
    auto p = open_partition(partition_spec);
    const auto& ts = p.ts();
    auto gammas = parse_words(ext_gammas, ts, "gamma");
    Word alpha = parse_words({ext_alpha}, ts, "alpha").front();
    const int s = p.size();
    json j;
    if (gammas.size() == 1) {
      const Word& g = gammas.front();
      auto pair = no_matching_extend(ts, g, alpha);
      const std::size_t horizon = g.size() - 1;
      j = {{"gamma", format_word(g, s)},
           {"alpha", format_word(alpha, s)},
           {"case", to_string(pair.extension_case)},
           {"b0", format_word(pair.b0, s)},
           {"b1", format_word(pair.b1, s)},
           {"repaired", pair.repaired},
           {"oracle_checked_to", horizon},
           {"oracle_ok", certify_extension(ts, g, alpha, pair.joined(), horizon)}};
    } else {
      auto ext = serial_extend(ts, gammas, alpha);
      json steps = json::array();
      for (const auto& st : ext.steps)
        steps.push_back({{"gamma_index", st.gamma_index},
                         {"smallest_head", st.smallest_head},
                         {"case", to_string(st.pair.extension_case)},
                         {"b0", format_word(st.pair.b0, s)},
                         {"b1", format_word(st.pair.b1, s)}});
      bool ok = true;
      for (const auto& g : gammas) ok = ok && certify_extension(ts, g, alpha, ext.extension, g.size() - 1);
      j = {{"gammas", words_json(gammas, s)},
           {"alpha", format_word(alpha, s)},
           {"extension", format_word(ext.extension, s)},
           {"steps", steps},
           {"oracle_ok", ok}};
    }
    emit(j.dump(2) + "\n", out_path);
    if (!j["oracle_ok"].get<bool>()) rc = kDefect;
  });

  // avoid
  auto* avoid = app.add_subcommand("avoid", "tree-like collections avoiding forbidden words")->require_subcommand(1);
  CollectionArgs build_args, density_args, bound_args;
  auto* build = avoid->add_subcommand("build", "level sizes and diameters");
  build_args.attach(build);
  build->callback([&] {
    auto p = open_partition(partition_spec);
    TreeLikeCollection tc(p, build_args.spec(p));
    json rows = json::array();
    for (int k = 1; k <= tc.k_max(); ++k) {
      json r = {{"k", k}, {"size", tc.size(k).get_str()}, {"classes", tc.level(k).size()}};
      if (tc.empty(k)) {
        r["death"] = true;
        rows.push_back(r);
        break;
      }
      r["diameter"] = format_rational(tc.diameter(k));
      rows.push_back(r);
    }
    emit(json{{"levels", rows}}.dump(2) + "\n", out_path);
  });
  auto* density = avoid->add_subcommand("density", "stage densities per boundary state");
  density_args.attach(density);
  density->callback([&] {
    auto p = open_partition(partition_spec);
    TreeLikeCollection tc(p, density_args.spec(p));
    json rows = json::array();
    for (int k = 1; k <= tc.k_max(); ++k) {
      auto rep = tc.density_report(k);
      json classes = json::array();
      for (const auto& c : rep.classes)
        classes.push_back({{"count", c.count.get_str()},
                           {"witness", format_word(c.witness, p.size())},
                           {"density", format_rational(c.density)}});
      json r = {{"k", k}, {"classes", classes}};
      r["delta"] = rep.delta ? json(format_rational(*rep.delta)) : json(nullptr);
      if (rep.min_witness) r["min_witness"] = format_word(*rep.min_witness, p.size());
      rows.push_back(r);
      if (!rep.delta) break;
    }
    emit(json{{"levels", rows}}.dump(2) + "\n", out_path);
  });
  auto* bound = avoid->add_subcommand("bound", "finite-k dimension bounds with closed forms and oracle");
  bound_args.attach(bound);
  std::string floor_text, format = "csv";
  bool no_oracle = false;
  bound->add_option("--floor", floor_text, "replace each Delta_k by this floor after checking it");
  bound->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  bound->add_flag("--no-oracle", no_oracle, "skip the spectral oracle");
  bound->callback([&] {
    auto p = open_partition(partition_spec);
    auto spec = bound_args.spec(p);
    DensitySource src = floor_text.empty() ? DensitySource::measured : DensitySource::floor;
    Rational fl = floor_text.empty() ? Rational(0) : parse_rational(floor_text);
    auto e = hd_experiment(p, spec, src, fl, !no_oracle);
    emit(format == "csv" ? hd_csv(e) : hd_json(e, p.size()) + "\n", out_path);
    for (const auto& w : e.warnings) std::cerr << "warning: " << w << '\n';
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "automaton counts and spectral dimension")->require_subcommand(1);
  std::vector<std::string> oracle_gammas;
  int n_max = 20;
  bool brute = false;
  auto* count = oracle->add_subcommand("count", "number of avoiding n-strings for n = 0..N");
  count->add_option("--gamma", oracle_gammas, "forbidden word(s)")->required();
  count->add_option("--n", n_max, "largest n")->check(CLI::NonNegativeNumber);
  count->add_flag("--brute", brute, "cross-check against brute-force enumeration");
  count->callback([&] {
    auto p = open_partition(partition_spec);
    auto gammas = parse_words(oracle_gammas, p.ts(), "gamma");
    auto series = count_avoiding_series(p.ts(), gammas, n_max);
    std::string text = "n,count" + std::string(brute ? ",brute" : "") + "\n";
    for (int n = 0; n <= n_max; ++n) {
      text += std::to_string(n) + ',' + series[static_cast<std::size_t>(n)].get_str();
      if (brute) {
        Integer b = count_avoiding_brute(p.ts(), gammas, n);
        text += ',' + b.get_str();
        if (b != series[static_cast<std::size_t>(n)]) rc = kDefect;
      }
      text += '\n';
    }
    emit(text, out_path);
  });
  auto* dim = oracle->add_subcommand("dim", "dimension of the avoiding set");
  dim->add_option("--gamma", oracle_gammas, "forbidden word(s)")->required();
  dim->callback([&] {
    auto p = open_partition(partition_spec);
    auto r = spectral_dimension(p, parse_words(oracle_gammas, p.ts(), "gamma"));
    json j = {{"rho_interval", {format_rational(r.rho.rho_lo), format_rational(r.rho.rho_hi)}},
              {"iterations", r.rho.iterations},
              {"dimension", r.dimension},
              {"dimension_interval", {r.dimension_lo, r.dimension_hi}}};
    emit(j.dump(2) + "\n", out_path);
  });

  // game
  auto* game = app.add_subcommand("game", "Schmidt games against the orbit-avoiding strategy")->require_subcommand(1);
  std::string white = "auto", black_ratio = "1/2", x0 = "1/3", black = "random", targets = "all", replay_path;
  std::uint64_t seed = 0;
  int rounds = 60, horizon = 1000;
  auto* play_cmd = game->add_subcommand("play", "play one game and verify it");
  play_cmd->add_option("--x0", x0)->capture_default_str();
  play_cmd->add_option("--white-ratio", white, "n, or auto for the winning ratio")->capture_default_str();
  play_cmd->add_option("--black-ratio", black_ratio, "m")->capture_default_str();
  play_cmd->add_option("--black", black, "random | hug-target | replay")->capture_default_str();
  play_cmd->add_option("--replay", replay_path, "transcript whose Black moves are replayed");
  play_cmd->add_option("--targets", targets, "all | single")->capture_default_str();
  play_cmd->add_option("--rounds", rounds)->capture_default_str()->check(CLI::PositiveNumber);
  play_cmd->add_option("--seed", seed)->capture_default_str();
  play_cmd->add_option("--horizon", horizon, "exact orbit iterates checked")->capture_default_str();
  std::string transcript_out;
  play_cmd->add_option("--transcript", transcript_out, "write the JSONL transcript here");
  play_cmd->callback([&] {
    auto p = open_partition(partition_spec);
    GameParams g;
    std::optional<std::string> stored;
    if (!replay_path.empty()) {
      stored = read_file(replay_path);
      auto t = transcript_from_jsonl(*stored, p.size());
      g.white_ratio = t.white_ratio;
      g.black_ratio = t.black_ratio;
      g.x0 = t.x0;
      g.seed = t.seed;
      g.targets = t.targets;
      g.black = BlackStrategy::replay;
      for (const auto& mv : t.moves)
        if (mv.player == 'B') g.replay.push_back(mv.ball);
      if (!g.replay.empty()) g.initial_radius = g.replay.front().radius;
      rounds = t.rounds;
    } else {
      g = game_params(p, white, black_ratio, x0, black, seed, targets);
    }
    GameTranscript t;
    try {
      t = play(p, g, rounds);
    } catch (const StrategyFailure& e) {
      bool oot = g.white_ratio > winning_ratio(p);
      json j = {{"strategy_failure", e.what()}, {"turn", e.turn()}, {"out_of_theorem", oot}};
      emit(j.dump(2) + "\n", out_path);
      rc = oot ? kOk : kAlarm;
      return;
    }
    std::string text = transcript_to_jsonl(t, p.size());
    if (stored) {
      // a replayed transcript records the replay strategy and is otherwise identical
      t.black = transcript_from_jsonl(*stored, p.size()).black;
      text = transcript_to_jsonl(t, p.size());
    }
    if (!transcript_out.empty()) write_file(transcript_out, text);
    auto r = verify_transcript(t, p, horizon);
    json j = game_summary(t, r);
    if (stored) j["replay_identical"] = text == *stored;
    emit(j.dump(2) + "\n", out_path);
    rc = game_exit(r.ok(), t.out_of_theorem);
    if (stored && text != *stored) rc = kDefect;
  });
  std::string verify_path;
  auto* verify = game->add_subcommand("verify", "verify a stored transcript");
  verify->add_option("transcript", verify_path)->required();
  verify->add_option("--horizon", horizon)->capture_default_str();
  verify->callback([&] {
    auto p = open_partition(partition_spec);
    auto t = transcript_from_jsonl(read_file(verify_path), p.size());
    auto r = verify_transcript(t, p, horizon);
    emit(game_summary(t, r).dump(2) + "\n", out_path);
    rc = game_exit(r.ok(), t.out_of_theorem);
  });
  std::vector<std::string> batch_x0{"1/3", "1/2", "1/7"}, batch_m{"3/4", "1/2", "1/4", "1/10"},
      batch_black{"random", "hug-target"};
  int batch_seeds = 10;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* batch = game->add_subcommand("batch", "many seeded games; one JSON line per game");
  batch->add_option("--x0", batch_x0)->capture_default_str();
  batch->add_option("--black-ratio", batch_m)->capture_default_str();
  batch->add_option("--black", batch_black)->capture_default_str();
  batch->add_option("--white-ratio", white)->capture_default_str();
  batch->add_option("--seeds", batch_seeds, "seeds per random configuration")->capture_default_str();
  batch->add_option("--first-seed", seed)->capture_default_str();
  batch->add_option("--rounds", rounds)->capture_default_str()->check(CLI::PositiveNumber);
  batch->add_option("--horizon", horizon)->capture_default_str();
  batch->add_option("--threads", threads)->capture_default_str()->check(CLI::PositiveNumber);
  batch->callback([&] {
    auto p = open_partition(partition_spec);
    std::vector<GameParams> jobs;
    for (const auto& b : batch_black)
      for (const auto& x : batch_x0)
        for (const auto& m : batch_m) {
          const bool deterministic = parse_black_strategy(b) == BlackStrategy::hug_target;
          const int n = deterministic ? 1 : batch_seeds;
          for (int i = 0; i < n; ++i) jobs.push_back(game_params(p, white, m, x, b, seed + static_cast<std::uint64_t>(i), "all"));
        }
    auto results = game_batch(p, jobs, rounds, horizon, threads);
    std::string text;
    std::size_t passed = 0, alarms = 0;
    for (const auto& e : results) {
      json j = {{"x0", format_rational(e.params.x0)},
                {"black_ratio", format_rational(e.params.black_ratio)},
                {"black", to_string(e.params.black)},
                {"seed", e.params.seed},
                {"ok", e.ok},
                {"out_of_theorem", e.out_of_theorem},
                {"certificate_length", e.certificate_length},
                {"failures", e.failures}};
      j["Q"] = e.Q ? json(*e.Q) : json(nullptr);
      if (e.strategy_failure) j["strategy_failure"] = *e.strategy_failure;
      text += j.dump() + '\n';
      if (e.ok) ++passed;
      else if (!e.out_of_theorem) ++alarms;
    }
    emit(text, out_path);
    std::cerr << passed << '/' << results.size() << " games verified\n";
    if (alarms) rc = kAlarm;
  });

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "rerun pinned reference computations")->require_subcommand(1);
  reproduce->add_subcommand("examples", "the three tree-like collection counterexamples")->callback([&] {
    auto lines = reproduce_examples();
    emit(format_check_lines(lines), out_path);
    for (const auto& l : lines)
      if (!l.pass) rc = kAlarm;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  } catch (const StrategyFailure& e) {
    std::cerr << "strategy failure: " << e.what() << '\n';
    return kAlarm;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kInput;
  } catch (const CollectionDeath& e) {
    std::cerr << "warning: " << e.what() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kDefect;
  }
  return rc;
}

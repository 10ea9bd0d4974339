#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crosshunt/bench.hpp"
#include "crosshunt/config.hpp"
#include "crosshunt/report.hpp"
#include "crosshunt/service.hpp"
#include "crosshunt/store.hpp"
#include "crosshunt/synthetic.hpp"
#include "crosshunt/workspace.hpp"

namespace crosshunt {

struct SweepRange {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.05;
};

/// `lo:hi:step`.
inline SweepRange parse_sweep(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) throw Error(Errc::bad_flag, "--sweep expects lo:hi:step");
  SweepRange r;
  double* fields[] = {&r.lo, &r.hi, &r.step};
  for (std::size_t i = 0; i < 3; ++i) {
    auto v = detail::parse_double(parts[i]);
    if (!v) throw Error(Errc::bad_flag, "--sweep expects lo:hi:step");
    *fields[i] = *v;
  }
  sweep_thresholds(r.lo, r.hi, r.step);
  return r;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

struct CliOptions {
  std::string config_file;
  std::optional<std::string> corpus;
  std::optional<double> jt;
  std::optional<std::size_t> signature_length;
  std::optional<std::uint64_t> minhash_seed;
  std::optional<std::string> rule_file;
  std::optional<std::size_t> workers;
  bool exact = false;
  bool disjunctive = false;

  std::optional<double> threshold, w1, w2, w3;
  std::vector<std::string> seeds;
  bool as_json = false;

  std::vector<std::string> files;
  bool mark_seed = false;
  std::string kind = "all";
  std::string a, b;
  std::string truth;
  std::string sweep;
  std::vector<std::size_t> sizes{1000, 2000, 4000};
  std::uint64_t rng_seed = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
  int day = 2;
  std::string out_dir;
};

inline Config resolve_config(const CliOptions& o) {
  Config c = config_from_env();
  if (!o.config_file.empty()) c = load_config(o.config_file, c);
  if (o.corpus) c.corpus_dir = *o.corpus;
  if (o.jt) c.buckets.jaccard_threshold = *o.jt;
  if (o.signature_length) c.buckets.signature_length = *o.signature_length;
  if (o.minhash_seed) c.buckets.seed = *o.minhash_seed;
  if (o.exact) c.buckets.exact_jaccard = true;
  if (o.rule_file) c.rule_file = *o.rule_file;
  if (o.workers) c.workers = *o.workers;
  if (o.disjunctive) c.row5_disjunctive = true;
  if (o.threshold) c.alert_threshold = *o.threshold;
  if (o.w1) c.weights.w1 = *o.w1;
  if (o.w2) c.weights.w2 = *o.w2;
  if (o.w3) c.weights.w3 = *o.w3;
  c.validate();
  return c;
}

inline void add_scoring_flags(CLI::App* sub, CliOptions& o) {
  sub->add_option("--threshold", o.threshold, "Alert threshold in [0, 1]");
  sub->add_option("--w1", o.w1, "Weight for matched pairs joined by similar edges");
  sub->add_option("--w2", o.w2, "Weight for matched pairs joined by dissimilar edges");
  sub->add_option("--w3", o.w3, "Weight for similar edges to unmatched neighbours");
}

inline int cmd_ingest(const CliOptions& o, std::ostream& out) {
  const Config c = resolve_config(o);
  GraphStore store(c.corpus_dir);
  // Parse everything first so a bad file stores nothing.
  std::vector<Graph> graphs;
  for (const auto& f : o.files) graphs.push_back(parse_graph(read_text_file(f)));
  for (const auto& g : graphs) out << "stored " << store.put(g, o.mark_seed) << '\n';
  return 0;
}

inline int cmd_list(const CliOptions& o, std::ostream& out) {
  const Config c = resolve_config(o);
  GraphStore store(c.corpus_dir);
  const auto seeds = store.seeds();
  for (const auto& e : store.list()) {
    const bool seed = std::find(seeds.begin(), seeds.end(), e.graph_id) != seeds.end();
    out << e.graph_id << ' ' << e.host_id << ' ' << e.node_count << ' ' << e.edge_count << (seed ? " seed" : "")
        << '\n';
  }
  return 0;
}

inline int cmd_bucketize(const CliOptions& o, std::ostream& out) {
  if (o.kind != "all" && o.kind != "subject" && o.kind != "object") {
    throw Error(Errc::bad_flag, "--kind must be subject, object or all");
  }
  auto ws = Workspace::open(resolve_config(o));
  if (ws.corpus()->empty()) throw Error(Errc::empty_corpus, "no graphs have been ingested");
  const auto b = ws.buckets(ws.config().buckets);
  if (o.as_json) {
    out << buckets_json(*b.index, ws.config().buckets).dump(2) << '\n';
    return 0;
  }
  if (o.kind != "object") {
    if (o.kind == "all") out << "# subjects\n";
    dump_buckets(b.index->subjects, out);
  }
  if (o.kind != "subject") {
    if (o.kind == "all") out << "# objects\n";
    dump_buckets(b.index->objects, out);
  }
  return 0;
}

inline int cmd_compare(const CliOptions& o, std::ostream& out) {
  auto ws = Workspace::open(resolve_config(o));
  const auto c = ws.compare(o.a, o.b);
  if (o.as_json) {
    out << comparison_json(c).dump(2) << '\n';
  } else {
    dump_explanation(c.score, out);
  }
  return 0;
}

inline int cmd_hunt(const CliOptions& o, std::ostream& out) {
  auto ws = Workspace::open(resolve_config(o));
  const auto h = ws.hunt(o.seeds);
  if (o.as_json) {
    out << hunt_json(h.report).dump(2) << '\n';
  } else {
    print_hunt_table(h.report, out);
  }
  return 0;
}

inline int cmd_eval(const CliOptions& o, std::ostream& out) {
  auto ws = Workspace::open(resolve_config(o));
  const auto truth = parse_ground_truth(read_text_file(o.truth));
  const auto h = ws.hunt(o.seeds);
  if (!o.sweep.empty()) {
    const auto r = parse_sweep(o.sweep);
    const auto rows = sweep(h.report, truth, r.lo, r.hi, r.step);
    if (o.as_json) {
      json arr = json::array();
      for (const auto& e : rows) arr.push_back(eval_json(e));
      out << arr.dump(2) << '\n';
    } else {
      print_sweep(rows, out);
    }
    return 0;
  }
  const auto e = evaluate(h.report, truth, h.report.threshold);
  if (o.as_json) {
    out << eval_json(e).dump(2) << '\n';
  } else {
    print_eval(e, out);
  }
  return 0;
}

inline int cmd_bench(const CliOptions& o, std::ostream& out) {
  const Config c = resolve_config(o);
  print_benchmark(benchmark(o.sizes, c.hunt_config(), o.rng_seed == 0 ? 7 : o.rng_seed), out);
  return 0;
}

inline int cmd_synth(const CliOptions& o, std::ostream& out) {
  if (o.day != 1 && o.day != 2) throw Error(Errc::bad_flag, "--day must be 1 or 2");
  const auto a = o.day == 1 ? synth::day1_analog(o.rng_seed == 0 ? 1 : o.rng_seed)
                            : synth::day2_analog(o.rng_seed == 0 ? 2 : o.rng_seed);
  const std::filesystem::path dir = o.out_dir;
  GraphStore store(dir / "corpus");
  const std::set<std::string> seeds(a.seed_ids.begin(), a.seed_ids.end());
  for (const auto& g : a.corpus.graphs()) store.put(g, seeds.contains(g.graph_id()));
  std::ofstream truth(dir / "truth.txt");
  for (const auto& [id, attack] : a.truth) truth << id << (attack ? " attack\n" : " benign\n");
  if (!truth.flush()) throw Error(Errc::io_failure, "cannot write '" + (dir / "truth.txt").string() + "'");
  out << "wrote " << a.corpus.size() << " graphs to " << (dir / "corpus").string() << " and truth to "
      << (dir / "truth.txt").string() << '\n';
  return 0;
}

inline int cmd_serve(const CliOptions& o, std::ostream& out) {
  auto ws = Workspace::open(resolve_config(o));
  ApiServer server(ws);
  const int port = server.bind(o.host, o.port);
  out << "listening on http://" << o.host << ':' << port << '\n' << std::flush;
  server.listen();
  return 0;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. Diagnostics go to `err`
/// as one `crosshunt: <error-class>: <message>` line. Exit status 0 on success,
/// 2 for usage errors, 1 for everything else.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  detail::CliOptions o;
  CLI::App app{"Cross-host threat hunting over tagged provenance graphs", "crosshunt"};
  app.set_version_flag("--version", "crosshunt 0.1.0");
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.add_option("--config", o.config_file, "key=value configuration file");
  app.add_option("--corpus", o.corpus, "Graph store directory");
  app.add_option("--jt", o.jt, "Bucket Jaccard threshold J_T");
  app.add_option("--signature-length", o.signature_length, "MinHash signature length D");
  app.add_option("--minhash-seed", o.minhash_seed, "MinHash seed");
  app.add_flag("--exact", o.exact, "Bucket on exact Jaccard instead of MinHash estimates");
  app.add_option("--rules", o.rule_file, "Edge-rule file replacing the built-in table");
  app.add_flag("--disjunctive", o.disjunctive, "PowerShell rule needs only one PowerShell subject");
  app.add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  auto* ingest = app.add_subcommand("ingest", "Parse graph files and add them to the store");
  ingest->add_option("files", o.files, "Graph files")->required();
  ingest->add_flag("--seed", o.mark_seed, "Mark the ingested graphs as seeds");

  app.add_subcommand("list", "List stored graphs");

  auto* bucketize = app.add_subcommand("bucketize", "Featurize and bucketize all nodes, then dump buckets");
  bucketize->add_option("--kind", o.kind, "subject, object or all");
  bucketize->add_flag("--json", o.as_json, "Emit JSON");

  auto* compare = app.add_subcommand("compare", "Score two graphs and explain the score");
  compare->add_option("a", o.a, "First graph id")->required();
  compare->add_option("b", o.b, "Second graph id")->required();
  compare->add_flag("--json", o.as_json, "Emit JSON");
  detail::add_scoring_flags(compare, o);

  auto* hunt_cmd = app.add_subcommand("hunt", "Score seeds against every other graph");
  hunt_cmd->add_option("--seeds", o.seeds, "Seed graph ids (default: stored seeds)")->delimiter(',');
  hunt_cmd->add_flag("--json", o.as_json, "Emit JSON");
  detail::add_scoring_flags(hunt_cmd, o);

  auto* eval = app.add_subcommand("eval", "Hunt and evaluate against ground truth");
  eval->add_option("--truth", o.truth, "Lines of <graph_id> attack|benign")->required();
  eval->add_option("--seeds", o.seeds, "Seed graph ids (default: stored seeds)")->delimiter(',');
  eval->add_option("--sweep", o.sweep, "Threshold curve lo:hi:step");
  eval->add_flag("--json", o.as_json, "Emit JSON");
  detail::add_scoring_flags(eval, o);

  auto* bench = app.add_subcommand("bench", "Per-stage timings on synthetic corpora");
  bench->add_option("--sizes", o.sizes, "Node counts")->delimiter(',');
  bench->add_option("--rng-seed", o.rng_seed, "Generator seed");

  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port");

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic campaign corpus and its ground truth");
  synth_cmd->add_option("--day", o.day, "1 or 2");
  synth_cmd->add_option("--out", o.out_dir, "Output directory")->required();
  synth_cmd->add_option("--rng-seed", o.rng_seed, "Generator seed");

  app.allow_extras();

  const auto fail = [&](Errc code, const std::string& message) {
    err << "crosshunt: " << to_string(code) << ": " << message << '\n';
    return code == Errc::unknown_command || code == Errc::bad_flag ? 2 : 1;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(Errc::bad_flag, e.what());
  }

  const auto chosen = app.get_subcommands();
  if (chosen.empty()) {
    const auto rest = app.remaining();
    if (rest.empty()) return fail(Errc::unknown_command, "no command given; try --help");
    if (!rest.front().empty() && rest.front()[0] == '-') return fail(Errc::bad_flag, "unknown flag '" + rest.front() + "'");
    return fail(Errc::unknown_command, "'" + rest.front() + "'");
  }
  if (!app.remaining().empty()) return fail(Errc::bad_flag, "unexpected argument '" + app.remaining().front() + "'");

  try {
    const auto name = chosen.front()->get_name();
    if (name == "ingest") return detail::cmd_ingest(o, out);
    if (name == "list") return detail::cmd_list(o, out);
    if (name == "bucketize") return detail::cmd_bucketize(o, out);
    if (name == "compare") return detail::cmd_compare(o, out);
    if (name == "hunt") return detail::cmd_hunt(o, out);
    if (name == "eval") return detail::cmd_eval(o, out);
    if (name == "bench") return detail::cmd_bench(o, out);
    if (name == "synth") return detail::cmd_synth(o, out);
    if (name == "serve") return detail::cmd_serve(o, out);
    return fail(Errc::unknown_command, "'" + name + "'");
  } catch (const Error& e) {
    return fail(e.code(), e.message());
  }
}

}  // namespace crosshunt

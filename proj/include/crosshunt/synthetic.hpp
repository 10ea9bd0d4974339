#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "crosshunt/correlator.hpp"
#include "crosshunt/graph.hpp"

// Synthetic campaign corpora: a few richly labelled seed graphs from one
// compromised host, light-footprint attack graphs on other hosts, and benign
// graphs that reuse the same tools and suspiciousness labels.
namespace crosshunt::synth {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Plain modulo keeps sequences identical across standard libraries.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool chance(unsigned percent) { return below(100) < percent; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  std::string ip(const char* prefix = "10.") {
    std::string s = prefix;
    const int octets = prefix[0] == '1' && prefix[1] == '0' ? 3 : 2;
    for (int i = 0; i < octets; ++i) s += std::to_string(below(254) + 1) + (i + 1 < octets ? "." : "");
    return s;
  }

  std::string blob(std::size_t len) {
    static constexpr char alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += alphabet[below(sizeof alphabet - 1)];
    return s;
  }

 private:
  std::mt19937_64 engine_;
};

class GraphBuilder {
 public:
  GraphBuilder(std::string graph_id, std::string host_id) : id_(std::move(graph_id)), host_(std::move(host_id)) {}

  std::string subject(std::string label) { return add(NodeKind::Subject, std::move(label)); }
  std::string object(std::string label) { return add(NodeKind::Object, std::move(label)); }

  void edge(const std::string& src, const std::string& dst, std::string syscall, std::string susp) {
    edges_.push_back({src, dst, std::move(syscall), std::move(susp), seq_++});
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }

  Graph build() && { return Graph(id_, host_, std::move(nodes_), std::move(edges_)); }

 private:
  std::string add(NodeKind kind, std::string label) {
    char id[16];
    std::snprintf(id, sizeof id, "n%04zu", nodes_.size());
    nodes_.push_back({id, kind, std::move(label)});
    return id;
  }

  std::string id_, host_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::uint64_t seq_ = 0;
};

// Infrastructure shared by every graph of one campaign.
struct Campaign {
  std::vector<std::string> c2;       // external command-and-control endpoints
  std::vector<std::string> targets;  // internal hosts the operator probes
  std::vector<std::string> users;
  std::vector<std::string> payloads;  // encoded stager commands reused across hosts
  std::vector<std::string> scripts;   // dropped script names

  static Campaign make(Rng& rng) {
    Campaign c;
    c.payloads = {rng.blob(24)};
    c.scripts = {rng.blob(6) + ".ps1", rng.blob(6) + ".psm1"};
    c.c2 = {rng.ip("203.0.") + ":443", rng.ip("198.51.") + ":8443"};
    for (int i = 0; i < 3; ++i) c.targets.push_back(rng.ip());
    c.users = {"alice", "bob", "carol", "dave", "erin", "svc_backup", "admin"};
    return c;
  }
};

namespace motif {

inline const std::string kPowerShell = R"(C:\Windows\System32\WindowsPowerShell\v1.0\PowerShell.exe)";

inline std::string launcher(GraphBuilder& b, Rng& rng) {
  static const std::vector<std::string> parents{
      R"(C:\Windows\explorer.exe)",
      R"(C:\Windows\System32\wsmprovhost.exe -Embedding)",
      R"(C:\Windows\System32\wbem\WmiPrvSE.exe -secured -Embedding)",
  };
  return b.subject(rng.pick(parents));
}

// Encoded PowerShell stager reading a dropped script. The operator varies the
// flags between hosts, which splits some stagers into separate buckets.
inline std::string stager(GraphBuilder& b, Rng& rng, const Campaign& c, const std::string& parent) {
  static const std::vector<std::string> flags{"-noP -w 1 -enc", "-NoP -NonI -w 1 -enc", "-nop -w 1 -Enc"};
  const auto ps = b.subject(kPowerShell + " " + rng.pick(flags) + " " + rng.pick(c.payloads));
  b.edge(parent, ps, "exec", "Untrusted_Exec");
  const auto script = b.object(R"(C:\Users\)" + rng.pick(c.users) + R"(\AppData\Local\Temp\)" + rng.pick(c.scripts));
  b.edge(ps, script, "read", "Untrusted_Read");
  return ps;
}

inline void beacon(GraphBuilder& b, Rng& rng, const Campaign& c, const std::string& ps) {
  const auto sock = b.object("tcp " + rng.pick(c.c2));
  b.edge(ps, sock, "connect", "C2_Communication");
  b.edge(sock, ps, "recv", "C2_Communication");
}

// Stock reconnaissance tools; operators and administrators both run them.
inline const std::vector<std::string>& recon_tools() {
  static const std::vector<std::string> tools{
      R"(C:\Windows\System32\tasklist.exe /v)",   R"(C:\Windows\System32\whoami.exe /all)",
      R"(C:\Windows\System32\ipconfig.exe /all)", R"(C:\Windows\System32\systeminfo.exe)",
      R"(C:\Windows\System32\net.exe user /domain)",
  };
  return tools;
}

// `tools` distinct recon tools plus a probe of one campaign target.
inline void discovery(GraphBuilder& b, Rng& rng, const Campaign& c, const std::string& ps, std::size_t tools) {
  const auto target = rng.pick(c.targets);
  const auto ping = b.subject(R"(C:\Windows\System32\PING.EXE )" + target);
  b.edge(ps, ping, "exec", "Untrusted_Exec");
  b.edge(ping, b.object("tcp " + target + ":445"), "connect", "Discovery");
  std::vector<std::string> pool = recon_tools();
  for (std::size_t i = 0; i < tools && !pool.empty(); ++i) {
    const auto k = rng.below(pool.size());
    b.edge(ps, b.subject(pool[k]), "exec", "Untrusted_Exec");
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
}

inline void credentials(GraphBuilder& b, Rng& rng, const std::string& ps) {
  const auto hive = R"(C:\Users\Public\)" + rng.blob(4) + ".hiv";
  const auto reg = b.subject(R"(C:\Windows\System32\reg.exe save HKLM\SAM )" + hive);
  b.edge(ps, reg, "exec", "Untrusted_Exec");
  b.edge(reg, b.object(R"(C:\Windows\System32\config\SAM)"), "read", "Credential_Access");
  b.edge(reg, b.object(hive), "write", "Credential_Access");
}

inline void persistence(GraphBuilder& b, Rng& rng, const std::string& ps) {
  const auto task = b.subject(R"(C:\Windows\System32\schtasks.exe /create /sc onlogon /tn )" + rng.blob(8));
  b.edge(ps, task, "exec", "Untrusted_Exec");
  b.edge(task, b.object(R"(C:\Windows\System32\Tasks\)" + rng.blob(8)), "write", "Persistence");
}

// Trusted administration. Detectors still tag it, but without the taint of
// an untrusted origin; `tainted` marks the rare run of a downloaded tool.
inline void admin_script(GraphBuilder& b, Rng& rng, const std::string& parent, bool tainted) {
  static const std::vector<std::string> tasks{"inventory", "backup", "cleanup", "patch", "audit"};
  const auto name = rng.pick(tasks);
  const auto ps = b.subject(kPowerShell + " -ExecutionPolicy Bypass -File C:\\Scripts\\" + name + ".ps1");
  b.edge(parent, ps, "exec", "Execution");
  b.edge(ps, b.object(R"(C:\Scripts\)" + name + ".ps1"), "read", tainted ? "Untrusted_Read" : "Execution");
}

// A batch file running recon tools. When `tainted`, at most half of the tool
// launches carry the untrusted-exec tag.
inline void admin_tools(GraphBuilder& b, Rng& rng, const std::string& parent, bool tainted) {
  const auto shell = b.subject(R"(C:\Windows\System32\cmd.exe /c )" + rng.blob(6) + ".bat");
  b.edge(parent, shell, "exec", "Execution");
  const std::size_t n = 2 + rng.below(4);
  const std::size_t untrusted = tainted ? 1 + rng.below(n / 2) : 0;
  for (std::size_t i = 0; i < n; ++i) {
    b.edge(shell, b.subject(rng.pick(recon_tools())), "exec", i < untrusted ? "Untrusted_Exec" : "Discovery");
  }
  if (rng.chance(50)) {
    const auto target = rng.ip();
    const auto ping = b.subject(R"(C:\Windows\System32\PING.EXE )" + target);
    b.edge(shell, ping, "exec", "Discovery");
    b.edge(ping, b.object("tcp " + target + ":445"), "connect", "Discovery");
  }
}

inline void updater(GraphBuilder& b, Rng& rng, const std::string& parent) {
  static const std::vector<std::string> vendors{"Google", "Mozilla", "Adobe", "Zoom"};
  const auto vendor = rng.pick(vendors);
  const auto dir = R"(C:\Program Files (x86)\)" + vendor + R"(\Update\)";
  const auto up = b.subject(dir + vendor + "Update.exe /ua /installsource scheduler");
  b.edge(parent, up, "exec", "Execution");
  b.edge(up, b.object("tcp " + rng.ip("172.") + ":443"), "connect", "Command_And_Control");
  b.edge(up, b.object(dir + rng.blob(6) + ".dll"), "load", "Execution");
}

}  // namespace motif

struct AnalogSpec {
  std::size_t seeds = 3;
  std::size_t planted = 7;
  std::size_t benign = 60;
  std::size_t hosts = 500;
  std::uint64_t rng_seed = 1;
};

struct AnalogCorpus {
  Corpus corpus;
  std::vector<std::string> seed_ids;
  std::vector<std::string> planted_ids;
  std::vector<std::string> benign_ids;
  GroundTruth truth;
};

inline std::string host_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "host-%03zu", i);
  return buf;
}

// Trusted activities; each is tainted with probability `taint_percent`.
inline void host_activity(GraphBuilder& b, Rng& rng, const std::string& parent, std::size_t activities,
                          unsigned taint_percent) {
  for (std::size_t i = 0; i < activities; ++i) {
    const bool tainted = rng.chance(taint_percent);
    switch (rng.below(3)) {
      case 0: motif::admin_script(b, rng, parent, tainted); break;
      case 1: motif::admin_tools(b, rng, parent, tainted); break;
      default: motif::updater(b, rng, parent); break;
    }
  }
}

inline std::string benign_parent(GraphBuilder& b, Rng& rng) {
  return b.subject(rng.chance(50) ? R"(C:\Windows\explorer.exe)"
                                  : R"(C:\Windows\System32\svchost.exe -k netsvcs -p -s Schedule)");
}

// Seed: full operator session on the initially compromised host.
inline Graph seed_graph(const std::string& id, const std::string& host, Rng& rng, const Campaign& c) {
  GraphBuilder b(id, host);
  const auto parent = motif::launcher(b, rng);
  const auto ps = motif::stager(b, rng, c, parent);
  motif::beacon(b, rng, c, ps);
  motif::discovery(b, rng, c, ps, motif::recon_tools().size());
  motif::credentials(b, rng, ps);
  if (rng.chance(50)) motif::persistence(b, rng, ps);
  return std::move(b).build();
}

// Light footprint: a stager plus either a beacon or a little discovery.
inline Graph planted_graph(const std::string& id, const std::string& host, Rng& rng, const Campaign& c) {
  GraphBuilder b(id, host);
  const auto parent = motif::launcher(b, rng);
  const auto ps = motif::stager(b, rng, c, parent);
  if (rng.chance(50)) {
    motif::beacon(b, rng, c, ps);
  } else {
    motif::discovery(b, rng, c, ps, 1 + rng.below(2));
  }
  if (rng.chance(60)) host_activity(b, rng, benign_parent(b, rng), 1 + rng.below(3), 0);
  return std::move(b).build();
}

inline Graph benign_graph(const std::string& id, const std::string& host, Rng& rng, const Campaign&) {
  GraphBuilder b(id, host);
  host_activity(b, rng, benign_parent(b, rng), 1 + rng.below(3), 30);
  return std::move(b).build();
}

inline std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

/// Seeds share one host; planted graphs sit on distinct hosts; benign graphs
/// land on random hosts, including the planted ones.
inline AnalogCorpus make_campaign_analog(const AnalogSpec& spec) {
  if (spec.seeds == 0) throw Error(Errc::invalid_argument, "an analog corpus needs at least one seed");
  if (spec.planted + 1 > spec.hosts) throw Error(Errc::invalid_argument, "more planted graphs than hosts");
  Rng rng(spec.rng_seed);
  const Campaign campaign = Campaign::make(rng);
  AnalogCorpus out;
  std::vector<Graph> graphs;
  const auto seed_host = host_name(1);

  const bool lettered = spec.seeds + spec.planted <= 26;
  const auto name = [&](std::size_t i) {
    return lettered ? std::string("g_") + static_cast<char>('a' + i) : numbered("G", i + 1, 3);
  };
  for (std::size_t i = 0; i < spec.seeds; ++i) {
    graphs.push_back(seed_graph(name(i), seed_host, rng, campaign));
    out.seed_ids.push_back(name(i));
  }
  for (std::size_t i = 0; i < spec.planted; ++i) {
    const auto id = name(spec.seeds + i);
    graphs.push_back(planted_graph(id, host_name(2 + i), rng, campaign));
    out.planted_ids.push_back(id);
  }
  for (std::size_t i = 0; i < spec.benign; ++i) {
    const auto id = numbered("b", i + 1, 4);
    graphs.push_back(benign_graph(id, host_name(2 + rng.below(spec.hosts - 1)), rng, campaign));
    out.benign_ids.push_back(id);
  }
  for (const auto& id : out.seed_ids) out.truth[id] = true;
  for (const auto& id : out.planted_ids) out.truth[id] = true;
  for (const auto& id : out.benign_ids) out.truth[id] = false;
  out.corpus = Corpus(std::move(graphs), out.seed_ids);
  return out;
}

inline AnalogCorpus day2_analog(std::uint64_t rng_seed = 2) { return make_campaign_analog({3, 7, 60, 500, rng_seed}); }
inline AnalogCorpus day1_analog(std::uint64_t rng_seed = 1) { return make_campaign_analog({4, 14, 400, 500, rng_seed}); }

/// Mixed corpus of roughly `target_nodes` nodes, with the first graph as seed.
inline Corpus make_benchmark_corpus(std::size_t target_nodes, std::uint64_t rng_seed = 7) {
  Rng rng(rng_seed);
  const Campaign campaign = Campaign::make(rng);
  std::vector<Graph> graphs;
  std::size_t nodes = 0;
  for (std::size_t i = 0; nodes < target_nodes; ++i) {
    const auto id = numbered("w", i, 5);
    const auto host = host_name(rng.below(500));
    Graph g = i == 0 ? seed_graph(id, host, rng, campaign)
              : rng.chance(5) ? planted_graph(id, host, rng, campaign)
                              : benign_graph(id, host, rng, campaign);
    nodes += g.node_count();
    graphs.push_back(std::move(g));
  }
  std::vector<std::string> seeds;
  if (!graphs.empty()) seeds.push_back(graphs.front().graph_id());
  return Corpus(std::move(graphs), std::move(seeds));
}

}  // namespace crosshunt::synth

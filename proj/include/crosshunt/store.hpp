#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "crosshunt/graph.hpp"

namespace crosshunt {

struct StoreEntry {
  std::string graph_id;
  std::string host_id;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;

  friend bool operator==(const StoreEntry&, const StoreEntry&) = default;
};

/// Directory-backed graph store: one `<graph_id>.tpg` file per graph plus a
/// `corpus.idx` index. Index lines are `G <graph_id> <host_id> <nodes> <edges>`
/// (the graph header extended with its counts) and `S <graph_id>` for seeds.
/// Writers are serialized within the process; the index is replaced atomically.
class GraphStore {
 public:
  static constexpr const char* kIndexName = "corpus.idx";
  static constexpr const char* kGraphSuffix = ".tpg";

  explicit GraphStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const noexcept { return dir_; }

  std::string put(const Graph& g, bool seed = false) {
    std::lock_guard lock(write_mutex());
    ensure_dir();
    Index idx = read_index();
    for (const auto& e : idx.entries) {
      if (e.graph_id == g.graph_id()) {
        throw Error(Errc::duplicate_graph_id, "graph '" + g.graph_id() + "' is already stored");
      }
    }
    write_file(graph_path(g.graph_id()), serialize_graph(g));
    idx.entries.push_back({g.graph_id(), g.host_id(), g.node_count(), g.edge_count()});
    if (seed) idx.seeds.push_back(g.graph_id());
    write_index(idx);
    return g.graph_id();
  }

  std::vector<StoreEntry> list() const {
    if (!std::filesystem::exists(dir_)) return {};
    return read_index().entries;
  }

  std::vector<std::string> seeds() const {
    if (!std::filesystem::exists(dir_)) return {};
    return read_index().seeds;
  }

  Graph get(const std::string& graph_id) const {
    if (!detail::is_graph_id(graph_id)) throw Error(Errc::not_found, "graph '" + graph_id + "'");
    const auto path = graph_path(graph_id);
    if (!std::filesystem::exists(path)) throw Error(Errc::not_found, "graph '" + graph_id + "'");
    return parse_graph(read_file(path));
  }

  void mark_seed(const std::string& graph_id) {
    std::lock_guard lock(write_mutex());
    Index idx = read_index();
    bool known = false;
    for (const auto& e : idx.entries) known = known || e.graph_id == graph_id;
    if (!known) throw Error(Errc::not_found, "graph '" + graph_id + "'");
    for (const auto& s : idx.seeds) {
      if (s == graph_id) return;
    }
    idx.seeds.push_back(graph_id);
    write_index(idx);
  }

  Corpus load_corpus() const {
    std::vector<Graph> graphs;
    for (const auto& e : list()) graphs.push_back(get(e.graph_id));
    return Corpus(std::move(graphs), seeds());
  }

 private:
  struct Index {
    std::vector<StoreEntry> entries;
    std::vector<std::string> seeds;
  };

  static std::mutex& write_mutex() {
    static std::mutex m;
    return m;
  }

  std::filesystem::path graph_path(const std::string& id) const { return dir_ / (id + kGraphSuffix); }

  void ensure_dir() const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(Errc::io_failure, "cannot create '" + dir_.string() + "': " + ec.message());
  }

  static std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::io_failure, "cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static void write_file(const std::filesystem::path& p, const std::string& content) {
    const auto tmp = std::filesystem::path(p.string() + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::io_failure, "cannot write '" + tmp.string() + "'");
      out << content;
      if (!out.flush()) throw Error(Errc::io_failure, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) throw Error(Errc::io_failure, "cannot replace '" + p.string() + "': " + ec.message());
  }

  Index read_index() const {
    Index idx;
    const auto path = dir_ / kIndexName;
    if (!std::filesystem::exists(path)) return idx;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto f = detail::split_ws(line);
      if (f.empty()) continue;
      const auto bad = [&] {
        throw Error(Errc::malformed_document,
                    std::string(kIndexName) + " line " + std::to_string(line_no));
      };
      if (f[0] == "G" && f.size() == 5) {
        auto n = detail::parse_u64(f[3]);
        auto e = detail::parse_u64(f[4]);
        if (!n || !e) bad();
        idx.entries.push_back({std::string(f[1]), std::string(f[2]), *n, *e});
      } else if (f[0] == "G" && f.size() == 3) {
        // Bare header line: counts come from the graph file itself.
        Graph g = get(std::string(f[1]));
        idx.entries.push_back({g.graph_id(), g.host_id(), g.node_count(), g.edge_count()});
      } else if (f[0] == "S" && f.size() == 2) {
        idx.seeds.emplace_back(f[1]);
      } else {
        bad();
      }
    }
    return idx;
  }

  void write_index(const Index& idx) const {
    std::ostringstream out;
    for (const auto& e : idx.entries) {
      out << "G " << e.graph_id << ' ' << e.host_id << ' ' << e.node_count << ' ' << e.edge_count
          << '\n';
    }
    for (const auto& s : idx.seeds) out << "S " << s << '\n';
    write_file(dir_ / kIndexName, out.str());
  }

  std::filesystem::path dir_;
};

// Free-function surface over GraphStore.
inline std::string store_put(const std::filesystem::path& dir, const Graph& g) {
  return GraphStore(dir).put(g);
}
inline std::vector<StoreEntry> store_list(const std::filesystem::path& dir) {
  return GraphStore(dir).list();
}
inline Graph store_get(const std::filesystem::path& dir, const std::string& graph_id) {
  return GraphStore(dir).get(graph_id);
}

}  // namespace crosshunt

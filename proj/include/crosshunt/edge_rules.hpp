#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crosshunt/detail/strings.hpp"
#include "crosshunt/error.hpp"
#include "crosshunt/graph.hpp"

namespace crosshunt {

/// The labels of one edge plus the text of its subject and object endpoints.
struct EdgeContext {
  std::string syscall_label;
  std::string suspiciousness_label;
  std::string subject_label;
  std::string object_label;
};

/// The subject endpoint is whichever end is a Subject node; when both or
/// neither are, the source is treated as the subject.
inline EdgeContext make_edge_context(const Graph& g, const Edge& e) {
  const Node& src = g.node(e.src);
  const Node& dst = g.node(e.dst);
  const bool swap = src.kind == NodeKind::Object && dst.kind == NodeKind::Subject;
  const Node& subject = swap ? dst : src;
  const Node& object = swap ? src : dst;
  return EdgeContext{e.syscall_label, e.suspiciousness_label, subject.label, object.label};
}

enum class PredicateKind {
  subj_contains_both,
  subj_contains_either,
  obj_suffix_both,
  susp_equals,
  susp_excludes,
};

constexpr std::string_view predicate_name(PredicateKind k) noexcept {
  switch (k) {
    case PredicateKind::subj_contains_both: return "subj_contains_both";
    case PredicateKind::subj_contains_either: return "subj_contains_either";
    case PredicateKind::obj_suffix_both: return "obj_suffix_both";
    case PredicateKind::susp_equals: return "susp_equals";
    case PredicateKind::susp_excludes: return "susp_excludes";
  }
  return "";
}

inline std::optional<PredicateKind> predicate_from_name(std::string_view name) noexcept {
  for (auto k : {PredicateKind::subj_contains_both, PredicateKind::subj_contains_either,
                 PredicateKind::obj_suffix_both, PredicateKind::susp_equals, PredicateKind::susp_excludes}) {
    if (predicate_name(k) == name) return k;
  }
  return std::nullopt;
}

struct Predicate {
  PredicateKind kind;
  std::vector<std::string> args;
};

struct Rule {
  std::string label_a;
  std::string label_b;
  std::vector<Predicate> prerequisites;  // all must hold
};

struct RuleOptions {
  std::vector<std::string> shared_object_suffixes{".dll", ".so", ".dylib"};
  // Evaluate the PowerShell subject prerequisite as "either edge" instead of "both".
  bool row5_disjunctive = false;
  // Exclude initial-compromise edges from the PowerShell read/exec equivalence.
  bool initial_compromise_exception = false;
};

namespace detail {

// True when some whitespace token of `label`, stripped of quotes, ends with one of `suffixes`.
inline bool has_token_suffix(std::string_view label, const std::vector<std::string>& suffixes) {
  for (std::string_view tok : split_ws(label)) {
    while (!tok.empty() && (tok.back() == '"' || tok.back() == '\'')) tok.remove_suffix(1);
    for (const auto& s : suffixes) {
      if (iends_with(tok, s)) return true;
    }
  }
  return false;
}

inline bool contains_any(std::string_view label, const std::vector<std::string>& needles) {
  return std::any_of(needles.begin(), needles.end(), [&](const auto& n) { return icontains(label, n); });
}

inline bool equals_any(std::string_view label, const std::vector<std::string>& options) {
  return std::any_of(options.begin(), options.end(), [&](const auto& o) { return iequals(label, o); });
}

}  // namespace detail

/// Edge-label similarity rules. Two edges are similar when their
/// suspiciousness labels are equal and either their system-call labels are
/// equal or some rule relates the two labels (in either orientation) with all
/// of its prerequisites satisfied. Label and containment comparisons ignore
/// ASCII case. Labels no rule mentions match only by equality.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  static constexpr std::string_view kDefaultRules =
      "load exec\n"
      "fork exec\n"
      "write create\n"
      "read exec subj_contains_both powershell obj_suffix_both .ps1 .psd1 .psm1\n"
      "taskstart processcreate susp_equals untrusted_exec\n"
      "read load obj_suffix_both {shared_objects}\n";

  static RuleSet defaults(const RuleOptions& opts = {}) {
    std::string text(kDefaultRules);
    std::string suffixes;
    for (const auto& s : opts.shared_object_suffixes) suffixes += (suffixes.empty() ? "" : " ") + s;
    text.replace(text.find("{shared_objects}"), 16, suffixes);
    RuleSet rs = parse(text, opts.row5_disjunctive);
    if (opts.initial_compromise_exception) {
      for (auto& r : rs.rules_) {
        if (r.label_a == "read" && r.label_b == "exec") {
          r.prerequisites.push_back({PredicateKind::susp_excludes, {"initial_compromise"}});
        }
      }
    }
    return rs;
  }

  /// One rule per line: `<labelA> <labelB> [<predicate> <args...>]...`.
  /// A new predicate starts at each recognised predicate name. '#' starts a comment.
  static RuleSet parse(std::string_view text, bool row5_disjunctive = false) {
    std::vector<Rule> rules;
    std::size_t line_no = 0;
    for (std::string_view line : detail::split(text, '\n')) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      auto f = detail::split_ws(line);
      if (f.empty()) continue;
      const auto bad = [&](const std::string& what) {
        throw Error(Errc::malformed_document, "rule line " + std::to_string(line_no) + ": " + what);
      };
      if (f.size() < 2) bad("needs <labelA> <labelB>");
      Rule r{detail::lowercase(f[0]), detail::lowercase(f[1]), {}};
      for (std::size_t i = 2; i < f.size(); ++i) {
        if (auto k = predicate_from_name(f[i])) {
          if (*k == PredicateKind::subj_contains_both && row5_disjunctive) k = PredicateKind::subj_contains_either;
          r.prerequisites.push_back({*k, {}});
        } else if (r.prerequisites.empty()) {
          bad("unknown predicate '" + std::string(f[i]) + "'");
        } else {
          r.prerequisites.back().args.emplace_back(f[i]);
        }
      }
      for (const auto& p : r.prerequisites) {
        if (p.args.empty()) bad(std::string(predicate_name(p.kind)) + " needs arguments");
      }
      rules.push_back(std::move(r));
    }
    return RuleSet(std::move(rules));
  }

  static RuleSet load(const std::filesystem::path& path, bool row5_disjunctive = false) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_failure, "cannot read rule file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), row5_disjunctive);
  }

  const std::vector<Rule>& rules() const noexcept { return rules_; }

  std::string to_text() const {
    std::ostringstream out;
    for (const auto& r : rules_) {
      out << r.label_a << ' ' << r.label_b;
      for (const auto& p : r.prerequisites) {
        out << ' ' << predicate_name(p.kind);
        for (const auto& a : p.args) out << ' ' << a;
      }
      out << '\n';
    }
    return out.str();
  }

  bool edges_similar(const EdgeContext& e1, const EdgeContext& e2) const {
    if (!detail::iequals(e1.suspiciousness_label, e2.suspiciousness_label)) return false;
    if (detail::iequals(e1.syscall_label, e2.syscall_label)) return true;
    for (const auto& r : rules_) {
      const bool forward = detail::iequals(e1.syscall_label, r.label_a) && detail::iequals(e2.syscall_label, r.label_b);
      const bool backward = detail::iequals(e1.syscall_label, r.label_b) && detail::iequals(e2.syscall_label, r.label_a);
      if ((forward || backward) && prerequisites_hold(r, e1, e2)) return true;
    }
    return false;
  }

 private:
  static bool prerequisites_hold(const Rule& r, const EdgeContext& e1, const EdgeContext& e2) {
    for (const auto& p : r.prerequisites) {
      bool ok = false;
      switch (p.kind) {
        case PredicateKind::subj_contains_both:
          ok = detail::contains_any(e1.subject_label, p.args) && detail::contains_any(e2.subject_label, p.args);
          break;
        case PredicateKind::subj_contains_either:
          ok = detail::contains_any(e1.subject_label, p.args) || detail::contains_any(e2.subject_label, p.args);
          break;
        case PredicateKind::obj_suffix_both:
          ok = detail::has_token_suffix(e1.object_label, p.args) && detail::has_token_suffix(e2.object_label, p.args);
          break;
        case PredicateKind::susp_equals:
          ok = detail::equals_any(e1.suspiciousness_label, p.args) &&
               detail::equals_any(e2.suspiciousness_label, p.args);
          break;
        case PredicateKind::susp_excludes:
          ok = !detail::equals_any(e1.suspiciousness_label, p.args) &&
               !detail::equals_any(e2.suspiciousness_label, p.args);
          break;
      }
      if (!ok) return false;
    }
    return true;
  }

  std::vector<Rule> rules_;
};

inline bool edges_similar(const EdgeContext& e1, const EdgeContext& e2, const RuleSet& rules) {
  return rules.edges_similar(e1, e2);
}

}  // namespace crosshunt

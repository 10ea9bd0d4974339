#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crosshunt {

enum class Errc {
  malformed_document,
  dangling_edge,
  duplicate_node_id,
  duplicate_graph_id,
  not_found,
  io_failure,
  empty_document,
  unknown_term,
  empty_input,
  empty_row,
  signature_mismatch,
  unbucketized_node,
  missing_seed,
  coverage_gap,
  empty_corpus,
  invalid_argument,
  unknown_command,
  bad_flag,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_document: return "malformed-document";
    case Errc::dangling_edge: return "dangling-edge";
    case Errc::duplicate_node_id: return "duplicate-node-id";
    case Errc::duplicate_graph_id: return "duplicate-graph-id";
    case Errc::not_found: return "not-found";
    case Errc::io_failure: return "io-failure";
    case Errc::empty_document: return "empty-document";
    case Errc::unknown_term: return "unknown-term";
    case Errc::empty_input: return "empty-input";
    case Errc::empty_row: return "empty-row";
    case Errc::signature_mismatch: return "length-or-seed-mismatch";
    case Errc::unbucketized_node: return "unbucketized-node";
    case Errc::missing_seed: return "missing-seed";
    case Errc::coverage_gap: return "coverage-gap";
    case Errc::empty_corpus: return "corpus-empty";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::unknown_command: return "unknown-command";
    case Errc::bad_flag: return "bad-flag";
  }
  return "unknown";
}

// Every failure raised by the library carries one of the error classes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }
  // what() without the error-class prefix.
  const char* message() const noexcept { return what() + to_string(code_).size() + 2; }

 private:
  Errc code_;
};

}  // namespace crosshunt

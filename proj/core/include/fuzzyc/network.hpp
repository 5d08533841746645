#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyc/engine.hpp"
#include "fuzzyc/error.hpp"

namespace fuzzyc {

/// Wires output `src_output` of chip `src` to input `dst_input` of chip `dst`.
struct Connection {
  std::string src;
  std::size_t src_output = 0;
  std::string dst;
  std::size_t dst_input = 0;

  friend bool operator==(const Connection&, const Connection&) = default;
};

/// (chip name, position) address of a chip input or output.
using PortRef = std::pair<std::string, std::size_t>;

struct PropagationResult {
  std::map<PortRef, std::optional<double>> outputs;
  /// Chips in the order they were evaluated (each exactly once).
  std::vector<std::string> order;
};

/// Acyclic circuit of chip objects. Crisp outputs feed downstream inputs and
/// are re-quantized in the destination chip's input universe.
class ChipNetwork {
 public:
  using ChipPtr = std::shared_ptr<const ChipObject>;

  /// Throws fuzzyc::Error on a duplicate chip name.
  void add_chip(ChipObject chip);
  /// Swaps in a new snapshot for an existing chip; declarations must match.
  void replace_chip(ChipObject chip);

  ChipPtr find(const std::string& name) const;
  const std::map<std::string, ChipPtr>& chips() const noexcept { return chips_; }
  const std::vector<Connection>& connections() const noexcept { return connections_; }

  /// Adds a connection. Throws on unknown chips, bad positions, an input that
  /// already has a driver, or a cycle. Returns lint warnings (e.g. the source
  /// universe is not contained in the destination universe).
  std::vector<Diagnostic> connect(const Connection& c);
  bool disconnect(const Connection& c);

  /// Chip inputs that no connection drives and so need an external value.
  std::vector<PortRef> external_inputs() const;

  /// Evaluates every chip in topological order. `external` must provide every
  /// undriven input and nothing else. A NO-ACTIVATION value reaching a chip
  /// input makes all of that chip's outputs NO-ACTIVATION.
  PropagationResult propagate(const std::map<PortRef, double>& external) const;

 private:
  const Connection* driver_of(const std::string& chip, std::size_t input) const;
  bool reaches(const std::string& from, const std::string& to) const;
  std::vector<std::string> topological_order() const;

  std::map<std::string, ChipPtr> chips_;
  std::vector<Connection> connections_;
};

}  // namespace fuzzyc

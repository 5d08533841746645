#include "fuzzyc/network.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace fuzzyc {

namespace {

std::string port_name(const std::string& chip, std::size_t pos, const char* kind) {
  return chip + "." + kind + std::to_string(pos);
}

}  // namespace

void ChipNetwork::add_chip(ChipObject chip) {
  if (chips_.count(chip.name())) {
    throw Error(ErrorCategory::Data, "duplicate chip name " + chip.name());
  }
  auto name = chip.name();
  chips_.emplace(std::move(name), std::make_shared<const ChipObject>(std::move(chip)));
}

void ChipNetwork::replace_chip(ChipObject chip) {
  auto it = chips_.find(chip.name());
  if (it == chips_.end()) throw Error(ErrorCategory::Data, "unknown chip " + chip.name());
  if (!it->second->compiled().same_signature(chip.compiled())) {
    throw Error(ErrorCategory::Data, "chip " + chip.name() + ": replacement changes its declarations");
  }
  it->second = std::make_shared<const ChipObject>(std::move(chip));
}

ChipNetwork::ChipPtr ChipNetwork::find(const std::string& name) const {
  auto it = chips_.find(name);
  return it == chips_.end() ? nullptr : it->second;
}

const Connection* ChipNetwork::driver_of(const std::string& chip, std::size_t input) const {
  for (const auto& c : connections_) {
    if (c.dst == chip && c.dst_input == input) return &c;
  }
  return nullptr;
}

bool ChipNetwork::reaches(const std::string& from, const std::string& to) const {
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    if (cur == to) return true;
    for (const auto& c : connections_) {
      if (c.src == cur && seen.insert(c.dst).second) queue.push_back(c.dst);
    }
  }
  return false;
}

std::vector<Diagnostic> ChipNetwork::connect(const Connection& c) {
  const auto src = find(c.src);
  const auto dst = find(c.dst);
  if (!src) throw Error(ErrorCategory::Data, "unknown chip " + c.src);
  if (!dst) throw Error(ErrorCategory::Data, "unknown chip " + c.dst);
  if (c.src_output >= src->output_count()) {
    throw Error(ErrorCategory::Data, "chip " + c.src + " has no output " +
                                         std::to_string(c.src_output));
  }
  if (c.dst_input >= dst->input_count()) {
    throw Error(ErrorCategory::Data, "chip " + c.dst + " has no input " +
                                         std::to_string(c.dst_input));
  }
  if (driver_of(c.dst, c.dst_input)) {
    throw Error(ErrorCategory::Data,
                port_name(c.dst, c.dst_input, "in") + " already has a driver");
  }
  if (reaches(c.dst, c.src)) {
    throw Error(ErrorCategory::Data, "connecting " + port_name(c.src, c.src_output, "out") +
                                         " to " + port_name(c.dst, c.dst_input, "in") +
                                         " would create a cycle");
  }
  connections_.push_back(c);

  std::vector<Diagnostic> warnings;
  const auto& from = src->compiled().outputs[c.src_output];
  const auto& to = dst->compiled().inputs[c.dst_input];
  if (!to.universe.contains(from.universe)) {
    warnings.push_back({Severity::Warning, std::nullopt,
                        "universe of " + c.src + "." + from.name + " is not contained in " +
                            c.dst + "." + to.name + "; values will clamp"});
  }
  return warnings;
}

bool ChipNetwork::disconnect(const Connection& c) {
  auto it = std::find(connections_.begin(), connections_.end(), c);
  if (it == connections_.end()) return false;
  connections_.erase(it);
  return true;
}

std::vector<PortRef> ChipNetwork::external_inputs() const {
  std::vector<PortRef> out;
  for (const auto& [name, chip] : chips_) {
    for (std::size_t i = 0; i < chip->input_count(); ++i) {
      if (!driver_of(name, i)) out.emplace_back(name, i);
    }
  }
  return out;
}

std::vector<std::string> ChipNetwork::topological_order() const {
  // Kahn's algorithm; ties broken by name so the order is reproducible.
  std::map<std::string, std::size_t> indegree;
  for (const auto& [name, chip] : chips_) indegree[name] = 0;
  for (const auto& c : connections_) ++indegree[c.dst];

  std::set<std::string> ready;
  for (const auto& [name, d] : indegree) {
    if (d == 0) ready.insert(name);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string cur = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(cur);
    for (const auto& c : connections_) {
      if (c.src == cur && --indegree[c.dst] == 0) ready.insert(c.dst);
    }
  }
  return order;
}

PropagationResult ChipNetwork::propagate(const std::map<PortRef, double>& external) const {
  for (const auto& [port, value] : external) {
    const auto chip = find(port.first);
    if (!chip) throw Error(ErrorCategory::Data, "unknown chip " + port.first);
    if (port.second >= chip->input_count()) {
      throw Error(ErrorCategory::Data, "chip " + port.first + " has no input " +
                                           std::to_string(port.second));
    }
    if (driver_of(port.first, port.second)) {
      throw Error(ErrorCategory::Data, port_name(port.first, port.second, "in") +
                                           " is driven by a connection and cannot be asserted");
    }
  }
  for (const auto& port : external_inputs()) {
    if (!external.count(port)) {
      throw Error(ErrorCategory::Data, "missing external input " +
                                           port_name(port.first, port.second, "in"));
    }
  }

  PropagationResult result;
  result.order = topological_order();
  for (const auto& name : result.order) {
    const ChipObject& chip = *chips_.at(name);
    std::vector<double> inputs(chip.input_count());
    bool dead = false;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (const Connection* c = driver_of(name, i)) {
        const auto& upstream = result.outputs.at({c->src, c->src_output});
        if (!upstream) {
          dead = true;
        } else {
          inputs[i] = *upstream;
        }
      } else {
        inputs[i] = external.at({name, i});
      }
    }
    if (dead) {
      for (std::size_t o = 0; o < chip.output_count(); ++o) result.outputs[{name, o}] = std::nullopt;
      continue;
    }
    const auto crisp = assert_input(chip, inputs).outputs;
    for (std::size_t o = 0; o < crisp.size(); ++o) result.outputs[{name, o}] = crisp[o];
  }
  return result;
}

}  // namespace fuzzyc

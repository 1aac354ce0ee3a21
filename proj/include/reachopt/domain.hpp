#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace reachopt {

// What the loop needs to know about molecules: how to canonicalize a raw
// string and which pairs are one valid local transformation apart.
class DomainAdapter {
 public:
  virtual ~DomainAdapter() = default;

  // Canonical form, or nullopt when the string is not a valid molecule.
  virtual std::optional<std::string> canonicalize(std::string_view raw) const = 0;

  // Ground-truth transfer relation between two canonical molecules.
  virtual bool related(std::string_view a, std::string_view b) const = 0;
};

// Black-box property evaluator. Each call is what the budget counts.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual double evaluate(const std::string& canonical) = 0;
};

}  // namespace reachopt

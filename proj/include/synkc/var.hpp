#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace synkc {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Output variables form the ordered sequence X = (x_1..x_n), inputs the set
// Y = (y_1..y_m). BarOutput i is the fresh variable standing for ~x_i in the
// positive form of a specification. Primed copies are used only inside
// backend queries (error formula, refinement condition (b), theta).
enum class VarKind : std::uint8_t { Output = 0, Input = 1, BarOutput = 2 };

struct VarId {
  VarKind kind = VarKind::Output;
  std::uint32_t index = 0;  // 1-based within its kind
  bool primed = false;

  friend auto operator<=>(const VarId&, const VarId&) = default;

  std::uint64_t pack() const {
    return (static_cast<std::uint64_t>(kind) << 40) |
           (static_cast<std::uint64_t>(primed) << 39) | index;
  }
};

inline VarId out_var(std::uint32_t i) { return {VarKind::Output, i, false}; }
inline VarId in_var(std::uint32_t j) { return {VarKind::Input, j, false}; }
inline VarId bar_var(std::uint32_t i) { return {VarKind::BarOutput, i, false}; }
inline VarId primed(VarId v) {
  v.primed = true;
  return v;
}

std::string to_string(const VarId& v);

// A signed variable as it appears in clauses and f-def argument lists.
struct Lit {
  VarId var;
  bool positive = true;

  friend auto operator<=>(const Lit&, const Lit&) = default;
  Lit negated() const { return {var, !positive}; }
};

// Total map from variables to {0,1} over some declared support.
class Assignment {
 public:
  Assignment() = default;

  void set(VarId v, bool value) { values_[v] = value; }
  bool has(VarId v) const { return values_.count(v) != 0; }
  bool get(VarId v) const {
    auto it = values_.find(v);
    if (it == values_.end()) throw Error("assignment: missing variable " + to_string(v));
    return it->second;
  }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  Assignment project(const std::vector<VarId>& vars) const {
    Assignment out;
    for (const VarId& v : vars) out.set(v, get(v));
    return out;
  }

  const std::map<VarId, bool>& values() const { return values_; }

 private:
  std::map<VarId, bool> values_;
};

}  // namespace synkc

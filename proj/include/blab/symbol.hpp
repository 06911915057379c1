#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blab/space.hpp"

namespace blab {

// Parameters of a catalogue symbol. Unused fields are ignored by the kind that does not need them.
//   constant       b = amplitude
//   bump           b = amplitude * phi(|x - center| / radius),  phi(s) = exp(1 - 1/(1 - s^2)) for s < 1
//   shifted-bump   bump with its center moved by `offset` (default: toward the boundary, to last coordinate 1.25 radius)
//   linear-window  b = amplitude * (direction . (x - center)) / radius * phi
//   sine-window    b = amplitude * sin(frequency * pi * (direction . (x - center)) / radius) * phi
//   smoothstep     b = amplitude * S((x_1 - ramp_lo) / (ramp_hi - ramp_lo)), S(t) = 6t^5 - 15t^4 + 10t^3 clamped to [0, 1]
struct SymbolSpec {
  std::string kind = "bump";
  std::vector<double> center;
  double radius = 1.0;
  double amplitude = 1.0;
  std::vector<double> direction;
  std::vector<double> offset;
  double frequency = 1.0;
  double ramp_lo = 0.0;
  double ramp_hi = 1.0;

  bool operator==(const SymbolSpec&) const = default;
};

const std::vector<std::string>& symbol_kinds();

class Symbol {
 public:
  using Value = std::function<double(Coords)>;
  using Gradient = std::function<void(Coords, std::span<double>)>;

  Symbol(std::string name, int dim, Value value, Gradient gradient, std::optional<Box> support);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  double operator()(Coords x) const { return scale_ * value_(x); }
  bool has_gradient() const { return static_cast<bool>(gradient_); }
  void gradient(Coords x, std::span<double> out) const;
  const std::optional<Box>& support() const { return support_; }
  bool is_constant() const { return constant_; }

  Symbol scaled(double c) const;
  Symbol& mark_constant() {
    constant_ = true;
    return *this;
  }

 private:
  std::string name_;
  int dim_;
  Value value_;
  Gradient gradient_;
  std::optional<Box> support_;
  double scale_ = 1.0;
  bool constant_ = false;
};

// Validates the spec against the space and fills defaults (center, direction, offset).
SymbolSpec normalized_spec(const SymbolSpec& spec, const SpaceParams& params);
Symbol make_symbol(const SymbolSpec& spec, const SpaceParams& params);

}  // namespace blab

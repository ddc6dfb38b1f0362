#pragma once

// Versioned JSON system description shared by every subcommand.
//
//   {
//     "version": 1,
//     "n": 2, "m": 1,
//     "a": ["1", "-1"],                  expression strings or numbers
//     "b": ["0", "0"],                   optional, defaults to zero
//     "P": [[1, -1], [1, -1]],           or {"mask": [[0,1],[0,0]], "q": [["0","2+sin(t)"],["0","0"]]}
//     "phi": ["sin(x)", "x"],            optional initial data
//     "horizon": 10,
//     "tolerances": {"minor": 1e-9, "vanish": 1e-10},
//     "grid": {"validation": 257, "spatial": 513, "dt": 0.01}
//   }

#include "fts/errors.hpp"
#include "fts/model.hpp"
#include "fts/simulator.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace fts::cli {

inline constexpr int kConfigVersion = 1;

class ConfigError : public Error {
public:
  using Error::Error;
};

struct SystemConfig {
  int n = 0;
  int m = 0;
  std::vector<Expr> a;
  std::vector<Expr> b;
  BoundaryMatrix boundary;
  std::optional<InitialData> phi;
  double horizon = 10.0;
  double minor_tolerance = 1e-9;
  double vanish_tolerance = 1e-10;
  int validation_points = HyperbolicSystem::kDefaultSampleDensity;
  int spatial_points = 513;
  std::optional<double> dt;

  HyperbolicSystem system() const;
  SimulationOptions simulation_options() const;
};

SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::filesystem::path& path);

} // namespace fts::cli

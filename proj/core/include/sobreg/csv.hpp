#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sobreg/spectrum.hpp"

namespace sobreg::csv {

/// Deterministic round-trip formatting; throws on NaN/inf so that no
/// non-finite number can reach an artifact.
std::string num(double value);

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);

  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
};

/// Schema: `i, lambda_i, p_inv_i, c_i` (c_i blank without a truth), followed
/// by a `j, d_j` block when the truth carries null components.
void write_spectrum(const std::filesystem::path& path, const Spectrum& spectrum,
                    const TrueFunction* truth = nullptr);

}  // namespace sobreg::csv

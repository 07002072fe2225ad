#include "sobreg/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sobreg::csv {

std::string num(double value) {
  if (!std::isfinite(value)) {
    throw std::runtime_error("refusing to emit a non-finite number to CSV");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

Writer::Writer(const std::filesystem::path& path) : out_(path) {
  if (!out_) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
}

void Writer::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("CSV write failed");
}

void write_spectrum(const std::filesystem::path& path, const Spectrum& spectrum,
                    const TrueFunction* truth) {
  Writer w(path);
  w.row({"i", "lambda_i", "p_inv_i", "c_i"});
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    w.row({std::to_string(i + 1), num(spectrum.eigenvalues[i]), num(spectrum.p_inv[i]),
           truth ? num(truth->coefficients[i]) : std::string{}});
  }
  if (truth && !truth->null_components.empty()) {
    w.row({"j", "d_j"});
    for (std::size_t j = 0; j < truth->null_components.size(); ++j) {
      w.row({std::to_string(j + 1), num(truth->null_components[j])});
    }
  }
}

}  // namespace sobreg::csv

// Regenerates the golden-value table from a grid file with the
// extended-precision oracle.
//
//   make-goldens --grid tests/data/golden_grid.txt --out tests/data/goldens.tsv

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "casimir/golden_generator.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate golden values with the extended-precision oracle"};
  std::string grid_path, out_path;
  casimir::oracle::PrecisionConfig cfg;
  app.add_option("--grid", grid_path, "grid description")->required();
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--digits", cfg.decimal_digits, "working decimal digits (>= 40)")->default_val(40);
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(grid_path);
    if (!in) throw std::runtime_error("cannot open grid file " + grid_path);
    const std::string text = casimir::oracle::generate_goldens(casimir::parse_grid(in), cfg);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + out_path);
      out << text;
      if (!out.flush()) throw std::runtime_error("write failed for " + out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "make-goldens: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

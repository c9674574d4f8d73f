#include "muforge/corpus.hpp"

#include <fstream>
#include <sstream>

#include "muforge/errors.hpp"

namespace muforge {

std::vector<curve_data> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bad_input("load_corpus: cannot open " + path);
  std::vector<curve_data> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string::size_type hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    curve_data e;
    long n;
    if (!(ss >> e.a1)) continue;  // blank or comment-only line
    if (!(ss >> e.a2 >> e.a3 >> e.a4 >> e.a6 >> n))
      throw bad_input("load_corpus: malformed line " + std::to_string(lineno) + " in " + path);
    e.conductor = n;
    ss >> e.label;  // optional
    validate_curve(e);
    out.push_back(e);
  }
  return out;
}

curve_data curve_from_spec(const std::string& spec) {
  std::string::size_type colon = spec.find(':');
  if (colon == std::string::npos)
    throw bad_input("curve spec must look like a1,a2,a3,a4,a6:conductor");
  std::istringstream coeffs(spec.substr(0, colon));
  curve_data e;
  char c1, c2, c3, c4;
  if (!(coeffs >> e.a1 >> c1 >> e.a2 >> c2 >> e.a3 >> c3 >> e.a4 >> c4 >> e.a6) ||
      c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || !(coeffs >> std::ws).eof())
    throw bad_input("curve spec must list five comma-separated coefficients");
  std::istringstream cond(spec.substr(colon + 1));
  long n;
  if (!(cond >> n) || !(cond >> std::ws).eof() || n < 1)
    throw bad_input("curve spec conductor must be a positive integer");
  e.conductor = n;
  validate_curve(e);
  return e;
}

}  // namespace muforge

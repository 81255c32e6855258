#include "adamsq/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace adamsq {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sampled_csv(std::ostream& out, const SampledFunction& f) {
  const bool radial = f.layout == Layout::radial;
  out << "# layout=" << (radial ? "radial" : "cartesian") << " n=" << f.n << " components=" << f.components
      << " grid_points=" << f.grid_points << " half_width=" << format_double(f.half_width) << "\n";
  out << (radial ? "inner,outer,node,weight" : "x,y,z,weight");
  for (int c = 0; c < f.components; ++c) out << ",v" << c;
  out << "\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (radial) {
      out << format_double(f.edges[i]) << "," << format_double(f.edges[i + 1]) << "," << format_double(f.nodes[i][0]);
    } else {
      out << format_double(f.nodes[i][0]) << "," << format_double(f.nodes[i][1]) << ","
          << format_double(f.nodes[i][2]);
    }
    out << "," << format_double(f.weights[i]);
    for (int c = 0; c < f.components; ++c) out << "," << format_double(f.value(i, c));
    out << "\n";
  }
}

namespace {

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw IoError("malformed number '" + cell + "'");
    }
  }
  return v;
}

}  // namespace

SampledFunction read_sampled_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw IoError("missing metadata line");
  std::map<std::string, std::string> meta;
  {
    std::stringstream ss(line.substr(2));
    std::string kv;
    while (ss >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw IoError("bad metadata entry '" + kv + "'");
      meta[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  SampledFunction f;
  try {
    f.layout = meta.at("layout") == "radial" ? Layout::radial : Layout::cartesian;
    f.n = std::stoi(meta.at("n"));
    f.components = std::stoi(meta.at("components"));
    f.grid_points = std::stoi(meta.at("grid_points"));
    f.half_width = std::stod(meta.at("half_width"));
  } catch (const std::exception&) {
    throw IoError("incomplete metadata line");
  }
  if (!std::getline(in, line)) throw IoError("missing header");
  const std::size_t width = 4 + f.components;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto v = split_numbers(line);
    if (v.size() != width) throw IoError("row has the wrong number of columns");
    if (f.layout == Layout::radial) {
      if (f.edges.empty()) f.edges.push_back(v[0]);
      f.edges.push_back(v[1]);
      f.nodes.push_back(Point{v[2], 0, 0});
    } else {
      f.nodes.push_back(Point{v[0], v[1], v[2]});
    }
    f.weights.push_back(v[3]);
    for (int c = 0; c < f.components; ++c) f.values.push_back(v[4 + c]);
  }
  f.refresh_support();
  return f;
}

void save_sampled_csv(const std::string& path, const SampledFunction& f) {
  std::ostringstream s;
  write_sampled_csv(s, f);
  write_text_file(path, s.str());
}

SampledFunction load_sampled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_sampled_csv(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace adamsq

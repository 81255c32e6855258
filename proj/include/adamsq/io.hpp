#pragma once

#include "adamsq/field.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace adamsq {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, shortest form that round-trips.
std::string format_double(double v);

/// CSV with a leading `# key=value ...` metadata line. Radial rows are
/// `inner,outer,node,weight,v0..`; cartesian rows `x,y,z,weight,v0..`.
void write_sampled_csv(std::ostream& out, const SampledFunction& f);
SampledFunction read_sampled_csv(std::istream& in);

void save_sampled_csv(const std::string& path, const SampledFunction& f);
SampledFunction load_sampled_csv(const std::string& path);

/// Writes `text` to `path`, throwing IoError when the file cannot be opened.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace adamsq

#include "kerrepr/trace.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "kerrepr/sampling.hpp"

namespace kerrepr {

namespace {

constexpr const char* kColumnLine = "t_index,ch_a,ch_b";

std::string format_g9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::invalid_argument("trace line " + std::to_string(line_no) + ": " +
                              what);
}

double parse_double(const std::string& text, std::size_t line_no,
                    const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    parse_fail(line_no, std::string("cannot parse ") + what);
  }
  if (used != text.size())
    parse_fail(line_no, std::string("trailing characters after ") + what);
  if (!std::isfinite(value))
    parse_fail(line_no, std::string(what) + " is not finite");
  return value;
}

}  // namespace

std::string serialize_trace(const TraceRecord& record) {
  if (record.ch_a.size() != record.ch_b.size())
    throw std::invalid_argument("trace channels differ in length");
  if (!(record.sample_rate_hz > 0.0))
    throw std::invalid_argument("trace needs a positive sample rate");
  if (record.label.find('\n') != std::string::npos ||
      record.label.find('\r') != std::string::npos)
    throw std::invalid_argument("trace label must be a single line");

  std::string text;
  text.reserve(64 + static_cast<std::size_t>(record.ch_a.size()) * 24);
  text += "# sample_rate_hz=" + format_g9(record.sample_rate_hz) + '\n';
  text += "# power_a=" + format_g9(record.power_a) + '\n';
  text += "# power_b=" + format_g9(record.power_b) + '\n';
  text += "# label=" + record.label + '\n';
  char seed_buf[32];
  std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, record.seed);
  text += std::string("# seed=") + seed_buf + '\n';
  text += kColumnLine;
  text += '\n';
  for (Eigen::Index k = 0; k < record.ch_a.size(); ++k) {
    text += std::to_string(k);
    text += ',';
    text += format_g9(record.ch_a[k]);
    text += ',';
    text += format_g9(record.ch_b[k]);
    text += '\n';
  }
  return text;
}

TraceRecord parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  TraceRecord record;
  bool have_rate = false, have_pa = false, have_pb = false, have_label = false,
       have_seed = false;

  // headers
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# ", 0) != 0) break;
    const std::string body = line.substr(2);
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "header without '='");
    const std::string key = body.substr(0, eq);
    const std::string value = body.substr(eq + 1);
    if (key == "sample_rate_hz") {
      record.sample_rate_hz = parse_double(value, line_no, "sample rate");
      have_rate = true;
    } else if (key == "power_a") {
      record.power_a = parse_double(value, line_no, "power_a");
      have_pa = true;
    } else if (key == "power_b") {
      record.power_b = parse_double(value, line_no, "power_b");
      have_pb = true;
    } else if (key == "label") {
      record.label = value;
      have_label = true;
    } else if (key == "seed") {
      if (value.empty() ||
          !std::all_of(value.begin(), value.end(),
                       [](unsigned char c) { return std::isdigit(c); }))
        parse_fail(line_no, "seed must be a non-negative integer");
      record.seed = std::strtoull(value.c_str(), nullptr, 10);
      have_seed = true;
    } else {
      parse_fail(line_no, "unknown header key: " + key);
    }
  }
  if (!(have_rate && have_pa && have_pb && have_label && have_seed))
    throw std::invalid_argument("trace is missing required headers");
  if (line != kColumnLine)
    parse_fail(line_no, std::string("expected column line '") + kColumnLine +
                            "'");
  if (!(record.sample_rate_hz > 0.0))
    parse_fail(line_no, "sample rate must be positive");

  std::vector<double> a, b;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) parse_fail(line_no, "empty row");
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos
                               ? std::string::npos
                               : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      parse_fail(line_no, "row needs three comma-separated fields");
    const std::string idx = line.substr(0, c1);
    if (idx != std::to_string(a.size()))
      parse_fail(line_no, "t_index out of sequence");
    a.push_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1), line_no, "ch_a"));
    b.push_back(parse_double(line.substr(c2 + 1), line_no, "ch_b"));
  }
  record.ch_a = Eigen::Map<const Eigen::ArrayXd>(a.data(),
                                                 static_cast<Eigen::Index>(a.size()));
  record.ch_b = Eigen::Map<const Eigen::ArrayXd>(b.data(),
                                                 static_cast<Eigen::Index>(b.size()));
  return record;
}

void save_trace(const TraceRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = serialize_trace(record);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing trace: " + path);
}

TraceRecord load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

TraceRecord synthesize_trace(const SynthesisSpec& spec) {
  if (!(spec.v_sum >= 0.0) || !(spec.v_diff >= 0.0))
    throw std::invalid_argument("synthesis targets must be non-negative");
  if (!(spec.shot_level > 0.0))
    throw std::invalid_argument("shot level must be positive");
  if (!(spec.sample_rate_hz > 0.0))
    throw std::invalid_argument("sample rate must be positive");
  if (spec.samples == 0)
    throw std::invalid_argument("synthesis needs at least one sample");

  // diagonalize the per-sample covariance: the (a+b)/sqrt(2) direction draws
  // variance shot*v_sum, the (a-b)/sqrt(2) direction shot*v_diff
  const double s_sum = std::sqrt(spec.shot_level * spec.v_sum);
  const double s_diff = std::sqrt(spec.shot_level * spec.v_diff);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  TraceRecord record;
  record.sample_rate_hz = spec.sample_rate_hz;
  record.power_a = spec.power_a;
  record.power_b = spec.power_b;
  record.label = spec.label;
  record.seed = spec.seed;
  const auto n = static_cast<Eigen::Index>(spec.samples);
  record.ch_a.resize(n);
  record.ch_b.resize(n);
  NormalSampler normal(spec.seed);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double zs = s_sum * normal();
    const double zd = s_diff * normal();
    record.ch_a[k] = (zs + zd) * inv_sqrt2;
    record.ch_b[k] = (zs - zd) * inv_sqrt2;
  }
  return record;
}

}  // namespace kerrepr

#include "kerr/harness/config.hpp"

#include "kerr/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace kerr::harness {
namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperiments{{
    {Experiment::Fig1, "fig1"},
    {Experiment::Fig2, "fig2"},
    {Experiment::Fig3, "fig3"},
    {Experiment::Scaling, "scaling"},
    {Experiment::LossRobustness, "loss-robustness"},
    {Experiment::Custom, "custom"},
    {Experiment::Wigner, "wigner"},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, std::string_view key, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line;
  if (!key.empty()) os << ", key '" << key << "'";
  os << ": " << msg;
  throw ConfigError(os.str());
}

double parse_number(std::string_view tok, int line, std::string_view key) {
  tok = trim(tok);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() ||
      !std::isfinite(v)) {
    fail(line, key, "malformed number '" + std::string(tok) + "'");
  }
  return v;
}

Axis parse_axis(std::string_view value, int line, std::string_view key) {
  value = trim(value);
  if (value.empty()) fail(line, key, "empty grid");
  if (value.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
      const auto next = value.find(':', pos);
      parts.push_back(value.substr(pos, next - pos));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    if (parts.size() != 3) {
      fail(line, key, "malformed range '" + std::string(value) +
                          "' (expected start:stop:count)");
    }
    Range r;
    r.start = parse_number(parts[0], line, key);
    r.stop = parse_number(parts[1], line, key);
    const std::string_view c = trim(parts[2]);
    const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), r.count);
    if (c.empty() || ec != std::errc() || ptr != c.data() + c.size()) {
      fail(line, key, "malformed range count '" + std::string(c) + "'");
    }
    if (r.count <= 0) fail(line, key, "empty grid");
    if (r.count > 1 && !(r.start < r.stop)) {
      fail(line, key, "malformed range: start must be below stop");
    }
    return Axis(r);
  }
  std::vector<double> values;
  std::size_t pos = 0;
  while (true) {
    const auto next = value.find(',', pos);
    const std::string_view tok = trim(value.substr(pos, next - pos));
    if (tok.empty()) fail(line, key, "empty list entry");
    values.push_back(parse_number(tok, line, key));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return Axis(std::move(values));
}

std::string axis_to_string(const Axis& a) {
  if (const auto* r = std::get_if<Range>(&a.spec)) {
    return format_double(r->start) + ":" + format_double(r->stop) + ":" +
           std::to_string(r->count);
  }
  std::string out;
  for (double v : std::get<std::vector<double>>(a.spec)) {
    if (!out.empty()) out += ", ";
    out += format_double(v);
  }
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [k, name] : kExperiments) {
    if (k == e) return name;
  }
  return "custom";
}

std::optional<Experiment> experiment_from_string(std::string_view s) {
  for (const auto& [k, name] : kExperiments) {
    if (name == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

std::optional<Format> format_from_string(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  return std::nullopt;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::vector<double> Axis::values() const {
  if (const auto* r = std::get_if<Range>(&spec)) {
    if (r->count == 1) return {r->start};
    std::vector<double> out(r->count);
    for (int i = 0; i < r->count; ++i) {
      out[i] = r->start + (r->stop - r->start) * i / (r->count - 1);
    }
    out.back() = r->stop;
    return out;
  }
  return std::get<std::vector<double>>(spec);
}

ExperimentConfig defaults_for(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::Fig1:
      // Time traces use (delta, epsilon) = (0, 2) over the kerr axis; the
      // optimal-squeezing table sweeps the delta and epsilon axes at K = 1.
      c.delta = Axis(std::vector<double>{-2.0, 0.0, 2.0});
      c.epsilon = Axis(Range{0.5, 4.0, 8});
      c.kerr = Axis(std::vector<double>{0.0, 1.0, 2.0, 4.0});
      c.kt = Axis(Range{0.0, 0.25, 101});
      break;
    case Experiment::Fig2:
      c.delta = Axis(Range{-10.0, 10.0, 41});
      c.epsilon = Axis(Range{0.0, 5.0, 26});
      c.kt = Axis(std::vector<double>{0.5});
      break;
    case Experiment::Fig3:
      c.gamma = Axis(std::vector<double>{0.0, 0.05, 0.1, 0.2});
      c.kt = Axis(Range{0.0, 0.6, 61});
      break;
    case Experiment::Scaling:
      c.epsilon = Axis(std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0, 16.0});
      c.kt = Axis(std::vector<double>{3.0});  // search horizon for the maximum
      break;
    case Experiment::LossRobustness:
      c.gamma = Axis(Range{0.0, 0.2, 5});
      c.kt = Axis(Range{0.0, 0.6, 31});
      break;
    case Experiment::Custom:
      break;
    case Experiment::Wigner:
      c.gamma = Axis(std::vector<double>{0.1});
      c.kt = Axis(std::vector<double>{0.4});
      break;
  }
  return c;
}

ExperimentConfig parse_config(std::string_view text,
                              std::optional<Experiment> fallback) {
  struct Entry {
    int line;
    std::string value;
  };
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(line_no, {}, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(line_no, {}, "missing key");
    if (entries.contains(key)) fail(line_no, key, "duplicate key");
    entries.emplace(key, Entry{line_no, std::string(trim(line.substr(eq + 1)))});
  }

  Experiment exp = fallback.value_or(Experiment::Custom);
  if (const auto it = entries.find("experiment"); it != entries.end()) {
    const auto e = experiment_from_string(it->second.value);
    if (!e) {
      fail(it->second.line, "experiment",
           "unknown experiment '" + it->second.value + "'");
    }
    if (fallback && *e != *fallback) {
      fail(it->second.line, "experiment",
           "config is for '" + it->second.value + "', not '" +
               std::string(to_string(*fallback)) + "'");
    }
    exp = *e;
  }
  ExperimentConfig c = defaults_for(exp);

  const std::map<std::string_view, Axis ExperimentConfig::*> axes = {
      {"delta", &ExperimentConfig::delta}, {"epsilon", &ExperimentConfig::epsilon},
      {"kerr", &ExperimentConfig::kerr},   {"gamma", &ExperimentConfig::gamma},
      {"kt", &ExperimentConfig::kt},       {"sigma2", &ExperimentConfig::sigma2},
  };
  for (const auto& [key, entry] : entries) {
    const int ln = entry.line;
    const std::string& v = entry.value;
    if (const auto ax = axes.find(key); ax != axes.end()) {
      c.*(ax->second) = parse_axis(v, ln, key);
    } else if (key == "experiment") {
      // handled above
    } else if (key == "output") {
      c.output = v;
    } else if (key == "format") {
      const auto f = format_from_string(v);
      if (!f) fail(ln, key, "expected csv or json");
      c.format = *f;
    } else if (key == "dim") {
      if (v == "auto") {
        c.dim.reset();
      } else {
        int d = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
        if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || d < 2) {
          fail(ln, key, "expected an integer >= 2 or 'auto'");
        }
        c.dim = d;
      }
    } else if (key == "with_k3") {
      if (v == "true") {
        c.with_k3 = true;
      } else if (v == "false") {
        c.with_k3 = false;
      } else {
        fail(ln, key, "expected true or false");
      }
    } else {
      fail(ln, key, "unknown key");
    }
  }
  for (const auto& [key, member] : axes) {
    for (double x : (c.*member).values()) {
      if ((key == "gamma" || key == "kt" || key == "sigma2") && x < 0) {
        const auto it = entries.find(key);
        fail(it == entries.end() ? 0 : it->second.line, key,
             "values must be >= 0");
      }
    }
  }
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "experiment = " << to_string(c.experiment) << '\n'
     << "delta = " << axis_to_string(c.delta) << '\n'
     << "epsilon = " << axis_to_string(c.epsilon) << '\n'
     << "kerr = " << axis_to_string(c.kerr) << '\n'
     << "gamma = " << axis_to_string(c.gamma) << '\n'
     << "kt = " << axis_to_string(c.kt) << '\n'
     << "sigma2 = " << axis_to_string(c.sigma2) << '\n'
     << "dim = " << (c.dim ? std::to_string(*c.dim) : std::string("auto")) << '\n'
     << "format = " << to_string(c.format) << '\n'
     << "with_k3 = " << (c.with_k3 ? "true" : "false") << '\n';
  if (!c.output.empty()) os << "output = " << c.output << '\n';
  return os.str();
}

}  // namespace kerr::harness

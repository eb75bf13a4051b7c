#include "kerr/harness/emit.hpp"

#include "kerr/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>

namespace kerr::harness {
namespace {

using nlohmann::ordered_json;

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, long>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      c);
}

ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file " + path.string());
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t, std::string_view experiment) {
  ordered_json j;
  j["experiment"] = experiment;
  j["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r = ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      r[t.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

std::string to_json(const WignerSnapshot& s) {
  const PhaseGrid& g = s.grid.grid;
  ordered_json j;
  j["label"] = s.label;
  std::vector<double> xs(g.nx), ps(g.np);
  for (int i = 0; i < g.nx; ++i) xs[i] = g.x(i);
  for (int k = 0; k < g.np; ++k) ps[k] = g.p(k);
  j["x_grid"] = xs;
  j["p_grid"] = ps;
  ordered_json w = ordered_json::array();
  for (int i = 0; i < g.nx; ++i) {
    std::vector<double> row(g.np);
    for (int k = 0; k < g.np; ++k) row[k] = s.grid.w(i, k);
    w.push_back(row);
  }
  j["w"] = std::move(w);
  j["phi_opt"] = s.phi_opt;
  j["theta_opt"] = s.theta_opt;
  return j.dump() + "\n";
}

std::vector<std::filesystem::path> emit(const ExperimentOutput& output,
                                        const std::filesystem::path& out,
                                        Format format, Experiment experiment) {
  std::vector<std::filesystem::path> written;
  const std::string ext = format == Format::Csv ? ".csv" : ".json";
  const std::filesystem::path base = out.parent_path() / out.stem();
  for (const Table& t : output.tables) {
    std::filesystem::path p =
        t.suffix.empty() ? out : std::filesystem::path(base.string() + t.suffix + ext);
    write_file(p, format == Format::Csv ? to_csv(t)
                                        : to_json(t, to_string(experiment)));
    written.push_back(std::move(p));
  }
  for (const WignerSnapshot& s : output.snapshots) {
    std::filesystem::path p = s.suffix.empty()
                                  ? out
                                  : std::filesystem::path(base.string() + s.suffix + ".json");
    write_file(p, to_json(s));
    written.push_back(std::move(p));
  }
  return written;
}

}  // namespace kerr::harness

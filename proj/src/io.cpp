#include "sdsm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sdsm/errors.hpp"
#include "sdsm/permutation.hpp"

namespace sdsm {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw IoError(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_csv(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

int parse_int(const std::string& s, const std::string& path, std::size_t line) {
  int value = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) fail(path, line, "malformed integer '" + s + "'");
  return value;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(path, line, "malformed number '" + s + "'");
  }
  if (!std::isfinite(value)) fail(path, line, "non-finite coordinate '" + s + "'");
  return value;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  return out;
}

void expect_header(std::ifstream& in, const std::string& path, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file, expected header '" + expected + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) fail(path, 1, "bad header, expected '" + expected + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_p(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5e", v);  // 6 significant digits
  return buf;
}

}  // namespace

LabeledDataset load_dataset(const std::string& traj_path, const std::string& labels_path) {
  std::ifstream tin = open_input(traj_path);
  expect_header(tin, traj_path, "traj_id,seq,x,y");

  std::map<int, std::vector<Point>> points_by_id;
  int current_id = 0;
  bool have_current = false;
  int last_seq = 0;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(tin, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4) fail(traj_path, lineno, "malformed row, expected 4 fields");
    const int id = parse_int(fields[0], traj_path, lineno);
    const int seq = parse_int(fields[1], traj_path, lineno);
    const double x = parse_double(fields[2], traj_path, lineno);
    const double y = parse_double(fields[3], traj_path, lineno);

    if (!have_current || id != current_id) {
      if (points_by_id.count(id)) {
        fail(traj_path, lineno, "trajectory " + std::to_string(id) + " rows are not contiguous");
      }
      current_id = id;
      have_current = true;
      last_seq = 0;
      points_by_id[id];
    }
    if (seq == last_seq) {
      fail(traj_path, lineno,
           "duplicate (traj_id, seq) = (" + fields[0] + ", " + fields[1] + ")");
    }
    if (seq <= last_seq || (last_seq == 0 && seq != 1)) {
      fail(traj_path, lineno, "seq must increase strictly from 1");
    }
    last_seq = seq;
    points_by_id[id].push_back(Point{x, y});
  }

  std::ifstream lin = open_input(labels_path);
  expect_header(lin, labels_path, "traj_id,label");
  std::map<int, int> label_by_id;
  lineno = 1;
  while (std::getline(lin, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) fail(labels_path, lineno, "malformed row, expected 2 fields");
    const int id = parse_int(fields[0], labels_path, lineno);
    if (fields[1] != "+1" && fields[1] != "1" && fields[1] != "-1") {
      fail(labels_path, lineno, "invalid label '" + fields[1] + "' (must be +1 or -1)");
    }
    const int g = fields[1] == "-1" ? -1 : 1;
    if (!label_by_id.emplace(id, g).second) {
      fail(labels_path, lineno, "duplicate label for trajectory " + std::to_string(id));
    }
  }

  for (const auto& [id, g] : label_by_id) {
    if (!points_by_id.count(id)) {
      throw IoError(labels_path + ": trajectory " + std::to_string(id) +
                    " has a label but no points in " + traj_path);
    }
  }
  std::vector<Trajectory> trajs;
  std::vector<int> labels;
  for (auto& [id, pts] : points_by_id) {
    const auto it = label_by_id.find(id);
    if (it == label_by_id.end()) {
      throw IoError(traj_path + ": trajectory " + std::to_string(id) +
                    " has points but no label in " + labels_path);
    }
    trajs.push_back(Trajectory{id, std::move(pts)});
    labels.push_back(it->second);
  }
  try {
    return LabeledDataset(std::move(trajs), std::move(labels));
  } catch (const ConfigError& e) {
    throw IoError(traj_path + ": " + e.what());
  }
}

void write_dataset(const LabeledDataset& dataset, const std::string& traj_path,
                   const std::string& labels_path) {
  std::ofstream tout = open_output(traj_path);
  tout << "traj_id,seq,x,y\n";
  for (int i = 0; i < dataset.size(); ++i) {
    const Trajectory& t = dataset.traj(i);
    for (int j = 0; j < t.size(); ++j) {
      const Point& p = t.points[static_cast<std::size_t>(j)];
      tout << t.id << ',' << (j + 1) << ',' << format_double(p.x) << ','
           << format_double(p.y) << '\n';
    }
  }
  std::ofstream lout = open_output(labels_path);
  lout << "traj_id,label\n";
  for (int i = 0; i < dataset.size(); ++i) {
    lout << dataset.id_of(i) << ',' << (dataset.label(i) > 0 ? "+1" : "-1") << '\n';
  }
}

void write_manifest(const std::vector<CarrierWindow>& manifest, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "traj_id,start,end\n";
  for (const CarrierWindow& c : manifest) {
    out << c.traj_id << ',' << c.start << ',' << c.end << '\n';
  }
}

std::vector<CarrierWindow> load_manifest(const std::string& path) {
  std::ifstream in = open_input(path);
  expect_header(in, path, "traj_id,start,end");
  std::vector<CarrierWindow> manifest;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) fail(path, lineno, "malformed row, expected 3 fields");
    manifest.push_back(CarrierWindow{parse_int(fields[0], path, lineno),
                                     parse_int(fields[1], path, lineno),
                                     parse_int(fields[2], path, lineno)});
  }
  return manifest;
}

RunSummary make_summary(const MiningResult& result, const LabeledDataset& dataset,
                        const MiningConfig& config, double wall_time_seconds) {
  RunSummary s;
  s.delta_star = result.delta_star;
  s.alpha = config.alpha;
  s.perms = config.perms;
  s.min_len = config.min_len;
  s.top_k = config.top_k;
  s.eps = config.eps;
  s.seed = config.seed;
  s.rng_name = PermutationSet::rng_name();
  s.n = dataset.size();
  s.n_pos = dataset.n_pos();
  s.n_neg = dataset.n_neg();
  s.num_discoveries = result.discoveries.size();
  s.nodes_visited = result.diag.nodes_visited;
  s.chains_pruned = result.diag.chains_pruned;
  s.tests_evaluated = result.diag.tests_evaluated;
  s.bottom_k_min_p = result.diag.bottom_k_min_p;
  s.wall_time_seconds = wall_time_seconds;
  return s;
}

void write_reports(const MiningResult& result, const LabeledDataset& dataset,
                   const RunSummary& summary, const std::string& out_dir,
                   bool with_geojson) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir + ": cannot create directory (" + ec.message() + ")");
  const std::filesystem::path dir(out_dir);

  int sid_width = 3;
  for (std::size_t count = result.discoveries.size(); count >= 1000; count /= 10) ++sid_width;

  auto sid_of = [&](std::size_t row) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%0*zu", sid_width, row + 1);
    return std::string(buf);
  };

  {
    std::ofstream out = open_output((dir / "discoveries.tsv").string());
    out << "sid\ttraj_id\tstart\tend\tlength\tsup_pos\tsup_neg\tsup_total\tp_value\tadjusted_p\n";
    for (std::size_t r = 0; r < result.discoveries.size(); ++r) {
      const DiscoveryRecord& d = result.discoveries[r];
      out << sid_of(r) << '\t' << dataset.id_of(d.ref.traj) << '\t' << d.ref.start << '\t'
          << d.ref.end << '\t' << d.ref.length() << '\t' << d.sup_pos << '\t' << d.sup_neg
          << '\t' << d.sup_total << '\t' << format_p(d.p_value) << '\t'
          << format_p(d.adjusted_p) << '\n';
    }
  }

  {
    nlohmann::ordered_json j;
    j["delta_star"] = summary.delta_star;
    j["alpha"] = summary.alpha;
    j["B"] = summary.perms;
    j["L"] = summary.min_len;
    j["K"] = summary.top_k;
    j["eps"] = summary.eps;
    j["seed"] = summary.seed;
    j["rng_name"] = summary.rng_name;
    j["n"] = summary.n;
    j["n_pos"] = summary.n_pos;
    j["n_neg"] = summary.n_neg;
    j["num_discoveries"] = summary.num_discoveries;
    j["nodes_visited"] = summary.nodes_visited;
    j["chains_pruned"] = summary.chains_pruned;
    j["tests_evaluated"] = summary.tests_evaluated;
    j["bottom_k_min_p"] = summary.bottom_k_min_p;
    j["wall_time_seconds"] = summary.wall_time_seconds;
    std::ofstream out = open_output((dir / "summary.json").string());
    out << j.dump(2) << '\n';
  }

  if (with_geojson) {
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < result.discoveries.size(); ++r) {
      const DiscoveryRecord& d = result.discoveries[r];
      const Trajectory& t = dataset.traj(d.ref.traj);
      nlohmann::ordered_json coords = nlohmann::ordered_json::array();
      for (int idx = d.ref.start; idx <= d.ref.end; ++idx) {
        const Point& p = t.points[static_cast<std::size_t>(idx - 1)];
        coords.push_back({p.x, p.y});
      }
      nlohmann::ordered_json f;
      f["type"] = "Feature";
      f["geometry"] = {{"type", "LineString"}, {"coordinates", coords}};
      f["properties"] = {{"sid", sid_of(r)},
                         {"traj_id", dataset.id_of(d.ref.traj)},
                         {"start", d.ref.start},
                         {"end", d.ref.end},
                         {"length", d.ref.length()},
                         {"sup_pos", d.sup_pos},
                         {"sup_neg", d.sup_neg},
                         {"sup_total", d.sup_total},
                         {"p_value", d.p_value},
                         {"adjusted_p", d.adjusted_p}};
      features.push_back(std::move(f));
    }
    nlohmann::ordered_json collection;
    collection["type"] = "FeatureCollection";
    collection["features"] = std::move(features);
    std::ofstream out = open_output((dir / "discoveries.geojson").string());
    out << collection.dump(2) << '\n';
  }
}

}  // namespace sdsm

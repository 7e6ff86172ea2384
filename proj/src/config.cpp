#include "patchwork/config.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "patchwork/errors.hpp"

namespace patchwork {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Removes a trailing comment; '#' inside a quoted string does not count.
std::string_view strip_comment(std::string_view line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    else if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

struct Entry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;

      line = trim(strip_comment(line));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          throw ValidationError("config line " + std::to_string(line_no) + ": malformed section header");
        }
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
      }
      const std::string key = std::string(trim(line.substr(0, eq)));
      if (key.empty() || section.empty()) {
        throw ValidationError("config line " + std::to_string(line_no) + ": key outside a [section] or empty key");
      }
      const std::string full = section + "." + key;
      if (entries_.count(full) != 0) {
        throw ValidationError("duplicate config key '" + full + "' (line " + std::to_string(line_no) + ")");
      }
      entries_[full] = Entry{std::string(trim(line.substr(eq + 1))), line_no, false};
    }
  }

  bool has(const std::string& full_key) const { return entries_.count(full_key) != 0; }

  std::optional<std::string> take(const std::string& full_key) {
    auto it = entries_.find(full_key);
    if (it == entries_.end()) return std::nullopt;
    it->second.consumed = true;
    return it->second.value;
  }

  void finish() const {
    std::vector<std::string> unknown;
    for (const auto& [key, entry] : entries_) {
      if (!entry.consumed) unknown.push_back(key);
    }
    if (!unknown.empty()) {
      std::string msg = "unknown config key";
      if (unknown.size() > 1) msg += "s";
      msg += ":";
      for (const auto& key : unknown) msg += " '" + key + "'";
      throw ValidationError(msg);
    }
  }

 private:
  std::map<std::string, Entry> entries_;
};

double parse_double_token(std::string_view token, const std::string& key) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ValidationError("config key '" + key + "': expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

long long parse_int_token(std::string_view token, const std::string& key) {
  token = trim(token);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ValidationError("config key '" + key + "': expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_array(std::string_view value, const std::string& key) {
  value = trim(value);
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
    throw ValidationError("config key '" + key + "': expected an array [..]");
  }
  value = trim(value.substr(1, value.size() - 2));
  std::vector<std::string_view> parts;
  if (value.empty()) return parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= value.size(); ++i) {
    if (i == value.size() || value[i] == ',') {
      parts.push_back(trim(value.substr(start, i - start)));
      start = i + 1;
    }
  }
  return parts;
}

void set_double(Reader& reader, const std::string& key, double& out) {
  if (auto v = reader.take(key)) out = parse_double_token(*v, key);
}

void set_int(Reader& reader, const std::string& key, int& out) {
  if (auto v = reader.take(key)) out = static_cast<int>(parse_int_token(*v, key));
}

void set_bool(Reader& reader, const std::string& key, bool& out) {
  if (auto v = reader.take(key)) {
    const std::string_view t = trim(*v);
    if (t == "true") out = true;
    else if (t == "false") out = false;
    else throw ValidationError("config key '" + key + "': expected true or false");
  }
}

std::optional<std::string> take_string(Reader& reader, const std::string& key) {
  auto v = reader.take(key);
  if (!v) return std::nullopt;
  const std::string_view t = trim(*v);
  if (t.size() < 2 || t.front() != '"' || t.back() != '"') {
    throw ValidationError("config key '" + key + "': expected a quoted string");
  }
  return std::string(t.substr(1, t.size() - 2));
}

template <std::size_t N>
void set_int_array(Reader& reader, const std::string& key, std::array<int, N>& out) {
  auto v = reader.take(key);
  if (!v) return;
  const auto parts = split_array(*v, key);
  if (parts.size() != N) {
    throw ValidationError("config key '" + key + "': expected exactly " + std::to_string(N) + " values");
  }
  for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<int>(parse_int_token(parts[i], key));
}

template <std::size_t N>
void set_double_array(Reader& reader, const std::string& key, std::array<double, N>& out) {
  auto v = reader.take(key);
  if (!v) return;
  const auto parts = split_array(*v, key);
  if (parts.size() != N) {
    throw ValidationError("config key '" + key + "': expected exactly " + std::to_string(N) + " values");
  }
  for (std::size_t i = 0; i < N; ++i) out[i] = parse_double_token(parts[i], key);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  Reader reader(text);
  RunConfig config;

  set_int(reader, "czm.num_zones", config.params.czm.num_zones);
  set_int_array(reader, "czm.rings", config.params.czm.rings);
  set_int_array(reader, "czm.sectors", config.params.czm.sectors);
  set_double(reader, "czm.l_min", config.params.czm.l_min);
  set_double(reader, "czm.l_max", config.params.czm.l_max);

  set_int(reader, "rgpf.n_seed", config.params.rgpf.n_seed);
  set_double(reader, "rgpf.z_seed", config.params.rgpf.z_seed);
  set_double(reader, "rgpf.m_d", config.params.rgpf.m_d);
  set_double(reader, "rgpf.m_h", config.params.rgpf.m_h);
  set_double(reader, "rgpf.sensor_height", config.params.rgpf.sensor_height);
  set_int(reader, "rgpf.num_iter", config.params.rgpf.num_iter);
  set_int(reader, "rgpf.min_bin_points", config.params.rgpf.min_bin_points);
  set_double_array(reader, "rgpf.seed_filter_offsets", config.params.rgpf.seed_filter_offsets);

  set_double(reader, "gle.theta_tau_deg", config.params.gle.theta_tau_deg);
  if (reader.has("gle.l_tau")) {
    // "auto" derives l_tau from the zone boundaries; a number pins it.
    const std::string raw = *reader.take("gle.l_tau");
    const std::string_view t = trim(raw);
    if (t == "\"auto\"") {
      config.params.gle.l_tau_auto = true;
    } else {
      config.params.gle.l_tau = parse_double_token(t, "gle.l_tau");
      config.params.gle.l_tau_auto = false;
    }
  }
  if (auto v = reader.take("gle.sigma_tau")) {
    const auto parts = split_array(*v, "gle.sigma_tau");
    if (parts.empty() || parts.size() > 4) {
      throw ValidationError("config key 'gle.sigma_tau': expected 1 to 4 values");
    }
    config.params.gle.sigma_tau = {std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    for (std::size_t i = 0; i < parts.size(); ++i) {
      config.params.gle.sigma_tau[i] = parse_double_token(parts[i], "gle.sigma_tau");
    }
  }
  set_double(reader, "gle.zeta", config.params.gle.zeta);
  if (auto v = take_string(reader, "gle.flatness_scale")) {
    if (*v == "tau") config.params.gle.flatness_scale = GleParams::FlatnessScale::tau;
    else if (*v == "raw") config.params.gle.flatness_scale = GleParams::FlatnessScale::raw;
    else throw ValidationError("config key 'gle.flatness_scale': expected \"tau\" or \"raw\"");
  }
  set_double(reader, "gle.kappa_c1", config.params.gle.kappa_c1);
  set_double(reader, "gle.kappa_c2", config.params.gle.kappa_c2);
  set_double(reader, "gle.kappa_lambda", config.params.gle.kappa_lambda);

  set_bool(reader, "pipeline.near_field_passthrough", config.params.near_field_passthrough);
  set_int(reader, "pipeline.num_threads", config.params.num_threads);
  set_int(reader, "pipeline.uniform_rings", config.params.uniform_rings);
  set_int(reader, "pipeline.uniform_sectors", config.params.uniform_sectors);

  set_double(reader, "ransac.dist_thresh", config.ransac.dist_thresh);
  set_int(reader, "ransac.max_iters", config.ransac.max_iters);

  SceneSpec& scene = config.scene;
  set_double(reader, "scene.sensor_height", scene.sensor_height);
  set_int(reader, "scene.ground_points", scene.ground_points);
  set_double(reader, "scene.ground_r_min", scene.ground_r_min);
  set_double(reader, "scene.ground_r_max", scene.ground_r_max);
  set_double(reader, "scene.sigma_z", scene.sigma_z);
  set_int(reader, "scene.ramp_points", scene.ramp_points);
  set_double(reader, "scene.ramp_grade", scene.ramp_grade);
  set_double(reader, "scene.ramp_x0", scene.ramp_x0);
  set_double(reader, "scene.ramp_x1", scene.ramp_x1);
  set_double(reader, "scene.ramp_y0", scene.ramp_y0);
  set_double(reader, "scene.ramp_y1", scene.ramp_y1);
  set_int(reader, "scene.wall_points", scene.wall_points);
  set_double(reader, "scene.wall_x", scene.wall_x);
  set_double(reader, "scene.wall_y0", scene.wall_y0);
  set_double(reader, "scene.wall_y1", scene.wall_y1);
  set_double(reader, "scene.wall_z0", scene.wall_z0);
  set_double(reader, "scene.wall_z1", scene.wall_z1);
  set_double(reader, "scene.wall_thickness", scene.wall_thickness);
  set_int(reader, "scene.roof_points", scene.roof_points);
  set_double(reader, "scene.roof_x0", scene.roof_x0);
  set_double(reader, "scene.roof_x1", scene.roof_x1);
  set_double(reader, "scene.roof_y0", scene.roof_y0);
  set_double(reader, "scene.roof_y1", scene.roof_y1);
  set_double(reader, "scene.roof_z", scene.roof_z);
  set_double(reader, "scene.roof_sigma_z", scene.roof_sigma_z);
  set_int(reader, "scene.outlier_points", scene.outlier_points);
  set_double(reader, "scene.outlier_x", scene.outlier_x);
  set_double(reader, "scene.outlier_y", scene.outlier_y);
  set_double(reader, "scene.outlier_radius", scene.outlier_radius);
  set_double(reader, "scene.outlier_z0", scene.outlier_z0);
  set_double(reader, "scene.outlier_z1", scene.outlier_z1);

  reader.finish();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const RunConfig& config) {
  std::ostringstream out;
  const auto int_array = [](const auto& arr) {
    std::string s = "[";
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(arr[i]);
    }
    return s + "]";
  };
  const auto double_array = [](const auto& arr) {
    std::string s = "[";
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (i) s += ", ";
      s += format_double(arr[i]);
    }
    return s + "]";
  };

  const PatchworkParams& p = config.params;
  out << "[czm]\n";
  out << "num_zones = " << p.czm.num_zones << "\n";
  out << "rings = " << int_array(p.czm.rings) << "\n";
  out << "sectors = " << int_array(p.czm.sectors) << "\n";
  out << "l_min = " << format_double(p.czm.l_min) << "\n";
  out << "l_max = " << format_double(p.czm.l_max) << "\n";

  out << "\n[rgpf]\n";
  out << "n_seed = " << p.rgpf.n_seed << "\n";
  out << "z_seed = " << format_double(p.rgpf.z_seed) << "\n";
  out << "m_d = " << format_double(p.rgpf.m_d) << "\n";
  out << "m_h = " << format_double(p.rgpf.m_h) << "\n";
  out << "sensor_height = " << format_double(p.rgpf.sensor_height) << "\n";
  out << "num_iter = " << p.rgpf.num_iter << "\n";
  out << "min_bin_points = " << p.rgpf.min_bin_points << "\n";
  out << "seed_filter_offsets = " << double_array(p.rgpf.seed_filter_offsets) << "\n";

  out << "\n[gle]\n";
  out << "theta_tau_deg = " << format_double(p.gle.theta_tau_deg) << "\n";
  if (p.gle.l_tau_auto) {
    out << "l_tau = \"auto\"\n";
  } else {
    out << "l_tau = " << format_double(p.gle.l_tau) << "\n";
  }
  out << "sigma_tau = [";
  bool first = true;
  for (const auto& tau : p.gle.sigma_tau) {
    if (!tau) break;
    if (!first) out << ", ";
    out << format_double(*tau);
    first = false;
  }
  out << "]\n";
  out << "zeta = " << format_double(p.gle.zeta) << "\n";
  out << "flatness_scale = "
      << (p.gle.flatness_scale == GleParams::FlatnessScale::tau ? "\"tau\"" : "\"raw\"") << "\n";
  out << "kappa_c1 = " << format_double(p.gle.kappa_c1) << "\n";
  out << "kappa_c2 = " << format_double(p.gle.kappa_c2) << "\n";
  out << "kappa_lambda = " << format_double(p.gle.kappa_lambda) << "\n";

  out << "\n[pipeline]\n";
  out << "near_field_passthrough = " << (p.near_field_passthrough ? "true" : "false") << "\n";
  out << "num_threads = " << p.num_threads << "\n";
  out << "uniform_rings = " << p.uniform_rings << "\n";
  out << "uniform_sectors = " << p.uniform_sectors << "\n";

  out << "\n[ransac]\n";
  out << "dist_thresh = " << format_double(config.ransac.dist_thresh) << "\n";
  out << "max_iters = " << config.ransac.max_iters << "\n";

  const SceneSpec& s = config.scene;
  out << "\n[scene]\n";
  out << "sensor_height = " << format_double(s.sensor_height) << "\n";
  out << "ground_points = " << s.ground_points << "\n";
  out << "ground_r_min = " << format_double(s.ground_r_min) << "\n";
  out << "ground_r_max = " << format_double(s.ground_r_max) << "\n";
  out << "sigma_z = " << format_double(s.sigma_z) << "\n";
  out << "ramp_points = " << s.ramp_points << "\n";
  out << "ramp_grade = " << format_double(s.ramp_grade) << "\n";
  out << "ramp_x0 = " << format_double(s.ramp_x0) << "\n";
  out << "ramp_x1 = " << format_double(s.ramp_x1) << "\n";
  out << "ramp_y0 = " << format_double(s.ramp_y0) << "\n";
  out << "ramp_y1 = " << format_double(s.ramp_y1) << "\n";
  out << "wall_points = " << s.wall_points << "\n";
  out << "wall_x = " << format_double(s.wall_x) << "\n";
  out << "wall_y0 = " << format_double(s.wall_y0) << "\n";
  out << "wall_y1 = " << format_double(s.wall_y1) << "\n";
  out << "wall_z0 = " << format_double(s.wall_z0) << "\n";
  out << "wall_z1 = " << format_double(s.wall_z1) << "\n";
  out << "wall_thickness = " << format_double(s.wall_thickness) << "\n";
  out << "roof_points = " << s.roof_points << "\n";
  out << "roof_x0 = " << format_double(s.roof_x0) << "\n";
  out << "roof_x1 = " << format_double(s.roof_x1) << "\n";
  out << "roof_y0 = " << format_double(s.roof_y0) << "\n";
  out << "roof_y1 = " << format_double(s.roof_y1) << "\n";
  out << "roof_z = " << format_double(s.roof_z) << "\n";
  out << "roof_sigma_z = " << format_double(s.roof_sigma_z) << "\n";
  out << "outlier_points = " << s.outlier_points << "\n";
  out << "outlier_x = " << format_double(s.outlier_x) << "\n";
  out << "outlier_y = " << format_double(s.outlier_y) << "\n";
  out << "outlier_radius = " << format_double(s.outlier_radius) << "\n";
  out << "outlier_z0 = " << format_double(s.outlier_z0) << "\n";
  out << "outlier_z1 = " << format_double(s.outlier_z1) << "\n";
  return out.str();
}

}  // namespace patchwork

#include "safeoc/checkpoint.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace safeoc {

std::string env_kind_name(EnvKind kind) {
  return kind == EnvKind::FourRooms ? "fourrooms" : "cartpole";
}

EnvKind env_kind_from_name(const std::string& name) {
  if (name == "fourrooms") return EnvKind::FourRooms;
  if (name == "cartpole") return EnvKind::CartPole;
  throw std::invalid_argument("unknown environment '" + name +
                              "' (expected fourrooms or cartpole)");
}

namespace {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_table(std::ostream& out, const std::string& name,
                 std::span<const double> values) {
  out << name << ' ' << values.size() << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_double(values[i]);
    out << ((i + 1) % 8 == 0 || i + 1 == values.size() ? '\n' : ' ');
  }
}

void read_table(std::istream& in, const std::string& expected_name,
                std::span<double> values) {
  std::string name;
  std::size_t count = 0;
  if (!(in >> name >> count) || name != expected_name ||
      count != values.size()) {
    throw std::runtime_error("checkpoint: bad '" + expected_name +
                             "' table header");
  }
  for (double& v : values) {
    if (!(in >> v)) {
      throw std::runtime_error("checkpoint: truncated '" + expected_name +
                               "' table");
    }
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write checkpoint: " + path);
  }
  out << "safeoc-checkpoint 1\n";
  out << "env " << env_kind_name(checkpoint.env_kind) << '\n';
  if (checkpoint.env_kind == EnvKind::FourRooms) {
    out << "map " << checkpoint.map.height << ' ' << checkpoint.map.width
        << '\n';
    out << render_grid_map(checkpoint.map);
  } else {
    out << "tilecoder " << checkpoint.tilings << ' ' << checkpoint.bins.size()
        << '\n';
    out << "bins";
    for (int b : checkpoint.bins) out << ' ' << b;
    out << '\n';
    out << "ranges";
    for (const FeatureRange& r : checkpoint.ranges) {
      out << ' ' << format_double(r.low) << ' ' << format_double(r.high);
    }
    out << '\n';
  }
  const OptionParameters& p = checkpoint.params;
  out << "params " << p.num_options() << ' ' << p.num_actions() << ' '
      << p.num_features() << ' ' << format_double(p.temperature()) << '\n';
  write_table(out, "theta", p.theta_table());
  write_table(out, "nu", p.nu_table());
  write_table(out, "q_u", p.q_u_table());
  if (!out) {
    throw std::runtime_error("failed while writing checkpoint: " + path);
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open checkpoint: " + path);
  }
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "safeoc-checkpoint" ||
      version != 1) {
    throw std::runtime_error("checkpoint: unrecognized header in " + path);
  }
  std::string key, env_name;
  if (!(in >> key >> env_name) || key != "env") {
    throw std::runtime_error("checkpoint: missing env line in " + path);
  }
  const EnvKind kind = env_kind_from_name(env_name);

  GridMap map;
  int tilings = 0;
  std::vector<int> bins;
  std::vector<FeatureRange> ranges;
  if (kind == EnvKind::FourRooms) {
    int height = 0, width = 0;
    if (!(in >> key >> height >> width) || key != "map") {
      throw std::runtime_error("checkpoint: missing map header in " + path);
    }
    std::string line;
    std::getline(in, line);  // consume end of header line
    std::ostringstream map_text;
    for (int r = 0; r < height; ++r) {
      if (!std::getline(in, line)) {
        throw std::runtime_error("checkpoint: truncated map in " + path);
      }
      map_text << line << '\n';
    }
    map = parse_grid_map(map_text.str());
    if (map.width != width || map.height != height) {
      throw std::runtime_error("checkpoint: map dimensions disagree in " +
                               path);
    }
  } else {
    std::size_t dims = 0;
    if (!(in >> key >> tilings >> dims) || key != "tilecoder") {
      throw std::runtime_error("checkpoint: missing tilecoder header in " +
                               path);
    }
    if (!(in >> key) || key != "bins") {
      throw std::runtime_error("checkpoint: missing bins in " + path);
    }
    bins.resize(dims);
    for (int& b : bins) {
      if (!(in >> b)) throw std::runtime_error("checkpoint: truncated bins");
    }
    if (!(in >> key) || key != "ranges") {
      throw std::runtime_error("checkpoint: missing ranges in " + path);
    }
    ranges.resize(dims);
    for (FeatureRange& r : ranges) {
      if (!(in >> r.low >> r.high)) {
        throw std::runtime_error("checkpoint: truncated ranges");
      }
    }
  }

  int options = 0, actions = 0;
  std::uint32_t features = 0;
  double temperature = 0.0;
  if (!(in >> key >> options >> actions >> features >> temperature) ||
      key != "params") {
    throw std::runtime_error("checkpoint: missing params header in " + path);
  }
  OptionParameters params(options, actions, features, temperature);
  read_table(in, "theta", params.theta_table());
  read_table(in, "nu", params.nu_table());
  read_table(in, "q_u", params.q_u_table());

  Checkpoint checkpoint{kind, std::move(map), tilings, std::move(bins),
                        std::move(ranges), std::move(params)};
  return checkpoint;
}

}  // namespace safeoc

#include "irsuav/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace irsuav {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad numeric value for '" + key + "': " + value);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad integer value for '" + key + "': " + value);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + value);
}

std::vector<std::string> split(const std::string& value, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(value);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(trim(part));
  return parts;
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != 3) throw ConfigError("config: '" + key + "' needs an x,y,z triple");
  return {parse_double(key, parts[0]), parse_double(key, parts[1]), parse_double(key, parts[2])};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_vec3(const Vec3& v) {
  return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

const std::vector<Vec3>& default_uav_sites() {
  static const std::vector<Vec3> sites{
      {0.0, 0.0, 200.0}, {200.0, 300.0, 200.0}, {400.0, 0.0, 200.0}};
  return sites;
}

}  // namespace

void RunConfig::validate() const {
  if (clusters < 1 || ues_per_cluster < 1 || irs_elements < 1)
    throw ConfigError("config: clusters, ues_per_cluster and irs_elements must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("config: bandwidth_hz must be > 0");
  if (!(p_max_w > 0.0)) throw ConfigError("config: p_max_w must be > 0");
  if (!(p_fixed_w > 0.0)) throw ConfigError("config: p_fixed_w must be > 0");
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0)) throw ConfigError("config: kappas must be > 0");
  if (rician_factor < 0.0) throw ConfigError("config: rician_factor must be >= 0");
  if (!(d_over_lambda > 0.0)) throw ConfigError("config: d_over_lambda must be > 0");
  if (!(coverage_m > 0.0)) throw ConfigError("config: coverage_m must be > 0");
  if (episode_length < 1) throw ConfigError("config: episode_length must be >= 1");
  if (episodes < 1) throw ConfigError("config: episodes must be >= 1");
  if (seeds.empty()) throw ConfigError("config: seeds must not be empty");
  if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (sweep_k.empty()) throw ConfigError("config: sweep_k must not be empty");
  for (int k : sweep_k)
    if (k < 1) throw ConfigError("config: sweep_k entries must be >= 1");
  if (uav_positions && uav_positions->size() != static_cast<std::size_t>(clusters))
    throw ConfigError("config: uav_positions must list one position per cluster");
  if (!uav_positions && clusters > static_cast<int>(default_uav_sites().size()))
    throw ConfigError("config: uav_positions required for more than 3 clusters");
  if (!(init_std > 0.0)) throw ConfigError("config: init_std must be > 0");
  if (!(ddpg.actor_lr > 0.0) || !(ddpg.critic_lr > 0.0) || !(ppo.policy_lr > 0.0) ||
      !(ppo.value_lr > 0.0))
    throw ConfigError("config: learning rates must be > 0");
  if (ddpg.discount < 0.0 || ddpg.discount > 1.0)
    throw ConfigError("config: discount must be in [0, 1]");
  if (ddpg.target_mix < 0.0 || ddpg.target_mix > 1.0)
    throw ConfigError("config: target_mix must be in [0, 1]");
  if (ddpg.batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
  if (ddpg.replay_capacity < 1) throw ConfigError("config: replay_capacity must be >= 1");
  if (ddpg.noise_scale < 0.0) throw ConfigError("config: noise_scale must be >= 0");
  if (!(ddpg.noise_decay > 0.0) || ddpg.noise_decay > 1.0)
    throw ConfigError("config: noise_decay must be in (0, 1]");
  if (!(ddpg.grad_clip_norm > 0.0)) throw ConfigError("config: grad_clip_norm must be > 0");
  if (!(ppo.clip_epsilon > 0.0)) throw ConfigError("config: clip_epsilon must be > 0");
  if (ppo.horizon < 1) throw ConfigError("config: horizon must be >= 1");
  if (ppo.epochs < 1) throw ConfigError("config: ppo_epochs must be >= 1");
  for (int h : ddpg.hidden_sizes)
    if (h < 1) throw ConfigError("config: hidden_sizes entries must be >= 1");
  if (ddpg.hidden_sizes.empty()) throw ConfigError("config: hidden_sizes must not be empty");
}

std::vector<Vec3> RunConfig::resolved_uav_positions() const {
  if (uav_positions) {
    if (uav_positions->size() != static_cast<std::size_t>(clusters))
      throw ConfigError("config: uav_positions must list one position per cluster");
    return *uav_positions;
  }
  const auto& sites = default_uav_sites();
  if (clusters > static_cast<int>(sites.size()))
    throw ConfigError("config: uav_positions required for more than 3 clusters");
  return {sites.begin(), sites.begin() + clusters};
}

EnvConfig RunConfig::env_config() const { return env_config_with_k(irs_elements); }

EnvConfig RunConfig::env_config_with_k(int k) const {
  validate();
  EnvConfig env;
  env.net.clusters = clusters;
  env.net.ues_per_cluster = ues_per_cluster;
  env.net.irs_elements = k;
  env.net.bandwidth_hz = bandwidth_hz;
  env.net.p_max_w = p_max_w;
  env.net.p_fixed_w = p_fixed_w;
  env.net.noise_w = std::pow(10.0, (noise_dbm - 30.0) / 10.0);
  env.chan.beta0 = std::pow(10.0, beta0_db / 10.0);
  env.chan.kappa1 = kappa1;
  env.chan.kappa2 = kappa2;
  env.chan.rician_factor = rician_factor;
  env.chan.d_over_lambda = d_over_lambda;
  env.chan.elements = k;
  env.uav_positions = resolved_uav_positions();
  env.irs_position = irs_position;
  env.cluster_radius_m = coverage_m;
  env.episode_length = episode_length;
  env.validate();
  return env;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  using Handler = std::function<void(RunConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, Handler> handlers = {
      {"clusters", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.clusters = static_cast<int>(parse_int(k, v)); }},
      {"ues_per_cluster", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ues_per_cluster = static_cast<int>(parse_int(k, v)); }},
      {"irs_elements", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.irs_elements = static_cast<int>(parse_int(k, v)); }},
      {"bandwidth_hz", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.bandwidth_hz = parse_double(k, v); }},
      {"p_max_w", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.p_max_w = parse_double(k, v); }},
      {"p_fixed_w", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.p_fixed_w = parse_double(k, v); }},
      {"noise_dbm", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.noise_dbm = parse_double(k, v); }},
      {"beta0_db", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.beta0_db = parse_double(k, v); }},
      {"kappa1", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.kappa1 = parse_double(k, v); }},
      {"kappa2", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.kappa2 = parse_double(k, v); }},
      {"rician_factor", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.rician_factor = parse_double(k, v); }},
      {"d_over_lambda", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.d_over_lambda = parse_double(k, v); }},
      {"irs_position", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.irs_position = parse_vec3(k, v); }},
      {"uav_positions", [](RunConfig& c, const std::string& k, const std::string& v) {
         std::vector<Vec3> sites;
         for (const std::string& part : split(v, ';'))
           if (!part.empty()) sites.push_back(parse_vec3(k, part));
         if (sites.empty()) throw ConfigError("config: uav_positions must not be empty");
         c.uav_positions = std::move(sites); }},
      {"coverage_m", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.coverage_m = parse_double(k, v); }},
      {"episode_length", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.episode_length = static_cast<int>(parse_int(k, v)); }},
      {"scheme", [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.scheme = scheme_from_tag(v);
         } catch (const std::invalid_argument&) {
           throw ConfigError("config: bad value for '" + k + "': " + v);
         } }},
      {"episodes", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.episodes = static_cast<int>(parse_int(k, v)); }},
      {"seeds", [](RunConfig& c, const std::string& k, const std::string& v) {
         std::vector<std::uint64_t> seeds;
         for (const std::string& part : split(v, ','))
           if (!part.empty()) seeds.push_back(static_cast<std::uint64_t>(parse_int(k, part)));
         if (seeds.empty()) throw ConfigError("config: seeds must not be empty");
         c.seeds = std::move(seeds); }},
      {"out_dir", [](RunConfig& c, const std::string&, const std::string& v) {
         c.out_dir = v; }},
      {"jobs", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.jobs = static_cast<int>(parse_int(k, v)); }},
      {"dump_trajectories", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dump_trajectories = parse_bool(k, v); }},
      {"sweep_k", [](RunConfig& c, const std::string& k, const std::string& v) {
         std::vector<int> ks;
         for (const std::string& part : split(v, ','))
           if (!part.empty()) ks.push_back(static_cast<int>(parse_int(k, part)));
         if (ks.empty()) throw ConfigError("config: sweep_k must not be empty");
         c.sweep_k = std::move(ks); }},
      {"actor_lr", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ddpg.actor_lr = parse_double(k, v); }},
      {"critic_lr", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ddpg.critic_lr = parse_double(k, v); }},
      {"discount", [](RunConfig& c, const std::string& k, const std::string& v) {
         const double d = parse_double(k, v);
         c.ddpg.discount = d;
         c.ppo.discount = d; }},
      {"target_mix", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ddpg.target_mix = parse_double(k, v); }},
      {"batch_size", [](RunConfig& c, const std::string& k, const std::string& v) {
         const int b = static_cast<int>(parse_int(k, v));
         c.ddpg.batch_size = b;
         c.ppo.minibatch = b; }},
      {"replay_capacity", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ddpg.replay_capacity = static_cast<std::size_t>(parse_int(k, v)); }},
      {"noise_scale", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ddpg.noise_scale = parse_double(k, v); }},
      {"noise_decay", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ddpg.noise_decay = parse_double(k, v); }},
      {"grad_clip_norm", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ddpg.grad_clip_norm = parse_double(k, v); }},
      {"hidden_sizes", [](RunConfig& c, const std::string& k, const std::string& v) {
         std::vector<int> sizes;
         for (const std::string& part : split(v, ','))
           if (!part.empty()) sizes.push_back(static_cast<int>(parse_int(k, part)));
         if (sizes.empty()) throw ConfigError("config: hidden_sizes must not be empty");
         c.ddpg.hidden_sizes = sizes;
         c.ppo.hidden_sizes = std::move(sizes); }},
      {"policy_lr", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ppo.policy_lr = parse_double(k, v); }},
      {"value_lr", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ppo.value_lr = parse_double(k, v); }},
      {"clip_epsilon", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ppo.clip_epsilon = parse_double(k, v); }},
      {"horizon", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ppo.horizon = static_cast<int>(parse_int(k, v)); }},
      {"ppo_epochs", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ppo.epochs = static_cast<int>(parse_int(k, v)); }},
      {"init_std", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init_std = parse_double(k, v);
         if (!(c.init_std > 0.0)) throw ConfigError("config: init_std must be > 0");
         c.ppo.init_log_std = std::log(c.init_std); }},
  };
  static const std::map<std::string, std::string> aliases = {
      {"N", "clusters"}, {"M", "ues_per_cluster"}, {"K", "irs_elements"}};

  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (const auto alias = aliases.find(key); alias != aliases.end()) key = alias->second;
    const auto handler = handlers.find(key);
    if (handler == handlers.end())
      throw ConfigError("config line " + std::to_string(line_number) + ": unknown key '" + key +
                        "'");
    handler->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "clusters = " << cfg.clusters << '\n';
  out << "ues_per_cluster = " << cfg.ues_per_cluster << '\n';
  out << "irs_elements = " << cfg.irs_elements << '\n';
  out << "bandwidth_hz = " << format_double(cfg.bandwidth_hz) << '\n';
  out << "p_max_w = " << format_double(cfg.p_max_w) << '\n';
  out << "p_fixed_w = " << format_double(cfg.p_fixed_w) << '\n';
  out << "noise_dbm = " << format_double(cfg.noise_dbm) << '\n';
  out << "beta0_db = " << format_double(cfg.beta0_db) << '\n';
  out << "kappa1 = " << format_double(cfg.kappa1) << '\n';
  out << "kappa2 = " << format_double(cfg.kappa2) << '\n';
  out << "rician_factor = " << format_double(cfg.rician_factor) << '\n';
  out << "d_over_lambda = " << format_double(cfg.d_over_lambda) << '\n';
  out << "irs_position = " << format_vec3(cfg.irs_position) << '\n';
  out << "uav_positions = ";
  const std::vector<Vec3> sites = cfg.resolved_uav_positions();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (i > 0) out << "; ";
    out << format_vec3(sites[i]);
  }
  out << '\n';
  out << "coverage_m = " << format_double(cfg.coverage_m) << '\n';
  out << "episode_length = " << cfg.episode_length << '\n';
  out << "scheme = " << scheme_tag(cfg.scheme) << '\n';
  out << "episodes = " << cfg.episodes << '\n';
  out << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i > 0) out << ',';
    out << cfg.seeds[i];
  }
  out << '\n';
  out << "out_dir = " << cfg.out_dir << '\n';
  out << "jobs = " << cfg.jobs << '\n';
  out << "dump_trajectories = " << (cfg.dump_trajectories ? "true" : "false") << '\n';
  out << "sweep_k = ";
  for (std::size_t i = 0; i < cfg.sweep_k.size(); ++i) {
    if (i > 0) out << ',';
    out << cfg.sweep_k[i];
  }
  out << '\n';
  out << "actor_lr = " << format_double(cfg.ddpg.actor_lr) << '\n';
  out << "critic_lr = " << format_double(cfg.ddpg.critic_lr) << '\n';
  out << "discount = " << format_double(cfg.ddpg.discount) << '\n';
  out << "target_mix = " << format_double(cfg.ddpg.target_mix) << '\n';
  out << "batch_size = " << cfg.ddpg.batch_size << '\n';
  out << "replay_capacity = " << cfg.ddpg.replay_capacity << '\n';
  out << "noise_scale = " << format_double(cfg.ddpg.noise_scale) << '\n';
  out << "noise_decay = " << format_double(cfg.ddpg.noise_decay) << '\n';
  out << "grad_clip_norm = " << format_double(cfg.ddpg.grad_clip_norm) << '\n';
  out << "hidden_sizes = ";
  for (std::size_t i = 0; i < cfg.ddpg.hidden_sizes.size(); ++i) {
    if (i > 0) out << ',';
    out << cfg.ddpg.hidden_sizes[i];
  }
  out << '\n';
  out << "policy_lr = " << format_double(cfg.ppo.policy_lr) << '\n';
  out << "value_lr = " << format_double(cfg.ppo.value_lr) << '\n';
  out << "clip_epsilon = " << format_double(cfg.ppo.clip_epsilon) << '\n';
  out << "horizon = " << cfg.ppo.horizon << '\n';
  out << "ppo_epochs = " << cfg.ppo.epochs << '\n';
  out << "init_std = " << format_double(cfg.init_std) << '\n';
  return out.str();
}

}  // namespace irsuav

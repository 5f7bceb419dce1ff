#include "walklab/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "walklab/env_biped.hpp"
#include "walklab/error.hpp"
#include "walklab/textio.hpp"

namespace walklab {

namespace {

constexpr char kMagic[4] = {'W', 'L', 'C', 'K'};
constexpr uint32_t kVersion = 1;

// Explicit little-endian encoding, independent of host order.
struct Writer {
  std::string buf;

  void u8(uint8_t v) { buf.push_back(static_cast<char>(v)); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>(v >> (8 * i)));
  }
  void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    buf.append(s);
  }
  void vec(const std::vector<double>& v) {
    u64(v.size());
    for (double x : v) f64(x);
  }
  void params(const ParameterSet& p) {
    u32(static_cast<uint32_t>(p.layers.size()));
    for (const LayerParams& l : p.layers) {
      u32(static_cast<uint32_t>(l.in));
      u32(static_cast<uint32_t>(l.out));
      vec(l.w);
      vec(l.b);
    }
  }
  void spec(const MlpSpec& s) {
    u32(static_cast<uint32_t>(s.layer_sizes.size()));
    for (int d : s.layer_sizes) u32(static_cast<uint32_t>(d));
    u8(static_cast<uint8_t>(s.hidden));
    u8(static_cast<uint8_t>(s.output));
  }
  void adam_cfg(const AdamConfig& c) {
    f64(c.lr);
    f64(c.beta1);
    f64(c.beta2);
    f64(c.eps);
  }
  void adam(const AdamState& a) {
    adam_cfg(a.cfg);
    i64(a.t);
    params(a.m);
    params(a.v);
  }
  void adam_vec(const AdamVecState& a) {
    adam_cfg(a.cfg);
    i64(a.t);
    vec(a.m);
    vec(a.v);
  }
};

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;

  void need(std::size_t n) {
    if (pos + n > buf.size())
      throw ValidationError("checkpoint truncated at byte " +
                            std::to_string(pos));
  }
  uint8_t u8() {
    need(1);
    return static_cast<uint8_t>(buf[pos++]);
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  int64_t i64() { return static_cast<int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const uint64_t n = u64();
    need(n);
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
  std::vector<double> vec() {
    const uint64_t n = u64();
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }
  ParameterSet params() {
    ParameterSet p;
    const uint32_t n = u32();
    p.layers.resize(n);
    for (LayerParams& l : p.layers) {
      l.in = static_cast<int>(u32());
      l.out = static_cast<int>(u32());
      l.w = vec();
      l.b = vec();
      if (l.w.size() != static_cast<std::size_t>(l.in) * l.out ||
          l.b.size() != static_cast<std::size_t>(l.out))
        throw ValidationError("checkpoint layer shape mismatch");
    }
    return p;
  }
  MlpSpec spec() {
    MlpSpec s;
    const uint32_t n = u32();
    s.layer_sizes.resize(n);
    for (int& d : s.layer_sizes) d = static_cast<int>(u32());
    s.hidden = static_cast<Act>(u8());
    s.output = static_cast<Act>(u8());
    s.validate();
    return s;
  }
  AdamConfig adam_cfg() {
    AdamConfig c;
    c.lr = f64();
    c.beta1 = f64();
    c.beta2 = f64();
    c.eps = f64();
    return c;
  }
  AdamState adam() {
    AdamState a;
    a.cfg = adam_cfg();
    a.t = i64();
    a.m = params();
    a.v = params();
    return a;
  }
  AdamVecState adam_vec() {
    AdamVecState a;
    a.cfg = adam_cfg();
    a.t = i64();
    a.m = vec();
    a.v = vec();
    return a;
  }
};

void obs_layout_write(Writer& w, const ObservationLayout& lay) {
  w.u32(static_cast<uint32_t>(lay.segments.size()));
  for (const ObsSegment& s : lay.segments) {
    w.str(s.name);
    w.u32(static_cast<uint32_t>(s.dim));
    w.f64(s.scale);
  }
}

ObservationLayout obs_layout_read(Reader& r) {
  ObservationLayout lay;
  const uint32_t n = r.u32();
  lay.segments.resize(n);
  for (ObsSegment& s : lay.segments) {
    s.name = r.str();
    s.dim = static_cast<int>(r.u32());
    s.scale = r.f64();
  }
  return lay;
}

}  // namespace

ExperimentConfig Checkpoint::config() const {
  return parse_config(config_text);
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
  Writer w;
  w.buf.append(kMagic, 4);
  w.u32(kVersion);
  w.str(cp.config_text);
  w.str(cp.layout_text);
  w.str(cp.model_text);
  obs_layout_write(w, cp.obs_layout);
  w.spec(cp.policy.spec);
  w.params(cp.policy.params);
  w.vec(cp.policy.log_std);
  w.vec(cp.policy.action_scale);
  w.spec(cp.critic.spec);
  w.params(cp.critic.params);
  w.adam(cp.actor_adam);
  w.adam_vec(cp.log_std_adam);
  w.adam(cp.critic_adam);
  w.u64(cp.master_seed);
  w.i64(cp.update_index);
  w.i64(cp.env_steps);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write checkpoint: " + path);
  out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
  if (!out) throw ValidationError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());

  if (data.size() < 8 || std::memcmp(data.data(), kMagic, 4) != 0)
    throw ValidationError(path + ": not a checkpoint file");
  Reader r{data, 4};
  const uint32_t version = r.u32();
  if (version != kVersion)
    throw ValidationError(path + ": unsupported checkpoint version " +
                          std::to_string(version));

  Checkpoint cp;
  cp.config_text = r.str();
  cp.layout_text = r.str();
  cp.model_text = r.str();
  cp.obs_layout = obs_layout_read(r);
  cp.policy.spec = r.spec();
  cp.policy.params = r.params();
  cp.policy.log_std = r.vec();
  cp.policy.action_scale = r.vec();
  cp.critic.spec = r.spec();
  cp.critic.params = r.params();
  cp.actor_adam = r.adam();
  cp.log_std_adam = r.adam_vec();
  cp.critic_adam = r.adam();
  cp.master_seed = r.u64();
  cp.update_index = r.i64();
  cp.env_steps = r.i64();
  if (r.pos != data.size())
    throw ValidationError(path + ": trailing bytes after checkpoint payload");
  return cp;
}

namespace {

void dump_params(std::string& out, const std::string& prefix,
                 const ParameterSet& p) {
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LayerParams& lp = p.layers[l];
    out += prefix + ".layer" + std::to_string(l) + " " +
           std::to_string(lp.out) + "x" + std::to_string(lp.in) + "\n";
    for (std::size_t i = 0; i < lp.w.size(); ++i)
      out += format_double(lp.w[i]) + (i + 1 == lp.w.size() ? "\n" : " ");
    for (std::size_t i = 0; i < lp.b.size(); ++i)
      out += format_double(lp.b[i]) + (i + 1 == lp.b.size() ? "\n" : " ");
  }
}

void dump_vec(std::string& out, const std::string& name,
              const std::vector<double>& v) {
  out += name + "\n";
  for (std::size_t i = 0; i < v.size(); ++i)
    out += format_double(v[i]) + (i + 1 == v.size() ? "\n" : " ");
  if (v.empty()) out += "\n";
}

void dump_adam(std::string& out, const std::string& name, const AdamState& a) {
  out += name + ".t = " + std::to_string(a.t) + "\n";
  out += name + ".lr = " + format_double(a.cfg.lr) + "\n";
  dump_params(out, name + ".m", a.m);
  dump_params(out, name + ".v", a.v);
}

}  // namespace

std::string checkpoint_text_dump(const Checkpoint& cp) {
  std::string out;
  out += "format = walklab-checkpoint v" + std::to_string(kVersion) + "\n";
  out += "master_seed = " + std::to_string(cp.master_seed) + "\n";
  out += "update_index = " + std::to_string(cp.update_index) + "\n";
  out += "env_steps = " + std::to_string(cp.env_steps) + "\n";
  out += "[config]\n" + cp.config_text;
  out += "[layout]\n" + cp.layout_text;
  if (!cp.model_text.empty()) out += "[model]\n" + cp.model_text;
  out += "[observations]\n" + cp.obs_layout.describe();
  out += "[actor]\n";
  dump_params(out, "actor", cp.policy.params);
  dump_vec(out, "log_std", cp.policy.log_std);
  dump_vec(out, "action_scale", cp.policy.action_scale);
  out += "[critic]\n";
  dump_params(out, "critic", cp.critic.params);
  out += "[optimizer]\n";
  dump_adam(out, "actor_adam", cp.actor_adam);
  out += "log_std_adam.t = " + std::to_string(cp.log_std_adam.t) + "\n";
  dump_vec(out, "log_std_adam.m", cp.log_std_adam.m);
  dump_vec(out, "log_std_adam.v", cp.log_std_adam.v);
  dump_adam(out, "critic_adam", cp.critic_adam);
  return out;
}

void verify_compatible(const Checkpoint& cp, const Environment& env) {
  if (!(cp.obs_layout == env.obs_layout()))
    throw ValidationError(
        "checkpoint/environment observation schema mismatch:\ncheckpoint:\n" +
        cp.obs_layout.describe() + "environment:\n" +
        env.obs_layout().describe());
  if (cp.policy.action_dim() != env.action_dim())
    throw ValidationError("checkpoint action dim " +
                          std::to_string(cp.policy.action_dim()) +
                          " != environment action dim " +
                          std::to_string(env.action_dim()));
}

std::unique_ptr<Environment> make_environment(const Checkpoint& cp,
                                              const EnvironmentLayout& layout) {
  const ExperimentConfig cfg = cp.config();
  if (cfg.env == "biped" && !cp.model_text.empty()) {
    const BipedModel model = parse_biped_model(cp.model_text);
    if (cfg.reset_jitter)
      return std::make_unique<BipedEnv>(model, layout, *cfg.reset_jitter);
    return std::make_unique<BipedEnv>(model, layout);
  }
  return make_environment(cfg, layout);
}

}  // namespace walklab

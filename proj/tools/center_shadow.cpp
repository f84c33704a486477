// Command-line front end: derived-constant tables, pseudo-orbit generation,
// shadowing runs with oracle comparison, and experiment probes.
//
// Exit codes: 0 success, 2 configuration or input error, 3 epsilon budget
// exceeded, 4 runtime verification failure (bound or oracle disagreement,
// decoration mismatch, failed probe, non-closing periodic orbit).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "centershadow/experiments.hpp"
#include "centershadow/rng.hpp"
#include "centershadow/shadowing.hpp"

using nlohmann::json;
using namespace cshadow;

namespace {

std::string dstr(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Common {
  std::string model = "pillowcase";
  std::vector<long long> matrix = {2, 1, 1, 1};
  double theta = 0.25;
  double mu = 0.02;
  double delta0 = 0.125;
  double delta1 = 0.015625;
  double eta = 0.01;
  std::uint64_t seed = 1;
  std::string out;
  std::string output_dir;
  std::string config_path;

  CLI::Option* o_model = nullptr;
  CLI::Option* o_matrix = nullptr;
  CLI::Option* o_theta = nullptr;
  CLI::Option* o_mu = nullptr;
  CLI::Option* o_delta0 = nullptr;
  CLI::Option* o_delta1 = nullptr;
  CLI::Option* o_eta = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_out = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
  c.o_model = cmd->add_option("--model", c.model, "trivial or pillowcase");
  c.o_matrix = cmd->add_option("--matrix", c.matrix, "a,b,c,d integer entries")
                   ->delimiter(',')
                   ->expected(4);
  c.o_theta = cmd->add_option("--theta", c.theta, "fiber rotation");
  c.o_mu = cmd->add_option("--mu", c.mu, "expansivity scale");
  c.o_delta0 = cmd->add_option("--delta0", c.delta0, "chart radius");
  c.o_delta1 = cmd->add_option("--delta1", c.delta1, "product radius");
  c.o_eta = cmd->add_option("--eta", c.eta, "tracking quality");
  c.o_seed = cmd->add_option("--seed", c.seed, "random seed");
  c.o_out = cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--config", c.config_path,
                  "key = value file; explicit flags win");
}

// Flat key-value text: one `key = value` per line, '#' comments. Values do
// not contain spaces except the matrix entry, which is comma-separated.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::BadInput, "cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string key, eq, val;
    std::istringstream ls(line);
    if (!(ls >> key)) continue;
    ls >> eq;
    if (eq != "=") {
      val = eq;
    } else if (!(ls >> val)) {
      throw Error(Err::BadInput, "config key without value: " + key);
    }
    kv[key] = val;
  }
  return kv;
}

// Config file fills in whatever the command line left untouched.
void apply_config(Common& c, CLI::Option* extra_opt, double* extra_val,
                  const char* extra_key) {
  if (c.config_path.empty()) return;
  auto kv = read_config(c.config_path);
  auto take = [&](const char* key, CLI::Option* opt, auto setter) {
    auto it = kv.find(key);
    if (it == kv.end() || (opt && opt->count() > 0)) return;
    setter(it->second);
  };
  take("model", c.o_model, [&](const std::string& v) { c.model = v; });
  take("matrix", c.o_matrix, [&](const std::string& v) {
    std::vector<long long> mm;
    std::istringstream ms(v);
    std::string tok;
    while (std::getline(ms, tok, ',')) mm.push_back(std::stoll(tok));
    if (mm.size() != 4)
      throw Error(Err::BadInput, "matrix needs four entries: " + v);
    c.matrix = mm;
  });
  take("theta", c.o_theta, [&](const std::string& v) { c.theta = std::stod(v); });
  take("mu", c.o_mu, [&](const std::string& v) { c.mu = std::stod(v); });
  take("delta0", c.o_delta0,
       [&](const std::string& v) { c.delta0 = std::stod(v); });
  take("delta1", c.o_delta1,
       [&](const std::string& v) { c.delta1 = std::stod(v); });
  take("eta", c.o_eta, [&](const std::string& v) { c.eta = std::stod(v); });
  take("seed", c.o_seed,
       [&](const std::string& v) { c.seed = std::stoull(v); });
  take("output_dir", nullptr,
       [&](const std::string& v) { c.output_dir = v; });
  if (extra_opt && extra_val)
    take(extra_key, extra_opt,
         [&](const std::string& v) { *extra_val = std::stod(v); });
}

ModelSystem build_model(const Common& c) {
  Mat2 A{c.matrix[0], c.matrix[1], c.matrix[2], c.matrix[3]};
  Splitting S = eigen_split(A);
  Constants K = derive_constants(S, c.mu, c.delta0, c.delta1);
  return make_model(model_from_name(c.model), A, c.theta, K);
}

// CENTER_SHADOW_OUT wins over --out; --out wins over output_dir/<name>;
// empty resolution means stdout.
std::string resolve_out(const Common& c, const char* default_name) {
  if (const char* env = std::getenv("CENTER_SHADOW_OUT")) return env;
  if (!c.out.empty()) return c.out;
  if (!c.output_dir.empty()) return c.output_dir + "/" + default_name;
  return "";
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Err::BadInput, "cannot write " + path);
  out << text;
}

int exit_code_for(const Error& e) {
  switch (e.code) {
    case Err::BudgetExceeded:
      return 3;
    case Err::DecorationMismatch:
    case Err::NotPeriodic:
    case Err::NoPeriodicLeafFound:
      return 4;
    default:
      return 2;
  }
}

int cmd_constants(const Common& c) {
  ModelSystem m = build_model(c);
  json j;
  j["matrix"] = {m.A.a, m.A.b, m.A.c, m.A.d};
  j["model"] = model_name(m.kind);
  j["lambda_u"] = dstr(m.S.lambda_u);
  j["lambda_s"] = dstr(m.S.lambda_s);
  j["eigen_sign"] = m.S.eigen_sign;
  j["C"] = dstr(m.S.C);
  j["alpha"] = dstr(m.S.alpha);
  j["N"] = m.K.N;
  j["mu"] = dstr(m.K.mu);
  j["delta0"] = dstr(m.K.delta0);
  j["delta1"] = dstr(m.K.delta1);
  j["eta"] = dstr(c.eta);
  j["epsilon_budget"] = dstr(epsilon_budget(m.S, m.K, c.eta));
  emit(resolve_out(c, "constants.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_gen_orbit(const Common& c, int len, double jump) {
  ModelSystem m = build_model(c);
  PseudoOrbit po = make_pseudo_orbit(m, c.seed, len, jump, c.eta);
  DecoratedPseudoOrbit dpo = auto_decorate(m, po);
  emit(resolve_out(c, "orbit.txt"), orbit_to_text(m, dpo));
  return 0;
}

int cmd_shadow(const Common& c, int len, double jump, const std::string& in) {
  ModelSystem m = build_model(c);
  DecoratedPseudoOrbit dpo;
  if (!in.empty()) {
    std::ifstream f(in, std::ios::binary);
    if (!f) throw Error(Err::BadInput, "cannot read orbit file " + in);
    std::stringstream ss;
    ss << f.rdbuf();
    dpo = orbit_from_text(ss.str(), &m); // file header defines the model
  } else {
    dpo = auto_decorate(m, make_pseudo_orbit(m, c.seed, len, jump, c.eta));
  }

  ShadowTrace t = shadow(m, dpo, c.eta);
  CenterLeaf check = shadow_oracle(m, dpo);
  double oracle_gap = leaf_distance(m, t.shadow, check);
  double max_step = 0;
  for (double d : t.per_step_distance) max_step = std::max(max_step, d);
  bool bound_ok = max_step <= t.bound + 1e-12;
  bool oracle_ok = oracle_gap <= 1e-9;

  std::string csv_path = resolve_out(c, "trace.csv");
  emit(csv_path, trace_to_csv(t));

  json report;
  report["rows"] = dpo.base.leaves.size();
  report["epsilon"] = dstr(dpo.base.epsilon);
  report["eps_decorated"] = dstr(t.eps_decorated);
  report["bound"] = dstr(t.bound);
  report["max_step_distance"] = dstr(max_step);
  report["oracle_gap"] = dstr(oracle_gap);
  report["cap_hit"] = t.cap_hit;
  report["shadow"] = json{{"x", dstr(t.shadow.base.x)},
                          {"y", dstr(t.shadow.base.y)}};
  report["ok"] = bound_ok && oracle_ok;
  std::string rep = report.dump(2) + "\n";
  // The report shares stdout with nothing: when the CSV already went to
  // stdout the report moves to stderr.
  std::fputs(rep.c_str(), csv_path.empty() ? stderr : stdout);

  return (bound_ok && oracle_ok) ? 0 : 4;
}

struct ExpFlags {
  int trials = -1;
  int horizon = -1;
  double eps = -1;
  int len = 10;
};

int cmd_exp(const Common& c, const std::string& probe, const ExpFlags& f) {
  ModelSystem m = build_model(c);
  Verdict v;
  if (probe == "expansivity") {
    v = expansivity_probe(m, f.trials < 0 ? 100 : f.trials,
                          f.horizon < 0 ? 50 : f.horizon, c.seed);
  } else if (probe == "homoclinic") {
    v = homoclinic_pair(m, f.eps < 0 ? 0.05 : f.eps,
                        f.horizon < 0 ? 50 : f.horizon);
  } else if (probe == "asymptotic") {
    int B = f.len;
    // Built-in pair: constant sheet against alternating sheet, so every
    // half-window holds both a matching and a mismatching block.
    std::vector<int> mu_seq(B, 1), nu_seq(B);
    for (int i = 0; i < B; ++i) nu_seq[i] = i % 2 ? -1 : 1;
    v = asymptotic_non_stable(m, mu_seq, nu_seq,
                              c.o_eta->count() ? c.eta : 0.05);
  } else if (probe == "intersection") {
    double arc = f.eps < 0 ? m.K.mu * 1024.0 : f.eps;
    v = intersection_count(m, f.trials < 0 ? 1000 : f.trials, arc, c.seed);
  } else if (probe == "plaque") {
    v = plaque_expansivity_probe(m, f.trials < 0 ? 100 : f.trials, c.eta,
                                 f.horizon < 0 ? 500 : f.horizon, c.seed);
  } else if (probe == "growth") {
    Rng rng(c.seed);
    v = cs_growth_probe(m, rng.point(), f.horizon < 0 ? 16 : f.horizon);
  } else if (probe == "periodic-density") {
    v = periodic_density_probe(m, f.trials < 0 ? 100 : f.trials,
                               f.eps < 0 ? 0.02 : f.eps, c.seed);
  } else {
    throw Error(Err::BadInput, "unknown probe: " + probe);
  }
  emit(resolve_out(c, (v.name + ".json").c_str()), verdict_to_json(v));
  return v.passed ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"uniformly compact center foliations: shadowing and probes"};
  app.require_subcommand(1);

  Common c_sh, c_exp, c_con, c_gen;

  CLI::App* sh = app.add_subcommand("shadow", "trace a pseudo-orbit shadow");
  add_common(sh, c_sh);
  int sh_len = 100;
  double sh_jump = 1e-4;
  std::string sh_in;
  CLI::Option* o_len = sh->add_option("--len", sh_len, "orbit length");
  CLI::Option* o_jump = sh->add_option("--jump", sh_jump, "kick radius");
  sh->add_option("--in", sh_in, "read a decorated orbit file instead");

  CLI::App* ex = app.add_subcommand("exp", "run an experiment probe");
  add_common(ex, c_exp);
  std::string probe;
  ExpFlags ef;
  ex->add_option("probe", probe,
                 "expansivity|homoclinic|asymptotic|intersection|plaque|"
                 "growth|periodic-density")
      ->required();
  ex->add_option("--trials", ef.trials, "trial count");
  ex->add_option("--horizon", ef.horizon, "step horizon");
  ex->add_option("--eps", ef.eps, "probe scale (pair bound, arc, delta)");
  ex->add_option("--len", ef.len, "asymptotic block count");

  CLI::App* co = app.add_subcommand("constants", "print the derived table");
  add_common(co, c_con);

  CLI::App* ge = app.add_subcommand("gen-orbit", "emit a decorated orbit file");
  add_common(ge, c_gen);
  int ge_len = 100;
  double ge_jump = 1e-4;
  CLI::Option* go_len = ge->add_option("--len", ge_len, "orbit length");
  CLI::Option* go_jump = ge->add_option("--jump", ge_jump, "kick radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sh->parsed()) {
      apply_config(c_sh, o_jump, &sh_jump, "epsilon");
      if (auto kv = c_sh.config_path.empty()
                        ? std::map<std::string, std::string>{}
                        : read_config(c_sh.config_path);
          kv.count("len") && o_len->count() == 0)
        sh_len = std::stoi(kv.at("len"));
      return cmd_shadow(c_sh, sh_len, sh_jump, sh_in);
    }
    if (ex->parsed()) {
      apply_config(c_exp, nullptr, nullptr, nullptr);
      return cmd_exp(c_exp, probe, ef);
    }
    if (co->parsed()) {
      apply_config(c_con, nullptr, nullptr, nullptr);
      return cmd_constants(c_con);
    }
    if (ge->parsed()) {
      apply_config(c_gen, go_jump, &ge_jump, "epsilon");
      if (auto kv = c_gen.config_path.empty()
                        ? std::map<std::string, std::string>{}
                        : read_config(c_gen.config_path);
          kv.count("len") && go_len->count() == 0)
        ge_len = std::stoi(kv.at("len"));
      return cmd_gen_orbit(c_gen, ge_len, ge_jump);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

// qwlab: seeded, file-driven experiment runner over the walk library.
//
// Every subcommand writes one data table (CSV or JSON) plus a metadata
// sidecar, and prints its scalar findings to stdout. A stored configuration
// replays with `qwlab run --config FILE`; flags given after --config override
// stored values. Exit codes: 0 success, 1 bad input, 2 runtime failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwlab/channels.hpp"
#include "qwlab/coin.hpp"
#include "qwlab/ctqw.hpp"
#include "qwlab/density.hpp"
#include "qwlab/many_body.hpp"
#include "qwlab/observables.hpp"
#include "qwlab/symmetry.hpp"
#include "qwlab/walk.hpp"

#ifndef QWLAB_VERSION
#define QWLAB_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace qwlab;

// Angles are degrees everywhere on this surface; radians only inside.
struct Options {
  double theta = 45.0;
  double xi = 0.0;
  double zeta = 0.0;
  std::string family = "reflective";
  int steps = 100;
  std::string init = "symmetric";
  double delta = 0.0;
  double eta = 0.0;
  int origin = 0;
  std::string topology = "line";
  int sites = 51;
  int variant = 0;
  double phi = 0.0;
  std::string channel = "none";
  double p = 0.1;
  double gamma0 = 0.05;
  double temperature = 0.0;
  double dt = 1.0;
  std::vector<double> p_values;
  std::string op = "Z";
  double beta = 0.0;
  int tau_max = 5;
  int bins = 4;
  double gamma = 0.5;
  double time = 10.0;
  int t_max = 200;
  double epsilon = 0.05;
  std::int64_t average_steps = 0;
  int particles = 40;
  std::string mode = "open";
  std::vector<double> thetas;

  std::uint64_t seed = 1;
  std::string output;
  std::string format = "csv";
  std::string config_path;
};

// Noisy runs square the state size; keep accidental multi-hour jobs out.
constexpr int kDensityStepCap = 300;

struct ParamEntry {
  const char* name;
  const char* type;  // number | integer | string | array
  const char* descr;
  std::function<CLI::Option*(CLI::App&, Options&)> bind;
  std::function<json(const Options&)> value;
};

CLI::Option* last_wins(CLI::Option* opt) {
  return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

const std::vector<ParamEntry>& param_table() {
  static const std::vector<ParamEntry> table = {
      {"theta", "number", "coin angle theta in degrees",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--theta", o.theta, "coin angle theta in degrees"));
       },
       [](const Options& o) { return json(o.theta); }},
      {"xi", "number", "coin angle xi in degrees",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--xi", o.xi, "coin angle xi in degrees"));
       },
       [](const Options& o) { return json(o.xi); }},
      {"zeta", "number", "coin angle zeta in degrees",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--zeta", o.zeta, "coin angle zeta in degrees"));
       },
       [](const Options& o) { return json(o.zeta); }},
      {"family", "string", "coin family: special | reflective",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--family", o.family,
                                       "coin family: special | reflective"));
       },
       [](const Options& o) { return json(o.family); }},
      {"steps", "integer", "number of walk steps",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--steps", o.steps, "number of walk steps"));
       },
       [](const Options& o) { return json(o.steps); }},
      {"init", "string",
       "initial state: zero | symmetric | custom (walks), mi | sf (manybody)",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option(
             "--init", o.init,
             "initial state: zero | symmetric | custom (walks), mi | sf (manybody)"));
       },
       [](const Options& o) { return json(o.init); }},
      {"delta", "number", "custom init: coin angle delta in degrees",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--delta", o.delta,
                                       "custom init: coin angle delta in degrees"));
       },
       [](const Options& o) { return json(o.delta); }},
      {"eta", "number", "custom init: coin phase eta in degrees",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--eta", o.eta,
                                       "custom init: coin phase eta in degrees"));
       },
       [](const Options& o) { return json(o.eta); }},
      {"origin", "integer", "start site",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--origin", o.origin, "start site"));
       },
       [](const Options& o) { return json(o.origin); }},
      {"topology", "string", "lattice: line | cycle",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--topology", o.topology, "lattice: line | cycle"));
       },
       [](const Options& o) { return json(o.topology); }},
      {"sites", "integer", "cycle site count",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--sites,-n", o.sites, "cycle site count"));
       },
       [](const Options& o) { return json(o.sites); }},
      {"variant", "integer", "coin phase deformation index, 0 = none, 1..4",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option(
             "--variant", o.variant, "coin phase deformation index, 0 = none, 1..4"));
       },
       [](const Options& o) { return json(o.variant); }},
      {"phi", "number", "deformation phase in degrees",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--phi", o.phi, "deformation phase in degrees"));
       },
       [](const Options& o) { return json(o.phi); }},
      {"channel", "string",
       "noise: none | bit-flip | phase-flip | amplitude-damping | ad-flip | gad | gad-flip",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option(
             "--channel", o.channel,
             "noise: none | bit-flip | phase-flip | amplitude-damping | ad-flip | gad | gad-flip"));
       },
       [](const Options& o) { return json(o.channel); }},
      {"p", "number", "channel strength",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--p", o.p, "channel strength"));
       },
       [](const Options& o) { return json(o.p); }},
      {"gamma0", "number", "thermal channel coupling",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--gamma0", o.gamma0, "thermal channel coupling"));
       },
       [](const Options& o) { return json(o.gamma0); }},
      {"temperature", "number", "thermal channel bath temperature",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--temperature", o.temperature,
                                       "thermal channel bath temperature"));
       },
       [](const Options& o) { return json(o.temperature); }},
      {"delta-t", "number", "thermal channel step duration",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--delta-t", o.dt, "thermal channel step duration"));
       },
       [](const Options& o) { return json(o.dt); }},
      {"p-values", "array", "channel strengths to sweep",
       [](CLI::App& c, Options& o) {
         return c.add_option("--p-values", o.p_values, "channel strengths to sweep");
       },
       [](const Options& o) { return json(o.p_values); }},
      {"op", "string", "symmetry insertion: Z | X | PRX | phi | G",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--op", o.op,
                                       "symmetry insertion: Z | X | PRX | phi | G"));
       },
       [](const Options& o) { return json(o.op); }},
      {"beta", "number", "insertion phase in degrees (phi and G ops)",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--beta", o.beta,
                                       "insertion phase in degrees (phi and G ops)"));
       },
       [](const Options& o) { return json(o.beta); }},
      {"tau-max", "integer", "number of cycle turns to sample",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--tau-max", o.tau_max,
                                       "number of cycle turns to sample"));
       },
       [](const Options& o) { return json(o.tau_max); }},
      {"bins", "integer", "coherence separation bins",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--bins", o.bins, "coherence separation bins"));
       },
       [](const Options& o) { return json(o.bins); }},
      {"gamma", "number", "continuous-time hopping rate",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--gamma", o.gamma, "continuous-time hopping rate"));
       },
       [](const Options& o) { return json(o.gamma); }},
      {"time", "number", "continuous evolution time",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--time", o.time, "continuous evolution time"));
       },
       [](const Options& o) { return json(o.time); }},
      {"t-max", "integer", "largest step count in the series",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--t-max", o.t_max,
                                       "largest step count in the series"));
       },
       [](const Options& o) { return json(o.t_max); }},
      {"epsilon", "number", "mixing threshold on total variation",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--epsilon", o.epsilon,
                                       "mixing threshold on total variation"));
       },
       [](const Options& o) { return json(o.epsilon); }},
      {"average-steps", "integer",
       "fixed averaging horizon; 0 searches for the mixing time",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option(
             "--average-steps", o.average_steps,
             "fixed averaging horizon; 0 searches for the mixing time"));
       },
       [](const Options& o) { return json(o.average_steps); }},
      {"particles", "integer", "walker count",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--particles,-m", o.particles, "walker count"));
       },
       [](const Options& o) { return json(o.particles); }},
      {"mode", "string", "entanglement geometry: open | closed",
       [](CLI::App& c, Options& o) {
         return last_wins(c.add_option("--mode", o.mode,
                                       "entanglement geometry: open | closed"));
       },
       [](const Options& o) { return json(o.mode); }},
      {"thetas", "array", "theta grid in degrees (2+ values switch to a scan)",
       [](CLI::App& c, Options& o) {
         return c.add_option("--thetas", o.thetas,
                             "theta grid in degrees (2+ values switch to a scan)");
       },
       [](const Options& o) { return json(o.thetas); }},
  };
  return table;
}

const ParamEntry& param_entry(const std::string& name) {
  for (const ParamEntry& e : param_table())
    if (name == e.name) return e;
  throw std::logic_error("unregistered parameter: " + name);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> notes;
};

// ---------------------------------------------------------------------------
// shared builders

CoinParams coin_params(const Options& o) {
  return {deg2rad(o.xi), deg2rad(o.theta), deg2rad(o.zeta)};
}

CoinFamily coin_family(const Options& o) {
  if (o.family == "special") return CoinFamily::special;
  if (o.family == "reflective") return CoinFamily::reflective;
  throw std::invalid_argument("unknown coin family: " + o.family);
}

Mat2 build_coin(const Options& o) {
  Mat2 c = make_coin(coin_family(o), coin_params(o));
  if (o.variant != 0)
    c = coin_variant(c, phase_variant_from_index(o.variant), deg2rad(o.phi));
  return c;
}

InitialSpec build_init(const Options& o) {
  if (o.init == "zero") return InitialSpec::coin_zero(o.origin);
  if (o.init == "symmetric") return InitialSpec::symmetric(o.origin);
  if (o.init == "custom")
    return {deg2rad(o.delta), deg2rad(o.eta), o.origin};
  throw std::invalid_argument("unknown initial state: " + o.init);
}

Topology build_topology(const Options& o, int line_budget) {
  if (o.topology == "line") return Topology::line(line_budget);
  if (o.topology == "cycle") return Topology::cycle(o.sites);
  throw std::invalid_argument("unknown topology: " + o.topology);
}

std::optional<KrausChannel> build_channel(const Options& o) {
  if (o.channel == "none") return std::nullopt;
  if (o.channel == "bit-flip") return bit_flip(o.p);
  if (o.channel == "phase-flip") return phase_flip(o.p);
  if (o.channel == "amplitude-damping") return amplitude_damping(o.p);
  if (o.channel == "ad-flip") return then_pauli_x(amplitude_damping(o.p));
  if (o.channel == "gad")
    return generalized_amplitude_damping({o.gamma0, o.temperature, o.dt});
  if (o.channel == "gad-flip")
    return then_pauli_x(
        generalized_amplitude_damping({o.gamma0, o.temperature, o.dt}));
  throw std::invalid_argument("unknown channel: " + o.channel);
}

SymmetryOp build_op(const Options& o) {
  if (o.op == "Z" || o.op == "z") return SymmetryOp::z();
  if (o.op == "X" || o.op == "x") return SymmetryOp::x();
  if (o.op == "PRX" || o.op == "prx") return SymmetryOp::prx();
  if (o.op == "phi" || o.op == "Phi")
    return SymmetryOp::phase_shift(deg2rad(o.beta));
  if (o.op == "G" || o.op == "g") return SymmetryOp::phase_gate(deg2rad(o.beta));
  throw std::invalid_argument("unknown symmetry op: " + o.op);
}

void check_density_cap(int steps) {
  if (steps > kDensityStepCap)
    throw std::invalid_argument("noisy runs are capped at " +
                                std::to_string(kDensityStepCap) + " steps");
}

Distribution run_distribution(const Options& o, const Topology& topo) {
  const StepPlan plan = StepPlan::plain(build_coin(o));
  const InitialSpec ini = build_init(o);
  const std::optional<KrausChannel> ch = build_channel(o);
  if (ch) {
    check_density_cap(o.steps);
    DensityState rho = init_density(ini, topo);
    evolve_density_in_place(rho, plan, &*ch, o.steps);
    return position_distribution(rho);
  }
  WalkerState s = init_pure(ini, topo);
  evolve_in_place(s, plan, o.steps);
  return position_distribution(s);
}

void append_moment_notes(Table& t, const Distribution& d) {
  const MomentSummary m = moments(d);
  t.notes.emplace_back("mean", m.mean);
  t.notes.emplace_back("variance", m.variance);
  t.notes.emplace_back("sigma", m.std);
  t.notes.emplace_back("total", d.total());
}

// ---------------------------------------------------------------------------
// experiments

Table run_walk_line(const Options& o) {
  const Distribution d = run_distribution(o, Topology::line(o.steps));
  Table t;
  t.columns = {"site", "probability"};
  for (int slot = 0; slot < d.sites(); ++slot)
    t.rows.push_back({double(d.site_at(slot)), d.p[size_t(slot)]});
  append_moment_notes(t, d);
  return t;
}

Table run_walk_cycle(const Options& o) {
  const Distribution d = run_distribution(o, Topology::cycle(o.sites));
  Table t;
  t.columns = {"site", "probability"};
  for (int slot = 0; slot < d.sites(); ++slot)
    t.rows.push_back({double(d.site_at(slot)), d.p[size_t(slot)]});
  t.notes.emplace_back("total", d.total());
  return t;
}

Table run_ctqw(const Options& o) {
  Table t;
  t.columns = {"site", "probability"};
  if (o.topology == "cycle") {
    const Generator gen = cycle_generator(o.sites, o.gamma);
    std::vector<cplx> psi0(size_t(o.sites), cplx(0));
    psi0[0] = 1.0;
    const std::vector<cplx> psi = evolve_ct(psi0, gen, o.time);
    double total = 0;
    for (int j = 0; j < o.sites; ++j) {
      const double pj = std::norm(psi[size_t(j)]);
      t.rows.push_back({double(j), pj});
      total += pj;
    }
    t.notes.emplace_back("total", total);
    return t;
  }
  if (o.topology != "line")
    throw std::invalid_argument("unknown topology: " + o.topology);
  const Distribution d = ctqw_line_distribution(o.gamma, o.time);
  for (int slot = 0; slot < d.sites(); ++slot)
    t.rows.push_back({double(d.site_at(slot)), d.p[size_t(slot)]});
  append_moment_notes(t, d);
  return t;
}

Table run_noise_sweep(const Options& o) {
  if (o.channel != "bit-flip" && o.channel != "phase-flip" &&
      o.channel != "amplitude-damping")
    throw std::invalid_argument(
        "noise-sweep needs a strength-parametrized channel "
        "(bit-flip | phase-flip | amplitude-damping)");
  check_density_cap(o.steps);
  std::vector<double> ps = o.p_values;
  if (ps.empty()) ps = {0.0, 0.05, 0.1, 0.5};

  const StepPlan plan = StepPlan::plain(build_coin(o));
  const InitialSpec ini = build_init(o);
  const Distribution ref = classical_walk_reference(o.steps);

  Table t;
  t.columns = {"p", "sigma", "variance", "tv_classical"};
  for (double p : ps) {
    Options local = o;
    local.p = p;
    const std::optional<KrausChannel> ch = build_channel(local);
    DensityState rho = init_density(ini, Topology::line(o.steps));
    evolve_density_in_place(rho, plan, &*ch, o.steps);
    const Distribution d = position_distribution(rho);
    double tv = 0;
    for (int slot = 0; slot < d.sites(); ++slot) {
      const int rslot = d.site_at(slot) - ref.base;
      const double r = (rslot >= 0 && rslot < ref.sites())
                           ? ref.p[size_t(rslot)]
                           : 0.0;
      tv += std::abs(d.p[size_t(slot)] - r);
    }
    const MomentSummary m = moments(d);
    t.rows.push_back({p, m.std, m.variance, 0.5 * tv});
  }
  t.notes.emplace_back("steps", double(o.steps));
  return t;
}

Table run_symmetry(const Options& o) {
  const std::optional<KrausChannel> ch = build_channel(o);
  if (ch) check_density_cap(o.steps);
  const SymmetryReport rep = symmetry_report(
      coin_params(o), coin_family(o), build_op(o), build_topology(o, o.steps),
      o.steps, ch ? &*ch : nullptr, build_init(o));
  Table t;
  t.columns = {"site", "baseline", "augmented"};
  for (int slot = 0; slot < rep.baseline.sites(); ++slot)
    t.rows.push_back({double(rep.baseline.site_at(slot)),
                      rep.baseline.p[size_t(slot)],
                      rep.augmented.p[size_t(slot)]});
  t.notes.emplace_back("kolmogorov", rep.kolmogorov);
  t.notes.emplace_back("symmetric", rep.symmetric ? 1.0 : 0.0);
  return t;
}

Table run_cycle_turns(const Options& o) {
  const std::optional<KrausChannel> ch = build_channel(o);
  if (ch) check_density_cap(o.tau_max * ((o.sites - 1) / 2));
  const std::vector<TurnPoint> series =
      turn_series(coin_params(o), coin_family(o), build_op(o), o.sites,
                  o.tau_max, ch ? &*ch : nullptr, o.bins, build_init(o));
  Table t;
  t.columns = {"tau",     "steps",   "d_noiseless",
               "d_noisy", "d_ratio", "coherence_ratio_far",
               "coherence_ratio_total"};
  for (const TurnPoint& pt : series)
    t.rows.push_back({double(pt.tau), double(pt.steps), pt.d_noiseless,
                      pt.d_noisy, pt.d_ratio, pt.coherence_ratio_far,
                      pt.coherence_ratio_total});
  t.notes.emplace_back("turn_steps", double((o.sites - 1) / 2));
  return t;
}

Table run_recurrence(const Options& o) {
  const Mat2 coin = build_coin(o);
  const InitialSpec ini = build_init(o);
  const Topology topo = build_topology(o, o.t_max);
  Table t;
  t.columns = {"t", "return_probability"};
  for (int step = 1; step <= o.t_max; ++step)
    t.rows.push_back({double(step), recurrence_probability(coin, ini, topo, step)});
  t.notes.emplace_back("polya", polya_number(coin, ini, topo, o.t_max));
  return t;
}

Table run_mixing(const Options& o) {
  const Mat2 coin = build_coin(o);
  const InitialSpec ini = build_init(o);
  const Topology topo = Topology::cycle(o.sites);
  long horizon = long(o.average_steps);
  if (horizon <= 0) {
    const std::optional<long> found = mixing_time(coin, ini, topo, o.epsilon);
    if (!found)
      throw std::runtime_error("did not mix within the search cap");
    horizon = *found;
  }
  const Distribution avg = time_averaged_distribution(coin, ini, topo, horizon);
  Table t;
  t.columns = {"site", "averaged_probability"};
  for (int slot = 0; slot < avg.sites(); ++slot)
    t.rows.push_back({double(avg.site_at(slot)), avg.p[size_t(slot)]});
  t.notes.emplace_back("horizon", double(horizon));
  t.notes.emplace_back("tv_uniform", total_variation_from_uniform(avg));
  t.notes.emplace_back("max_dev_uniform", max_deviation_from_uniform(avg));
  return t;
}

Table run_manybody(const Options& o) {
  EnsembleSpec spec;
  if (o.init == "mi")
    spec.particles = mi_initial(o.particles);
  else if (o.init == "sf")
    spec.particles = sf_initial(o.particles);
  else
    throw std::invalid_argument("manybody init must be mi or sf");
  spec.topology = o.topology == "cycle" ? TopologyKind::cycle : TopologyKind::line;
  if (o.topology != "line" && o.topology != "cycle")
    throw std::invalid_argument("unknown topology: " + o.topology);
  spec.cycle_sites = o.sites;
  spec.coin = build_coin(o);
  spec.noise = build_channel(o);
  spec.steps = o.steps;
  if (spec.noise) check_density_cap(o.steps);

  const LatticeProfile prof = evolve_ensemble(spec);
  const std::vector<double> n = density_profile(prof);
  Table t;
  t.columns = {"site", "density"};
  double total = 0, peak = 0;
  for (int slot = 0; slot < prof.sites(); ++slot) {
    t.rows.push_back({double(prof.site_at(slot)), n[size_t(slot)]});
    total += n[size_t(slot)];
    peak = std::max(peak, n[size_t(slot)]);
  }

  const double m = double(o.particles);
  double mu = 0;
  for (int slot = 0; slot < prof.sites(); ++slot)
    mu += prof.site_at(slot) * n[size_t(slot)] / m;
  double var = 0, third = 0;
  for (int slot = 0; slot < prof.sites(); ++slot) {
    const double dj = prof.site_at(slot) - mu;
    var += dj * dj * n[size_t(slot)] / m;
    third += dj * dj * dj * n[size_t(slot)] / m;
  }
  const double sigma = std::sqrt(var);
  int half_width = 0;
  double outside = 0;
  const double edge =
      m / 2.0 + o.steps * std::cos(deg2rad(o.theta));
  for (int slot = 0; slot < prof.sites(); ++slot) {
    const int site = prof.site_at(slot);
    if (n[size_t(slot)] >= 0.01 * peak)
      half_width = std::max(half_width, std::abs(site));
    if (std::abs(site) > edge) outside += n[size_t(slot)];
  }
  double block_mean = 0, block_dev = 0;
  int block_count = 0;
  for (int slot = 0; slot < prof.sites(); ++slot)
    if (std::abs(prof.site_at(slot)) <= o.particles / 2) {
      block_mean += n[size_t(slot)];
      ++block_count;
    }
  if (block_count > 0) block_mean /= block_count;
  for (int slot = 0; slot < prof.sites(); ++slot)
    if (std::abs(prof.site_at(slot)) <= o.particles / 2 && block_mean > 0)
      block_dev = std::max(block_dev,
                           std::abs(n[size_t(slot)] - block_mean) / block_mean);

  t.notes.emplace_back("total", total);
  t.notes.emplace_back("mean", mu);
  t.notes.emplace_back("sigma", sigma);
  t.notes.emplace_back("skew", sigma > 0 ? third / (sigma * sigma * sigma) : 0.0);
  t.notes.emplace_back("support_half_width", double(half_width));
  t.notes.emplace_back("mass_outside_cone", outside / m);
  t.notes.emplace_back("block_uniformity_dev", block_dev);
  t.notes.emplace_back("entanglement", meyer_wallach_spatial(prof).value);
  return t;
}

Table run_entanglement(const Options& o) {
  Table t;
  if (o.mode == "closed") {
    const std::vector<double> series =
        closed_chain_entanglement(o.particles, build_coin(o), o.steps);
    t.columns = {"t", "entanglement"};
    for (size_t i = 0; i < series.size(); ++i)
      t.rows.push_back({double(i), series[i]});
    return t;
  }
  if (o.mode != "open")
    throw std::invalid_argument("entanglement mode must be open or closed");

  EnsembleSpec spec;
  spec.topology = TopologyKind::line;
  spec.steps = o.steps;
  auto make_particles = [&]() {
    if (o.init == "mi") return mi_initial(o.particles);
    if (o.init == "sf") return sf_initial(o.particles);
    throw std::invalid_argument("entanglement init must be mi or sf");
  };
  if (o.thetas.size() >= 2) {
    t.columns = {"theta", "entanglement"};
    for (double deg : o.thetas) {
      spec.particles = make_particles();
      spec.coin = make_coin(coin_family(o),
                            {deg2rad(o.xi), deg2rad(deg), deg2rad(o.zeta)});
      t.rows.push_back(
          {deg, meyer_wallach_spatial(evolve_ensemble(spec)).value});
    }
    return t;
  }
  spec.coin = build_coin(o);
  t.columns = {"t", "entanglement"};
  for (int step = 0; step <= o.steps; ++step) {
    spec.particles = make_particles();
    spec.steps = step;
    t.rows.push_back(
        {double(step), meyer_wallach_spatial(evolve_ensemble(spec)).value});
  }
  return t;
}

Table run_coin_entanglement(const Options& o) {
  if (o.channel != "none")
    throw std::invalid_argument("coin-entanglement runs pure walks only");
  const StepPlan plan = StepPlan::plain(build_coin(o));
  WalkerState s = init_pure(build_init(o), build_topology(o, o.steps));
  Table t;
  t.columns = {"t", "coin_entropy_bits"};
  t.rows.push_back({0.0, coin_position_entanglement(s)});
  for (int step = 1; step <= o.steps; ++step) {
    evolve_in_place(s, plan, 1);
    t.rows.push_back({double(step), coin_position_entanglement(s)});
  }
  return t;
}

struct Experiment {
  const char* name;
  const char* summary;
  std::vector<const char*> params;
  std::function<Table(const Options&)> run;
};

const std::vector<Experiment>& catalog() {
  static const std::vector<Experiment> experiments = {
      {"walk-line", "coined walk on a line; per-site probabilities",
       {"theta", "xi", "zeta", "family", "steps", "init", "delta", "eta",
        "origin", "variant", "phi", "channel", "p", "gamma0", "temperature",
        "delta-t"},
       run_walk_line},
      {"walk-cycle", "coined walk on a cycle; per-site probabilities",
       {"theta", "xi", "zeta", "family", "steps", "init", "delta", "eta",
        "origin", "sites", "variant", "phi", "channel", "p", "gamma0",
        "temperature", "delta-t"},
       run_walk_cycle},
      {"ctqw", "continuous-time walk; per-site probabilities",
       {"topology", "sites", "gamma", "time"}, run_ctqw},
      {"noise-sweep", "noisy-walk spread against the classical reference",
       {"channel", "p-values", "theta", "xi", "zeta", "family", "steps",
        "init", "delta", "eta", "origin"},
       run_noise_sweep},
      {"symmetry", "plain versus insertion-augmented walk distributions",
       {"op", "beta", "theta", "xi", "zeta", "family", "steps", "init",
        "delta", "eta", "origin", "topology", "sites", "channel", "p",
        "gamma0", "temperature", "delta-t"},
       run_symmetry},
      {"cycle-turns", "turnwise symmetry breakdown on an odd cycle",
       {"op", "beta", "theta", "xi", "zeta", "family", "sites", "tau-max",
        "bins", "init", "delta", "eta", "origin", "channel", "p", "gamma0",
        "temperature", "delta-t"},
       run_cycle_turns},
      {"recurrence", "origin return probability series and Polya number",
       {"theta", "xi", "zeta", "family", "topology", "sites", "t-max", "init",
        "delta", "eta", "origin"},
       run_recurrence},
      {"mixing", "time-averaged cycle distribution and mixing time",
       {"theta", "xi", "zeta", "family", "sites", "epsilon", "average-steps",
        "init", "delta", "eta", "origin"},
       run_mixing},
      {"manybody", "independent-walker lattice density profile",
       {"particles", "init", "theta", "xi", "zeta", "family", "steps",
        "topology", "sites", "channel", "p", "gamma0", "temperature",
        "delta-t"},
       run_manybody},
      {"entanglement", "lattice entanglement series or theta scan",
       {"mode", "particles", "init", "theta", "xi", "zeta", "family", "steps",
        "thetas"},
       run_entanglement},
      {"coin-entanglement", "coin-position entropy along a pure walk",
       {"theta", "xi", "zeta", "family", "steps", "init", "delta", "eta",
        "origin", "variant", "phi", "topology", "sites"},
       run_coin_entanglement},
  };
  return experiments;
}

const Experiment* find_experiment(const std::string& name) {
  for (const Experiment& e : catalog())
    if (name == e.name) return &e;
  return nullptr;
}

// ---------------------------------------------------------------------------
// output

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string resolve_output(const Options& o, const std::string& name) {
  if (!o.output.empty()) return o.output;
  const char* dir = std::getenv("QWLAB_OUTPUT_DIR");
  const std::string base = dir && *dir ? dir : ".";
  return base + "/" + name + (o.format == "json" ? ".json" : ".csv");
}

void write_data(const std::string& path, const Options& o, const Table& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  if (o.format == "json") {
    json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    json notes = json::object();
    for (const auto& [k, v] : t.notes) notes[k] = v;
    j["notes"] = notes;
    f << j.dump(2) << '\n';
  } else {
    for (size_t i = 0; i < t.columns.size(); ++i)
      f << (i ? "," : "") << t.columns[i];
    f << '\n';
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i)
        f << (i ? "," : "") << fmt(row[i]);
      f << '\n';
    }
  }
  f.flush();
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_sidecar(const std::string& data_path, const Options& o,
                   const Experiment& e, const Table& t, double wall_ms) {
  json params = json::object();
  for (const char* name : e.params) params[name] = param_entry(name).value(o);
  json notes = json::object();
  for (const auto& [k, v] : t.notes) notes[k] = v;
  json j = {{"experiment", e.name},
            {"version", QWLAB_VERSION},
            {"seed", o.seed},
            {"format", o.format},
            {"parameters", params},
            {"columns", t.columns},
            {"row_count", t.rows.size()},
            {"notes", notes},
            {"data_file", data_path},
            {"wall_time_ms", wall_ms}};
  const std::string path = data_path + ".meta.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << j.dump(2) << '\n';
  f.flush();
  if (!f) throw std::runtime_error("write failed: " + path);
}

json catalog_schema() {
  json out = json::array();
  const Options defaults;
  for (const Experiment& e : catalog()) {
    json params = json::array();
    for (const char* name : e.params) {
      const ParamEntry& entry = param_entry(name);
      params.push_back({{"name", entry.name},
                        {"type", entry.type},
                        {"default", entry.value(defaults)},
                        {"description", entry.descr}});
    }
    out.push_back(
        {{"name", e.name}, {"summary", e.summary}, {"parameters", params}});
  }
  return {{"experiments", out}};
}

// ---------------------------------------------------------------------------
// config plumbing: stored values become leading tokens, user flags follow and
// therefore win.

bool has_flag(const std::vector<std::string>& args, const std::string& name) {
  const std::string eq = name + "=";
  for (const std::string& a : args)
    if (a == name || a.rfind(eq, 0) == 0) return true;
  return false;
}

void append_value_tokens(std::vector<std::string>& out, const std::string& flag,
                         const json& v) {
  if (v.is_array()) {
    for (const json& item : v) append_value_tokens(out, flag, item);
    return;
  }
  out.push_back(flag);
  if (v.is_string())
    out.push_back(v.get<std::string>());
  else if (v.is_number_integer())
    out.push_back(std::to_string(v.get<long long>()));
  else if (v.is_number())
    out.push_back(fmt(v.get<double>()));
  else if (v.is_boolean())
    out.push_back(v.get<bool>() ? "true" : "false");
  else
    throw std::invalid_argument("config: unsupported value for " + flag);
}

// Returns the final token stream (subcommand first) for App::parse.
std::vector<std::string> assemble_args(int argc, char** argv) {
  std::vector<std::string> raw(argv + 1, argv + argc);
  std::string config_path;
  std::vector<std::string> rest;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "--config" || raw[i] == "-c") {
      if (i + 1 >= raw.size())
        throw std::invalid_argument("--config needs a file path");
      config_path = raw[++i];
    } else if (raw[i].rfind("--config=", 0) == 0) {
      config_path = raw[i].substr(9);
    } else {
      rest.push_back(raw[i]);
    }
  }
  const bool via_run = !rest.empty() && rest[0] == "run";
  if (via_run) rest.erase(rest.begin());
  if (via_run && config_path.empty())
    throw std::invalid_argument("run needs --config FILE");
  if (config_path.empty()) {
    if (via_run) throw std::invalid_argument("run needs --config FILE");
    return rest;
  }

  std::ifstream f(config_path);
  if (!f) throw std::invalid_argument("cannot read config: " + config_path);
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument("config parse error: " + std::string(err.what()));
  }

  std::string explicit_name;
  if (!rest.empty() && !rest[0].empty() && rest[0][0] != '-') {
    explicit_name = rest[0];
    rest.erase(rest.begin());
  }
  std::string name = explicit_name;
  if (cfg.contains("experiment")) {
    const std::string stored = cfg["experiment"].get<std::string>();
    if (!name.empty() && name != stored)
      throw std::invalid_argument("config is for experiment '" + stored +
                                  "', not '" + name + "'");
    name = stored;
  }
  if (name.empty())
    throw std::invalid_argument("config is missing the experiment name");
  const Experiment* exp = find_experiment(name);
  if (!exp) throw std::invalid_argument("unknown experiment: " + name);

  static const char* known_keys[] = {"experiment", "parameters", "seed",
                                     "output_path", "format"};
  for (const auto& [key, value] : cfg.items()) {
    (void)value;
    if (std::find_if(std::begin(known_keys), std::end(known_keys),
                     [&](const char* k) { return key == k; }) ==
        std::end(known_keys))
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }

  std::vector<std::string> out = {name};
  if (cfg.contains("seed") && !has_flag(rest, "--seed"))
    append_value_tokens(out, "--seed", cfg["seed"]);
  if (cfg.contains("output_path") && !has_flag(rest, "--output") &&
      !has_flag(rest, "-o"))
    append_value_tokens(out, "--output", cfg["output_path"]);
  if (cfg.contains("format") && !has_flag(rest, "--format"))
    append_value_tokens(out, "--format", cfg["format"]);
  if (cfg.contains("parameters")) {
    for (const auto& [key, value] : cfg["parameters"].items()) {
      if (std::find_if(exp->params.begin(), exp->params.end(),
                       [&](const char* p) { return key == p; }) ==
          exp->params.end())
        throw std::invalid_argument("config: experiment '" + name +
                                    "' has no parameter '" + key + "'");
      if (!has_flag(rest, "--" + key))
        append_value_tokens(out, "--" + key, value);
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"quantum walk laboratory experiment runner"};
  app.require_subcommand(0, 1);
  app.footer(
      "run --config FILE [overrides]   replay a stored configuration;\n"
      "                                flags after --config override it");

  std::map<std::string, CLI::App*> commands;
  for (const Experiment& e : catalog()) {
    CLI::App* cmd = app.add_subcommand(e.name, e.summary);
    for (const char* name : e.params) param_entry(name).bind(*cmd, o);
    last_wins(cmd->add_option("--seed", o.seed, "run seed, recorded in outputs"));
    last_wins(cmd->add_option("--output,-o", o.output, "data file path"));
    last_wins(cmd->add_option("--format", o.format, "data format")
                  ->check(CLI::IsMember({"csv", "json"})));
    commands[e.name] = cmd;
  }
  std::string lookup;
  CLI::App* lister = app.add_subcommand(
      "list-experiments", "print the experiment catalog as JSON");
  lister->add_option("name", lookup, "single experiment to describe");

  try {
    std::vector<std::string> args = assemble_args(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (lister->parsed()) {
    if (lookup.empty()) {
      std::cout << catalog_schema().dump(2) << '\n';
      return 0;
    }
    const json schema = catalog_schema();
    for (const json& e : schema["experiments"])
      if (e["name"] == lookup) {
        std::cout << e.dump(2) << '\n';
        return 0;
      }
    std::cerr << "error: experiment not found: " << lookup << '\n';
    return 1;
  }

  for (const Experiment& e : catalog()) {
    if (!commands[e.name]->parsed()) continue;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const Table table = e.run(o);
      const std::string path = resolve_output(o, e.name);
      write_data(path, o, table);
      const double wall_ms =
          std::chrono::duration<double, std::milli>(
              std::chrono::steady_clock::now() - t0)
              .count();
      write_sidecar(path, o, e, table, wall_ms);
      for (const auto& [k, v] : table.notes)
        std::cout << k << " = " << fmt(v) << '\n';
      std::cout << "wrote " << path << '\n';
      std::cout << "wrote " << path << ".meta.json" << '\n';
      return 0;
    } catch (const std::invalid_argument& err) {
      std::cerr << "error: " << err.what() << '\n';
      return 1;
    } catch (const std::exception& err) {
      std::cerr << "error: " << err.what() << '\n';
      return 2;
    }
  }

  std::cout << app.help();
  return 1;
}

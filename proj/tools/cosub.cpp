// cosub: command-line front end.
//
// Exit codes: 0 success, 2 invalid usage or input, 3 numerical failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cosub/cosub.hpp"
#include "cosub/manifest.hpp"

namespace {

using namespace cosub;
namespace fs = std::filesystem;

struct DetectOptions {
  std::string method = "cosub";
  std::string impl = "sc";
  int tau = 1000;
  std::uint64_t seed = 0;
};

void add_detect_flags(CLI::App* cmd, DetectOptions& o) {
  cmd->add_option("--method", o.method, "cosub (plain adjacency) or edaw (edge-aware)")
      ->check(CLI::IsMember({"cosub", "edaw"}));
  cmd->add_option("--impl", o.impl, "sc (one local-moving pass) or lc (full Louvain capped at --tau)")
      ->check(CLI::IsMember({"sc", "lc"}));
  cmd->add_option("--tau", o.tau, "largest community size for lc");
  cmd->add_option("--seed", o.seed, "seed of the node sweep order");
}

PartitionConfig make_config(const DetectOptions& o) {
  PartitionConfig c;
  c.variant = o.impl == "lc" ? LouvainVariant::LargeCommunities : LouvainVariant::SmallCommunities;
  c.tau = o.tau;
  c.seed = o.seed;
  c.edge_aware = o.method == "edaw";
  return c;
}

nlohmann::json config_echo(const DetectOptions& o) {
  return {{"method", o.method}, {"impl", o.impl}, {"tau", o.tau}, {"seed", o.seed}};
}

std::string fmt(double v) { return io::format_double(v); }

std::vector<std::string> g_argv;

// ---------------------------------------------------------------------------

struct PartitionCmd {
  std::string graph, signal, out;
  DetectOptions detect;
};

int run_partition(const PartitionCmd& o) {
  const auto g = io::read_edge_list(o.graph);
  GraphSignal x;
  if (o.detect.method == "edaw") {
    if (o.signal.empty()) throw InputError("--method edaw requires --signal");
    x = io::read_signal(o.signal);
    if (x.size() != g.num_nodes()) throw InputError("signal length does not match the graph");
  }
  const auto c = detect_partition(g, x, make_config(o.detect));
  io::write_partition(o.out, c);
  std::cout << "K\t" << c.num_subgraphs() << "\nmodularity\t" << fmt(modularity(g, c)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct CascadeOptions {
  std::string graph, signal;
  std::vector<std::string> partitions;
  bool zero_based = false;
  int levels = -1;
  std::string norm = "l1";
  DetectOptions detect;
};

void add_cascade_flags(CLI::App* cmd, CascadeOptions& o, bool with_partitions) {
  cmd->add_option("--graph", o.graph, "edge list")->required()->check(CLI::ExistingFile);
  cmd->add_option("--signal", o.signal, "signal file")->required()->check(CLI::ExistingFile);
  if (with_partitions) {
    cmd->add_option("--partition", o.partitions, "partition file per level (repeat for deeper levels)")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--zero-based", o.zero_based, "partition labels start at 0");
  }
  cmd->add_option("--levels", o.levels, "number of analysis levels");
  cmd->add_option("--norm", o.norm, "normalization of the local Fourier modes")->check(CLI::IsMember({"l1", "l2"}));
  add_detect_flags(cmd, o.detect);
}

struct LoadedInput {
  WeightedGraph graph;
  GraphSignal signal;
  CascadeConfig config;
  nlohmann::json echo;
};

LoadedInput load_cascade_input(const CascadeOptions& o, int default_levels) {
  LoadedInput in;
  in.graph = io::read_edge_list(o.graph);
  in.signal = io::read_signal(o.signal);
  if (in.signal.size() != in.graph.num_nodes()) throw InputError("signal length does not match the graph");
  int levels = o.levels;
  if (!o.partitions.empty()) {
    std::vector<SubgraphPartition> ps;
    for (const auto& path : o.partitions) ps.push_back(io::read_partition(path, o.zero_based));
    if (levels < 0) levels = static_cast<int>(ps.size());
    in.config.partitioner = fixed_partitioner(std::move(ps));
    in.echo = {{"method", "file"}, {"files", o.partitions}, {"zero_based", o.zero_based}};
  } else {
    in.config.partitioner = louvain_partitioner(make_config(o.detect));
    in.echo = config_echo(o.detect);
  }
  if (levels < 0) levels = default_levels;
  if (levels < 1) throw InputError("--levels must be at least 1");
  in.config.max_levels = static_cast<std::size_t>(levels);
  in.config.norm = parse_norm(o.norm);
  return in;
}

// ---------------------------------------------------------------------------

struct AnalyzeCmd {
  CascadeOptions cascade;
  std::string outdir;
};

int run_analyze(const AnalyzeCmd& o) {
  auto in = load_cascade_input(o.cascade, 1);
  const Pyramid p = analyze_cascade(in.graph, in.signal, in.config);
  RunInfo info;
  info.command = g_argv;
  info.inputs = {{"graph", o.cascade.graph}, {"signal", o.cascade.signal}};
  for (const auto& path : o.cascade.partitions) info.inputs.emplace_back("partition", path);
  info.partition = in.echo;
  const auto manifest = save_pyramid(p, o.outdir, info);

  std::cout << "levels\t" << p.levels.size() << "\n";
  for (std::size_t j = 0; j < p.levels.size(); ++j) {
    const auto& lv = p.levels[j];
    std::size_t total = 0;
    std::cout << "level " << j + 1 << "\tnodes " << lv.input_size() << "\tsubgraphs " << lv.partition.num_subgraphs()
              << "\tchannels " << lv.channels.size() << "\tlengths";
    for (const auto& c : lv.channels) {
      std::cout << ' ' << c.size();
      total += static_cast<std::size_t>(c.size());
    }
    std::cout << "\tsum " << total << "\n";
    if (total != static_cast<std::size_t>(lv.input_size())) throw NumericError("critical sampling violated");
  }
  std::cout << "approximation\t" << p.approximation.size() << "\nmanifest\t" << manifest.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct SynthesizeCmd {
  std::string manifest, out, reference;
};

int run_synthesize(const SynthesizeCmd& o) {
  const auto loaded = load_pyramid(o.manifest);
  const GraphSignal x = synthesize_cascade(loaded.pyramid);
  io::write_signal(o.out, x);
  if (!o.reference.empty()) {
    const auto ref = io::read_signal(o.reference);
    if (ref.size() != x.size()) throw InputError("reference length does not match the reconstruction");
    const double dev = x.size() == 0 ? 0.0 : (x - ref).cwiseAbs().maxCoeff();
    std::cout << "max_abs_deviation\t" << fmt(dev) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

/// "N" (count) or "P%" (percentage of the detail coefficients at each depth).
HighPassBudget parse_keep(const std::string& s) {
  if (s.empty()) throw InputError("empty --keep-hp");
  try {
    std::size_t used = 0;
    if (s.back() == '%') {
      const double pct = std::stod(s.substr(0, s.size() - 1), &used);
      if (used != s.size() - 1 || !(pct >= 0.0) || pct > 100.0) throw InputError("");
      return HighPassBudget::fraction(pct / 100.0);
    }
    const long long n = std::stoll(s, &used);
    if (used != s.size() || n < 0) throw InputError("");
    return HighPassBudget::count(static_cast<std::size_t>(n));
  } catch (const std::exception&) {
    throw InputError("invalid --keep-hp '" + s + "' (expected N or P%)");
  }
}

struct CompressCmd {
  CascadeOptions cascade;
  std::string keep, out, table;
  double ratio = 0.0;
  std::vector<double> sweep;
};

int run_compress(const CompressCmd& o) {
  auto in = load_cascade_input(o.cascade, 4);
  const int modes = (o.keep.empty() ? 0 : 1) + (o.ratio > 0.0 ? 1 : 0) + (o.sweep.empty() ? 0 : 1);
  if (modes != 1) throw InputError("give exactly one of --keep-hp, --ratio, --sweep");
  if (!o.sweep.empty()) {
    if (o.table.empty()) throw InputError("--sweep requires --table");
    std::string csv = "keep_fraction,level,lp,hp,ratio,psnr\n";
    for (double f : o.sweep) {
      if (!(f > 0.0) || f > 1.0) throw InputError("--sweep fractions must lie in (0, 1]");
      const auto r = best_level_nla(in.graph, in.signal, in.config, HighPassBudget::fraction(f));
      csv += fmt(f) + ',' + std::to_string(r.level) + ',' + std::to_string(r.lp) + ',' + std::to_string(r.kept_hp) +
             ',' + fmt(r.ratio) + ',' + fmt(r.psnr) + '\n';
    }
    io::write_file(o.table, csv);
    std::cout << csv;
    return 0;
  }
  const HighPassBudget budget = o.ratio > 0.0 ? HighPassBudget::ratio(o.ratio) : parse_keep(o.keep);
  const auto r = best_level_nla(in.graph, in.signal, in.config, budget);
  if (!o.out.empty()) io::write_signal(o.out, r.reconstruction);
  std::cout << "level\t" << r.level << "\nlp\t" << r.lp << "\nhp\t" << r.kept_hp << "\nratio\t" << fmt(r.ratio)
            << "\npsnr\t" << fmt(r.psnr) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct DenoiseCmd {
  CascadeOptions cascade;
  double sigma = -1.0;
  std::string out, clean, table;
  bool add_noise = false;
  std::uint64_t noise_seed = 0;
  std::vector<double> sigmas;
  int trials = 10;
};

GraphSignal gaussian_noise(Eigen::Index n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sigma);
  GraphSignal e(n);
  for (Eigen::Index i = 0; i < n; ++i) e[i] = d(rng);
  return e;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

int run_denoise(const DenoiseCmd& o) {
  auto in = load_cascade_input(o.cascade, 1);
  if (in.config.norm != Norm::L2)
    std::cerr << "warning: denoising uses l2-normalized modes; --norm " << o.cascade.norm << " ignored\n";
  in.config.norm = Norm::L2;

  if (!o.sigmas.empty()) {
    // Experiment mode: --signal is clean, noise is drawn per trial.
    if (o.table.empty()) throw InputError("--sigmas requires --table");
    if (o.trials < 1) throw InputError("--trials must be at least 1");
    std::string csv = "sigma,snr_in,snr_out\n";
    for (double s : o.sigmas) {
      if (!(s > 0.0)) throw InputError("--sigmas values must be positive");
      std::vector<double> snr_in, snr_out;
      for (int t = 0; t < o.trials; ++t) {
        const GraphSignal noisy = in.signal + gaussian_noise(in.signal.size(), s, o.noise_seed + static_cast<std::uint64_t>(t));
        snr_in.push_back(snr(in.signal, noisy));
        snr_out.push_back(snr(in.signal, denoise(in.graph, noisy, s, in.config).signal));
      }
      csv += fmt(s) + ',' + fmt(median(snr_in)) + ',' + fmt(median(snr_out)) + '\n';
    }
    io::write_file(o.table, csv);
    std::cout << csv;
    return 0;
  }

  if (o.sigma < 0.0) throw InputError("--sigma is required");
  if (o.out.empty()) throw InputError("--out is required");
  GraphSignal clean;
  GraphSignal noisy = in.signal;
  if (o.add_noise) {
    clean = in.signal;
    noisy = in.signal + gaussian_noise(in.signal.size(), o.sigma, o.noise_seed);
  } else if (!o.clean.empty()) {
    clean = io::read_signal(o.clean);
    if (clean.size() != noisy.size()) throw InputError("--clean length does not match the signal");
  }
  const auto r = denoise(in.graph, noisy, o.sigma, in.config);
  io::write_signal(o.out, r.signal);
  if (clean.size() > 0)
    std::cout << "snr_in\t" << fmt(snr(clean, noisy)) << "\nsnr_out\t" << fmt(snr(clean, r.signal)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct AtomsCmd {
  std::string manifest, out;
};

int run_atoms(const AtomsCmd& o) {
  const auto loaded = load_pyramid(o.manifest);
  const auto atoms = compute_atoms(loaded.pyramid);
  std::string csv = "level,channel,subgraph,node,value\n";
  for (const auto& a : atoms)
    for (std::size_t i = 0; i < a.support.size(); ++i)
      csv += std::to_string(a.level + 1) + ',' + std::to_string(a.channel + 1) + ',' + std::to_string(a.subgraph + 1) +
             ',' + std::to_string(a.support[i]) + ',' + fmt(a.values[i]) + '\n';
  io::write_file(o.out, csv);
  std::cout << "atoms\t" << atoms.size() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct MetricsCmd {
  std::string reference, estimate;
  long long kept_lp = -1, kept_hp = -1;
};

int run_metrics(const MetricsCmd& o) {
  const auto ref = io::read_signal(o.reference);
  const auto est = io::read_signal(o.estimate);
  std::cout << "psnr\t" << fmt(psnr(ref, est)) << "\n";
  if (ref.squaredNorm() > 0.0 || ref == est) std::cout << "snr\t" << fmt(snr(ref, est)) << "\n";
  if (o.kept_lp >= 0 || o.kept_hp >= 0)
    std::cout << "ratio\t"
              << fmt(compression_ratio(static_cast<std::size_t>(ref.size()), static_cast<std::size_t>(std::max(0LL, o.kept_lp)),
                                       static_cast<std::size_t>(std::max(0LL, o.kept_hp))))
              << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct GenerateCmd {
  std::string kind, out;
  int n = 0, rows = 0, cols = 0;
  std::vector<int> blocks;
  double p_in = 0.0, p_out = 0.0, p = 0.0;
  std::uint64_t seed = 0;
  std::string labels_out;
};

int run_generate(const GenerateCmd& o) {
  WeightedGraph g;
  if (o.kind == "line") {
    g = line_graph(o.n);
  } else if (o.kind == "grid") {
    g = grid_graph(o.rows, o.cols);
  } else if (o.kind == "sbm") {
    g = sbm_graph(o.blocks, o.p_in, o.p_out, o.seed);
    if (!o.labels_out.empty()) io::write_partition(o.labels_out, SubgraphPartition(sbm_block_labels(o.blocks)));
  } else {
    g = erdos_renyi_graph(o.n, o.p, o.seed);
  }
  io::write_edge_list(o.out, g);
  std::cout << "nodes\t" << g.num_nodes() << "\nedges\t" << g.num_edges() << "\n";
  return 0;
}

struct SmoothCmd {
  std::string graph, out;
  int k = 5;
};

int run_smooth(const SmoothCmd& o) {
  io::write_signal(o.out, smooth_test_signal(io::read_edge_list(o.graph), o.k));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);
  CLI::App app{"Filterbanks for graph signals on partitions in connected subgraphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  PartitionCmd part;
  auto* c_part = app.add_subcommand("partition", "detect a partition in connected subgraphs");
  c_part->add_option("--graph", part.graph, "edge list")->required()->check(CLI::ExistingFile);
  c_part->add_option("--signal", part.signal, "signal file (edaw only)")->check(CLI::ExistingFile);
  c_part->add_option("--out", part.out, "partition file to write")->required();
  add_detect_flags(c_part, part.detect);

  AnalyzeCmd ana;
  auto* c_ana = app.add_subcommand("analyze", "run the analysis cascade and write a pyramid");
  add_cascade_flags(c_ana, ana.cascade, true);
  c_ana->add_option("--outdir", ana.outdir, "output directory")->required();

  SynthesizeCmd syn;
  auto* c_syn = app.add_subcommand("synthesize", "reconstruct a signal from a pyramid manifest");
  c_syn->add_option("--manifest", syn.manifest, "manifest.json")->required();
  c_syn->add_option("--out", syn.out, "signal file to write")->required();
  c_syn->add_option("--reference", syn.reference, "report the max-abs deviation from this signal")
      ->check(CLI::ExistingFile);

  CompressCmd cmp;
  auto* c_cmp = app.add_subcommand("compress", "non-linear approximation at the best cascade depth");
  add_cascade_flags(c_cmp, cmp.cascade, true);
  c_cmp->add_option("--keep-hp", cmp.keep, "detail coefficients to keep: N or P% of those available");
  c_cmp->add_option("--ratio", cmp.ratio, "target compression ratio");
  c_cmp->add_option("--sweep", cmp.sweep, "fractions of detail coefficients for a PSNR table")->delimiter(',');
  c_cmp->add_option("--table", cmp.table, "CSV output of --sweep");
  c_cmp->add_option("--out", cmp.out, "reconstructed signal");

  DenoiseCmd den;
  auto* c_den = app.add_subcommand("denoise", "hard-threshold the detail coefficients at 3 sigma");
  add_cascade_flags(c_den, den.cascade, true);
  c_den->add_option("--sigma", den.sigma, "noise standard deviation");
  c_den->add_option("--out", den.out, "denoised signal");
  c_den->add_option("--clean", den.clean, "clean signal, to report SNRs")->check(CLI::ExistingFile);
  c_den->add_flag("--add-noise", den.add_noise, "treat --signal as clean and corrupt it first");
  c_den->add_option("--noise-seed", den.noise_seed, "seed of the added noise");
  c_den->add_option("--sigmas", den.sigmas, "noise levels for an SNR table")->delimiter(',');
  c_den->add_option("--trials", den.trials, "noise draws per level in --sigmas mode");
  c_den->add_option("--table", den.table, "CSV output of --sigmas");

  AtomsCmd atm;
  auto* c_atm = app.add_subcommand("atoms", "write the analysis atoms of a pyramid");
  c_atm->add_option("--manifest", atm.manifest, "manifest.json")->required();
  c_atm->add_option("--out", atm.out, "CSV to write")->required();

  MetricsCmd met;
  auto* c_met = app.add_subcommand("metrics", "PSNR, SNR and compression ratio");
  c_met->add_option("--reference", met.reference, "reference signal")->required()->check(CLI::ExistingFile);
  c_met->add_option("--estimate", met.estimate, "signal to score")->required()->check(CLI::ExistingFile);
  c_met->add_option("--kept-lp", met.kept_lp, "kept approximation coefficients (for the ratio)");
  c_met->add_option("--kept-hp", met.kept_hp, "kept detail coefficients (for the ratio)");

  GenerateCmd gen;
  auto* c_gen = app.add_subcommand("generate", "write a synthetic graph");
  c_gen->add_option("--kind", gen.kind, "graph family")->required()->check(CLI::IsMember({"line", "grid", "sbm", "er"}));
  c_gen->add_option("--n", gen.n, "nodes (line, er)");
  c_gen->add_option("--rows", gen.rows, "grid rows");
  c_gen->add_option("--cols", gen.cols, "grid columns");
  c_gen->add_option("--blocks", gen.blocks, "block sizes (sbm)")->delimiter(',');
  c_gen->add_option("--p-in", gen.p_in, "intra-block edge probability (sbm)");
  c_gen->add_option("--p-out", gen.p_out, "inter-block edge probability (sbm)");
  c_gen->add_option("--p", gen.p, "edge probability (er)");
  c_gen->add_option("--seed", gen.seed, "generator seed (sbm, er)");
  c_gen->add_option("--labels-out", gen.labels_out, "block labels as a partition file (sbm)");
  c_gen->add_option("--out", gen.out, "edge list to write")->required();

  SmoothCmd smo;
  auto* c_smo = app.add_subcommand("smooth-signal", "sum of the first k graph Fourier modes, unit max-abs");
  c_smo->add_option("--graph", smo.graph, "edge list of a connected graph")->required()->check(CLI::ExistingFile);
  c_smo->add_option("--k", smo.k, "number of modes");
  c_smo->add_option("--out", smo.out, "signal file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_part->parsed()) {
      if (part.detect.method == "edaw" && part.signal.empty()) {
        std::cerr << "error: --method edaw requires --signal\n" << c_part->help();
        return 2;
      }
      return run_partition(part);
    }
    if (c_ana->parsed()) return run_analyze(ana);
    if (c_syn->parsed()) return run_synthesize(syn);
    if (c_cmp->parsed()) return run_compress(cmp);
    if (c_den->parsed()) return run_denoise(den);
    if (c_atm->parsed()) return run_atoms(atm);
    if (c_met->parsed()) return run_metrics(met);
    if (c_gen->parsed()) return run_generate(gen);
    if (c_smo->parsed()) return run_smooth(smo);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

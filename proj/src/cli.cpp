#include "oofa/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "oofa/constructor.hpp"
#include "oofa/design.hpp"
#include "oofa/errors.hpp"
#include "oofa/galois.hpp"
#include "oofa/indicator.hpp"
#include "oofa/latin.hpp"
#include "oofa/rng.hpp"
#include "oofa/simulator.hpp"
#include "oofa/stats.hpp"

namespace oofa {

namespace {

constexpr const char* kToolVersion = "oofa 1.0.0 (design CSV format 1)";
constexpr std::uint64_t kDefaultSeed = 20240501;  // used whenever --seed is omitted

using Json = nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add_row(std::vector<Json> row) { rows.push_back(std::move(row)); }
};

std::string table_to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const Json& v = row[c];
      if (v.is_string()) {
        out += v.get<std::string>();
      } else if (v.is_number_float()) {
        out += fmt(v.get<double>());
      } else {
        out += v.dump();
      }
    }
    out += '\n';
  }
  return out;
}

struct Context {
  bool json = false;
  int threads = 1;
  std::string command;
  std::vector<Table> tables;
  std::string raw;  // verbatim stdout payload (design CSV), plain mode only
  Json extra = Json::object();
};

void write_table_file(const Table& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << table_to_csv(t);
}

Table wlp_table(const WordLengthPattern& w) {
  Table t;
  t.name = "wlp";
  t.columns = {"l", "w_pure"};
  if (w.blocked()) t.columns.push_back("w_mixed");
  for (std::size_t l = 0; l < w.pure().size(); ++l) {
    std::vector<Json> row{static_cast<int>(l + 1), w.pure()[l]};
    if (w.blocked()) row.push_back(w.mixed()[l]);
    t.add_row(std::move(row));
  }
  return t;
}

Table design_table(const BlockOofaDesign& d) {
  Table t;
  t.name = "design";
  t.columns = {"Run"};
  for (int j = 1; j <= d.m(); ++j) t.columns.push_back("Z" + std::to_string(j));
  if (d.blocked()) t.columns.push_back("B");
  if (d.has_response()) t.columns.push_back("y");
  for (int i = 0; i < d.runs(); ++i) {
    std::vector<Json> row{i + 1};
    for (int j = 0; j < d.m(); ++j) row.push_back(d.position(i, j));
    if (d.blocked()) row.push_back(d.block(i));
    if (d.has_response()) row.push_back(d.response()[i]);
    t.add_row(std::move(row));
  }
  return t;
}

Table fit_table(const std::string& name, const ForwardFit& f) {
  Table t;
  t.name = name;
  t.columns = {"term", "estimate", "std_error", "t_value", "p_value"};
  for (std::size_t i = 0; i < f.labels.size(); ++i) {
    t.add_row({f.labels[i], f.fit.estimate(static_cast<int>(i)),
               f.fit.std_error(static_cast<int>(i)), f.fit.t_value(static_cast<int>(i)),
               f.fit.p_value(static_cast<int>(i))});
  }
  return t;
}

Table sequences_table(const std::string& name, const std::vector<std::vector<int>>& points) {
  Table t;
  t.name = name;
  t.columns = {"sequence"};
  const int m = points.empty() ? 0 : static_cast<int>(points.front().size());
  for (int j = 1; j <= m; ++j) t.columns.push_back("Z" + std::to_string(j));
  t.columns.push_back("addition_order");
  for (const auto& z : points) {
    std::vector<Json> row{sequence_label(z)};
    for (int v : z) row.push_back(v);
    std::string order;
    for (int v : addition_order(z)) {
      if (!order.empty()) order += ' ';
      order += std::to_string(v);
    }
    row.push_back(order);
    t.add_row(std::move(row));
  }
  return t;
}

// The five-drug scenario: generating model and batch effects used by the
// case-study command.
const EffectMap kTrueModel = {{"Intercept", 23.13}, {"Z1^l", 0.26},     {"Z2^l", -3.19},
                              {"Z5^l", 1.3},        {"Z2^q", -3.21},    {"Z1^lZ5^l", 1.05},
                              {"Z2^lZ5^l", 1.82}};
const EffectMap kBatchEffects = {{"B^l", -4.08}, {"B^q", 1.2}};

void cmd_mols(Context& ctx, int m) {
  const auto squares = full_ls_set(make_field(m));
  Table t;
  t.name = "squares";
  t.columns = {"LS", "Row"};
  for (int j = 1; j <= m; ++j) t.columns.push_back("C" + std::to_string(j));
  for (const auto& sq : squares) {
    for (int r = 0; r < m; ++r) {
      std::vector<Json> row{sq.index, r + 1};
      for (int c = 0; c < m; ++c) row.push_back(sq.at(r, c));
      t.add_row(std::move(row));
    }
  }
  ctx.tables.push_back(std::move(t));
}

void cmd_construct(Context& ctx, int m, int k, int n_B, const SearchBudget& budget,
                   const std::string& out_path, const std::string& report_path) {
  const ConstructionResult res = construct(m, k, n_B, budget, ctx.threads);
  if (!out_path.empty()) write_design_csv(res.design, out_path);
  if (!report_path.empty()) write_table_file(wlp_table(res.wlp), report_path);

  Json prov = Json::array();
  for (std::size_t b = 0; b < res.blocks.size(); ++b) {
    Json rows = Json::array();
    for (const auto& [ls, row] : res.blocks[b].rows) rows.push_back({{"ls", ls}, {"row", row}});
    prov.push_back({{"block", b + 1},
                    {"coas", res.blocks[b].coas},
                    {"squares", res.blocks[b].squares},
                    {"rows", rows}});
  }
  ctx.extra["provenance"] = prov;
  ctx.extra["seed"] = res.seed;
  ctx.extra["iterations_used"] = res.iterations_used;

  if (ctx.json) {
    ctx.tables.push_back(design_table(res.design));
    ctx.tables.push_back(wlp_table(res.wlp));
  } else if (out_path.empty()) {
    ctx.raw = design_to_csv(res.design);
  }
}

void cmd_wlp(Context& ctx, const std::string& path) {
  ctx.tables.push_back(wlp_table(wlp(read_design_csv(path))));
}

void cmd_indicator(Context& ctx, const std::string& path) {
  const BlockOofaDesign d = read_design_csv(path);
  const IndicatorSpectrum spec = spectrum(d);
  const double cut = 1e-9 * std::abs(spec.a0());
  Table t;
  t.name = "indicator";
  t.columns = {"word", "a", "ratio_sq"};
  std::vector<int> digits(d.m());
  for (std::size_t idx = 0; idx < spec.a.size(); ++idx) {
    const double a = spec.a[idx];
    if (std::abs(a) <= cut) continue;
    std::size_t rest = idx;
    const int s = static_cast<int>(rest % spec.k);
    rest /= spec.k;
    for (int j = d.m() - 1; j >= 0; --j) {
      digits[j] = static_cast<int>(rest % d.m());
      rest /= d.m();
    }
    std::string word;
    for (int dg : digits) word += static_cast<char>('0' + dg);
    if (d.blocked()) word += static_cast<char>('0' + s);
    const double r = a / spec.a0();
    t.add_row({word, a, r * r});
  }
  ctx.tables.push_back(std::move(t));
}

void cmd_correlate(Context& ctx, const std::string& path) {
  const BlockOofaDesign d = read_design_csv(path);
  const CorrelationMatrix cm = correlation_matrix(model_matrix(d, ModelOrder::SecondOrder));
  Table t;
  t.name = "correlation";
  t.columns = {"term"};
  for (const auto& l : cm.labels) t.columns.push_back(l);
  for (std::size_t i = 0; i < cm.labels.size(); ++i) {
    std::vector<Json> row{cm.labels[i]};
    for (std::size_t j = 0; j < cm.labels.size(); ++j) {
      row.push_back(cm.r(static_cast<int>(i), static_cast<int>(j)));
    }
    t.add_row(std::move(row));
  }
  ctx.tables.push_back(std::move(t));
}

void cmd_fit(Context& ctx, const std::string& path, double alpha, const std::string& order,
             bool no_blocks) {
  BlockOofaDesign d = read_design_csv(path);
  if (!d.has_response()) throw Error("'" + path + "' has no response column y");
  if (no_blocks && d.blocked()) {
    std::vector<int> positions;
    positions.reserve(static_cast<std::size_t>(d.runs()) * d.m());
    for (int i = 0; i < d.runs(); ++i) {
      const auto r = d.row(i);
      positions.insert(positions.end(), r.begin(), r.end());
    }
    d = BlockOofaDesign::unblocked(d.m(), std::move(positions), d.response());
  }
  ModelOrder mo = ModelOrder::SecondOrder;
  if (order == "first") mo = ModelOrder::First;
  else if (order == "quadratic") mo = ModelOrder::Quadratic;
  else if (order != "second") throw Error("unknown --order '" + order + "'");
  const ModelMatrix mm = model_matrix(d, mo);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(d.response().data(), d.runs());
  ctx.tables.push_back(fit_table("fit", forward_select(mm, y, alpha)));
}

void cmd_simulate(Context& ctx, const std::string& path, int p, int reps, double alpha,
                  double sigma, std::uint64_t seed, const std::string& per_rep_path) {
  SimConfig cfg{read_design_csv(path).without_response(), p, reps, alpha, sigma, seed};
  const SimulationReport rep = simulate(cfg, ctx.threads);
  Table t;
  t.name = "report";
  t.columns = {"m", "k", "n_B", "p", "reps", "alpha", "sigma", "seed", "PW", "TY1"};
  t.add_row({cfg.design.m(), cfg.design.k(), cfg.design.block_size(), p, reps, alpha, sigma,
             seed, rep.power, rep.type1});
  ctx.tables.push_back(std::move(t));
  if (!per_rep_path.empty()) {
    Table pr;
    pr.name = "per_rep";
    pr.columns = {"rep", "pw", "ty1"};
    for (int i = 0; i < reps; ++i) {
      pr.add_row({i + 1, rep.per_rep_power[i], rep.per_rep_type1[i]});
    }
    write_table_file(pr, per_rep_path);
    if (ctx.json) ctx.tables.push_back(std::move(pr));
  }
}

void cmd_case_study(Context& ctx, const std::string& blocked_path,
                    const std::string& unblocked_path, double alpha, bool resimulate,
                    std::uint64_t seed, double sigma) {
  const BlockOofaDesign blocked = read_design_csv(blocked_path);
  const BlockOofaDesign unblocked = read_design_csv(unblocked_path);
  if (!blocked.blocked()) throw Error("'" + blocked_path + "' is not a blocked design");
  if (unblocked.blocked()) throw Error("'" + unblocked_path + "' should have no block column");

  ctx.tables.push_back(sequences_table("true_optima", argmax_sequences(kTrueModel, blocked.m())));

  std::vector<double> y_blocked, y_unblocked;
  if (resimulate) {
    const Rng base(seed);
    y_blocked = case_study_responses(blocked.without_response(), kTrueModel, kBatchEffects,
                                     sigma, base.substream(1).seed());
    // hidden balanced batch assignment for the unblocked arm
    const int n = unblocked.runs();
    const int k = blocked.k();
    std::vector<int> batch(n);
    for (int i = 0; i < n; ++i) batch[i] = i / (n / k) + 1;
    Rng shuffle_rng = base.substream(2);
    for (int i = 0; i + 1 < n; ++i) {
      const std::size_t j = i + shuffle_rng.next_below(n - i);
      std::swap(batch[i], batch[j]);
    }
    std::vector<int> positions;
    for (int i = 0; i < n; ++i) {
      const auto r = unblocked.row(i);
      positions.insert(positions.end(), r.begin(), r.end());
    }
    const BlockOofaDesign hidden(unblocked.m(), k, std::move(positions), std::move(batch));
    y_unblocked =
        case_study_responses(hidden, kTrueModel, kBatchEffects, sigma, base.substream(3).seed());
  } else {
    if (!blocked.has_response() || !unblocked.has_response()) {
      throw Error("bundled mode needs response columns; pass --resimulate to generate them");
    }
    y_blocked = blocked.response();
    y_unblocked = unblocked.response();
  }

  const ModelMatrix mm_unbk = model_matrix(unblocked, ModelOrder::SecondOrder);
  const ForwardFit fit_unbk = forward_select(
      mm_unbk, Eigen::Map<const Eigen::VectorXd>(y_unblocked.data(), y_unblocked.size()), alpha);
  ctx.tables.push_back(fit_table("unblocked_fit", fit_unbk));
  ctx.tables.push_back(sequences_table("unblocked_optima",
                                       argmax_sequences(effect_map(fit_unbk), unblocked.m())));

  const ModelMatrix mm_blk = model_matrix(blocked, ModelOrder::SecondOrder);
  const ForwardFit fit_blk = forward_select(
      mm_blk, Eigen::Map<const Eigen::VectorXd>(y_blocked.data(), y_blocked.size()), alpha);
  ctx.tables.push_back(fit_table("blocked_fit", fit_blk));
  ctx.tables.push_back(
      sequences_table("blocked_optima", argmax_sequences(effect_map(fit_blk), blocked.m())));
}

void cmd_validate(Context& ctx, const std::string& path, std::ostream& err) {
  // reading performs the validation; reaching here means the design is valid
  const BlockOofaDesign d = read_design_csv(path);
  (void)err;
  Table t;
  t.name = "summary";
  t.columns = {"m", "k", "runs", "block_size", "valid"};
  t.add_row({d.m(), d.k(), d.runs(), d.block_size(), 1});
  ctx.tables.push_back(std::move(t));
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blocked order-of-addition designs: construction, evaluation, analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Context ctx;
  app.add_flag("--json", ctx.json, "emit one JSON document instead of CSV");
  app.add_option("--threads", ctx.threads, "worker threads for restarts and replications")
      ->envname("OOFA_THREADS")
      ->check(CLI::PositiveNumber);

  // mols
  auto* mols = app.add_subcommand("mols", "emit the ordered candidate Latin squares");
  int mols_m = 5;
  mols->add_option("--m", mols_m, "number of components")->required();
  mols->callback([&] { cmd_mols(ctx, mols_m); });

  // construct
  auto* con = app.add_subcommand("construct", "build a blocked design with minimal aberration");
  int con_m = 0, con_k = 0, con_nb = 0;
  SearchBudget budget;
  std::string con_out, con_report;
  con->add_option("--m", con_m, "number of components")->required();
  con->add_option("--k", con_k, "number of blocks")->required();
  con->add_option("--block-size", con_nb, "runs per block")->required();
  con->add_option("--i1", budget.restarts, "random restarts (default 500)");
  con->add_option("--i2", budget.ls_passes, "square-exchange passes per restart (default 50)");
  con->add_option("--i3", budget.row_passes, "row-exchange passes per restart (default 50)");
  con->add_option("--seed", budget.seed, "RNG seed (default 20240501)");
  con->add_option("--out", con_out, "write the design CSV here instead of stdout");
  con->add_option("--report", con_report, "write the word-length-pattern CSV here");
  con->callback([&] { cmd_construct(ctx, con_m, con_k, con_nb, budget, con_out, con_report); });

  // wlp
  auto* wl = app.add_subcommand("wlp", "word length pattern of a design");
  std::string wlp_path;
  wl->add_option("--design", wlp_path, "design CSV")->required();
  wl->callback([&] { cmd_wlp(ctx, wlp_path); });

  // indicator
  auto* ind = app.add_subcommand("indicator", "nonzero indicator coefficients of a design");
  std::string ind_path;
  ind->add_option("--design", ind_path, "design CSV")->required();
  ind->callback([&] { cmd_indicator(ctx, ind_path); });

  // correlate
  auto* cor = app.add_subcommand("correlate", "column correlations of the second-order model");
  std::string cor_path;
  cor->add_option("--design", cor_path, "design CSV")->required();
  cor->callback([&] { cmd_correlate(ctx, cor_path); });

  // fit
  auto* fit = app.add_subcommand("fit", "forward-selection regression on a data file");
  std::string fit_path, fit_order = "second";
  double fit_alpha = 0.05;
  bool fit_noblocks = false;
  fit->add_option("--data", fit_path, "design CSV with a response column y")->required();
  fit->add_option("--alpha", fit_alpha, "entry significance level (default 0.05)");
  fit->add_option("--order", fit_order, "model order: first|quadratic|second (default second)");
  fit->add_flag("--no-blocks", fit_noblocks, "ignore the block column");
  fit->callback([&] { cmd_fit(ctx, fit_path, fit_alpha, fit_order, fit_noblocks); });

  // simulate
  auto* sim = app.add_subcommand("simulate", "power/type-I study on a design");
  std::string sim_path, sim_perrep;
  int sim_p = 0, sim_reps = 1000;
  double sim_alpha = 0.05, sim_sigma = 1.0;
  std::uint64_t sim_seed = kDefaultSeed;
  sim->add_option("--design", sim_path, "design CSV")->required();
  sim->add_option("--p", sim_p, "number of active position effects")->required();
  sim->add_option("--reps", sim_reps, "replications (default 1000)");
  sim->add_option("--alpha", sim_alpha, "significance level (default 0.05)");
  sim->add_option("--sigma", sim_sigma, "error standard deviation (default 1)");
  sim->add_option("--seed", sim_seed, "RNG seed (default 20240501)");
  sim->add_option("--per-rep", sim_perrep, "write per-replication results here");
  sim->callback(
      [&] { cmd_simulate(ctx, sim_path, sim_p, sim_reps, sim_alpha, sim_sigma, sim_seed, sim_perrep); });

  // case-study
  auto* cs = app.add_subcommand("case-study",
                                "five-drug scenario: fit both designs, rank sequences");
  std::string cs_blocked = "fixtures/five_drug_blocked.csv";
  std::string cs_unblocked = "fixtures/five_drug_unblocked.csv";
  double cs_alpha = 0.05, cs_sigma = 1.0;
  bool cs_resim = false;
  std::uint64_t cs_seed = kDefaultSeed;
  cs->add_option("--blocked", cs_blocked, "blocked design CSV (with y unless --resimulate)");
  cs->add_option("--unblocked", cs_unblocked, "unblocked design CSV (with y unless --resimulate)");
  cs->add_option("--alpha", cs_alpha, "entry significance level (default 0.05)");
  cs->add_flag("--resimulate", cs_resim, "draw fresh responses from the scenario model");
  cs->add_option("--seed", cs_seed, "RNG seed for --resimulate (default 20240501)");
  cs->add_option("--sigma", cs_sigma, "error standard deviation for --resimulate");
  cs->callback(
      [&] { cmd_case_study(ctx, cs_blocked, cs_unblocked, cs_alpha, cs_resim, cs_seed, cs_sigma); });

  // validate
  auto* val = app.add_subcommand("validate", "check a design file against its invariants");
  std::string val_path;
  val->add_option("--design", val_path, "design CSV")->required();
  val->callback([&] { cmd_validate(ctx, val_path, err); });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  if (ctx.json) {
    Json doc;
    doc["tool"] = kToolVersion;
    doc["command"] = app.get_subcommands().front()->get_name();
    Json tables = Json::object();
    for (const auto& t : ctx.tables) {
      Json rows = Json::array();
      for (const auto& row : t.rows) {
        Json r = Json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) r[t.columns[c]] = row[c];
        rows.push_back(std::move(r));
      }
      tables[t.name] = std::move(rows);
    }
    doc["tables"] = std::move(tables);
    if (!ctx.extra.empty()) doc["details"] = ctx.extra;
    out << doc.dump(2) << "\n";
    return 0;
  }

  if (!ctx.raw.empty()) out << ctx.raw;
  for (std::size_t i = 0; i < ctx.tables.size(); ++i) {
    if (ctx.tables.size() > 1) out << "# table: " << ctx.tables[i].name << "\n";
    out << table_to_csv(ctx.tables[i]);
    if (i + 1 < ctx.tables.size()) out << "\n";
  }
  return 0;
}

}  // namespace oofa

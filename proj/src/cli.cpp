#include "otk/cli.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "otk/error.hpp"
#include "otk/json_io.hpp"
#include "otk/kernel.hpp"
#include "otk/onedim.hpp"
#include "otk/signed.hpp"
#include "otk/solver.hpp"

namespace otk::cli {

namespace {

using io::json;

constexpr const char* kVersion = "otk 0.1.0";

struct Globals {
  double tol = 1e-9;
  std::size_t max_cycle = 0;  // 0: command default
  bool deterministic = false;
  std::string output = "json";
};

// Where an artifact goes and in which format.
class Sink {
 public:
  Sink(const Globals& g, std::ostream& out, const std::string& path)
      : csv_(g.output == "csv"), out_(out), path_(path) {}

  bool csv() const { return csv_; }

  void json_artifact(const json& j) const { write(io::dump(j)); }
  void text(const std::string& s) const { write(s); }

  void require_json(const char* command) const {
    if (csv_) {
      throw CLI::ValidationError(std::string(command) + " has no CSV form; use --output json");
    }
  }

 private:
  void write(const std::string& s) const {
    if (path_.empty()) {
      out_ << s;
    } else {
      io::write_text_file(path_, s);
    }
  }

  bool csv_;
  std::ostream& out_;
  std::string path_;
};

CcmOptions ccm_options(const Globals& g) {
  CcmOptions o;
  o.tol = g.tol;
  return o;
}

json certified_plan(const Coupling& plan, const CostTable& table, const Globals& g, bool certify) {
  json j = io::to_json(plan);
  j["cost"] = transport_cost(plan, table);
  if (certify) j["certificate"] = io::to_json(verify_optimal(plan, table, ccm_options(g)));
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact discrete optimal transport, Markov transport kernels and signed transport",
               "otk"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--tol", g.tol, "Relative tolerance for monotonicity and balance checks")
      ->envname("OTK_TOL")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-cycle", g.max_cycle, "Longest cycle the c-CM checks examine")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  app.add_flag("--deterministic", g.deterministic, "Reproducible witness selection and output");
  app.add_option("--output", g.output, "Artifact format")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string mu_path, nu_path, cost_text = "sqeuclidean", out_path;
  std::string plan_path, plan2_path, kernel_path, measure_path, a_path, b_path;
  bool certify = false, signed_apply = false, general = false, complete = false;

  auto* solve_cmd = app.add_subcommand("solve", "Solve the discrete transport problem");
  solve_cmd->add_option("--mu", mu_path, "Source measure JSON")->required();
  solve_cmd->add_option("--nu", nu_path, "Target measure JSON")->required();
  solve_cmd->add_option("--cost", cost_text, "sqeuclidean | power:<p> | convex1d:<h> | table:<path>");
  solve_cmd->add_option("--out", out_path, "Plan output path");
  solve_cmd->add_flag("--certify", certify, "Embed the complete c-CM certificate");

  auto* mono_cmd = app.add_subcommand("monotone", "Monotone coupling of two 1D measures");
  mono_cmd->add_option("--mu", mu_path)->required();
  mono_cmd->add_option("--nu", nu_path)->required();
  mono_cmd->add_option("--cost", cost_text, "Cost used for the reported plan cost");
  mono_cmd->add_option("--out", out_path);

  auto* kernel_cmd = app.add_subcommand("kernel", "Markov kernel construction and application");
  kernel_cmd->require_subcommand(1);
  auto* kbuild = kernel_cmd->add_subcommand("build", "Row-normalize a plan into a kernel");
  kbuild->add_option("--plan", plan_path)->required();
  kbuild->add_option("--out", out_path);
  auto* kapply = kernel_cmd->add_subcommand("apply", "Push a measure through a kernel");
  kapply->add_option("--kernel", kernel_path)->required();
  kapply->add_option("--measure", measure_path)->required();
  kapply->add_flag("--signed", signed_apply, "Accept signed weights");
  kapply->add_option("--out", out_path);

  auto* ccm_cmd = app.add_subcommand("ccm", "c-cyclic monotonicity checks");
  ccm_cmd->require_subcommand(1);
  auto* ccheck = ccm_cmd->add_subcommand("check", "Check the support of a plan");
  ccheck->add_option("--plan", plan_path)->required();
  ccheck->add_option("--cost", cost_text);
  ccheck->add_flag("--complete", complete, "Check every cycle length (optimality certificate)");
  ccheck->add_option("--out", out_path);
  auto* ccompat = ccm_cmd->add_subcommand("compat", "Check two plans for c-CM compatibility");
  ccompat->add_option("--plan1", plan_path)->required();
  ccompat->add_option("--plan2", plan2_path)->required();
  ccompat->add_option("--cost", cost_text);
  ccompat->add_option("--out", out_path);

  auto* sig_cmd = app.add_subcommand("signature", "Signature of a 1D signed measure");
  sig_cmd->add_option("--measure", measure_path)->required();
  sig_cmd->add_option("--out", out_path);

  auto* connect_cmd = app.add_subcommand("connect", "Search for an optimal kernel sending a to b");
  connect_cmd->add_option("--a", a_path)->required();
  connect_cmd->add_option("--b", b_path)->required();
  connect_cmd->add_option("--cost", cost_text);
  connect_cmd->add_flag("--general", general, "Jordan-part plans and compatibility (any dimension)");
  connect_cmd->add_option("--out", out_path);

  auto* cost_cmd = app.add_subcommand("cost", "Plan cost, or the cost table between two measures");
  cost_cmd->add_option("--plan", plan_path);
  cost_cmd->add_option("--src", mu_path);
  cost_cmd->add_option("--tgt", nu_path);
  cost_cmd->add_option("--cost", cost_text);
  cost_cmd->add_option("--out", out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      if (dynamic_cast<const CLI::CallForVersion*>(&e)) {
        out << kVersion << "\n";
      } else {
        out << app.help();
      }
      return kOk;
    }
    err << "otk: " << e.what() << "\n\n" << app.help();
    return kUsageOrIoError;
  }

  try {
    const Sink sink(g, out, out_path);

    if (*solve_cmd) {
      const DiscreteMeasure mu = io::measure_from_json(io::read_json_file(mu_path));
      const DiscreteMeasure nu = io::measure_from_json(io::read_json_file(nu_path));
      const CostSpec spec = io::parse_cost_spec(cost_text);
      const CostTable table = build_cost_table(mu.points(), nu.points(), spec);
      const Coupling plan = solve(mu, nu, table);
      if (sink.csv()) {
        sink.text(io::plan_to_csv(plan));
      } else {
        sink.json_artifact(certified_plan(plan, table, g, certify));
      }
    } else if (*mono_cmd) {
      const DiscreteMeasure mu = io::measure_from_json(io::read_json_file(mu_path));
      const DiscreteMeasure nu = io::measure_from_json(io::read_json_file(nu_path));
      const Coupling plan = monotone_coupling(mu, nu);
      if (sink.csv()) {
        sink.text(io::plan_to_csv(plan));
      } else {
        const CostSpec spec = io::parse_cost_spec(cost_text);
        sink.json_artifact(certified_plan(
            plan, build_cost_table(plan.src_points(), plan.tgt_points(), spec), g, false));
      }
    } else if (*kbuild) {
      sink.require_json("kernel build");
      const Coupling plan = io::coupling_from_json(io::read_json_file(plan_path));
      sink.json_artifact(io::to_json(kernel_from_coupling(plan)));
    } else if (*kapply) {
      const TransportKernel k = io::kernel_from_json(io::read_json_file(kernel_path));
      const json mj = io::read_json_file(measure_path);
      const SignedDiscreteMeasure result =
          signed_apply ? apply_signed(k, io::signed_measure_from_json(mj))
                       : SignedDiscreteMeasure(apply(k, io::measure_from_json(mj)));
      if (sink.csv()) {
        sink.text(io::measure_to_csv(result));
      } else {
        json j = io::to_json(result);
        j["total_integral"] = result.total_integral();
        j["total_mass"] = result.total_mass();
        sink.json_artifact(j);
      }
    } else if (*ccheck) {
      sink.require_json("ccm check");
      const Coupling plan = io::coupling_from_json(io::read_json_file(plan_path));
      const CostSpec spec = io::parse_cost_spec(cost_text);
      const CostTable table = build_cost_table(plan.src_points(), plan.tgt_points(), spec);
      CcmReport report;
      if (complete) {
        report = verify_optimal(plan, table, ccm_options(g));
      } else {
        const std::vector<Cell> cells = plan.support_cells();
        const std::size_t len = g.max_cycle ? g.max_cycle : default_max_len(cells.size());
        report = is_ccm(cells, table, std::max<std::size_t>(len, 2), ccm_options(g));
      }
      sink.json_artifact(io::to_json(report));
    } else if (*ccompat) {
      sink.require_json("ccm compat");
      const Coupling p1 = io::coupling_from_json(io::read_json_file(plan_path));
      const Coupling p2 = io::coupling_from_json(io::read_json_file(plan2_path));
      const CostSpec spec = io::parse_cost_spec(cost_text);
      std::optional<std::size_t> len;
      if (g.max_cycle) len = g.max_cycle;
      json j;
      if (p1.src_points() == p2.src_points() && p1.tgt_points() == p2.tgt_points()) {
        const CostTable table = build_cost_table(p1.src_points(), p1.tgt_points(), spec);
        j = io::to_json(ccm_compatible(p1, p2, table, len, ccm_options(g)));
      } else {
        std::vector<Point> src, tgt;
        j = io::to_json(ccm_compatible(p1, p2, spec, len, ccm_options(g), &src, &tgt));
        j["src_points"] = src;
        j["tgt_points"] = tgt;
      }
      sink.json_artifact(j);
    } else if (*sig_cmd) {
      const SignedDiscreteMeasure a =
          io::signed_measure_from_json(io::read_json_file(measure_path));
      const Signature s = signature(a);
      if (sink.csv()) {
        sink.text(io::signature_to_csv(s));
      } else {
        sink.json_artifact(io::to_json(s));
      }
    } else if (*connect_cmd) {
      sink.require_json("connect");
      const SignedDiscreteMeasure a = io::signed_measure_from_json(io::read_json_file(a_path));
      const SignedDiscreteMeasure b = io::signed_measure_from_json(io::read_json_file(b_path));
      const CostSpec spec = io::parse_cost_spec(cost_text);
      ConnectOptions options;
      options.tol = g.tol;
      options.ccm = ccm_options(g);
      std::optional<std::size_t> len;
      if (g.max_cycle) len = g.max_cycle;
      const ConnectivityResult r =
          general ? connect_general(a, b, spec, len, options) : connect_1d(a, b, spec, options);
      json j = io::to_json(r);
      if (r.connected) j["cost"] = signed_transport_cost(r, spec);
      sink.json_artifact(j);
    } else if (*cost_cmd) {
      const CostSpec spec = io::parse_cost_spec(cost_text);
      if (!plan_path.empty()) {
        sink.require_json("cost --plan");
        const Coupling plan = io::coupling_from_json(io::read_json_file(plan_path));
        const double c =
            transport_cost(plan, build_cost_table(plan.src_points(), plan.tgt_points(), spec));
        sink.json_artifact(json{{"cost", c}});
      } else if (!mu_path.empty() && !nu_path.empty()) {
        const SignedDiscreteMeasure src = io::signed_measure_from_json(io::read_json_file(mu_path));
        const SignedDiscreteMeasure tgt = io::signed_measure_from_json(io::read_json_file(nu_path));
        const CostTable table = build_cost_table(src.points(), tgt.points(), spec);
        if (sink.csv()) {
          sink.text(io::table_to_csv(table));
        } else {
          sink.json_artifact(io::to_json(table));
        }
      } else {
        throw CLI::ValidationError("cost needs --plan, or both --src and --tgt");
      }
    }
  } catch (const CLI::Error& e) {
    err << "otk: " << e.what() << "\n";
    return kUsageOrIoError;
  } catch (const Error& e) {
    err << "otk: " << e.what() << "\n";
    return e.is_io() ? kUsageOrIoError : kDomainError;
  } catch (const std::exception& e) {
    err << "otk: internal error: " << e.what() << "\n";
    return kDomainError;
  }
  return kOk;
}

}  // namespace otk::cli
